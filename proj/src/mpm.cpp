#include "ecga/mpm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace ecga {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

void validate_partition(const Partition& groups, std::size_t length) {
  std::vector<char> seen(length, 0);
  std::size_t total = 0;
  for (const auto& group : groups) {
    if (group.empty()) {
      throw std::invalid_argument("partition contains an empty group");
    }
    for (std::size_t locus : group) {
      if (locus >= length || seen[locus]) {
        throw std::invalid_argument("groups must form a partition of the loci");
      }
      seen[locus] = 1;
      ++total;
    }
  }
  if (total != length) {
    throw std::invalid_argument("groups must cover every locus");
  }
}

Partition normalized(const Partition& groups) {
  Partition out = groups;
  for (auto& group : out) {
    std::sort(group.begin(), group.end());
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

double entropy_bits(const std::vector<std::uint32_t>& counts, std::size_t n) {
  const double dn = static_cast<double>(n);
  double h = 0.0;
  for (std::uint32_t c : counts) {
    if (c > 0) {
      const double p = static_cast<double>(c) / dn;
      h -= p * std::log2(p);
    }
  }
  return h;
}

}  // namespace

std::size_t group_configuration(const std::vector<std::size_t>& loci,
                                const Genotype& g) {
  std::size_t cfg = 0;
  for (std::size_t locus : loci) {
    cfg = (cfg << 1) | g[locus];
  }
  return cfg;
}

PartitionModel marginal_frequencies(const Partition& groups,
                                    const Population& pop) {
  if (pop.empty()) {
    throw std::invalid_argument("marginal_frequencies: empty population");
  }
  const std::size_t length = pop.front().genotype.size();
  validate_partition(groups, length);

  PartitionModel model;
  model.groups = normalized(groups);
  model.marginals.resize(model.groups.size());
  const double dn = static_cast<double>(pop.size());
  for (std::size_t i = 0; i < model.groups.size(); ++i) {
    const auto& group = model.groups[i];
    std::vector<std::uint32_t> counts(std::size_t{1} << group.size(), 0);
    for (const Individual& ind : pop) {
      ++counts[group_configuration(group, ind.genotype)];
    }
    auto& table = model.marginals[i];
    table.resize(counts.size());
    for (std::size_t j = 0; j < counts.size(); ++j) {
      table[j] = static_cast<double>(counts[j]) / dn;
    }
  }
  return model;
}

double model_complexity(const Partition& groups, std::size_t n) {
  if (n < 2) {
    throw std::invalid_argument("model_complexity: population size must be >= 2");
  }
  double independent_frequencies = 0.0;
  for (const auto& group : groups) {
    independent_frequencies += std::ldexp(1.0, static_cast<int>(group.size())) - 1.0;
  }
  return std::log2(static_cast<double>(n)) * independent_frequencies;
}

double compressed_population_complexity(const PartitionModel& model,
                                        std::size_t n) {
  double bits_per_member = 0.0;
  for (const auto& table : model.marginals) {
    for (double p : table) {
      if (p > 0.0) {
        bits_per_member -= p * std::log2(p);
      }
    }
  }
  return static_cast<double>(n) * bits_per_member;
}

std::optional<MdlScore> combined_complexity(const Partition& groups,
                                            const Population& pop) {
  if (pop.empty()) {
    throw std::invalid_argument("combined_complexity: empty population");
  }
  const std::size_t n = pop.size();
  for (const auto& group : groups) {
    if (group.size() >= 64 || (std::size_t{1} << group.size()) > n) {
      return std::nullopt;  // finite-population constraint
    }
  }
  PartitionModel model = marginal_frequencies(groups, pop);
  MdlScore score;
  score.model_bits = model_complexity(model.groups, n);
  score.population_bits = compressed_population_complexity(model, n);
  score.combined = score.model_bits + score.population_bits;
  return score;
}

PartitionModel greedy_model_search(const Population& selected,
                                   ModelSearchTrace* trace) {
  const std::size_t n = selected.size();
  if (n == 0) {
    throw std::invalid_argument("greedy_model_search: empty population");
  }
  if (n < 2) {
    throw std::invalid_argument("greedy_model_search: need at least two individuals");
  }
  const std::size_t length = selected.front().genotype.size();
  for (const Individual& ind : selected) {
    if (ind.genotype.size() != length) {
      throw std::invalid_argument("greedy_model_search: mixed genotype lengths");
    }
  }

  const double log2n = std::log2(static_cast<double>(n));

  // One slot per initial locus; a merge folds slot b into slot a and marks b
  // dead, so slot ids stay stable and the candidate cache can be reused.
  struct Slot {
    std::vector<std::size_t> loci;     // order matches the config bit layout
    std::vector<std::uint32_t> cfg;    // per-individual configuration
    double contribution = 0.0;         // this group's share of C_m + C_p
    std::size_t leader = 0;            // smallest locus, used for tie-breaks
    bool alive = true;
  };

  std::vector<Slot> slots(length);
  std::vector<std::uint32_t> count_buffer;

  double score = 0.0;
  for (std::size_t i = 0; i < length; ++i) {
    Slot& slot = slots[i];
    slot.loci = {i};
    slot.leader = i;
    slot.cfg.resize(n);
    std::uint32_t ones = 0;
    for (std::size_t r = 0; r < n; ++r) {
      slot.cfg[r] = selected[r].genotype[i];
      ones += slot.cfg[r];
    }
    count_buffer.assign({static_cast<std::uint32_t>(n) - ones, ones});
    slot.contribution = log2n + static_cast<double>(n) * entropy_bits(count_buffer, n);
    score += slot.contribution;
  }
  if (trace) {
    trace->scores.assign(1, score);
  }

  // Contribution a pair would have after merging, or +inf when the merged
  // group would break 2^k <= n. Entropy does not depend on how the merged
  // configurations are labeled, so the concatenated bit layout is fine even
  // when the two loci ranges interleave.
  auto merged_contribution = [&](const Slot& a, const Slot& b) {
    const std::size_t k = a.loci.size() + b.loci.size();
    if (k >= 64 || (std::size_t{1} << k) > n) {
      return kInfinity;
    }
    const std::size_t kb = b.loci.size();
    count_buffer.assign(std::size_t{1} << k, 0);
    for (std::size_t r = 0; r < n; ++r) {
      ++count_buffer[(a.cfg[r] << kb) | b.cfg[r]];
    }
    const double table_entries = std::ldexp(1.0, static_cast<int>(k)) - 1.0;
    return log2n * table_entries +
           static_cast<double>(n) * entropy_bits(count_buffer, n);
  };

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> cache(length * length, nan);  // upper-triangular by slot id
  auto cache_at = [&](std::size_t a, std::size_t b) -> double& {
    return cache[std::min(a, b) * length + std::max(a, b)];
  };

  std::vector<std::size_t> alive;
  alive.reserve(length);

  for (;;) {
    alive.clear();
    for (std::size_t i = 0; i < length; ++i) {
      if (slots[i].alive) {
        alive.push_back(i);
      }
    }
    std::sort(alive.begin(), alive.end(), [&](std::size_t a, std::size_t b) {
      return slots[a].leader < slots[b].leader;
    });

    // Best merge under the deterministic order: lowest resulting score first,
    // then smaller merged group, then smallest leader pair.
    bool found = false;
    double best_delta = kInfinity;
    std::size_t best_size = 0, best_a = 0, best_b = 0;
    for (std::size_t ia = 0; ia + 1 < alive.size(); ++ia) {
      for (std::size_t ib = ia + 1; ib < alive.size(); ++ib) {
        const std::size_t a = alive[ia];
        const std::size_t b = alive[ib];
        double& cached = cache_at(a, b);
        if (std::isnan(cached)) {
          cached = merged_contribution(slots[a], slots[b]);
        }
        if (cached == kInfinity) {
          continue;
        }
        const double delta =
            cached - slots[a].contribution - slots[b].contribution;
        const std::size_t merged_size = slots[a].loci.size() + slots[b].loci.size();
        if (!found || delta < best_delta ||
            (delta == best_delta && merged_size < best_size)) {
          found = true;
          best_delta = delta;
          best_size = merged_size;
          best_a = a;
          best_b = b;
        }
      }
    }

    if (!found || best_delta >= 0.0) {
      break;  // no strictly improving merge
    }

    Slot& a = slots[best_a];
    Slot& b = slots[best_b];
    const std::size_t kb = b.loci.size();
    for (std::size_t r = 0; r < n; ++r) {
      a.cfg[r] = (a.cfg[r] << kb) | b.cfg[r];
    }
    a.loci.insert(a.loci.end(), b.loci.begin(), b.loci.end());
    a.leader = std::min(a.leader, b.leader);
    a.contribution = cache_at(best_a, best_b);
    b.alive = false;
    b.cfg.clear();
    b.cfg.shrink_to_fit();
    score += best_delta;
    if (trace) {
      trace->scores.push_back(score);
    }
    for (std::size_t i = 0; i < length; ++i) {
      cache_at(best_a, i) = nan;
      cache_at(best_b, i) = nan;
    }
  }

  Partition partition;
  for (const Slot& slot : slots) {
    if (slot.alive) {
      partition.push_back(slot.loci);
    }
  }
  return marginal_frequencies(partition, selected);
}

Population sample_offspring(const PartitionModel& model, std::size_t n,
                            Rng& rng) {
  if (model.groups.empty() || model.groups.size() != model.marginals.size()) {
    throw std::invalid_argument("sample_offspring: malformed model");
  }
  std::size_t length = 0;
  for (const auto& group : model.groups) {
    length += group.size();
  }

  std::vector<std::vector<double>> cumulative(model.groups.size());
  for (std::size_t i = 0; i < model.groups.size(); ++i) {
    const auto& table = model.marginals[i];
    if (table.size() != std::size_t{1} << model.groups[i].size()) {
      throw std::invalid_argument("sample_offspring: marginal table size mismatch");
    }
    auto& cum = cumulative[i];
    cum.resize(table.size());
    double running = 0.0;
    for (std::size_t j = 0; j < table.size(); ++j) {
      running += table[j];
      cum[j] = running;
    }
  }

  Population offspring(n);
  for (Individual& child : offspring) {
    child.genotype.assign(length, 0);
    for (std::size_t i = 0; i < model.groups.size(); ++i) {
      const auto& cum = cumulative[i];
      std::uniform_real_distribution<double> unit(0.0, cum.back());
      const double u = unit(rng);
      const std::size_t cfg = static_cast<std::size_t>(
          std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
      const auto& loci = model.groups[i];
      const std::size_t k = loci.size();
      for (std::size_t j = 0; j < k; ++j) {
        child.genotype[loci[j]] =
            static_cast<std::uint8_t>((cfg >> (k - 1 - j)) & 1u);
      }
    }
  }
  return offspring;
}

void dump_model(const PartitionModel& model, std::ostream& os) {
  for (std::size_t i = 0; i < model.groups.size(); ++i) {
    os << '[';
    for (std::size_t j = 0; j < model.groups[i].size(); ++j) {
      if (j > 0) {
        os << ' ';
      }
      os << model.groups[i][j];
    }
    os << "] p =";
    for (double p : model.marginals[i]) {
      os << ' ' << p;
    }
    os << '\n';
  }
}

}  // namespace ecga
