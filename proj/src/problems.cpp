#include "ecga/problems.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ecga {

namespace {

double trap_contribution(std::size_t block_size, std::size_t ones) {
  if (ones == block_size) {
    return static_cast<double>(block_size);
  }
  return static_cast<double>(block_size - 1 - ones);
}

}  // namespace

ProblemSpec onemax(std::size_t length) {
  if (length == 0) {
    throw std::invalid_argument("onemax: length must be >= 1");
  }
  ProblemSpec spec;
  spec.kind = ProblemKind::OneMax;
  spec.length = length;
  spec.block_size = 1;
  spec.block_count = length;
  spec.true_partition.resize(length);
  for (std::size_t i = 0; i < length; ++i) {
    spec.true_partition[i] = {i};
  }
  spec.optimal_block_pattern = {1};
  spec.optimum_fitness = static_cast<double>(length);
  return spec;
}

ProblemSpec trap(std::size_t block_count, std::size_t block_size) {
  if (block_count == 0 || block_size == 0) {
    throw std::invalid_argument("trap: block count and size must be >= 1");
  }
  ProblemSpec spec;
  spec.kind = ProblemKind::Trap;
  spec.length = block_count * block_size;
  spec.block_size = block_size;
  spec.block_count = block_count;
  spec.true_partition.resize(block_count);
  for (std::size_t b = 0; b < block_count; ++b) {
    spec.true_partition[b].resize(block_size);
    std::iota(spec.true_partition[b].begin(), spec.true_partition[b].end(),
              b * block_size);
  }
  spec.optimal_block_pattern.assign(block_size, 1);
  spec.optimum_fitness = static_cast<double>(block_count * block_size);
  return spec;
}

ProblemSpec shuffle_loci(const ProblemSpec& spec, Rng& rng) {
  std::vector<std::size_t> perm(spec.length);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  ProblemSpec shuffled = spec;
  std::size_t next = 0;
  for (auto& group : shuffled.true_partition) {
    for (auto& locus : group) {
      locus = perm[next++];
    }
    std::sort(group.begin(), group.end());
  }
  return shuffled;
}

double evaluate(const ProblemSpec& spec, const Genotype& g) {
  if (g.size() != spec.length) {
    throw std::invalid_argument("evaluate: genotype length does not match the problem");
  }
  if (spec.kind == ProblemKind::OneMax) {
    std::size_t ones = 0;
    for (std::uint8_t allele : g) {
      ones += allele;
    }
    return static_cast<double>(ones);
  }
  double total = 0.0;
  for (const auto& group : spec.true_partition) {
    std::size_t ones = 0;
    for (std::size_t locus : group) {
      ones += g[locus];
    }
    total += trap_contribution(spec.block_size, ones);
  }
  return total;
}

bool block_is_optimal(const ProblemSpec& spec, const Genotype& g,
                      std::size_t block_index) {
  if (block_index >= spec.block_count) {
    throw std::out_of_range("block_is_optimal: block index out of range");
  }
  if (g.size() != spec.length) {
    throw std::invalid_argument("block_is_optimal: genotype length mismatch");
  }
  const auto& group = spec.true_partition[block_index];
  for (std::size_t j = 0; j < group.size(); ++j) {
    if (g[group[j]] != spec.optimal_block_pattern[j]) {
      return false;
    }
  }
  return true;
}

}  // namespace ecga
