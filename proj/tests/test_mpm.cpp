#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "ecga/mpm.hpp"
#include "test_util.hpp"

using namespace ecga;
using ecga::test::bits;

namespace {

Population population_of(const std::vector<std::string>& strings) {
  Population pop;
  pop.reserve(strings.size());
  for (const std::string& s : strings) {
    Individual i;
    i.genotype = bits(s);
    pop.push_back(i);
  }
  return pop;
}

// 64 members: loci {0,1} split evenly between 00 and 11, locus 2 fair and
// independent. The exact scores of every 3-locus partition are small
// closed-form numbers, which makes this the canonical search oracle.
Population correlated_pair_population() {
  std::vector<std::string> strings;
  for (int i = 0; i < 64; ++i) {
    std::string s = i < 32 ? "00" : "11";
    s += (i % 2 == 0) ? '0' : '1';
    strings.push_back(s);
  }
  return population_of(strings);
}

// Reference greedy search built only from the public scoring operation,
// replaying the same frontier with the same tie-break order.
Partition reference_greedy(const Population& pop) {
  const std::size_t length = pop.front().genotype.size();
  Partition current;
  for (std::size_t i = 0; i < length; ++i) {
    current.push_back({i});
  }
  double score = combined_complexity(current, pop)->combined;

  for (;;) {
    bool found = false;
    double best_delta = 0.0;
    std::size_t best_size = 0;
    Partition best_partition;
    for (std::size_t a = 0; a + 1 < current.size(); ++a) {
      for (std::size_t b = a + 1; b < current.size(); ++b) {
        Partition candidate;
        std::vector<std::size_t> merged = current[a];
        merged.insert(merged.end(), current[b].begin(), current[b].end());
        std::sort(merged.begin(), merged.end());
        for (std::size_t i = 0; i < current.size(); ++i) {
          if (i == a) {
            candidate.push_back(merged);
          } else if (i != b) {
            candidate.push_back(current[i]);
          }
        }
        const auto candidate_score = combined_complexity(candidate, pop);
        if (!candidate_score) {
          continue;
        }
        const double delta = candidate_score->combined - score;
        const bool better =
            !found || delta < best_delta ||
            (delta == best_delta && merged.size() < best_size);
        if (better) {
          found = true;
          best_delta = delta;
          best_size = merged.size();
          best_partition = candidate;
        }
      }
    }
    if (!found || best_delta >= 0.0) {
      return current;
    }
    current = best_partition;
    std::sort(current.begin(), current.end(),
              [](const auto& x, const auto& y) { return x.front() < y.front(); });
    score += best_delta;
  }
}

Population random_genotypes(std::size_t n, std::size_t length, Rng& rng) {
  Population pop(n);
  std::uniform_int_distribution<int> bit(0, 1);
  for (Individual& i : pop) {
    i.genotype.resize(length);
    for (auto& allele : i.genotype) {
      allele = static_cast<std::uint8_t>(bit(rng));
    }
  }
  return pop;
}

}  // namespace

TEST_CASE("group configurations read the loci as a binary number") {
  const Genotype g = bits("011");
  CHECK(group_configuration({0, 1, 2}, g) == 3);
  CHECK(group_configuration({0}, g) == 0);
  CHECK(group_configuration({1}, g) == 1);
  CHECK(group_configuration({0, 2}, g) == 1);
  CHECK(group_configuration({0, 1}, bits("110")) == 3);
  CHECK(group_configuration({0, 1}, bits("100")) == 2);
}

TEST_CASE("marginal frequencies count configurations") {
  const Population uniform = population_of({"00", "01", "10", "11"});
  const PartitionModel independent =
      marginal_frequencies({{0}, {1}}, uniform);
  REQUIRE(independent.groups.size() == 2);
  CHECK(independent.marginals[0][0] == 0.5);
  CHECK(independent.marginals[0][1] == 0.5);
  CHECK(independent.marginals[1][0] == 0.5);
  CHECK(independent.marginals[1][1] == 0.5);

  const Population correlated = population_of({"11", "11", "00", "00"});
  const PartitionModel joint = marginal_frequencies({{0, 1}}, correlated);
  REQUIRE(joint.marginals[0].size() == 4);
  CHECK(joint.marginals[0][0] == 0.5);
  CHECK(joint.marginals[0][1] == 0.0);
  CHECK(joint.marginals[0][2] == 0.0);
  CHECK(joint.marginals[0][3] == 0.5);

  const Population degenerate = population_of({"101", "101", "101"});
  const PartitionModel point = marginal_frequencies({{0, 1, 2}}, degenerate);
  CHECK(point.marginals[0][5] == 1.0);
  int nonzero = 0;
  for (double p : point.marginals[0]) {
    nonzero += p != 0.0 ? 1 : 0;
  }
  CHECK(nonzero == 1);
}

TEST_CASE("marginal tables always sum to one") {
  Rng rng(3);
  const Population pop = random_genotypes(50, 6, rng);
  const PartitionModel model =
      marginal_frequencies({{0, 3}, {1}, {2, 4, 5}}, pop);
  for (const auto& table : model.marginals) {
    double total = 0.0;
    for (double p : table) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
      total += p;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("marginal_frequencies normalizes group order") {
  const Population pop = population_of({"10", "10", "01", "11"});
  const PartitionModel model = marginal_frequencies({{1, 0}}, pop);
  REQUIRE(model.groups.size() == 1);
  CHECK(model.groups[0] == std::vector<std::size_t>{0, 1});
  CHECK(model.marginals[0][2] == 0.5);  // "10" under ascending-locus indexing
}

TEST_CASE("marginal_frequencies validates the partition and population") {
  const Population pop = population_of({"01", "10"});
  CHECK_THROWS_AS(marginal_frequencies({{0}}, pop), std::invalid_argument);
  CHECK_THROWS_AS(marginal_frequencies({{0}, {0, 1}}, pop),
                  std::invalid_argument);
  CHECK_THROWS_AS(marginal_frequencies({{0}, {}, {1}}, pop),
                  std::invalid_argument);
  CHECK_THROWS_AS(marginal_frequencies({{0}, {2}}, pop), std::invalid_argument);
  CHECK_THROWS_AS(marginal_frequencies({{0}, {1}}, Population{}),
                  std::invalid_argument);
}

TEST_CASE("model complexity of the worked partition") {
  CHECK(model_complexity({{0, 2}, {1}, {3}}, 16) == 20.0);
  CHECK(model_complexity({{0}}, 16) == 4.0);
  CHECK_THROWS_AS(model_complexity({{0}}, 1), std::invalid_argument);
}

TEST_CASE("merging always raises model complexity") {
  const double split = model_complexity({{0}, {1}, {2}}, 32);
  const double merged = model_complexity({{0, 1}, {2}}, 32);
  CHECK(merged > split);
}

TEST_CASE("compressed population complexity is the scaled entropy") {
  const Population fair = population_of(
      {"0", "0", "0", "0", "0", "0", "0", "0", "1", "1", "1", "1", "1", "1",
       "1", "1"});
  const PartitionModel model = marginal_frequencies({{0}}, fair);
  CHECK(compressed_population_complexity(model, 16) == 16.0);

  const Population converged = population_of({"1", "1", "1", "1"});
  const PartitionModel point = marginal_frequencies({{0}}, converged);
  CHECK(compressed_population_complexity(point, 4) == 0.0);

  const Population correlated = population_of({"11", "11", "00", "00"});
  const PartitionModel independent =
      marginal_frequencies({{0}, {1}}, correlated);
  CHECK(compressed_population_complexity(independent, 4) == 8.0);
  const PartitionModel joint = marginal_frequencies({{0, 1}}, correlated);
  CHECK(compressed_population_complexity(joint, 4) == 4.0);
}

TEST_CASE("combined complexity composes both costs and enforces the size cap") {
  const Population correlated = population_of({"11", "11", "00", "00"});
  const auto score = combined_complexity({{0, 1}}, correlated);
  REQUIRE(score.has_value());
  CHECK(score->model_bits == 6.0);  // log2(4) * 3
  CHECK(score->population_bits == 4.0);
  CHECK(score->combined == 10.0);

  // A five-locus joint group would need 32 configurations from 16 members.
  std::vector<std::string> wide(16, "11111");
  const auto rejected = combined_complexity({{0, 1, 2, 3, 4}},
                                            population_of(wide));
  CHECK_FALSE(rejected.has_value());

  const auto allowed =
      combined_complexity({{0, 1, 2, 3}, {4}}, population_of(wide));
  REQUIRE(allowed.has_value());
  CHECK(allowed->population_bits == 0.0);
  CHECK(allowed->combined == allowed->model_bits);
}

TEST_CASE("greedy search on one locus returns the only partition") {
  const Population pop = population_of({"0", "1", "1", "0"});
  const PartitionModel model = greedy_model_search(pop);
  REQUIRE(model.groups.size() == 1);
  CHECK(model.groups[0] == std::vector<std::size_t>{0});
}

TEST_CASE("greedy search merges the correlated pair and leaves the fair bit") {
  ModelSearchTrace trace;
  const PartitionModel model =
      greedy_model_search(correlated_pair_population(), &trace);
  REQUIRE(model.groups.size() == 2);
  CHECK(model.groups[0] == std::vector<std::size_t>{0, 1});
  CHECK(model.groups[1] == std::vector<std::size_t>{2});
  REQUIRE(trace.scores.size() == 2);
  CHECK(trace.scores[0] == 210.0);
  CHECK(trace.scores[1] == 152.0);
  CHECK(model.marginals[0][0] == 0.5);
  CHECK(model.marginals[0][3] == 0.5);
}

TEST_CASE("independent fair bits usually stay univariate and never get worse") {
  Rng rng(11);
  int univariate_runs = 0;
  for (int round = 0; round < 20; ++round) {
    const Population pop = random_genotypes(64, 4, rng);
    ModelSearchTrace trace;
    const PartitionModel model = greedy_model_search(pop, &trace);
    for (std::size_t i = 1; i < trace.scores.size(); ++i) {
      CHECK(trace.scores[i] < trace.scores[i - 1]);
    }
    const double univariate_score =
        combined_complexity({{0}, {1}, {2}, {3}}, pop)->combined;
    // The incremental search and the one-shot scorer sum the same terms in
    // different orders, so allow a last-ulp difference.
    CHECK(trace.scores.back() <= univariate_score + 1e-9);
    univariate_runs += model.groups.size() == 4 ? 1 : 0;
  }
  CHECK(univariate_runs >= 15);
}

TEST_CASE("greedy search matches a brute-force frontier replay") {
  Rng rng(17);
  for (int round = 0; round < 50; ++round) {
    const Population pop = random_genotypes(24, 5, rng);
    const PartitionModel model = greedy_model_search(pop);
    const Partition expected = reference_greedy(pop);

    const double model_score =
        combined_complexity(model.groups, pop)->combined;
    const double expected_score = combined_complexity(expected, pop)->combined;
    CHECK(model_score <= expected_score + 1e-9);
    CHECK(model_score >= expected_score - 1e-9);

    for (const auto& group : model.groups) {
      CHECK((std::size_t{1} << group.size()) <= pop.size());
    }
  }
}

TEST_CASE("greedy search validates its input") {
  CHECK_THROWS_AS(greedy_model_search(Population{}), std::invalid_argument);
  CHECK_THROWS_AS(greedy_model_search(population_of({"01"})),
                  std::invalid_argument);
  Population ragged = population_of({"01", "10"});
  ragged[1].genotype.pop_back();
  CHECK_THROWS_AS(greedy_model_search(ragged), std::invalid_argument);
}

TEST_CASE("sampling a deterministic model copies the implied string") {
  const Population pop = population_of({"101", "101"});
  const PartitionModel model = marginal_frequencies({{0, 1}, {2}}, pop);
  Rng rng(23);
  const Population offspring = sample_offspring(model, 10, rng);
  REQUIRE(offspring.size() == 10);
  for (const Individual& child : offspring) {
    CHECK(child.genotype == bits("101"));
    CHECK(child.provenance == Provenance::Unset);
    CHECK(child.fitness == 0.0);
  }
}

TEST_CASE("sampling preserves joint configurations") {
  const Population pop = population_of({"11", "11", "00", "00"});
  const PartitionModel model = marginal_frequencies({{0, 1}}, pop);
  Rng rng(29);
  const Population offspring = sample_offspring(model, 2000, rng);
  for (const Individual& child : offspring) {
    const bool valid =
        child.genotype == bits("00") || child.genotype == bits("11");
    CHECK(valid);
  }
}

TEST_CASE("sampled configuration frequencies pass a goodness-of-fit test") {
  PartitionModel model;
  model.groups = {{0, 1}, {2}};
  model.marginals = {{0.1, 0.2, 0.3, 0.4}, {0.25, 0.75}};
  Rng rng(31);
  const std::size_t n = 10000;
  const Population offspring = sample_offspring(model, n, rng);

  std::vector<std::size_t> pair_counts(4, 0);
  std::vector<std::size_t> bit_counts(2, 0);
  for (const Individual& child : offspring) {
    ++pair_counts[group_configuration({0, 1}, child.genotype)];
    ++bit_counts[group_configuration({2}, child.genotype)];
  }

  double chi_pair = 0.0;
  for (std::size_t j = 0; j < 4; ++j) {
    const double expected = model.marginals[0][j] * n;
    chi_pair += (pair_counts[j] - expected) * (pair_counts[j] - expected) /
                expected;
  }
  CHECK(chi_pair < 16.266236);  // 0.001 critical value, 3 degrees of freedom

  double chi_bit = 0.0;
  for (std::size_t j = 0; j < 2; ++j) {
    const double expected = model.marginals[1][j] * n;
    chi_bit += (bit_counts[j] - expected) * (bit_counts[j] - expected) /
               expected;
  }
  CHECK(chi_bit < 10.827566);  // 0.001 critical value, 1 degree of freedom
}

TEST_CASE("sampling is reproducible and validates the model") {
  const Population pop = population_of({"01", "10", "11", "00"});
  const PartitionModel model = marginal_frequencies({{0}, {1}}, pop);
  Rng a(37);
  Rng b(37);
  const Population first = sample_offspring(model, 50, a);
  const Population second = sample_offspring(model, 50, b);
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].genotype == second[i].genotype);
  }

  PartitionModel malformed = model;
  malformed.marginals.pop_back();
  Rng rng(1);
  CHECK_THROWS_AS(sample_offspring(malformed, 5, rng), std::invalid_argument);
  PartitionModel wrong_table = model;
  wrong_table.marginals[0] = {0.5, 0.25, 0.25};
  CHECK_THROWS_AS(sample_offspring(wrong_table, 5, rng), std::invalid_argument);
}

TEST_CASE("model dump lists sorted loci with their tables") {
  const Population pop = population_of({"11", "11", "00", "00"});
  const PartitionModel model = marginal_frequencies({{0, 1}}, pop);
  std::ostringstream out;
  dump_model(model, out);
  CHECK(out.str() == "[0 1] p = 0.5 0 0 0.5\n");
}
