#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ecga/genome.hpp"

namespace ecga {

/// Disjoint locus-index groups covering 0..l-1. Loci within a group are kept
/// sorted ascending; groups are ordered by their smallest locus.
using Partition = std::vector<std::vector<std::size_t>>;

/// Marginal product model: a partition of the loci together with one joint
/// frequency table per group. Configuration j of a group reads the group's
/// loci (ascending) as a binary number, first locus most significant, so
/// 00..0 is configuration 0 and 11..1 is configuration 2^k - 1.
struct PartitionModel {
  Partition groups;
  std::vector<std::vector<double>> marginals;  // marginals[i].size() == 2^k_i
};

/// Minimum-description-length score of a candidate model, in bits.
struct MdlScore {
  double model_bits = 0.0;       // storage cost of the marginal tables
  double population_bits = 0.0;  // entropy cost of the population under the model
  double combined = 0.0;
};

/// Configuration index of `g` restricted to `loci` (ascending order assumed).
std::size_t group_configuration(const std::vector<std::size_t>& loci,
                                const Genotype& g);

/// Empirical joint frequencies of each group over the population.
/// Throws std::invalid_argument for an empty population or when the groups do
/// not partition the loci.
PartitionModel marginal_frequencies(const Partition& groups,
                                    const Population& pop);

/// log2(n) * sum_i (2^k_i - 1): bits needed to store all marginal tables.
/// Throws std::invalid_argument for n < 2.
double model_complexity(const Partition& groups, std::size_t n);

/// n * sum_i sum_j -p_ij log2(p_ij), with 0 log 0 taken as 0.
double compressed_population_complexity(const PartitionModel& model,
                                        std::size_t n);

/// Both complexities for `groups` scored against `pop` (n = pop size).
/// Returns nullopt when any group violates the finite-population constraint
/// 2^k <= n; precondition violations (empty population, bad partition, n < 2)
/// throw instead.
std::optional<MdlScore> combined_complexity(const Partition& groups,
                                            const Population& pop);

/// Combined scores of the accepted models, starting with the univariate one.
struct ModelSearchTrace {
  std::vector<double> scores;
};

/// Greedy MDL model search: start from the univariate partition, repeatedly
/// score every pairwise group merge and apply the best one as long as it
/// strictly lowers the combined complexity. Merges that would violate
/// 2^k <= n are never applied. Equal-scoring merges are resolved toward the
/// smaller resulting group, then toward the lexicographically smallest pair
/// of group leaders, so the search is deterministic.
PartitionModel greedy_model_search(const Population& selected,
                                   ModelSearchTrace* trace = nullptr);

/// n offspring sampled group-by-group from the model's marginals, provenance
/// Unset. Configurations with zero frequency are never produced.
Population sample_offspring(const PartitionModel& model, std::size_t n,
                            Rng& rng);

/// One line per group: sorted loci followed by the marginal table.
void dump_model(const PartitionModel& model, std::ostream& os);

}  // namespace ecga
