#pragma once

#include <cstddef>
#include <vector>

#include "ecga/genome.hpp"

namespace ecga {

enum class ProblemKind { OneMax, Trap };

/// An additively separable test problem with known block structure and known
/// optimum. `true_partition` is ground truth for verification only; the search
/// path never reads it.
struct ProblemSpec {
  ProblemKind kind = ProblemKind::OneMax;
  std::size_t length = 0;       // number of loci
  std::size_t block_size = 0;   // k (1 for OneMax)
  std::size_t block_count = 0;  // m, with m * k == length
  std::vector<std::vector<std::size_t>> true_partition;
  std::vector<std::uint8_t> optimal_block_pattern;
  double optimum_fitness = 0.0;
};

/// Count-of-ones problem: k = 1, m = length, optimal pattern = 1.
ProblemSpec onemax(std::size_t length);

/// Concatenation of `block_count` fully deceptive traps of size `block_size`:
/// a block of u ones scores block_size when u == block_size and
/// block_size - 1 - u otherwise, so every partial solution slopes away from
/// the optimum.
ProblemSpec trap(std::size_t block_count, std::size_t block_size);

/// Redistributes loci over blocks via a random permutation. Fitness structure
/// is unchanged; only the indices move, so linkage discovery cannot rely on
/// adjacency.
ProblemSpec shuffle_loci(const ProblemSpec& spec, Rng& rng);

/// Throws std::invalid_argument on length mismatch.
double evaluate(const ProblemSpec& spec, const Genotype& g);

/// True iff g carries the optimal pattern on block `block_index`.
/// Throws std::out_of_range for block_index >= block_count.
bool block_is_optimal(const ProblemSpec& spec, const Genotype& g,
                      std::size_t block_index);

}  // namespace ecga
