#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ecga/rng.hpp"

namespace ecga {

/// Fixed-length binary string; every allele is 0 or 1 and the length never
/// changes after creation.
using Genotype = std::vector<std::uint8_t>;

/// How an individual's fitness value was obtained. Only Evaluated individuals
/// count toward the function-evaluation budget.
enum class Provenance : std::uint8_t { Unset, Evaluated, Inherited };

struct Individual {
  Genotype genotype;
  double fitness = 0.0;
  Provenance provenance = Provenance::Unset;
};

using Population = std::vector<Individual>;

/// Absolute tolerance under which two fitness values count as equal for the
/// convergence test. Inherited fitnesses are floating-point sums, so exact
/// comparison would be too strict on them.
inline constexpr double kFitnessEqualityTolerance = 1e-9;

/// n individuals of length `genotype_length`, each allele i.i.d. uniform over
/// {0,1}, all with Unset provenance. Throws std::invalid_argument when either
/// count is zero.
Population random_population(std::size_t population_size,
                             std::size_t genotype_length, Rng& rng);

/// True iff max and min fitness differ by at most kFitnessEqualityTolerance.
/// Throws std::invalid_argument if the population is empty or any member has
/// Unset provenance.
bool all_same_fitness(const Population& pop);

}  // namespace ecga
