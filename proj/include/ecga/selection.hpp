#pragma once

#include <cstddef>

#include "ecga/genome.hpp"

namespace ecga {

struct SelectionConfig {
  std::size_t tournament_size = 2;  // s >= 2; must divide the population size
};

/// Tournament selection without replacement: s passes, each shuffling the
/// population, splitting it into n/s disjoint groups of s and copying each
/// group's fittest member into the mating pool. Ties are broken uniformly at
/// random. Every individual therefore enters exactly one tournament per pass,
/// and the pool has the same size n as the input.
///
/// Throws std::invalid_argument when s < 2, s does not divide n, or any
/// member lacks a fitness.
Population tournament_select(const Population& pop, const SelectionConfig& cfg,
                             Rng& rng);

}  // namespace ecga
