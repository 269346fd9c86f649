#include "ecga/genome.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace ecga {

Population random_population(std::size_t population_size,
                             std::size_t genotype_length, Rng& rng) {
  if (population_size == 0) {
    throw std::invalid_argument("random_population: population size must be >= 1");
  }
  if (genotype_length == 0) {
    throw std::invalid_argument("random_population: genotype length must be >= 1");
  }
  std::uniform_int_distribution<int> bit(0, 1);
  Population pop(population_size);
  for (Individual& ind : pop) {
    ind.genotype.resize(genotype_length);
    for (std::uint8_t& allele : ind.genotype) {
      allele = static_cast<std::uint8_t>(bit(rng));
    }
  }
  return pop;
}

bool all_same_fitness(const Population& pop) {
  if (pop.empty()) {
    throw std::invalid_argument("all_same_fitness: empty population");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const Individual& ind : pop) {
    if (ind.provenance == Provenance::Unset) {
      throw std::invalid_argument("all_same_fitness: individual without a fitness");
    }
    lo = std::min(lo, ind.fitness);
    hi = std::max(hi, ind.fitness);
  }
  return hi - lo <= kFitnessEqualityTolerance;
}

}  // namespace ecga
