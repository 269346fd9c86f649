#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ecga/genome.hpp"
#include "ecga/mpm.hpp"
#include "ecga/problems.hpp"
#include "ecga/rng.hpp"

namespace ecga {

// Per-group, per-configuration schema fitnesses estimated from the evaluated
// members of the parent pool, expressed as deviations from the evaluated mean.
// Configurations absent from the evaluated pool carry fitness exactly 0.
struct SchemaFitnessTable {
  Partition groups;
  std::vector<std::vector<double>> schema_fitness;
  double evaluated_mean = 0.0;
  std::size_t n_evaluated = 0;
};

struct InheritanceConfig {
  double p_i = 0.0;  // probability of an offspring receiving inherited fitness
};

// Raised when a schema table is requested but the pool holds no evaluated
// individuals; the engine reacts by reusing its first-generation table.
struct NoEvaluatedParents : std::runtime_error {
  NoEvaluatedParents() : std::runtime_error("no evaluated parents in pool") {}
};

using Evaluator = std::function<double(const Genotype&)>;

// Estimates schema fitnesses for every configuration of every model group
// using only parents with provenance Evaluated. Throws NoEvaluatedParents
// when the pool contains none.
SchemaFitnessTable estimate_schema_fitness(const PartitionModel& model,
                                           const Population& parents);

// Evaluated mean plus the sum, over groups, of the table entry matching g's
// configuration on that group.
double inherited_fitness(const SchemaFitnessTable& table, const Genotype& g);

// Scores each offspring in place: with probability p_i the fitness is
// inherited from the table (provenance Inherited), otherwise the evaluator is
// called (provenance Evaluated). Returns the number of true evaluations.
// `table` may be null only when p_i == 0. At p_i == 0 and p_i == 1 no
// Bernoulli draws are made, so a p_i == 0 run leaves the RNG stream exactly
// as a plain eCGA would.
std::size_t assign_fitness(Population& offspring, const InheritanceConfig& cfg,
                           const SchemaFitnessTable* table,
                           const Evaluator& evaluate_fn, Rng& rng);

std::size_t assign_fitness(Population& offspring, const InheritanceConfig& cfg,
                           const SchemaFitnessTable* table,
                           const ProblemSpec& spec, Rng& rng);

}  // namespace ecga
