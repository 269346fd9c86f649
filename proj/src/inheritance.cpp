#include "ecga/inheritance.hpp"

#include <stdexcept>

namespace ecga {

SchemaFitnessTable estimate_schema_fitness(const PartitionModel& model,
                                           const Population& parents) {
  std::vector<const Individual*> evaluated;
  evaluated.reserve(parents.size());
  double total = 0.0;
  for (const Individual& parent : parents) {
    if (parent.provenance == Provenance::Unset) {
      throw std::invalid_argument("estimate_schema_fitness: unscored parent");
    }
    if (parent.provenance == Provenance::Evaluated) {
      evaluated.push_back(&parent);
      total += parent.fitness;
    }
  }
  if (evaluated.empty()) {
    throw NoEvaluatedParents{};
  }

  SchemaFitnessTable table;
  table.groups = model.groups;
  table.n_evaluated = evaluated.size();
  table.evaluated_mean = total / static_cast<double>(evaluated.size());
  table.schema_fitness.resize(model.groups.size());
  std::vector<double> sums;
  std::vector<std::size_t> counts;
  for (std::size_t i = 0; i < model.groups.size(); ++i) {
    const auto& group = model.groups[i];
    const std::size_t configs = std::size_t{1} << group.size();
    sums.assign(configs, 0.0);
    counts.assign(configs, 0);
    for (const Individual* parent : evaluated) {
      const std::size_t cfg = group_configuration(group, parent->genotype);
      sums[cfg] += parent->fitness;
      ++counts[cfg];
    }
    auto& entries = table.schema_fitness[i];
    entries.assign(configs, 0.0);
    for (std::size_t j = 0; j < configs; ++j) {
      if (counts[j] > 0) {
        entries[j] = sums[j] / static_cast<double>(counts[j]) - table.evaluated_mean;
      }
    }
  }
  return table;
}

double inherited_fitness(const SchemaFitnessTable& table, const Genotype& g) {
  std::size_t length = 0;
  for (const auto& group : table.groups) {
    length += group.size();
  }
  if (length != g.size()) {
    throw std::invalid_argument("inherited_fitness: genotype length mismatch");
  }
  double fitness = table.evaluated_mean;
  for (std::size_t i = 0; i < table.groups.size(); ++i) {
    fitness += table.schema_fitness[i][group_configuration(table.groups[i], g)];
  }
  return fitness;
}

std::size_t assign_fitness(Population& offspring, const InheritanceConfig& cfg,
                           const SchemaFitnessTable* table,
                           const Evaluator& evaluate_fn, Rng& rng) {
  if (cfg.p_i < 0.0 || cfg.p_i > 1.0) {
    throw std::invalid_argument("assign_fitness: p_i must lie in [0, 1]");
  }
  if (table == nullptr && cfg.p_i > 0.0) {
    throw std::invalid_argument("assign_fitness: schema table required when p_i > 0");
  }
  for (const Individual& child : offspring) {
    if (child.provenance != Provenance::Unset) {
      throw std::invalid_argument("assign_fitness: offspring already scored");
    }
  }

  std::size_t evaluations = 0;
  std::bernoulli_distribution inherit(cfg.p_i);
  for (Individual& child : offspring) {
    // The degenerate probabilities skip the RNG entirely so that a p_i == 0
    // run is trace-identical to an engine without inheritance.
    const bool inherited =
        cfg.p_i >= 1.0 ? true : (cfg.p_i <= 0.0 ? false : inherit(rng));
    if (inherited) {
      child.fitness = inherited_fitness(*table, child.genotype);
      child.provenance = Provenance::Inherited;
    } else {
      child.fitness = evaluate_fn(child.genotype);
      child.provenance = Provenance::Evaluated;
      ++evaluations;
    }
  }
  return evaluations;
}

std::size_t assign_fitness(Population& offspring, const InheritanceConfig& cfg,
                           const SchemaFitnessTable* table,
                           const ProblemSpec& spec, Rng& rng) {
  return assign_fitness(
      offspring, cfg, table,
      [&spec](const Genotype& g) { return evaluate(spec, g); }, rng);
}

}  // namespace ecga
