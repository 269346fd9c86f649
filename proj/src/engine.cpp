#include "ecga/engine.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>

#include "ecga/inheritance.hpp"
#include "ecga/selection.hpp"

namespace ecga {

namespace {

void validate(const RunConfig& cfg) {
  if (cfg.spec.length == 0) {
    throw std::invalid_argument("run_ecga: problem has zero length");
  }
  if (cfg.n < 2) {
    throw std::invalid_argument("run_ecga: population size must be >= 2");
  }
  if (cfg.tournament_size < 2 || cfg.n % cfg.tournament_size != 0) {
    throw std::invalid_argument(
        "run_ecga: tournament size must be >= 2 and divide the population size");
  }
  if (cfg.p_i < 0.0 || cfg.p_i > 1.0) {
    throw std::invalid_argument("run_ecga: p_i must lie in [0, 1]");
  }
}

}  // namespace

RunStats run_ecga(const RunConfig& cfg, const GenerationObserver& observer) {
  validate(cfg);
  const std::size_t max_generations =
      cfg.max_generations > 0 ? cfg.max_generations : 10 * cfg.spec.length;

  Rng rng(cfg.seed);
  Population pop = random_population(cfg.n, cfg.spec.length, rng);
  for (Individual& ind : pop) {
    ind.fitness = evaluate(cfg.spec, ind.genotype);
    ind.provenance = Provenance::Evaluated;
  }

  RunStats stats;
  stats.evaluations = cfg.n;
  stats.evaluations_per_generation.push_back(cfg.n);

  const SelectionConfig selection{cfg.tournament_size};
  const InheritanceConfig inheritance{cfg.p_i};
  std::optional<SchemaFitnessTable> first_table;

  while (stats.generations < max_generations && !all_same_fitness(pop)) {
    Population selected = tournament_select(pop, selection, rng);
    PartitionModel model = greedy_model_search(selected);

    std::optional<SchemaFitnessTable> table;
    if (cfg.p_i > 0.0) {
      try {
        table = estimate_schema_fitness(model, pop);
      } catch (const NoEvaluatedParents&) {
        // Possible only at p_i == 1 after the first cycle; fall back to the
        // first generation's table, which always exists because the initial
        // population is fully evaluated.
        table = first_table;
      }
      if (!first_table) {
        first_table = table;
      }
    }

    Population offspring = sample_offspring(model, cfg.n, rng);
    const std::size_t evals = assign_fitness(
        offspring, inheritance, table ? &*table : nullptr, cfg.spec, rng);
    pop = std::move(offspring);
    ++stats.generations;
    stats.evaluations += evals;
    stats.evaluations_per_generation.push_back(evals);

    if (observer) {
      GenerationInfo info;
      info.generation = stats.generations;
      info.model = &model;
      info.population = &pop;
      info.evaluated_offspring = evals;
      info.table_n_evaluated = table ? table->n_evaluated : 0;
      double best = pop.front().fitness;
      double total = 0.0;
      for (const Individual& ind : pop) {
        best = std::max(best, ind.fitness);
        total += ind.fitness;
      }
      info.best_fitness = best;
      info.mean_fitness = total / static_cast<double>(pop.size());
      observer(info);
    }
  }

  stats.converged = all_same_fitness(pop);
  stats.correct_bbs = bb_convergence_count(pop, cfg.spec);
  stats.success =
      stats.converged && stats.correct_bbs + 1 >= cfg.spec.block_count;
  return stats;
}

std::size_t bb_convergence_count(const Population& pop,
                                 const ProblemSpec& spec) {
  if (pop.empty()) {
    throw std::invalid_argument("bb_convergence_count: empty population");
  }
  std::size_t correct = 0;
  std::vector<std::size_t> counts;
  for (const auto& block : spec.true_partition) {
    counts.assign(std::size_t{1} << block.size(), 0);
    for (const Individual& ind : pop) {
      ++counts[group_configuration(block, ind.genotype)];
    }
    const auto modal = std::max_element(counts.begin(), counts.end());
    if (std::count(counts.begin(), counts.end(), *modal) > 1) {
      continue;  // no unique modal configuration: conservatively incorrect
    }
    std::size_t optimal_cfg = 0;
    for (std::uint8_t bit : spec.optimal_block_pattern) {
      optimal_cfg = (optimal_cfg << 1) | bit;
    }
    if (static_cast<std::size_t>(modal - counts.begin()) == optimal_cfg) {
      ++correct;
    }
  }
  return correct;
}

}  // namespace ecga
