#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "ecga/genome.hpp"
#include "ecga/mpm.hpp"
#include "ecga/problems.hpp"
#include "ecga/rng.hpp"

namespace ecga {

struct RunConfig {
  ProblemSpec spec;
  std::size_t n = 0;                // population size; tournament_size | n
  std::size_t tournament_size = 2;  // s
  double p_i = 0.0;                 // inheritance probability
  std::size_t max_generations = 0;  // safety cap; 0 means 10 * length
  std::uint64_t seed = 0;
};

struct RunStats {
  std::size_t generations = 0;  // completed selection->sample cycles
  std::size_t evaluations = 0;  // true objective calls, including generation 0
  std::size_t correct_bbs = 0;  // blocks whose modal configuration is optimal
  bool converged = false;       // termination test passed before the cap
  bool success = false;         // converged with >= m - 1 correct blocks
  // evaluations_per_generation[0] == n (initialization); one entry per cycle
  // after that. Sums to `evaluations` exactly.
  std::vector<std::size_t> evaluations_per_generation;
};

// Snapshot passed to the observer after each offspring cycle. Pointers are
// valid only during the callback.
struct GenerationInfo {
  std::size_t generation = 0;  // 1-based cycle index
  const PartitionModel* model = nullptr;
  const Population* population = nullptr;  // post-replacement
  std::size_t evaluated_offspring = 0;     // true evaluations this cycle
  std::size_t table_n_evaluated = 0;       // n' behind the schema table (0 when p_i == 0)
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
};

using GenerationObserver = std::function<void(const GenerationInfo&)>;

// Generational eCGA with building-block-wise fitness inheritance. Each cycle:
// tournament selection, greedy model search over the pool, schema-fitness
// estimation from the evaluated members of the parent population, model
// sampling, probabilistic fitness assignment, full replacement. Estimating
// against the pre-selection population keeps absent-schema offspring valued
// at the population mean rather than the (selection-biased) pool mean, which
// would otherwise let unevaluated stragglers outcompete evaluated optima and
// stall the endgame. Stops when the population's fitnesses are all equal (see
// kFitnessEqualityTolerance) or the generation cap is reached. Identical
// RunConfig (including seed) => identical RunStats.
RunStats run_ecga(const RunConfig& cfg, const GenerationObserver& observer = {});

// Number of blocks (under the problem's true partition) whose modal
// configuration across the population equals the optimal block pattern. A tie
// for the modal configuration counts the block as incorrect.
std::size_t bb_convergence_count(const Population& pop, const ProblemSpec& spec);

}  // namespace ecga
