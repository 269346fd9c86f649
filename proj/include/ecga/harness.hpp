#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "ecga/engine.hpp"
#include "ecga/rng.hpp"

namespace ecga {

// Raised when the auto-doubling phase of a bisection hits the size cap
// without ever meeting the failure target. The CLI maps it to exit code 2.
struct BisectionUnreachable : std::runtime_error {
  explicit BisectionUnreachable(const std::string& what)
      : std::runtime_error(what) {}
};

inline std::size_t round_up_to_multiple(std::size_t value,
                                        std::size_t multiple) {
  return (value + multiple - 1) / multiple * multiple;
}

// Fraction of `trials` independent runs ending in success (converged with at
// least m - 1 correct blocks). Trial t runs with seed
// derive_seed(master_seed, stream, t); the result is therefore identical for
// any thread count.
double success_rate(RunConfig cfg, std::size_t trials,
                    std::uint64_t master_seed, std::uint64_t stream = 0,
                    std::size_t threads = 1);

using SuccessPredicate = std::function<bool(std::size_t)>;

// Smallest size (rounded up to `multiple`) at which `success_at` holds,
// assuming it is monotone. n_hi is doubled until it succeeds, up to `cap`;
// exhaustion throws BisectionUnreachable. The search stops once the bracket
// width is at most `multiple` or `tolerance` relative to the upper end.
std::size_t bisect_threshold(const SuccessPredicate& success_at,
                             std::size_t n_lo, std::size_t n_hi,
                             std::size_t multiple, double tolerance,
                             std::size_t cap);

struct BisectionConfig {
  RunConfig base;  // n and seed are ignored; everything else is the template
  std::size_t runs_per_trial = 50;  // 30-100
  double target_failure = 0.0;      // 0 means 1/m from the problem
  std::size_t n_lo = 0;             // 0 means the tournament size
  std::size_t n_hi = 0;             // 0 means 8x the tournament size
  double tolerance = 0.05;          // relative bracket width
  std::size_t n_cap = std::size_t{1} << 18;
  std::size_t repeats = 30;  // independent bisection repeats to average
  std::uint64_t master_seed = 0;
  std::uint64_t stream = 0;
  std::size_t threads = 1;
};

struct BisectionResult {
  double mean_size = 0.0;
  double sd_size = 0.0;  // sample standard deviation over repeats
  std::vector<std::size_t> sizes;
};

// Repeatedly bisects for the smallest population whose failure probability is
// at most target_failure, each repeat with its own seed stream, and averages.
BisectionResult bisect_population_size(const BisectionConfig& cfg);

struct SweepConfig {
  ProblemSpec spec;
  std::size_t tournament_size = 2;
  std::vector<double> pi_grid;  // must include 0, the ratio denominator
  std::size_t runs_per_trial = 50;
  std::size_t bisection_repeats = 30;
  std::size_t eval_runs = 300;  // t_c / n_fe measurement runs per row
  std::size_t max_generations = 0;
  double bisection_tolerance = 0.05;
  std::size_t n_cap = std::size_t{1} << 18;
  std::uint64_t master_seed = 0;
  std::size_t threads = 1;
};

struct SweepRow {
  double p_i = 0.0;
  bool ok = false;
  std::string error;  // set when this row's bisection failed
  double n_min = 0.0;        // mean bisected size over repeats
  double sd_n = 0.0;
  std::size_t measured_n = 0;  // n_min rounded up to a tournament multiple
  double tc = 0.0;             // mean generations, cap-hit runs excluded
  double sd_tc = 0.0;
  double nfe = 0.0;  // mean true evaluations, cap-hit runs excluded
  double sd_nfe = 0.0;
  std::size_t excluded_runs = 0;  // cap-hit measurement runs
  // Ratios against the p_i = 0 row; exactly 1 on that row itself.
  double n_ratio = 0.0;
  double tc_ratio = 0.0;
  double nfe_ratio = 0.0;
  double speedup = 0.0;  // nfe(0) / nfe(p_i)
};

// For each grid point: bisect the minimum population size, then measure mean
// convergence time and evaluation count at that size. A failed bisection
// marks its row and the sweep continues.
std::vector<SweepRow> sweep_inheritance(const SweepConfig& cfg);

// Model-ratio columns for the CSV, aligned with the row order.
struct TheoryOverlay {
  std::vector<double> n_ratio;
  std::vector<double> tc_ratio;
  std::vector<double> nfe_ratio;
  std::vector<double> speedup;
};

// Overlay computed from the closed-form ratios on the rows' own grid.
TheoryOverlay default_theory_overlay(const std::vector<SweepRow>& rows);

// Writes rows in ascending p_i with six significant digits under the header
// p_i,n_min,n_ratio,n_ratio_theory,tc,tc_ratio,tc_ratio_theory,nfe,nfe_ratio,
// nfe_ratio_theory,speedup,speedup_theory,sd_n,sd_tc,sd_nfe. A null overlay
// selects default_theory_overlay.
void emit_csv(const std::vector<SweepRow>& rows, const TheoryOverlay* overlay,
              std::ostream& os);
void emit_csv(const std::vector<SweepRow>& rows, const TheoryOverlay* overlay,
              const std::string& path);

}  // namespace ecga
