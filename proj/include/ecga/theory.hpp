#pragma once

#include <cstddef>
#include <vector>

namespace ecga {

// Inputs to the closed-form scaling models. sigma_f_sq is the fitness
// variance of the problem; for an additively separable problem it equals
// m * sigma_bb_sq, which `from_bb_variance` applies for you. c_n and c_t are
// problem-dependent constants that scale only the absolute predictions; every
// ratio reported by the harness is independent of them.
struct TheoryInputs {
  double p_i = 0.0;         // inheritance probability
  std::size_t m = 1;        // building-block count
  std::size_t k = 1;        // building-block size
  double sigma_f_sq = 1.0;  // fitness variance
  double alpha = 0.05;      // acceptable failure probability
  double c_n = 1.0;         // population-sizing constant
  double c_t = 1.0;         // convergence-time constant

  static TheoryInputs from_bb_variance(std::size_t m, std::size_t k,
                                       double sigma_bb_sq, double p_i,
                                       double alpha, double c_n = 1.0,
                                       double c_t = 1.0);
};

// The noise-variance approximation underlying all ratios breaks down at high
// inheritance probability; outputs at or above this threshold should be
// treated as extrapolation.
inline constexpr double kValidityThreshold = 0.85;

bool beyond_validity(double p_i);

// sigma_N^2 = p_i * sigma_f^2: inherited fitnesses act as additive Gaussian
// noise whose variance grows linearly in p_i.
double inheritance_noise_variance(const TheoryInputs& inputs);

// -c_n * ln(alpha) * 2^k * sigma_f^2 * (1 + p_i)
double population_size(const TheoryInputs& inputs);

// population_size(p_i) / population_size(0) = 1 + p_i
double population_size_ratio(double p_i);

// c_t * sqrt(m * k) * sqrt(1 + p_i)
double convergence_time(const TheoryInputs& inputs);

// convergence_time(p_i) / convergence_time(0) = sqrt(1 + p_i)
double convergence_time_ratio(double p_i);

// n + n * (t_c - 1) * (1 - p_i): every first-generation member is evaluated,
// later members only with probability 1 - p_i.
double function_evaluations(double n, double t_c, double p_i);

// Evaluation-count ratio vs. p_i = 0. The exact form keeps the +n term of the
// evaluation count and therefore needs t_c at p_i = 0; the approximate form
// drops it: (1 + p_i)^1.5 * (1 - p_i).
double function_evaluation_ratio_exact(double p_i, double tc_at_zero);
double function_evaluation_ratio_approx(double p_i);

// 1 / function_evaluation_ratio_approx(p_i); +infinity at p_i = 1.
double speedup(double p_i);

// One grid point of every ratio, as emitted by the `theory` CLI subcommand.
struct TheoryRow {
  double p_i = 0.0;
  double n_ratio = 1.0;
  double tc_ratio = 1.0;
  double nfe_ratio_exact = 1.0;
  double nfe_ratio_approx = 1.0;
  double speedup = 1.0;
  bool beyond_validity = false;
};

// Evaluates every ratio over the grid; the exact evaluation ratio uses the
// model's own t_c at p_i = 0 from `base` (m, k, c_t).
std::vector<TheoryRow> theory_rows(const TheoryInputs& base,
                                   const std::vector<double>& pi_grid);

}  // namespace ecga
