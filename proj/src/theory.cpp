#include "ecga/theory.hpp"

#include <cmath>
#include <stdexcept>

namespace ecga {

namespace {

void validate(const TheoryInputs& inputs) {
  if (inputs.p_i < 0.0 || inputs.p_i > 1.0) {
    throw std::invalid_argument("theory: p_i must lie in [0, 1]");
  }
  if (inputs.m < 1 || inputs.k < 1) {
    throw std::invalid_argument("theory: m and k must be >= 1");
  }
  if (!(inputs.alpha > 0.0) || !(inputs.alpha < 1.0)) {
    throw std::invalid_argument("theory: alpha must lie in (0, 1)");
  }
  if (inputs.sigma_f_sq < 0.0) {
    throw std::invalid_argument("theory: variance must be >= 0");
  }
}

void validate_probability(double p_i) {
  if (p_i < 0.0 || p_i > 1.0) {
    throw std::invalid_argument("theory: p_i must lie in [0, 1]");
  }
}

}  // namespace

TheoryInputs TheoryInputs::from_bb_variance(std::size_t m, std::size_t k,
                                            double sigma_bb_sq, double p_i,
                                            double alpha, double c_n,
                                            double c_t) {
  TheoryInputs inputs;
  inputs.p_i = p_i;
  inputs.m = m;
  inputs.k = k;
  inputs.sigma_f_sq = static_cast<double>(m) * sigma_bb_sq;
  inputs.alpha = alpha;
  inputs.c_n = c_n;
  inputs.c_t = c_t;
  validate(inputs);
  return inputs;
}

bool beyond_validity(double p_i) { return p_i >= kValidityThreshold; }

double inheritance_noise_variance(const TheoryInputs& inputs) {
  validate(inputs);
  return inputs.p_i * inputs.sigma_f_sq;
}

double population_size(const TheoryInputs& inputs) {
  validate(inputs);
  return -inputs.c_n * std::log(inputs.alpha) *
         std::ldexp(1.0, static_cast<int>(inputs.k)) * inputs.sigma_f_sq *
         (1.0 + inputs.p_i);
}

double population_size_ratio(double p_i) {
  validate_probability(p_i);
  return 1.0 + p_i;
}

double convergence_time(const TheoryInputs& inputs) {
  validate(inputs);
  return inputs.c_t *
         std::sqrt(static_cast<double>(inputs.m) * static_cast<double>(inputs.k)) *
         std::sqrt(1.0 + inputs.p_i);
}

double convergence_time_ratio(double p_i) {
  validate_probability(p_i);
  return std::sqrt(1.0 + p_i);
}

double function_evaluations(double n, double t_c, double p_i) {
  validate_probability(p_i);
  return n + n * (t_c - 1.0) * (1.0 - p_i);
}

double function_evaluation_ratio_exact(double p_i, double tc_at_zero) {
  validate_probability(p_i);
  if (!(tc_at_zero > 0.0)) {
    throw std::invalid_argument("theory: t_c at p_i = 0 must be positive");
  }
  return population_size_ratio(p_i) *
         (convergence_time_ratio(p_i) * (1.0 - p_i) + p_i / tc_at_zero);
}

double function_evaluation_ratio_approx(double p_i) {
  validate_probability(p_i);
  return std::pow(1.0 + p_i, 1.5) * (1.0 - p_i);
}

double speedup(double p_i) {
  return 1.0 / function_evaluation_ratio_approx(p_i);
}

std::vector<TheoryRow> theory_rows(const TheoryInputs& base,
                                   const std::vector<double>& pi_grid) {
  TheoryInputs at_zero = base;
  at_zero.p_i = 0.0;
  const double tc0 = convergence_time(at_zero);

  std::vector<TheoryRow> rows;
  rows.reserve(pi_grid.size());
  for (double p : pi_grid) {
    TheoryRow row;
    row.p_i = p;
    row.n_ratio = population_size_ratio(p);
    row.tc_ratio = convergence_time_ratio(p);
    row.nfe_ratio_exact = function_evaluation_ratio_exact(p, tc0);
    row.nfe_ratio_approx = function_evaluation_ratio_approx(p);
    row.speedup = speedup(p);
    row.beyond_validity = beyond_validity(p);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace ecga
