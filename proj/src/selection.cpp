#include "ecga/selection.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ecga {

Population tournament_select(const Population& pop, const SelectionConfig& cfg,
                             Rng& rng) {
  const std::size_t n = pop.size();
  const std::size_t s = cfg.tournament_size;
  if (s < 2) {
    throw std::invalid_argument("tournament_select: tournament size must be >= 2");
  }
  if (n == 0 || n % s != 0) {
    throw std::invalid_argument(
        "tournament_select: tournament size must divide the population size");
  }
  for (const Individual& ind : pop) {
    if (ind.provenance == Provenance::Unset) {
      throw std::invalid_argument("tournament_select: individual without a fitness");
    }
  }

  Population selected;
  selected.reserve(n);
  std::vector<std::size_t> order(n);
  std::vector<std::size_t> tied;
  for (std::size_t pass = 0; pass < s; ++pass) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n; start += s) {
      tied.clear();
      double best = pop[order[start]].fitness;
      tied.push_back(order[start]);
      for (std::size_t j = 1; j < s; ++j) {
        const std::size_t idx = order[start + j];
        const double f = pop[idx].fitness;
        if (f > best) {
          best = f;
          tied.clear();
          tied.push_back(idx);
        } else if (f == best) {
          tied.push_back(idx);
        }
      }
      std::size_t winner = tied.front();
      if (tied.size() > 1) {
        std::uniform_int_distribution<std::size_t> pick(0, tied.size() - 1);
        winner = tied[pick(rng)];
      }
      selected.push_back(pop[winner]);
    }
  }
  return selected;
}

}  // namespace ecga
