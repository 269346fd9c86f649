#include "ecga/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>
#include <utility>

#include "ecga/theory.hpp"

namespace ecga {

namespace {

// Phase tags folded into stream ids so that the bisection probes and the
// measurement runs of one sweep row never share seeds.
constexpr std::uint64_t kBisectionPhase = 0xb15ec710;
constexpr std::uint64_t kMeasurePhase = 0x3ea50e;

void parallel_for(std::size_t threads, std::size_t count,
                  const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      body(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) {
        return;
      }
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t workers = std::min(threads, count);
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back(work);
  }
  for (std::thread& t : pool) {
    t.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

double mean_of(const std::vector<double>& xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) /
         static_cast<double>(xs.size());
}

double sample_sd(const std::vector<double>& xs, double mean) {
  if (xs.size() < 2) {
    return 0.0;
  }
  double sum_sq = 0.0;
  for (double x : xs) {
    sum_sq += (x - mean) * (x - mean);
  }
  return std::sqrt(sum_sq / static_cast<double>(xs.size() - 1));
}

std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

double success_rate(RunConfig cfg, std::size_t trials,
                    std::uint64_t master_seed, std::uint64_t stream,
                    std::size_t threads) {
  if (trials == 0) {
    throw std::invalid_argument("success_rate: trials must be >= 1");
  }
  std::vector<char> success(trials, 0);
  parallel_for(threads, trials, [&](std::size_t t) {
    RunConfig trial = cfg;
    trial.seed = derive_seed(master_seed, stream, t);
    success[t] = run_ecga(trial).success ? 1 : 0;
  });
  const auto hits = std::count(success.begin(), success.end(), char{1});
  return static_cast<double>(hits) / static_cast<double>(trials);
}

std::size_t bisect_threshold(const SuccessPredicate& success_at,
                             std::size_t n_lo, std::size_t n_hi,
                             std::size_t multiple, double tolerance,
                             std::size_t cap) {
  if (multiple == 0) {
    throw std::invalid_argument("bisect_threshold: multiple must be >= 1");
  }
  if (!(tolerance >= 0.0)) {
    throw std::invalid_argument("bisect_threshold: tolerance must be >= 0");
  }
  const std::size_t cap_rounded = cap / multiple * multiple;
  n_lo = round_up_to_multiple(std::max<std::size_t>(n_lo, 1), multiple);
  n_hi = round_up_to_multiple(std::max(n_hi, n_lo), multiple);
  if (cap_rounded < n_lo) {
    throw BisectionUnreachable("bisect_threshold: size cap below the lower bound");
  }
  n_hi = std::min(n_hi, cap_rounded);

  if (success_at(n_lo)) {
    return n_lo;
  }
  while (!success_at(n_hi)) {
    if (n_hi >= cap_rounded) {
      throw BisectionUnreachable(
          "bisect_threshold: failure target not met by any size up to the cap");
    }
    n_lo = n_hi;
    n_hi = std::min(cap_rounded, n_hi * 2);
  }

  while (n_hi - n_lo > multiple &&
         static_cast<double>(n_hi - n_lo) >
             tolerance * static_cast<double>(n_hi)) {
    const std::size_t mid =
        round_up_to_multiple(n_lo + (n_hi - n_lo) / 2, multiple);
    if (mid <= n_lo || mid >= n_hi) {
      break;
    }
    if (success_at(mid)) {
      n_hi = mid;
    } else {
      n_lo = mid;
    }
  }
  return n_hi;
}

BisectionResult bisect_population_size(const BisectionConfig& cfg) {
  const std::size_t s = cfg.base.tournament_size;
  if (s < 2) {
    throw std::invalid_argument("bisect_population_size: tournament size must be >= 2");
  }
  if (cfg.runs_per_trial < 30) {
    throw std::invalid_argument("bisect_population_size: runs_per_trial must be >= 30");
  }
  if (cfg.repeats < 1) {
    throw std::invalid_argument("bisect_population_size: repeats must be >= 1");
  }
  double target = cfg.target_failure;
  if (target == 0.0) {
    if (cfg.base.spec.block_count == 0) {
      throw std::invalid_argument("bisect_population_size: problem has no blocks");
    }
    target = 1.0 / static_cast<double>(cfg.base.spec.block_count);
  }
  if (!(target > 0.0) || !(target < 1.0)) {
    throw std::invalid_argument("bisect_population_size: target failure must lie in (0, 1)");
  }
  const std::size_t n_lo = cfg.n_lo > 0 ? cfg.n_lo : s;
  const std::size_t n_hi = cfg.n_hi > 0 ? cfg.n_hi : 8 * s;

  BisectionResult result;
  result.sizes.reserve(cfg.repeats);
  for (std::size_t r = 0; r < cfg.repeats; ++r) {
    const std::uint64_t stream =
        compose_stream(compose_stream(cfg.stream, kBisectionPhase), r);
    auto success_at = [&](std::size_t n) {
      RunConfig probe = cfg.base;
      probe.n = n;
      const double rate =
          success_rate(probe, cfg.runs_per_trial, cfg.master_seed, stream,
                       cfg.threads);
      return 1.0 - rate <= target + 1e-12;
    };
    result.sizes.push_back(
        bisect_threshold(success_at, n_lo, n_hi, s, cfg.tolerance, cfg.n_cap));
  }

  std::vector<double> xs(result.sizes.begin(), result.sizes.end());
  result.mean_size = mean_of(xs);
  result.sd_size = sample_sd(xs, result.mean_size);
  return result;
}

std::vector<SweepRow> sweep_inheritance(const SweepConfig& cfg) {
  if (cfg.pi_grid.empty()) {
    throw std::invalid_argument("sweep_inheritance: empty p_i grid");
  }
  std::vector<double> grid = cfg.pi_grid;
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (double p : grid) {
    if (p < 0.0 || p > 1.0) {
      throw std::invalid_argument("sweep_inheritance: p_i must lie in [0, 1]");
    }
  }
  if (grid.front() != 0.0) {
    throw std::invalid_argument(
        "sweep_inheritance: grid must include p_i = 0, the ratio denominator");
  }
  if (cfg.eval_runs == 0) {
    throw std::invalid_argument("sweep_inheritance: eval_runs must be >= 1");
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<SweepRow> rows(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    SweepRow& row = rows[i];
    row.p_i = grid[i];
    const std::uint64_t row_stream = compose_stream(0, i);

    BisectionConfig bisect;
    bisect.base.spec = cfg.spec;
    bisect.base.tournament_size = cfg.tournament_size;
    bisect.base.p_i = grid[i];
    bisect.base.max_generations = cfg.max_generations;
    bisect.runs_per_trial = cfg.runs_per_trial;
    bisect.tolerance = cfg.bisection_tolerance;
    bisect.n_cap = cfg.n_cap;
    bisect.repeats = cfg.bisection_repeats;
    bisect.master_seed = cfg.master_seed;
    bisect.stream = row_stream;
    bisect.threads = cfg.threads;

    BisectionResult sizes;
    try {
      sizes = bisect_population_size(bisect);
    } catch (const BisectionUnreachable& e) {
      row.error = e.what();
      row.n_min = row.sd_n = row.tc = row.sd_tc = row.nfe = row.sd_nfe = nan;
      row.n_ratio = row.tc_ratio = row.nfe_ratio = row.speedup = nan;
      continue;
    }
    row.n_min = sizes.mean_size;
    row.sd_n = sizes.sd_size;
    row.measured_n = round_up_to_multiple(
        std::max<std::size_t>(
            static_cast<std::size_t>(std::ceil(sizes.mean_size)),
            cfg.tournament_size),
        cfg.tournament_size);

    RunConfig measure;
    measure.spec = cfg.spec;
    measure.n = row.measured_n;
    measure.tournament_size = cfg.tournament_size;
    measure.p_i = grid[i];
    measure.max_generations = cfg.max_generations;
    const std::uint64_t measure_stream =
        compose_stream(row_stream, kMeasurePhase);
    std::vector<RunStats> stats(cfg.eval_runs);
    parallel_for(cfg.threads, cfg.eval_runs, [&](std::size_t j) {
      RunConfig trial = measure;
      trial.seed = derive_seed(cfg.master_seed, measure_stream, j);
      stats[j] = run_ecga(trial);
    });

    std::vector<double> tcs;
    std::vector<double> nfes;
    tcs.reserve(stats.size());
    nfes.reserve(stats.size());
    for (const RunStats& st : stats) {
      if (!st.converged) {
        ++row.excluded_runs;
        continue;
      }
      tcs.push_back(static_cast<double>(st.generations));
      nfes.push_back(static_cast<double>(st.evaluations));
    }
    if (tcs.empty()) {
      row.error = "every measurement run hit the generation cap";
      row.tc = row.sd_tc = row.nfe = row.sd_nfe = nan;
      row.n_ratio = row.tc_ratio = row.nfe_ratio = row.speedup = nan;
      continue;
    }
    row.tc = mean_of(tcs);
    row.sd_tc = sample_sd(tcs, row.tc);
    row.nfe = mean_of(nfes);
    row.sd_nfe = sample_sd(nfes, row.nfe);
    row.ok = true;
  }

  const SweepRow& base = rows.front();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    SweepRow& row = rows[i];
    if (!row.ok) {
      continue;
    }
    if (!base.ok) {
      row.n_ratio = row.tc_ratio = row.nfe_ratio = row.speedup = nan;
      continue;
    }
    if (i == 0) {
      row.n_ratio = row.tc_ratio = row.nfe_ratio = row.speedup = 1.0;
      continue;
    }
    row.n_ratio = row.n_min / base.n_min;
    row.tc_ratio = row.tc / base.tc;
    row.nfe_ratio = row.nfe / base.nfe;
    row.speedup = base.nfe / row.nfe;
  }
  return rows;
}

TheoryOverlay default_theory_overlay(const std::vector<SweepRow>& rows) {
  TheoryOverlay overlay;
  overlay.n_ratio.reserve(rows.size());
  overlay.tc_ratio.reserve(rows.size());
  overlay.nfe_ratio.reserve(rows.size());
  overlay.speedup.reserve(rows.size());
  for (const SweepRow& row : rows) {
    overlay.n_ratio.push_back(population_size_ratio(row.p_i));
    overlay.tc_ratio.push_back(convergence_time_ratio(row.p_i));
    overlay.nfe_ratio.push_back(function_evaluation_ratio_approx(row.p_i));
    overlay.speedup.push_back(speedup(row.p_i));
  }
  return overlay;
}

void emit_csv(const std::vector<SweepRow>& rows, const TheoryOverlay* overlay,
              std::ostream& os) {
  if (rows.empty()) {
    throw std::invalid_argument("emit_csv: no rows");
  }
  TheoryOverlay local;
  if (overlay == nullptr) {
    local = default_theory_overlay(rows);
    overlay = &local;
  } else if (overlay->n_ratio.size() != rows.size() ||
             overlay->tc_ratio.size() != rows.size() ||
             overlay->nfe_ratio.size() != rows.size() ||
             overlay->speedup.size() != rows.size()) {
    throw std::invalid_argument("emit_csv: overlay size mismatch");
  }

  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return rows[a].p_i < rows[b].p_i;
  });

  os << "p_i,n_min,n_ratio,n_ratio_theory,tc,tc_ratio,tc_ratio_theory,"
        "nfe,nfe_ratio,nfe_ratio_theory,speedup,speedup_theory,"
        "sd_n,sd_tc,sd_nfe\n";
  for (std::size_t idx : order) {
    const SweepRow& r = rows[idx];
    os << format_g(r.p_i) << ',' << format_g(r.n_min) << ','
       << format_g(r.n_ratio) << ',' << format_g(overlay->n_ratio[idx]) << ','
       << format_g(r.tc) << ',' << format_g(r.tc_ratio) << ','
       << format_g(overlay->tc_ratio[idx]) << ',' << format_g(r.nfe) << ','
       << format_g(r.nfe_ratio) << ',' << format_g(overlay->nfe_ratio[idx])
       << ',' << format_g(r.speedup) << ',' << format_g(overlay->speedup[idx])
       << ',' << format_g(r.sd_n) << ',' << format_g(r.sd_tc) << ','
       << format_g(r.sd_nfe) << '\n';
  }
  if (!os) {
    throw std::runtime_error("emit_csv: write failed");
  }
}

void emit_csv(const std::vector<SweepRow>& rows, const TheoryOverlay* overlay,
              const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("emit_csv: cannot open " + path);
  }
  emit_csv(rows, overlay, out);
  out.flush();
  if (!out) {
    throw std::runtime_error("emit_csv: write failed for " + path);
  }
}

}  // namespace ecga
