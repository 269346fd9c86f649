#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "ecga/engine.hpp"
#include "ecga/harness.hpp"
#include "ecga/mpm.hpp"
#include "ecga/problems.hpp"
#include "ecga/rng.hpp"
#include "ecga/theory.hpp"

namespace {

constexpr std::uint64_t kShuffleStream = 0x5f0f71e;

struct Options {
  std::string problem = "trap";
  std::size_t len = 0;  // 0: from problem defaults
  std::size_t m = 0;
  std::size_t k = 0;
  std::size_t s = 0;
  double pi = 0.0;
  std::string pi_grid;  // comma/space separated; empty: default grid
  std::size_t trials = 50;
  std::uint64_t seed = 1;
  bool paper_scale = false;
  std::string out;
  int verbose = 0;
  std::size_t n = 0;
  std::size_t n_lo = 0;
  std::size_t n_hi = 0;
  std::size_t repeats = 30;
  std::size_t runs = 300;
  std::size_t threads = 0;
  bool shuffle = false;
  std::size_t max_gens = 0;
};

struct Resolved {
  ecga::ProblemSpec spec;
  std::size_t s = 0;
};

Resolved resolve_problem(const Options& o) {
  Resolved r;
  if (o.problem == "onemax") {
    if (o.m != 0 || o.k != 0) {
      throw std::invalid_argument("--m/--k apply to the trap problem only");
    }
    const std::size_t len = o.len != 0 ? o.len : (o.paper_scale ? 100 : 50);
    r.spec = ecga::onemax(len);
    r.s = o.s != 0 ? o.s : 4;
  } else if (o.problem == "trap") {
    const std::size_t k = o.k != 0 ? o.k : 4;
    std::size_t m = o.m;
    if (m == 0) {
      if (o.len != 0) {
        if (o.len % k != 0) {
          throw std::invalid_argument("--len must be a multiple of --k");
        }
        m = o.len / k;
      } else {
        m = o.paper_scale ? 10 : 5;
      }
    } else if (o.len != 0 && o.len != m * k) {
      throw std::invalid_argument("--len contradicts --m times --k");
    }
    r.spec = ecga::trap(m, k);
    r.s = o.s != 0 ? o.s : 8;
  } else {
    throw std::invalid_argument("--problem must be onemax or trap");
  }
  if (o.shuffle) {
    ecga::Rng rng(ecga::derive_seed(o.seed, kShuffleStream, 0));
    r.spec = ecga::shuffle_loci(r.spec, rng);
  }
  return r;
}

std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) {
    return {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95};
  }
  std::string cleaned = text;
  for (char& c : cleaned) {
    if (c == ',') {
      c = ' ';
    }
  }
  std::istringstream in(cleaned);
  std::vector<double> grid;
  double value = 0.0;
  while (in >> value) {
    grid.push_back(value);
  }
  if (!in.eof() || grid.empty()) {
    throw std::invalid_argument("--pi-grid: expected comma-separated numbers");
  }
  return grid;
}

std::size_t resolve_threads(std::size_t requested) {
  if (requested != 0) {
    return requested;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::string format_g(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int cmd_run(const Options& o) {
  if (o.n == 0) {
    throw std::invalid_argument("run requires --n (population size)");
  }
  const Resolved r = resolve_problem(o);
  ecga::RunConfig cfg;
  cfg.spec = r.spec;
  cfg.n = o.n;
  cfg.tournament_size = r.s;
  cfg.p_i = o.pi;
  cfg.max_generations = o.max_gens;
  cfg.seed = o.seed;

  ecga::GenerationObserver observer;
  if (o.verbose > 0) {
    const int level = o.verbose;
    observer = [level](const ecga::GenerationInfo& info) {
      std::ostringstream line;
      line << "gen " << info.generation << ": n'=" << info.table_n_evaluated
           << " evals=" << info.evaluated_offspring
           << " best=" << format_g(info.best_fitness)
           << " mean=" << format_g(info.mean_fitness) << " groups=[";
      for (std::size_t i = 0; i < info.model->groups.size(); ++i) {
        if (i > 0) {
          line << ' ';
        }
        line << info.model->groups[i].size();
      }
      line << ']';
      std::cerr << line.str() << '\n';
      if (level > 1) {
        ecga::dump_model(*info.model, std::cerr);
      }
    };
  }

  const ecga::RunStats stats = ecga::run_ecga(cfg, observer);
  std::cout << "problem=" << o.problem << " len=" << cfg.spec.length
            << " m=" << cfg.spec.block_count << " k=" << cfg.spec.block_size
            << " n=" << cfg.n << " s=" << cfg.tournament_size
            << " p_i=" << format_g(cfg.p_i) << " seed=" << cfg.seed << '\n';
  std::cout << "generations=" << stats.generations
            << " evaluations=" << stats.evaluations
            << " correct_bbs=" << stats.correct_bbs << "/" << cfg.spec.block_count
            << " converged=" << (stats.converged ? 1 : 0)
            << " success=" << (stats.success ? 1 : 0) << '\n';
  return 0;
}

int cmd_bisect(const Options& o) {
  const Resolved r = resolve_problem(o);
  ecga::BisectionConfig cfg;
  cfg.base.spec = r.spec;
  cfg.base.tournament_size = r.s;
  cfg.base.p_i = o.pi;
  cfg.base.max_generations = o.max_gens;
  cfg.runs_per_trial = o.trials;
  cfg.n_lo = o.n_lo;
  cfg.n_hi = o.n_hi;
  cfg.repeats = o.repeats;
  cfg.master_seed = o.seed;
  cfg.threads = resolve_threads(o.threads);

  const ecga::BisectionResult result = ecga::bisect_population_size(cfg);
  std::cout << "problem=" << o.problem << " len=" << r.spec.length
            << " s=" << r.s << " p_i=" << format_g(o.pi)
            << " target_failure=" << format_g(1.0 / static_cast<double>(
                                                  r.spec.block_count))
            << " trials=" << o.trials << " repeats=" << o.repeats << '\n';
  std::cout << "sizes:";
  for (std::size_t n : result.sizes) {
    std::cout << ' ' << n;
  }
  std::cout << '\n';
  std::cout << "n_min mean=" << format_g(result.mean_size)
            << " sd=" << format_g(result.sd_size) << '\n';
  return 0;
}

int cmd_sweep(const Options& o) {
  const Resolved r = resolve_problem(o);
  ecga::SweepConfig cfg;
  cfg.spec = r.spec;
  cfg.tournament_size = r.s;
  cfg.pi_grid = parse_grid(o.pi_grid);
  cfg.runs_per_trial = o.trials;
  cfg.bisection_repeats = o.repeats;
  cfg.eval_runs = o.runs;
  cfg.max_generations = o.max_gens;
  cfg.master_seed = o.seed;
  cfg.threads = resolve_threads(o.threads);

  const std::vector<ecga::SweepRow> rows = ecga::sweep_inheritance(cfg);
  if (o.out.empty()) {
    ecga::emit_csv(rows, nullptr, std::cout);
  } else {
    ecga::emit_csv(rows, nullptr, o.out);
    if (o.verbose > 0) {
      std::cerr << "wrote " << o.out << '\n';
    }
  }

  int failures = 0;
  for (const ecga::SweepRow& row : rows) {
    if (!row.ok) {
      std::cerr << "row p_i=" << format_g(row.p_i) << " failed: " << row.error
                << '\n';
      ++failures;
    }
  }
  return failures == 0 ? 0 : 2;
}

int cmd_theory(const Options& o) {
  const Resolved r = resolve_problem(o);
  ecga::TheoryInputs base;
  base.m = r.spec.block_count;
  base.k = r.spec.block_size;

  const std::vector<double> grid = parse_grid(o.pi_grid);
  const std::vector<ecga::TheoryRow> rows = ecga::theory_rows(base, grid);

  std::ostringstream csv;
  csv << "p_i,n_ratio,tc_ratio,nfe_ratio_exact,nfe_ratio_approx,speedup,"
         "validity_flag\n";
  for (const ecga::TheoryRow& row : rows) {
    csv << format_g(row.p_i) << ',' << format_g(row.n_ratio) << ','
        << format_g(row.tc_ratio) << ',' << format_g(row.nfe_ratio_exact)
        << ',' << format_g(row.nfe_ratio_approx) << ',' << format_g(row.speedup)
        << ',' << (row.beyond_validity ? 1 : 0) << '\n';
  }
  if (o.out.empty()) {
    std::cout << csv.str();
  } else {
    std::ofstream file(o.out);
    if (!file) {
      throw std::runtime_error("cannot open " + o.out);
    }
    file << csv.str();
    if (!file) {
      throw std::runtime_error("write failed for " + o.out);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"extended compact GA with building-block-wise fitness inheritance"};
  app.require_subcommand(1);
  app.fallthrough(true);

  Options o;
  app.set_config("--config", "", "flat key=value config file; flags override it");
  app.add_option("--problem", o.problem, "onemax or trap")
      ->capture_default_str();
  app.add_option("--len", o.len, "genome length (default 50, paper scale 100)");
  app.add_option("--m", o.m, "trap block count (default 5, paper scale 10)");
  app.add_option("--k", o.k, "trap block size (default 4)");
  app.add_option("--s", o.s, "tournament size (default: trap 8, onemax 4)");
  app.add_option("--pi", o.pi, "inheritance probability")->capture_default_str();
  app.add_option("--pi-grid", o.pi_grid,
                 "comma-separated p_i grid (default 0,0.1,...,0.9,0.95)");
  app.add_option("--trials", o.trials, "runs per bisection trial")
      ->capture_default_str();
  app.add_option("--seed", o.seed, "master seed")->capture_default_str();
  app.add_flag("--paper-scale", o.paper_scale,
               "use the full-size problems (100-bit onemax, 10x4 trap)");
  app.add_option("--out", o.out, "CSV output path (default stdout)");
  app.add_flag("-v,--verbose", o.verbose, "per-generation logging; repeat for more");
  app.add_option("--n", o.n, "population size (run)");
  app.add_option("--n-lo", o.n_lo, "bisection lower bound (default s)");
  app.add_option("--n-hi", o.n_hi, "bisection upper bound (default 8s)");
  app.add_option("--repeats", o.repeats, "bisection repeats")
      ->capture_default_str();
  app.add_option("--runs", o.runs, "measurement runs per sweep row")
      ->capture_default_str();
  app.add_option("--threads", o.threads, "worker threads (default: all cores)");
  app.add_flag("--shuffle-loci", o.shuffle,
               "shuffle locus positions with a seeded permutation");
  app.add_option("--max-gens", o.max_gens, "generation cap (default 10*len)");

  CLI::App* run = app.add_subcommand("run", "single run, prints the run stats");
  CLI::App* bisect =
      app.add_subcommand("bisect", "minimum population size by bisection");
  CLI::App* sweep =
      app.add_subcommand("sweep", "bisect and measure across a p_i grid");
  CLI::App* theory =
      app.add_subcommand("theory", "closed-form ratios over a p_i grid");
  for (CLI::App* sub : {run, bisect, sweep, theory}) {
    sub->fallthrough(true);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) {
      return cmd_run(o);
    }
    if (bisect->parsed()) {
      return cmd_bisect(o);
    }
    if (sweep->parsed()) {
      return cmd_sweep(o);
    }
    return cmd_theory(o);
  } catch (const ecga::BisectionUnreachable& e) {
    std::cerr << "experiment failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
