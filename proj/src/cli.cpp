#include "grades/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "grades/grades.hpp"
#include "grades/io.hpp"

namespace grades::cli {
namespace {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void usage_check(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

// Maps the library's error types onto exit codes.
template <typename F>
int guarded(std::ostream& err, const char* command, F&& body) {
  try {
    return body();
  } catch (const io::IoError& e) {
    err << command << ": " << e.what() << "\n";
    return kIo;
  } catch (const BudgetExceeded& e) {
    err << command << ": " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << command << ": " << e.what() << "\n";
    return kUsage;
  } catch (const io::FormatError& e) {
    err << command << ": invalid input: " << e.what() << "\n";
    return kUsage;
  } catch (const ContractViolation& e) {
    err << command << ": " << e.what() << "\n";
    return kUsage;
  } catch (const ConditionError& e) {
    err << command << ": " << e.what() << "\n";
    return kUsage;
  }
}

AmplitudeDist amplitude_from(const std::string& name) {
  if (name == "pm1") return AmplitudeDist::PlusMinusOne;
  if (name == "normal") return AmplitudeDist::StandardNormal;
  throw UsageError("unknown amplitude distribution '" + name + "' (expected pm1 or normal)");
}

io::InstanceRecord generate(Index m, Index n, Index s, std::uint64_t seed,
                            const std::string& ensemble, const std::string& amplitude) {
  usage_check(m >= 1 && n >= 1, "m and n must be positive");
  usage_check(s >= 1 && s <= n, "s must satisfy 1 <= s <= n (got s = " + std::to_string(s) +
                                    ", n = " + std::to_string(n) + ")");
  io::GenerationInfo info{ensemble, amplitude, seed, seed, derive_seed(seed, 1)};
  MeasurementMatrix<double> phi;
  if (ensemble == "gaussian") {
    phi = gen_gaussian_matrix(m, n, info.matrix_seed);
  } else if (ensemble == "identity") {
    usage_check(m == n, "the identity ensemble needs m == n");
    phi = MeasurementMatrix<double>::Identity(n, n);
  } else {
    throw UsageError("unknown ensemble '" + ensemble + "' (expected gaussian or identity)");
  }
  auto truth = gen_sparse_signal(n, s, info.signal_seed, amplitude_from(amplitude));
  return io::InstanceRecord{make_instance(std::move(phi), std::move(truth), s), info};
}

std::optional<double> recovery_error(const ProblemInstance<double>& instance,
                                     const Signal<double>& x) {
  if (!instance.truth()) return std::nullopt;
  return (x - *instance.truth()).norm();
}

std::string optional_text(const std::optional<std::uint64_t>& v) {
  return v ? std::to_string(*v) : std::string("n/a");
}

}  // namespace

int cmd_gen(const GenArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, "gen", [&] {
    const auto record = generate(args.m, args.n, args.s, args.seed, args.ensemble,
                                 args.amplitude);
    io::write_text_file(args.out_path, io::dump(io::to_json(record)));
    out << "wrote " << args.m << "x" << args.n << " instance (s = " << args.s
        << ", seed = " << args.seed << ") to " << args.out_path << "\n";
    return kOk;
  });
}

int cmd_rip(const RipArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, "rip", [&] {
    const auto record = io::read_instance(args.instance_path);
    const auto& inst = record.instance;
    usage_check(args.level || inst.sparsity(),
                "instance has no sparsity; pass --level explicitly");
    const Index level = args.level ? *args.level : 2 * *inst.sparsity();
    usage_check(level >= 1 && level <= inst.cols(),
                "level " + std::to_string(level) + " out of range for " +
                    std::to_string(inst.cols()) + " columns");
    usage_check(args.reference_eps > 0, "reference eps must be positive");

    std::optional<RipBounds<double>> bounds;
    if (args.mode == "exact") {
      bounds = exact_rip_bounds(inst.phi(), level, ExactOptions{args.max_supports, args.workers});
    } else if (args.mode == "sampled") {
      usage_check(args.trials >= 1, "--trials must be at least 1");
      bounds = sampled_rip_bounds(inst.phi(), level, args.trials, args.seed, args.workers);
    } else {
      throw UsageError("unknown mode '" + args.mode + "' (expected exact or sampled)");
    }

    const auto report =
        io::make_bounds_record(*bounds, inst.y().squaredNorm(), args.reference_eps);
    io::write_text_file(args.out_path, io::dump(io::to_json(report)));

    out << "mode: " << args.mode << (bounds->is_exact() ? "" : " (inner estimate, not certified)")
        << "\n"
        << "level: " << level << "\n"
        << "alpha: " << io::format_double(bounds->alpha()) << "\n"
        << "beta: " << io::format_double(bounds->beta()) << "\n"
        << "delta: " << io::format_double(report.delta) << "\n"
        << "condition_ok: " << (report.condition_ok ? "true" : "false") << "\n"
        << "predicted_iterations(eps=" << io::format_double(args.reference_eps)
        << "): " << optional_text(report.predicted_iterations) << "\n";
    return kOk;
  });
}

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, "solve", [&] {
    const auto record = io::read_instance(args.instance_path);
    const auto& inst = record.instance;
    usage_check(inst.sparsity().has_value(), "instance has no sparsity level");
    const Index s = *inst.sparsity();

    std::optional<io::BoundsRecord> bounds;
    if (args.bounds_path) bounds = io::read_bounds(*args.bounds_path);
    usage_check(bounds || args.gamma,
                "no RIP bounds given: run `grades rip` on the instance first and pass "
                "--bounds, or set --gamma explicitly");

    SolverConfig<double> config;
    config.sparsity = s;
    config.eps = args.eps;
    config.max_iters = args.max_iters;
    if (bounds) {
      usage_check(bounds->bounds.sparsity() == 2 * s,
                  "bounds are at level " + std::to_string(bounds->bounds.sparsity()) +
                      " but the solver needs level 2s = " + std::to_string(2 * s));
      config.bounds = bounds->bounds;
      config.gamma = bounds->bounds.beta();
    }
    if (args.gamma) config.gamma = *args.gamma;

    const bool certified = bounds && bounds->bounds.is_exact() &&
                           check_convergence_condition(bounds->bounds) &&
                           config.gamma == bounds->bounds.beta();
    const auto result = grades_solve(inst, config);

    io::SolveRecord solved{result, certified ? "certified" : "heuristic", config.gamma,
                           config.eps, recovery_error(inst, result.x)};
    if (!args.trace_out.empty()) io::write_text_file(args.trace_out, io::trace_csv(result.trace));
    if (!args.out_path.empty()) io::write_text_file(args.out_path, io::dump(io::to_json(solved)));

    out << "status: " << to_string(result.status) << "\n"
        << "mode: " << solved.mode << "\n"
        << "gamma: " << io::format_double(config.gamma) << "\n"
        << "iterations: " << result.iterations << "\n"
        << "predicted_bound: " << optional_text(result.predicted_bound) << "\n"
        << "final_objective: " << io::format_double(result.final_objective()) << "\n";
    if (solved.recovery_error) {
      out << "recovery_error: " << io::format_double(*solved.recovery_error) << "\n";
    }
    if (result.predicted_bound && result.iterations > *result.predicted_bound) {
      err << "solve: iterations exceed the certified bound\n";
    }
    if (args.strict && result.status == SolveStatus::ConditionViolated) {
      err << "solve: convergence condition beta < 2 alpha violated (--strict)\n";
      return kConditionViolated;
    }
    return kOk;
  });
}

namespace {

struct BenchRow {
  std::uint64_t seed = 0;
  std::string provenance;
  double alpha = 0;
  double beta = 0;
  bool condition_ok = false;
  std::optional<std::uint64_t> predicted_bound;
  std::uint64_t iterations = 0;
  double final_objective = 0;
  double recovery_error = 0;
  std::optional<double> wall_time_ms;

  std::optional<bool> bound_ok() const {
    if (!predicted_bound) return std::nullopt;
    return iterations <= *predicted_bound;
  }
};

BenchRow bench_one(const BenchArgs& args, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const auto record = generate(args.m, args.n, args.s, seed, args.ensemble, args.amplitude);
  const auto& inst = record.instance;
  const Index level = 2 * args.s;

  bool exact = args.mode == "exact";
  if (args.mode == "auto") {
    exact = binomial(static_cast<std::uint64_t>(args.n), static_cast<std::uint64_t>(level)) <=
            args.max_supports;
  }
  const auto bounds =
      exact ? exact_rip_bounds(inst.phi(), level, ExactOptions{args.max_supports, 1})
            : sampled_rip_bounds(inst.phi(), level, args.trials, derive_seed(seed, 2));

  const auto result = grades_solve(inst, SolverConfig<double>::with_bounds(args.s, bounds, args.eps));
  const auto elapsed = std::chrono::steady_clock::now() - start;

  BenchRow row;
  row.seed = seed;
  row.provenance = exact ? "exact" : "sampled";
  row.alpha = bounds.alpha();
  row.beta = bounds.beta();
  row.condition_ok = check_convergence_condition(bounds);
  row.predicted_bound = result.predicted_bound;
  row.iterations = result.iterations;
  row.final_objective = result.final_objective();
  row.recovery_error = (result.x - *inst.truth()).norm();
  if (args.timing) {
    row.wall_time_ms = std::chrono::duration<double, std::milli>(elapsed).count();
  }
  return row;
}

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string csv =
      "seed,provenance,alpha,beta,condition_ok,predicted_bound,iterations,final_objective,"
      "recovery_error,bound_ok,wall_time_ms\n";
  for (const auto& r : rows) {
    const auto ok = r.bound_ok();
    csv += std::to_string(r.seed) + ',' + r.provenance + ',' + io::format_double(r.alpha) + ',' +
           io::format_double(r.beta) + ',' + (r.condition_ok ? "true" : "false") + ',' +
           (r.predicted_bound ? std::to_string(*r.predicted_bound) : "") + ',' +
           std::to_string(r.iterations) + ',' + io::format_double(r.final_objective) + ',' +
           io::format_double(r.recovery_error) + ',' + (ok ? (*ok ? "true" : "false") : "") +
           ',' + (r.wall_time_ms ? io::format_double(*r.wall_time_ms) : "") + '\n';
  }
  return csv;
}

}  // namespace

int cmd_bench(const BenchArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, "bench", [&] {
    usage_check(args.num_seeds >= 1, "--num-seeds must be at least 1");
    usage_check(args.s >= 1 && 2 * args.s <= args.n,
                "bench needs 1 <= s and 2s <= n (bounds are taken at level 2s)");
    usage_check(args.eps > 0, "--eps must be positive");
    usage_check(args.mode == "auto" || args.mode == "exact" || args.mode == "sampled",
                "unknown mode '" + args.mode + "' (expected auto, exact or sampled)");
    usage_check(args.trials >= 1, "--trials must be at least 1");

    std::vector<BenchRow> rows(args.num_seeds);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto work = [&] {
      for (std::uint64_t i; (i = next.fetch_add(1)) < args.num_seeds;) {
        try {
          rows[i] = bench_one(args, args.first_seed + i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    {
      const unsigned workers = std::max(1u, args.workers);
      std::vector<std::jthread> pool;
      for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
      work();
    }
    if (failure) std::rethrow_exception(failure);

    io::write_text_file(args.out_csv, bench_csv(rows));

    std::uint64_t recovered = 0, certified = 0, violations = 0, condition_failures = 0;
    for (const auto& r : rows) {
      if (r.recovery_error <= kRecoveryTolerance) ++recovered;
      if (r.predicted_bound) ++certified;
      if (r.bound_ok() == false) ++violations;
      if (!r.condition_ok) ++condition_failures;
    }
    const double rate = static_cast<double>(recovered) / static_cast<double>(rows.size());
    out << "seeds: " << rows.size() << "\n"
        << "certified: " << certified << "\n"
        << "condition_violated: " << condition_failures << "\n"
        << "bound_violations: " << violations << "\n"
        << "recovered: " << recovered << "/" << rows.size() << " (rate " << rate << ")\n";
    if (violations > 0) err << "bench: certified runs exceeded the iteration bound\n";
    if (args.strict && condition_failures > 0) {
      err << "bench: convergence condition violated on " << condition_failures
          << " seed(s) (--strict)\n";
      return kConditionViolated;
    }
    return kOk;
  });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse recovery by gradient descent with hard thresholding"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a random noise-free instance");
  gen_cmd->add_option("--m", gen.m, "Number of measurements (rows)")->required();
  gen_cmd->add_option("--n", gen.n, "Signal dimension (columns)")->required();
  gen_cmd->add_option("--s", gen.s, "Sparsity of the true signal")->required();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->required();
  gen_cmd->add_option("--ensemble", gen.ensemble, "gaussian | identity")->capture_default_str();
  gen_cmd->add_option("--amplitude", gen.amplitude, "pm1 | normal")->capture_default_str();
  gen_cmd->add_option("-o,--out", gen.out_path, "Instance JSON file")->required();

  RipArgs rip;
  Index rip_level = 0;
  auto* rip_cmd = app.add_subcommand("rip", "Compute (alpha, beta) isometry bounds");
  rip_cmd->add_option("instance", rip.instance_path, "Instance JSON file")->required();
  auto* level_opt = rip_cmd->add_option("--level", rip_level, "Sparsity level (default 2s)");
  rip_cmd->add_option("--mode", rip.mode, "exact | sampled")->capture_default_str();
  rip_cmd->add_option("--trials", rip.trials, "Sampled supports")->capture_default_str();
  rip_cmd->add_option("--seed", rip.seed, "Sampling seed")->capture_default_str();
  rip_cmd->add_option("--max-supports", rip.max_supports, "Exact enumeration budget")
      ->capture_default_str();
  rip_cmd->add_option("--workers", rip.workers, "Worker threads")->capture_default_str();
  rip_cmd->add_option("--reference-eps", rip.reference_eps,
                      "eps for the reported iteration bound")
      ->capture_default_str();
  rip_cmd->add_option("-o,--out", rip.out_path, "Bounds JSON file")->required();

  SolveArgs solve;
  std::string bounds_path;
  double gamma = 0;
  std::uint64_t max_iters = 0;
  auto* solve_cmd = app.add_subcommand("solve", "Recover the sparse signal");
  solve_cmd->add_option("instance", solve.instance_path, "Instance JSON file")->required();
  auto* bounds_opt = solve_cmd->add_option("--bounds", bounds_path, "Bounds JSON file (level 2s)");
  auto* gamma_opt = solve_cmd->add_option("--gamma", gamma, "Override the step parameter");
  solve_cmd->add_option("--eps", solve.eps, "Target objective")->capture_default_str();
  auto* iters_opt = solve_cmd->add_option("--max-iters", max_iters, "Iteration cap");
  solve_cmd->add_option("--trace-out", solve.trace_out, "Objective trace CSV");
  solve_cmd->add_option("-o,--out", solve.out_path, "Result JSON file");
  solve_cmd->add_flag("--strict", solve.strict, "Exit 3 if beta < 2 alpha fails");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Generate, certify and solve over many seeds");
  bench_cmd->add_option("--m", bench.m, "Number of measurements")->required();
  bench_cmd->add_option("--n", bench.n, "Signal dimension")->required();
  bench_cmd->add_option("--s", bench.s, "Sparsity")->required();
  bench_cmd->add_option("--num-seeds", bench.num_seeds, "Number of seeds")->capture_default_str();
  bench_cmd->add_option("--first-seed", bench.first_seed, "First seed")->capture_default_str();
  bench_cmd->add_option("--eps", bench.eps, "Target objective")->capture_default_str();
  bench_cmd->add_option("--mode", bench.mode, "auto | exact | sampled")->capture_default_str();
  bench_cmd->add_option("--ensemble", bench.ensemble, "gaussian | identity")
      ->capture_default_str();
  bench_cmd->add_option("--amplitude", bench.amplitude, "pm1 | normal")->capture_default_str();
  bench_cmd->add_option("--trials", bench.trials, "Sampled supports")->capture_default_str();
  bench_cmd->add_option("--max-supports", bench.max_supports, "Exact enumeration budget")
      ->capture_default_str();
  bench_cmd->add_option("--workers", bench.workers, "Seeds run in parallel")
      ->capture_default_str();
  bench_cmd->add_flag("--timing", bench.timing, "Fill the wall_time_ms column");
  bench_cmd->add_flag("--strict", bench.strict, "Exit 3 if any seed violates beta < 2 alpha");
  bench_cmd->add_option("-o,--out", bench.out_csv, "Benchmark CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  if (*gen_cmd) return cmd_gen(gen, out, err);
  if (*rip_cmd) {
    if (level_opt->count() > 0) rip.level = rip_level;
    return cmd_rip(rip, out, err);
  }
  if (*solve_cmd) {
    if (bounds_opt->count() > 0) solve.bounds_path = bounds_path;
    if (gamma_opt->count() > 0) solve.gamma = gamma;
    if (iters_opt->count() > 0) solve.max_iters = max_iters;
    return cmd_solve(solve, out, err);
  }
  return cmd_bench(bench, out, err);
}

}  // namespace grades::cli
