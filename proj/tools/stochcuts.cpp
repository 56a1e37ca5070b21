// stochcuts command-line tool: generate, solve, compare, plot, verify.
//
// Exit codes: 0 ok, 1 verification failure or internal error, 2 usage or
// input error, 3 time limit reached.

#include <glob.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "stochcuts/benders.hpp"
#include "stochcuts/cut_io.hpp"
#include "stochcuts/drivers.hpp"
#include "stochcuts/instance_io.hpp"
#include "stochcuts/report.hpp"
#include "stochcuts/verify.hpp"

namespace fs = std::filesystem;
using namespace stochcuts;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitTimeLimit = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A path, "builtin:<name>" or a bare builtin name.
Instance ResolveInstance(const std::string& source) {
  if (source.rfind("builtin:", 0) == 0) return LoadInstance(source);
  if (fs::exists(source)) return ReadInstanceFile(source).instance;
  try {
    return Builtin(source);
  } catch (const std::invalid_argument&) {
    throw UsageError("cannot read instance '" + source +
                     "': no such file or builtin");
  }
}

struct SolveFlags {
  double time_limit = 3600.0;
  double kappa1 = 0.2;
  double delta_coef = 2.0;
  int sep_budget = 50;
  bool no_stall = false;
  int max_refinements = -1;
  double epsilon = 1e-6;
  std::string dual_scaling = "raw";
  bool final_mip_master = false;

  void Register(CLI::App* app) {
    app->add_option("--time-limit", time_limit, "Wall-clock limit in seconds")
        ->capture_default_str();
    app->add_option("--kappa1", kappa1, "Outer stopping ratio")->capture_default_str();
    app->add_option("--delta-coef", delta_coef, "delta_k = coef / k^2")
        ->capture_default_str();
    app->add_option("--sep-budget", sep_budget, "Inner MIP calls per separation")
        ->capture_default_str();
    app->add_flag("--no-stall", no_stall, "Disable the stall rule");
    app->add_option("--max-refinements", max_refinements,
                    "Refinement cap (negative: none)")
        ->capture_default_str();
    app->add_option("--epsilon", epsilon, "Relative gap for alg1")->capture_default_str();
    app->add_option("--dual-scaling", dual_scaling, "Dual scaling before grouping")
        ->check(CLI::IsMember({"raw", "cluster-max", "cluster-mean"}))
        ->capture_default_str();
    app->add_flag("--final-mip-master", final_mip_master,
                  "Solve the final master with integrality");
  }

  RunConfig Config(Algorithm a) const {
    RunConfig cfg;
    cfg.algorithm = a;
    cfg.time_limit_seconds = time_limit;
    cfg.kappa1 = kappa1;
    cfg.delta_coefficient = delta_coef;
    cfg.separation.budget = sep_budget;
    cfg.stall_rule = !no_stall;
    cfg.max_refinements = max_refinements;
    cfg.epsilon = epsilon;
    cfg.final_mip_master = final_mip_master;
    cfg.dual_scaling = dual_scaling == "cluster-max"    ? DualScaling::kClusterMaxNorm
                       : dual_scaling == "cluster-mean" ? DualScaling::kClusterMeanNorm
                                                        : DualScaling::kRaw;
    try {
      cfg.Validate();
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    return cfg;
  }
};

void WriteFile(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

std::string TraceCsv(const RunTrace& trace, const std::string& run_id) {
  std::ostringstream os;
  WriteTraceCsv(os, TraceRows(trace, run_id));
  return os.str();
}

std::string Fixed(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

// ---------------------------------------------------------------- generate

struct GenerateCmd {
  std::string family = "sslp";
  GeneratorConfig cfg;
  std::string out;

  void Register(CLI::App* app) {
    app->add_option("--family", family, "Instance family")
        ->check(CLI::IsMember({"sslp", "sslpv"}))
        ->capture_default_str();
    app->add_option("--sites", cfg.sites, "First-stage sites (n1)")->capture_default_str();
    app->add_option("--clients", cfg.clients, "Clients")->capture_default_str();
    app->add_option("--scenarios", cfg.scenarios, "Scenario count")->capture_default_str();
    app->add_option("--seed", cfg.seed, "Generator seed")->capture_default_str();
    app->add_option("--out", out, "Output instance file")->required();
  }

  int Run() {
    cfg.variant = family == "sslpv";
    Instance in;
    try {
      in = GenerateSslp(cfg);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    WriteInstanceFile(in, out);
    std::cout << "wrote " << out << ": " << in.name << " n1=" << in.num_first()
              << " n2=" << in.num_second() << " m2=" << in.num_recourse_rows()
              << " scenarios=" << in.num_scenarios() << " valid=yes\n";
    return kExitOk;
  }
};

// ------------------------------------------------------------------- solve

struct SolveCmd {
  std::string algo = "apblagc";
  std::string instance;
  std::string trace_out;
  std::string cuts_out;
  std::string run_id = "run";
  SolveFlags flags;

  void Register(CLI::App* app) {
    app->add_option("--algo", algo, "benders, bdd, alg1 or apblagc")
        ->check(CLI::IsMember({"benders", "bdd", "alg1", "apblagc"}))
        ->capture_default_str();
    app->add_option("--instance", instance, "Instance file or builtin name")
        ->required();
    app->add_option("--trace-out", trace_out, "Trace CSV path");
    app->add_option("--cuts-out", cuts_out, "Cut pool JSON path");
    app->add_option("--run-id", run_id, "Run id in the trace")->capture_default_str();
    flags.Register(app);
  }

  int Run() {
    const Instance in = ResolveInstance(instance);
    const RunTrace t = stochcuts::Run(in, flags.Config(ParseAlgorithm(algo)));
    if (!trace_out.empty()) WriteFile(trace_out, TraceCsv(t, run_id));
    if (!cuts_out.empty()) {
      std::ostringstream os;
      WriteCutPool(os, {in.name, t.cuts});
      WriteFile(cuts_out, os.str());
    }
    const CompareRow row = Summarize(t);
    std::cout << "algorithm=" << t.algorithm << " instance=" << t.instance
              << " lower_bound=" << Fixed(t.final_lb);
    if (std::isfinite(t.final_ub)) std::cout << " upper_bound=" << Fixed(t.final_ub);
    if (t.mip_master_lb) std::cout << " mip_master=" << Fixed(*t.mip_master_lb);
    std::cout << " ccut=" << row.ccut << " fcut=" << row.fcut
              << " partitions=" << row.partition_size << " refine=" << row.refine
              << " seconds=" << Fixed(t.wall_seconds)
              << " termination=" << t.termination << "\n";
    return t.timed_out() ? kExitTimeLimit : kExitOk;
  }
};

// ----------------------------------------------------------------- compare

std::vector<std::string> ExpandInstances(const std::vector<std::string>& patterns) {
  std::vector<std::string> out;
  for (const std::string& p : patterns) {
    glob_t g{};
    const int rc = glob(p.c_str(), 0, nullptr, &g);
    if (rc == 0) {
      for (size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
    }
    globfree(&g);
    if (rc == GLOB_NOMATCH) {
      // Not a file pattern; accept builtin names.
      try {
        ResolveInstance(p);
        out.push_back(p);
      } catch (const UsageError&) {
        throw UsageError("no instances matched '" + p + "'");
      }
    }
  }
  return out;
}

std::vector<std::string> SplitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct CompareCmd {
  std::vector<std::string> instances;
  std::string algos = "benders,bdd,apblagc";
  std::string csv_out;
  std::string trace_dir;
  int jobs = 1;
  SolveFlags flags;

  void Register(CLI::App* app) {
    app->add_option("--instances", instances, "Instance files, globs or builtin names")
        ->required();
    app->add_option("--algos", algos, "Comma-separated algorithms")->capture_default_str();
    app->add_option("--csv-out", csv_out, "Comparison CSV path");
    app->add_option("--trace-dir", trace_dir, "Directory for per-run trace CSVs");
    app->add_option("--jobs", jobs, "Parallel runs")->check(CLI::PositiveNumber);
    flags.Register(app);
  }

  int Run() {
    const std::vector<std::string> sources = ExpandInstances(instances);
    if (sources.empty()) throw UsageError("empty instance set");
    std::vector<Algorithm> algorithms;
    for (const std::string& a : SplitList(algos)) {
      try {
        algorithms.push_back(ParseAlgorithm(a));
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
    }
    if (algorithms.empty()) throw UsageError("no algorithms given");
    std::vector<Instance> loaded;
    for (const std::string& s : sources) loaded.push_back(ResolveInstance(s));
    if (!trace_dir.empty()) fs::create_directories(trace_dir);

    struct Cell {
      int instance;
      Algorithm algorithm;
    };
    std::vector<Cell> cells;
    for (int i = 0; i < static_cast<int>(loaded.size()); ++i) {
      for (Algorithm a : algorithms) cells.push_back({i, a});
    }
    std::vector<CompareRow> rows(cells.size());
    std::atomic<size_t> next{0};
    std::mutex error_mu;
    std::exception_ptr error;
    auto worker = [&] {
      while (true) {
        const size_t k = next++;
        if (k >= cells.size()) return;
        try {
          const Instance& in = loaded[cells[k].instance];
          const RunTrace t = stochcuts::Run(in, flags.Config(cells[k].algorithm));
          rows[k] = Summarize(t);
          if (!trace_dir.empty()) {
            const std::string id = in.name + "-" + t.algorithm;
            WriteFile((fs::path(trace_dir) / (id + ".csv")).string(), TraceCsv(t, id));
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < std::max(1, jobs); ++j) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
    if (error) std::rethrow_exception(error);

    MarkBest(rows);
    std::cout << FormatCompareTable(rows);
    if (!csv_out.empty()) {
      std::ostringstream os;
      WriteCompareCsv(os, rows);
      WriteFile(csv_out, os.str());
    }
    for (const CompareRow& r : rows) {
      if (r.termination == "time_limit") return kExitTimeLimit;
    }
    return kExitOk;
  }
};

// -------------------------------------------------------------------- plot

struct PlotCmd {
  std::vector<std::string> traces;
  std::string out;

  void Register(CLI::App* app) {
    app->add_option("--traces", traces, "Trace CSV files")->required()->check(
        CLI::ExistingFile);
    app->add_option("--out", out, "SVG output path")->required();
  }

  int Run() {
    std::vector<std::vector<TraceRow>> series;
    for (const std::string& path : traces) {
      std::ifstream in(path);
      try {
        series.push_back(ReadTraceCsv(in));
      } catch (const FormatError& e) {
        throw UsageError(path + ": " + e.what());
      }
    }
    WriteFile(out, RenderSvg(series));
    std::cout << "wrote " << out << " (" << series.size() << " series)\n";
    return kExitOk;
  }
};

// ------------------------------------------------------------------ verify

// "1..20", "3" or "1,4,9".
std::vector<std::uint64_t> ParseSeeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  try {
    const auto dots = s.find("..");
    if (dots != std::string::npos) {
      const std::uint64_t lo = std::stoull(s.substr(0, dots));
      const std::uint64_t hi = std::stoull(s.substr(dots + 2));
      if (hi < lo) throw UsageError("empty seed range '" + s + "'");
      for (std::uint64_t v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      for (const std::string& item : SplitList(s)) out.push_back(std::stoull(item));
    }
  } catch (const std::logic_error&) {
    throw UsageError("bad seed list '" + s + "'");
  }
  if (out.empty()) throw UsageError("bad seed list '" + s + "'");
  return out;
}

Instance SmallSslp(int sites, int clients, int scenarios, std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.sites = sites;
  cfg.clients = clients;
  cfg.scenarios = scenarios;
  cfg.seed = seed;
  return GenerateSslp(cfg);
}

struct VerifyCmd {
  std::string suite = "all";
  std::string seeds = "1..5";
  std::string instance;
  std::string cuts;

  void Register(CLI::App* app) {
    app->add_option("--suite", suite, "all, thm1, dim1, validity, dominance, monotone")
        ->check(CLI::IsMember({"all", "thm1", "dim1", "validity", "dominance", "monotone"}))
        ->capture_default_str();
    app->add_option("--seeds", seeds, "Seeds as a..b or a,b,c")->capture_default_str();
    app->add_option("--instance", instance, "Instance for --cuts");
    app->add_option("--cuts", cuts, "Cut pool JSON to check for validity");
  }

  bool Wants(const std::string& s) const { return suite == "all" || suite == s; }

  int Run() {
    const auto seed_list = ParseSeeds(seeds);
    if (!cuts.empty() && instance.empty()) {
      throw UsageError("--cuts needs --instance");
    }
    std::vector<VerificationReport> reports;
    auto emit = [&](VerificationReport r) {
      std::cout << r.ToText() << "\n";
      reports.push_back(std::move(r));
    };

    if (Wants("thm1")) emit(CheckThm1Strictness());
    if (Wants("dim1")) {
      for (auto s : seed_list) {
        emit(CheckDim1NoGap(Builtin("dim1-random-" + std::to_string(s))));
      }
    }
    if (Wants("validity")) {
      if (!cuts.empty()) {
        const Instance in = ResolveInstance(instance);
        std::ifstream is(cuts);
        if (!is) throw UsageError("cannot read '" + cuts + "'");
        emit(CheckCutValidity(in, ReadCutPool(is).cuts));
      }
      for (auto s : seed_list) {
        const Instance in = SmallSslp(4, 6, 4, s);
        for (Algorithm a : {Algorithm::kBenders, Algorithm::kBdd, Algorithm::kApblagc}) {
          RunConfig cfg;
          cfg.algorithm = a;
          VerificationReport r = CheckCutValidity(in, stochcuts::Run(in, cfg).cuts);
          r.note = std::string(ToString(a)) + ": " + r.note;
          emit(std::move(r));
        }
      }
    }
    if (Wants("dominance")) {
      for (auto s : seed_list) {
        const Instance in = SmallSslp(5, 7, 6, s);
        std::mt19937_64 rng(s);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const auto chain = RandomRefinementChain(in.num_scenarios(), s);
        const Partition& p = chain[chain.size() / 2];
        const auto& cluster = p.clusters()[rng() % p.size()];
        std::vector<double> x(in.num_first());
        for (double& v : x) v = u(rng);
        const AggregatedScenario agg = Aggregate(in, cluster);
        const SubproblemResult sub = SolveClusterSubproblem(in, agg, x);
        emit(CheckPbbencDominance(in, MakePbBenC(in, agg, sub.duals), sub.duals));
      }
    }
    if (Wants("monotone")) {
      for (auto s : seed_list) {
        const Instance in = SmallSslp(3, 12, 5, s);
        emit(CheckRefinementMonotone(in, RandomRefinementChain(5, s)));
      }
    }

    int failed = 0;
    int inconclusive = 0;
    for (const auto& r : reports) {
      failed += !r.pass && !r.inconclusive;
      inconclusive += r.inconclusive;
    }
    std::cout << "verify: " << reports.size() << " checks, " << failed << " failed, "
              << inconclusive << " inconclusive\n";
    return failed + inconclusive == 0 ? kExitOk : kExitVerifyFail;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stage stochastic integer programs: cuts, partitions, traces"};
  app.require_subcommand(1);
  GenerateCmd generate;
  SolveCmd solve;
  CompareCmd compare;
  PlotCmd plot;
  VerifyCmd verify;
  CLI::App* g = app.add_subcommand("generate", "Write a generated instance file");
  generate.Register(g);
  CLI::App* s = app.add_subcommand("solve", "Run one algorithm on one instance");
  solve.Register(s);
  CLI::App* c = app.add_subcommand("compare", "Run algorithms over instances and tabulate");
  compare.Register(c);
  CLI::App* p = app.add_subcommand("plot", "Render trace CSVs as an SVG step plot");
  plot.Register(p);
  CLI::App* v = app.add_subcommand("verify", "Run the brute-force verification suites");
  verify.Register(v);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (g->parsed()) return generate.Run();
    if (s->parsed()) return solve.Run();
    if (c->parsed()) return compare.Run();
    if (p->parsed()) return plot.Run();
    if (v->parsed()) return verify.Run();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerifyFail;
  }
  return kExitUsage;
}
