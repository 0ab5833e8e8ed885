// aplab command-line laboratory.
//
// Every subcommand writes its artifacts into --out (created on demand)
// plus a manifest.json that lists each produced file exactly once with
// the parameters that generated it.  Runs are deterministic: the same
// flags and seed produce byte-identical artifacts regardless of
// --threads, which is excluded from the manifest for that reason.
//
// Exit codes: 0 success, 1 numeric/domain failure reported by a module,
// 2 usage error (unknown flag, missing argument, bad subcommand).

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aplab/analytic.hpp"
#include "aplab/cutoff.hpp"
#include "aplab/cyclic.hpp"
#include "aplab/dense_model.hpp"
#include "aplab/forms.hpp"
#include "aplab/graphs.hpp"
#include "aplab/majorant.hpp"
#include "aplab/norms.hpp"
#include "aplab/primes_ap.hpp"
#include "aplab/sieve.hpp"
#include "aplab/util.hpp"

#ifndef APLAB_VERSION
#define APLAB_VERSION "0.1.0"
#endif

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using namespace aplab;

unsigned default_threads() {
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

// ---------------------------------------------------------------------------
// Output helpers: CRLF CSV via C stdio, %.17g doubles, short-write checks.

class CsvWriter {
 public:
  explicit CsvWriter(const fs::path& path) : path_(path.string()), f_(std::fopen(path_.c_str(), "wb")) {
    if (!f_) throw std::runtime_error("cannot open " + path_ + " for writing");
  }
  ~CsvWriter() {
    if (f_) std::fclose(f_);
  }
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  template <typename... Ts>
  void row(const Ts&... vs) {
    (field(vs), ...);
    raw("\r\n");
    first_ = true;
  }

  void close() {
    if (!f_) return;
    bool bad = std::ferror(f_) != 0;
    bad = (std::fclose(f_) != 0) || bad;
    f_ = nullptr;
    if (bad) throw std::runtime_error("short write: " + path_);
  }

 private:
  void raw(const char* s) {
    if (std::fputs(s, f_) < 0) {
      // ferror() is checked at close(); nothing more to do here.
    }
  }
  void sep() {
    if (!first_) raw(",");
    first_ = false;
  }
  void field(const char* s) {
    sep();
    raw(s);
  }
  void field(const std::string& s) { field(s.c_str()); }
  void field(double v) {
    sep();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    raw(buf);
  }
  template <typename T, std::enable_if_t<std::is_integral_v<T>, int> = 0>
  void field(T v) {
    sep();
    char buf[32];
    if constexpr (std::is_signed_v<T>)
      std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(v));
    else
      std::snprintf(buf, sizeof buf, "%llu", static_cast<unsigned long long>(v));
    raw(buf);
  }

  std::string path_;
  std::FILE* f_ = nullptr;
  bool first_ = true;
};

void write_text_file(const fs::path& path, const std::string& text) {
  const std::string p = path.string();
  std::FILE* f = std::fopen(p.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open " + p + " for writing");
  bool bad = std::fwrite(text.data(), 1, text.size(), f) != text.size();
  bad = (std::ferror(f) != 0) || bad;
  bad = (std::fclose(f) != 0) || bad;
  if (bad) throw std::runtime_error("short write: " + p);
}

// manifest.json: subcommand, params (threads deliberately excluded), seed,
// versions, and every artifact of the run listed exactly once.  Keys are
// emitted sorted and without timestamps so reruns are byte-identical.
void write_manifest(const fs::path& dir, const std::string& subcommand, json params,
                    std::uint64_t seed, std::vector<std::string> outputs) {
  json m;
  m["subcommand"] = subcommand;
  m["params"] = std::move(params);
  m["seed"] = seed;
  m["versions"] = json{{"aplab_core", APLAB_VERSION}, {"manifest_schema", 1}};
  std::sort(outputs.begin(), outputs.end());
  m["outputs"] = outputs;
  write_text_file(dir / "manifest.json", m.dump(2) + "\n");
}

fs::path prepare_out_dir(const std::string& out) {
  fs::path dir(out.empty() ? std::string(".") : out);
  fs::create_directories(dir);
  return dir;
}

CutoffFunction make_cutoff(const std::string& name, double plateau) {
  if (name == "tent") return tent_cutoff();
  return smooth_bump_cutoff(plateau);
}

CyclicFunction load_cyclic(const std::string& path) {
  auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? std::string() : path.substr(dot);
  if (ext == ".csv") return CyclicFunction::load_csv(path);
  return CyclicFunction::load_binary(path);
}

// Shared majorant construction (majorant, lfc --nu majorant, dense-model,
// counting).  R <= 0 selects the desk-scale schedule R = N^{2/5}, the
// truncation at which the measure's mean actually sits near 1 for
// reachable N (the asymptotic default recipe only leaves R ~ 1 there).
struct MajorantInstance {
  MajorantParams params;
  SieveTables tables;
  CyclicFunction nu;
};

MajorantInstance build_majorant_instance(std::int64_t N, int k, std::uint64_t w,
                                         const std::string& chi, double plateau, double R,
                                         unsigned threads) {
  CutoffFunction cf = make_cutoff(chi, plateau);
  const double eff_R = R > 0 ? R : std::pow(static_cast<double>(N), 0.4);
  MajorantParams params = MajorantParams::with_truncation(N, k, w, cf, eff_R);
  const std::uint64_t un = static_cast<std::uint64_t>(N);
  if (params.wt.W != 0 && un > (std::numeric_limits<std::uint64_t>::max() - 1) / params.wt.W)
    throw std::overflow_error("W*N+1 does not fit in 64 bits; lower --w or --N");
  SieveTables tables = build_tables(params.wt.W * un + 1);
  CyclicFunction nu = build_majorant(params, tables, threads);
  return MajorantInstance{std::move(params), std::move(tables), std::move(nu)};
}

std::vector<std::uint8_t> random_subset(std::int64_t N, std::uint64_t seed, std::uint64_t stream) {
  auto rng = make_stream_rng(seed, stream);
  std::vector<std::uint8_t> a(static_cast<std::size_t>(N));
  for (auto& v : a) v = static_cast<std::uint8_t>(rng() & 1u);
  return a;
}

json majorant_params_json(const MajorantParams& p, const std::string& chi, double plateau,
                          double requested_R) {
  json j;
  j["N"] = p.N;
  j["k"] = p.k;
  j["w"] = p.wt.w;
  j["chi"] = chi;
  if (chi == "bump") j["plateau"] = plateau;
  j["R"] = p.R;
  j["R_requested"] = requested_R;
  return j;
}

// ---------------------------------------------------------------------------
// sieve

struct SieveOpts {
  std::int64_t N = 0;
  std::string out = ".";
  unsigned threads = default_threads();
};

void run_sieve(const SieveOpts& o) {
  const fs::path dir = prepare_out_dir(o.out);
  SieveTables tables = build_tables(static_cast<std::uint64_t>(o.N));

  std::uint64_t prime_count = 0;
  std::int64_t mertens = 0;
  long double mangoldt_sum = 0.0L;
  for (std::uint64_t n = 1; n <= tables.limit; ++n) {
    prime_count += tables.is_prime[n] ? 1 : 0;
    mertens += tables.mobius[n];
    mangoldt_sum += tables.mangoldt[n];
  }
  const double msum = static_cast<double>(mangoldt_sum);
  const double mavg = msum / static_cast<double>(tables.limit);

  tables.save((dir / "sieve_tables.bin").string());
  CsvWriter csv(dir / "sieve_summary.csv");
  csv.row("limit", "prime_count", "mertens", "mangoldt_sum", "mangoldt_avg");
  csv.row(tables.limit, prime_count, mertens, msum, mavg);
  csv.close();

  write_manifest(dir, "sieve", json{{"N", o.N}}, 0,
                 {"sieve_tables.bin", "sieve_summary.csv"});
  std::printf("sieve: limit=%" PRId64 " primes=%" PRIu64 " mertens=%" PRId64
              " mangoldt_avg=%.6f\n",
              o.N, prime_count, mertens, mavg);
}

// ---------------------------------------------------------------------------
// majorant

struct MajorantOpts {
  std::int64_t N = 0;
  int k = 3;
  std::uint64_t w = 3;
  std::string chi = "tent";
  double plateau = 0.5;
  double R = 0.0;
  std::string out = ".";
  unsigned threads = default_threads();
};

void run_majorant(const MajorantOpts& o) {
  const fs::path dir = prepare_out_dir(o.out);
  MajorantInstance inst =
      build_majorant_instance(o.N, o.k, o.w, o.chi, o.plateau, o.R, o.threads);
  CyclicFunction f = restrict_to_window(inst.params, inst.tables);
  MajorizationReport rep = check_majorizes(inst.nu, f, inst.params);

  const std::int64_t lo = (o.N + 1) / 2;
  long double wsum_nu = 0.0L, wsum_f = 0.0L;
  for (std::int64_t n = lo; n < o.N; ++n) {
    wsum_nu += inst.nu.values[static_cast<std::size_t>(n)];
    wsum_f += f.values[static_cast<std::size_t>(n)];
  }
  const double wlen = static_cast<double>(o.N - lo);
  const double window_mean_nu = wlen > 0 ? static_cast<double>(wsum_nu) / wlen : 0.0;
  const double window_mean_f = wlen > 0 ? static_cast<double>(wsum_f) / wlen : 0.0;

  inst.nu.save_binary((dir / "nu.bin").string());
  CsvWriter csv(dir / "majorant_stats.csv");
  csv.row("N", "k", "w", "W", "R", "c_chi", "delta_k", "mean_nu", "min_nu", "max_nu",
          "window_mean_nu", "window_mean_f", "checked", "violations", "min_slack",
          "threshold_ok");
  csv.row(o.N, o.k, o.w, inst.params.wt.W, inst.params.R, inst.params.c, inst.params.delta_k,
          inst.nu.mean(), inst.nu.min(), inst.nu.max(), window_mean_nu, window_mean_f,
          rep.checked, rep.violations, rep.min_slack, rep.threshold_ok ? 1 : 0);
  csv.close();

  write_manifest(dir, "majorant", majorant_params_json(inst.params, o.chi, o.plateau, o.R), 0,
                 {"nu.bin", "majorant_stats.csv"});
  std::printf("majorant: N=%" PRId64 " W=%" PRIu64 " R=%.6g mean(nu)=%.6f"
              " window_mean(nu)=%.6f violations=%" PRIu64 " min_slack=%.6g\n",
              o.N, inst.params.wt.W, inst.params.R, inst.nu.mean(), window_mean_nu,
              rep.violations, rep.min_slack);
}

// ---------------------------------------------------------------------------
// lfc

struct LfcOpts {
  std::int64_t N = 0;
  int k = 3;
  std::string nu_kind = "uniform";
  bool exact = false;
  bool mc = false;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  std::uint64_t w = 3;
  std::string chi = "tent";
  double plateau = 0.5;
  double R = 0.0;
  std::string out = ".";
  unsigned threads = default_threads();
};

void run_lfc(const LfcOpts& o) {
  const fs::path dir = prepare_out_dir(o.out);
  const bool use_mc = o.mc;  // default (neither flag) is exact

  CyclicFunction nu;
  json params;
  if (o.nu_kind == "uniform") {
    nu = CyclicFunction(o.N, 1.0);
    params["N"] = o.N;
    params["k"] = o.k;
  } else {
    MajorantInstance inst =
        build_majorant_instance(o.N, o.k, o.w, o.chi, o.plateau, o.R, o.threads);
    nu = std::move(inst.nu);
    params = majorant_params_json(inst.params, o.chi, o.plateau, o.R);
  }
  params["nu"] = o.nu_kind;
  params["method"] = use_mc ? "mc" : "exact";
  if (use_mc) params["samples"] = o.samples;

  const std::size_t pattern_count =
      1 + (static_cast<std::size_t>(o.k) << (o.k - 1)) + 4;
  std::vector<ExponentPattern> patterns = sample_patterns(o.k, pattern_count, o.seed);

  CsvWriter csv(dir / "lfc_values.csv");
  csv.row("pattern", "active", "method", "value", "stderr", "samples");
  double max_dev = 0.0;
  for (const ExponentPattern& p : patterns) {
    double value = 0.0, se = 0.0;
    std::uint64_t samples = 0;
    if (use_mc) {
      McReport rep = lf_expectation_mc(nu, p, o.samples, o.seed, 16, o.threads);
      value = rep.estimate;
      se = rep.stderr_est;
      samples = rep.samples;
    } else {
      value = lf_expectation_exact(nu, p);
    }
    csv.row(p.to_string(), p.active_count(), use_mc ? "mc" : "exact", value, se, samples);
    max_dev = std::max(max_dev, std::abs(value - 1.0));
    std::printf("lfc: pattern=%s active=%zu value=%.17g\n", p.to_string().c_str(),
                p.active_count(), value);
  }
  csv.close();

  write_manifest(dir, "lfc", std::move(params), o.seed, {"lfc_values.csv"});
  std::printf("lfc: N=%" PRId64 " k=%d nu=%s method=%s patterns=%zu max|value-1|=%.17g\n",
              o.N, o.k, o.nu_kind.c_str(), use_mc ? "mc" : "exact", patterns.size(), max_dev);
}

// ---------------------------------------------------------------------------
// cutnorm

struct CutnormOpts {
  std::vector<std::string> files;
  bool exact = false;
  bool mc = false;
  int restarts = 32;
  std::uint64_t seed = 0;
  std::string out = ".";
  unsigned threads = default_threads();
};

void run_cutnorm(const CutnormOpts& o) {
  const fs::path dir = prepare_out_dir(o.out);
  CyclicFunction h = load_cyclic(o.files[0]);
  if (o.files.size() == 2) {
    CyclicFunction g = load_cyclic(o.files[1]);
    if (g.modulus != h.modulus)
      throw std::invalid_argument("cutnorm: the two inputs live on different moduli");
    for (std::size_t i = 0; i < h.values.size(); ++i) h.values[i] -= g.values[i];
  }

  Matrix m = sum_matrix(h);
  const bool use_exact = o.exact || (!o.mc && h.modulus <= 25);
  CutNormResult res = use_exact
                          ? cutnorm_bipartite_exact(m, o.threads)
                          : cutnorm_bipartite_heuristic(
                                m, static_cast<unsigned>(o.restarts), o.seed, o.threads);
  const double u2 = gowers_u2_bound(h);
  const bool u2_dominates = u2 + 1e-12 >= res.value;

  CsvWriter csv(dir / "cutnorm_summary.csv");
  csv.row("N", "inputs", "method", "value", "exact", "u2_bound", "u2_dominates", "restarts",
          "seed");
  csv.row(h.modulus, o.files.size(), use_exact ? "exact" : "heuristic", res.value,
          res.exact ? 1 : 0, u2, u2_dominates ? 1 : 0, o.restarts, o.seed);
  csv.close();

  CsvWriter wit(dir / "cutnorm_witness.csv");
  wit.row("side", "index", "selected");
  const char* side_name[2] = {"row", "col"};
  for (int side = 0; side < 2; ++side)
    for (std::size_t i = 0; i < res.witness[side].size(); ++i)
      wit.row(side_name[side], i, static_cast<int>(res.witness[side][i]));
  wit.close();

  json params;
  params["inputs"] = o.files;
  params["method"] = use_exact ? "exact" : "heuristic";
  if (!use_exact) params["restarts"] = o.restarts;
  write_manifest(dir, "cutnorm", std::move(params), o.seed,
                 {"cutnorm_summary.csv", "cutnorm_witness.csv"});
  std::printf("cutnorm: N=%" PRId64 " value=%.12g (%s) u2_bound=%.12g dominates=%d\n",
              h.modulus, res.value, use_exact ? "exact" : "heuristic", u2,
              u2_dominates ? 1 : 0);
}

// ---------------------------------------------------------------------------
// dense-model

struct DenseModelOpts {
  std::string input;  // optional function file; otherwise a seeded instance
  std::int64_t N = 0;
  int k = 3;
  std::uint64_t w = 2;
  std::string chi = "tent";
  double plateau = 0.5;
  double R = 0.0;
  bool exact = false;
  bool mc = false;
  int restarts = 32;
  std::uint64_t seed = 0;
  std::string out = ".";
  unsigned threads = default_threads();
};

void run_dense_model(const DenseModelOpts& o) {
  const fs::path dir = prepare_out_dir(o.out);
  CyclicFunction f;
  json params;
  if (!o.input.empty()) {
    f = load_cyclic(o.input);
    params["input"] = o.input;
  } else {
    if (o.N <= 0)
      throw std::invalid_argument("dense-model: pass --N (seeded instance) or an input file");
    MajorantInstance inst =
        build_majorant_instance(o.N, o.k, o.w, o.chi, o.plateau, o.R, o.threads);
    std::vector<std::uint8_t> a = random_subset(o.N, o.seed, /*stream=*/101);
    f = std::move(inst.nu);
    for (std::size_t i = 0; i < f.values.size(); ++i)
      if (!a[i]) f.values[i] = 0.0;
    params = majorant_params_json(inst.params, o.chi, o.plateau, o.R);
    params["instance"] = "nu_times_random_set";
  }

  ModelSearchConfig config;
  config.exact_separation = o.exact || (!o.mc && f.modulus <= 25);
  config.restarts = o.restarts;
  config.seed = o.seed;
  config.threads = o.threads;
  DenseModelResult res = find_dense_model(f, config);
  MeanPreservationReport mp = mean_preservation_check(f, res);

  res.model.save_binary((dir / "model.bin").string());
  CsvWriter trace(dir / "trace.csv");
  trace.row("round", "objective", "oracle_value", "achieved_gap", "witnesses");
  for (const ModelRoundTrace& t : res.trace)
    trace.row(t.round, t.objective, t.oracle_value, t.achieved_gap, t.witnesses);
  trace.close();
  write_text_file(dir / "dense_model.json", res.to_json_string() + "\n");
  write_text_file(dir / "mean_preservation.json", mp.to_json_string() + "\n");

  params["exact_separation"] = config.exact_separation;
  if (!config.exact_separation) params["restarts"] = o.restarts;
  write_manifest(dir, "dense-model", std::move(params), o.seed,
                 {"model.bin", "trace.csv", "dense_model.json", "mean_preservation.json"});
  std::printf("dense-model: N=%" PRId64 " gap=%.6g rounds=%d converged=%d exact=%d"
              " mean_diff=%.6g\n",
              f.modulus, res.achieved_gap, res.rounds, res.converged ? 1 : 0,
              res.exact_certificate ? 1 : 0, mp.diff);
}

// ---------------------------------------------------------------------------
// counting

struct CountingOpts {
  std::int64_t N = 0;
  int k = 3;
  std::uint64_t w = 2;
  std::string chi = "tent";
  double plateau = 0.5;
  double R = 0.0;
  int restarts = 32;
  std::uint64_t seed = 0;
  std::string out = ".";
  unsigned threads = default_threads();
};

void run_counting(const CountingOpts& o) {
  if (o.k != 3)
    throw std::invalid_argument("counting: only --k 3 is supported (triangle pipeline)");
  const fs::path dir = prepare_out_dir(o.out);
  MajorantInstance inst =
      build_majorant_instance(o.N, o.k, o.w, o.chi, o.plateau, o.R, o.threads);
  std::vector<std::uint8_t> a = random_subset(o.N, o.seed, /*stream=*/202);
  CyclicFunction f = inst.nu;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    if (!a[i]) f.values[i] = 0.0;

  WeightedTripartiteGraph gnu = graph_from_measure(inst.nu);
  WeightedTripartiteGraph g = graph_from_measure(f);
  WeightedTripartiteGraph gtilde;
  gtilde.nX = g.nX;
  gtilde.nY = g.nY;
  gtilde.nZ = g.nZ;
  gtilde.wXY = cap_at_one(densify(g, GraphSide::XY, o.threads));
  gtilde.wXZ = cap_at_one(densify(g, GraphSide::XZ, o.threads));
  gtilde.wYZ = cap_at_one(densify(g, GraphSide::YZ, o.threads));

  CountingDiscrepancyOptions opts;
  opts.restarts = o.restarts;
  opts.seed = o.seed;
  opts.threads = o.threads;
  CountingDiscrepancyReport rep = counting_discrepancy_experiment(gnu, g, gtilde, opts);

  save_graph_binary(g, (dir / "g.bin").string());
  save_graph_binary(gtilde, (dir / "gtilde.bin").string());
  save_edge_list_csv(g.wXY, "x", "y", (dir / "g_xy.csv").string());
  save_edge_list_csv(g.wXZ, "x", "z", (dir / "g_xz.csv").string());
  save_edge_list_csv(g.wYZ, "y", "z", (dir / "g_yz.csv").string());
  write_text_file(dir / "counting_report.json", rep.to_json_string() + "\n");

  json params = majorant_params_json(inst.params, o.chi, o.plateau, o.R);
  params["instance"] = "nu_times_random_set";
  params["restarts"] = o.restarts;
  write_manifest(dir, "counting", std::move(params), o.seed,
                 {"g.bin", "gtilde.bin", "g_xy.csv", "g_xz.csv", "g_yz.csv",
                  "counting_report.json"});
  std::printf("counting: N=%" PRId64 " eps=%.6g density_g=%.6g density_gtilde=%.6g"
              " gap=%.6g exact_norms=%d\n",
              o.N, rep.eps, rep.density_g, rep.density_gtilde, rep.gap,
              rep.exact_norms ? 1 : 0);
}

// ---------------------------------------------------------------------------
// prop82

struct Prop82Opts {
  std::int64_t N = 0;  // box end: the box is [1, N)
  std::uint64_t w = 2;
  double R = 50.0;
  std::string chi = "tent";
  double plateau = 0.5;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  std::string out = ".";
  unsigned threads = default_threads();
};

void run_prop82(const Prop82Opts& o) {
  const fs::path dir = prepare_out_dir(o.out);
  LinearFormsSystem sys;
  sys.t = 1;
  sys.forms = {LinearForm{{1}, 0, 1}};
  WTrick wt = make_wtrick(o.w);
  Box box;
  box.dims = {{1, o.N}};
  CutoffFunction cf = make_cutoff(o.chi, o.plateau);
  BoxCorrelationReport rep =
      box_correlation_experiment(sys, wt, box, o.R, cf, o.samples, o.seed, 16, o.threads);

  CsvWriter csv(dir / "prop82.csv");
  csv.row("box_lo", "box_hi", "m", "w", "R", "samples", "seed", "lhs", "stderr", "rhs",
          "ratio", "ratio_lo", "ratio_hi");
  csv.row(static_cast<std::int64_t>(1), o.N, rep.m, rep.w, rep.R, rep.samples, rep.seed,
          rep.lhs, rep.stderr_est, rep.rhs, rep.ratio, rep.ratio_lo, rep.ratio_hi);
  csv.close();
  write_text_file(dir / "prop82.json", rep.to_json_string() + "\n");

  json params;
  params["N"] = o.N;
  params["w"] = o.w;
  params["R"] = o.R;
  params["chi"] = o.chi;
  if (o.chi == "bump") params["plateau"] = o.plateau;
  params["samples"] = o.samples;
  write_manifest(dir, "prop82", std::move(params), o.seed, {"prop82.csv", "prop82.json"});
  std::printf("prop82: box=[1,%" PRId64 ") w=%" PRIu64 " R=%.6g ratio=%.6f"
              " band=[%.6f,%.6f]\n",
              o.N, o.w, o.R, rep.ratio, rep.ratio_lo, rep.ratio_hi);
}

// ---------------------------------------------------------------------------
// analytic

struct AnalyticOpts {
  std::string chi = "bump";
  double plateau = 0.5;
  double R = 50.0;
  std::uint64_t w = 2;
  std::string out = ".";
  unsigned threads = default_threads();
};

void run_analytic(const AnalyticOpts& o) {
  const fs::path dir = prepare_out_dir(o.out);
  const double xi_max = 200.0;
  const int n_grid = 8001;
  const double quad_tol = 1e-10;

  CutoffFunction cf = make_cutoff(o.chi, o.plateau);
  FourierProfile prof = fourier_profile(cf, xi_max, n_grid, quad_tol);
  prof.save_csv((dir / "profile.csv").string());

  const double c_time = c_chi(cf, 1e-11);
  const std::complex<double> c_spec = c_chi_double_integral(prof);
  const double c_gap = std::abs(c_spec.real() - c_time);

  double inv_max = 0.0, deriv_max = 0.0;
  for (int i = 0; i <= 9; ++i) {
    const double x = 0.1 * i;
    inv_max = std::max(inv_max, std::abs(profile_inverse(prof, x).real() - cf.eval(x)));
    deriv_max =
        std::max(deriv_max, std::abs(profile_derivative(prof, x).real() + cf.deriv(x)));
  }
  const double decay = fitted_decay_exponent(prof);

  std::uint64_t zterms = 0;
  double ztail = 0.0;
  const double z2 = zeta_by_series(2.0, 1e-9, &zterms, &ztail);
  const double z2_err = std::abs(z2 - 1.6449340668482264);

  // The pole-trend points sit close to s = 1, where the 1e-9 default
  // tail bound would cost ~1e8 series terms; 1e-6 keeps the tail two
  // orders below the displayed trend at a few 1e5 terms.
  const std::vector<double> pole_R = {1e2, 1e4, 1e6};
  std::vector<double> pole_s;
  pole_s.reserve(pole_R.size());
  for (double r : pole_R) pole_s.push_back(1.0 + 1.0 / std::log(r));
  std::vector<ZetaPoint> poles = zeta_pole_check(pole_s, 1e-6);

  LinearFormsSystem sys = kap_forms(3);
  WTrick wt = make_wtrick(o.w);
  const std::vector<double> xi_zero(2 * sys.forms.size(), 0.0);
  PrimeSieve ps(1000);
  double max_scaled_gap = 0.0;
  std::uint64_t worst_p = 0;
  for (std::uint64_t p : ps.primes_in(o.w + 1, 1000)) {
    EulerFactorResult er = euler_factor_compare(sys, wt, p, xi_zero, o.R);
    if (er.scaled_gap > max_scaled_gap) {
      max_scaled_gap = er.scaled_gap;
      worst_p = p;
    }
  }

  CsvWriter csv(dir / "analytic_summary.csv");
  csv.row("quantity", "value");
  csv.row("c_chi_time_domain", c_time);
  csv.row("c_chi_spectral_re", c_spec.real());
  csv.row("c_chi_spectral_im", c_spec.imag());
  csv.row("c_chi_two_route_gap", c_gap);
  csv.row("conjugate_symmetry_defect", prof.conjugate_symmetry_defect());
  csv.row("inversion_max_error", inv_max);
  csv.row("derivative_max_error", deriv_max);
  csv.row("decay_exponent", decay);
  csv.row("zeta2_value", z2);
  csv.row("zeta2_error", z2_err);
  csv.row("zeta2_terms", zterms);
  for (std::size_t i = 0; i < poles.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "zeta_times_s_minus_1_R%.0e", pole_R[i]);
    csv.row(name, poles[i].product);
  }
  csv.row("euler_max_scaled_gap", max_scaled_gap);
  csv.row("euler_worst_prime", worst_p);
  for (double r : pole_R) {
    EulerWComparison ew = euler_w_product_compare(wt, 3, r);
    char name[64];
    std::snprintf(name, sizeof name, "euler_w_product_rel_gap_R%.0e", r);
    csv.row(name, ew.rel_gap);
  }
  csv.close();

  json params;
  params["chi"] = o.chi;
  if (o.chi == "bump") params["plateau"] = o.plateau;
  params["R"] = o.R;
  params["w"] = o.w;
  params["xi_max"] = xi_max;
  params["n_grid"] = n_grid;
  params["quad_tol"] = quad_tol;
  write_manifest(dir, "analytic", std::move(params), 0,
                 {"profile.csv", "analytic_summary.csv"});
  std::printf("analytic: chi=%s c_chi=%.12f two_route_gap=%.3g deriv_err=%.3g"
              " zeta2_err=%.3g euler_max_scaled_gap=%.4f (p=%" PRIu64 ")\n",
              o.chi.c_str(), c_time, c_gap, deriv_max, z2_err, max_scaled_gap, worst_p);
}

// ---------------------------------------------------------------------------
// prime-aps

struct PrimeApsOpts {
  std::int64_t N = 0;
  int k = 3;
  std::uint64_t w = 2;
  bool w_given = false;
  std::string out = ".";
  unsigned threads = default_threads();
};

void run_prime_aps(const PrimeApsOpts& o) {
  const fs::path dir = prepare_out_dir(o.out);
  const std::uint64_t un = static_cast<std::uint64_t>(o.N);
  std::uint64_t limit = std::max<std::uint64_t>(un, 4);
  WTrick wt;
  if (o.w_given) {
    wt = make_wtrick(o.w);
    if (un > (std::numeric_limits<std::uint64_t>::max() - 1) / wt.W)
      throw std::overflow_error("W*N+1 does not fit in 64 bits; lower --w or --N");
    limit = std::max(limit, wt.W * un + 1);
  }
  SieveTables tables = build_tables(limit);

  PrimeApCountRow row = prime_ap_count_row(un, o.k, tables, o.threads);
  save_count_rows_csv({row}, (dir / "prime_ap_counts.csv").string());
  std::vector<TwoSquaresAp> aps = two_squares_ap_demo(un, o.k, tables, 1000, o.threads);
  save_two_squares_csv(aps, (dir / "two_squares.csv").string());

  std::vector<std::string> outputs = {"prime_ap_counts.csv", "two_squares.csv"};
  json params;
  params["N"] = o.N;
  params["k"] = o.k;
  if (o.w_given) {
    WeightedApDensityReport rep = weighted_ap_density_lambda(o.N, o.k, o.w, tables, o.threads);
    write_text_file(dir / "weighted_density.json", rep.to_json_string() + "\n");
    outputs.push_back("weighted_density.json");
    params["w"] = o.w;
    std::printf("prime-aps: weighted density total=%.17g nontrivial=%.17g support_aps=%" PRIu64
                "\n",
                rep.total_density, rep.nontrivial_density, rep.support_ap_count);
  }
  write_manifest(dir, "prime-aps", std::move(params), 0, std::move(outputs));
  std::printf("prime-aps: N=%" PRId64 " k=%d count=%" PRIu64 " ratio=%.6g"
              " two_squares_aps=%zu\n",
              o.N, o.k, row.count, row.ratio, aps.size());
}

// ---------------------------------------------------------------------------
// option wiring

void add_out_threads(CLI::App* cmd, std::string* out, unsigned* threads) {
  cmd->add_option("--out", *out, "output directory (created if missing)")
      ->capture_default_str();
  cmd->add_option("--threads", *threads,
                  "worker threads (results are independent of this)")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
}

void add_chi(CLI::App* cmd, std::string* chi, double* plateau) {
  cmd->add_option("--chi", *chi, "cutoff shape")
      ->check(CLI::IsMember({"tent", "bump"}))
      ->capture_default_str();
  cmd->add_option("--plateau", *plateau, "bump plateau half-width, in (0,1)")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"aplab: a numerical laboratory for arithmetic progressions in the primes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", APLAB_VERSION);

  auto so = std::make_shared<SieveOpts>();
  CLI::App* sieve_cmd =
      app.add_subcommand("sieve", "build prime/multiplicative tables up to N and cache them");
  sieve_cmd->add_option("--N", so->N, "table limit")->required()->check(CLI::Range(
      static_cast<std::int64_t>(2), std::numeric_limits<std::int64_t>::max()));
  add_out_threads(sieve_cmd, &so->out, &so->threads);
  sieve_cmd->callback([so] { run_sieve(*so); });

  auto mo = std::make_shared<MajorantOpts>();
  CLI::App* majorant_cmd = app.add_subcommand(
      "majorant", "build the pseudorandom majorant nu on Z_N and check domination");
  majorant_cmd->add_option("--N", mo->N, "cyclic modulus (odd, coprime to (k-1)!)")
      ->required();
  majorant_cmd->add_option("--k", mo->k, "progression length")->capture_default_str();
  majorant_cmd->add_option("--w", mo->w, "W-trick smoothness bound")->capture_default_str();
  majorant_cmd->add_option("--R", mo->R, "divisor-sum truncation (0 = desk default N^(2/5))")
      ->capture_default_str();
  add_chi(majorant_cmd, &mo->chi, &mo->plateau);
  add_out_threads(majorant_cmd, &mo->out, &mo->threads);
  majorant_cmd->callback([mo] { run_majorant(*mo); });

  auto lo = std::make_shared<LfcOpts>();
  CLI::App* lfc_cmd = app.add_subcommand(
      "lfc", "doubled-variable linear-forms expectations of a measure on Z_N");
  lfc_cmd->add_option("--N", lo->N, "cyclic modulus")->required();
  lfc_cmd->add_option("--k", lo->k, "progression length")->capture_default_str();
  lfc_cmd->add_option("--nu", lo->nu_kind, "measure to test")
      ->check(CLI::IsMember({"uniform", "majorant"}))
      ->capture_default_str();
  CLI::Option* lfc_exact = lfc_cmd->add_flag("--exact", lo->exact, "exact contraction");
  CLI::Option* lfc_mc = lfc_cmd->add_flag("--mc", lo->mc, "Monte-Carlo estimate");
  lfc_exact->excludes(lfc_mc);
  lfc_mc->excludes(lfc_exact);
  lfc_cmd->add_option("--samples", lo->samples, "Monte-Carlo samples")->capture_default_str();
  lfc_cmd->add_option("--seed", lo->seed, "pattern/sample seed")->capture_default_str();
  lfc_cmd->add_option("--w", lo->w, "W-trick bound (nu=majorant)")->capture_default_str();
  lfc_cmd->add_option("--R", lo->R, "truncation (nu=majorant; 0 = desk default N^(2/5))")
      ->capture_default_str();
  add_chi(lfc_cmd, &lo->chi, &lo->plateau);
  add_out_threads(lfc_cmd, &lo->out, &lo->threads);
  lfc_cmd->callback([lo] { run_lfc(*lo); });

  auto co = std::make_shared<CutnormOpts>();
  CLI::App* cutnorm_cmd = app.add_subcommand(
      "cutnorm", "bipartite cut norm of the sum kernel of a function on Z_N (or a difference)");
  cutnorm_cmd
      ->add_option("files", co->files,
                   "one or two functions on Z_N (.bin or .csv); two files compare f - g")
      ->required()
      ->expected(1, 2);
  CLI::Option* cut_exact =
      cutnorm_cmd->add_flag("--exact", co->exact, "force exact enumeration (N <= 25)");
  CLI::Option* cut_mc =
      cutnorm_cmd->add_flag("--mc", co->mc, "force the seeded heuristic lower bound");
  cut_exact->excludes(cut_mc);
  cut_mc->excludes(cut_exact);
  cutnorm_cmd->add_option("--restarts", co->restarts, "heuristic restarts")
      ->check(CLI::Range(1, 100000))
      ->capture_default_str();
  cutnorm_cmd->add_option("--seed", co->seed, "heuristic seed")->capture_default_str();
  add_out_threads(cutnorm_cmd, &co->out, &co->threads);
  cutnorm_cmd->callback([co] { run_cutnorm(*co); });

  auto dmo = std::make_shared<DenseModelOpts>();
  CLI::App* dm_cmd = app.add_subcommand(
      "dense-model", "extract a [0,1]-valued dense model of a nonnegative function on Z_N");
  dm_cmd->add_option("file", dmo->input, "input function (.bin or .csv); omit for a seeded instance");
  dm_cmd->add_option("--N", dmo->N, "modulus of the seeded instance nu * 1_A");
  dm_cmd->add_option("--k", dmo->k, "progression length (seeded instance)")
      ->capture_default_str();
  dm_cmd->add_option("--w", dmo->w, "W-trick bound (seeded instance)")->capture_default_str();
  dm_cmd->add_option("--R", dmo->R, "truncation (seeded instance; 0 = desk default N^(2/5))")
      ->capture_default_str();
  add_chi(dm_cmd, &dmo->chi, &dmo->plateau);
  CLI::Option* dm_exact =
      dm_cmd->add_flag("--exact", dmo->exact, "force the exact separation oracle (N <= 25)");
  CLI::Option* dm_mc = dm_cmd->add_flag("--mc", dmo->mc, "force the heuristic oracle");
  dm_exact->excludes(dm_mc);
  dm_mc->excludes(dm_exact);
  dm_cmd->add_option("--restarts", dmo->restarts, "heuristic oracle restarts")
      ->check(CLI::Range(1, 100000))
      ->capture_default_str();
  dm_cmd->add_option("--seed", dmo->seed, "instance and oracle seed")->capture_default_str();
  add_out_threads(dm_cmd, &dmo->out, &dmo->threads);
  dm_cmd->callback([dmo] { run_dense_model(*dmo); });

  auto cno = std::make_shared<CountingOpts>();
  CLI::App* counting_cmd = app.add_subcommand(
      "counting", "triangle-count discrepancy between a sparse graph and its densified model");
  counting_cmd->add_option("--N", cno->N, "cyclic modulus (odd, coprime to 2; N <= 25 for exact norms)")
      ->required();
  counting_cmd->add_option("--k", cno->k, "progression length (must be 3)")
      ->capture_default_str();
  counting_cmd->add_option("--w", cno->w, "W-trick bound")->capture_default_str();
  counting_cmd->add_option("--R", cno->R, "truncation (0 = desk default N^(2/5))")
      ->capture_default_str();
  add_chi(counting_cmd, &cno->chi, &cno->plateau);
  counting_cmd->add_option("--restarts", cno->restarts, "heuristic cut-norm restarts")
      ->check(CLI::Range(1, 100000))
      ->capture_default_str();
  counting_cmd->add_option("--seed", cno->seed, "instance and heuristic seed")
      ->capture_default_str();
  add_out_threads(counting_cmd, &cno->out, &cno->threads);
  counting_cmd->callback([cno] { run_counting(*cno); });

  auto po = std::make_shared<Prop82Opts>();
  CLI::App* prop82_cmd = app.add_subcommand(
      "prop82", "box correlation of the squared divisor sum against its prediction");
  prop82_cmd->add_option("--N", po->N, "box end: samples are drawn from [1, N)")
      ->required()
      ->check(CLI::Range(static_cast<std::int64_t>(3),
                         std::numeric_limits<std::int64_t>::max()));
  prop82_cmd->add_option("--w", po->w, "W-trick bound")->capture_default_str();
  prop82_cmd->add_option("--R", po->R, "divisor-sum truncation")->capture_default_str();
  add_chi(prop82_cmd, &po->chi, &po->plateau);
  prop82_cmd->add_option("--samples", po->samples, "Monte-Carlo samples")
      ->capture_default_str();
  prop82_cmd->add_option("--seed", po->seed, "sampling seed")->capture_default_str();
  add_out_threads(prop82_cmd, &po->out, &po->threads);
  prop82_cmd->callback([po] { run_prop82(*po); });

  auto ao = std::make_shared<AnalyticOpts>();
  CLI::App* analytic_cmd = app.add_subcommand(
      "analytic", "cutoff Fourier profile, two-route c_chi, zeta pole and Euler factor checks");
  add_chi(analytic_cmd, &ao->chi, &ao->plateau);
  analytic_cmd->add_option("--R", ao->R, "truncation entering the Euler factor comparison")
      ->capture_default_str();
  analytic_cmd->add_option("--w", ao->w, "W-trick bound for the Euler sweep")
      ->capture_default_str();
  add_out_threads(analytic_cmd, &ao->out, &ao->threads);
  analytic_cmd->callback([ao] { run_analytic(*ao); });

  auto pao = std::make_shared<PrimeApsOpts>();
  CLI::App* pa_cmd = app.add_subcommand(
      "prime-aps", "count k-term prime progressions up to N, with two-squares decompositions");
  pa_cmd->add_option("--N", pao->N, "upper bound (progressions stay below N)")
      ->required()
      ->check(CLI::Range(static_cast<std::int64_t>(2),
                         std::numeric_limits<std::int64_t>::max()));
  pa_cmd->add_option("--k", pao->k, "progression length")->capture_default_str();
  CLI::Option* pa_w = pa_cmd->add_option(
      "--w", pao->w, "also report the weighted window density on Z_N with this W-trick bound");
  add_out_threads(pa_cmd, &pao->out, &pao->threads);
  pa_cmd->callback([pao, pa_w] {
    pao->w_given = pa_w->count() > 0;
    run_prime_aps(*pao);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    std::fputs("\n", stderr);
    std::fputs(app.help().c_str(), stderr);
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "aplab: error: %s\n", e.what());
    return 1;
  }
  return 0;
}
