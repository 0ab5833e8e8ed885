#include "aplab/dense_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "aplab/matrix.hpp"
#include "aplab/norms.hpp"

namespace aplab {

namespace {

// Internal witness: indicator pair plus the fiber profile
// a[s] = #{(x,y) in A x B : x + y = s} / N^2, so that the witness value
// at model m is <a, f> - <a, m>.
struct Witness {
  std::vector<std::uint8_t> A, B;
  std::vector<double> a;
  double cf = 0.0;  // <a, f>
};

std::vector<double> fiber_profile(const std::vector<std::uint8_t>& A,
                                  const std::vector<std::uint8_t>& B, std::int64_t N) {
  std::vector<double> a(static_cast<std::size_t>(N), 0.0);
  for (std::int64_t x = 0; x < N; ++x) {
    if (!A[static_cast<std::size_t>(x)]) continue;
    for (std::int64_t y = 0; y < N; ++y) {
      if (!B[static_cast<std::size_t>(y)]) continue;
      std::int64_t s = x + y;
      if (s >= N) s -= N;
      a[static_cast<std::size_t>(s)] += 1.0;
    }
  }
  const double denom = static_cast<double>(N) * static_cast<double>(N);
  for (double& v : a) v /= denom;
  return a;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Worst witness violation at m; reports which witness and its sign.
double worst_violation(const std::vector<Witness>& ws, const std::vector<double>& m,
                       std::size_t* arg, double* sign) {
  double best = -1.0;
  for (std::size_t w = 0; w < ws.size(); ++w) {
    const double v = ws[w].cf - dot(ws[w].a, m);
    const double av = std::fabs(v);
    if (av > best) {
      best = av;
      if (arg) *arg = w;
      if (sign) *sign = (v >= 0.0) ? 1.0 : -1.0;
    }
  }
  return best;
}

}  // namespace

DenseModelResult find_dense_model(const CyclicFunction& f, const ModelSearchConfig& config) {
  const std::int64_t N = f.modulus;
  if (N < 1 || f.values.size() != static_cast<std::size_t>(N)) {
    throw std::invalid_argument("find_dense_model: malformed cyclic function");
  }
  for (double v : f.values) {
    if (!(v >= 0.0)) throw std::domain_error("find_dense_model: f must be nonnegative");
  }
  if (!(config.tol > 0.0)) throw std::invalid_argument("find_dense_model: tol must be > 0");
  if (config.max_rounds < 1) {
    throw std::invalid_argument("find_dense_model: max_rounds must be >= 1");
  }
  const int inner_iters = std::max(1, config.inner_iters);
  const double step_c = config.step_scale * static_cast<double>(N);
  const std::size_t n = static_cast<std::size_t>(N);

  // Incumbent: the clamp of f itself (exact when f is already in the box).
  std::vector<double> model(f.values);
  for (double& v : model) v = std::min(std::max(v, 0.0), 1.0);

  std::vector<Witness> witnesses;
  auto add_witness = [&](std::vector<std::uint8_t> A, std::vector<std::uint8_t> B) {
    for (const Witness& w : witnesses) {
      if (w.A == A && w.B == B) return false;
    }
    Witness w;
    w.A = std::move(A);
    w.B = std::move(B);
    w.a = fiber_profile(w.A, w.B, N);
    w.cf = dot(w.a, f.values);
    witnesses.push_back(std::move(w));
    return true;
  };
  add_witness(std::vector<std::uint8_t>(n, 1), std::vector<std::uint8_t>(n, 1));

  DenseModelResult res;
  res.exact_certificate = config.exact_separation;
  std::vector<double> best_model = model;
  double best_gap = std::numeric_limits<double>::infinity();

  std::vector<double> trial(n);
  for (int round = 1; round <= config.max_rounds; ++round) {
    // Inner solve: projected subgradient on the box against the current
    // witness set, warm-started from the incumbent; keep the best iterate.
    trial = model;
    double obj = worst_violation(witnesses, model, nullptr, nullptr);
    for (int t = 1; t <= inner_iters && obj > 0.0; ++t) {
      std::size_t arg = 0;
      double sign = 1.0;
      const double cur = worst_violation(witnesses, trial, &arg, &sign);
      if (cur == 0.0) break;
      const double eta = step_c / std::sqrt(static_cast<double>(t));
      const std::vector<double>& a = witnesses[arg].a;
      for (std::size_t i = 0; i < n; ++i) {
        trial[i] = std::min(std::max(trial[i] + eta * sign * a[i], 0.0), 1.0);
      }
      const double next = worst_violation(witnesses, trial, nullptr, nullptr);
      if (next < obj) {
        obj = next;
        model = trial;
      }
    }

    // Separation on the incumbent.
    Matrix diff(n, n);
    for (std::size_t x = 0; x < n; ++x) {
      double* row = diff.row(x);
      for (std::size_t y = 0; y < n; ++y) {
        std::size_t s = x + y;
        if (s >= n) s -= n;
        row[y] = f.values[s] - model[s];
      }
    }
    const CutNormResult cn =
        config.exact_separation
            ? cutnorm_bipartite_exact(diff, config.threads)
            : cutnorm_bipartite_heuristic(diff, config.restarts,
                                          config.seed + static_cast<std::uint64_t>(round),
                                          config.threads);

    // Exact separation certifies the norm at the incumbent; heuristic
    // separation only produces lower estimates, so keep the larger of
    // the oracle value and the witness objective.
    const double verified = config.exact_separation ? cn.value : std::max(cn.value, obj);
    if (verified < best_gap) {
      best_gap = verified;
      best_model = model;
    }
    res.trace.push_back({round, obj, cn.value, best_gap, witnesses.size()});

    if (cn.value <= config.tol) {
      res.converged = true;
      break;
    }
    // A repeated witness means the next round would replay this one
    // exactly (the inner solve is deterministic and warm-started), so
    // the search has reached its fixed point.
    if (!add_witness(cn.witness[0], cn.witness[1])) break;
  }

  res.model.modulus = N;
  res.model.values = best_model;
  res.achieved_gap = best_gap;
  res.rounds = static_cast<int>(res.trace.size());
  res.certificate.reserve(witnesses.size());
  for (const Witness& w : witnesses) {
    WitnessPair wp;
    wp.A = w.A;
    wp.B = w.B;
    wp.violation = w.cf - dot(w.a, best_model);
    res.certificate.push_back(std::move(wp));
  }
  return res;
}

std::string DenseModelResult::to_json_string(int indent) const {
  nlohmann::json j;
  j["achieved_gap"] = achieved_gap;
  j["converged"] = converged;
  j["exact_certificate"] = exact_certificate;
  j["rounds"] = rounds;
  j["model_mean"] = model.mean();
  j["witnesses"] = certificate.size();
  nlohmann::json tr = nlohmann::json::array();
  for (const ModelRoundTrace& r : trace) {
    nlohmann::json row;
    row["round"] = r.round;
    row["objective"] = r.objective;
    row["oracle_value"] = r.oracle_value;
    row["achieved_gap"] = r.achieved_gap;
    row["witnesses"] = r.witnesses;
    tr.push_back(row);
  }
  j["trace"] = tr;
  return j.dump(indent);
}

MeanPreservationReport mean_preservation_check(const CyclicFunction& f,
                                               const DenseModelResult& result) {
  if (f.modulus != result.model.modulus) {
    throw std::invalid_argument("mean_preservation_check: modulus mismatch");
  }
  MeanPreservationReport rep;
  rep.mean_f = f.mean();
  rep.mean_model = result.model.mean();
  rep.diff = std::fabs(rep.mean_f - rep.mean_model);
  rep.gap = result.achieved_gap;
  rep.bound_ok = rep.diff <= rep.gap + 1e-12;
  return rep;
}

std::string MeanPreservationReport::to_json_string(int indent) const {
  nlohmann::json j;
  j["mean_f"] = mean_f;
  j["mean_model"] = mean_model;
  j["diff"] = diff;
  j["gap"] = gap;
  j["bound_ok"] = bound_ok;
  return j.dump(indent);
}

}  // namespace aplab
