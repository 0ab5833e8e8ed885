#include "aplab/forms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

#include "aplab/util.hpp"

namespace aplab {

namespace {

std::int64_t checked_i64(__int128 v, const char* what) {
  if (v > static_cast<__int128>(INT64_MAX) || v < static_cast<__int128>(INT64_MIN)) {
    throw std::out_of_range(std::string(what) + ": value exceeds 64-bit range");
  }
  return static_cast<std::int64_t>(v);
}

}  // namespace

std::int64_t LinearForm::eval(const std::vector<std::int64_t>& x) const {
  if (x.size() != coeffs.size()) {
    throw std::invalid_argument("LinearForm::eval: argument dimension mismatch");
  }
  __int128 acc = 0;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    acc += static_cast<__int128>(coeffs[i]) * x[i];
  }
  acc = acc * w_scale + constant;
  return checked_i64(acc, "LinearForm::eval");
}

bool LinearFormsSystem::pairwise_independent() const {
  for (const LinearForm& f : forms) {
    if (f.coeffs.size() != t) return false;
    if (std::all_of(f.coeffs.begin(), f.coeffs.end(), [](std::int64_t c) { return c == 0; })) {
      return false;  // a zero homogeneous part is degenerate
    }
  }
  for (std::size_t a = 0; a < forms.size(); ++a) {
    for (std::size_t b = a + 1; b < forms.size(); ++b) {
      const auto& u = forms[a].coeffs;
      const auto& v = forms[b].coeffs;
      // Proportional iff all 2x2 minors vanish.
      bool proportional = true;
      for (std::size_t i = 0; i < t && proportional; ++i) {
        for (std::size_t j = i + 1; j < t; ++j) {
          __int128 minor = static_cast<__int128>(u[i]) * v[j] - static_cast<__int128>(u[j]) * v[i];
          if (minor != 0) {
            proportional = false;
            break;
          }
        }
      }
      if (proportional) return false;
    }
  }
  return true;
}

LinearFormsSystem kap_forms(int k) {
  if (k < 3) throw std::invalid_argument("kap_forms: k must be >= 3");
  LinearFormsSystem sys;
  sys.t = static_cast<std::size_t>(k);
  for (int j = k; j >= 1; --j) {
    LinearForm f;
    f.coeffs.resize(sys.t, 0);
    for (int i = 1; i <= k; ++i) {
      if (i != j) f.coeffs[static_cast<std::size_t>(i - 1)] = j - i;
    }
    sys.forms.push_back(std::move(f));
  }
  return sys;
}

ExponentPattern ExponentPattern::all_ones(int k) {
  ExponentPattern p;
  p.k = k;
  p.on.assign(static_cast<std::size_t>(k) << (k - 1), 1);
  return p;
}

ExponentPattern ExponentPattern::all_zeros(int k) {
  ExponentPattern p;
  p.k = k;
  p.on.assign(static_cast<std::size_t>(k) << (k - 1), 0);
  return p;
}

ExponentPattern ExponentPattern::single(int k, int j, std::uint32_t omega_bits) {
  ExponentPattern p = all_zeros(k);
  p.on[p.slot(j, omega_bits)] = 1;
  return p;
}

std::size_t ExponentPattern::slot(int j, std::uint32_t omega_bits) const {
  if (j < 1 || j > k) throw std::out_of_range("ExponentPattern::slot: j out of range");
  const std::uint32_t half = 1u << (k - 1);
  if (omega_bits >= half) throw std::out_of_range("ExponentPattern::slot: omega out of range");
  return (static_cast<std::size_t>(j - 1) << (k - 1)) + omega_bits;
}

std::size_t ExponentPattern::active_count() const {
  return static_cast<std::size_t>(std::count(on.begin(), on.end(), std::uint8_t{1}));
}

std::string ExponentPattern::to_string() const {
  std::string s(on.size(), '0');
  for (std::size_t i = 0; i < on.size(); ++i) {
    if (on[i]) s[i] = '1';
  }
  return s;
}

std::vector<ExponentPattern> all_patterns(int k) {
  if (k != 3) {
    throw std::invalid_argument(
        "all_patterns: full enumeration is only supported for k = 3 "
        "(4096 patterns); use sample_patterns for larger k");
  }
  const std::size_t slots = static_cast<std::size_t>(k) << (k - 1);
  std::vector<ExponentPattern> out;
  out.reserve(std::size_t{1} << slots);
  for (std::uint32_t bits = 0; bits < (1u << slots); ++bits) {
    ExponentPattern p = ExponentPattern::all_zeros(k);
    for (std::size_t s = 0; s < slots; ++s) {
      p.on[s] = static_cast<std::uint8_t>((bits >> s) & 1u);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<ExponentPattern> sample_patterns(int k, std::size_t count, std::uint64_t seed) {
  const std::size_t slots = static_cast<std::size_t>(k) << (k - 1);
  const std::uint32_t half = 1u << (k - 1);
  std::vector<ExponentPattern> out;
  std::unordered_set<std::string> seen;
  auto push = [&](ExponentPattern p) {
    if (out.size() >= count) return;
    std::string key = p.to_string();
    if (seen.insert(std::move(key)).second) out.push_back(std::move(p));
  };
  push(ExponentPattern::all_ones(k));
  for (int j = 1; j <= k; ++j) {
    for (std::uint32_t w = 0; w < half; ++w) {
      push(ExponentPattern::single(k, j, w));
    }
  }
  auto rng = make_stream_rng(seed, /*stream_id=*/0);
  std::size_t attempts = 0;
  while (out.size() < count && attempts < 64 * count + 4096) {
    ++attempts;
    ExponentPattern p = ExponentPattern::all_zeros(k);
    for (std::size_t s = 0; s < slots; ++s) {
      p.on[s] = static_cast<std::uint8_t>(rng() & 1u);
    }
    push(std::move(p));
  }
  return out;
}

namespace {

// One multiplicand nu(psi_j(x^(omega))) of the doubled-variable product,
// with coefficients reduced mod N and variables addressed by the flat
// index (i-1)*2 + e over copies x_i^(e).
struct Factor {
  int j = 0;
  std::vector<std::pair<std::size_t, std::int64_t>> terms;  // (flat var, coeff mod N)
};

std::vector<Factor> active_factors(const ExponentPattern& pattern, std::int64_t N) {
  const int k = pattern.k;
  const std::uint32_t half = 1u << (k - 1);
  std::vector<Factor> factors;
  for (int j = 1; j <= k; ++j) {
    for (std::uint32_t w = 0; w < half; ++w) {
      if (!pattern.on[pattern.slot(j, w)]) continue;
      Factor f;
      f.j = j;
      for (int i = 1; i <= k; ++i) {
        if (i == j) continue;
        const std::size_t pos = static_cast<std::size_t>(i < j ? i - 1 : i - 2);
        const std::size_t copy = (w >> pos) & 1u;
        const std::int64_t coeff = mod_reduce(j - i, N);
        f.terms.emplace_back(static_cast<std::size_t>(i - 1) * 2 + copy, coeff);
      }
      factors.push_back(std::move(f));
    }
  }
  return factors;
}

}  // namespace

double lf_expectation_exact(const CyclicFunction& nu, const ExponentPattern& pattern,
                            std::uint64_t op_budget) {
  const std::int64_t N = nu.modulus;
  const int k = pattern.k;
  if (k < 3) throw std::invalid_argument("lf_expectation_exact: pattern has k < 3");
  if (N < 1) throw std::invalid_argument("lf_expectation_exact: empty cyclic group");

  std::vector<Factor> factors = active_factors(pattern, N);
  if (factors.empty()) return 1.0;

  // Split on how a factor touches the two copies of x_1: psi_1 omits x_1
  // entirely; every other form contains it with coefficient j - 1, via
  // the copy selected by omega bit 0.
  struct InnerFactor {
    std::int64_t c1 = 0;                                     // coeff of x_1 mod N
    std::vector<std::pair<std::size_t, std::int64_t>> rest;  // outer-variable terms
  };
  std::vector<Factor> outer_factors;          // j == 1
  std::vector<InnerFactor> inner[2];          // j >= 2, keyed by copy of x_1
  for (auto& f : factors) {
    if (f.j == 1) {
      outer_factors.push_back(std::move(f));
      continue;
    }
    InnerFactor g;
    std::size_t copy = 0;
    for (auto& [var, coeff] : f.terms) {
      if (var / 2 == 0) {
        g.c1 = coeff;
        copy = var % 2;
      } else {
        g.rest.emplace_back(var, coeff);
      }
    }
    inner[copy].push_back(std::move(g));
  }

  // Outer odometer runs over the 2(k-1) copies of x_2..x_k.
  const std::size_t outer_vars = 2 * static_cast<std::size_t>(k - 1);
  const long double outer_count = std::pow(static_cast<long double>(N), outer_vars);
  long double per_tuple = static_cast<long double>(factors.size());
  for (int copy = 0; copy < 2; ++copy) {
    if (!inner[copy].empty()) per_tuple += static_cast<long double>(N) * inner[copy].size();
  }
  const long double est_ops = outer_count * per_tuple;
  if (est_ops > static_cast<long double>(op_budget)) {
    std::ostringstream msg;
    msg << "lf_expectation_exact: contraction needs ~" << static_cast<double>(est_ops)
        << " operations (budget " << op_budget
        << "); use the Monte-Carlo path (lf_expectation_mc)";
    throw OperationBudgetExceeded(msg.str());
  }

  // Residuals tracked mod N.  Flat variable index v maps to outer slot
  // v - 2 (x_1 copies are eliminated analytically).  update_lists[slot]
  // holds (kind, index, coeff): kind 0 -> outer_factors residual, kind
  // 1/2 -> inner[0]/inner[1] residual.
  struct Update {
    int kind;
    std::size_t idx;
    std::int64_t coeff;
  };
  std::vector<std::vector<Update>> updates(outer_vars);
  std::vector<std::int64_t> outer_res(outer_factors.size(), 0);
  std::vector<std::int64_t> inner_res[2];
  inner_res[0].assign(inner[0].size(), 0);
  inner_res[1].assign(inner[1].size(), 0);
  for (std::size_t fi = 0; fi < outer_factors.size(); ++fi) {
    for (auto& [var, coeff] : outer_factors[fi].terms) {
      updates[var - 2].push_back({0, fi, coeff});
    }
  }
  for (int copy = 0; copy < 2; ++copy) {
    for (std::size_t fi = 0; fi < inner[copy].size(); ++fi) {
      for (auto& [var, coeff] : inner[copy][fi].rest) {
        updates[var - 2].push_back({copy + 1, fi, coeff});
      }
    }
  }

  const double* vals = nu.values.data();
  std::vector<std::int64_t> digits(outer_vars, 0);
  long double acc = 0.0L;
  const std::uint64_t tuples = static_cast<std::uint64_t>(std::llround(outer_count));
  for (std::uint64_t step = 0;; ++step) {
    double p_out = 1.0;
    for (std::size_t fi = 0; fi < outer_factors.size(); ++fi) {
      p_out *= vals[outer_res[fi]];
    }
    double s01 = 1.0;
    for (int copy = 0; copy < 2 && s01 != 0.0; ++copy) {
      if (inner[copy].empty()) continue;
      double s = 0.0;
      // idx_f walks (r_f + c1_f * a) mod N as a increases.
      const std::size_t m = inner[copy].size();
      std::int64_t idx0 = inner_res[copy][0];
      if (m == 1) {
        const std::int64_t step1 = inner[copy][0].c1;
        for (std::int64_t a = 0; a < N; ++a) {
          s += vals[idx0];
          idx0 += step1;
          if (idx0 >= N) idx0 -= N;
        }
      } else {
        std::vector<std::int64_t> idx(m);
        for (std::size_t fi = 0; fi < m; ++fi) idx[fi] = inner_res[copy][fi];
        for (std::int64_t a = 0; a < N; ++a) {
          double prod = 1.0;
          for (std::size_t fi = 0; fi < m; ++fi) {
            prod *= vals[idx[fi]];
            idx[fi] += inner[copy][fi].c1;
            if (idx[fi] >= N) idx[fi] -= N;
          }
          s += prod;
        }
      }
      s01 *= s / static_cast<double>(N);
    }
    acc += static_cast<long double>(p_out) * s01;

    if (step + 1 == tuples) break;
    // Advance the odometer; every digit that changes (increment or
    // wrap) shifts each residual by one coefficient step mod N.
    std::size_t v = 0;
    while (true) {
      ++digits[v];
      for (const Update& u : updates[v]) {
        std::int64_t* r = u.kind == 0 ? &outer_res[u.idx] : &inner_res[u.kind - 1][u.idx];
        *r += u.coeff;
        if (*r >= N) *r -= N;
      }
      if (digits[v] < N) break;
      digits[v] = 0;
      ++v;
    }
  }
  return static_cast<double>(acc / outer_count);
}

namespace {

struct StreamMoments {
  double sum = 0.0;
  double sumsq = 0.0;
  std::uint64_t count = 0;
};

}  // namespace

McReport lf_expectation_mc(const CyclicFunction& nu, const ExponentPattern& pattern,
                           std::uint64_t samples, std::uint64_t seed, std::uint32_t streams,
                           unsigned threads, bool antithetic) {
  const std::int64_t N = nu.modulus;
  if (pattern.k < 3) throw std::invalid_argument("lf_expectation_mc: pattern has k < 3");
  if (N < 1) throw std::invalid_argument("lf_expectation_mc: empty cyclic group");
  if (samples < 1000) throw std::invalid_argument("lf_expectation_mc: need at least 1000 samples");
  if (streams == 0) throw std::invalid_argument("lf_expectation_mc: need at least one stream");

  const std::vector<Factor> factors = active_factors(pattern, N);
  const std::size_t nvars = 2 * static_cast<std::size_t>(pattern.k);
  const double* vals = nu.values.data();

  std::vector<StreamMoments> per_stream(streams);
  const std::uint64_t base = samples / streams;
  const std::uint64_t rem = samples % streams;

  parallel_chunks(streams, threads, streams, [&](std::size_t, std::size_t lo, std::size_t hi) {
    std::vector<std::int64_t> x(nvars);
    for (std::size_t s = lo; s < hi; ++s) {
      auto rng = make_stream_rng(seed, static_cast<std::uint64_t>(s));
      StreamMoments m;
      m.count = base + (s < rem ? 1 : 0);
      for (std::uint64_t it = 0; it < m.count; ++it) {
        for (std::size_t v = 0; v < nvars; ++v) {
          x[v] = static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(N)));
        }
        double prod = 1.0;
        for (const Factor& f : factors) {
          std::int64_t r = 0;
          for (auto& [var, coeff] : f.terms) {
            r += x[var] * coeff % N;
            if (r >= N) r -= N;
          }
          prod *= vals[r];
        }
        double sample = prod;
        if (antithetic) {
          double prod2 = 1.0;
          for (const Factor& f : factors) {
            std::int64_t r = 0;
            for (auto& [var, coeff] : f.terms) {
              r += (N - x[var]) % N * coeff % N;
              if (r >= N) r -= N;
            }
            prod2 *= vals[r];
          }
          sample = 0.5 * (prod + prod2);
        }
        m.sum += sample;
        m.sumsq += sample * sample;
      }
      per_stream[s] = m;
    }
  });

  // Merge in stream order so the result is independent of threading.
  double sum = 0.0, sumsq = 0.0;
  std::uint64_t count = 0;
  for (const StreamMoments& m : per_stream) {
    sum += m.sum;
    sumsq += m.sumsq;
    count += m.count;
  }
  McReport rep;
  rep.samples = count;
  rep.seed = seed;
  rep.streams = streams;
  rep.antithetic = antithetic;
  rep.estimate = sum / static_cast<double>(count);
  const double var =
      std::max(0.0, (sumsq - sum * rep.estimate) / static_cast<double>(count - 1));
  rep.stderr_est = std::sqrt(var / static_cast<double>(count));
  return rep;
}

std::string McReport::to_json_string(int indent) const {
  nlohmann::json j;
  j["estimate"] = estimate;
  j["stderr"] = stderr_est;
  j["samples"] = samples;
  j["seed"] = seed;
  j["streams"] = streams;
  j["antithetic"] = antithetic;
  return j.dump(indent);
}

BoxCorrelationReport box_correlation_experiment(const LinearFormsSystem& system, const WTrick& wt,
                                                const Box& box, double R, const CutoffFunction& chi,
                                                std::uint64_t samples, std::uint64_t seed,
                                                std::uint32_t streams, unsigned threads) {
  if (!system.pairwise_independent()) {
    throw std::invalid_argument("box_correlation_experiment: forms must be pairwise independent");
  }
  if (box.dims.size() != system.t) {
    throw std::invalid_argument("box_correlation_experiment: box dimension mismatch");
  }
  for (auto& [lo, hi] : box.dims) {
    if (hi <= lo) throw std::invalid_argument("box_correlation_experiment: empty box side");
  }
  if (samples < 1000) {
    throw std::invalid_argument("box_correlation_experiment: need at least 1000 samples");
  }
  if (streams == 0) {
    throw std::invalid_argument("box_correlation_experiment: need at least one stream");
  }

  // Shifted forms theta = W psi + 1 must stay positive 64-bit across the
  // box; linear forms take their extrema at corners.
  std::vector<LinearForm> shifted;
  for (const LinearForm& f : system.forms) {
    LinearForm g = f;
    g.w_scale = checked_i64(static_cast<__int128>(f.w_scale) * static_cast<__int128>(wt.W),
                            "box_correlation_experiment: W scale");
    g.constant = checked_i64(static_cast<__int128>(f.constant) * static_cast<__int128>(wt.W) + 1,
                             "box_correlation_experiment: W shift");
    shifted.push_back(std::move(g));
  }
  for (const LinearForm& g : shifted) {
    __int128 lo_val = g.constant, hi_val = g.constant;
    for (std::size_t i = 0; i < system.t; ++i) {
      const __int128 c = static_cast<__int128>(g.coeffs[i]) * g.w_scale;
      const __int128 a = c * box.dims[i].first;
      const __int128 b = c * (box.dims[i].second - 1);
      lo_val += std::min(a, b);
      hi_val += std::max(a, b);
    }
    if (lo_val < 1) {
      throw std::domain_error(
          "box_correlation_experiment: a shifted form is non-positive somewhere on the box");
    }
    checked_i64(hi_val, "box_correlation_experiment: shifted form");
  }

  const DivisorWeights dw(chi, R);
  const std::size_t m = system.forms.size();
  const double cchi = c_chi(chi);
  const double factor = static_cast<double>(wt.W) / static_cast<double>(wt.phi_W) * cchi *
                        std::log(R);
  const double rhs = std::pow(factor, static_cast<double>(m));

  std::vector<StreamMoments> per_stream(streams);
  const std::uint64_t base = samples / streams;
  const std::uint64_t rem = samples % streams;
  parallel_chunks(streams, threads, streams, [&](std::size_t, std::size_t lo, std::size_t hi) {
    std::vector<std::int64_t> x(system.t);
    for (std::size_t s = lo; s < hi; ++s) {
      auto rng = make_stream_rng(seed, static_cast<std::uint64_t>(s));
      StreamMoments mom;
      mom.count = base + (s < rem ? 1 : 0);
      for (std::uint64_t it = 0; it < mom.count; ++it) {
        for (std::size_t i = 0; i < system.t; ++i) {
          const std::uint64_t side = static_cast<std::uint64_t>(box.side(i));
          x[i] = box.dims[i].first + static_cast<std::int64_t>(uniform_below(rng, side));
        }
        double prod = 1.0;
        for (const LinearForm& g : shifted) {
          const double lam = dw.evaluate(g.eval(x));
          prod *= lam * lam;
        }
        mom.sum += prod;
        mom.sumsq += prod * prod;
      }
      per_stream[s] = mom;
    }
  });

  double sum = 0.0, sumsq = 0.0;
  std::uint64_t count = 0;
  for (const StreamMoments& mom : per_stream) {
    sum += mom.sum;
    sumsq += mom.sumsq;
    count += mom.count;
  }
  BoxCorrelationReport rep;
  rep.samples = count;
  rep.seed = seed;
  rep.m = m;
  rep.R = R;
  rep.w = wt.w;
  rep.lhs = sum / static_cast<double>(count);
  const double var = std::max(0.0, (sumsq - sum * rep.lhs) / static_cast<double>(count - 1));
  rep.stderr_est = std::sqrt(var / static_cast<double>(count));
  rep.rhs = rhs;
  rep.ratio = rep.lhs / rhs;
  rep.ratio_lo = (rep.lhs - 2.0 * rep.stderr_est) / rhs;
  rep.ratio_hi = (rep.lhs + 2.0 * rep.stderr_est) / rhs;
  return rep;
}

std::string BoxCorrelationReport::to_json_string(int indent) const {
  nlohmann::json j;
  j["lhs"] = lhs;
  j["stderr"] = stderr_est;
  j["rhs"] = rhs;
  j["ratio"] = ratio;
  j["ratio_lo"] = ratio_lo;
  j["ratio_hi"] = ratio_hi;
  j["samples"] = samples;
  j["seed"] = seed;
  j["m"] = m;
  j["R"] = R;
  j["w"] = w;
  return j.dump(indent);
}

namespace {

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  b %= p;
  while (e) {
    if (e & 1) r = static_cast<std::uint64_t>(static_cast<unsigned __int128>(r) * b % p);
    b = static_cast<std::uint64_t>(static_cast<unsigned __int128>(b) * b % p);
    e >>= 1;
  }
  return r;
}

}  // namespace

std::pair<std::uint64_t, std::uint64_t> local_zero_count(const LinearFormsSystem& system,
                                                         const WTrick& wt, std::uint64_t p,
                                                         std::uint32_t subset_mask) {
  if (p < 2) throw std::invalid_argument("local_zero_count: p must be prime");
  const std::size_t t = system.t;
  unsigned __int128 pt = 1;
  for (std::size_t i = 0; i < t; ++i) {
    pt *= p;
    if (pt > static_cast<unsigned __int128>(UINT64_MAX)) {
      throw std::out_of_range("local_zero_count: p^t exceeds 64-bit range");
    }
  }
  const std::uint64_t total = static_cast<std::uint64_t>(pt);

  // Rows of [A | b] for W psi_j(x) + 1 == 0 (mod p), i.e.
  // (W mod p) <coeffs_j, x> == -(W constant_j + 1) (mod p).
  std::vector<std::vector<std::uint64_t>> rows;
  for (std::size_t fi = 0; fi < system.forms.size(); ++fi) {
    if (!((subset_mask >> fi) & 1u)) continue;
    const LinearForm& f = system.forms[fi];
    auto mulp = [p](std::uint64_t a, std::uint64_t b) {
      return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
    };
    const std::uint64_t wmod =
        mulp(static_cast<std::uint64_t>(mod_reduce(f.w_scale, static_cast<std::int64_t>(p))),
             static_cast<std::uint64_t>(wt.W) % p);
    std::vector<std::uint64_t> row(t + 1, 0);
    for (std::size_t i = 0; i < t; ++i) {
      row[i] = mulp(
          static_cast<std::uint64_t>(mod_reduce(f.coeffs[i], static_cast<std::int64_t>(p))), wmod);
    }
    const std::uint64_t shift =
        (mulp(static_cast<std::uint64_t>(mod_reduce(f.constant, static_cast<std::int64_t>(p))),
              wmod) +
         1) %
        p;
    row[t] = (p - shift) % p;  // RHS
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return {total, total};

  // Gaussian elimination over F_p.
  std::size_t rank = 0;
  for (std::size_t col = 0; col < t && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[rank], rows[pivot]);
    const std::uint64_t inv = pow_mod(rows[rank][col], p - 2, p);
    for (std::size_t c = col; c <= t; ++c) {
      rows[rank][c] = static_cast<std::uint64_t>(
          static_cast<unsigned __int128>(rows[rank][c]) * inv % p);
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      const std::uint64_t mul = rows[r][col];
      for (std::size_t c = col; c <= t; ++c) {
        const std::uint64_t sub = static_cast<std::uint64_t>(
            static_cast<unsigned __int128>(rows[rank][c]) * mul % p);
        rows[r][c] = (rows[r][c] + p - sub) % p;
      }
    }
    ++rank;
  }
  for (std::size_t r = rank; r < rows.size(); ++r) {
    if (rows[r][t] != 0) return {0, total};  // inconsistent
  }
  std::uint64_t solutions = 1;
  for (std::size_t i = 0; i < t - rank; ++i) solutions *= p;
  return {solutions, total};
}

}  // namespace aplab
