#pragma once

// Constructive dense-model extraction on Z_N: given f >= 0 (typically
// f <= nu for a pseudorandom majorant nu), find ftilde in [0,1]^N whose
// pairwise cut-type distance
//
//     || f - ftilde ||_{box,2} = max_{A,B subsets of Z_N}
//         | E_{x,y}[ (f - ftilde)(x + y) 1_A(x) 1_B(y) ] |
//
// is small.  The search is a cutting-plane min-max: keep a set of
// witness pairs (A, B), minimize the worst witness violation over the
// box [0,1]^N by projected subgradient (step c / sqrt(t) with
// c = step_scale * N), then ask the cut-norm separation oracle for a
// new violated pair; stop when the oracle finds nothing above tol.
//
// The pair (Z_N, Z_N) is always seeded into the witness set, so the
// achieved gap also bounds |mean(f) - mean(ftilde)|.

#include <cstdint>
#include <string>
#include <vector>

#include "aplab/cyclic.hpp"

namespace aplab {

struct ModelSearchConfig {
  int max_rounds = 40;          // separation rounds (witness additions)
  bool exact_separation = true; // exact cut norm (N <= 25) vs heuristic ascent
  double tol = 1e-3;            // stop once the oracle's violation is <= tol
  int inner_iters = 2000;       // projected-subgradient steps per round
  double step_scale = 1.0;      // c = step_scale * N in the c/sqrt(t) schedule
  int restarts = 32;            // heuristic separation restarts
  std::uint64_t seed = 0;       // heuristic separation seed
  unsigned threads = 1;         // separation oracle threads
};

struct WitnessPair {
  std::vector<std::uint8_t> A, B;  // indicator vectors over Z_N
  double violation = 0.0;  // E[(f - model)(x+y) 1_A 1_B] against the final model
};

struct ModelRoundTrace {
  int round = 0;
  double objective = 0.0;     // worst witness violation after the inner solve
  double oracle_value = 0.0;  // separation value at the round's incumbent
  double achieved_gap = 0.0;  // best verified gap so far (non-increasing)
  std::size_t witnesses = 0;  // witness count when the round closed
};

struct DenseModelResult {
  CyclicFunction model;        // in [0,1]^N exactly
  double achieved_gap = 0.0;   // verified bound at `model` (exact when
                               // exact_certificate, otherwise the best
                               // lower estimate the run produced)
  bool converged = false;      // oracle violation fell below tol
  bool exact_certificate = false;  // gap verified by exact enumeration
  int rounds = 0;
  std::vector<WitnessPair> certificate;  // all witnesses, violations vs model
  std::vector<ModelRoundTrace> trace;

  std::string to_json_string(int indent = 2) const;
};

// Requires f >= 0 entrywise (std::domain_error otherwise) and a valid
// config (tol > 0, max_rounds >= 1; std::invalid_argument otherwise).
// Never throws on non-convergence: the best incumbent is returned with
// converged = false.
DenseModelResult find_dense_model(const CyclicFunction& f, const ModelSearchConfig& config = {});

struct MeanPreservationReport {
  double mean_f = 0.0;
  double mean_model = 0.0;
  double diff = 0.0;       // |mean_f - mean_model|
  double gap = 0.0;        // the run's achieved_gap
  bool bound_ok = false;   // diff <= gap + 1e-12 (full pair is a witness)
  std::string to_json_string(int indent = 2) const;
};

MeanPreservationReport mean_preservation_check(const CyclicFunction& f,
                                               const DenseModelResult& result);

}  // namespace aplab
