// Copyright (c) 2026 the ncfr authors. Licensed under the Apache License,
// Version 2.0; see LICENSE for details.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ncfr/kernels.hpp"
#include "ncfr/repsys.hpp"
#include "ncfr/soscert.hpp"

namespace ncfr::gallery {

using linalg::Complex;
using linalg::Mat;

enum class Conclusion { NoPsdCompletionExists, PsdCompletionExists };

// Reproduction of one hand-checked no-completion instance: a psd base matrix
// whose one-step extension contains a fully forced principal submatrix that
// fails to be psd, independently of the free entry.
struct CounterexampleReport {
  std::string name;
  std::vector<std::string> base_labels;
  Mat base_matrix;
  double base_min_eig = 0.0;
  std::vector<std::string> forced_labels;
  Mat forced_submatrix;
  double forced_det = 0.0;
  double forced_min_eig = 0.0;
  Conclusion conclusion = Conclusion::PsdCompletionExists;
  // min eigenvalue of the one-step extension over a grid of free entries
  std::vector<std::pair<Complex, double>> free_entry_scan;
  std::map<std::string, double> extras;
  std::optional<kernels::PartialKernel> base_kernel;
};

// Z_3 * Z_2: psd base over {e, x1, x2} with no psd extension past x1^2.
CounterexampleReport z3z2_counterexample();

// Z_3 * Z_3 variant.
CounterexampleReport z3z3_counterexample();

// Two-variable Toeplitz: psd 7x7 base whose 8x8 extension forces a non-psd
// lower 7x7 block; the same holds starting from the upper 6x6 block.
CounterexampleReport toeplitz2d_counterexample();

// Frozen-constant regression check used by the CLI.
bool regression_ok(const CounterexampleReport& report, std::string* why = nullptr);

// 2*sqrt(2) e - (x1y1 + x1y2 + x2y1 - x2y2) over Z_2^{*2} x Z_2^{*2}.
soscert::NcPoly chsh_polynomial();

// Two-square closed-form factor of the CHSH slack.
soscert::NcPoly chsh_closed_form_factor();

// Explicit representation attaining the quantum maximum 2*sqrt(2).
repsys::Representation tsirelson_representation();

// Certifies the CHSH slack at W-degree <= x2 and Y-degree 1; throws if the
// solver cap is exceeded or the residual regresses.
soscert::GramCertificate chsh_certificate();

struct SeparationOptions {
  double delta = 0.1;       // required margin of the pairing with the base kernel
  int pool_size = 120;      // representations used to generate cuts
  int verify_samples = 240; // fresh representations for the final check
  int dim_max = 6;
  int max_rounds = 40;
  std::uint64_t seed = 0;
  bool try_sos = true;
};

// Searches for a Hermitian scalar polynomial supported on Her W_{<=level}
// that pairs negatively with the report's base kernel while staying psd on
// every sampled representation. Heuristic evidence only: positivity is
// sample-based, optionally corroborated by a higher-degree Gram certificate.
struct SeparationResult {
  bool found = false;
  soscert::NcPoly separating;
  double tau_pairing = 0.0;
  double sampled_min_eig = 0.0;
  int reps_used = 0;
  int rounds = 0;
  bool sos_attempted = false;
  bool sos_succeeded = false;
};

SeparationResult separation_search(const CounterexampleReport& report, const words::Word& level,
                                   const SeparationOptions& opts = {});

}  // namespace ncfr::gallery
