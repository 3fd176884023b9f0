// Copyright (c) 2026 the ncfr authors. Licensed under the Apache License,
// Version 2.0; see LICENSE for details.

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "ncfr/poly.hpp"
#include "ncfr/words.hpp"

namespace ncfr::soscert {

// One affine constraint: the blocks of the Gram matrix over the listed
// (row, col) monomial pairs sum to the target coefficient.
struct Coset {
  words::ProductElement alpha;
  std::vector<std::pair<int, int>> pairs;
  Mat target;
};

struct ConstraintSystem {
  words::ProductSpec spec;
  std::vector<words::Monomial> monomials;
  int K = 1;
  std::vector<Coset> cosets;

  int gram_dim() const { return static_cast<int>(monomials.size()) * K; }
};

// Builds the coset partition of W_{<=wbound} x Y_{<=m_prime} monomial pairs
// and the affine system "coset sums reproduce the coefficients of A"
// (zero target off the support). Throws when the support of A does not fit
// the level.
ConstraintSystem gram_constraints(const NcPoly& A, const words::Word& wbound, int m_prime);

struct SolveOptions {
  double tol = 1e-9;
  int max_iter = 50000;
  std::uint64_t seed = 0;  // reserved; the iteration is deterministic
};

struct SolveResult {
  Mat Z;
  bool feasible = false;
  double psd_residual = 0.0;     // max(0, -min eigenvalue) of Z
  double affine_residual = 0.0;  // max coset deviation before the final projection
  int iterations = 0;
};

// Alternating projections between the psd cone and the coset-sum affine
// subspace with Dykstra correction, plus a Gauss-Newton polish of the Gram
// factor at checkpoints (boundary-feasible instances stall under plain
// alternating projections). Non-convergence is reported as infeasible at this
// level; it is not a proof of infeasibility.
SolveResult solve_feasibility(const ConstraintSystem& cs, const SolveOptions& opts = {});

// Spectral factorization of the Gram matrix: eigenvalues above
// rank_tol_rel * lambda_max are retained, B row i = sqrt(lambda_i) q_i*.
// Returns per-monomial blocks of size (retained rank) x K.
std::vector<Mat> factor_gram(const Mat& Z, int n_monomials, int K, double rank_tol_rel);

// B* B as a Hermitian polynomial: coefficient of alpha is
// sum over pairs with m_v^{-1} m_u = alpha of B_v* B_u.
NcPoly convolve_adjoint(const NcPoly& B);

struct GramCertificate {
  words::ProductSpec spec;
  std::vector<words::Monomial> monomials;
  Mat Z;
  std::vector<Mat> B_terms;  // aligned with monomials
  int K = 1;
  int K_prime = 1;
  int m_prime = 0;
  double gram_min_eig = 0.0;
  double residual = 0.0;  // symbolic convolution distance to the target
  int iterations = 0;
};

// The analytic polynomial carried by a certificate.
NcPoly certificate_factor(const GramCertificate& cert);

struct LevelReport {
  int m_prime = 0;
  double psd_residual = 0.0;
  double affine_residual = 0.0;
  int iterations = 0;
};

struct CertifyResult {
  std::optional<GramCertificate> certificate;
  std::vector<LevelReport> levels;
};

struct CertifyOptions {
  int max_y_degree = 6;
  double rank_tol_rel = 1e-8;
  SolveOptions solve;
};

// Feasibility search over Y-degrees M, M+1, ..., max_y_degree at fixed
// W-bound; on success the Gram matrix is factored into a certificate.
CertifyResult certify(const NcPoly& A, const words::Word& wbound, int M,
                      const CertifyOptions& opts = {});

// Y-free engine at the exact W-degree (no level search). Per the underlying
// completion theory over free products of Z_2, mere positive
// semidefiniteness of A should be feasible here; failure is reported as
// evidence of non-psd input, never as a proof.
CertifyResult certify_z2_psd(const NcPoly& A, const words::Word& wbound,
                             const CertifyOptions& opts = {});

// Canonical outer (minimum-phase) spectral factor of the autocorrelation
// carried by a univariate scalar certificate (trivial W, Y = Z, K = 1),
// computed by the Cholesky-limit method on a banded Toeplitz matrix. Phase
// normalized so the constant coefficient is real positive.
std::vector<std::complex<double>> outer_factor_from_certificate(const GramCertificate& cert,
                                                                int toeplitz_size = 2048);

// Same canonicalization applied directly to autocorrelation coefficients
// c_0..c_M (c_{-d} = conj(c_d)); the trigonometric polynomial must be
// strictly positive on the circle.
std::vector<std::complex<double>> outer_spectral_factor(
    const std::vector<std::complex<double>>& autocorr, int toeplitz_size = 2048);

}  // namespace ncfr::soscert
