// Copyright (c) 2026 the ncfr authors. Licensed under the Apache License,
// Version 2.0; see LICENSE for details.

#pragma once

#include <cstdint>
#include <vector>

#include "ncfr/kernels.hpp"
#include "ncfr/linalg.hpp"
#include "ncfr/poly.hpp"
#include "ncfr/words.hpp"

namespace ncfr::repsys {

using linalg::Mat;

// Finite-dimensional unitary representation of W x Y. The W generators act on
// the first tensor factor and the Y generators on the second, so the two
// families commute by construction.
struct Representation {
  words::ProductSpec spec;
  int dim_w = 1;
  int dim_y = 1;
  std::vector<Mat> w_unitaries;  // dim_w x dim_w
  std::vector<Mat> y_unitaries;  // dim_y x dim_y

  int total_dim() const { return dim_w * dim_y; }
};

// splitmix64 step; sub-seed derivation for concurrent trials is
// derive_seed(seed, i) = splitmix64(seed + (i+1) * 0x9e3779b97f4a7c15).
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Deterministic in the seed. Haar unitaries for free generators (QR of a
// complex Gaussian with R-diagonal phase correction); involutions I - 2P for
// order-2 factors with P a random projection of uniformly random rank;
// order-m factors via a Haar eigenbasis with m-th-root-of-unity eigenvalues;
// free-abelian factors as random diagonal phase matrices.
Representation sample_representation(const words::ProductSpec& spec, int dim,
                                     std::uint64_t seed);

// Operator of a single group element.
Mat rep_value(const Representation& rep, const words::ProductElement& alpha);

// sum_alpha coeff(alpha) (x) pi(alpha) with pi(u^{-1} v y) = (U^u)* U^v rho(y).
Mat evaluate(const soscert::NcPoly& poly, const Representation& rep);

// Largest violation of the representation relations (unitarity, factor
// orders, W-Y commutation); used by tests after every sampling.
double representation_defect(const Representation& rep);

struct LowerBound {
  double min_eig;
  int argmin_trial;
};

// Minimum over deterministic trials of the least eigenvalue of
// evaluate(poly, sample_representation(spec, dim, derive_seed(seed, t))).
LowerBound sampled_lower_bound(const soscert::NcPoly& poly, int trials, int dim,
                               std::uint64_t seed);

// Truncated Kolmogorov model of a psd kernel: left shifts on the column space
// of the assembled Gram matrix.
struct GnsModel {
  int dim = 0;    // model-space dimension (retained rank)
  int level = 0;  // truncation length L of the source kernel
  std::vector<Mat> V;                    // shift of each generator, dim x dim
  std::vector<double> isometry_residual;  // inner-product preservation on the declared span
  std::vector<bool> full_isometry;       // V_j* V_j = I on the whole model space
  std::vector<Mat> U;                    // 2dim x 2dim dilations [[V, I-VV*],[0,V*]]
  Mat W;                                 // embedding of the coefficient space, dim x K
};

struct GnsOptions {
  double cutoff_rel = -1.0;  // eigenvalue cutoff relative to the largest; <0 picks dim*eps
  double tol = 1e-10;
};

// Requires a kernel over the full length-L index set (w_max is the last word
// of its length), trivial block group, entry(e) = I.
GnsModel gns_from_kernel(const kernels::PartialKernel& k, const GnsOptions& opts = {});

// Reconstructed kernel value W* pi(alpha) W from the model; valid for
// fractions u^{-1} v with |u|, |v| <= level - 1.
Mat gns_reproduce(const GnsModel& model, const words::LeftFraction& alpha);

// [[V, I-VV*],[0,V*]] for a square isometry V; throws otherwise.
Mat unitary_dilation(const Mat& V, double tol = 1e-10);

// p(alpha, g) = W* pi(alpha) rho(g) W for a representation of W x G and an
// embedding W; always a psd kernel.
kernels::PartialKernel kernel_from_representation(const Representation& rep, const Mat& embed,
                                                  const words::Word& w_max);

}  // namespace ncfr::repsys
