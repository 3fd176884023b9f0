// Copyright (c) 2026 the ncfr authors. Licensed under the Apache License,
// Version 2.0; see LICENSE for details.

#pragma once

#include <map>

#include "ncfr/linalg.hpp"
#include "ncfr/words.hpp"

namespace ncfr::soscert {

using linalg::Complex;
using linalg::Mat;

// A finitely supported function from W x Y group elements to dense complex
// coefficient matrices. Hermitian polynomials have rows == cols and
// coeff(alpha^{-1}) = coeff(alpha)*; analytic polynomials are supported on
// the semigroup part and may have rows != cols.
struct NcPoly {
  words::ProductSpec spec;
  int rows = 1;
  int cols = 1;
  std::map<words::ProductElement, Mat, words::ProductLess> terms;
};

NcPoly make_poly(const words::ProductSpec& spec, int rows, int cols);

// Accumulates (coefficients at an existing key add up). Drops exact zeros? No:
// stores what it is given; callers prune if needed.
void add_term(NcPoly& p, const words::ProductElement& alpha, const Mat& coeff);
void add_term(NcPoly& p, const words::ProductElement& alpha, Complex coeff);

Mat coeff(const NcPoly& p, const words::ProductElement& alpha);  // zero if absent

bool is_hermitian(const NcPoly& p, double tol = 1e-12);

// Support lies in W_{<=wbound} x Y_{<=ydeg} (analytic) for some bound; this
// checks a given candidate bound.
bool analytic_supported_in(const NcPoly& p, const words::Word& wbound, int ydeg);

// Support lies in Her W_{<=wbound} x Her Y_{<=ydeg}.
bool hermitian_supported_in(const NcPoly& p, const words::Word& wbound, int ydeg);

NcPoly subtract(const NcPoly& a, const NcPoly& b);
NcPoly scale(const NcPoly& a, Complex factor);

// Max block-entry distance over the union of supports.
double coeff_distance(const NcPoly& a, const NcPoly& b);

// Smallest Y-semigroup degree M with every y-part of the support in
// Her Y_{<=M} (or in Y_{<=M} for analytic polynomials).
int min_y_degree(const NcPoly& p);

// Smallest shortlex W-bound covering the support; scans successors, capped.
words::Word min_w_bound(const NcPoly& p, int max_scan = 4096);

}  // namespace ncfr::soscert
