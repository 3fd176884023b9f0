// Copyright (c) 2026 the ncfr authors. Licensed under the Apache License,
// Version 2.0; see LICENSE for details.

#include "ncfr/poly.hpp"

#include <stdexcept>

namespace ncfr::soscert {

using words::ProductElement;
using words::Word;

NcPoly make_poly(const words::ProductSpec& spec, int rows, int cols) {
  if (rows < 1 || cols < 1) throw std::invalid_argument("make_poly: coefficient size");
  NcPoly p;
  p.spec = spec;
  p.rows = rows;
  p.cols = cols;
  return p;
}

void add_term(NcPoly& p, const ProductElement& alpha, const Mat& c) {
  if (c.rows() != p.rows || c.cols() != p.cols)
    throw std::invalid_argument("add_term: coefficient size mismatch");
  if (alpha.w.spec() != p.spec.w || alpha.y.spec() != p.spec.y)
    throw std::invalid_argument("add_term: element spec mismatch");
  auto [it, fresh] = p.terms.emplace(alpha, c);
  if (!fresh) it->second += c;
}

void add_term(NcPoly& p, const ProductElement& alpha, Complex c) {
  add_term(p, alpha, Mat::Constant(p.rows, p.cols, c));
}

Mat coeff(const NcPoly& p, const ProductElement& alpha) {
  auto it = p.terms.find(alpha);
  if (it == p.terms.end()) return Mat::Zero(p.rows, p.cols);
  return it->second;
}

bool is_hermitian(const NcPoly& p, double tol) {
  if (p.rows != p.cols) return false;
  for (const auto& [alpha, c] : p.terms) {
    Mat mirror = coeff(p, words::product_inverse(alpha));
    if ((mirror - c.adjoint()).cwiseAbs().maxCoeff() > tol * (1.0 + linalg::max_abs(c)))
      return false;
  }
  return true;
}

bool analytic_supported_in(const NcPoly& p, const Word& wbound, int ydeg) {
  for (const auto& [alpha, c] : p.terms) {
    if (!alpha.w.den.is_identity()) return false;
    if (!alpha.w.num.in_semigroup() || !alpha.y.in_semigroup()) return false;
    if (words::shortlex_cmp(alpha.w.num, wbound) > 0) return false;
    if (alpha.y.length() > ydeg) return false;
  }
  return true;
}

bool hermitian_supported_in(const NcPoly& p, const Word& wbound, int ydeg) {
  auto fracs = words::left_fraction_set(wbound);
  for (const auto& [alpha, c] : p.terms) {
    if (!words::fraction_in_set(alpha.w, fracs)) return false;
    if (!words::y_in_fractions_upto(alpha.y, ydeg)) return false;
  }
  return true;
}

NcPoly subtract(const NcPoly& a, const NcPoly& b) {
  if (a.spec != b.spec || a.rows != b.rows || a.cols != b.cols)
    throw std::invalid_argument("subtract: incompatible polynomials");
  NcPoly out = a;
  for (const auto& [alpha, c] : b.terms) add_term(out, alpha, Mat(-c));
  return out;
}

NcPoly scale(const NcPoly& a, Complex factor) {
  NcPoly out = a;
  for (auto& [alpha, c] : out.terms) c *= factor;
  return out;
}

double coeff_distance(const NcPoly& a, const NcPoly& b) {
  double d = 0.0;
  for (const auto& [alpha, c] : a.terms) d = std::max(d, linalg::max_abs(c - coeff(b, alpha)));
  for (const auto& [alpha, c] : b.terms) d = std::max(d, linalg::max_abs(c - coeff(a, alpha)));
  return d;
}

int min_y_degree(const NcPoly& p) {
  int m = 0;
  for (const auto& [alpha, c] : p.terms) {
    while (!words::y_in_fractions_upto(alpha.y, m)) ++m;
  }
  return m;
}

words::Word min_w_bound(const NcPoly& p, int max_scan) {
  Word w = words::identity(p.spec.w);
  for (int i = 0; i < max_scan; ++i) {
    auto fracs = words::left_fraction_set(w);
    bool all = true;
    for (const auto& [alpha, c] : p.terms)
      if (!words::fraction_in_set(alpha.w, fracs)) {
        all = false;
        break;
      }
    if (all) return w;
    w = words::successor(w);
  }
  throw std::runtime_error("min_w_bound: scan cap exceeded");
}

}  // namespace ncfr::soscert
