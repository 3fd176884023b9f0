// Copyright (c) 2026 the ncfr authors. Licensed under the Apache License,
// Version 2.0; see LICENSE for details.

#include "ncfr/repsys.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace ncfr::repsys {

using linalg::Complex;
using words::GroupSpec;
using words::Word;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

namespace {

Mat ginibre(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      double re = n(rng), im = n(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

Mat haar_unitary(int dim, std::mt19937_64& rng) {
  Mat g = ginibre(dim, rng);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    Complex d = r(i, i);
    q.col(i) *= d == Complex(0, 0) ? 1.0 : d / std::abs(d);
  }
  return q;
}

Mat random_involution(int dim, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> rank_dist(0, dim);
  int rank = rank_dist(rng);
  Mat q = haar_unitary(dim, rng);
  Mat p = q.leftCols(rank) * q.leftCols(rank).adjoint();
  return Mat::Identity(dim, dim) - 2.0 * p;
}

Mat random_order_m_unitary(int dim, int m, std::mt19937_64& rng) {
  Mat q = haar_unitary(dim, rng);
  std::uniform_int_distribution<int> pick(0, m - 1);
  Eigen::VectorXcd phases(dim);
  for (int i = 0; i < dim; ++i) {
    double theta = 2.0 * std::numbers::pi * pick(rng) / m;
    phases(i) = Complex(std::cos(theta), std::sin(theta));
  }
  return q * phases.asDiagonal() * q.adjoint();
}

Mat random_diagonal_phases(int dim, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::VectorXcd phases(dim);
  for (int i = 0; i < dim; ++i) {
    double theta = 2.0 * std::numbers::pi * u(rng);
    phases(i) = Complex(std::cos(theta), std::sin(theta));
  }
  return Mat(phases.asDiagonal());
}

std::vector<Mat> sample_factor(const GroupSpec& spec, int dim, std::mt19937_64& rng) {
  std::vector<Mat> out;
  for (int j = 1; j <= spec.generators(); ++j) {
    switch (spec.family()) {
      case words::Family::FreeSemigroup:
        out.push_back(haar_unitary(dim, rng));
        break;
      case words::Family::FreeProductCyclic:
        out.push_back(spec.order(j) == 2 ? random_involution(dim, rng)
                                         : random_order_m_unitary(dim, spec.order(j), rng));
        break;
      case words::Family::FreeAbelian:
        out.push_back(random_diagonal_phases(dim, rng));
        break;
    }
  }
  return out;
}

Mat word_operator(const std::vector<Mat>& gens, int dim, const Word& w) {
  Mat out = Mat::Identity(dim, dim);
  if (w.spec().family() == words::Family::FreeAbelian) {
    for (size_t i = 0; i < w.exponents().size(); ++i) {
      std::int64_t e = w.exponents()[i];
      const Mat& g = gens[i];
      for (std::int64_t t = 0; t < std::abs(e); ++t) out = e > 0 ? out * g : out * g.adjoint();
    }
    return out;
  }
  for (int c : w.letters()) out = out * gens[static_cast<size_t>(c - 1)];
  return out;
}

}  // namespace

Representation sample_representation(const words::ProductSpec& spec, int dim,
                                     std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("sample_representation: dim must be >= 1");
  std::mt19937_64 rng(splitmix64(seed));
  Representation rep;
  rep.spec = spec;
  rep.dim_w = dim;
  rep.w_unitaries = sample_factor(spec.w, dim, rng);
  if (spec.has_y()) {
    rep.dim_y = dim;
    rep.y_unitaries = sample_factor(spec.y, dim, rng);
  } else {
    rep.dim_y = 1;
  }
  return rep;
}

Mat rep_value(const Representation& rep, const words::ProductElement& alpha) {
  Mat uden = word_operator(rep.w_unitaries, rep.dim_w, alpha.w.den);
  Mat unum = word_operator(rep.w_unitaries, rep.dim_w, alpha.w.num);
  Mat w_part = uden.adjoint() * unum;
  if (rep.dim_y == 1 && rep.y_unitaries.empty()) return w_part;
  Mat y_part = word_operator(rep.y_unitaries, rep.dim_y, alpha.y);
  return linalg::kron(w_part, y_part);
}

Mat evaluate(const soscert::NcPoly& poly, const Representation& rep) {
  if (poly.spec != rep.spec) throw std::invalid_argument("evaluate: spec mismatch");
  int d = rep.total_dim();
  Mat out = Mat::Zero(static_cast<Eigen::Index>(poly.rows) * d,
                      static_cast<Eigen::Index>(poly.cols) * d);
  for (const auto& [alpha, c] : poly.terms) out += linalg::kron(c, rep_value(rep, alpha));
  return out;
}

double representation_defect(const Representation& rep) {
  double worst = 0.0;
  auto unitarity = [&](const Mat& u) {
    int n = static_cast<int>(u.rows());
    worst = std::max(worst, linalg::max_abs(u * u.adjoint() - Mat::Identity(n, n)));
    worst = std::max(worst, linalg::max_abs(u.adjoint() * u - Mat::Identity(n, n)));
  };
  for (const auto& u : rep.w_unitaries) unitarity(u);
  for (const auto& u : rep.y_unitaries) unitarity(u);
  auto order_check = [&](const GroupSpec& spec, const std::vector<Mat>& gens, int dim) {
    if (spec.family() != words::Family::FreeProductCyclic) return;
    for (int j = 1; j <= spec.generators(); ++j) {
      Mat p = Mat::Identity(dim, dim);
      for (int t = 0; t < spec.order(j); ++t) p = p * gens[static_cast<size_t>(j - 1)];
      worst = std::max(worst, linalg::max_abs(p - Mat::Identity(dim, dim)));
    }
  };
  order_check(rep.spec.w, rep.w_unitaries, rep.dim_w);
  if (rep.spec.has_y()) {
    order_check(rep.spec.y, rep.y_unitaries, rep.dim_y);
    // The tensor split makes W and Y commute exactly; verify on the total
    // space anyway.
    for (const auto& uw : rep.w_unitaries)
      for (const auto& uy : rep.y_unitaries) {
        Mat a = linalg::kron(uw, Mat::Identity(rep.dim_y, rep.dim_y));
        Mat b = linalg::kron(Mat::Identity(rep.dim_w, rep.dim_w), uy);
        worst = std::max(worst, linalg::max_abs(a * b - b * a));
      }
  }
  return worst;
}

LowerBound sampled_lower_bound(const soscert::NcPoly& poly, int trials, int dim,
                               std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("sampled_lower_bound: trials must be >= 1");
  LowerBound out{0.0, -1};
  for (int t = 0; t < trials; ++t) {
    Representation rep =
        sample_representation(poly.spec, dim, derive_seed(seed, static_cast<std::uint64_t>(t)));
    double lo = linalg::min_eigenvalue(evaluate(poly, rep));
    if (out.argmin_trial < 0 || lo < out.min_eig) out = {lo, t};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Kolmogorov model

GnsModel gns_from_kernel(const kernels::PartialKernel& k, const GnsOptions& opts) {
  if (k.has_group())
    throw std::invalid_argument("gns_from_kernel: block group not supported");
  const Word& wmax = k.w_max();
  const int L = wmax.length();
  if (L >= 1 && words::successor(wmax).length() == L)
    throw std::invalid_argument("gns_from_kernel: kernel must cover all words of its top length");
  const int K = k.block_size();
  if (linalg::max_abs(k.entry(words::fraction_from_word(words::identity(k.w_spec())))
                      - Mat::Identity(K, K)) > 1e-10)
    throw std::invalid_argument("gns_from_kernel: entry(e) must be the identity");

  kernels::AssembledForm form = assemble(k);
  auto psd = kernels::is_psd(form, 1e-9);
  if (!psd.psd) throw std::invalid_argument("gns_from_kernel: kernel is not psd");

  Eigen::SelfAdjointEigenSolver<Mat> es(linalg::herm(form.matrix));
  const Eigen::VectorXd& ev = es.eigenvalues();
  double lmax = std::max(0.0, ev.maxCoeff());
  double cutoff = (opts.cutoff_rel > 0 ? opts.cutoff_rel
                                       : form.matrix.rows() * std::numeric_limits<double>::epsilon()) *
                  lmax;
  std::vector<int> keep;
  for (int i = 0; i < ev.size(); ++i)
    if (ev(i) > cutoff) keep.push_back(i);
  const int r = static_cast<int>(keep.size());

  // Column factor: X = Vfac* Vfac with Vfac r x (nK); column block u realizes
  // the class of the point mass at u.
  Mat vfac(r, form.matrix.cols());
  for (int i = 0; i < r; ++i)
    vfac.row(i) = std::sqrt(ev(keep[static_cast<size_t>(i)])) *
                  es.eigenvectors().col(keep[static_cast<size_t>(i)]).adjoint();

  std::vector<Word> wordsv = words::enumerate_upto(wmax);
  auto col_block = [&](const Word& u) -> Mat {
    for (size_t i = 0; i < wordsv.size(); ++i)
      if (wordsv[i] == u) return vfac.middleCols(static_cast<Eigen::Index>(i) * K, K);
    throw std::logic_error("gns_from_kernel: word not in index");
  };

  GnsModel model;
  model.dim = r;
  model.level = L;
  model.W = col_block(words::identity(k.w_spec()));

  std::vector<Word> base;
  for (const Word& u : wordsv)
    if (u.length() <= L - 1) base.push_back(u);

  const int g = k.w_spec().generators();
  for (int j = 1; j <= g; ++j) {
    Word xj = words::generator(k.w_spec(), j);
    Mat wm(r, static_cast<Eigen::Index>(base.size()) * K);
    Mat wp(r, static_cast<Eigen::Index>(base.size()) * K);
    for (size_t i = 0; i < base.size(); ++i) {
      wm.middleCols(static_cast<Eigen::Index>(i) * K, K) = col_block(base[i]);
      wp.middleCols(static_cast<Eigen::Index>(i) * K, K) = col_block(words::concat(xj, base[i]));
    }
    Mat vj = wp * linalg::pinv(wm);
    double gram_res = linalg::max_abs(wp.adjoint() * wp - wm.adjoint() * wm);
    double map_res = linalg::max_abs(vj * wm - wp);
    model.V.push_back(vj);
    model.isometry_residual.push_back(std::max(gram_res, map_res));
    model.full_isometry.push_back(
        linalg::max_abs(vj.adjoint() * vj - Mat::Identity(r, r)) <= opts.tol);
    // The doubled-space operator is unitary exactly when V_j is a full
    // isometry; it is stored unconditionally.
    Mat u(2 * r, 2 * r);
    u << vj, Mat::Identity(r, r) - vj * vj.adjoint(), Mat::Zero(r, r), vj.adjoint();
    model.U.push_back(u);
  }
  return model;
}

Mat gns_reproduce(const GnsModel& model, const words::LeftFraction& alpha) {
  const int r = model.dim;
  auto apply_word = [&](const Word& w) {
    Mat out = Mat::Identity(r, r);
    const auto& seq = w.letters();
    // left action: letters applied from the right end inward
    for (auto it = seq.rbegin(); it != seq.rend(); ++it)
      out = model.V[static_cast<size_t>(*it - 1)] * out;
    return out;
  };
  Mat uden = apply_word(alpha.den);
  Mat unum = apply_word(alpha.num);
  return model.W.adjoint() * uden.adjoint() * unum * model.W;
}

Mat unitary_dilation(const Mat& v, double tol) {
  if (v.rows() != v.cols())
    throw std::invalid_argument("unitary_dilation: non-square inputs must be pre-embedded");
  int n = static_cast<int>(v.rows());
  if (linalg::max_abs(v.adjoint() * v - Mat::Identity(n, n)) > tol * (1.0 + linalg::max_abs(v)))
    throw std::invalid_argument("unitary_dilation: input is not an isometry");
  Mat u(2 * n, 2 * n);
  u << v, Mat::Identity(n, n) - v * v.adjoint(), Mat::Zero(n, n), v.adjoint();
  return u;
}

kernels::PartialKernel kernel_from_representation(const Representation& rep, const Mat& embed,
                                                  const words::Word& w_max) {
  const GroupSpec& wspec = rep.spec.w;
  GroupSpec gspec = rep.spec.has_y() ? rep.spec.y : GroupSpec::trivial();
  if (embed.rows() != rep.total_dim())
    throw std::invalid_argument("kernel_from_representation: embedding row count mismatch");
  kernels::EntryMap entries;
  std::vector<Word> gels = gspec.is_trivial()
                               ? std::vector<Word>{words::identity(gspec)}
                               : words::enumerate_length_upto(gspec, gspec.order(1) - 1);
  for (const auto& f : words::left_fraction_set(w_max))
    for (const auto& g : gels) {
      Mat value = embed.adjoint() * rep_value(rep, words::ProductElement{f, g}) * embed;
      entries.emplace(kernels::EntryKey{f, g}, value);
    }
  return kernels::PartialKernel(wspec, gspec, w_max, static_cast<int>(embed.cols()),
                                std::move(entries));
}

}  // namespace ncfr::repsys
