// Copyright (c) 2026 the ncfr authors. Licensed under the Apache License,
// Version 2.0; see LICENSE for details.

#include "ncfr/linalg.hpp"

#include <limits>
#include <stdexcept>

namespace ncfr::linalg {

Mat herm(const Mat& m) { return (m + m.adjoint()) / 2.0; }

double hermiticity_defect(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint().eval()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Mat& m, double tol) {
  return hermiticity_defect(m) <= tol * (1.0 + max_abs(m));
}

RealVec herm_eigenvalues(const Mat& m) {
  if (m.rows() == 0) return RealVec(0);
  Eigen::SelfAdjointEigenSolver<Mat> es(herm(m), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double min_eigenvalue(const Mat& m) {
  if (m.rows() == 0) return 0.0;
  return herm_eigenvalues(m).minCoeff();
}

double herm_norm(const Mat& m) {
  if (m.rows() == 0) return 0.0;
  RealVec ev = herm_eigenvalues(m);
  return std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
}

PsdReport psd_check(const Mat& m, double tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("psd_check: matrix not square");
  if (m.rows() == 0) return {true, 0.0, 0.0};
  RealVec ev = herm_eigenvalues(m);
  double norm = std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
  double lo = ev.minCoeff();
  return {lo >= -tol * (1.0 + norm), lo, norm};
}

Mat pinv(const Mat& m) {
  if (m.rows() == 0 || m.cols() == 0) return Mat::Zero(m.cols(), m.rows());
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double cutoff = std::max(m.rows(), m.cols()) *
                  std::numeric_limits<double>::epsilon() *
                  (sv.size() > 0 ? sv(0) : 0.0);
  Eigen::VectorXd inv = sv;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    inv(i) = sv(i) > cutoff ? 1.0 / sv(i) : 0.0;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

namespace {

Mat apply_spectral(const Mat& m, double (*fn)(double)) {
  if (m.rows() == 0) return m;
  Eigen::SelfAdjointEigenSolver<Mat> es(herm(m));
  RealVec ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = fn(ev(i));
  return es.eigenvectors() * ev.asDiagonal() *
         es.eigenvectors().adjoint();
}

}  // namespace

Mat sqrt_psd(const Mat& m) {
  return apply_spectral(m, +[](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

Mat pinv_sqrt_psd(const Mat& m) {
  if (m.rows() == 0) return m;
  Eigen::SelfAdjointEigenSolver<Mat> es(herm(m));
  RealVec ev = es.eigenvalues();
  double cutoff = m.rows() * std::numeric_limits<double>::epsilon() *
                  (ev.size() > 0 ? std::max(0.0, ev.maxCoeff()) : 0.0);
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    ev(i) = ev(i) > cutoff ? 1.0 / std::sqrt(ev(i)) : 0.0;
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Mat project_psd(const Mat& m) {
  return apply_spectral(m, +[](double x) { return x > 0.0 ? x : 0.0; });
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double max_abs(const Mat& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

}  // namespace ncfr::linalg
