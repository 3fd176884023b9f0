// Copyright (c) 2026 the ncfr authors. Licensed under the Apache License,
// Version 2.0; see LICENSE for details.

#pragma once

#include <Eigen/Dense>
#include <complex>

namespace ncfr::linalg {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;

/// Hermitian part (M + M*)/2.
Mat herm(const Mat& m);

/// Max-abs deviation of M from its conjugate transpose.
double hermiticity_defect(const Mat& m);

bool is_hermitian(const Mat& m, double tol = 1e-12);

/// Eigenvalues of a Hermitian matrix, ascending.
RealVec herm_eigenvalues(const Mat& m);

double min_eigenvalue(const Mat& m);

/// Spectral norm of a Hermitian matrix (max |eigenvalue|).
double herm_norm(const Mat& m);

struct PsdReport {
  bool psd;
  double min_eig;
  double norm;  // spectral norm used for the relative tolerance
};

/// psd test with relative tolerance: min_eig >= -tol * (1 + ||m||).
PsdReport psd_check(const Mat& m, double tol);

/// Moore-Penrose pseudoinverse. Singular values below
/// max(rows, cols) * eps * sigma_max are treated as zero.
Mat pinv(const Mat& m);

/// Square root of a psd matrix (negative eigenvalues clipped to zero).
Mat sqrt_psd(const Mat& m);

/// Pseudoinverse square root of a psd matrix.
Mat pinv_sqrt_psd(const Mat& m);

/// Projection onto the psd cone (eigenvalue clipping of the Hermitian part).
Mat project_psd(const Mat& m);

Mat kron(const Mat& a, const Mat& b);

/// Max absolute entry; zero for empty matrices.
double max_abs(const Mat& m);

}  // namespace ncfr::linalg
