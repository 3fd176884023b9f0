// Copyright (c) 2026 the ncfr authors. Licensed under the Apache License,
// Version 2.0; see LICENSE for details.

#include "ncfr/soscert.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ncfr::soscert {

using linalg::Complex;
using words::Monomial;
using words::ProductElement;
using words::Word;

ConstraintSystem gram_constraints(const NcPoly& A, const Word& wbound, int m_prime) {
  if (A.rows != A.cols) throw std::invalid_argument("gram_constraints: A must be square-valued");
  if (!is_hermitian(A, 1e-10)) throw std::invalid_argument("gram_constraints: A is not Hermitian");

  ConstraintSystem cs;
  cs.spec = A.spec;
  cs.K = A.cols;
  cs.monomials = words::monomial_basis(A.spec, wbound, m_prime);
  const int n = static_cast<int>(cs.monomials.size());

  std::map<ProductElement, int, words::ProductLess> index;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ProductElement alpha = words::monomial_fraction(cs.monomials[static_cast<size_t>(i)],
                                                      cs.monomials[static_cast<size_t>(j)]);
      auto [it, fresh] = index.emplace(alpha, static_cast<int>(cs.cosets.size()));
      if (fresh) cs.cosets.push_back(Coset{alpha, {}, Mat::Zero(cs.K, cs.K)});
      cs.cosets[static_cast<size_t>(it->second)].pairs.emplace_back(i, j);
    }

  for (const auto& [alpha, c] : A.terms) {
    auto it = index.find(alpha);
    if (it == index.end())
      throw std::invalid_argument("gram_constraints: support of A exceeds bidegree (" +
                                  wbound.str() + ", " + std::to_string(m_prime) + ") at " +
                                  alpha.str());
    cs.cosets[static_cast<size_t>(it->second)].target = c;
  }
  return cs;
}

namespace {

Mat syndrome_start(const ConstraintSystem& cs) {
  const int K = cs.K;
  Mat z = Mat::Zero(cs.gram_dim(), cs.gram_dim());
  for (const auto& coset : cs.cosets) {
    Mat part = coset.target / static_cast<double>(coset.pairs.size());
    for (auto [i, j] : coset.pairs) z.block(i * K, j * K, K, K) = part;
  }
  return z;
}

void project_affine(const ConstraintSystem& cs, Mat& z) {
  const int K = cs.K;
  for (const auto& coset : cs.cosets) {
    Mat sum = Mat::Zero(K, K);
    for (auto [i, j] : coset.pairs) sum += z.block(i * K, j * K, K, K);
    Mat corr = (coset.target - sum) / static_cast<double>(coset.pairs.size());
    for (auto [i, j] : coset.pairs) z.block(i * K, j * K, K, K) += corr;
  }
}

double affine_residual(const ConstraintSystem& cs, const Mat& z) {
  const int K = cs.K;
  double worst = 0.0;
  for (const auto& coset : cs.cosets) {
    Mat sum = Mat::Zero(K, K);
    for (auto [i, j] : coset.pairs) sum += z.block(i * K, j * K, K, K);
    worst = std::max(worst, linalg::max_abs(sum - coset.target));
  }
  return worst;
}

// --- Gauss-Newton polish on the factor ------------------------------------
//
// Coset sums of B*B are quadratic in B; near a feasible point the
// least-squares Newton step converges quadratically, which rescues the
// boundary-feasible instances where plain alternating projections crawl.

struct GnWork {
  const ConstraintSystem* cs;
  int r;  // factor rows
  int q;  // gram dimension

  Eigen::VectorXd residual(const Mat& b) const {
    const int K = cs->K;
    Mat g = b.adjoint() * b;
    Eigen::VectorXd res(2 * static_cast<Eigen::Index>(cs->cosets.size()) * K * K);
    Eigen::Index at = 0;
    for (const auto& coset : cs->cosets) {
      Mat sum = Mat::Zero(K, K);
      for (auto [i, j] : coset.pairs) sum += g.block(i * K, j * K, K, K);
      sum -= coset.target;
      for (int a = 0; a < K; ++a)
        for (int c = 0; c < K; ++c) {
          res(at++) = sum(a, c).real();
          res(at++) = sum(a, c).imag();
        }
    }
    return res;
  }

  // d residual / d [Re B ; Im B], row-major over (coset, a, c, re/im).
  Eigen::MatrixXd jacobian(const Mat& b) const {
    const int K = cs->K;
    const Eigen::Index nrows = 2 * static_cast<Eigen::Index>(cs->cosets.size()) * K * K;
    const Eigen::Index ncols = 2 * static_cast<Eigen::Index>(r) * q;
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(nrows, ncols);
    Eigen::Index row0 = 0;
    for (const auto& coset : cs->cosets) {
      for (auto [i, j] : coset.pairs) {
        for (int a = 0; a < K; ++a)
          for (int c = 0; c < K; ++c) {
            Eigen::Index row = row0 + 2 * (static_cast<Eigen::Index>(a) * K + c);
            // entry = sum_p conj(B[p, iK+a]) B[p, jK+c]
            for (int p = 0; p < r; ++p) {
              Complex u = b(p, j * K + c);  // multiplies conj(var1)
              Complex w = std::conj(b(p, i * K + a));
              Eigen::Index v1 = static_cast<Eigen::Index>(p) * q + i * K + a;
              Eigen::Index v2 = static_cast<Eigen::Index>(p) * q + j * K + c;
              // wrt Re/Im of var1 (conjugated factor)
              jac(row, v1) += u.real();
              jac(row + 1, v1) += u.imag();
              jac(row, static_cast<Eigen::Index>(r) * q + v1) += u.imag();
              jac(row + 1, static_cast<Eigen::Index>(r) * q + v1) += -u.real();
              // wrt Re/Im of var2 (linear factor)
              jac(row, v2) += w.real();
              jac(row + 1, v2) += w.imag();
              jac(row, static_cast<Eigen::Index>(r) * q + v2) += -w.imag();
              jac(row + 1, static_cast<Eigen::Index>(r) * q + v2) += w.real();
            }
          }
      }
      row0 += 2 * static_cast<Eigen::Index>(K) * K;
    }
    return jac;
  }
};

bool gauss_newton_polish(const ConstraintSystem& cs, Mat& b, double target, int max_steps) {
  GnWork work{&cs, static_cast<int>(b.rows()), static_cast<int>(b.cols())};
  Eigen::VectorXd res = work.residual(b);
  for (int step = 0; step < max_steps; ++step) {
    if (res.lpNorm<Eigen::Infinity>() <= target) return true;
    Eigen::MatrixXd jac = work.jacobian(b);
    Eigen::VectorXd delta =
        jac.completeOrthogonalDecomposition().solve(Eigen::VectorXd(-res));
    double base = res.squaredNorm();
    double scale = 1.0;
    bool improved = false;
    for (int half = 0; half < 30; ++half) {
      Mat cand = b;
      for (int p = 0; p < work.r; ++p)
        for (int col = 0; col < work.q; ++col) {
          Eigen::Index v = static_cast<Eigen::Index>(p) * work.q + col;
          cand(p, col) += scale * Complex(delta(v),
                                          delta(static_cast<Eigen::Index>(work.r) * work.q + v));
        }
      Eigen::VectorXd cres = work.residual(cand);
      if (cres.squaredNorm() < base) {
        b = cand;
        res = cres;
        improved = true;
        break;
      }
      scale /= 2.0;
    }
    if (!improved) return res.lpNorm<Eigen::Infinity>() <= target;
  }
  return work.residual(b).lpNorm<Eigen::Infinity>() <= target;
}

// Candidate factor ranks from the spectrum of the current iterate.
std::vector<int> candidate_ranks(const Eigen::VectorXd& ev, int q) {
  double lmax = std::max(ev.maxCoeff(), 0.0);
  int significant = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > 1e-3 * lmax) ++significant;
  std::vector<int> out;
  for (int rank : {significant, significant + 1, significant + 2, q})
    if (rank >= 1 && rank <= q && (out.empty() || rank > out.back())) out.push_back(rank);
  return out;
}

bool polish_attempt(const ConstraintSystem& cs, const Mat& z, double tol, Mat& out) {
  Eigen::SelfAdjointEigenSolver<Mat> es(linalg::herm(z));
  const Eigen::VectorXd& ev = es.eigenvalues();
  const int q = static_cast<int>(z.rows());
  for (int rank : candidate_ranks(ev, q)) {
    Mat b(rank, q);
    for (int i = 0; i < rank; ++i) {
      double lambda = std::max(ev(q - 1 - i), 1e-14);
      b.row(i) = std::sqrt(lambda) * es.eigenvectors().col(q - 1 - i).adjoint();
    }
    if (gauss_newton_polish(cs, b, tol * 1e-2, 60)) {
      Mat cand = b.adjoint() * b;
      project_affine(cs, cand);
      cand = linalg::herm(cand);
      if (-linalg::min_eigenvalue(cand) <= tol && affine_residual(cs, cand) <= tol) {
        out = cand;
        return true;
      }
    }
  }
  return false;
}

}  // namespace

SolveResult solve_feasibility(const ConstraintSystem& cs, const SolveOptions& opts) {
  // Consistency of fixed single-entry cosets is implied by the targets; a
  // contradiction can only arise from a non-Hermitian system.
  for (const auto& coset : cs.cosets) {
    if (coset.pairs.empty()) throw std::logic_error("solve_feasibility: empty coset");
  }

  Mat z = syndrome_start(cs);
  Mat correction = Mat::Zero(z.rows(), z.cols());

  SolveResult best;
  best.Z = z;
  best.psd_residual = std::max(0.0, -linalg::min_eigenvalue(z));
  best.affine_residual = 0.0;
  double best_score = best.psd_residual;

  const std::vector<int> polish_at = {200, 1000, 4000, 12000, 30000};
  int iters = 0;
  for (;;) {
    Mat y = linalg::project_psd(z + correction);
    correction = z + correction - y;
    double aff = affine_residual(cs, y);
    z = y;
    project_affine(cs, z);
    ++iters;

    if (iters <= 50 || iters % 25 == 0) {
      double psd = std::max(0.0, -linalg::min_eigenvalue(z));
      double score = std::max(psd, aff);
      if (score < best_score) {
        best_score = score;
        best.Z = z;
        best.psd_residual = psd;
        best.affine_residual = aff;
        best.iterations = iters;
      }
      if (psd <= opts.tol && aff <= opts.tol) {
        SolveResult res;
        res.Z = z;
        res.feasible = true;
        res.psd_residual = psd;
        res.affine_residual = aff;
        res.iterations = iters;
        return res;
      }
    }

    if (std::find(polish_at.begin(), polish_at.end(), iters) != polish_at.end() ||
        iters >= opts.max_iter) {
      Mat polished;
      if (polish_attempt(cs, z, opts.tol, polished)) {
        SolveResult res;
        res.Z = polished;
        res.feasible = true;
        res.psd_residual = std::max(0.0, -linalg::min_eigenvalue(polished));
        res.affine_residual = affine_residual(cs, polished);
        res.iterations = iters;
        return res;
      }
      if (iters >= opts.max_iter) break;
    }
  }

  best.feasible = false;
  best.iterations = iters;
  return best;
}

std::vector<Mat> factor_gram(const Mat& Z, int n_monomials, int K, double rank_tol_rel) {
  if (Z.rows() != static_cast<Eigen::Index>(n_monomials) * K)
    throw std::invalid_argument("factor_gram: size mismatch");
  Eigen::SelfAdjointEigenSolver<Mat> es(linalg::herm(Z));
  const Eigen::VectorXd& ev = es.eigenvalues();
  double lmax = std::max(0.0, ev.maxCoeff());
  if (ev.minCoeff() < -std::max(rank_tol_rel * lmax, 1e-12) * 100.0 - 1e-9)
    throw std::invalid_argument("factor_gram: Gram matrix is significantly non-psd");
  const int q = static_cast<int>(Z.rows());
  std::vector<int> keep;
  for (int i = q - 1; i >= 0; --i)
    if (ev(i) > rank_tol_rel * lmax) keep.push_back(i);  // descending eigenvalues
  const int r = std::max(1, static_cast<int>(keep.size()));
  Mat b = Mat::Zero(r, q);
  for (size_t i = 0; i < keep.size(); ++i)
    b.row(static_cast<Eigen::Index>(i)) =
        std::sqrt(ev(keep[i])) * es.eigenvectors().col(keep[i]).adjoint();
  std::vector<Mat> terms;
  terms.reserve(static_cast<size_t>(n_monomials));
  for (int j = 0; j < n_monomials; ++j) terms.push_back(b.middleCols(j * K, K));
  return terms;
}

NcPoly convolve_adjoint(const NcPoly& B) {
  for (const auto& [alpha, c] : B.terms) {
    if (!alpha.w.den.is_identity() || !alpha.w.num.in_semigroup() || !alpha.y.in_semigroup())
      throw std::invalid_argument("convolve_adjoint: polynomial is not analytic");
  }
  NcPoly out = make_poly(B.spec, B.cols, B.cols);
  for (const auto& [av, cv] : B.terms)
    for (const auto& [au, cu] : B.terms) {
      Monomial mv{av.w.num, av.y};
      Monomial mu{au.w.num, au.y};
      add_term(out, words::monomial_fraction(mv, mu), Mat(cv.adjoint() * cu));
    }
  return out;
}

NcPoly certificate_factor(const GramCertificate& cert) {
  NcPoly b = make_poly(cert.spec, cert.K_prime, cert.K);
  for (size_t i = 0; i < cert.monomials.size(); ++i) {
    const Monomial& m = cert.monomials[i];
    if (linalg::max_abs(cert.B_terms[i]) == 0.0) continue;
    add_term(b, ProductElement{words::fraction_from_word(m.w), m.y}, cert.B_terms[i]);
  }
  return b;
}

namespace {

GramCertificate build_certificate(const NcPoly& A, const ConstraintSystem& cs,
                                  const SolveResult& sr, double rank_tol_rel) {
  GramCertificate cert;
  cert.spec = cs.spec;
  cert.monomials = cs.monomials;
  cert.Z = sr.Z;
  cert.K = cs.K;
  cert.iterations = sr.iterations;
  cert.gram_min_eig = linalg::min_eigenvalue(sr.Z);
  cert.B_terms = factor_gram(sr.Z, static_cast<int>(cs.monomials.size()), cs.K, rank_tol_rel);
  cert.K_prime = static_cast<int>(cert.B_terms.front().rows());
  cert.residual = coeff_distance(A, convolve_adjoint(certificate_factor(cert)));
  return cert;
}

}  // namespace

CertifyResult certify(const NcPoly& A, const Word& wbound, int M, const CertifyOptions& opts) {
  if (!is_hermitian(A, 1e-10)) throw std::invalid_argument("certify: A is not Hermitian");
  if (!hermitian_supported_in(A, wbound, M))
    throw std::invalid_argument("certify: support of A exceeds the stated bidegree");
  CertifyResult out;
  for (int m_prime = M; m_prime <= std::max(M, opts.max_y_degree); ++m_prime) {
    ConstraintSystem cs = gram_constraints(A, wbound, m_prime);
    SolveResult sr = solve_feasibility(cs, opts.solve);
    out.levels.push_back(LevelReport{m_prime, sr.psd_residual, sr.affine_residual, sr.iterations});
    if (sr.feasible) {
      GramCertificate cert = build_certificate(A, cs, sr, opts.rank_tol_rel);
      cert.m_prime = m_prime;
      out.certificate = std::move(cert);
      return out;
    }
  }
  return out;
}

CertifyResult certify_z2_psd(const NcPoly& A, const Word& wbound, const CertifyOptions& opts) {
  if (A.spec.has_y())
    throw std::invalid_argument("certify_z2_psd: Y direction must be trivial");
  if (!A.spec.w.all_orders_two())
    throw std::invalid_argument("certify_z2_psd: W must be a free product of Z_2");
  CertifyOptions level_opts = opts;
  level_opts.max_y_degree = 0;
  return certify(A, wbound, 0, level_opts);
}

// ---------------------------------------------------------------------------
// Univariate outer factor

std::vector<Complex> outer_spectral_factor(const std::vector<Complex>& autocorr,
                                           int toeplitz_size) {
  if (autocorr.empty()) throw std::invalid_argument("outer_spectral_factor: empty input");
  const int M = static_cast<int>(autocorr.size()) - 1;
  const int N = std::max(toeplitz_size, 4 * (M + 1));
  auto c = [&](int d) -> Complex {
    if (d >= 0) return d <= M ? autocorr[static_cast<size_t>(d)] : Complex(0, 0);
    return -d <= M ? std::conj(autocorr[static_cast<size_t>(-d)]) : Complex(0, 0);
  };
  // Banded Cholesky of T = (c_{i-j}); row i keeps entries L[i][i-k], k=0..M.
  // The trailing rows converge to the minimum-phase factor.
  std::vector<std::vector<Complex>> rows(static_cast<size_t>(N),
                                         std::vector<Complex>(static_cast<size_t>(M + 1)));
  std::vector<Complex> prev(static_cast<size_t>(M + 1), Complex(0, 0));
  for (int i = 0; i < N; ++i) {
    auto& row = rows[static_cast<size_t>(i)];
    for (int j = std::max(0, i - M); j <= i; ++j) {
      Complex acc = c(i - j);
      for (int t = std::max(0, i - M); t < j; ++t) {
        int ki = i - t, kj = j - t;
        if (ki <= M && kj <= M)
          acc -= rows[static_cast<size_t>(i)][static_cast<size_t>(ki)] *
                 std::conj(rows[static_cast<size_t>(j)][static_cast<size_t>(kj)]);
      }
      if (j == i) {
        double d = acc.real();
        if (d <= 0)
          throw std::runtime_error("outer_spectral_factor: Toeplitz matrix not positive definite");
        row[0] = std::sqrt(d);
      } else {
        row[static_cast<size_t>(i - j)] = acc / rows[static_cast<size_t>(j)][0];
      }
    }
    if (i > 2 * M) {
      double diff = 0.0;
      for (int k = 0; k <= M; ++k) diff = std::max(diff, std::abs(row[static_cast<size_t>(k)] -
                                                                  prev[static_cast<size_t>(k)]));
      if (diff < 1e-14) {
        prev = row;
        break;
      }
    }
    prev = row;
  }
  // b_k = limit row entry at offset k, phase-normalized.
  std::vector<Complex> b(static_cast<size_t>(M + 1));
  Complex phase = prev[0] == Complex(0, 0) ? Complex(1, 0) : prev[0] / std::abs(prev[0]);
  for (int k = 0; k <= M; ++k) b[static_cast<size_t>(k)] = prev[static_cast<size_t>(k)] / phase;
  return b;
}

std::vector<Complex> outer_factor_from_certificate(const GramCertificate& cert,
                                                   int toeplitz_size) {
  if (cert.K != 1 || !cert.spec.w.is_trivial() ||
      cert.spec.y.family() != words::Family::FreeAbelian || cert.spec.y.generators() != 1)
    throw std::invalid_argument(
        "outer_factor_from_certificate: requires a scalar certificate over trivial W and Y = Z");
  NcPoly a_rec = convolve_adjoint(certificate_factor(cert));
  std::vector<Complex> autocorr(static_cast<size_t>(cert.m_prime) + 1, Complex(0, 0));
  for (const auto& [alpha, c] : a_rec.terms) {
    std::int64_t d = alpha.y.exponents()[0];
    if (d >= 0 && d <= cert.m_prime) autocorr[static_cast<size_t>(d)] = c(0, 0);
  }
  return outer_spectral_factor(autocorr, toeplitz_size);
}

}  // namespace ncfr::soscert
