// Copyright (c) 2026 the ncfr authors. Licensed under the Apache License,
// Version 2.0; see LICENSE for details.

#include "ncfr/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

namespace ncfr::gallery {

using kernels::EntryKey;
using kernels::EntryMap;
using kernels::PartialKernel;
using soscert::NcPoly;
using words::GroupSpec;
using words::LeftFraction;
using words::ProductElement;
using words::ProductSpec;
using words::Word;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Values of a scalar kernel on a fraction set, with conjugate closure.
class Symbol {
 public:
  void set(const LeftFraction& f, Complex v) {
    values_[f] = v;
    values_[words::fraction_inverse(f)] = std::conj(v);
  }
  Complex at(const LeftFraction& f) const {
    auto it = values_.find(f);
    if (it == values_.end()) throw std::logic_error("symbol: undetermined fraction " + f.str());
    return it->second;
  }
  bool known(const LeftFraction& f) const { return values_.find(f) != values_.end(); }

 private:
  std::map<LeftFraction, Complex, words::FractionLess> values_;
};

Mat assemble_symbol(const Symbol& sym, const std::vector<Word>& index) {
  Mat out(index.size(), index.size());
  for (size_t i = 0; i < index.size(); ++i)
    for (size_t j = 0; j < index.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          sym.at(words::fraction(index[i], index[j]));
  return out;
}

// The forced block must not reference the free fraction.
void check_forced_independent(const Symbol& sym, const std::vector<Word>& forced_index,
                              const LeftFraction& free_frac) {
  LeftFraction free_inv = words::fraction_inverse(free_frac);
  for (const Word& u : forced_index)
    for (const Word& v : forced_index) {
      LeftFraction f = words::fraction(u, v);
      if (f == free_frac || f == free_inv)
        throw std::logic_error("counterexample: forced block depends on the free entry");
      if (!sym.known(f))
        throw std::logic_error("counterexample: forced block entry undetermined at " + f.str());
    }
}

std::vector<std::pair<Complex, double>> scan_free_entry(const Symbol& base,
                                                        const std::vector<Word>& index,
                                                        const LeftFraction& free_frac) {
  static const Complex grid[] = {{0, 0}, {0.5, 0}, {-0.5, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  std::vector<std::pair<Complex, double>> out;
  for (Complex zval : grid) {
    Symbol sym = base;
    sym.set(free_frac, zval);
    out.emplace_back(zval, linalg::min_eigenvalue(assemble_symbol(sym, index)));
  }
  return out;
}

std::vector<std::string> labels_of(const std::vector<Word>& index) {
  std::vector<std::string> out;
  for (const Word& u : index) out.push_back(u.str());
  return out;
}

PartialKernel kernel_from_symbol(const GroupSpec& spec, const Word& w_max, const Symbol& sym) {
  EntryMap entries;
  for (const LeftFraction& f : words::left_fraction_set(w_max))
    entries.emplace(EntryKey{f, words::identity(GroupSpec::trivial())},
                    Mat::Constant(1, 1, sym.at(f)));
  return PartialKernel(spec, GroupSpec::trivial(), w_max, 1, std::move(entries));
}

CounterexampleReport cyclic_product_counterexample(const std::string& name,
                                                   const GroupSpec& spec, double offdiag,
                                                   Complex cross) {
  // Base kernel on Her W_{<=x2}: entry(e) = 1, entry(x1^(+-1)) = offdiag,
  // entry(x1^{-1} x2) = cross, entry(x2) fixed by the instance.
  Word e = words::identity(spec);
  Word x1 = words::generator(spec, 1);
  Word x2 = words::generator(spec, 2);

  Symbol sym;
  sym.set(words::fraction(e, e), Complex(1, 0));
  sym.set(words::fraction(e, x1), offdiag);
  sym.set(words::fraction(x1, x2), cross);
  // entry(x2): 1 for Z3*Z2 (x2 is an involution there), offdiag for Z3*Z3.
  if (spec.order(2) == 2)
    sym.set(words::fraction(e, x2), Complex(1, 0));
  else
    sym.set(words::fraction(e, x2), offdiag);

  std::vector<Word> base_index = {e, x1, x2};
  Word s = words::successor(x2);  // x1 x1
  Word x1x1 = words::concat(x1, x1);
  std::vector<Word> ext_index = {e, x1, x2, x1x1};
  LeftFraction free_frac = words::fraction(x2, x1x1);

  CounterexampleReport report;
  report.name = name;
  report.base_labels = labels_of(base_index);
  report.base_matrix = assemble_symbol(sym, base_index);
  report.base_min_eig = linalg::min_eigenvalue(report.base_matrix);

  std::vector<Word> forced_index = {e, x1, x1x1};
  check_forced_independent(sym, forced_index, free_frac);
  report.forced_labels = labels_of(forced_index);
  report.forced_submatrix = assemble_symbol(sym, forced_index);
  report.forced_det = report.forced_submatrix.determinant().real();
  report.forced_min_eig = linalg::min_eigenvalue(report.forced_submatrix);
  report.conclusion = report.forced_det < -1e-9 || report.forced_min_eig < -1e-9
                          ? Conclusion::NoPsdCompletionExists
                          : Conclusion::PsdCompletionExists;
  report.free_entry_scan = scan_free_entry(sym, ext_index, free_frac);
  report.base_kernel = kernel_from_symbol(spec, x2, sym);
  (void)s;
  return report;
}

}  // namespace

CounterexampleReport z3z2_counterexample() {
  return cyclic_product_counterexample("z3z2", GroupSpec::free_product_cyclic({3, 2}), -2.0 / 3.0,
                                       Complex(-2.0 / 3.0, 0));
}

CounterexampleReport z3z3_counterexample() {
  return cyclic_product_counterexample("z3z3", GroupSpec::free_product_cyclic({3, 3}), -kInvSqrt2,
                                       Complex(0, 0));
}

CounterexampleReport toeplitz2d_counterexample() {
  GroupSpec spec = GroupSpec::free_abelian(2);
  auto mono = [&](std::int64_t a, std::int64_t b) {
    return words::word_from_exponents(spec, {a, b});
  };
  // monomials 1, a, b, a^2, ab, b^2, a^2 b and the extension monomial a b^2
  std::vector<Word> base7 = {mono(0, 0), mono(1, 0), mono(0, 1), mono(2, 0),
                             mono(1, 1), mono(0, 2), mono(2, 1)};
  std::vector<Word> ext8 = base7;
  ext8.push_back(mono(1, 2));

  // symbol values on all differences of the 8 monomials: c(1,1) = c(0,2) = s,
  // the extension difference (1,2) free, everything else 0.
  Symbol sym;
  LeftFraction free_frac = words::fraction(mono(0, 0), mono(1, 2));
  for (const Word& u : ext8)
    for (const Word& v : ext8) {
      LeftFraction d = words::fraction(u, v);
      if (d == free_frac || d == words::fraction_inverse(free_frac)) continue;
      if (sym.known(d)) continue;
      const auto& ex = d.num.exponents();
      bool is_s = (ex[0] == 1 && ex[1] == 1) || (ex[0] == 0 && ex[1] == 2) ||
                  (ex[0] == -1 && ex[1] == -1) || (ex[0] == 0 && ex[1] == -2);
      bool is_e = ex[0] == 0 && ex[1] == 0;
      sym.set(d, is_e ? Complex(1, 0) : (is_s ? Complex(kInvSqrt2, 0) : Complex(0, 0)));
    }

  CounterexampleReport report;
  report.name = "toeplitz2";
  report.base_labels = labels_of(base7);
  report.base_matrix = assemble_symbol(sym, base7);
  report.base_min_eig = linalg::min_eigenvalue(report.base_matrix);

  // Fully forced lower 7x7 of the 8x8 extension: rows a .. a b^2.
  std::vector<Word> forced(ext8.begin() + 1, ext8.end());
  check_forced_independent(sym, forced, free_frac);
  report.forced_labels = labels_of(forced);
  report.forced_submatrix = assemble_symbol(sym, forced);
  report.forced_det = report.forced_submatrix.determinant().real();
  report.forced_min_eig = linalg::min_eigenvalue(report.forced_submatrix);
  report.conclusion = report.forced_min_eig < -1e-9 ? Conclusion::NoPsdCompletionExists
                                                    : Conclusion::PsdCompletionExists;
  report.free_entry_scan = scan_free_entry(sym, ext8, free_frac);

  // The upper 6x6 block already determines every forced entry: each forced
  // difference occurs among differences of the first six monomials.
  std::vector<Word> base6(base7.begin(), base7.begin() + 6);
  std::set<LeftFraction, words::FractionLess> diffs6;
  for (const Word& u : base6)
    for (const Word& v : base6) diffs6.insert(words::fraction(u, v));
  bool six_determines = true;
  for (const Word& u : forced)
    for (const Word& v : forced)
      if (diffs6.find(words::fraction(u, v)) == diffs6.end()) six_determines = false;
  report.extras["upper6_determines_forced_block"] = six_determines ? 1.0 : 0.0;
  report.extras["upper6_min_eig"] =
      linalg::min_eigenvalue(assemble_symbol(sym, base6));
  return report;
}

bool regression_ok(const CounterexampleReport& report, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (report.name == "z3z2" || report.name == "z3z3") {
    double target = report.name == "z3z2"
                        ? -25.0 / 27.0
                        : (1.0 + kInvSqrt2) * (1.0 + kInvSqrt2) * (1.0 - std::numbers::sqrt2);
    if (std::abs(report.base_min_eig) > 1e-10) return fail("base matrix min eigenvalue moved");
    if (std::abs(report.forced_det - target) > 1e-12) return fail("forced determinant moved");
  } else if (report.name == "toeplitz2") {
    // min eigenvalue of the forced block: 1 - golden_ratio / sqrt(2)
    double target = 1.0 - (1.0 + std::sqrt(5.0)) / (2.0 * std::numbers::sqrt2);
    if (report.base_min_eig < -1e-12) return fail("base matrix lost positivity");
    if (std::abs(report.forced_min_eig - target) > 1e-12)
      return fail("forced min eigenvalue moved");
    auto it = report.extras.find("upper6_determines_forced_block");
    if (it == report.extras.end() || it->second != 1.0)
      return fail("upper 6x6 block no longer determines the forced block");
  } else {
    return fail("unknown report");
  }
  if (report.conclusion != Conclusion::NoPsdCompletionExists)
    return fail("conclusion changed");
  for (const auto& [zval, lo] : report.free_entry_scan)
    if (lo > -1e-9) return fail("a free entry choice repaired positivity");
  return true;
}

// ---------------------------------------------------------------------------
// CHSH

namespace {

ProductSpec chsh_spec() {
  return ProductSpec{GroupSpec::free_product_cyclic({2, 2}),
                     GroupSpec::free_product_cyclic({2, 2})};
}

ProductElement xy(const ProductSpec& spec, int i, int j) {
  Word w = i == 0 ? words::identity(spec.w) : words::generator(spec.w, i);
  Word y = j == 0 ? words::identity(spec.y) : words::generator(spec.y, j);
  return ProductElement{words::fraction_from_word(w), y};
}

}  // namespace

NcPoly chsh_polynomial() {
  ProductSpec spec = chsh_spec();
  NcPoly a = soscert::make_poly(spec, 1, 1);
  soscert::add_term(a, xy(spec, 0, 0), Complex(2.0 * std::numbers::sqrt2, 0));
  soscert::add_term(a, xy(spec, 1, 1), Complex(-1, 0));
  soscert::add_term(a, xy(spec, 1, 2), Complex(-1, 0));
  soscert::add_term(a, xy(spec, 2, 1), Complex(-1, 0));
  soscert::add_term(a, xy(spec, 2, 2), Complex(1, 0));
  return a;
}

NcPoly chsh_closed_form_factor() {
  // rows: 2^{-1/4} (x1 - (y1+y2)/sqrt(2)) and 2^{-1/4} (x2 - (y1-y2)/sqrt(2))
  ProductSpec spec = chsh_spec();
  const double c = std::pow(2.0, -0.25);
  NcPoly b = soscert::make_poly(spec, 2, 1);
  Mat col(2, 1);
  col << Complex(c, 0), Complex(0, 0);
  soscert::add_term(b, xy(spec, 1, 0), col);
  col << Complex(0, 0), Complex(c, 0);
  soscert::add_term(b, xy(spec, 2, 0), col);
  col << Complex(-c * kInvSqrt2, 0), Complex(-c * kInvSqrt2, 0);
  soscert::add_term(b, xy(spec, 0, 1), col);
  col << Complex(-c * kInvSqrt2, 0), Complex(c * kInvSqrt2, 0);
  soscert::add_term(b, xy(spec, 0, 2), col);
  return b;
}

repsys::Representation tsirelson_representation() {
  repsys::Representation rep;
  rep.spec = chsh_spec();
  rep.dim_w = 2;
  rep.dim_y = 2;
  Mat sx(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sz << 1, 0, 0, -1;
  rep.w_unitaries = {sx, sz};
  rep.y_unitaries = {kInvSqrt2 * (sx + sz), kInvSqrt2 * (sx - sz)};
  return rep;
}

soscert::GramCertificate chsh_certificate() {
  NcPoly a = chsh_polynomial();
  soscert::CertifyOptions opts;
  opts.max_y_degree = 1;
  opts.solve.tol = 1e-9;
  soscert::CertifyResult res =
      soscert::certify(a, words::generator(a.spec.w, 2), 1, opts);
  if (!res.certificate)
    throw std::runtime_error("chsh_certificate: feasibility search failed at Y-degree 1");
  if (res.certificate->residual > 1e-7)
    throw std::runtime_error("chsh_certificate: certificate residual regressed");
  return *res.certificate;
}

// ---------------------------------------------------------------------------
// Separation search

namespace {

// Real parametrization of a Hermitian scalar coefficient function on a
// fraction set: one real variable for involutive fractions, a (re, im) pair
// for each conjugate pair of fractions.
struct HermitianVars {
  struct Slot {
    LeftFraction frac;
    bool involutive;
    int offset;  // index of the real part; imag part at offset+1 when present
  };
  std::vector<Slot> slots;
  int count = 0;

  explicit HermitianVars(const std::vector<LeftFraction>& fracs) {
    for (const LeftFraction& f : fracs) {
      LeftFraction inv = words::fraction_inverse(f);
      if (words::fraction_cmp(inv, f) < 0) continue;  // handled by its partner
      bool invo = inv == f;
      slots.push_back(Slot{f, invo, count});
      count += invo ? 1 : 2;
    }
  }

  // Adds to `row` the real-linear functional x -> Re(sum_f t(f) f_x) given
  // the values t on all fractions (t must be conjugate-closed).
  void accumulate(Eigen::VectorXd& row,
                  const std::function<Complex(const LeftFraction&)>& t) const {
    for (const Slot& s : slots) {
      if (s.involutive) {
        row(s.offset) += t(s.frac).real();
      } else {
        Complex tv = t(s.frac);
        Complex tw = t(words::fraction_inverse(s.frac));
        // f at the partner fraction is the conjugate variable
        row(s.offset) += tv.real() + tw.real();
        row(s.offset + 1) += -tv.imag() + tw.imag();
      }
    }
  }

  NcPoly poly(const ProductSpec& spec, const Eigen::VectorXd& x) const {
    NcPoly f = soscert::make_poly(spec, 1, 1);
    for (const Slot& s : slots) {
      Complex v = s.involutive ? Complex(x(s.offset), 0)
                               : Complex(x(s.offset), x(s.offset + 1));
      if (v == Complex(0, 0)) continue;
      soscert::add_term(f, ProductElement{s.frac, words::identity(spec.y)}, v);
      if (!s.involutive)
        soscert::add_term(
            f, ProductElement{words::fraction_inverse(s.frac), words::identity(spec.y)},
            std::conj(v));
    }
    return f;
  }
};

struct HalfSpace {
  Eigen::VectorXd a;
  double b;  // a . x <= b
};

// Cyclic projections onto half-spaces and a box; returns true on a feasible
// point within the sweep cap.
bool pocs_solve(const std::vector<HalfSpace>& cons, double box, Eigen::VectorXd& x, int sweeps) {
  for (int it = 0; it < sweeps; ++it) {
    double viol = 0.0;
    x = x.cwiseMax(-box).cwiseMin(box);
    for (const HalfSpace& h : cons) {
      double norm2 = h.a.squaredNorm();
      if (norm2 < 1e-300) continue;
      double slack = h.a.dot(x) - h.b;
      if (slack > 0) {
        viol = std::max(viol, slack);
        x -= (slack / norm2) * h.a;
      }
    }
    if (viol < 1e-12) return true;
  }
  return false;
}

// Random permutation representation of a free product of cyclic groups:
// each generator becomes a conjugated product of disjoint cycles of its
// order. Integer traces sharpen the sampled cuts.
repsys::Representation permutation_representation(const ProductSpec& spec, int dim,
                                                  std::mt19937_64& rng) {
  repsys::Representation rep;
  rep.spec = spec;
  rep.dim_w = dim;
  rep.dim_y = 1;
  for (int j = 1; j <= spec.w.generators(); ++j) {
    int m = spec.w.order(j);
    std::vector<int> perm(static_cast<size_t>(dim));
    std::vector<int> pts(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i) pts[static_cast<size_t>(i)] = i;
    std::shuffle(pts.begin(), pts.end(), rng);
    for (int i = 0; i < dim; ++i) perm[static_cast<size_t>(i)] = i;
    for (int start = 0; start + m <= dim; start += m)
      for (int t = 0; t < m; ++t)
        perm[static_cast<size_t>(pts[static_cast<size_t>(start + t)])] =
            pts[static_cast<size_t>(start + (t + 1) % m)];
    Mat u = Mat::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) u(perm[static_cast<size_t>(i)], i) = 1.0;
    rep.w_unitaries.push_back(u);
  }
  return rep;
}

}  // namespace

SeparationResult separation_search(const CounterexampleReport& report, const Word& level,
                                   const SeparationOptions& opts) {
  if (!report.base_kernel)
    throw std::invalid_argument("separation_search: report carries no base kernel");
  const PartialKernel& tau = *report.base_kernel;
  ProductSpec spec{tau.w_spec(), GroupSpec::trivial()};
  std::vector<LeftFraction> fracs = words::left_fraction_set(level);
  HermitianVars vars(fracs);

  // pairing constraint sum tau(f) f_x <= -delta
  std::vector<LeftFraction> tau_fracs = words::left_fraction_set(tau.w_max());
  HalfSpace pairing;
  pairing.a = Eigen::VectorXd::Zero(vars.count);
  vars.accumulate(pairing.a, [&](const LeftFraction& f) -> Complex {
    return words::fraction_in_set(f, tau_fracs) ? tau.entry(f)(0, 0) : Complex(0, 0);
  });
  pairing.b = -opts.delta;

  // representation pool: random unitary models plus permutation models
  std::vector<repsys::Representation> pool;
  std::mt19937_64 perm_rng(repsys::splitmix64(opts.seed ^ 0x5eedULL));
  for (int t = 0; t < opts.pool_size; ++t) {
    int dim = 1 + t % opts.dim_max;
    if (spec.w.family() == words::Family::FreeProductCyclic && t % 3 == 0) {
      int lcm = 1;
      for (int j = 1; j <= spec.w.generators(); ++j)
        lcm = std::lcm(lcm, spec.w.order(j));
      pool.push_back(permutation_representation(spec, std::max(dim, lcm), perm_rng));
    } else {
      pool.push_back(repsys::sample_representation(
          spec, dim, repsys::derive_seed(opts.seed, static_cast<std::uint64_t>(t))));
    }
  }

  std::vector<HalfSpace> cons = {pairing};
  Eigen::VectorXd x = Eigen::VectorXd::Zero(vars.count);
  SeparationResult result;
  for (int round = 0; round < opts.max_rounds; ++round) {
    result.rounds = round + 1;
    if (!pocs_solve(cons, 10.0, x, 4000)) return result;  // infeasible at this margin
    NcPoly f = vars.poly(spec, x);
    bool violated = false;
    for (const auto& rep : pool) {
      Mat value = repsys::evaluate(f, rep);
      Eigen::SelfAdjointEigenSolver<Mat> es(linalg::herm(value));
      for (int i = 0; i < es.eigenvalues().size(); ++i) {
        if (es.eigenvalues()(i) >= -1e-10) break;
        violated = true;
        Eigen::VectorXcd v = es.eigenvectors().col(i);
        HalfSpace cut;
        cut.a = Eigen::VectorXd::Zero(vars.count);
        vars.accumulate(cut.a, [&](const LeftFraction& f2) -> Complex {
          return (v.adjoint() *
                  repsys::rep_value(rep, ProductElement{f2, words::identity(spec.y)}) * v)(0, 0);
        });
        cut.a = -cut.a;  // require v* f(pi) v >= 0
        cut.b = 0.0;
        cons.push_back(std::move(cut));
      }
    }
    if (!violated) {
      result.found = true;
      result.separating = f;
      result.tau_pairing = pairing.a.dot(x);
      // fresh verification sample
      double lo = 0.0;
      for (int t = 0; t < opts.verify_samples; ++t) {
        auto rep = repsys::sample_representation(
            spec, 1 + t % opts.dim_max,
            repsys::derive_seed(opts.seed ^ 0xabcdef, static_cast<std::uint64_t>(t)));
        lo = std::min(lo, linalg::min_eigenvalue(repsys::evaluate(f, rep)));
      }
      result.sampled_min_eig = lo;
      result.reps_used = static_cast<int>(pool.size()) + opts.verify_samples;
      if (opts.try_sos) {
        result.sos_attempted = true;
        double margin = 0.0;
        for (const auto& [alpha, c] : f.terms) margin = std::max(margin, linalg::max_abs(c));
        NcPoly shifted = f;
        soscert::add_term(shifted, words::product_identity(spec), Complex(0.05 * margin, 0));
        soscert::CertifyOptions sos_opts;
        sos_opts.solve.max_iter = 8000;
        try {
          Word bound = words::successor(words::successor(level));
          auto res = soscert::certify(shifted, bound, 0, sos_opts);
          result.sos_succeeded = res.certificate.has_value();
        } catch (const std::exception&) {
          result.sos_succeeded = false;
        }
      }
      return result;
    }
  }
  return result;
}

}  // namespace ncfr::gallery
