// Copyright (c) 2026 the ncfr authors. Licensed under the Apache License,
// Version 2.0; see LICENSE for details.

#include "ncfr/kernels.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ncfr::kernels {

using words::FractionLess;
using words::GroupSpec;
using words::LeftFraction;
using words::Word;

namespace {

void check_group_spec(const GroupSpec& g) {
  if (g.is_trivial()) return;
  if (g.family() == words::Family::FreeProductCyclic && g.generators() == 1) return;
  throw std::invalid_argument("PartialKernel: block group must be trivial or cyclic");
}

std::vector<Word> group_elements_of(const GroupSpec& g) {
  if (g.is_trivial()) return {words::identity(g)};
  return words::enumerate_length_upto(g, g.order(1) - 1);
}

}  // namespace

// ---------------------------------------------------------------------------
// PartialKernel

PartialKernel::PartialKernel(GroupSpec w_spec, GroupSpec g_spec, Word w_max, int K,
                             EntryMap entries)
    : w_spec_(std::move(w_spec)),
      g_spec_(std::move(g_spec)),
      w_max_(std::move(w_max)),
      K_(K),
      entries_(std::move(entries)) {
  if (K_ < 1) throw std::invalid_argument("PartialKernel: block size must be >= 1");
  if (w_max_.spec() != w_spec_) throw std::invalid_argument("PartialKernel: w_max spec mismatch");
  check_group_spec(g_spec_);

  // Domain exactness: keys are exactly Her W_{<=w_max} x G.
  std::vector<LeftFraction> fracs = words::left_fraction_set(w_max_);
  std::vector<Word> gels = group_elements_of(g_spec_);
  if (entries_.size() != fracs.size() * gels.size())
    throw std::invalid_argument("PartialKernel: entry count does not match Her W_{<=w_max} x G");
  for (const auto& f : fracs)
    for (const auto& g : gels)
      if (entries_.find(EntryKey{f, g}) == entries_.end())
        throw std::invalid_argument("PartialKernel: missing entry for fraction " + f.str());

  for (const auto& [key, value] : entries_) {
    if (value.rows() != K_ || value.cols() != K_)
      throw std::invalid_argument("PartialKernel: block size mismatch at " + key.frac.str());
    EntryKey inv{words::fraction_inverse(key.frac), words::inverse(key.g)};
    const Mat& mirror = entries_.at(inv);
    if ((mirror - value.adjoint()).cwiseAbs().maxCoeff() >
        1e-12 * (1.0 + value.cwiseAbs().maxCoeff()))
      throw std::invalid_argument("PartialKernel: hermiticity violated at " + key.frac.str());
  }
}

PartialKernel PartialKernel::delta(const GroupSpec& w_spec, const GroupSpec& g_spec,
                                   const Word& w_max, int K) {
  EntryMap entries;
  for (const auto& f : words::left_fraction_set(w_max))
    for (const auto& g : group_elements_of(g_spec)) {
      bool id = f.is_identity() && g.is_identity();
      entries.emplace(EntryKey{f, g}, id ? Mat::Identity(K, K) : Mat::Zero(K, K));
    }
  return PartialKernel(w_spec, g_spec, w_max, K, std::move(entries));
}

PartialKernel PartialKernel::constant(const GroupSpec& w_spec, const GroupSpec& g_spec,
                                      const Word& w_max, const Mat& value) {
  EntryMap entries;
  for (const auto& f : words::left_fraction_set(w_max))
    for (const auto& g : group_elements_of(g_spec)) entries.emplace(EntryKey{f, g}, value);
  return PartialKernel(w_spec, g_spec, w_max, static_cast<int>(value.rows()), std::move(entries));
}

int PartialKernel::group_order() const {
  return g_spec_.is_trivial() ? 1 : g_spec_.order(1);
}

const Mat& PartialKernel::entry(const LeftFraction& f, const Word& g) const {
  auto it = entries_.find(EntryKey{f, g});
  if (it == entries_.end())
    throw std::out_of_range("PartialKernel: no entry for fraction " + f.str());
  return it->second;
}

const Mat& PartialKernel::entry(const LeftFraction& f) const {
  return entry(f, words::identity(g_spec_));
}

std::vector<Word> PartialKernel::group_elements() const { return group_elements_of(g_spec_); }

// ---------------------------------------------------------------------------
// Assembly

namespace {

// Block lookup against a raw entry map, so completion steps can consult
// partially extended data.
struct EntryLookup {
  const GroupSpec* g_spec;
  const EntryMap* entries;
  int K;

  const Mat& operator()(const LeftFraction& f, const Word& g) const {
    auto it = entries->find(EntryKey{f, g});
    if (it == entries->end())
      throw std::logic_error("completion: required entry missing for " + f.str());
    return it->second;
  }
};

// The (rows x cols) sub-block-matrix over word index lists, expanded in the
// group direction.
Mat submatrix(const EntryLookup& lk, const std::vector<Word>& rows, const std::vector<Word>& cols,
              const std::vector<Word>& gels) {
  int m = static_cast<int>(gels.size());
  int K = lk.K;
  int q = m * K;
  Mat out(static_cast<Eigen::Index>(rows.size()) * q, static_cast<Eigen::Index>(cols.size()) * q);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j) {
      LeftFraction f = words::fraction(rows[i], cols[j]);
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
          Word q_ab = words::concat(words::inverse(gels[static_cast<size_t>(a)]),
                                    gels[static_cast<size_t>(b)]);
          out.block(static_cast<Eigen::Index>(i) * q + a * K,
                    static_cast<Eigen::Index>(j) * q + b * K, K, K) = lk(f, q_ab);
        }
    }
  return out;
}

}  // namespace

AssembledForm assemble(const PartialKernel& k) {
  std::vector<Word> ws = words::enumerate_upto(k.w_max());
  std::vector<Word> gels = k.group_elements();
  AssembledForm form;
  form.K = k.block_size();
  for (const Word& u : ws)
    for (const Word& g : gels) form.index.emplace_back(u, g);
  EntryLookup lk{&k.g_spec(), &k.entries(), k.block_size()};
  form.matrix = submatrix(lk, ws, ws, gels);
  return form;
}

PsdReport is_psd(const AssembledForm& form, double tol) {
  double defect = linalg::hermiticity_defect(form.matrix);
  if (defect > 1e-10 * (1.0 + linalg::max_abs(form.matrix)))
    throw std::invalid_argument("is_psd: matrix is not Hermitian");
  auto rep = linalg::psd_check(form.matrix, tol);
  return {rep.psd, rep.min_eig, rep.norm};
}

bool invariance_check(const AssembledForm& form, double tol) {
  std::map<EntryKey, Mat, EntryKeyLess> seen;
  int K = form.K;
  double scale = 1.0 + linalg::max_abs(form.matrix);
  for (size_t i = 0; i < form.index.size(); ++i)
    for (size_t j = 0; j < form.index.size(); ++j) {
      const auto& [u, g] = form.index[i];
      const auto& [v, h] = form.index[j];
      EntryKey key{words::fraction(u, v), words::concat(words::inverse(g), h)};
      Mat block = form.matrix.block(static_cast<Eigen::Index>(i) * K,
                                    static_cast<Eigen::Index>(j) * K, K, K);
      auto [it, fresh] = seen.emplace(key, block);
      if (!fresh && (it->second - block).cwiseAbs().maxCoeff() > tol * scale) return false;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Parrott completion

Mat parrott_complete(const Mat& A, const Mat& E, const Mat& B, const Mat& F, const Mat& C,
                     double tol) {
  Eigen::Index na = A.rows(), nb = B.rows(), nc = C.rows();
  if (A.cols() != na || B.cols() != nb || C.cols() != nc || E.rows() != na || E.cols() != nb ||
      F.rows() != nb || F.cols() != nc)
    throw std::invalid_argument("parrott_complete: inconformable blocks");
  Mat P(na + nb, na + nb);
  P << A, E, E.adjoint(), B;
  Mat Q(nb + nc, nb + nc);
  Q << B, F, F.adjoint(), C;
  if (!linalg::psd_check(P, tol).psd)
    throw std::invalid_argument("parrott_complete: [[A,E],[E*,B]] is not psd");
  if (!linalg::psd_check(Q, tol).psd)
    throw std::invalid_argument("parrott_complete: [[B,F],[F*,C]] is not psd");
  if (nb == 0) return Mat::Zero(na, nc);
  return E * linalg::pinv(linalg::herm(B)) * F;
}

namespace {

// Average a (rows x cols)-block matrix over the simultaneous translation
// action of the cyclic group on its G direction.
Mat group_average(const Mat& X, int m, int K) {
  if (m == 1) return X;
  int q = m * K;
  Eigen::Index nr = X.rows() / q, nc = X.cols() / q;
  Mat out = Mat::Zero(X.rows(), X.cols());
  for (int t = 0; t < m; ++t) {
    for (Eigen::Index i = 0; i < nr; ++i)
      for (Eigen::Index j = 0; j < nc; ++j)
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b)
            out.block(i * q + a * K, j * q + b * K, K, K) +=
                X.block(i * q + ((a + t) % m) * K, j * q + ((b + t) % m) * K, K, K);
  }
  return out / static_cast<double>(m);
}

double invariance_defect(const Mat& X, int m, int K) {
  return (X - group_average(X, m, K)).cwiseAbs().maxCoeff();
}

}  // namespace

Mat parrott_complete_invariant(const Mat& A, const Mat& E, const Mat& B, const Mat& F,
                               const Mat& C, int group_order, int K, double tol) {
  int q = group_order * K;
  for (const Mat* mp : {&A, &E, &B, &F, &C}) {
    if (mp->rows() % q != 0 || mp->cols() % q != 0)
      throw std::invalid_argument("parrott_complete_invariant: sizes incompatible with group");
    if (mp->size() > 0 && invariance_defect(*mp, group_order, K) >
                              tol * (1.0 + linalg::max_abs(*mp)) * 100.0)
      throw std::invalid_argument("parrott_complete_invariant: input block not group-invariant");
  }
  Mat X = parrott_complete(A, E, B, F, C, tol);
  return group_average(X, group_order, K);
}

// ---------------------------------------------------------------------------
// Successor-step completion

namespace {

void require_psd_input(const PartialKernel& k, double tol, const char* where) {
  auto rep = is_psd(assemble(k), tol);
  if (!rep.psd) {
    std::ostringstream os;
    os << where << ": input kernel is not psd (min eigenvalue " << rep.min_eig << ")";
    throw std::invalid_argument(os.str());
  }
}

void add_entry_pair(EntryMap& entries, const GroupSpec& /*g_spec*/, const LeftFraction& frac,
                    const Word& g, const Mat& value) {
  entries[EntryKey{frac, g}] = value;
  entries[EntryKey{words::fraction_inverse(frac), words::inverse(g)}] = value.adjoint();
}

// Splits the completed corner block X (rows indexed by rows x G, one column
// word times G) into per-fraction functions and stores them with their
// adjoint mirrors.
void store_corner(EntryMap& entries, const PartialKernel& k, const std::vector<Word>& rows,
                  const Word& col, const Mat& X) {
  std::vector<Word> gels = k.group_elements();
  int m = static_cast<int>(gels.size());
  int K = k.block_size();
  int q = m * K;
  for (size_t i = 0; i < rows.size(); ++i) {
    LeftFraction frac = words::fraction(rows[i], col);
    for (int b = 0; b < m; ++b) {
      Mat value = X.block(static_cast<Eigen::Index>(i) * q + 0 * K, b * K, K, K);
      add_entry_pair(entries, k.g_spec(), frac, gels[static_cast<size_t>(b)], value);
    }
  }
}

}  // namespace

PartialKernel extend_one_step_semigroup(const PartialKernel& k, double tol) {
  if (k.w_spec().family() != words::Family::FreeSemigroup)
    throw std::invalid_argument("extend_one_step_semigroup: kernel is not over a free semigroup");
  require_psd_input(k, tol, "extend_one_step_semigroup");

  const Word s = words::successor(k.w_max());
  const int s1 = s.letters().front();
  std::vector<Word> below = words::enumerate_upto(k.w_max());

  // head consists of the empty word and the words whose first letter differs
  // from the first letter of the successor; the shift u -> s1^{-1} u maps the
  // rest (and s itself) back below w_max.
  std::vector<Word> head, mid;
  for (const Word& u : below) {
    if (u.is_identity() || u.letters().front() != s1)
      head.push_back(u);
    else
      mid.push_back(u);
  }

  std::vector<Word> gels = k.group_elements();
  EntryLookup lk{&k.g_spec(), &k.entries(), k.block_size()};
  Mat A = submatrix(lk, head, head, gels);
  Mat E = submatrix(lk, head, mid, gels);
  Mat B = submatrix(lk, mid, mid, gels);
  Mat F = submatrix(lk, mid, {s}, gels);
  Mat C = submatrix(lk, {s}, {s}, gels);
  Mat X = parrott_complete_invariant(A, E, B, F, C, k.group_order(), k.block_size(), tol);

  EntryMap entries = k.entries();
  store_corner(entries, k, head, s, X);
  return PartialKernel(k.w_spec(), k.g_spec(), s, k.block_size(), std::move(entries));
}

PartialKernel extend_one_step_z2(const PartialKernel& k, double tol) {
  const GroupSpec& spec = k.w_spec();
  if (!spec.all_orders_two())
    throw std::invalid_argument("extend_one_step_z2: kernel is not over a free product of Z_2");
  if (spec.generators() < 2)
    throw std::invalid_argument("extend_one_step_z2: need at least two generators");
  require_psd_input(k, tol, "extend_one_step_z2");

  const Word s = words::successor(k.w_max());
  const int j = s.letters().front();
  const Word xj = words::generator(spec, j);
  const Word z = words::reduce(
      spec, std::span<const int>(s.letters().data() + 1, s.letters().size() - 1));

  // L = W_{<=z} u x_j W_{<=z}; the only unknown fraction over L x L is
  // z^{-1} x_j z.
  std::set<Word, words::ShortlexLess> lset;
  for (const Word& u : words::enumerate_upto(z)) {
    lset.insert(u);
    lset.insert(words::concat(xj, u));
  }
  std::vector<Word> L(lset.begin(), lset.end());
  std::vector<Word> mid1;
  for (const Word& u : L)
    if (u != z && u != s) mid1.push_back(u);

  std::vector<Word> gels = k.group_elements();
  const int m = k.group_order();
  const int K = k.block_size();
  EntryLookup lk{&k.g_spec(), &k.entries(), K};

  Mat A1 = submatrix(lk, {z}, {z}, gels);
  Mat E1 = submatrix(lk, {z}, mid1, gels);
  Mat B1 = submatrix(lk, mid1, mid1, gels);
  Mat F1 = submatrix(lk, mid1, {s}, gels);
  Mat C1 = submatrix(lk, {s}, {s}, gels);
  Mat X1 = parrott_complete_invariant(A1, E1, B1, F1, C1, m, K, tol);

  // Averaging with the image under the shift u -> x_j u replaces the new
  // entry by its Hermitian part; the fraction z^{-1} x_j z is an involution,
  // so its stored block must satisfy p(gamma) = p(gamma^{-1})^*.
  Mat Xsym = (X1 + X1.adjoint()) / 2.0;

  EntryMap entries = k.entries();
  const LeftFraction alpha0 = words::fraction(z, s);
  for (int b = 0; b < m; ++b)
    add_entry_pair(entries, k.g_spec(), alpha0, gels[static_cast<size_t>(b)],
                   Xsym.block(0, b * K, K, K));

  // Remaining unknown fractions u^{-1} s for u in head = W_{<=s} \ L.
  std::vector<Word> wles = words::enumerate_upto(k.w_max());
  wles.push_back(s);
  std::vector<Word> head;
  for (const Word& u : wles)
    if (lset.find(u) == lset.end()) head.push_back(u);

  if (!head.empty()) {
    std::vector<Word> mid2;
    for (const Word& u : L)
      if (u != s) mid2.push_back(u);
    EntryLookup lk2{&k.g_spec(), &entries, K};
    Mat A2 = submatrix(lk2, head, head, gels);
    Mat E2 = submatrix(lk2, head, mid2, gels);
    Mat B2 = submatrix(lk2, mid2, mid2, gels);
    Mat F2 = submatrix(lk2, mid2, {s}, gels);
    Mat C2 = submatrix(lk2, {s}, {s}, gels);
    Mat X2 = parrott_complete_invariant(A2, E2, B2, F2, C2, m, K, tol);
    store_corner(entries, k, head, s, X2);
  }

  return PartialKernel(spec, k.g_spec(), s, K, std::move(entries));
}

PartialKernel extend_one_step(const PartialKernel& k, double tol) {
  if (k.w_spec().family() == words::Family::FreeSemigroup)
    return extend_one_step_semigroup(k, tol);
  if (k.w_spec().all_orders_two()) return extend_one_step_z2(k, tol);
  throw std::invalid_argument(
      "extend_one_step: completion is only available for free semigroups and free products of "
      "Z_2");
}

PartialKernel extend_steps(const PartialKernel& k, int steps, double tol) {
  PartialKernel cur = k;
  for (int i = 0; i < steps; ++i) cur = extend_one_step(cur, tol);
  return cur;
}

PartialKernel extend_to_word(const PartialKernel& k, const Word& target, double tol,
                             int max_steps) {
  if (target.spec() != k.w_spec())
    throw std::invalid_argument("extend_to_word: target spec mismatch");
  PartialKernel cur = k;
  int steps = 0;
  while (words::shortlex_less(cur.w_max(), target)) {
    if (++steps > max_steps) throw std::runtime_error("extend_to_word: step cap exceeded");
    cur = extend_one_step(cur, tol);
  }
  return cur;
}

PartialKernel extend_to_length(const PartialKernel& k, int length, double tol, int max_steps) {
  PartialKernel cur = k;
  int steps = 0;
  // Covered once every word of the requested length lies below w_max.
  while (cur.w_max().length() < length ||
         (cur.w_max().length() == length &&
          words::successor(cur.w_max()).length() == length)) {
    if (++steps > max_steps) throw std::runtime_error("extend_to_length: step cap exceeded");
    cur = extend_one_step(cur, tol);
  }
  return cur;
}

}  // namespace ncfr::kernels
