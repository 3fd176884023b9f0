// Copyright (c) 2026 the ncfr authors. Licensed under the Apache License,
// Version 2.0; see LICENSE for details.

#pragma once

#include <map>
#include <vector>

#include "ncfr/linalg.hpp"
#include "ncfr/words.hpp"

namespace ncfr::kernels {

using linalg::Mat;

// Key of one stored block: a left fraction over W, optionally paired with an
// element of a finite cyclic block group G.
struct EntryKey {
  words::LeftFraction frac;
  words::Word g;

  bool operator==(const EntryKey& o) const { return frac == o.frac && g == o.g; }
};

struct EntryKeyLess {
  bool operator()(const EntryKey& a, const EntryKey& b) const {
    if (int c = words::fraction_cmp(a.frac, b.frac); c != 0) return c < 0;
    return words::shortlex_less(a.g, b.g);
  }
};

using EntryMap = std::map<EntryKey, Mat, EntryKeyLess>;

// A partially defined form: K x K blocks indexed by Her W_{<=w_max} (times a
// finite cyclic group G when present). Immutable after construction; the
// constructor enforces domain exactness and hermiticity.
class PartialKernel {
 public:
  PartialKernel(words::GroupSpec w_spec, words::GroupSpec g_spec, words::Word w_max, int K,
                EntryMap entries);

  // entry(e) = I, all other fractions zero.
  static PartialKernel delta(const words::GroupSpec& w_spec, const words::GroupSpec& g_spec,
                             const words::Word& w_max, int K);
  // every entry equal to the given Hermitian block (entry(e) included).
  static PartialKernel constant(const words::GroupSpec& w_spec, const words::GroupSpec& g_spec,
                                const words::Word& w_max, const Mat& value);

  const words::GroupSpec& w_spec() const { return w_spec_; }
  const words::GroupSpec& g_spec() const { return g_spec_; }
  const words::Word& w_max() const { return w_max_; }
  int block_size() const { return K_; }
  bool has_group() const { return !g_spec_.is_trivial(); }
  int group_order() const;
  const EntryMap& entries() const { return entries_; }
  const Mat& entry(const words::LeftFraction& f, const words::Word& g) const;
  const Mat& entry(const words::LeftFraction& f) const;
  std::vector<words::Word> group_elements() const;

 private:
  words::GroupSpec w_spec_;
  words::GroupSpec g_spec_;
  words::Word w_max_;
  int K_;
  EntryMap entries_;
};

// The Hermitian block matrix of a kernel: index W_{<=w_max} x G, block
// ((u,g),(v,h)) = entry(u^{-1} v, g^{-1} h).
struct AssembledForm {
  std::vector<std::pair<words::Word, words::Word>> index;  // (word, group element)
  int K = 1;
  Mat matrix;
};

AssembledForm assemble(const PartialKernel& k);

struct PsdReport {
  bool psd;
  double min_eig;
  double norm;
};

// min_eig >= -tol * (1 + ||matrix||); throws if the matrix is not Hermitian
// beyond machine tolerance.
PsdReport is_psd(const AssembledForm& form, double tol);

// True when blocks at index pairs with equal fractions (and equal group
// quotients) agree within tol.
bool invariance_check(const AssembledForm& form, double tol);

// Canonical psd completion X = E B^+ F of the missing corner of
// [[A,E,X],[E*,B,F],[X*,F*,C]]. Throws when either given 2x2 block matrix
// fails its psd precondition at tolerance tol.
Mat parrott_complete(const Mat& A, const Mat& E, const Mat& B, const Mat& F, const Mat& C,
                     double tol);

// Same, for blocks carrying a finite cyclic group action: every argument is a
// block matrix whose (i,j) blocks are group-invariant of size
// (group_order*K) x (group_order*K). The result is averaged over the group
// action, so its invariance is exact; throws if an input block fails the
// invariance check at tolerance tol.
Mat parrott_complete_invariant(const Mat& A, const Mat& E, const Mat& B, const Mat& F,
                               const Mat& C, int group_order, int K, double tol);

// One shortlex successor step of the completion, free-semigroup index set.
PartialKernel extend_one_step_semigroup(const PartialKernel& k, double tol);

// One shortlex successor step, free product of g >= 2 copies of Z_2.
PartialKernel extend_one_step_z2(const PartialKernel& k, double tol);

// Dispatch on the kernel family.
PartialKernel extend_one_step(const PartialKernel& k, double tol);

PartialKernel extend_steps(const PartialKernel& k, int steps, double tol);
PartialKernel extend_to_word(const PartialKernel& k, const words::Word& target, double tol,
                             int max_steps = 10000);
PartialKernel extend_to_length(const PartialKernel& k, int length, double tol,
                               int max_steps = 10000);

}  // namespace ncfr::kernels
