// Copyright (c) 2026 the ncfr authors. Licensed under the Apache License,
// Version 2.0; see LICENSE for details.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ncfr::words {

// Supported index families. FreeSemigroup(g) is the free semigroup on g
// letters; FreeProductCyclic(orders) is the free product of cyclic groups
// Z_{m_1} * ... * Z_{m_g}; FreeAbelian(h) is Z^h with the nonnegative
// orthant as its distinguished sub-semigroup.
enum class Family { FreeSemigroup, FreeProductCyclic, FreeAbelian };

class GroupSpec {
 public:
  static GroupSpec free_semigroup(int g);
  static GroupSpec free_product_cyclic(std::vector<int> orders);
  static GroupSpec free_abelian(int h);
  // The one-element group; used for absent Y factors and absent G blocks.
  static GroupSpec trivial();

  Family family() const { return family_; }
  int generators() const { return rank_; }
  int order(int gen) const;  // FreeProductCyclic only, gen is 1-based
  const std::vector<int>& orders() const { return orders_; }
  bool is_group() const { return family_ != Family::FreeSemigroup; }
  bool is_trivial() const { return rank_ == 0; }
  bool all_orders_two() const;
  // True when every element of the group is a quotient a^{-1} b of semigroup
  // elements, i.e. the family may serve as a Y (or block-group) direction.
  bool group_of_fractions() const { return is_group(); }

  bool operator==(const GroupSpec& o) const;
  bool operator!=(const GroupSpec& o) const { return !(*this == o); }

  std::string describe() const;

 private:
  GroupSpec(Family f, int rank, std::vector<int> orders);
  Family family_;
  int rank_;
  std::vector<int> orders_;  // FreeProductCyclic only
};

// A reduced word. For the sequence families the storage is the letter
// sequence (1-based generator indices); for FreeAbelian it is the exponent
// vector, which may be negative for group elements outside the semigroup.
class Word {
 public:
  Word() = default;

  const GroupSpec& spec() const { return spec_; }
  const std::vector<int>& letters() const { return letters_; }
  const std::vector<std::int64_t>& exponents() const { return exponents_; }

  int length() const;
  bool is_identity() const { return length() == 0; }
  // True when the word lies in the distinguished sub-semigroup (always for
  // the sequence families; nonnegative exponents for FreeAbelian).
  bool in_semigroup() const;

  bool operator==(const Word& o) const;
  bool operator!=(const Word& o) const { return !(*this == o); }

  std::string str() const;

 private:
  friend Word identity(const GroupSpec&);
  friend Word reduce(const GroupSpec&, std::span<const int>);
  friend Word word_from_exponents(const GroupSpec&, std::vector<std::int64_t>);
  GroupSpec spec_ = GroupSpec::trivial();
  std::vector<int> letters_;
  std::vector<std::int64_t> exponents_;
};

Word identity(const GroupSpec& spec);
Word generator(const GroupSpec& spec, int i);  // 1-based

// Reduction to the unique normal form; idempotent. For FreeAbelian the input
// letters are generator indices (repetitions accumulate into exponents);
// negative indices -i denote inverse generators.
Word reduce(const GroupSpec& spec, std::span<const int> letters);
Word reduce(const GroupSpec& spec, std::initializer_list<int> letters);
Word word_from_exponents(const GroupSpec& spec, std::vector<std::int64_t> exps);

// Product of reduced words (reduced again). Defined for all families; for
// FreeAbelian this is exponent addition.
Word concat(const Word& a, const Word& b);

// Group inverse. Throws for a non-identity free-semigroup word.
Word inverse(const Word& w);

// Shortlex: length first, then dictionary on generator indices. Returns
// -1, 0, +1. Throws on mismatched specs.
int shortlex_cmp(const Word& a, const Word& b);
bool shortlex_less(const Word& a, const Word& b);

// Least reduced semigroup word strictly greater than w.
Word successor(const Word& w);

// All semigroup words <= w in ascending shortlex order (first e, last w).
std::vector<Word> enumerate_upto(const Word& w);
// All semigroup words of length <= len in ascending shortlex order.
std::vector<Word> enumerate_length_upto(const GroupSpec& spec, int len);

// A left fraction u^{-1} v. For the free semigroup the normal form is the
// pair (den, num) with the longest common prefix cancelled; for the group
// families den is empty and num carries the reduced product u^{-1} v.
struct LeftFraction {
  Word den;
  Word num;

  const GroupSpec& spec() const { return num.spec(); }
  bool is_identity() const { return den.is_identity() && num.is_identity(); }
  bool operator==(const LeftFraction& o) const { return den == o.den && num == o.num; }
  bool operator!=(const LeftFraction& o) const { return !(*this == o); }
  std::string str() const;
};

LeftFraction fraction(const Word& u, const Word& v);
LeftFraction fraction_from_word(const Word& w);  // e^{-1} w
LeftFraction fraction_inverse(const LeftFraction& f);
int fraction_cmp(const LeftFraction& a, const LeftFraction& b);
bool fraction_less(const LeftFraction& a, const LeftFraction& b);

// The deduplicated set Her W_{<=w} = { u^{-1} v : u, v <= w }, sorted,
// closed under inversion.
std::vector<LeftFraction> left_fraction_set(const Word& w);
bool fraction_in_set(const LeftFraction& f, const std::vector<LeftFraction>& sorted_set);

// For a group-of-fractions family, a semigroup element d with d*s in the
// semigroup for every s in S, found by induction on |S|.
Word common_left_multiplier(std::span<const Word> S, const GroupSpec& spec);

// The W x Y product structure. y is the trivial spec when no Y direction is
// present.
struct ProductSpec {
  GroupSpec w = GroupSpec::trivial();
  GroupSpec y = GroupSpec::trivial();

  bool has_y() const { return !y.is_trivial(); }
  bool operator==(const ProductSpec& o) const { return w == o.w && y == o.y; }
  bool operator!=(const ProductSpec& o) const { return !(*this == o); }
};

// An element u * a with u a left fraction over W and a a Y-group element.
struct ProductElement {
  LeftFraction w;
  Word y;

  bool is_identity() const { return w.is_identity() && y.is_identity(); }
  bool operator==(const ProductElement& o) const { return w == o.w && y == o.y; }
  bool operator!=(const ProductElement& o) const { return !(*this == o); }
  std::string str() const;
};

ProductElement product_identity(const ProductSpec& spec);
ProductElement product_inverse(const ProductElement& p);
int product_cmp(const ProductElement& a, const ProductElement& b);

struct ProductLess {
  bool operator()(const ProductElement& a, const ProductElement& b) const {
    return product_cmp(a, b) < 0;
  }
};
struct FractionLess {
  bool operator()(const LeftFraction& a, const LeftFraction& b) const {
    return fraction_cmp(a, b) < 0;
  }
};
struct ShortlexLess {
  bool operator()(const Word& a, const Word& b) const { return shortlex_less(a, b); }
};

// A monomial (u, a) with u in the W semigroup and a in the Y semigroup.
struct Monomial {
  Word w;
  Word y;
  bool operator==(const Monomial& o) const { return w == o.w && y == o.y; }
};

// m_i^{-1} m_j for monomials.
ProductElement monomial_fraction(const Monomial& mi, const Monomial& mj);

// W_{<=wbound} x Y_{<=ydeg} in (W-major, Y-minor) shortlex order.
std::vector<Monomial> monomial_basis(const ProductSpec& spec, const Word& wbound, int ydeg);

// Membership of a Y-group element in Her Y_{<=M} = { a^{-1} b : |a|,|b| <= M }.
bool y_in_fractions_upto(const Word& gamma, int M);

}  // namespace ncfr::words
