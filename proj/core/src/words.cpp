// Copyright (c) 2026 the ncfr authors. Licensed under the Apache License,
// Version 2.0; see LICENSE for details.

#include "ncfr/words.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ncfr::words {

// ---------------------------------------------------------------------------
// GroupSpec

GroupSpec::GroupSpec(Family f, int rank, std::vector<int> orders)
    : family_(f), rank_(rank), orders_(std::move(orders)) {}

GroupSpec GroupSpec::free_semigroup(int g) {
  if (g < 1) throw std::invalid_argument("free_semigroup: rank must be >= 1");
  return GroupSpec(Family::FreeSemigroup, g, {});
}

GroupSpec GroupSpec::free_product_cyclic(std::vector<int> orders) {
  if (orders.empty()) throw std::invalid_argument("free_product_cyclic: need at least one factor");
  for (int m : orders)
    if (m < 2) throw std::invalid_argument("free_product_cyclic: every order must be >= 2");
  int g = static_cast<int>(orders.size());
  return GroupSpec(Family::FreeProductCyclic, g, std::move(orders));
}

GroupSpec GroupSpec::free_abelian(int h) {
  if (h < 1) throw std::invalid_argument("free_abelian: rank must be >= 1");
  return GroupSpec(Family::FreeAbelian, h, {});
}

GroupSpec GroupSpec::trivial() { return GroupSpec(Family::FreeAbelian, 0, {}); }

int GroupSpec::order(int gen) const {
  if (family_ != Family::FreeProductCyclic)
    throw std::logic_error("order(): spec has no cyclic factors");
  if (gen < 1 || gen > rank_) throw std::out_of_range("order(): generator index");
  return orders_[static_cast<size_t>(gen - 1)];
}

bool GroupSpec::all_orders_two() const {
  if (family_ != Family::FreeProductCyclic) return false;
  return std::all_of(orders_.begin(), orders_.end(), [](int m) { return m == 2; });
}

bool GroupSpec::operator==(const GroupSpec& o) const {
  return family_ == o.family_ && rank_ == o.rank_ && orders_ == o.orders_;
}

std::string GroupSpec::describe() const {
  std::ostringstream os;
  switch (family_) {
    case Family::FreeSemigroup: os << "free_semigroup(" << rank_ << ")"; break;
    case Family::FreeAbelian:
      os << (rank_ == 0 ? "trivial" : "free_abelian(") << (rank_ == 0 ? "" : std::to_string(rank_) + ")");
      break;
    case Family::FreeProductCyclic: {
      os << "free_product_cyclic(";
      for (size_t i = 0; i < orders_.size(); ++i) os << (i ? "," : "") << orders_[i];
      os << ")";
      break;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Word

int Word::length() const {
  if (spec_.family() == Family::FreeAbelian) {
    std::int64_t n = 0;
    for (std::int64_t e : exponents_) n += std::abs(e);
    return static_cast<int>(n);
  }
  return static_cast<int>(letters_.size());
}

bool Word::in_semigroup() const {
  if (spec_.family() != Family::FreeAbelian) return true;
  return std::all_of(exponents_.begin(), exponents_.end(),
                     [](std::int64_t e) { return e >= 0; });
}

bool Word::operator==(const Word& o) const {
  return spec_ == o.spec_ && letters_ == o.letters_ && exponents_ == o.exponents_;
}

std::string Word::str() const {
  if (spec_.family() == Family::FreeAbelian) {
    if (spec_.generators() == 0) return "e";
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < exponents_.size(); ++i) os << (i ? "," : "") << exponents_[i];
    os << "]";
    return os.str();
  }
  if (letters_.empty()) return "e";
  std::ostringstream os;
  for (size_t i = 0; i < letters_.size(); ++i) os << (i ? "." : "") << "x" << letters_[i];
  return os.str();
}

Word identity(const GroupSpec& spec) {
  Word w;
  w.spec_ = spec;
  if (spec.family() == Family::FreeAbelian)
    w.exponents_.assign(static_cast<size_t>(spec.generators()), 0);
  return w;
}

Word generator(const GroupSpec& spec, int i) {
  if (i < 1 || i > spec.generators()) throw std::out_of_range("generator: index out of range");
  if (spec.family() == Family::FreeAbelian) {
    std::vector<std::int64_t> e(static_cast<size_t>(spec.generators()), 0);
    e[static_cast<size_t>(i - 1)] = 1;
    return word_from_exponents(spec, std::move(e));
  }
  return reduce(spec, {i});
}

Word reduce(const GroupSpec& spec, std::span<const int> letters) {
  Word w = identity(spec);
  if (spec.family() == Family::FreeAbelian) {
    for (int c : letters) {
      int a = std::abs(c);
      if (a < 1 || a > spec.generators()) throw std::out_of_range("reduce: index out of range");
      w.exponents_[static_cast<size_t>(a - 1)] += c > 0 ? 1 : -1;
    }
    return w;
  }
  for (int c : letters)
    if (c < 1 || c > spec.generators()) throw std::out_of_range("reduce: index out of range");
  if (spec.family() == Family::FreeSemigroup) {
    w.letters_.assign(letters.begin(), letters.end());
    return w;
  }
  // FreeProductCyclic: collapse maximal runs that reach the factor order.
  std::vector<std::pair<int, int>> runs;  // (letter, count), count in 1..order-1
  for (int c : letters) {
    if (!runs.empty() && runs.back().first == c) {
      if (++runs.back().second == spec.order(c)) runs.pop_back();
    } else {
      runs.emplace_back(c, 1);
    }
  }
  for (auto [c, k] : runs) w.letters_.insert(w.letters_.end(), static_cast<size_t>(k), c);
  return w;
}

Word reduce(const GroupSpec& spec, std::initializer_list<int> letters) {
  return reduce(spec, std::span<const int>(letters.begin(), letters.size()));
}

Word word_from_exponents(const GroupSpec& spec, std::vector<std::int64_t> exps) {
  if (spec.family() != Family::FreeAbelian)
    throw std::invalid_argument("word_from_exponents: spec is not free abelian");
  if (exps.size() != static_cast<size_t>(spec.generators()))
    throw std::invalid_argument("word_from_exponents: exponent count mismatch");
  Word w;
  w.spec_ = spec;
  w.exponents_ = std::move(exps);
  return w;
}

Word concat(const Word& a, const Word& b) {
  if (a.spec() != b.spec()) throw std::invalid_argument("concat: mismatched specs");
  const GroupSpec& spec = a.spec();
  if (spec.family() == Family::FreeAbelian) {
    std::vector<std::int64_t> e = a.exponents();
    for (size_t i = 0; i < e.size(); ++i) e[i] += b.exponents()[i];
    return word_from_exponents(spec, std::move(e));
  }
  std::vector<int> seq = a.letters();
  seq.insert(seq.end(), b.letters().begin(), b.letters().end());
  return reduce(spec, seq);
}

Word inverse(const Word& w) {
  const GroupSpec& spec = w.spec();
  switch (spec.family()) {
    case Family::FreeAbelian: {
      std::vector<std::int64_t> e = w.exponents();
      for (auto& x : e) x = -x;
      return word_from_exponents(spec, std::move(e));
    }
    case Family::FreeProductCyclic: {
      // Reverse the run sequence, complementing each run length mod order.
      std::vector<std::pair<int, int>> runs;
      for (int c : w.letters()) {
        if (!runs.empty() && runs.back().first == c)
          ++runs.back().second;
        else
          runs.emplace_back(c, 1);
      }
      std::vector<int> seq;
      for (auto it = runs.rbegin(); it != runs.rend(); ++it)
        seq.insert(seq.end(), static_cast<size_t>(spec.order(it->first) - it->second), it->first);
      return reduce(spec, seq);
    }
    case Family::FreeSemigroup:
      if (!w.is_identity())
        throw std::domain_error("inverse: free-semigroup words are not invertible");
      return w;
  }
  throw std::logic_error("inverse: unreachable");
}

int shortlex_cmp(const Word& a, const Word& b) {
  if (a.spec() != b.spec()) throw std::invalid_argument("shortlex_cmp: mismatched specs");
  int la = a.length(), lb = b.length();
  if (la != lb) return la < lb ? -1 : 1;
  if (a.spec().family() == Family::FreeAbelian) {
    // Within a length class the dictionary order on sorted letter sequences
    // lists larger leading exponents first.
    for (size_t i = 0; i < a.exponents().size(); ++i) {
      std::int64_t ea = a.exponents()[i], eb = b.exponents()[i];
      if (ea != eb) return ea > eb ? -1 : 1;
    }
    return 0;
  }
  for (size_t i = 0; i < a.letters().size(); ++i) {
    if (a.letters()[i] != b.letters()[i]) return a.letters()[i] < b.letters()[i] ? -1 : 1;
  }
  return 0;
}

bool shortlex_less(const Word& a, const Word& b) { return shortlex_cmp(a, b) < 0; }

namespace {

// Length of the run of letter c at the end of seq.
int trailing_run(const std::vector<int>& seq, int c) {
  int k = 0;
  for (auto it = seq.rbegin(); it != seq.rend() && *it == c; ++it) ++k;
  return k;
}

bool letter_fits(const GroupSpec& spec, const std::vector<int>& prefix, int c) {
  if (spec.family() != Family::FreeProductCyclic) return true;
  return trailing_run(prefix, c) + 1 <= spec.order(c) - 1;
}

// Appends the shortlex-least valid completion of the given length.
void minimal_completion(const GroupSpec& spec, std::vector<int>& seq, int count) {
  for (int t = 0; t < count; ++t) {
    for (int c = 1; c <= spec.generators(); ++c) {
      if (letter_fits(spec, seq, c)) {
        seq.push_back(c);
        break;
      }
    }
  }
}

Word successor_sequence_family(const Word& w) {
  const GroupSpec& spec = w.spec();
  int g = spec.generators();
  std::vector<int> seq = w.letters();
  int n = static_cast<int>(seq.size());
  for (int pos = n - 1; pos >= 0; --pos) {
    int cur = seq[pos];
    seq.resize(static_cast<size_t>(pos));
    for (int c = cur + 1; c <= g; ++c) {
      if (letter_fits(spec, seq, c)) {
        seq.push_back(c);
        minimal_completion(spec, seq, n - pos - 1);
        return reduce(spec, seq);
      }
    }
  }
  // All words of length n exhausted; least word of length n+1.
  seq.clear();
  minimal_completion(spec, seq, n + 1);
  if (static_cast<int>(seq.size()) < n + 1)
    throw std::domain_error("successor: family has no longer words");
  return reduce(spec, seq);
}

Word successor_free_abelian(const Word& w) {
  const GroupSpec& spec = w.spec();
  if (!w.in_semigroup())
    throw std::domain_error("successor: defined on semigroup words only");
  int h = spec.generators();
  if (h == 0) throw std::domain_error("successor: trivial group has a single element");
  std::vector<std::int64_t> e = w.exponents();
  int i = -1;  // rightmost index < h-1 carrying mass
  for (int j = h - 2; j >= 0; --j) {
    if (e[static_cast<size_t>(j)] > 0) {
      i = j;
      break;
    }
  }
  if (i < 0) {
    // all mass at the last coordinate: least word of the next length
    std::int64_t n = e[static_cast<size_t>(h - 1)];
    std::fill(e.begin(), e.end(), 0);
    e[0] = n + 1;
    return word_from_exponents(spec, std::move(e));
  }
  std::int64_t tail = 0;
  for (int j = i + 1; j < h; ++j) {
    tail += e[static_cast<size_t>(j)];
    e[static_cast<size_t>(j)] = 0;
  }
  e[static_cast<size_t>(i)] -= 1;
  e[static_cast<size_t>(i + 1)] = tail + 1;
  return word_from_exponents(spec, std::move(e));
}

}  // namespace

Word successor(const Word& w) {
  if (w.spec().family() == Family::FreeAbelian) return successor_free_abelian(w);
  if (w.spec().family() == Family::FreeProductCyclic && w.spec().generators() == 1) {
    // Z_m: finite, still useful as a block group; the top word has no successor.
    if (w.length() >= w.spec().order(1) - 1)
      throw std::domain_error("successor: finite cyclic group exhausted");
  }
  return successor_sequence_family(w);
}

std::vector<Word> enumerate_upto(const Word& w) {
  if (!w.in_semigroup())
    throw std::domain_error("enumerate_upto: bound must be a semigroup word");
  std::vector<Word> out;
  Word cur = identity(w.spec());
  out.push_back(cur);
  while (cur != w) {
    cur = successor(cur);
    out.push_back(cur);
  }
  return out;
}

std::vector<Word> enumerate_length_upto(const GroupSpec& spec, int len) {
  std::vector<Word> out;
  Word cur = identity(spec);
  out.push_back(cur);
  if (spec.generators() == 0) return out;
  for (;;) {
    if (spec.family() == Family::FreeProductCyclic && spec.generators() == 1 &&
        cur.length() >= spec.order(1) - 1)
      break;
    cur = successor(cur);
    if (cur.length() > len) break;
    out.push_back(cur);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Left fractions

std::string LeftFraction::str() const {
  if (den.is_identity()) return num.str();
  return "(" + den.str() + ")^-1." + num.str();
}

LeftFraction fraction(const Word& u, const Word& v) {
  if (u.spec() != v.spec()) throw std::invalid_argument("fraction: mismatched specs");
  const GroupSpec& spec = u.spec();
  if (spec.is_group()) return LeftFraction{identity(spec), concat(inverse(u), v)};
  // Free semigroup: cancel the longest common prefix.
  const auto& a = u.letters();
  const auto& b = v.letters();
  size_t k = 0;
  while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
  Word den = reduce(spec, std::span<const int>(a.data() + k, a.size() - k));
  Word num = reduce(spec, std::span<const int>(b.data() + k, b.size() - k));
  return LeftFraction{den, num};
}

LeftFraction fraction_from_word(const Word& w) { return LeftFraction{identity(w.spec()), w}; }

LeftFraction fraction_inverse(const LeftFraction& f) {
  if (f.spec().is_group()) return LeftFraction{f.den, inverse(f.num)};
  return LeftFraction{f.num, f.den};
}

int fraction_cmp(const LeftFraction& a, const LeftFraction& b) {
  if (int c = shortlex_cmp(a.den, b.den); c != 0) return c;
  return shortlex_cmp(a.num, b.num);
}

bool fraction_less(const LeftFraction& a, const LeftFraction& b) { return fraction_cmp(a, b) < 0; }

std::vector<LeftFraction> left_fraction_set(const Word& w) {
  std::vector<Word> words = enumerate_upto(w);
  std::set<LeftFraction, FractionLess> set;
  for (const Word& u : words)
    for (const Word& v : words) set.insert(fraction(u, v));
  return {set.begin(), set.end()};
}

bool fraction_in_set(const LeftFraction& f, const std::vector<LeftFraction>& sorted_set) {
  return std::binary_search(sorted_set.begin(), sorted_set.end(), f, fraction_less);
}

Word common_left_multiplier(std::span<const Word> S, const GroupSpec& spec) {
  if (!spec.group_of_fractions())
    throw std::invalid_argument("common_left_multiplier: spec is not a group of fractions");
  Word d = identity(spec);
  if (spec.family() == Family::FreeProductCyclic) return d;  // the semigroup is the whole group
  for (const Word& s : S) {
    if (s.spec() != spec) throw std::invalid_argument("common_left_multiplier: mismatched specs");
    // d*s = a^{-1} b with minimal a in the nonnegative orthant; replace d by a*d.
    Word t = concat(d, s);
    std::vector<std::int64_t> a(t.exponents().size(), 0);
    for (size_t i = 0; i < a.size(); ++i) a[i] = std::max<std::int64_t>(0, -t.exponents()[i]);
    d = concat(word_from_exponents(spec, std::move(a)), d);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Product structure

std::string ProductElement::str() const {
  if (y.is_identity()) return w.str();
  if (w.is_identity()) return "y:" + y.str();
  return w.str() + "*y:" + y.str();
}

ProductElement product_identity(const ProductSpec& spec) {
  return ProductElement{fraction_from_word(identity(spec.w)), identity(spec.y)};
}

ProductElement product_inverse(const ProductElement& p) {
  return ProductElement{fraction_inverse(p.w), inverse(p.y)};
}

int product_cmp(const ProductElement& a, const ProductElement& b) {
  if (int c = fraction_cmp(a.w, b.w); c != 0) return c;
  return shortlex_cmp(a.y, b.y);
}

ProductElement monomial_fraction(const Monomial& mi, const Monomial& mj) {
  return ProductElement{fraction(mi.w, mj.w), concat(inverse(mi.y), mj.y)};
}

std::vector<Monomial> monomial_basis(const ProductSpec& spec, const Word& wbound, int ydeg) {
  if (wbound.spec() != spec.w) throw std::invalid_argument("monomial_basis: bound spec mismatch");
  std::vector<Word> ws = enumerate_upto(wbound);
  std::vector<Word> ys = enumerate_length_upto(spec.y, ydeg);
  std::vector<Monomial> out;
  out.reserve(ws.size() * ys.size());
  for (const Word& u : ws)
    for (const Word& a : ys) out.push_back(Monomial{u, a});
  return out;
}

bool y_in_fractions_upto(const Word& gamma, int M) {
  const GroupSpec& spec = gamma.spec();
  if (spec.is_trivial()) return gamma.is_identity();
  switch (spec.family()) {
    case Family::FreeAbelian: {
      std::int64_t pos = 0, neg = 0;
      for (std::int64_t e : gamma.exponents()) (e >= 0 ? pos : neg) += std::abs(e);
      return pos <= M && neg <= M;
    }
    case Family::FreeProductCyclic: {
      // gamma = a^{-1} b over all splits, including splits inside a run.
      const auto& seq = gamma.letters();
      for (size_t k = 0; k <= seq.size(); ++k) {
        Word pre = reduce(spec, std::span<const int>(seq.data(), k));
        Word suf = reduce(spec, std::span<const int>(seq.data() + k, seq.size() - k));
        if (inverse(pre).length() <= M && suf.length() <= M) return true;
      }
      return false;
    }
    case Family::FreeSemigroup:
      throw std::invalid_argument("y_in_fractions_upto: Y must be a group");
  }
  return false;
}

}  // namespace ncfr::words
