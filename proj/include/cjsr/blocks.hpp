#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cjsr/error.hpp"
#include "cjsr/rational.hpp"

namespace cjsr {

using Symbol = int;  // 1..r
using Word = std::vector<Symbol>;

/// Digits of the word joined without separators, e.g. "2123".
inline std::string to_string(const Word& w) {
  std::string s;
  for (Symbol a : w) s += std::to_string(a);
  return s;
}

/// Comma separated form, e.g. "2,1,2,3".
inline std::string to_csv(const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(w[i]);
  }
  return s;
}

/// Alphabet size, window length and per-symbol frequency bounds of a sliding
/// block constraint. Construction validates 0 <= lower_i < upper_i <= 1 and,
/// when targets are given, lower_i < target_i < upper_i.
class FrequencyConstraint {
 public:
  FrequencyConstraint(int r, int ell, std::vector<Rational> lower, std::vector<Rational> upper,
                      std::optional<std::vector<Rational>> target = std::nullopt)
      : r_(r), ell_(ell), lower_(std::move(lower)), upper_(std::move(upper)), target_(std::move(target)) {
    if (r_ < 1) throw Error(ErrorCode::InvalidConstraint, "alphabet size must be >= 1");
    if (ell_ < 1) throw Error(ErrorCode::InvalidConstraint, "window length must be >= 1");
    if (lower_.size() != static_cast<std::size_t>(r_) || upper_.size() != static_cast<std::size_t>(r_))
      throw Error(ErrorCode::InvalidConstraint, "bound vectors must have r entries");
    if (target_ && target_->size() != static_cast<std::size_t>(r_))
      throw Error(ErrorCode::InvalidConstraint, "target vector must have r entries");
    const Rational zero(0), one(1);
    for (int i = 0; i < r_; ++i) {
      const auto& lo = lower_[i];
      const auto& hi = upper_[i];
      if (!(zero <= lo && lo < hi && hi <= one))
        throw Error(ErrorCode::InvalidConstraint,
                    "need 0 <= lower < upper <= 1 for symbol " + std::to_string(i + 1));
      if (target_ && !(lo < (*target_)[i] && (*target_)[i] < hi))
        throw Error(ErrorCode::InvalidConstraint,
                    "target must lie strictly between bounds for symbol " + std::to_string(i + 1));
    }
  }

  /// Same bounds for every symbol.
  static FrequencyConstraint uniform(int r, int ell, Rational lower, Rational upper) {
    return FrequencyConstraint(r, ell, std::vector<Rational>(r, lower), std::vector<Rational>(r, upper));
  }

  /// p- = 0, p+ = 1: every word of length ell is admissible.
  static FrequencyConstraint unconstrained(int r, int ell) { return uniform(r, ell, Rational(0), Rational(1)); }

  int r() const { return r_; }
  int ell() const { return ell_; }
  const std::vector<Rational>& lower() const { return lower_; }
  const std::vector<Rational>& upper() const { return upper_; }
  const std::optional<std::vector<Rational>>& target() const { return target_; }

 private:
  int r_;
  int ell_;
  std::vector<Rational> lower_;
  std::vector<Rational> upper_;
  std::optional<std::vector<Rational>> target_;
};

/// Occurrence-count bounds lo_i = ceil(p-_i * ell), hi_i = floor(p+_i * ell).
struct IntegerBounds {
  std::vector<int> lo;
  std::vector<int> hi;

  int sum_lo() const { return sum(lo); }
  int sum_hi() const { return sum(hi); }

  bool contains(std::span<const int> counts) const {
    for (std::size_t i = 0; i < lo.size(); ++i)
      if (counts[i] < lo[i] || counts[i] > hi[i]) return false;
    return true;
  }

 private:
  static int sum(const std::vector<int>& v) {
    int s = 0;
    for (int x : v) s += x;
    return s;
  }
};

inline IntegerBounds count_bounds(const FrequencyConstraint& c) {
  IntegerBounds b;
  b.lo.reserve(c.r());
  b.hi.reserve(c.r());
  for (int i = 0; i < c.r(); ++i) {
    b.lo.push_back(static_cast<int>(c.lower()[i].ceil_times(c.ell())));
    b.hi.push_back(static_cast<int>(c.upper()[i].floor_times(c.ell())));
  }
  return b;
}

inline void check_symbols(const Word& w, int r) {
  for (Symbol a : w)
    if (a < 1 || a > r)
      throw Error(ErrorCode::InvalidSymbol, "symbol " + std::to_string(a) + " outside 1.." + std::to_string(r));
}

/// counts[i] = occurrences of symbol i+1 in w.
inline std::vector<int> symbol_counts(std::span<const Symbol> w, int r) {
  std::vector<int> counts(r, 0);
  for (Symbol a : w) ++counts[a - 1];
  return counts;
}

inline bool is_admissible_block(const Word& w, const FrequencyConstraint& c) {
  if (w.size() != static_cast<std::size_t>(c.ell()))
    throw Error(ErrorCode::WrongLength,
                "block has length " + std::to_string(w.size()) + ", expected " + std::to_string(c.ell()));
  check_symbols(w, c.r());
  return count_bounds(c).contains(symbol_counts(w, c.r()));
}

/// True iff a word of `length` symbols with the given counts can be completed
/// to `ell` symbols whose counts lie in the bounds. Closed form over the
/// remaining per-symbol budgets.
inline bool completable(std::span<const int> counts, int length, int ell, const IntegerBounds& b) {
  if (length > ell) return false;
  const int remaining = ell - length;
  int need = 0;
  int room = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (std::max(counts[i], b.lo[i]) > b.hi[i]) return false;
    need += std::max(b.lo[i] - counts[i], 0);
    room += b.hi[i] - counts[i];
  }
  return need <= remaining && remaining <= room;
}

struct NonEmptyReport {
  IntegerBounds bounds;
  int ell = 0;
  std::vector<bool> per_symbol;  // lo_i <= hi_i
  bool per_symbol_ok = false;
  bool sum_ok = false;  // sum lo <= ell <= sum hi
  bool nonempty = false;

  /// 1-based indices of symbols with lo_i > hi_i.
  std::vector<int> failing_symbols() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < per_symbol.size(); ++i)
      if (!per_symbol[i]) out.push_back(static_cast<int>(i) + 1);
    return out;
  }
};

inline NonEmptyReport check_nonempty(const FrequencyConstraint& c) {
  NonEmptyReport rep;
  rep.bounds = count_bounds(c);
  rep.ell = c.ell();
  rep.per_symbol_ok = true;
  for (int i = 0; i < c.r(); ++i) {
    const bool ok = rep.bounds.lo[i] <= rep.bounds.hi[i];
    rep.per_symbol.push_back(ok);
    rep.per_symbol_ok = rep.per_symbol_ok && ok;
  }
  rep.sum_ok = rep.bounds.sum_lo() <= c.ell() && c.ell() <= rep.bounds.sum_hi();
  rep.nonempty = rep.per_symbol_ok && rep.sum_ok;
  return rep;
}

struct RigidityClass {
  enum class Kind { Empty, ForcedPeriodic, Branching };
  // CaseI: one of the sum inequalities is tight.
  // CaseII: both strict, at most one symbol has lo_i < hi_i.
  enum class Reason { None, CaseI, CaseII };

  Kind kind = Kind::Empty;
  Reason reason = Reason::None;

  bool empty() const { return kind == Kind::Empty; }
  bool forced_periodic() const { return kind == Kind::ForcedPeriodic; }
  bool branching() const { return kind == Kind::Branching; }

  std::string str() const {
    switch (kind) {
      case Kind::Empty: return "empty";
      case Kind::Branching: return "branching";
      case Kind::ForcedPeriodic: return reason == Reason::CaseI ? "forced-periodic (case i)" : "forced-periodic (case ii)";
    }
    return "?";
  }

  friend bool operator==(const RigidityClass&, const RigidityClass&) = default;
};

/// Three-way partition of constraints. Given non-emptiness, either a sum
/// inequality is tight (case i), or both are strict and the number m of
/// symbols with lo_i < hi_i decides: m <= 1 forced periodic (case ii),
/// m >= 2 branching. m = 0 cannot coexist with strict sums.
inline RigidityClass classify_rigidity(const FrequencyConstraint& c) {
  const auto rep = check_nonempty(c);
  using K = RigidityClass::Kind;
  using R = RigidityClass::Reason;
  if (!rep.nonempty) return {K::Empty, R::None};
  const int ell = c.ell();
  if (rep.bounds.sum_lo() == ell || rep.bounds.sum_hi() == ell) return {K::ForcedPeriodic, R::CaseI};
  int strict = 0;
  for (int i = 0; i < c.r(); ++i)
    if (rep.bounds.lo[i] < rep.bounds.hi[i]) ++strict;
  if (strict <= 1) return {K::ForcedPeriodic, R::CaseII};
  return {K::Branching, R::None};
}

/// All (k_1..k_r) with lo_i <= k_i <= hi_i and sum k_i = ell, lexicographic.
inline std::vector<std::vector<int>> admissible_count_vectors(const FrequencyConstraint& c) {
  const auto b = count_bounds(c);
  const int r = c.r();
  std::vector<std::vector<int>> out;
  std::vector<int> k(r, 0);
  // suffix sums of lo/hi for pruning
  std::vector<int> lo_tail(r + 1, 0), hi_tail(r + 1, 0);
  for (int i = r - 1; i >= 0; --i) {
    lo_tail[i] = lo_tail[i + 1] + b.lo[i];
    hi_tail[i] = hi_tail[i + 1] + b.hi[i];
  }
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == r) {
      if (left == 0) out.push_back(k);
      return;
    }
    for (int v = b.lo[i]; v <= b.hi[i]; ++v) {
      const int rest = left - v;
      if (rest < lo_tail[i + 1]) break;
      if (rest > hi_tail[i + 1]) continue;
      k[i] = v;
      self(self, i + 1, rest);
    }
  };
  rec(rec, 0, c.ell());
  return out;
}

/// Visits every admissible ell-block in lexicographic order.
template <class Fn>
void for_each_block(const FrequencyConstraint& c, Fn&& fn) {
  const auto b = count_bounds(c);
  if (!check_nonempty(c).nonempty) return;
  const int r = c.r();
  const int ell = c.ell();
  Word w;
  w.reserve(ell);
  std::vector<int> counts(r, 0);
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(w.size()) == ell) {
      fn(std::as_const(w));
      return;
    }
    for (Symbol s = 1; s <= r; ++s) {
      ++counts[s - 1];
      if (completable(counts, static_cast<int>(w.size()) + 1, ell, b)) {
        w.push_back(s);
        self(self);
        w.pop_back();
      }
      --counts[s - 1];
    }
  };
  rec(rec);
}

inline std::vector<Word> enumerate_blocks(const FrequencyConstraint& c) {
  std::vector<Word> out;
  for_each_block(c, [&](const Word& w) { out.push_back(w); });
  return out;
}

}  // namespace cjsr
