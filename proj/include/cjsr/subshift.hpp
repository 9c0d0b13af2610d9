#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cjsr/blocks.hpp"
#include "cjsr/error.hpp"

namespace cjsr {

using BigInt = boost::multiprecision::cpp_int;

/// The ell-step Markov chain of a frequency constraint, re-encoded as a
/// 1-step graph over admissible blocks. Edge u -> v exists iff v is u shifted
/// left by one symbol with one symbol appended and both blocks are admissible.
class TransitionGraph {
 public:
  TransitionGraph() = default;

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const {
    std::size_t e = 0;
    for (const auto& s : succ_) e += s.size();
    return e;
  }
  bool empty() const { return nodes_.empty(); }

  const std::vector<Word>& nodes() const { return nodes_; }
  const Word& node(std::size_t i) const { return nodes_[i]; }

  /// Successor indices, ascending (equivalently, ascending appended symbol).
  const std::vector<std::size_t>& successors(std::size_t i) const { return succ_[i]; }

  std::optional<std::size_t> index_of(const Word& block) const {
    if (auto it = index_.find(block); it != index_.end()) return it->second;
    return std::nullopt;
  }

  bool has_edge(std::size_t u, std::size_t v) const {
    for (auto s : succ_[u])
      if (s == v) return true;
    return false;
  }

  /// Nodes with out-degree 0. They stay in the graph: finite words may end there.
  std::vector<std::size_t> dead_ends() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < succ_.size(); ++i)
      if (succ_[i].empty()) out.push_back(i);
    return out;
  }

  int alphabet_size() const { return r_; }
  int block_length() const { return ell_; }

  friend TransitionGraph build_graph(const FrequencyConstraint& c);

 private:
  int r_ = 0;
  int ell_ = 0;
  std::vector<Word> nodes_;
  std::vector<std::vector<std::size_t>> succ_;
  std::map<Word, std::size_t> index_;
};

inline TransitionGraph build_graph(const FrequencyConstraint& c) {
  TransitionGraph g;
  g.r_ = c.r();
  g.ell_ = c.ell();
  g.nodes_ = enumerate_blocks(c);
  for (std::size_t i = 0; i < g.nodes_.size(); ++i) g.index_.emplace(g.nodes_[i], i);
  g.succ_.resize(g.nodes_.size());
  Word next(c.ell());
  for (std::size_t i = 0; i < g.nodes_.size(); ++i) {
    const Word& u = g.nodes_[i];
    std::copy(u.begin() + 1, u.end(), next.begin());
    for (Symbol s = 1; s <= c.r(); ++s) {
      next.back() = s;
      if (auto j = g.index_of(next)) g.succ_[i].push_back(*j);
    }
  }
  return g;
}

namespace detail {

inline bool windows_admissible(std::span<const Symbol> w, int r, int ell, const IntegerBounds& b) {
  std::vector<int> counts = symbol_counts(w.first(ell), r);
  if (!b.contains(counts)) return false;
  for (std::size_t k = ell; k < w.size(); ++k) {
    --counts[w[k - ell] - 1];
    ++counts[w[k] - 1];
    if (!b.contains(counts)) return false;
  }
  return true;
}

inline bool admissible_word(std::span<const Symbol> w, int r, int ell, const IntegerBounds& b) {
  if (w.size() >= static_cast<std::size_t>(ell)) return windows_admissible(w, r, ell, b);
  return completable(symbol_counts(w, r), static_cast<int>(w.size()), ell, b);
}

inline bool periodically_extendable(std::span<const Symbol> w, int r, int ell, const IntegerBounds& b) {
  const std::size_t n = w.size();
  Word cyc(n + ell - 1);
  for (std::size_t k = 0; k < cyc.size(); ++k) cyc[k] = w[k % n];
  return windows_admissible(cyc, r, ell, b);
}

}  // namespace detail

/// Words of length < ell are admissible iff they extend to an admissible
/// block; longer words iff every ell-window is an admissible block.
inline bool is_admissible_word(const Word& w, const FrequencyConstraint& c) {
  if (w.empty()) throw Error(ErrorCode::WrongLength, "word must be non-empty");
  check_symbols(w, c.r());
  return detail::admissible_word(w, c.r(), c.ell(), count_bounds(c));
}

/// True iff the n-periodic right extension of w (n = |w|) has only admissible windows.
inline bool is_periodically_extendable(const Word& w, const FrequencyConstraint& c) {
  if (w.empty()) throw Error(ErrorCode::WrongLength, "word must be non-empty");
  check_symbols(w, c.r());
  return detail::periodically_extendable(w, c.r(), c.ell(), count_bounds(c));
}

/// Visits the admissible words of length n in lexicographic order. For
/// n >= ell these are the walks of n - ell edges in the transition graph.
template <class Fn>
void for_each_word(const FrequencyConstraint& c, int n, Fn&& fn) {
  if (n < 1) throw Error(ErrorCode::WrongLength, "n must be >= 1");
  const int ell = c.ell();
  if (n >= ell) {
    const auto g = build_graph(c);
    Word w;
    w.reserve(n);
    auto walk = [&](auto&& self, std::size_t node, int steps) -> void {
      if (steps == 0) {
        fn(std::as_const(w));
        return;
      }
      for (auto next : g.successors(node)) {
        w.push_back(g.node(next).back());
        self(self, next, steps - 1);
        w.pop_back();
      }
    };
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      w.assign(g.node(i).begin(), g.node(i).end());
      walk(walk, i, n - ell);
    }
    return;
  }
  const auto b = count_bounds(c);
  const int r = c.r();
  Word w;
  std::vector<int> counts(r, 0);
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(w.size()) == n) {
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

inline std::vector<Word> enumerate_words(const FrequencyConstraint& c, int n) {
  std::vector<Word> out;
  for_each_word(c, n, [&](const Word& w) { out.push_back(w); });
  return out;
}

inline std::vector<Word> enumerate_periodic_words(const FrequencyConstraint& c, int n) {
  const auto b = count_bounds(c);
  std::vector<Word> out;
  for_each_word(c, n, [&](const Word& w) {
    if (detail::periodically_extendable(w, c.r(), c.ell(), b)) out.push_back(w);
  });
  return out;
}

/// Number of admissible words of length n >= ell, by exact path counting.
inline BigInt count_words(const FrequencyConstraint& c, int n) {
  if (n < c.ell())
    throw Error(ErrorCode::UnsupportedLength,
                "count_words needs n >= ell (" + std::to_string(n) + " < " + std::to_string(c.ell()) + ")");
  const auto g = build_graph(c);
  std::vector<BigInt> paths(g.node_count(), BigInt(1));
  for (int step = 0; step < n - c.ell(); ++step) {
    std::vector<BigInt> next(g.node_count(), BigInt(0));
    for (std::size_t u = 0; u < g.node_count(); ++u)
      for (auto v : g.successors(u)) next[v] += paths[u];
    paths = std::move(next);
  }
  BigInt total = 0;
  for (const auto& p : paths) total += p;
  return total;
}

/// Random admissible word of length n. Each step picks uniformly among the
/// admissible next symbols; a step with no candidate backtracks.
inline Word sample_sequence(const FrequencyConstraint& c, int n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::WrongLength, "n must be >= 1");
  if (!check_nonempty(c).nonempty) throw Error(ErrorCode::EmptyConstraint, "constraint admits no block");
  const auto b = count_bounds(c);
  const int r = c.r();
  std::mt19937_64 rng(seed);

  Word w;
  w.reserve(n);
  // Remaining untried candidates at each depth.
  std::vector<std::vector<Symbol>> pending;
  auto candidates = [&]() {
    std::vector<Symbol> out;
    w.push_back(0);
    for (Symbol s = 1; s <= r; ++s) {
      w.back() = s;
      const std::size_t len = w.size();
      const std::size_t from = len > static_cast<std::size_t>(c.ell()) ? len - c.ell() : 0;
      if (detail::admissible_word(std::span<const Symbol>(w).subspan(from), r, c.ell(), b)) out.push_back(s);
    }
    w.pop_back();
    return out;
  };

  pending.push_back(candidates());
  while (static_cast<int>(w.size()) < n) {
    auto& options = pending.back();
    if (options.empty()) {
      pending.pop_back();
      if (w.empty()) throw Error(ErrorCode::DeadEnd, "no admissible word of length " + std::to_string(n));
      w.pop_back();
      continue;
    }
    const std::size_t pick = static_cast<std::size_t>(rng() % options.size());
    w.push_back(options[pick]);
    options.erase(options.begin() + static_cast<std::ptrdiff_t>(pick));
    if (static_cast<int>(w.size()) < n) pending.push_back(candidates());
  }
  return w;
}

/// DOT digraph; node i is "n<i>" labelled with its block digits.
inline std::string export_dot(const TransitionGraph& g) {
  std::ostringstream os;
  os << "digraph subshift {\n";
  for (std::size_t i = 0; i < g.node_count(); ++i)
    os << "  n" << i << " [label=\"" << to_string(g.node(i)) << "\"];\n";
  for (std::size_t i = 0; i < g.node_count(); ++i)
    for (auto j : g.successors(i)) os << "  n" << i << " -> n" << j << ";\n";
  os << "}\n";
  return os.str();
}

/// Where the words of a radius computation come from.
struct AllWords {
  int r = 1;
};

/// Transition matrix omega[a-1][b-1] = 1 iff symbol b may follow symbol a.
/// A word is admissible when every transition is allowed and its last
/// symbol has at least one allowed successor; it is periodically extendable
/// when additionally the last symbol may be followed by the first.
struct MarkovWords {
  std::vector<std::vector<int>> omega;
};

struct ConstrainedWords {
  FrequencyConstraint constraint;
};

class WordSource {
 public:
  using Variant = std::variant<AllWords, MarkovWords, ConstrainedWords>;

  static WordSource all(int r) {
    if (r < 1) throw Error(ErrorCode::InvalidConstraint, "alphabet size must be >= 1");
    return WordSource(AllWords{r});
  }

  static WordSource markov(std::vector<std::vector<int>> omega) {
    const std::size_t r = omega.size();
    if (r == 0) throw Error(ErrorCode::InvalidConstraint, "omega must be non-empty");
    for (const auto& row : omega) {
      if (row.size() != r) throw Error(ErrorCode::InvalidConstraint, "omega must be square");
      for (int x : row)
        if (x != 0 && x != 1) throw Error(ErrorCode::InvalidConstraint, "omega entries must be 0 or 1");
    }
    return WordSource(MarkovWords{std::move(omega)});
  }

  static WordSource constrained(FrequencyConstraint c) { return WordSource(ConstrainedWords{std::move(c)}); }

  int alphabet_size() const {
    return std::visit(
        [](const auto& s) -> int {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, AllWords>) return s.r;
          else if constexpr (std::is_same_v<T, MarkovWords>) return static_cast<int>(s.omega.size());
          else return s.constraint.r();
        },
        v_);
  }

  const Variant& variant() const { return v_; }

 private:
  explicit WordSource(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Incremental admissibility test used by the word-tree walks.
class Language {
 public:
  explicit Language(const WordSource& src) : src_(src), r_(src.alphabet_size()) {
    if (const auto* cw = std::get_if<ConstrainedWords>(&src_.variant())) {
      bounds_ = count_bounds(cw->constraint);
      ell_ = cw->constraint.ell();
    }
  }

  int alphabet_size() const { return r_; }

  /// Whether prefix + s is admissible, given that prefix is.
  bool can_append(const Word& prefix, Symbol s) const {
    return std::visit(
        [&](const auto& v) -> bool {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, AllWords>) {
            return true;
          } else if constexpr (std::is_same_v<T, MarkovWords>) {
            if (!prefix.empty() && v.omega[prefix.back() - 1][s - 1] == 0) return false;
            for (int x : v.omega[s - 1])
              if (x) return true;
            return false;
          } else {
            return append_constrained(prefix, s);
          }
        },
        src_.variant());
  }

  bool periodic(const Word& w) const {
    return std::visit(
        [&](const auto& v) -> bool {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, AllWords>) return true;
          else if constexpr (std::is_same_v<T, MarkovWords>) return v.omega[w.back() - 1][w.front() - 1] == 1;
          else return detail::periodically_extendable(w, r_, ell_, bounds_);
        },
        src_.variant());
  }

 private:
  bool append_constrained(const Word& prefix, Symbol s) const {
    const std::size_t len = prefix.size() + 1;
    if (len <= static_cast<std::size_t>(ell_)) {
      std::vector<int> counts = symbol_counts(prefix, r_);
      ++counts[s - 1];
      return completable(counts, static_cast<int>(len), ell_, bounds_);
    }
    std::vector<int> counts(r_, 0);
    for (std::size_t k = len - ell_; k < prefix.size(); ++k) ++counts[prefix[k] - 1];
    ++counts[s - 1];
    return bounds_.contains(counts);
  }

  WordSource src_;
  int r_;
  int ell_ = 0;
  IntegerBounds bounds_;
};

}  // namespace cjsr
