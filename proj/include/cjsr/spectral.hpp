#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "cjsr/blocks.hpp"
#include "cjsr/error.hpp"
#include "cjsr/linalg.hpp"
#include "cjsr/subshift.hpp"

namespace cjsr {

/// r real d x d matrices; matrix i (0-based) is applied for symbol i + 1.
class MatrixSet {
 public:
  MatrixSet() = default;

  explicit MatrixSet(std::vector<Matrix> ms) : ms_(std::move(ms)) {
    if (ms_.empty()) throw Error(ErrorCode::InvalidMatrix, "matrix set must be non-empty");
    const auto d = ms_.front().rows();
    for (const auto& m : ms_) {
      detail::check_square_finite(m);
      if (m.rows() != d) throw Error(ErrorCode::InvalidMatrix, "matrices must share one dimension");
    }
  }

  int size() const { return static_cast<int>(ms_.size()); }
  int dim() const { return ms_.empty() ? 0 : static_cast<int>(ms_.front().rows()); }
  const Matrix& operator[](Symbol s) const { return ms_[s - 1]; }
  const std::vector<Matrix>& matrices() const { return ms_; }

  MatrixSet scaled(double c) const {
    std::vector<Matrix> out;
    out.reserve(ms_.size());
    for (const auto& m : ms_) out.push_back(c * m);
    return MatrixSet(std::move(out));
  }

 private:
  std::vector<Matrix> ms_;
};

/// Per-length radius estimates for one norm.
struct RadiusRecord {
  int n = 0;
  double lower_per = 0;  // sup rho(P)^(1/n) over periodically extendable words
  double lower = 0;      // sup rho(P)^(1/n) over admissible words
  double upper = 0;      // sup ||P||^(1/n) over admissible words
  double best_lower = 0;  // running max of lower_per
  double best_upper = 0;  // running min of upper
  double gap = 0;
  bool has_words = false;
  bool has_periodic_words = false;
  Word lower_per_witness;
  Word lower_witness;
  Word upper_witness;
};

struct RadiusBracket {
  NormKind norm = NormKind::RowSum;
  std::vector<RadiusRecord> records;
  double best_lower = 0;
  double best_upper = 0;
  double gap = 0;
  Word best_lower_witness;
};

struct ScanOptions {
  NormKind norm = NormKind::RowSum;
  bool prune = true;
};

namespace detail {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double safe_log(double x) { return x > 0 ? std::log(x) : kNegInf; }

// Relative tolerance (in log space) under which two suprema count as tied;
// ties keep the lexicographically least witness.
constexpr double kTieTolerance = 1e-12;

inline bool improves(double candidate, double best) {
  if (best == kNegInf) return candidate > kNegInf;
  return candidate > best + kTieTolerance * (1.0 + std::abs(best));
}

/// Growth-rate value exp(log_value / n), 0 for a zero product.
inline double root(double log_value, int n) { return log_value == kNegInf ? 0.0 : std::exp(log_value / n); }

// log of sup ||P|| / rho(P) / rho(P) over periodic words, per length.
struct ScanResult {
  std::vector<double> log_norm, log_rho, log_rho_per;
  std::vector<Word> norm_witness, rho_witness, per_witness;
  std::vector<bool> has_words, has_periodic;
};

/// Depth-first walk of the admissible-word tree in lexicographic order.
/// Products P = M_{a_k} ... M_{a_1} are kept as e^scale * Q with
/// rowsum(Q) = 1 so that no intermediate overflows or underflows.
///
/// With pruning, a subtree rooted at a length-j word is skipped when
/// ||P_j|| * mu^(n-j), mu = max_i ||M_i||, stays strictly (with margin)
/// below every current supremum at each deeper length n. Skipped words can
/// then never reach a supremum, so results match the unpruned walk exactly.
class WordTreeScan {
 public:
  WordTreeScan(const MatrixSet& ms, const WordSource& src, int n_max, ScanOptions opt)
      : ms_(ms), lang_(src), n_max_(n_max), opt_(opt) {
    const int d = ms.dim();
    q_.assign(n_max + 1, Matrix::Zero(d, d));
    q_[0] = Matrix::Identity(d, d);
    scale_.assign(n_max + 1, 0.0);
    zero_.assign(n_max + 1, false);
    res_.log_norm.assign(n_max + 1, kNegInf);
    res_.log_rho.assign(n_max + 1, kNegInf);
    res_.log_rho_per.assign(n_max + 1, kNegInf);
    res_.norm_witness.resize(n_max + 1);
    res_.rho_witness.resize(n_max + 1);
    res_.per_witness.resize(n_max + 1);
    res_.has_words.assign(n_max + 1, false);
    res_.has_periodic.assign(n_max + 1, false);
    double mu = 0;
    for (Symbol s = 1; s <= ms.size(); ++s) mu = std::max(mu, operator_norm(ms[s], opt.norm));
    log_mu_ = safe_log(mu);
  }

  ScanResult run() {
    word_.clear();
    descend();
    return std::move(res_);
  }

 private:
  void descend() {
    const int depth = static_cast<int>(word_.size());
    if (depth == n_max_) return;
    for (Symbol s = 1; s <= lang_.alphabet_size(); ++s) {
      if (!lang_.can_append(word_, s)) continue;
      word_.push_back(s);
      const int k = depth + 1;
      const double log_norm = step(k, s);
      visit(k, log_norm);
      if (!(opt_.prune && prunable(k, log_norm))) descend();
      word_.pop_back();
    }
  }

  // Forms Q_k from Q_{k-1}; returns log ||P_k|| in the target norm.
  double step(int k, Symbol s) {
    zero_[k] = zero_[k - 1];
    if (zero_[k]) {
      q_[k].setZero();
      return kNegInf;
    }
    q_[k].noalias() = ms_[s] * q_[k - 1];
    const double rs = q_[k].cwiseAbs().rowwise().sum().maxCoeff();
    if (!(rs > 0)) {
      zero_[k] = true;
      q_[k].setZero();
      return kNegInf;
    }
    q_[k] /= rs;
    scale_[k] = scale_[k - 1] + std::log(rs);
    if (opt_.norm == NormKind::RowSum) return scale_[k];
    return scale_[k] + safe_log(operator_norm(q_[k], opt_.norm));
  }

  void visit(int k, double log_norm) {
    res_.has_words[k] = true;
    record(log_norm, res_.log_norm[k], res_.norm_witness[k]);
    const double log_rho = zero_[k] ? kNegInf : scale_[k] + safe_log(spectral_radius(q_[k]));
    record(log_rho, res_.log_rho[k], res_.rho_witness[k]);
    if (lang_.periodic(word_)) {
      res_.has_periodic[k] = true;
      record(log_rho, res_.log_rho_per[k], res_.per_witness[k]);
    }
  }

  // Words arrive in lexicographic order, so the first word within tolerance
  // of the supremum stays the witness.
  void record(double value, double& best, Word& witness) const {
    if (witness.empty() || improves(value, best)) witness = word_;
    best = std::max(best, value);
  }

  bool prunable(int k, double log_norm) const {
    if (k == n_max_) return false;
    if (log_norm == kNegInf) return has_all_deeper_positive(k);
    if (log_mu_ == kNegInf) return has_all_deeper_positive(k);
    for (int n = k + 1; n <= n_max_; ++n) {
      const double best = std::min({res_.log_norm[n], res_.log_rho[n], res_.log_rho_per[n]});
      if (best == kNegInf) return false;
      const double bound = log_norm + (n - k) * log_mu_;
      if (!(bound + 1e-9 * (1.0 + std::abs(best)) < best)) return false;
    }
    return true;
  }

  // A zero product stays zero; its subtree can only tie at zero.
  bool has_all_deeper_positive(int k) const {
    for (int n = k + 1; n <= n_max_; ++n)
      if (std::min({res_.log_norm[n], res_.log_rho[n], res_.log_rho_per[n]}) == kNegInf) return false;
    return true;
  }

  const MatrixSet& ms_;
  Language lang_;
  int n_max_;
  ScanOptions opt_;
  double log_mu_ = kNegInf;
  Word word_;
  std::vector<Matrix> q_;
  std::vector<double> scale_;
  std::vector<bool> zero_;
  ScanResult res_;
};

inline void check_alphabet(const MatrixSet& ms, const WordSource& src) {
  if (ms.size() != src.alphabet_size())
    throw Error(ErrorCode::AlphabetMismatch, std::to_string(ms.size()) + " matrices for an alphabet of " +
                                                 std::to_string(src.alphabet_size()) + " symbols");
}

inline ScanResult scan(const MatrixSet& ms, const WordSource& src, int n_max, ScanOptions opt) {
  check_alphabet(ms, src);
  if (n_max < 1) throw Error(ErrorCode::WrongLength, "n must be >= 1");
  return WordTreeScan(ms, src, n_max, opt).run();
}

}  // namespace detail

/// sup ||M_{a_n} ... M_{a_1}||^(1/n) over length-n words of the source; 0 if none.
inline double rho_n(const MatrixSet& ms, const WordSource& src, int n, NormKind k = NormKind::RowSum) {
  const auto r = detail::scan(ms, src, n, {k, true});
  return detail::root(r.log_norm[n], n);
}

/// sup rho(M_{a_n} ... M_{a_1})^(1/n) over length-n words of the source; 0 if none.
inline double rho_hat_n(const MatrixSet& ms, const WordSource& src, int n) {
  const auto r = detail::scan(ms, src, n, {NormKind::RowSum, true});
  return detail::root(r.log_rho[n], n);
}

/// As rho_hat_n, restricted to periodically extendable words.
inline double rho_hat_per_n(const MatrixSet& ms, const WordSource& src, int n) {
  const auto r = detail::scan(ms, src, n, {NormKind::RowSum, true});
  return detail::root(r.log_rho_per[n], n);
}

namespace detail {

// Across lengths: replace the witness on a clear improvement, or on a tie
// with a lexicographically smaller word.
inline bool update_witness(double value, double best, const Word& candidate, const Word& current) {
  if (current.empty()) return true;
  const double tol = kTieTolerance * std::max(1.0, std::abs(best));
  if (value > best + tol) return true;
  return value >= best - tol && candidate < current;
}

}  // namespace detail

/// Radius estimates for n = 1..n_max with the running best bracket.
///
/// The lower end of the bracket is the running max of rho_hat_per_n only.
/// For constrained and Markov sources a word that is admissible but not
/// periodically extendable can have rho(P)^(1/n) above the true radius
/// (its powers need not be admissible), so rho_hat_n is reported per length
/// but never used as a bound.
inline RadiusBracket bracket(const MatrixSet& ms, const WordSource& src, int n_max,
                             NormKind k = NormKind::RowSum, bool prune = true) {
  const auto r = detail::scan(ms, src, n_max, {k, prune});
  RadiusBracket br;
  br.norm = k;
  double best_lower = 0;
  double best_upper = std::numeric_limits<double>::infinity();
  Word witness;
  for (int n = 1; n <= n_max; ++n) {
    RadiusRecord rec;
    rec.n = n;
    rec.has_words = r.has_words[n];
    rec.has_periodic_words = r.has_periodic[n];
    rec.lower_per = detail::root(r.log_rho_per[n], n);
    rec.lower = detail::root(r.log_rho[n], n);
    rec.upper = detail::root(r.log_norm[n], n);
    rec.lower_per_witness = r.per_witness[n];
    rec.lower_witness = r.rho_witness[n];
    rec.upper_witness = r.norm_witness[n];
    if (rec.has_periodic_words && detail::update_witness(rec.lower_per, best_lower, rec.lower_per_witness, witness))
      witness = rec.lower_per_witness;
    best_lower = std::max(best_lower, rec.lower_per);
    best_upper = std::min(best_upper, rec.upper);
    rec.best_lower = best_lower;
    rec.best_upper = best_upper;
    rec.gap = best_upper - best_lower;
    br.records.push_back(std::move(rec));
  }
  br.best_lower = best_lower;
  br.best_upper = best_upper;
  br.gap = best_upper - best_lower;
  br.best_lower_witness = std::move(witness);
  return br;
}

/// The ell-step chain as a 1-step chain over the block alphabet. Lift symbol
/// j + 1 is block j of the graph; the edge into block v carries the matrix of
/// v's last symbol. A lift word of k blocks spans k + ell - 1 original
/// symbols and its product is that of the last k of them.
struct MarkovLift {
  TransitionGraph graph;
  std::vector<std::vector<int>> omega;  // omega[u][v] = 1 iff edge u -> v
  std::vector<Symbol> edge_symbol;      // last symbol of each block

  int size() const { return static_cast<int>(edge_symbol.size()); }

  WordSource source() const { return WordSource::markov(omega); }

  MatrixSet matrices(const MatrixSet& ms) const {
    std::vector<Matrix> out;
    out.reserve(edge_symbol.size());
    for (Symbol s : edge_symbol) out.push_back(ms[s]);
    return MatrixSet(std::move(out));
  }

  /// Original symbols whose product a lift word carries.
  Word symbols_of(const Word& lift_word) const {
    Word w;
    w.reserve(lift_word.size());
    for (Symbol b : lift_word) w.push_back(edge_symbol[b - 1]);
    return w;
  }
};

inline MarkovLift build_markov_lift(const FrequencyConstraint& c) {
  if (!check_nonempty(c).nonempty) throw Error(ErrorCode::EmptyConstraint, "constraint admits no block");
  MarkovLift lift;
  lift.graph = build_graph(c);
  const std::size_t n = lift.graph.node_count();
  lift.omega.assign(n, std::vector<int>(n, 0));
  for (std::size_t u = 0; u < n; ++u) {
    lift.edge_symbol.push_back(lift.graph.node(u).back());
    for (auto v : lift.graph.successors(u)) lift.omega[u][v] = 1;
  }
  return lift;
}

/// For forced-periodic constraints every node has exactly one successor and
/// the language is a union of cycles; the constrained radius is then the
/// largest rho(cycle product)^(1/cycle length). Absent for other classes.
inline std::optional<double> exact_radius_if_forced_periodic(const MatrixSet& ms, const FrequencyConstraint& c) {
  const auto cls = classify_rigidity(c);
  if (cls.empty()) throw Error(ErrorCode::EmptyConstraint, "constraint admits no block");
  if (!cls.forced_periodic()) return std::nullopt;
  if (ms.size() != c.r()) throw Error(ErrorCode::AlphabetMismatch, "matrix count differs from alphabet size");

  const auto g = build_graph(c);
  std::vector<int> state(g.node_count(), 0);  // 0 new, 1 on current path, 2 done
  double best = 0;
  for (std::size_t start = 0; start < g.node_count(); ++start) {
    if (state[start]) continue;
    std::vector<std::size_t> path;
    std::size_t u = start;
    while (state[u] == 0) {
      state[u] = 1;
      path.push_back(u);
      if (g.successors(u).size() != 1)
        throw Error(ErrorCode::InvalidConstraint, "forced-periodic graph node without a unique successor");
      u = g.successors(u).front();
    }
    if (state[u] == 1) {
      const auto first = std::find(path.begin(), path.end(), u);
      const auto len = static_cast<int>(path.end() - first);
      // Walk the cycle once from u; each edge appends its target's last symbol.
      Matrix q = Matrix::Identity(ms.dim(), ms.dim());
      double scale = 0;
      bool zero = false;
      std::size_t v = u;
      for (int i = 0; i < len && !zero; ++i) {
        v = g.successors(v).front();
        q = ms[g.node(v).back()] * q;
        const double rs = q.cwiseAbs().rowwise().sum().maxCoeff();
        if (!(rs > 0)) {
          zero = true;
        } else {
          q /= rs;
          scale += std::log(rs);
        }
      }
      if (!zero) best = std::max(best, detail::root(scale + detail::safe_log(spectral_radius(q)), len));
    }
    for (auto p : path) state[p] = 2;
  }
  return best;
}

/// Whether the source has words of every length.
inline bool has_arbitrarily_long_words(const WordSource& src) {
  return std::visit(
      [](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AllWords>) {
          return true;
        } else if constexpr (std::is_same_v<T, ConstrainedWords>) {
          return check_nonempty(v.constraint).nonempty;
        } else {
          // Repeatedly drop symbols without a surviving successor.
          const std::size_t r = v.omega.size();
          std::vector<bool> alive(r, true);
          for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t a = 0; a < r; ++a) {
              if (!alive[a]) continue;
              bool any = false;
              for (std::size_t b = 0; b < r; ++b) any = any || (alive[b] && v.omega[a][b]);
              if (!any) {
                alive[a] = false;
                changed = true;
              }
            }
          }
          return std::find(alive.begin(), alive.end(), true) != alive.end();
        }
      },
      src.variant());
}

constexpr std::array<NormKind, 3> kAllNorms = {NormKind::RowSum, NormKind::ColSum, NormKind::Spectral};

struct GapRow {
  int n = 0;
  double lower_per = 0;
  double lower = 0;
  std::array<double, 3> upper{};  // indexed like kAllNorms
  double best_lower = 0;          // running max of lower_per
  double best_upper = 0;          // running min over n and norms
};

struct GapReport {
  std::vector<GapRow> rows;
  double best_lower = 0;
  double best_upper = 0;
  double gap = 0;
  Word witness;  // word attaining best_lower
  bool unbounded_language = false;
  bool empty_language = false;
  bool chain_ok = true;   // lower_per <= lower <= upper at every n and norm
  bool nested_ok = true;  // running bracket monotone and never inverted
  bool cross_ok = true;   // max lower_per <= min upper, over all n and norms
};

/// Slack used when comparing a spectral radius against a norm.
inline double bound_slack(double x) { return 1e-9 * std::max(1.0, std::abs(x)); }

/// Runs the three norms and checks the bound chain rho_hat_per_n <= rho_hat_n
/// <= rho_n, the nesting of the running bracket and the cross-length
/// inequality max_n rho_hat_per_n <= min_n rho_n.
inline GapReport verify_berger_wang(const MatrixSet& ms, const WordSource& src, int n_max) {
  std::array<RadiusBracket, 3> br;
  for (std::size_t i = 0; i < kAllNorms.size(); ++i) br[i] = bracket(ms, src, n_max, kAllNorms[i]);

  GapReport rep;
  rep.unbounded_language = has_arbitrarily_long_words(src);
  rep.empty_language = !br[0].records.front().has_words;

  double best_lower = 0;
  double best_upper = std::numeric_limits<double>::infinity();
  double min_upper_any = std::numeric_limits<double>::infinity();
  for (int n = 1; n <= n_max; ++n) {
    const auto& base = br[0].records[n - 1];
    GapRow row;
    row.n = n;
    row.lower_per = base.lower_per;
    row.lower = base.lower;
    if (row.lower_per > row.lower) rep.chain_ok = false;
    for (std::size_t i = 0; i < 3; ++i) {
      row.upper[i] = br[i].records[n - 1].upper;
      if (row.lower > row.upper[i] + bound_slack(row.upper[i])) rep.chain_ok = false;
      min_upper_any = std::min(min_upper_any, row.upper[i]);
    }
    if (base.has_periodic_words && detail::update_witness(row.lower_per, best_lower, base.lower_per_witness, rep.witness))
      rep.witness = base.lower_per_witness;
    best_lower = std::max(best_lower, row.lower_per);
    const double prev_upper = best_upper;
    best_upper = std::min({best_upper, row.upper[0], row.upper[1], row.upper[2]});
    if (best_upper > prev_upper) rep.nested_ok = false;
    row.best_lower = best_lower;
    row.best_upper = best_upper;
    if (rep.unbounded_language && best_lower > best_upper + bound_slack(best_upper)) rep.nested_ok = false;
    rep.rows.push_back(row);
  }
  rep.best_lower = best_lower;
  rep.best_upper = best_upper;
  rep.gap = best_upper - best_lower;
  if (rep.unbounded_language && best_lower > min_upper_any + bound_slack(min_upper_any)) rep.cross_ok = false;
  return rep;
}

}  // namespace cjsr
