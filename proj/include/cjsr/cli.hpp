#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cjsr/blocks.hpp"
#include "cjsr/error.hpp"
#include "cjsr/problem.hpp"
#include "cjsr/spectral.hpp"
#include "cjsr/subshift.hpp"

namespace cjsr::cli {

// Exit-code contract.
constexpr int kOk = 0;
constexpr int kEmpty = 1;
constexpr int kInputError = 2;
constexpr int kInvariantViolation = 3;

struct RunConfig {
  int n_max = 10;
  std::string norm = "rowsum";
  std::string mode = "constrained";
  std::uint64_t seed = 0;
  std::string output;  // empty: standard output
  bool raw = false;
};

/// Fixed 12-decimal form, or C99 hexadecimal float when raw.
inline std::string format_value(double x, bool raw) {
  char buf[64];
  if (!raw && std::abs(x) < 5e-13) x = 0.0;  // no "-0.000000000000"
  std::snprintf(buf, sizeof buf, raw ? "%a" : "%.12f", x);
  return buf;
}

inline std::string join_ints(const std::vector<int>& v, const char* sep = ", ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(v[i]);
  }
  return s;
}

inline int cmd_check(const ProblemFile& pf, std::ostream& out) {
  const auto& c = pf.constraint;
  const auto rep = check_nonempty(c);
  const auto cls = classify_rigidity(c);
  const int slo = rep.bounds.sum_lo();
  const int shi = rep.bounds.sum_hi();
  out << "r=" << c.r() << " l=" << c.ell() << "\n";
  out << "lo=(" << join_ints(rep.bounds.lo) << ")\n";
  out << "hi=(" << join_ints(rep.bounds.hi) << ")\n";
  out << "condition 1 (lo_i <= hi_i for every i): "
      << (rep.per_symbol_ok ? std::string("holds") : "fails at i=" + join_ints(rep.failing_symbols(), ","))
      << "\n";
  out << "condition 2 (sum lo <= l <= sum hi): " << (rep.sum_ok ? "holds" : "fails") << ", " << slo
      << " <= " << c.ell() << " <= " << shi << "\n";
  out << "class: " << cls.str() << "\n";
  if (rep.nonempty) {
    out << "nonempty, " << cls.str() << ", " << slo << " ≤ " << c.ell() << " ≤ " << shi << "\n";
    return kOk;
  }
  out << "empty";
  if (!rep.per_symbol_ok) out << ", condition 1 fails at i=" << join_ints(rep.failing_symbols(), ",");
  if (!rep.sum_ok) {
    if (slo > c.ell()) out << ", condition 2 fails: sum lo = " << slo << " > " << c.ell();
    else out << ", condition 2 fails: sum hi = " << shi << " < " << c.ell();
  }
  out << "\n";
  return kEmpty;
}

inline int cmd_blocks(const ProblemFile& pf, std::optional<long long> limit, std::ostream& out) {
  long long total = 0;
  for_each_block(pf.constraint, [&](const Word& w) {
    if (!limit || total < *limit) out << to_string(w) << "\n";
    ++total;
  });
  out << "total=" << total << "\n";
  return total > 0 ? kOk : kEmpty;
}

inline int cmd_graph(const ProblemFile& pf, const std::string& dot_path, std::ostream& out, std::ostream& err) {
  const auto g = build_graph(pf.constraint);
  std::ostringstream counts;
  counts << "nodes=" << g.node_count() << " edges=" << g.edge_count() << " dead_ends=" << g.dead_ends().size()
         << "\n";
  if (g.empty()) {
    out << counts.str();
    err << "constraint admits no block\n";
    return kEmpty;
  }
  if (dot_path.empty()) {
    out << export_dot(g);
    err << counts.str();
    return kOk;
  }
  std::ofstream f(dot_path, std::ios::binary);
  if (!f) {
    err << "cannot write '" << dot_path << "'\n";
    return kInputError;
  }
  f << export_dot(g);
  out << counts.str();
  return kOk;
}

inline WordSource make_source(const ProblemFile& pf, const std::string& mode) {
  if (mode == "constrained") return WordSource::constrained(pf.constraint);
  if (mode == "all") return WordSource::all(pf.constraint.r());
  if (mode == "markov") {
    if (!pf.omega) throw Error(ErrorCode::ParseError, "mode markov needs an 'omega' field");
    return WordSource::markov(*pf.omega);
  }
  throw Error(ErrorCode::ParseError, "unknown mode '" + mode + "'");
}

inline const MatrixSet& require_matrices(const ProblemFile& pf) {
  if (!pf.matrices) throw Error(ErrorCode::ParseError, "problem file has no 'matrices' field");
  if (pf.matrices->size() != pf.constraint.r())
    throw Error(ErrorCode::AlphabetMismatch, "matrix count differs from alphabet size");
  return *pf.matrices;
}

/// Writes to cfg.output when set, else to out.
template <class Fn>
int with_output(const RunConfig& cfg, std::ostream& out, std::ostream& err, Fn&& fn) {
  if (cfg.output.empty()) return fn(out);
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) {
    err << "cannot write '" << cfg.output << "'\n";
    return kInputError;
  }
  return fn(f);
}

inline constexpr const char* kRadiusHeader = "n,rho_hat_per_n,rho_hat_n,rho_n,best_lower,best_upper,gap";

inline int cmd_radius(const ProblemFile& pf, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto& ms = require_matrices(pf);
  const auto src = make_source(pf, cfg.mode);
  const auto norm = parse_norm(cfg.norm);
  const auto br = bracket(ms, src, cfg.n_max, norm);
  const auto v = [&](double x) { return format_value(x, cfg.raw); };

  return with_output(cfg, out, err, [&](std::ostream& os) {
    os << kRadiusHeader << "\n";
    if (!br.records.front().has_words) {
      os << "1," << v(0) << "," << v(0) << "," << v(0) << "," << v(0) << "," << v(0) << "," << v(0) << "\n";
      err << "word set is empty\n";
      return kEmpty;
    }
    bool consistent = true;
    double max_per = 0, max_hat = 0, min_upper = br.records.front().upper;
    for (const auto& rec : br.records) {
      os << rec.n << "," << v(rec.lower_per) << "," << v(rec.lower) << "," << v(rec.upper) << ","
         << v(rec.best_lower) << "," << v(rec.best_upper) << "," << v(rec.gap) << "\n";
      if (rec.lower_per > rec.lower || rec.lower > rec.upper + bound_slack(rec.upper)) consistent = false;
      max_per = std::max(max_per, rec.lower_per);
      max_hat = std::max(max_hat, rec.lower);
      min_upper = std::min(min_upper, rec.upper);
    }
    os << "best," << v(max_per) << "," << v(max_hat) << "," << v(min_upper) << "," << v(br.best_lower) << ","
       << v(br.best_upper) << "," << v(br.gap) << "\n";
    if (!consistent) {
      err << "internal inconsistency: bound chain violated\n";
      return kInvariantViolation;
    }
    return kOk;
  });
}

/// Exit code for a verification run: an empty language is 1, any broken
/// bound inequality is 3, otherwise 0.
inline int verify_exit_code(const GapReport& rep) {
  if (rep.empty_language) return kEmpty;
  if (!rep.chain_ok || !rep.nested_ok || !rep.cross_ok) return kInvariantViolation;
  return kOk;
}

inline int cmd_verify(const ProblemFile& pf, const RunConfig& cfg, double tol, std::ostream& out,
                      std::ostream& err) {
  const auto& ms = require_matrices(pf);
  const auto src = make_source(pf, cfg.mode);
  const auto rep = verify_berger_wang(ms, src, cfg.n_max);
  const auto v = [&](double x) { return format_value(x, cfg.raw); };

  return with_output(cfg, out, err, [&](std::ostream& os) {
    os << "n,rho_hat_per_n,rho_hat_n,rho_n_rowsum,rho_n_colsum,rho_n_spectral,best_lower,best_upper,gap\n";
    for (const auto& row : rep.rows)
      os << row.n << "," << v(row.lower_per) << "," << v(row.lower) << "," << v(row.upper[0]) << ","
         << v(row.upper[1]) << "," << v(row.upper[2]) << "," << v(row.best_lower) << "," << v(row.best_upper)
         << "," << v(row.best_upper - row.best_lower) << "\n";
    const int code = verify_exit_code(rep);
    os << "best_lower=" << v(rep.best_lower) << "\n";
    os << "best_upper=" << v(rep.best_upper) << "\n";
    os << "gap=" << v(rep.gap) << "\n";
    os << "witness=" << to_csv(rep.witness) << "\n";
    os << "chain=" << (rep.chain_ok ? "ok" : "violated") << " nested=" << (rep.nested_ok ? "ok" : "violated")
       << " cross=" << (rep.cross_ok ? "ok" : "violated") << "\n";
    switch (code) {
      case kEmpty: os << "verdict=empty\n"; break;
      case kInvariantViolation: os << "verdict=inconsistent\n"; break;
      default:
        os << (rep.gap <= tol ? "verdict=pass (gap within tolerance)\n"
                              : "verdict=pass (bound chain consistent, gap above tolerance)\n");
    }
    return code;
  });
}

inline int cmd_sample(const ProblemFile& pf, int length, std::uint64_t seed, std::ostream& out,
                      std::ostream& err) {
  if (!check_nonempty(pf.constraint).nonempty) {
    err << "constraint admits no block\n";
    return kEmpty;
  }
  out << to_csv(sample_sequence(pf.constraint, length, seed)) << "\n";
  return kOk;
}

/// Entry point shared by the executable and the tests. args excludes argv[0].
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sliding-block frequency constraints and constrained joint spectral radius bounds", "cjsr"};
  app.require_subcommand(1);

  std::string file;
  RunConfig cfg;
  std::optional<long long> limit;
  std::string dot_path;
  double tol = 0.05;
  int length = 0;

  auto add_file = [&](CLI::App* sub) { sub->add_option("file", file, "JSON problem file")->required(); };
  auto add_run = [&](CLI::App* sub) {
    sub->add_option("--n-max", cfg.n_max, "longest word length")->check(CLI::PositiveNumber);
    sub->add_option("--norm", cfg.norm, "rowsum|colsum|spectral")
        ->check(CLI::IsMember({"rowsum", "colsum", "spectral"}));
    sub->add_option("--mode", cfg.mode, "constrained|markov|all")
        ->check(CLI::IsMember({"constrained", "markov", "all"}));
    sub->add_option("--output,-o", cfg.output, "write CSV here instead of standard output");
    sub->add_flag("--raw", cfg.raw, "hexadecimal float output");
  };

  auto* check = app.add_subcommand("check", "integer bounds, non-emptiness and rigidity class");
  add_file(check);
  auto* blocks = app.add_subcommand("blocks", "list admissible blocks");
  add_file(blocks);
  blocks->add_option("--limit", limit, "print at most K blocks")->check(CLI::NonNegativeNumber);
  auto* graph = app.add_subcommand("graph", "transition graph in DOT format");
  add_file(graph);
  graph->add_option("--dot", dot_path, "write DOT to this path");
  auto* radius = app.add_subcommand("radius", "radius bounds as CSV");
  add_file(radius);
  add_run(radius);
  auto* verify = app.add_subcommand("verify", "bound-chain and gap verification");
  add_file(verify);
  add_run(verify);
  verify->add_option("--tol", tol, "gap tolerance");
  auto* sample = app.add_subcommand("sample", "random admissible word");
  add_file(sample);
  sample->add_option("--length", length, "word length")->required()->check(CLI::PositiveNumber);
  sample->add_option("--seed", cfg.seed, "random seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kInputError;
  }

  try {
    const auto pf = load_problem(file);
    if (check->parsed()) return cmd_check(pf, out);
    if (blocks->parsed()) return cmd_blocks(pf, limit, out);
    if (graph->parsed()) return cmd_graph(pf, dot_path, out, err);
    if (radius->parsed()) return cmd_radius(pf, cfg, out, err);
    if (verify->parsed()) return cmd_verify(pf, cfg, tol, out, err);
    if (sample->parsed()) return cmd_sample(pf, length, cfg.seed, out, err);
  } catch (const Error& e) {
    err << e.what() << "\n";
    if (e.code() == ErrorCode::EmptyConstraint) return kEmpty;
    return kInputError;
  }
  return kInputError;
}

}  // namespace cjsr::cli
