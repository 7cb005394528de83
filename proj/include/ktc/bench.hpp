#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "ktc/errors.hpp"
#include "ktc/exact.hpp"
#include "ktc/generator.hpp"
#include "ktc/heuristics.hpp"
#include "ktc/io.hpp"
#include "ktc/pipeline.hpp"

namespace ktc {

enum class BenchStrategy { exact, heuristic, pipeline, pipeline_exact };

inline const char* strategy_name(BenchStrategy s) {
  switch (s) {
    case BenchStrategy::exact: return "exact";
    case BenchStrategy::heuristic: return "heuristic";
    case BenchStrategy::pipeline: return "pipeline";
    case BenchStrategy::pipeline_exact: return "pipeline-exact";
  }
  return "?";
}

inline BenchStrategy parse_strategy(const std::string& name) {
  if (name == "exact") return BenchStrategy::exact;
  if (name == "heuristic") return BenchStrategy::heuristic;
  if (name == "pipeline") return BenchStrategy::pipeline;
  if (name == "pipeline-exact") return BenchStrategy::pipeline_exact;
  fail(errc::invalid_input, "unknown strategy '" + name +
                                "' (expected exact, heuristic, pipeline, or pipeline-exact)");
}

struct BenchRow {
  int n = 0;
  int k = 1;
  double eps = 0.25;
  Dist dist = Dist::uniform_disk;
  std::uint64_t seed = 0;
  BenchStrategy strategy = BenchStrategy::heuristic;
};

struct BenchOutcome {
  BenchRow row;
  bool ok = false;
  std::string error;
  double cost = 0.0;
  double lower = 0.0;
  double ratio = 0.0;   ///< vs. the exact optimum when available, else vs. lower
  double opt = 0.0;
  bool has_opt = false;
  int tours = 0;
  double seconds = 0.0;
};

/// Suite rows are lines of the form
///
///     <n> <k> <eps> <dist> <seed>[,<seed>...] <strategy>[,<strategy>...]
///
/// Comma lists expand to one row per combination; '#' starts a comment line.
inline std::vector<BenchRow> parse_suite(const std::string& text) {
  std::vector<BenchRow> rows;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view s = detail::trim(raw);
    if (s.empty() || s.front() == '#') continue;
    const std::vector<std::string_view> f = detail::fields(s);
    if (f.size() != 6)
      detail::parse_fail(line, "expected '<n> <k> <eps> <dist> <seeds> <strategies>'");

    BenchRow base;
    base.n = int(detail::parse_int_field(f[0], line, "n"));
    base.k = int(detail::parse_int_field(f[1], line, "k"));
    base.eps = detail::parse_double_field(f[2], line, "eps");
    if (base.n < 0) detail::parse_fail(line, "n must be non-negative");
    if (base.k < 1) detail::parse_fail(line, "k must be at least 1");
    try {
      base.dist = parse_dist(std::string(f[3]));
    } catch (const Error& e) {
      detail::parse_fail(line, e.what());
    }

    auto split = [](std::string_view list) {
      std::vector<std::string_view> parts;
      size_t at = 0;
      while (at <= list.size()) {
        const size_t comma = std::min(list.find(',', at), list.size());
        parts.push_back(list.substr(at, comma - at));
        at = comma + 1;
      }
      return parts;
    };
    std::vector<std::uint64_t> seeds;
    for (std::string_view part : split(f[4]))
      seeds.push_back(std::uint64_t(detail::parse_int_field(part, line, "seed")));
    std::vector<BenchStrategy> strategies;
    for (std::string_view part : split(f[5])) {
      try {
        strategies.push_back(parse_strategy(std::string(part)));
      } catch (const Error& e) {
        detail::parse_fail(line, e.what());
      }
    }
    for (std::uint64_t seed : seeds)
      for (BenchStrategy strategy : strategies) {
        BenchRow row = base;
        row.seed = seed;
        row.strategy = strategy;
        rows.push_back(row);
      }
  }
  return rows;
}

inline BenchOutcome run_row(const BenchRow& row, const OracleLimits& limits = {}) {
  BenchOutcome out;
  out.row = row;
  const Instance inst = generate_instance(row.n, row.k, row.seed, row.dist);

  const auto start = std::chrono::steady_clock::now();
  Solution sol;
  switch (row.strategy) {
    case BenchStrategy::exact: sol = solve_direct(inst, Strategy::exact, limits); break;
    case BenchStrategy::heuristic: sol = solve_direct(inst, Strategy::heuristic, limits); break;
    case BenchStrategy::pipeline: sol = solve(inst, row.eps); break;
    case BenchStrategy::pipeline_exact: {
      BaseSolverChoice base;
      base.kind = BaseSolverChoice::Kind::exact_oracle;
      base.limits = limits;
      sol = solve(inst, row.eps, base);
      break;
    }
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const ValidationReport report = validate(inst, sol);
  if (!report.ok()) fail(errc::internal, "bench solution failed validation: " + report.to_string());

  out.cost = sol.cost;
  out.tours = int(sol.tours.size());
  const Bounds bounds = compute_bounds(inst);
  out.lower = bounds.lower;
  if (row.strategy == BenchStrategy::exact) {
    out.opt = sol.cost;
    out.has_opt = true;
  } else if (row.n <= limits.max_points_dp) {
    out.opt = exact_ktc(inst, limits).cost;
    out.has_opt = true;
  }
  const double denom = out.has_opt ? out.opt : out.lower;
  out.ratio = denom > 0.0 ? out.cost / denom : 1.0;
  out.ok = true;
  return out;
}

/// Runs every row, recording failures without stopping the suite.
inline std::vector<BenchOutcome> run_suite(const std::vector<BenchRow>& rows,
                                           const OracleLimits& limits = {}) {
  std::vector<BenchOutcome> outcomes;
  outcomes.reserve(rows.size());
  for (const BenchRow& row : rows) {
    try {
      outcomes.push_back(run_row(row, limits));
    } catch (const std::exception& e) {
      BenchOutcome failed;
      failed.row = row;
      failed.error = e.what();
      outcomes.push_back(std::move(failed));
    }
  }
  return outcomes;
}

inline std::string format_table(const std::vector<BenchOutcome>& outcomes) {
  std::string out =
      "     n   k    eps            dist        seed        strategy          cost         lower  "
      "  ratio    time(s)  status\n";
  char buf[256];
  for (const BenchOutcome& o : outcomes) {
    if (o.ok) {
      std::snprintf(buf, sizeof(buf),
                    "%6d %3d %6.3f %15s %11llu %15s %13.6f %13.6f %8.4f %10.4f  ok\n", o.row.n,
                    o.row.k, o.row.eps, dist_name(o.row.dist),
                    (unsigned long long)o.row.seed, strategy_name(o.row.strategy), o.cost, o.lower,
                    o.ratio, o.seconds);
      out += buf;
    } else {
      std::snprintf(buf, sizeof(buf), "%6d %3d %6.3f %15s %11llu %15s %*s  error: %s\n", o.row.n,
                    o.row.k, o.row.eps, dist_name(o.row.dist),
                    (unsigned long long)o.row.seed, strategy_name(o.row.strategy), 47, "",
                    o.error.c_str());
      out += buf;
    }
  }
  return out;
}

inline json bench_json(const std::vector<BenchOutcome>& outcomes) {
  json rows = json::array();
  for (const BenchOutcome& o : outcomes) {
    json r;
    r["n"] = o.row.n;
    r["k"] = o.row.k;
    r["eps"] = o.row.eps;
    r["dist"] = dist_name(o.row.dist);
    r["seed"] = o.row.seed;
    r["strategy"] = strategy_name(o.row.strategy);
    r["ok"] = o.ok;
    if (o.ok) {
      r["cost"] = o.cost;
      r["lower"] = o.lower;
      r["ratio"] = o.ratio;
      if (o.has_opt) r["opt"] = o.opt;
      r["tours"] = o.tours;
      r["seconds"] = o.seconds;
    } else {
      r["error"] = o.error;
    }
    rows.push_back(std::move(r));
  }
  json doc;
  doc["rows"] = std::move(rows);
  return doc;
}

}  // namespace ktc
