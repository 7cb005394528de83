// Command-line front end: solve, reduce, lb, exact, validate, gen, render,
// and bench over the plain-text instance format.
//
// Exit codes: 0 ok, 2 input error, 3 capability refusal, 4 internal
// invariant failure.

#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ktc/bench.hpp"
#include "ktc/exact.hpp"
#include "ktc/generator.hpp"
#include "ktc/heuristics.hpp"
#include "ktc/io.hpp"
#include "ktc/model.hpp"
#include "ktc/pipeline.hpp"
#include "ktc/svg.hpp"

namespace {

int exit_code_for(ktc::errc code) {
  switch (code) {
    case ktc::errc::invalid_input:
    case ktc::errc::parse:
      return 2;
    case ktc::errc::capability:
      return 3;
    case ktc::errc::validation:
    case ktc::errc::structural:
    case ktc::errc::internal:
      return 4;
  }
  return 4;
}

ktc::json provenance_json(const ktc::Provenance& p) {
  ktc::json j;
  j["eps"] = p.epsilon;
  j["span"] = p.span;
  j["strip_threshold"] = p.strip_threshold;
  j["circles"] = p.circle_count;
  j["rays"] = p.ray_count;
  j["locations"] = p.location_count;
  j["ring_width"] = p.ring_width;
  j["rings"] = p.ring_count;
  j["period"] = p.period;
  j["residue"] = p.residue;
  j["stripped_points"] = p.stripped_points;
  j["marked_points"] = p.marked_points;
  j["capped_points"] = p.capped_points;
  j["segment_points"] = p.segment_points;
  j["segments"] = p.segment_count;
  j["segment_sizes"] = p.segment_sizes;
  j["stripped_cost"] = p.stripped_cost;
  j["stripped_bound"] = p.stripped_bound;
  j["marked_cover_cost"] = p.marked_cover_cost;
  return j;
}

struct SolveArgs {
  std::string in, out;
  double eps = 0.25;
  std::string base = "heuristic";
  int threads = 1;
};

int cmd_solve(const SolveArgs& args) {
  const ktc::Instance inst = ktc::load_instance(args.in);
  ktc::BaseSolverChoice base;
  base.kind = args.base == "exact" ? ktc::BaseSolverChoice::Kind::exact_oracle
                                   : ktc::BaseSolverChoice::Kind::cover_heuristic;

  const ktc::ReductionResult red = ktc::reduce(inst, args.eps);
  const std::vector<ktc::Solution> seg_solutions =
      ktc::solve_segments(red, base, args.threads);
  const ktc::Solution sol = ktc::merge(red, seg_solutions);

  const double lower = inst.n() == 0 ? 0.0 : ktc::compute_bounds(inst).lower;
  if (ktc::radial_cost(inst) > sol.cost + ktc::cost_slack)
    ktc::fail(ktc::errc::internal, "solution beat the radial lower bound");

  std::printf("cost %.6f\n", sol.cost);
  std::printf("lower-bound %.6f\n", lower);
  std::printf("ratio %.6f\n", lower > 0.0 ? sol.cost / lower : 1.0);

  if (!args.out.empty()) {
    ktc::json meta;
    meta["eps"] = args.eps;
    meta["base"] = args.base;
    meta["lower_bound"] = lower;
    meta["provenance"] = provenance_json(red.provenance);
    ktc::write_file(args.out, ktc::emit_solution(sol, meta));
  }
  return 0;
}

struct ReduceArgs {
  std::string in, out;
  double eps = 0.25;
};

int cmd_reduce(const ReduceArgs& args) {
  const ktc::Instance inst = ktc::load_instance(args.in);
  const ktc::ReductionResult red = ktc::reduce(inst, args.eps);
  const ktc::Provenance& p = red.provenance;
  std::printf("points %d  stripped %d  marked %d  capped %d  in-segments %lld\n", inst.n(),
              p.stripped_points, p.marked_points, p.capped_points, p.segment_points);
  std::printf("grid: %d circles x %d rays = %lld locations (threshold %.6g, span %.6g)\n",
              p.circle_count, p.ray_count, p.location_count, p.strip_threshold, p.span);
  std::printf("rings: width %d, count %d, period %d, residue %d\n", p.ring_width, p.ring_count,
              p.period, p.residue);
  std::printf("segments: %d\n", p.segment_count);
  for (const ktc::SegmentProblem& seg : red.segments)
    std::printf("  segment %d: rings [%d, %d], %d points, budget %lld\n", seg.index,
                seg.first_ring, seg.last_ring, seg.instance.n(), seg.location_budget);
  if (!args.out.empty())
    ktc::write_file(args.out, provenance_json(p).dump(2) + "\n");
  return 0;
}

int cmd_lb(const std::string& in) {
  const ktc::Instance inst = ktc::load_instance(in);
  if (inst.n() == 0) {
    std::printf("radial 0.000000\nmst 0.000000\nlower-bound 0.000000\nupper-bound 0.000000\n");
    return 0;
  }
  const ktc::Bounds bounds = ktc::compute_bounds(inst);
  std::printf("radial %.6f\n", bounds.radial);
  std::printf("mst %.6f\n", bounds.mst);
  std::printf("lower-bound %.6f\n", bounds.lower);
  std::printf("upper-bound %.6f\n", bounds.upper);
  return 0;
}

struct ExactArgs {
  std::string in, out;
};

int cmd_exact(const ExactArgs& args) {
  const ktc::Instance inst = ktc::load_instance(args.in);
  const ktc::Solution sol = ktc::exact_ktc(inst);
  std::printf("cost %.6f\n", sol.cost);
  std::printf("tours %d\n", int(sol.tours.size()));
  if (!args.out.empty()) {
    ktc::json meta;
    meta["base"] = "exact";
    ktc::write_file(args.out, ktc::emit_solution(sol, meta));
  }
  return 0;
}

struct ValidateArgs {
  std::string in, sol;
};

int cmd_validate(const ValidateArgs& args) {
  const ktc::Instance inst = ktc::load_instance(args.in);
  const ktc::SolutionFile file = ktc::load_solution(args.sol);
  const ktc::ValidationReport report = ktc::validate(inst, file.solution);
  if (report.ok()) {
    std::printf("valid: %d tours, cost %.6f\n", int(file.solution.tours.size()),
                report.recomputed_cost);
    return 0;
  }
  std::printf("%s", report.to_string().c_str());
  return 2;
}

struct GenArgs {
  std::string out;
  int n = 0;
  int k = 1;
  std::uint64_t seed = 0;
  std::string dist = "uniform-disk";
};

int cmd_gen(const GenArgs& args) {
  const ktc::Dist dist = ktc::parse_dist(args.dist);
  const ktc::Instance inst = ktc::generate_instance(args.n, args.k, args.seed, dist);
  const std::string comment = "generated: dist=" + std::string(ktc::dist_name(dist)) +
                              " n=" + std::to_string(args.n) + " k=" + std::to_string(args.k) +
                              " seed=" + std::to_string(args.seed);
  ktc::write_file(args.out, ktc::emit_instance(inst, comment));
  return 0;
}

struct RenderArgs {
  std::string in, sol, out;
  bool show_grid = false;
  double eps = 0.25;
};

int cmd_render(const RenderArgs& args) {
  const ktc::Instance inst = ktc::load_instance(args.in);
  ktc::SolutionFile file;
  const ktc::Solution* sol = nullptr;
  if (!args.sol.empty()) {
    file = ktc::load_solution(args.sol);
    sol = &file.solution;
  }
  ktc::write_file(args.out, ktc::render_svg(inst, sol, args.show_grid, args.eps));
  return 0;
}

struct BenchArgs {
  std::string suite, out;
};

int cmd_bench(const BenchArgs& args) {
  const std::vector<ktc::BenchRow> rows = ktc::parse_suite(ktc::read_file(args.suite));
  const std::vector<ktc::BenchOutcome> outcomes = ktc::run_suite(rows);
  std::printf("%s", ktc::format_table(outcomes).c_str());
  if (!args.out.empty()) ktc::write_file(args.out, ktc::bench_json(outcomes).dump(2) + "\n");
  for (const ktc::BenchOutcome& o : outcomes)
    if (!o.ok) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Euclidean k-tour cover toolkit"};
  app.require_subcommand(1);
  int rc = 0;

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "Reduce an instance and solve the segments");
  solve->add_option("--in", solve_args.in, "instance file")->required();
  solve->add_option("--out", solve_args.out, "solution file to write");
  solve->add_option("--eps", solve_args.eps, "accuracy parameter in (0, 1/2]");
  solve->add_option("--base", solve_args.base, "per-segment solver")
      ->check(CLI::IsMember({"exact", "heuristic"}));
  solve->add_option("--threads", solve_args.threads, "worker threads for segments");
  solve->callback([&] { rc = cmd_solve(solve_args); });

  ReduceArgs reduce_args;
  CLI::App* reduce = app.add_subcommand("reduce", "Run the reduction and report its shape");
  reduce->add_option("--in", reduce_args.in, "instance file")->required();
  reduce->add_option("--out", reduce_args.out, "provenance JSON to write");
  reduce->add_option("--eps", reduce_args.eps, "accuracy parameter in (0, 1/2]");
  reduce->callback([&] { rc = cmd_reduce(reduce_args); });

  std::string lb_in;
  CLI::App* lb = app.add_subcommand("lb", "Print lower and upper bounds");
  lb->add_option("--in", lb_in, "instance file")->required();
  lb->callback([&] { rc = cmd_lb(lb_in); });

  ExactArgs exact_args;
  CLI::App* exact = app.add_subcommand("exact", "Solve exactly (small instances only)");
  exact->add_option("--in", exact_args.in, "instance file")->required();
  exact->add_option("--out", exact_args.out, "solution file to write");
  exact->callback([&] { rc = cmd_exact(exact_args); });

  ValidateArgs validate_args;
  CLI::App* validate = app.add_subcommand("validate", "Check a solution file against its instance");
  validate->add_option("--in", validate_args.in, "instance file")->required();
  validate->add_option("--sol", validate_args.sol, "solution file")->required();
  validate->callback([&] { rc = cmd_validate(validate_args); });

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "Generate a random instance");
  gen->add_option("--out", gen_args.out, "instance file to write")->required();
  gen->add_option("-n,--n", gen_args.n, "point count")->required();
  gen->add_option("-k,--k", gen_args.k, "tour capacity")->required();
  gen->add_option("--seed", gen_args.seed, "random seed");
  gen->add_option("--dist", gen_args.dist, "uniform-disk | clustered | annulus");
  gen->callback([&] { rc = cmd_gen(gen_args); });

  RenderArgs render_args;
  CLI::App* render = app.add_subcommand("render", "Render an instance (and solution) as SVG");
  render->add_option("--in", render_args.in, "instance file")->required();
  render->add_option("--sol", render_args.sol, "solution file to draw");
  render->add_option("--out", render_args.out, "SVG file to write")->required();
  render->add_flag("--show-grid", render_args.show_grid, "draw circles, rays, and marked rings");
  render->add_option("--eps", render_args.eps, "accuracy parameter for the grid");
  render->callback([&] { rc = cmd_render(render_args); });

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "Run a benchmark suite");
  bench->add_option("--suite", bench_args.suite, "suite file")->required();
  bench->add_option("--out", bench_args.out, "results JSON to write");
  bench->callback([&] { rc = cmd_bench(bench_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ktc::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
  return rc;
}
