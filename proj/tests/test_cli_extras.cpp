#include <catch2/catch_amalgamated.hpp>

#include <cctype>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "ktc/bench.hpp"
#include "ktc/generator.hpp"
#include "ktc/io.hpp"
#include "ktc/svg.hpp"

namespace {

// Minimal XML well-formedness check, written against the XML rules rather
// than the renderer: tags balance, attributes are quoted, no stray '&', and
// there is exactly one root element. Returns a description of the first
// problem, or "" when the document is fine.
std::string xml_problem(const std::string& text) {
  size_t at = 0;
  std::vector<std::string> stack;
  bool seen_root = false;

  auto is_name_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':';
  };

  while (at < text.size()) {
    const size_t lt = text.find('<', at);
    const size_t text_end = lt == std::string::npos ? text.size() : lt;
    for (size_t i = at; i < text_end; ++i) {
      if (text[i] == '&') return "unescaped '&' in text";
      if (stack.empty() && !std::isspace(static_cast<unsigned char>(text[i])))
        return "text outside the root element";
    }
    if (lt == std::string::npos) break;
    const size_t gt = text.find('>', lt);
    if (gt == std::string::npos) return "unterminated tag";
    std::string tag = text.substr(lt + 1, gt - lt - 1);
    at = gt + 1;

    if (!tag.empty() && tag.front() == '?') {
      if (tag.back() != '?') return "bad processing instruction";
      if (seen_root || !stack.empty()) return "prolog after content";
      continue;
    }
    if (!tag.empty() && tag.front() == '/') {
      const std::string name = tag.substr(1);
      if (stack.empty()) return "closing </" + name + "> with nothing open";
      if (stack.back() != name)
        return "closing </" + name + "> but <" + stack.back() + "> is open";
      stack.pop_back();
      continue;
    }

    bool self_closing = false;
    if (!tag.empty() && tag.back() == '/') {
      self_closing = true;
      tag.pop_back();
    }
    size_t p = 0;
    while (p < tag.size() && is_name_char(tag[p])) ++p;
    if (p == 0) return "tag without a name";
    const std::string name = tag.substr(0, p);
    // attributes: name="value" separated by whitespace
    while (p < tag.size()) {
      while (p < tag.size() && std::isspace(static_cast<unsigned char>(tag[p]))) ++p;
      if (p == tag.size()) break;
      const size_t attr_start = p;
      while (p < tag.size() && is_name_char(tag[p])) ++p;
      if (p == attr_start) return "garbage in <" + name + ">";
      if (p == tag.size() || tag[p] != '=') return "attribute without '=' in <" + name + ">";
      ++p;
      if (p == tag.size() || tag[p] != '"') return "unquoted attribute in <" + name + ">";
      const size_t close = tag.find('"', p + 1);
      if (close == std::string::npos) return "unterminated attribute in <" + name + ">";
      const std::string value = tag.substr(p + 1, close - p - 1);
      if (value.find('<') != std::string::npos || value.find('&') != std::string::npos)
        return "raw markup inside an attribute of <" + name + ">";
      p = close + 1;
    }
    if (stack.empty()) {
      if (seen_root) return "multiple root elements";
      seen_root = true;
    }
    if (!self_closing) stack.push_back(name);
  }
  if (!stack.empty()) return "unclosed <" + stack.back() + ">";
  if (!seen_root) return "expected exactly one root element";
  return "";
}

int count_tags(const std::string& text, const std::string& name) {
  const std::string needle = "<" + name;
  int count = 0;
  size_t at = 0;
  while ((at = text.find(needle, at)) != std::string::npos) {
    const char after = at + needle.size() < text.size() ? text[at + needle.size()] : '\0';
    if (after == ' ' || after == '>' || after == '/') ++count;
    at += needle.size();
  }
  return count;
}

}  // namespace

TEST_CASE("xml checker flags malformed documents") {
  CHECK(xml_problem("<a><b x=\"1\"/></a>").empty());
  CHECK(xml_problem("<?xml version=\"1.0\"?>\n<a>text</a>\n").empty());
  CHECK(!xml_problem("<a><b></a>").empty());
  CHECK(!xml_problem("<a>").empty());
  CHECK(!xml_problem("</a>").empty());
  CHECK(!xml_problem("<a x=1></a>").empty());
  CHECK(!xml_problem("<a x=\"1></a>").empty());
  CHECK(!xml_problem("<a></a><b></b>").empty());
  CHECK(!xml_problem("<a>&</a>").empty());
  CHECK(!xml_problem("junk<a></a>").empty());
}

TEST_CASE("rendered svg is well-formed xml") {
  ktc::Rng rng(101);
  const ktc::Instance small = testutil::random_instance(3, 2, rng);
  CHECK(xml_problem(ktc::render_svg(small, nullptr, false, 0.3)).empty());

  const ktc::Instance big = ktc::generate_instance(60, 3, 41, ktc::Dist::clustered);
  const ktc::Solution sol = ktc::solve(big, 0.4);
  CHECK(xml_problem(ktc::render_svg(big, &sol, true, 0.4)).empty());

  ktc::Instance empty;
  empty.capacity = 2;
  const std::string depot_only = ktc::render_svg(empty, nullptr, true, 0.3);
  CHECK(xml_problem(depot_only).empty());
  CHECK(count_tags(depot_only, "circle") == 0);
  CHECK(count_tags(depot_only, "line") == 0);
  CHECK(count_tags(depot_only, "path") == 0);
  CHECK(count_tags(depot_only, "rect") == 1);  // just the depot marker
}

TEST_CASE("svg grid element counts match the location grid") {
  const ktc::Instance inst = ktc::generate_instance(30, 3, 42, ktc::Dist::uniform_disk);
  double span = 0.0;
  for (int i = 0; i < inst.n(); ++i) span = std::max(span, inst.radius(i));
  const ktc::LocationGrid grid = ktc::build_grid(span, inst.n(), inst.capacity, 0.5);
  REQUIRE(grid.ray_count <= 64);

  const std::string svg = ktc::render_svg(inst, nullptr, true, 0.5);
  CHECK(xml_problem(svg).empty());
  CHECK(count_tags(svg, "circle") == grid.circle_count);
  CHECK(count_tags(svg, "line") == grid.ray_count);
  CHECK(count_tags(svg, "text") == grid.ray_count);
  CHECK(count_tags(svg, "rect") == inst.n() + 1);
  CHECK(count_tags(svg, "path") == 0);

  const ktc::Solution sol = ktc::solve(inst, 0.5);
  const std::string with_sol = ktc::render_svg(inst, &sol, false, 0.5);
  CHECK(xml_problem(with_sol).empty());
  CHECK(count_tags(with_sol, "path") == int(sol.tours.size()));
  CHECK(count_tags(with_sol, "circle") == 0);
}

TEST_CASE("svg drops ray labels on dense grids") {
  // k = 6 at eps = 0.5 needs 76 rays, above the 64-label cutoff
  const ktc::Instance inst = ktc::generate_instance(20, 6, 43, ktc::Dist::uniform_disk);
  double span = 0.0;
  for (int i = 0; i < inst.n(); ++i) span = std::max(span, inst.radius(i));
  const ktc::LocationGrid grid = ktc::build_grid(span, inst.n(), inst.capacity, 0.5);
  REQUIRE(grid.ray_count > 64);
  const std::string svg = ktc::render_svg(inst, nullptr, true, 0.5);
  CHECK(xml_problem(svg).empty());
  CHECK(count_tags(svg, "line") == grid.ray_count);
  CHECK(count_tags(svg, "text") == 0);
}

TEST_CASE("svg rejects solutions that point outside the instance") {
  ktc::Rng rng(102);
  const ktc::Instance inst = testutil::random_instance(4, 2, rng);
  ktc::Solution bad;
  bad.tours = {ktc::Tour{{0, 9}}};
  CHECK_THROWS_MATCHES(ktc::render_svg(inst, &bad, false, 0.3), ktc::Error,
                       Catch::Matchers::Predicate<ktc::Error>([](const ktc::Error& e) {
                         return e.code() == ktc::errc::invalid_input;
                       }));
}

TEST_CASE("generator is deterministic per seed") {
  for (ktc::Dist dist : {ktc::Dist::uniform_disk, ktc::Dist::clustered, ktc::Dist::annulus}) {
    const ktc::Instance a = ktc::generate_instance(50, 4, 7, dist);
    const ktc::Instance b = ktc::generate_instance(50, 4, 7, dist);
    CHECK(ktc::emit_instance(a) == ktc::emit_instance(b));
    const ktc::Instance c = ktc::generate_instance(50, 4, 8, dist);
    CHECK(ktc::emit_instance(a) != ktc::emit_instance(c));
  }
}

TEST_CASE("generated points respect the distribution's radii") {
  const ktc::Instance disk = ktc::generate_instance(10000, 3, 11, ktc::Dist::uniform_disk);
  REQUIRE(disk.n() == 10000);
  CHECK(disk.capacity == 3);
  for (int i = 0; i < disk.n(); ++i) CHECK(disk.radius(i) <= 1.0 + 1e-12);

  const ktc::Instance ring = ktc::generate_instance(2000, 3, 12, ktc::Dist::annulus);
  for (int i = 0; i < ring.n(); ++i) {
    CHECK(ring.radius(i) >= 0.5 - 1e-12);
    CHECK(ring.radius(i) <= 1.0 + 1e-12);
  }

  CHECK(ktc::generate_instance(0, 2, 13, ktc::Dist::clustered).n() == 0);
  CHECK_THROWS_AS(ktc::generate_instance(-1, 2, 13, ktc::Dist::uniform_disk), ktc::Error);
  CHECK_THROWS_AS(ktc::generate_instance(5, 0, 13, ktc::Dist::uniform_disk), ktc::Error);
}

TEST_CASE("distribution names round-trip") {
  for (ktc::Dist dist : {ktc::Dist::uniform_disk, ktc::Dist::clustered, ktc::Dist::annulus})
    CHECK(ktc::parse_dist(ktc::dist_name(dist)) == dist);
  CHECK_THROWS_MATCHES(ktc::parse_dist("square"), ktc::Error,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("uniform-disk")));
}

TEST_CASE("bench suites expand comma lists into rows") {
  const std::string text =
      "# comment\n"
      "\n"
      "12 3 0.4 uniform-disk 1,2 heuristic,pipeline\n"
      "5 2 0.25 annulus 9 exact\n";
  const std::vector<ktc::BenchRow> rows = ktc::parse_suite(text);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].n == 12);
  CHECK(rows[0].k == 3);
  CHECK(rows[0].eps == 0.4);
  CHECK(rows[0].dist == ktc::Dist::uniform_disk);
  CHECK(rows[0].seed == 1);
  CHECK(rows[0].strategy == ktc::BenchStrategy::heuristic);
  CHECK(rows[1].seed == 1);
  CHECK(rows[1].strategy == ktc::BenchStrategy::pipeline);
  CHECK(rows[2].seed == 2);
  CHECK(rows[2].strategy == ktc::BenchStrategy::heuristic);
  CHECK(rows[3].seed == 2);
  CHECK(rows[3].strategy == ktc::BenchStrategy::pipeline);
  CHECK(rows[4].n == 5);
  CHECK(rows[4].strategy == ktc::BenchStrategy::exact);

  auto fails_with = [](const std::string& suite, const std::string& needle) {
    try {
      ktc::parse_suite(suite);
      return false;
    } catch (const ktc::Error& e) {
      return e.code() == ktc::errc::parse &&
             std::string(e.what()).find(needle) != std::string::npos;
    }
  };
  CHECK(fails_with("12 3 0.4 uniform-disk 1\n", "line 1"));
  CHECK(fails_with("# ok\n12 3 0.4 square 1 exact\n", "line 2"));
  CHECK(fails_with("12 3 0.4 uniform-disk 1 sorcery\n", "unknown strategy"));
  CHECK(fails_with("-2 3 0.4 uniform-disk 1 exact\n", "non-negative"));
  CHECK(fails_with("12 0 0.4 uniform-disk 1 exact\n", "at least 1"));
  CHECK(fails_with("12 3 0.4 uniform-disk one exact\n", "seed"));
}

TEST_CASE("bench rows run, report ratios, and survive failures") {
  const std::vector<ktc::BenchRow> rows = ktc::parse_suite(
      "10 3 0.4 uniform-disk 5 exact,heuristic,pipeline,pipeline-exact\n"
      "30 2 0.4 uniform-disk 7 exact\n"
      "6 2 0.3 clustered 8 heuristic\n");
  const std::vector<ktc::BenchOutcome> outcomes = ktc::run_suite(rows);
  REQUIRE(outcomes.size() == 6);

  for (int i : {0, 1, 2, 3}) {
    INFO("row " << i << ": " << outcomes[i].error);
    REQUIRE(outcomes[i].ok);
    CHECK(outcomes[i].cost >= outcomes[i].lower - ktc::cost_slack);
    CHECK(outcomes[i].has_opt);  // n = 10 is within the exact ceiling
    CHECK(outcomes[i].ratio >= 1.0 - 1e-9);
  }
  CHECK(outcomes[0].ratio == 1.0);  // exact is its own optimum
  CHECK(outcomes[1].ratio <= 3.0 - 2.0 / 3 + 1e-9);
  CHECK(outcomes[0].cost <= outcomes[1].cost + ktc::cost_slack);

  // the oversized exact row fails without stopping the suite
  CHECK(!outcomes[4].ok);
  CHECK(outcomes[4].error.find("exact") != std::string::npos);
  CHECK(outcomes[5].ok);

  const std::string table = ktc::format_table(outcomes);
  CHECK(table.find("error:") != std::string::npos);
  CHECK(table.find(" ok") != std::string::npos);
  CHECK(table.find("pipeline-exact") != std::string::npos);

  const ktc::json doc = ktc::bench_json(outcomes);
  REQUIRE(doc.at("rows").size() == 6);
  CHECK(doc.at("rows")[0].at("ok") == true);
  CHECK(doc.at("rows")[0].at("opt") == doc.at("rows")[0].at("cost"));
  CHECK(doc.at("rows")[4].at("ok") == false);
  CHECK(doc.at("rows")[4].contains("error"));
}
