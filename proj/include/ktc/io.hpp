#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "ktc/errors.hpp"
#include "ktc/model.hpp"

namespace ktc {

using json = nlohmann::ordered_json;

namespace detail {

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

[[noreturn]] inline void parse_fail(int line, const std::string& what) {
  fail(errc::parse, "line " + std::to_string(line) + ": " + what);
}

/// Splits a trimmed line into whitespace-separated fields.
inline std::vector<std::string_view> fields(std::string_view s) {
  std::vector<std::string_view> out;
  size_t at = 0;
  while (at < s.size()) {
    while (at < s.size() && (s[at] == ' ' || s[at] == '\t')) ++at;
    size_t end = at;
    while (end < s.size() && s[end] != ' ' && s[end] != '\t') ++end;
    if (end > at) out.push_back(s.substr(at, end - at));
    at = end;
  }
  return out;
}

inline double parse_double_field(std::string_view f, int line, const char* what) {
  double value = 0.0;
  const auto res = std::from_chars(f.data(), f.data() + f.size(), value);
  if (res.ec != std::errc{} || res.ptr != f.data() + f.size())
    parse_fail(line, std::string("expected a number for ") + what + ", got '" + std::string(f) + "'");
  return value;
}

inline long long parse_int_field(std::string_view f, int line, const char* what) {
  long long value = 0;
  const auto res = std::from_chars(f.data(), f.data() + f.size(), value);
  if (res.ec != std::errc{} || res.ptr != f.data() + f.size())
    parse_fail(line, std::string("expected an integer for ") + what + ", got '" + std::string(f) + "'");
  return value;
}

}  // namespace detail

/// Parses the plain-text instance format:
///
///     # optional comment lines
///     KTC 1
///     N <n>
///     K <k>
///     DEPOT <x> <y>      (optional, defaults to 0 0)
///     <x> <y>            (n coordinate lines)
///
/// Parse errors carry 1-based line numbers.
inline Instance parse_instance(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line = 0;

  enum class Expect { header, n_line, k_line, points };
  Expect expect = Expect::header;
  Instance inst;
  long long want = 0;
  bool saw_depot = false;

  while (std::getline(in, raw)) {
    ++line;
    const std::string_view s = detail::trim(raw);
    if (s.empty() || s.front() == '#') continue;
    const std::vector<std::string_view> f = detail::fields(s);

    switch (expect) {
      case Expect::header:
        if (f.size() != 2 || f[0] != "KTC" || f[1] != "1")
          detail::parse_fail(line, "expected header 'KTC 1'");
        expect = Expect::n_line;
        break;
      case Expect::n_line:
        if (f.size() != 2 || f[0] != "N") detail::parse_fail(line, "expected 'N <count>'");
        want = detail::parse_int_field(f[1], line, "N");
        if (want < 0) detail::parse_fail(line, "N must be non-negative");
        expect = Expect::k_line;
        break;
      case Expect::k_line: {
        if (f.size() != 2 || f[0] != "K") detail::parse_fail(line, "expected 'K <capacity>'");
        const long long k = detail::parse_int_field(f[1], line, "K");
        if (k < 1) detail::parse_fail(line, "K must be at least 1");
        inst.capacity = int(k);
        expect = Expect::points;
        break;
      }
      case Expect::points:
        if (f[0] == "DEPOT") {
          if (saw_depot || inst.n() > 0)
            detail::parse_fail(line, "DEPOT must come before the point list");
          if (f.size() != 3) detail::parse_fail(line, "expected 'DEPOT <x> <y>'");
          inst.origin = {detail::parse_double_field(f[1], line, "depot x"),
                         detail::parse_double_field(f[2], line, "depot y")};
          saw_depot = true;
          break;
        }
        if (inst.n() == want) detail::parse_fail(line, "unexpected content after the point list");
        if (f.size() != 2) detail::parse_fail(line, "expected '<x> <y>'");
        inst.points.push_back({detail::parse_double_field(f[0], line, "x"),
                               detail::parse_double_field(f[1], line, "y")});
        break;
    }
  }

  switch (expect) {
    case Expect::header: detail::parse_fail(line + 1, "missing header 'KTC 1'");
    case Expect::n_line: detail::parse_fail(line + 1, "missing 'N <count>'");
    case Expect::k_line: detail::parse_fail(line + 1, "missing 'K <capacity>'");
    case Expect::points:
      if (inst.n() != want)
        detail::parse_fail(line + 1, "expected " + std::to_string(want) + " points, got " +
                                         std::to_string(inst.n()));
      break;
  }
  return inst;
}

/// Emits the instance in the format parse_instance reads. Coordinates use
/// the shortest decimal form that round-trips, so parse(emit(x)) == x.
inline std::string emit_instance(const Instance& inst, const std::string& comment = "") {
  std::string out;
  if (!comment.empty()) {
    std::istringstream lines(comment);
    std::string l;
    while (std::getline(lines, l)) out += "# " + l + "\n";
  }
  out += "KTC 1\n";
  out += "N " + std::to_string(inst.n()) + "\n";
  out += "K " + std::to_string(inst.capacity) + "\n";
  if (inst.origin.x != 0.0 || inst.origin.y != 0.0)
    out += "DEPOT " + detail::format_double(inst.origin.x) + " " +
           detail::format_double(inst.origin.y) + "\n";
  for (const Point& p : inst.points)
    out += detail::format_double(p.x) + " " + detail::format_double(p.y) + "\n";
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::invalid_input, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::invalid_input, "cannot write '" + path + "'");
  out << content;
  if (!out) fail(errc::invalid_input, "failed writing '" + path + "'");
}

inline Instance load_instance(const std::string& path) {
  try {
    return parse_instance(read_file(path));
  } catch (const Error& e) {
    if (e.code() == errc::parse) throw Error(errc::parse, path + ": " + e.what());
    throw;
  }
}

/// Serializes a solution plus caller-supplied metadata as JSON. The output
/// depends only on the solution and meta, never on timing or thread count.
inline std::string emit_solution(const Solution& sol, const json& meta = json::object()) {
  json doc;
  doc["cost"] = sol.cost;
  json tours = json::array();
  for (const Tour& t : sol.tours) tours.push_back(t.indices);
  doc["tours"] = std::move(tours);
  doc["meta"] = meta;
  return doc.dump(2) + "\n";
}

struct SolutionFile {
  Solution solution;
  json meta;
};

/// Parses emit_solution's output. Structure errors are parse errors; cost
/// consistency against an instance is the caller's job (see validate).
inline SolutionFile parse_solution(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(errc::parse, std::string("invalid solution file: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("cost") || !doc.contains("tours"))
    fail(errc::parse, "solution file needs 'cost' and 'tours' fields");
  SolutionFile out;
  if (!doc["cost"].is_number()) fail(errc::parse, "'cost' must be a number");
  out.solution.cost = doc["cost"].get<double>();
  if (!doc["tours"].is_array()) fail(errc::parse, "'tours' must be a list");
  for (const json& jt : doc["tours"]) {
    if (!jt.is_array()) fail(errc::parse, "each tour must be a list of point indices");
    Tour t;
    for (const json& ji : jt) {
      if (!ji.is_number_integer()) fail(errc::parse, "point indices must be integers");
      t.indices.push_back(ji.get<int>());
    }
    out.solution.tours.push_back(std::move(t));
  }
  if (doc.contains("meta")) out.meta = doc["meta"];
  return out;
}

inline SolutionFile load_solution(const std::string& path) {
  try {
    return parse_solution(read_file(path));
  } catch (const Error& e) {
    if (e.code() == errc::parse) throw Error(errc::parse, path + ": " + e.what());
    throw;
  }
}

}  // namespace ktc
