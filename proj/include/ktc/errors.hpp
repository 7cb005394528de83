#pragma once

#include <stdexcept>
#include <string>

namespace ktc {

/// Error categories. They map one-to-one onto CLI exit codes, so library
/// callers can distinguish "your input is bad" from "this request exceeds a
/// configured limit" from "an internal guarantee failed".
enum class errc {
  invalid_input,  ///< out-of-domain argument or malformed value
  parse,          ///< unreadable file content
  capability,     ///< request exceeds a configured solver limit
  validation,     ///< an infeasible solution was handed to an operation
  structural,     ///< inconsistent cross-references between artifacts
  internal,       ///< a guaranteed bound or invariant failed at runtime
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_input: return "invalid-input";
    case errc::parse: return "parse";
    case errc::capability: return "capability";
    case errc::validation: return "validation";
    case errc::structural: return "structural";
    case errc::internal: return "internal";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

}  // namespace ktc
