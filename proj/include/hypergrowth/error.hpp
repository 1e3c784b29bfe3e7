#ifndef HYPERGROWTH_ERROR_HPP
#define HYPERGROWTH_ERROR_HPP

#include <stdexcept>
#include <string>

namespace hypergrowth {

enum class ErrorKind {
  parse,       // malformed input text
  validation,  // well-formed input violating a precondition or invariant
  io,          // file system failure
  numerical,   // singular design, pole evaluation, missing singularity
};

/// Single exception type for the library. The kind decides the CLI exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error validation_error(const std::string& what) {
  return Error(ErrorKind::validation, what);
}
inline Error parse_error(const std::string& what) {
  return Error(ErrorKind::parse, what);
}
inline Error io_error(const std::string& what) {
  return Error(ErrorKind::io, what);
}
inline Error numerical_error(const std::string& what) {
  return Error(ErrorKind::numerical, what);
}

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parse: return "parse";
    case ErrorKind::validation: return "validation";
    case ErrorKind::io: return "io";
    case ErrorKind::numerical: return "numerical";
  }
  return "unknown";
}

/// Process exit code: 2 validation (parse errors included), 3 I/O, 4 numerical.
inline int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parse:
    case ErrorKind::validation: return 2;
    case ErrorKind::io: return 3;
    case ErrorKind::numerical: return 4;
  }
  return 1;
}

}  // namespace hypergrowth

#endif  // HYPERGROWTH_ERROR_HPP
