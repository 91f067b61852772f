#pragma once

#include <stdexcept>
#include <string>

namespace siglab {

// Error classes surfaced by the CLI as machine-parsable one-liners.
enum class ErrorKind {
  Config,
  Representation,
  Numeric,
  Training,
  Prediction,
  Constraint,
  Schema,
  Backend,
  Io,
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Config: return "config";
    case ErrorKind::Representation: return "representation";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Training: return "training";
    case ErrorKind::Prediction: return "prediction";
    case ErrorKind::Constraint: return "constraint";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Backend: return "backend";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  const char* kind_name() const { return error_kind_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace siglab
