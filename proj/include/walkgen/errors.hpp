#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace walkgen {

// A single invariant violation: machine-readable code plus human message.
struct Violation {
  std::string code;
  std::string message;

  bool operator==(const Violation& o) const = default;
};

// Malformed input text (JSON syntax, unreadable file).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Structurally sound input that breaks a documented invariant or schema rule.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Violation> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

  explicit ValidationError(const std::string& code, const std::string& message)
      : ValidationError(std::vector<Violation>{{code, message}}) {}

  const std::vector<Violation>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<Violation>& vs) {
    std::string out;
    for (const Violation& v : vs) {
      if (!out.empty()) out += "; ";
      out += "[" + v.code + "] " + v.message;
    }
    return out;
  }

  std::vector<Violation> violations_;
};

}  // namespace walkgen
