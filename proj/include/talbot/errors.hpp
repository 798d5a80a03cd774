#ifndef TALBOT_ERRORS_HPP
#define TALBOT_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace talbot {

/// Raised when an argument lies outside the domain of an operation
/// (non-positive lengths, z < 0, windows outside the grating, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The wavefunction vanishes (to working precision) where a ratio by it is needed.
class NodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Configuration validation failure. Carries every problem found, not just the first.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems)
      : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& problems) {
    std::string out = "invalid configuration:";
    for (const auto& p : problems) {
      out += "\n  - ";
      out += p;
    }
    return out;
  }

  std::vector<std::string> problems_;
};

}  // namespace talbot

#endif  // TALBOT_ERRORS_HPP
