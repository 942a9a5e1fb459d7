#ifndef VIZPLAN_ERRORS_H_
#define VIZPLAN_ERRORS_H_

#include <stdexcept>
#include <string>

namespace vizplan {

// Base class of every error thrown by the library. `kind()` is a stable
// machine-readable tag used by the CLI when it reports errors as JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

// Invalid argument or input outside the operation's domain.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error("domain", what) {}
};

// Robot / canvas combination that cannot be rendered.
class ConfigurationError : public Error {
 public:
  explicit ConfigurationError(const std::string& what)
      : Error("configuration", what) {}
};

// Malformed serialized data (RLE text, PBM, vrm.json, ...).
class FormatError : public Error {
 public:
  explicit FormatError(const std::string& what) : Error("format", what) {}
};

// A link without corner features where a feature-based routine needs them.
class DegenerateFeatureError : public Error {
 public:
  explicit DegenerateFeatureError(const std::string& what)
      : Error("degenerate-feature", what) {}
};

// Start or goal pose overlapping the obstacles in every view.
class EndpointBlockedError : public Error {
 public:
  explicit EndpointBlockedError(const std::string& what)
      : Error("endpoint-blocked", what) {}
};

// Manifold learning failure (component too small, undefined correlation).
class EmbeddingError : public Error {
 public:
  explicit EmbeddingError(const std::string& what) : Error("embedding", what) {}
};

}  // namespace vizplan

#endif  // VIZPLAN_ERRORS_H_
