#pragma once

#include <stdexcept>
#include <string>

namespace lpglm {

/// Argument outside the domain of a density, link or latent process.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Result not representable (e.g. unscaled Bessel overflow).
class RangeError : public std::range_error {
  public:
    using std::range_error::range_error;
};

/// Iterative routine that ran out of budget. Carries the best value found.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& what, double partial)
        : std::runtime_error(what), partial_(partial) {}
    double partial_value() const noexcept { return partial_; }

  private:
    double partial_;
};

class LinAlgError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Family/latent combination for which no method is defined.
class UnsupportedError : public std::logic_error {
  public:
    using std::logic_error::logic_error;
};

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const noexcept { return line_; }

  private:
    std::size_t line_;
};

class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace lpglm
