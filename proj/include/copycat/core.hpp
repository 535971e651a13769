#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace copycat {

inline constexpr std::string_view kVersion = "0.1.0";

/// Base class for all engine errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& message) : std::runtime_error(message) {}
};

/// A name that does not correspond to any concept node.
class LookupError : public Error {
public:
  explicit LookupError(const std::string& name)
      : Error("unknown node: " + name), name_(name) {}
  const std::string& name() const { return name_; }

private:
  std::string name_;
};

/// A handle whose slot is out of range or tombstoned.
class DanglingHandleError : public Error {
public:
  using Error::Error;
};

/// A structure that violates its own invariants was rejected.
class InvariantError : public Error {
public:
  using Error::Error;
};

/// Malformed problem input (illegal characters, length mismatch).
class InputError : public Error {
public:
  using Error::Error;
};

// Deterministic random source. All stochastic choices in a run draw from
// one instance. The engine is std::mt19937_64, whose output sequence the
// standard pins down exactly; the [0,1) mapping is spelled out here instead
// of going through std distributions, whose algorithms are
// implementation-defined and would break cross-build reproducibility.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1).
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). Requires n >= 1.
  int below(int n) {
    if (n <= 0) throw Error("Rng::below requires a positive bound");
    return static_cast<int>(next_unit() * static_cast<double>(n));
  }

  bool chance(double p) { return next_unit() < p; }

private:
  std::mt19937_64 engine_;
};

inline int clamp_percent(int v) { return v < 0 ? 0 : (v > 100 ? 100 : v); }

}  // namespace copycat
