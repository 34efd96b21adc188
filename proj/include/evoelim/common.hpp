#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace evoelim {

// Input failed a documented precondition (bad parameter, shape mismatch,
// point outside the simplex, ...). Message names the violated bound.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Operation exists but is not defined for the given configuration
// (e.g. asking for a pointwise vector field of a set-valued dynamics).
class UnsupportedOperation : public std::logic_error {
 public:
  explicit UnsupportedOperation(const std::string& what) : std::logic_error(what) {}
};

class InsufficientData : public std::runtime_error {
 public:
  explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};

// Base of all integration failures. integrate_smooth raises the derived
// IntegrationError that carries the partial trajectory; the event-driven core
// throws this directly (there is no meaningful partial state to attach).
class IntegrationFailureSignal : public std::runtime_error {
 public:
  explicit IntegrationFailureSignal(const std::string& what) : std::runtime_error(what) {}
};

// SplitMix64. This exact generator is part of the reproducibility contract:
// seeded sweeps must produce identical samples on every platform.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed = 1) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in (0, 1]; never returns 0 so -log is always finite.
  double uniform() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53; }
};

// Uniform sample on the probability simplex via exponential spacings:
// draw n iid Exp(1) variates as -log(U) and normalize by their sum.
std::vector<double> simplex_sample(SplitMix64& rng, int n);

}  // namespace evoelim
