#ifndef ADCOVER_COMMON_HPP
#define ADCOVER_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace adcover {

/// Relative tolerance used by every numeric comparison in the library.
inline constexpr double kTol = 1e-9;

inline bool nearly_equal(double a, double b, double tol = kTol) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

inline bool nearly_leq(double a, double b, double tol = kTol) {
  return a <= b + tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

/// Raised when a solver cannot produce a feasible answer.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an exact solver is asked for more than its configured limits.
class LimitError : public std::runtime_error {
 public:
  explicit LimitError(const std::string& what) : std::runtime_error(what) {}
};

/// Deterministic pseudo-random source. mt19937_64 has a standard-mandated
/// output sequence, and the helpers below avoid std::*_distribution (whose
/// results vary across standard libraries), so seeded runs are reproducible
/// byte-for-byte on any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  /// Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next() % span);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool coin(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace adcover

#endif  // ADCOVER_COMMON_HPP
