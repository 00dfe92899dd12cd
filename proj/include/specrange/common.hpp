// Shared primitives: error types, compensated summation, deterministic RNG, grid builders.
#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#if defined(__FAST_MATH__)
#error "compensated summation requires strict IEEE arithmetic; do not build with -ffast-math"
#endif

namespace specrange {

using Complex = std::complex<double>;

// Bad caller input: malformed documents, violated preconditions on user-supplied data.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// An internal computation failed to meet its own accuracy contract.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Neumaier variant of Kahan summation. The carry is added once, on readout.
class StableSum {
 public:
  void add(double v) {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// mt19937_64 with hand-rolled output transforms. The engine's bit stream is
// pinned by the standard; std::normal_distribution is not, so Box-Muller is
// done here to keep identical streams across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0,1) with 53 significant bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal() {
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
  }

  Complex normal_complex() {
    double re = normal();
    double im = normal();
    return Complex(re, im) * std::sqrt(0.5);
  }

  std::vector<Complex> unit_vector(std::size_t dim);

 private:
  std::mt19937_64 engine_;
};

std::vector<double> linspace(double lo, double hi, std::size_t n);

// Geometric grid from lo to hi, both > 0, n >= 2.
std::vector<double> logspace(double lo, double hi, std::size_t n);

// Shortest decimal round-trip style output used by every CSV writer: 17
// significant digits.
std::string format_g17(double v);

}  // namespace specrange
