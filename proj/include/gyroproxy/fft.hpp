#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace gyroproxy::fft {

using complex = std::complex<double>;

/// forward: X[k] = sum_j x[j] exp(-2 pi i jk/n), unscaled.
/// inverse: x[j] = sum_k X[k] exp(+2 pi i jk/n), also unscaled.
enum class Direction { forward, inverse };

/// Mixed-radix Stockham transform of one length.
///
/// The length is split into radix-4, 2 and 3 passes with dedicated butterflies; every other
/// prime factor, including large ones, goes through a generic O(p^2) butterfly. A length with
/// a large prime factor therefore costs far more than a nearby smooth length.
class Plan {
 public:
  explicit Plan(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  /// Radix of each pass, in execution order.
  std::vector<std::size_t> radices() const;

  /// Transform `data` in place. `scratch` must hold at least size() elements.
  void execute(std::span<complex> data, Direction dir, std::span<complex> scratch) const;
  void execute(std::span<complex> data, Direction dir) const;

  /// Transform `count` contiguous sequences of size() elements.
  void execute_batch(std::span<complex> data, std::size_t count, Direction dir) const;

 private:
  struct Pass {
    std::size_t radix;
    std::size_t sub_length;  // l: length of the transforms being combined
    std::size_t groups;      // r: n / (radix * l)
    std::vector<complex> twiddles;  // [k1][j-1] = exp(-2 pi i j k1 / (radix * l))
    std::vector<complex> roots;     // generic passes only: exp(-2 pi i m / radix)
  };

  void run_pass(const Pass& pass, const complex* in, complex* out, Direction dir) const;

  std::size_t n_;
  std::vector<Pass> passes_;
};

/// Shared immutable plan for length n, created on first use. Thread-safe.
std::shared_ptr<const Plan> cached_plan(std::size_t n);

}  // namespace gyroproxy::fft
