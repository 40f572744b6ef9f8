#include "gyroproxy/fft.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "gyroproxy/errors.hpp"

namespace gyroproxy::fft {

namespace {

// exp(-2 pi i m / n) with m reduced to the first octant where possible.
complex unit_root(std::size_t m, std::size_t n) {
  m %= n;
  // exact values at the quarter points keep small transforms exact
  if (m == 0) return {1.0, 0.0};
  if (4 * m == n) return {0.0, -1.0};
  if (2 * m == n) return {-1.0, 0.0};
  if (4 * m == 3 * n) return {0.0, 1.0};
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

std::vector<std::size_t> split_radices(std::size_t n) {
  std::vector<std::size_t> radices;
  while (n % 4 == 0) {
    radices.push_back(4);
    n /= 4;
  }
  if (n % 2 == 0) {
    radices.push_back(2);
    n /= 2;
  }
  for (std::size_t p = 3; p <= n / p; p += 2) {
    while (n % p == 0) {
      radices.push_back(p);
      n /= p;
    }
  }
  if (n > 1) radices.push_back(n);
  return radices;
}

inline complex rotate_minus_i(complex z) { return {z.imag(), -z.real()}; }

}  // namespace

Plan::Plan(std::size_t n) : n_(n) {
  if (n == 0) throw SizeError("fft plan length must be >= 1");
  std::size_t l = 1;
  for (std::size_t p : split_radices(n)) {
    Pass pass{p, l, n / (p * l), {}, {}};
    const std::size_t length = p * l;
    pass.twiddles.resize(l * (p - 1));
    for (std::size_t k1 = 0; k1 < l; ++k1) {
      for (std::size_t j = 1; j < p; ++j) pass.twiddles[k1 * (p - 1) + (j - 1)] = unit_root(j * k1, length);
    }
    if (p != 2 && p != 3 && p != 4) {
      pass.roots.resize(p);
      for (std::size_t m = 0; m < p; ++m) pass.roots[m] = unit_root(m, p);
    }
    passes_.push_back(std::move(pass));
    l *= p;
  }
}

std::vector<std::size_t> Plan::radices() const {
  std::vector<std::size_t> out;
  for (const auto& pass : passes_) out.push_back(pass.radix);
  return out;
}

void Plan::run_pass(const Pass& pass, const complex* in, complex* out, Direction dir) const {
  const std::size_t p = pass.radix;
  const std::size_t l = pass.sub_length;
  const std::size_t r = pass.groups;
  const bool inverse = dir == Direction::inverse;
  auto twiddle = [&](std::size_t k1, std::size_t j) {
    const complex w = pass.twiddles[k1 * (p - 1) + (j - 1)];
    return inverse ? std::conj(w) : w;
  };

  if (p == 2) {
    for (std::size_t k1 = 0; k1 < l; ++k1) {
      const complex w1 = k1 ? twiddle(k1, 1) : complex{1.0, 0.0};
      const complex* src = in + k1 * r * 2;
      for (std::size_t s = 0; s < r; ++s) {
        const complex a0 = src[s];
        const complex a1 = src[r + s] * w1;
        out[k1 * r + s] = a0 + a1;
        out[(k1 + l) * r + s] = a0 - a1;
      }
    }
    return;
  }

  if (p == 4) {
    for (std::size_t k1 = 0; k1 < l; ++k1) {
      const complex w1 = k1 ? twiddle(k1, 1) : complex{1.0, 0.0};
      const complex w2 = k1 ? twiddle(k1, 2) : complex{1.0, 0.0};
      const complex w3 = k1 ? twiddle(k1, 3) : complex{1.0, 0.0};
      const complex* src = in + k1 * r * 4;
      for (std::size_t s = 0; s < r; ++s) {
        const complex a0 = src[s];
        const complex a1 = src[r + s] * w1;
        const complex a2 = src[2 * r + s] * w2;
        const complex a3 = src[3 * r + s] * w3;
        const complex t0 = a0 + a2;
        const complex t1 = a0 - a2;
        const complex t2 = a1 + a3;
        complex t3 = rotate_minus_i(a1 - a3);
        if (inverse) t3 = -t3;
        out[k1 * r + s] = t0 + t2;
        out[(k1 + l) * r + s] = t1 + t3;
        out[(k1 + 2 * l) * r + s] = t0 - t2;
        out[(k1 + 3 * l) * r + s] = t1 - t3;
      }
    }
    return;
  }

  if (p == 3) {
    const double half_sqrt3 = (inverse ? -0.5 : 0.5) * std::numbers::sqrt3;
    for (std::size_t k1 = 0; k1 < l; ++k1) {
      const complex w1 = k1 ? twiddle(k1, 1) : complex{1.0, 0.0};
      const complex w2 = k1 ? twiddle(k1, 2) : complex{1.0, 0.0};
      const complex* src = in + k1 * r * 3;
      for (std::size_t s = 0; s < r; ++s) {
        const complex a0 = src[s];
        const complex a1 = src[r + s] * w1;
        const complex a2 = src[2 * r + s] * w2;
        const complex sum = a1 + a2;
        const complex mid = a0 - 0.5 * sum;
        const complex rot = rotate_minus_i(a1 - a2) * half_sqrt3;
        out[k1 * r + s] = a0 + sum;
        out[(k1 + l) * r + s] = mid + rot;
        out[(k1 + 2 * l) * r + s] = mid - rot;
      }
    }
    return;
  }

  std::vector<complex> a(p);
  std::vector<complex> roots(pass.roots);
  if (inverse) {
    for (auto& z : roots) z = std::conj(z);
  }
  for (std::size_t k1 = 0; k1 < l; ++k1) {
    const complex* src = in + k1 * r * p;
    for (std::size_t s = 0; s < r; ++s) {
      a[0] = src[s];
      for (std::size_t j = 1; j < p; ++j) a[j] = k1 ? src[j * r + s] * twiddle(k1, j) : src[j * r + s];
      for (std::size_t k2 = 0; k2 < p; ++k2) {
        complex acc = a[0];
        std::size_t m = 0;
        for (std::size_t j = 1; j < p; ++j) {
          m += k2;
          if (m >= p) m -= p;
          acc += a[j] * roots[m];
        }
        out[(k1 + k2 * l) * r + s] = acc;
      }
    }
  }
}

void Plan::execute(std::span<complex> data, Direction dir, std::span<complex> scratch) const {
  if (data.size() != n_) throw SizeError("fft execute: data length does not match plan");
  if (scratch.size() < n_) throw SizeError("fft execute: scratch too small");
  complex* src = data.data();
  complex* dst = scratch.data();
  for (const auto& pass : passes_) {
    run_pass(pass, src, dst, dir);
    std::swap(src, dst);
  }
  if (src != data.data()) std::copy_n(src, n_, data.data());
}

void Plan::execute(std::span<complex> data, Direction dir) const {
  std::vector<complex> scratch(n_);
  execute(data, dir, scratch);
}

void Plan::execute_batch(std::span<complex> data, std::size_t count, Direction dir) const {
  if (data.size() != count * n_) throw SizeError("fft batch: data length does not match count * size");
  std::vector<complex> scratch(n_);
  for (std::size_t b = 0; b < count; ++b) execute(data.subspan(b * n_, n_), dir, scratch);
}

std::shared_ptr<const Plan> cached_plan(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::shared_ptr<const Plan>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const Plan>(n);
  return slot;
}

}  // namespace gyroproxy::fft
