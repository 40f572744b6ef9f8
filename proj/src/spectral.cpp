#include "gyroproxy/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "gyroproxy/errors.hpp"
#include "gyroproxy/fft.hpp"

namespace gyroproxy::spectral {

namespace {

std::string dims(std::size_t a, std::size_t b) { return std::to_string(a) + "x" + std::to_string(b); }

// table[m] = exp(sign 2 pi i m / n)
std::vector<complex> root_table(std::size_t n, double sign) {
  std::vector<complex> table(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
    table[m] = {std::cos(angle), std::sin(angle)};
  }
  return table;
}

// Mirrored ky rows contribute twice to the real field; ky == 0 and ky == n_y / 2 once.
double row_weight(std::size_t ky, std::size_t n_y) { return (ky == 0 || 2 * ky == n_y) ? 1.0 : 2.0; }

}  // namespace

Spectrum2D::Spectrum2D(std::size_t n_kx, std::size_t n_ky)
    : n_kx_(n_kx), n_ky_(n_ky), coefficients_(n_kx * n_ky) {
  if (n_kx == 0 || n_ky == 0) throw SizeError("spectrum extents must be >= 1");
}

Spectrum2D::Spectrum2D(std::size_t n_kx, std::size_t n_ky, std::vector<complex> coefficients)
    : n_kx_(n_kx), n_ky_(n_ky), coefficients_(std::move(coefficients)) {
  if (n_kx == 0 || n_ky == 0) throw SizeError("spectrum extents must be >= 1");
  if (coefficients_.size() != n_kx * n_ky) throw SizeError("spectrum coefficient count mismatch for " + dims(n_kx, n_ky));
}

std::size_t Spectrum2D::column(long kx) const noexcept {
  return kx >= 0 ? static_cast<std::size_t>(kx) : static_cast<std::size_t>(kx + static_cast<long>(n_kx_));
}

long Spectrum2D::wavenumber(std::size_t j) const noexcept {
  return j < n_kx_ - n_kx_ / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n_kx_);
}

bool Spectrum2D::all_finite() const noexcept {
  return std::all_of(coefficients_.begin(), coefficients_.end(),
                     [](const complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

RealField2D::RealField2D(std::size_t n_x, std::size_t n_y) : n_x_(n_x), n_y_(n_y), values_(n_x * n_y) {
  if (n_x == 0 || n_y == 0) throw SizeError("field extents must be >= 1");
}

RealField2D::RealField2D(std::size_t n_x, std::size_t n_y, std::vector<double> values)
    : n_x_(n_x), n_y_(n_y), values_(std::move(values)) {
  if (n_x == 0 || n_y == 0) throw SizeError("field extents must be >= 1");
  if (values_.size() != n_x * n_y) throw SizeError("field value count mismatch for " + dims(n_x, n_y));
}

Spectrum2D dft_oracle_2d(const RealField2D& field) {
  const std::size_t nx = field.n_x();
  const std::size_t ny = field.n_y();
  const auto wx = root_table(nx, -1.0);
  const auto wy = root_table(ny, -1.0);

  // along x: partial[y][kx column]
  std::vector<complex> partial(nx * ny);
  for (std::size_t y = 0; y < ny; ++y) {
    for (std::size_t j = 0; j < nx; ++j) {
      complex acc{};
      for (std::size_t x = 0; x < nx; ++x) acc += field.at(x, y) * wx[(j * x) % nx];
      partial[y * nx + j] = acc;
    }
  }
  Spectrum2D out(nx, ny / 2 + 1);
  for (std::size_t ky = 0; ky < out.n_ky(); ++ky) {
    for (std::size_t j = 0; j < nx; ++j) {
      complex acc{};
      for (std::size_t y = 0; y < ny; ++y) acc += partial[y * nx + j] * wy[(ky * y) % ny];
      out.coefficients()[ky * nx + j] = acc;
    }
  }
  return out;
}

RealField2D dft_oracle_inverse_2d(const Spectrum2D& spec, std::size_t n_x, std::size_t n_y) {
  if (n_x < spec.n_kx() || n_y < 2 * (spec.n_ky() - 1)) {
    throw SizeError("oracle inverse grid " + dims(n_x, n_y) + " too small for spectrum " +
                    dims(spec.n_kx(), spec.n_ky()));
  }
  const auto wx = root_table(n_x, 1.0);
  const auto wy = root_table(n_y, 1.0);
  RealField2D out(n_x, n_y);
  const double scale = 1.0 / static_cast<double>(n_x * n_y);
  for (std::size_t y = 0; y < n_y; ++y) {
    for (std::size_t x = 0; x < n_x; ++x) {
      double acc = 0.0;
      for (std::size_t ky = 0; ky < spec.n_ky(); ++ky) {
        complex row{};
        for (std::size_t j = 0; j < spec.n_kx(); ++j) {
          const long kx = spec.wavenumber(j);
          const std::size_t kx_mod = static_cast<std::size_t>((kx % static_cast<long>(n_x) + static_cast<long>(n_x))) % n_x;
          row += spec.coefficients()[ky * spec.n_kx() + j] * wx[(kx_mod * x) % n_x];
        }
        acc += row_weight(ky, n_y) * (row * wy[(ky * y) % n_y]).real();
      }
      out.at(x, y) = acc * scale;
    }
  }
  return out;
}

RealField2D to_real(const Spectrum2D& spec, std::size_t n_x, std::size_t n_y) {
  if (n_x < spec.n_kx() || n_y < 2 * (spec.n_ky() - 1) || n_y < 1) {
    throw SizeError("to_real: grid " + dims(n_x, n_y) + " too small for spectrum " + dims(spec.n_kx(), spec.n_ky()));
  }
  const auto plan_x = fft::cached_plan(n_x);
  const auto plan_y = fft::cached_plan(n_y);
  const std::size_t n_ky = spec.n_ky();

  // inverse along x for every retained ky row
  std::vector<complex> rows(n_ky * n_x);
  std::vector<complex> scratch(std::max(n_x, n_y));
  for (std::size_t ky = 0; ky < n_ky; ++ky) {
    std::span<complex> row(rows.data() + ky * n_x, n_x);
    for (std::size_t j = 0; j < spec.n_kx(); ++j) {
      const long kx = spec.wavenumber(j);
      row[kx >= 0 ? static_cast<std::size_t>(kx) : static_cast<std::size_t>(kx + static_cast<long>(n_x))] =
          spec.coefficients()[ky * spec.n_kx() + j];
    }
    plan_x->execute(row, fft::Direction::inverse, scratch);
  }

  RealField2D out(n_x, n_y);
  std::vector<complex> column(n_y);
  for (std::size_t x = 0; x < n_x; ++x) {
    std::fill(column.begin(), column.end(), complex{});
    for (std::size_t ky = 0; ky < n_ky; ++ky) {
      const complex v = rows[ky * n_x + x];
      column[ky] = v;
      if (ky != 0 && n_y - ky != ky) column[n_y - ky] = std::conj(v);
    }
    plan_y->execute(column, fft::Direction::inverse, scratch);
    for (std::size_t y = 0; y < n_y; ++y) out.at(x, y) = column[y].real();
  }
  return out;
}

RealField2D to_real(const Spectrum2D& spec, const padding::PaddedPlan& plan_x, const padding::PaddedPlan& plan_y) {
  return to_real(spec, static_cast<std::size_t>(plan_x.n_padded), static_cast<std::size_t>(plan_y.n_padded));
}

Spectrum2D to_spectrum(const RealField2D& field, std::size_t n_kx, std::size_t n_ky) {
  const std::size_t n_x = field.n_x();
  const std::size_t n_y = field.n_y();
  if (n_kx == 0 || n_ky == 0 || n_kx > n_x || n_ky > n_y / 2 + 1) {
    throw SizeError("to_spectrum: cannot truncate field " + dims(n_x, n_y) + " to " + dims(n_kx, n_ky) + " modes");
  }
  const auto plan_x = fft::cached_plan(n_x);
  const auto plan_y = fft::cached_plan(n_y);

  std::vector<complex> rows(n_y * n_x);
  std::vector<complex> scratch(std::max(n_x, n_y));
  for (std::size_t y = 0; y < n_y; ++y) {
    std::span<complex> row(rows.data() + y * n_x, n_x);
    for (std::size_t x = 0; x < n_x; ++x) row[x] = field.at(x, y);
    plan_x->execute(row, fft::Direction::forward, scratch);
  }

  Spectrum2D out(n_kx, n_ky);
  const double scale = 1.0 / static_cast<double>(n_x * n_y);
  std::vector<complex> column(n_y);
  for (std::size_t j = 0; j < n_kx; ++j) {
    const long kx = out.wavenumber(j);
    const std::size_t src = kx >= 0 ? static_cast<std::size_t>(kx) : static_cast<std::size_t>(kx + static_cast<long>(n_x));
    for (std::size_t y = 0; y < n_y; ++y) column[y] = rows[y * n_x + src];
    plan_y->execute(column, fft::Direction::forward, scratch);
    for (std::size_t ky = 0; ky < n_ky; ++ky) out.coefficients()[ky * n_kx + j] = column[ky] * scale;
  }
  return out;
}

Spectrum2D derivative_x(const Spectrum2D& spec) {
  Spectrum2D out(spec.n_kx(), spec.n_ky());
  const bool has_unpaired = spec.n_kx() % 2 == 0;
  const long unpaired = -static_cast<long>(spec.n_kx() / 2);
  for (std::size_t ky = 0; ky < spec.n_ky(); ++ky) {
    for (std::size_t j = 0; j < spec.n_kx(); ++j) {
      const long kx = spec.wavenumber(j);
      const std::size_t i = ky * spec.n_kx() + j;
      out.coefficients()[i] =
          (has_unpaired && kx == unpaired) ? complex{} : complex(0.0, static_cast<double>(kx)) * spec.coefficients()[i];
    }
  }
  return out;
}

Spectrum2D derivative_y(const Spectrum2D& spec) {
  Spectrum2D out(spec.n_kx(), spec.n_ky());
  for (std::size_t ky = 0; ky < spec.n_ky(); ++ky) {
    const complex factor(0.0, static_cast<double>(ky));
    for (std::size_t j = 0; j < spec.n_kx(); ++j) {
      const std::size_t i = ky * spec.n_kx() + j;
      out.coefficients()[i] = factor * spec.coefficients()[i];
    }
  }
  return out;
}

PlanPair dealias_plans(std::size_t n_kx, std::size_t n_ky, PaddingScheme scheme,
                       std::span<const std::uint64_t> allowed_primes) {
  if (scheme == PaddingScheme::naive) return {padding::naive_plan(n_kx), padding::naive_plan(2 * n_ky)};
  return {padding::plan_padded_size(n_kx, padding::kThreeHalves, allowed_primes),
          padding::plan_padded_size(2 * n_ky, padding::kThreeHalves, allowed_primes)};
}

void check_dealias(const PlanPair& plans, std::size_t n_kx, std::size_t n_ky) {
  const auto need_x = padding::dealias_minimum(n_kx);
  const auto need_y = padding::dealias_minimum(2 * n_ky);
  if (plans.x.n_padded < need_x || plans.y.n_padded < need_y) {
    throw SizeError("padded grid " + dims(plans.x.n_padded, plans.y.n_padded) + " violates the 3/2 rule for " +
                    dims(n_kx, n_ky) + " modes (needs at least " + dims(need_x, need_y) + ")");
  }
}

GradientFields gradient_fields(const Spectrum2D& spec, std::size_t n_x, std::size_t n_y) {
  return {to_real(derivative_x(spec), n_x, n_y), to_real(derivative_y(spec), n_x, n_y)};
}

Spectrum2D bracket(const GradientFields& f, const GradientFields& g, std::size_t n_kx, std::size_t n_ky) {
  const std::size_t n_x = f.dx.n_x();
  const std::size_t n_y = f.dx.n_y();
  for (const auto* field : {&f.dy, &g.dx, &g.dy}) {
    if (field->n_x() != n_x || field->n_y() != n_y) throw SizeError("bracket: gradient field grids differ");
  }
  RealField2D product(n_x, n_y);
  auto out = product.values();
  const auto fx = f.dx.values();
  const auto fy = f.dy.values();
  const auto gx = g.dx.values();
  const auto gy = g.dy.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fx[i] * gy[i] - fy[i] * gx[i];
  return to_spectrum(product, n_kx, n_ky);
}

Spectrum2D bracket(const Spectrum2D& f, const Spectrum2D& g, const PlanPair& plans) {
  if (f.n_kx() != g.n_kx() || f.n_ky() != g.n_ky()) {
    throw SizeError("bracket: operand shapes differ (" + dims(f.n_kx(), f.n_ky()) + " vs " + dims(g.n_kx(), g.n_ky()) +
                    ")");
  }
  check_dealias(plans, f.n_kx(), f.n_ky());
  const auto n_x = static_cast<std::size_t>(plans.x.n_padded);
  const auto n_y = static_cast<std::size_t>(plans.y.n_padded);
  return bracket(gradient_fields(f, n_x, n_y), gradient_fields(g, n_x, n_y), f.n_kx(), f.n_ky());
}

void make_hermitian(Spectrum2D& spec) {
  const long n = static_cast<long>(spec.n_kx());
  spec.at(0, 0) = spec.at(0, 0).real();
  for (long kx = 1; kx <= (n - 1) / 2; ++kx) spec.at(-kx, 0) = std::conj(spec.at(kx, 0));
  if (n % 2 == 0) spec.at(-(n / 2), 0) = 0.0;
}

double hermitian_defect(const Spectrum2D& spec) {
  const long n = static_cast<long>(spec.n_kx());
  double defect = std::abs(spec.at(0, 0).imag());
  for (long kx = 1; kx <= (n - 1) / 2; ++kx) {
    defect = std::max(defect, std::abs(spec.at(-kx, 0) - std::conj(spec.at(kx, 0))));
  }
  return defect;
}

Spectrum2D random_hermitian_spectrum(std::size_t n_kx, std::size_t n_ky, const CounterRng& rng) {
  Spectrum2D out(n_kx, n_ky);
  auto c = out.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = complex(rng.symmetric(2 * i), rng.symmetric(2 * i + 1));
  make_hermitian(out);
  return out;
}

}  // namespace gyroproxy::spectral
