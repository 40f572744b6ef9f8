#include "gyroproxy/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "gyroproxy/errors.hpp"

namespace gyroproxy::kernels {

namespace {

void check_weights(const GridShape& shape, const VelocityWeights& w) {
  if (w.n_xi != shape.n_xi() || w.n_energy != shape.n_energy() || w.n_species != shape.n_species() ||
      w.values.size() != shape.velocity_size()) {
    throw SizeError("field_kernel: weights do not match the velocity dimensions of " + to_string(shape));
  }
}

void check_stencil(const GridShape& shape, std::span<const double> stencil) {
  if (stencil.size() % 2 == 0) {
    throw ParameterError("stream_kernel: stencil width must be odd, got " + std::to_string(stencil.size()));
  }
  if (stencil.size() > shape.n_theta()) {
    throw ParameterError("stream_kernel: stencil width " + std::to_string(stencil.size()) + " exceeds n_theta " +
                         std::to_string(shape.n_theta()));
  }
}

}  // namespace

std::string_view to_string(Variant v) { return v == Variant::original ? "original" : "optimized"; }

std::string_view to_string(KernelId k) {
  switch (k) {
    case KernelId::field: return "field";
    case KernelId::stream: return "stream";
    case KernelId::shear: return "shear";
    case KernelId::collision: return "collision";
    case KernelId::nonlinear: return "nonlinear";
  }
  return "?";
}

Variant parse_variant(std::string_view name) {
  if (name == "original") return Variant::original;
  if (name == "optimized") return Variant::optimized;
  throw ParameterError("unknown variant '" + std::string(name) + "'; valid variants: original, optimized");
}

KernelId parse_kernel(std::string_view name) {
  for (auto k : all_kernels()) {
    if (to_string(k) == name) return k;
  }
  throw ParameterError("unknown kernel '" + std::string(name) +
                       "'; valid kernels: field, stream, shear, collision, nonlinear");
}

std::vector<KernelId> all_kernels() {
  return {KernelId::field, KernelId::stream, KernelId::shear, KernelId::collision, KernelId::nonlinear};
}

FieldMoment::FieldMoment(std::size_t n_theta, std::size_t n_toroidal, std::size_t n_radial)
    : n_theta_(n_theta), n_toroidal_(n_toroidal), n_radial_(n_radial), values_(n_theta * n_toroidal * n_radial) {}

spectral::Spectrum2D FieldMoment::slice(std::size_t th) const {
  const auto begin = values_.begin() + static_cast<std::ptrdiff_t>(th * plane_size());
  return spectral::Spectrum2D(n_radial_, n_toroidal_,
                              std::vector<complex>(begin, begin + static_cast<std::ptrdiff_t>(plane_size())));
}

VelocityWeights VelocityWeights::constant(const GridShape& shape, double value) {
  return {shape.n_xi(), shape.n_energy(), shape.n_species(), std::vector<double>(shape.velocity_size(), value)};
}

CollisionMatrices CollisionMatrices::identity(const GridShape& shape) {
  auto out = zero(shape);
  for (std::size_t th = 0; th < out.n_theta; ++th) {
    for (std::size_t i = 0; i < out.dim; ++i) out.values[(th * out.dim + i) * out.dim + i] = 1.0;
  }
  return out;
}

CollisionMatrices CollisionMatrices::zero(const GridShape& shape) {
  const std::size_t m = shape.velocity_size();
  return {shape.n_theta(), m, std::vector<double>(shape.n_theta() * m * m, 0.0)};
}

FieldMoment field_kernel(const DistributionState& h, const VelocityWeights& weights, Variant variant) {
  const auto& shape = h.shape();
  check_weights(shape, weights);
  const std::size_t n_v = shape.velocity_size();
  const std::size_t n_th = shape.n_theta();
  const std::size_t plane = shape.plane_size();
  const std::size_t v_stride = n_th * plane;
  FieldMoment out(n_th, shape.n_toroidal(), shape.n_radial());
  const complex* in = h.values().data();
  complex* dst = out.values().data();
  const double* w = weights.values.data();

  if (variant == Variant::original) {
#pragma omp parallel for schedule(static)
    for (std::size_t th = 0; th < n_th; ++th) {
      for (std::size_t p = 0; p < plane; ++p) {
        complex acc{};
        for (std::size_t v = 0; v < n_v; ++v) acc += w[v] * in[v * v_stride + th * plane + p];
        dst[th * plane + p] = acc;
      }
    }
    return out;
  }

#pragma omp parallel for schedule(static)
  for (std::size_t th = 0; th < n_th; ++th) {
    complex* acc = dst + th * plane;
    for (std::size_t v = 0; v < n_v; ++v) {
      const complex* src = in + v * v_stride + th * plane;
      const double wv = w[v];
      for (std::size_t p = 0; p < plane; ++p) acc[p] += wv * src[p];
    }
  }
  return out;
}

DistributionState stream_kernel(const DistributionState& h, std::span<const double> stencil, Variant variant) {
  const auto& shape = h.shape();
  check_stencil(shape, stencil);
  const std::size_t n_th = shape.n_theta();
  const std::size_t plane = shape.plane_size();
  const std::size_t n_v = shape.velocity_size();
  const long half = static_cast<long>(stencil.size() / 2);
  DistributionState out(shape);
  const complex* in = h.values().data();
  complex* dst = out.values().data();
  auto wrap = [n_th](long th) {
    const long n = static_cast<long>(n_th);
    return static_cast<std::size_t>(((th % n) + n) % n);
  };

  if (variant == Variant::original) {
    for (long d = -half; d <= half; ++d) {
      const double c = stencil[static_cast<std::size_t>(d + half)];
#pragma omp parallel for schedule(static)
      for (std::size_t v = 0; v < n_v; ++v) {
        for (std::size_t th = 0; th < n_th; ++th) {
          const complex* src = in + (v * n_th + wrap(static_cast<long>(th) + d)) * plane;
          complex* acc = dst + (v * n_th + th) * plane;
          for (std::size_t p = 0; p < plane; ++p) acc[p] += c * src[p];
        }
      }
    }
    return out;
  }

#pragma omp parallel for schedule(static)
  for (std::size_t v = 0; v < n_v; ++v) {
    std::vector<const complex*> taps(stencil.size());
    for (std::size_t th = 0; th < n_th; ++th) {
      for (long d = -half; d <= half; ++d) {
        taps[static_cast<std::size_t>(d + half)] = in + (v * n_th + wrap(static_cast<long>(th) + d)) * plane;
      }
      complex* o = dst + (v * n_th + th) * plane;
      for (std::size_t p = 0; p < plane; ++p) {
        complex acc{};
        for (std::size_t t = 0; t < taps.size(); ++t) acc += stencil[t] * taps[t][p];
        o[p] = acc;
      }
    }
  }
  return out;
}

DistributionState shear_kernel(const DistributionState& h, std::span<const long> shift, Variant variant) {
  const auto& shape = h.shape();
  const std::size_t n_ky = shape.n_toroidal();
  const long n_kx = static_cast<long>(shape.n_radial());
  if (shift.size() != n_ky) {
    throw SizeError("shear_kernel: expected " + std::to_string(n_ky) + " shifts, got " + std::to_string(shift.size()));
  }
  for (long s : shift) {
    if (std::abs(s) > n_kx) throw ParameterError("shear_kernel: |shift| must not exceed n_radial");
  }
  const std::size_t rows = h.values().size() / static_cast<std::size_t>(n_kx);  // (s, e, xi, th, ky) rows
  DistributionState out(shape);
  const complex* in = h.values().data();
  complex* dst = out.values().data();

  auto gather_row = [&](std::size_t row, complex* target) {
    const long s = shift[row % n_ky];
    const complex* src = in + row * static_cast<std::size_t>(n_kx);
    for (long kx = 0; kx < n_kx; ++kx) {
      const long from = kx + s;
      target[kx] = (from >= 0 && from < n_kx) ? src[from] : complex{};
    }
  };

  if (variant == Variant::original) {
    std::vector<complex> table(h.values().size());
#pragma omp parallel for schedule(static)
    for (std::size_t row = 0; row < rows; ++row) gather_row(row, table.data() + row * static_cast<std::size_t>(n_kx));
    std::copy(table.begin(), table.end(), dst);
    return out;
  }

#pragma omp parallel for schedule(static)
  for (std::size_t row = 0; row < rows; ++row) gather_row(row, dst + row * static_cast<std::size_t>(n_kx));
  return out;
}

DistributionState collision_kernel(const DistributionState& h, const CollisionMatrices& matrices) {
  const auto& shape = h.shape();
  const std::size_t m = shape.velocity_size();
  const std::size_t n_th = shape.n_theta();
  if (matrices.dim != m || matrices.n_theta != n_th || matrices.values.size() != n_th * m * m) {
    throw SizeError("collision_kernel: expected " + std::to_string(n_th) + " matrices of size " + std::to_string(m) +
                    "x" + std::to_string(m));
  }
  const std::size_t plane = shape.plane_size();
  DistributionState out(shape);
  const complex* in = h.values().data();
  complex* dst = out.values().data();

#pragma omp parallel for collapse(2) schedule(static)
  for (std::size_t th = 0; th < n_th; ++th) {
    for (std::size_t row = 0; row < m; ++row) {
      const double* a = matrices.values.data() + (th * m + row) * m;
      complex* acc = dst + (row * n_th + th) * plane;
      for (std::size_t col = 0; col < m; ++col) {
        const double coeff = a[col];
        if (coeff == 0.0) continue;
        const complex* src = in + (col * n_th + th) * plane;
        for (std::size_t p = 0; p < plane; ++p) acc[p] += coeff * src[p];
      }
    }
  }
  return out;
}

spectral::PlanPair nonlinear_plans(const GridShape& shape, Variant variant) {
  return spectral::dealias_plans(shape.n_radial(), shape.n_toroidal(),
                                 variant == Variant::original ? spectral::PaddingScheme::naive
                                                              : spectral::PaddingScheme::smooth);
}

DistributionState nonlinear_kernel(const DistributionState& h, const FieldMoment& phi, const spectral::PlanPair& plans) {
  const auto& shape = h.shape();
  if (phi.n_theta() != shape.n_theta() || phi.n_toroidal() != shape.n_toroidal() || phi.n_radial() != shape.n_radial()) {
    throw SizeError("nonlinear_kernel: field moment does not match state " + to_string(shape));
  }
  spectral::check_dealias(plans, shape.n_radial(), shape.n_toroidal());
  const auto n_x = static_cast<std::size_t>(plans.x.n_padded);
  const auto n_y = static_cast<std::size_t>(plans.y.n_padded);
  const std::size_t n_th = shape.n_theta();
  const std::size_t plane = shape.plane_size();
  const std::size_t slices = shape.velocity_size() * n_th;

  std::vector<spectral::GradientFields> phi_gradients;
  phi_gradients.reserve(n_th);
  for (std::size_t th = 0; th < n_th; ++th) phi_gradients.push_back(spectral::gradient_fields(phi.slice(th), n_x, n_y));

  DistributionState out(shape);
  const complex* in = h.values().data();
  complex* dst = out.values().data();

#pragma omp parallel for schedule(dynamic)
  for (std::size_t slice = 0; slice < slices; ++slice) {
    const complex* src = in + slice * plane;
    spectral::Spectrum2D hs(shape.n_radial(), shape.n_toroidal(), std::vector<complex>(src, src + plane));
    const auto result =
        spectral::bracket(spectral::gradient_fields(hs, n_x, n_y), phi_gradients[slice % n_th], shape.n_radial(),
                          shape.n_toroidal());
    std::copy(result.coefficients().begin(), result.coefficients().end(), dst + slice * plane);
  }
  return out;
}

std::uint64_t checksum(std::span<const complex> values) noexcept {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (const auto& v : values) {
    for (double part : {v.real(), v.imag()}) {
      unsigned char bytes[sizeof(double)];
      std::memcpy(bytes, &part, sizeof(double));
      for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 0x100000001B3ULL;
      }
    }
  }
  return hash;
}

double max_relative_difference(std::span<const complex> a, std::span<const complex> b) {
  if (a.size() != b.size()) throw SizeError("max_relative_difference: length mismatch");
  double scale = 0.0;
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    scale = std::max(scale, std::abs(b[i]));
    diff = std::max(diff, std::abs(a[i] - b[i]));
  }
  return diff / std::max(scale, std::numeric_limits<double>::min());
}

}  // namespace gyroproxy::kernels
