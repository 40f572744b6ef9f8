#pragma once

// Proxy kernels. Each one reproduces the dominant operation class and memory pattern of the
// corresponding production kernel, not its physics:
//   field      velocity-space weighted sum (loop; all-reduce in the distributed code)
//   stream     periodic finite-difference stencil along theta (loop)
//   shear      per-toroidal-mode radial shift with zero fill (loop, pure data movement)
//   collision  dense per-theta matrix-vector product over velocity space
//   nonlinear  dealiased Poisson bracket through 2D complex-to-real transforms

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gyroproxy/grid.hpp"
#include "gyroproxy/spectral.hpp"

namespace gyroproxy::kernels {

enum class Variant { original, optimized };
enum class KernelId { field, stream, shear, collision, nonlinear };

std::string_view to_string(Variant v);
std::string_view to_string(KernelId k);
Variant parse_variant(std::string_view name);
KernelId parse_kernel(std::string_view name);
std::vector<KernelId> all_kernels();

/// Velocity-space reduced moment, [theta][toroidal][radial].
class FieldMoment {
 public:
  FieldMoment(std::size_t n_theta, std::size_t n_toroidal, std::size_t n_radial);

  std::size_t n_theta() const noexcept { return n_theta_; }
  std::size_t n_toroidal() const noexcept { return n_toroidal_; }
  std::size_t n_radial() const noexcept { return n_radial_; }
  std::size_t plane_size() const noexcept { return n_toroidal_ * n_radial_; }

  complex& operator()(std::size_t th, std::size_t ky, std::size_t kx) noexcept {
    return values_[(th * n_toroidal_ + ky) * n_radial_ + kx];
  }
  const complex& operator()(std::size_t th, std::size_t ky, std::size_t kx) const noexcept {
    return values_[(th * n_toroidal_ + ky) * n_radial_ + kx];
  }

  std::span<complex> values() noexcept { return values_; }
  std::span<const complex> values() const noexcept { return values_; }

  /// The (toroidal, radial) plane at theta as a half spectrum.
  spectral::Spectrum2D slice(std::size_t th) const;

 private:
  std::size_t n_theta_;
  std::size_t n_toroidal_;
  std::size_t n_radial_;
  std::vector<complex> values_;
};

/// Real weights over velocity space, [species][energy][xi].
struct VelocityWeights {
  std::size_t n_xi = 0;
  std::size_t n_energy = 0;
  std::size_t n_species = 0;
  std::vector<double> values;

  static VelocityWeights constant(const GridShape& shape, double value);
};

/// One dense M x M real matrix per theta, M = xi * energy * species, stored [theta][row][col].
struct CollisionMatrices {
  std::size_t n_theta = 0;
  std::size_t dim = 0;
  std::vector<double> values;

  static CollisionMatrices identity(const GridShape& shape);
  static CollisionMatrices zero(const GridShape& shape);
};

/// out[th][ky][kx] = sum over (s, e, xi) of w[s][e][xi] * h[s][e][xi][th][ky][kx].
/// original: each output element reduces over velocity with strided reads.
/// optimized: contiguous plane updates, one velocity slice at a time.
/// Both add velocity terms in the same order, so the results agree bitwise.
FieldMoment field_kernel(const DistributionState& h, const VelocityWeights& weights,
                         Variant variant = Variant::optimized);

/// Periodic stencil along theta: out[th] = sum_d c[d] h[(th + d) mod n_theta] for
/// d in [-w/2, w/2]. original sweeps the whole state once per stencil tap, accumulating into
/// the output; optimized computes every output element in a single pass.
DistributionState stream_kernel(const DistributionState& h, std::span<const double> stencil, Variant variant);

/// out[...][ky][kx] = h[...][ky][kx + shift[ky]], zero outside [0, n_radial).
/// original materializes the shifted table in scratch storage, then copies it out;
/// optimized gathers directly.
DistributionState shear_kernel(const DistributionState& h, std::span<const long> shift, Variant variant);

/// For every (theta, ky, kx): velocity vector out = A[theta] * in.
DistributionState collision_kernel(const DistributionState& h, const CollisionMatrices& matrices);

/// Every (s, e, xi, theta) slice becomes bracket(h slice, phi slice at theta).
DistributionState nonlinear_kernel(const DistributionState& h, const FieldMoment& phi, const spectral::PlanPair& plans);

/// Padding plans used by each nonlinear variant: naive rounding for original, smooth sizes
/// for optimized.
spectral::PlanPair nonlinear_plans(const GridShape& shape, Variant variant);

/// FNV-1a over the bytes of the values.
std::uint64_t checksum(std::span<const complex> values) noexcept;

/// Largest elementwise |a - b| / max(|b|_max, tiny).
double max_relative_difference(std::span<const complex> a, std::span<const complex> b);

}  // namespace gyroproxy::kernels
