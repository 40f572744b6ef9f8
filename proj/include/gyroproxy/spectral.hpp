#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "gyroproxy/grid.hpp"
#include "gyroproxy/padding.hpp"

namespace gyroproxy::spectral {

/// Half spectrum of a real 2D field: kx covers the signed range [-n_kx/2, n_kx/2) and ky
/// covers [0, n_ky). Storage is [ky][kx] with kx in transform order (nonnegative modes first,
/// then the negative ones), so a radial row of a DistributionState maps onto one ky row.
///
/// The real field represented by c is
///   u(x, y) = Re sum_kx c(kx, 0) e^{i kx x} + 2 Re sum_{ky>0} sum_kx c(kx, ky) e^{i (kx x + ky y)}
/// on the unit 2 pi box, i.e. every ky > 0 mode carries an implicit conjugate partner at -ky.
class Spectrum2D {
 public:
  Spectrum2D(std::size_t n_kx, std::size_t n_ky);
  Spectrum2D(std::size_t n_kx, std::size_t n_ky, std::vector<complex> coefficients);

  std::size_t n_kx() const noexcept { return n_kx_; }
  std::size_t n_ky() const noexcept { return n_ky_; }

  /// Storage column of signed mode kx.
  std::size_t column(long kx) const noexcept;
  /// Signed mode held in storage column j.
  long wavenumber(std::size_t j) const noexcept;

  complex& at(long kx, std::size_t ky) noexcept { return coefficients_[ky * n_kx_ + column(kx)]; }
  const complex& at(long kx, std::size_t ky) const noexcept { return coefficients_[ky * n_kx_ + column(kx)]; }

  std::span<complex> coefficients() noexcept { return coefficients_; }
  std::span<const complex> coefficients() const noexcept { return coefficients_; }

  bool all_finite() const noexcept;

 private:
  std::size_t n_kx_;
  std::size_t n_ky_;
  std::vector<complex> coefficients_;
};

/// Real samples on an n_x by n_y grid, stored [y][x].
class RealField2D {
 public:
  RealField2D(std::size_t n_x, std::size_t n_y);
  RealField2D(std::size_t n_x, std::size_t n_y, std::vector<double> values);

  std::size_t n_x() const noexcept { return n_x_; }
  std::size_t n_y() const noexcept { return n_y_; }

  double& at(std::size_t x, std::size_t y) noexcept { return values_[y * n_x_ + x]; }
  double at(std::size_t x, std::size_t y) const noexcept { return values_[y * n_x_ + x]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::size_t n_x_;
  std::size_t n_y_;
  std::vector<double> values_;
};

/// Direct-summation forward transform (unscaled), returned as the half spectrum with
/// n_kx = n_x and n_ky = n_y / 2 + 1. Shares no code with the fast transforms.
Spectrum2D dft_oracle_2d(const RealField2D& field);

/// Direct-summation inverse of a half spectrum onto an n_x by n_y grid, divided by n_x * n_y.
/// Rows ky > 0 are mirrored to -ky unless ky == n_y - ky.
RealField2D dft_oracle_inverse_2d(const Spectrum2D& spec, std::size_t n_x, std::size_t n_y);

/// Zero-embed the retained modes into an n_x by n_y grid and evaluate the real field
/// (no scaling, so a mode's amplitude does not depend on the grid size).
/// Requires n_x >= n_kx and n_y >= 2 (n_ky - 1).
RealField2D to_real(const Spectrum2D& spec, std::size_t n_x, std::size_t n_y);
RealField2D to_real(const Spectrum2D& spec, const padding::PaddedPlan& plan_x, const padding::PaddedPlan& plan_y);

/// Forward real-to-complex transform truncated to n_kx by n_ky retained modes and divided by
/// n_x * n_y, so to_spectrum(to_real(s)) == s on the retained modes.
Spectrum2D to_spectrum(const RealField2D& field, std::size_t n_kx, std::size_t n_ky);

/// i kx c, with the unpaired kx = -n_kx/2 column zeroed.
Spectrum2D derivative_x(const Spectrum2D& spec);
/// i ky c.
Spectrum2D derivative_y(const Spectrum2D& spec);

/// Padded transform sizes for a bracket on n_kx by n_ky retained modes. The x plan pads the
/// signed radial range n_kx; the y plan pads the full toroidal range 2 * n_ky.
struct PlanPair {
  padding::PaddedPlan x;
  padding::PaddedPlan y;
};

enum class PaddingScheme { smooth, naive };

PlanPair dealias_plans(std::size_t n_kx, std::size_t n_ky, PaddingScheme scheme = PaddingScheme::smooth,
                       std::span<const std::uint64_t> allowed_primes = {});

/// Throws SizeError unless the plans pad (n_kx, n_ky) by at least the 3/2 rule.
void check_dealias(const PlanPair& plans, std::size_t n_kx, std::size_t n_ky);

/// Real-space derivative fields of one operand, reusable across many brackets.
struct GradientFields {
  RealField2D dx;
  RealField2D dy;
};

GradientFields gradient_fields(const Spectrum2D& spec, std::size_t n_x, std::size_t n_y);

/// {f, g} = f_x g_y - f_y g_x evaluated pseudo-spectrally and truncated to n_kx by n_ky.
Spectrum2D bracket(const GradientFields& f, const GradientFields& g, std::size_t n_kx, std::size_t n_ky);

/// Dealiased Poisson bracket of two half spectra of identical shape.
Spectrum2D bracket(const Spectrum2D& f, const Spectrum2D& g, const PlanPair& plans);

/// Project the ky = 0 row onto Hermitian symmetry: real DC, c(-kx) = conj(c(kx)), and the
/// unpaired kx = -n_kx/2 entry zeroed.
void make_hermitian(Spectrum2D& spec);

/// Largest |c(-kx, 0) - conj(c(kx, 0))| over the paired ky = 0 entries, plus |Im c(0, 0)|.
double hermitian_defect(const Spectrum2D& spec);

/// Seeded spectrum with components uniform in [-1, 1), then made Hermitian.
Spectrum2D random_hermitian_spectrum(std::size_t n_kx, std::size_t n_ky, const CounterRng& rng);

}  // namespace gyroproxy::spectral
