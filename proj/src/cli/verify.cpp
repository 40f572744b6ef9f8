#include "gyroproxy/cli/verify.hpp"

#include <algorithm>
#include <cmath>

#include "gyroproxy/kernels.hpp"
#include "gyroproxy/padding.hpp"
#include "gyroproxy/spectral.hpp"
#include "gyroproxy/timing.hpp"

namespace gyroproxy::cli {

namespace {

using kernels::Variant;
using spectral::RealField2D;
using spectral::Spectrum2D;

double max_abs(std::span<const complex> v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

double max_abs_difference(std::span<const complex> a, std::span<const complex> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

RealField2D random_field(std::size_t nx, std::size_t ny, const CounterRng& rng) {
  RealField2D f(nx, ny);
  auto v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = rng.symmetric(i);
  return f;
}

// sum over the full spectrum of |F|^2, reconstructed from the half spectrum
double full_spectrum_energy(const Spectrum2D& s, std::size_t n_y) {
  double total = 0.0;
  for (std::size_t ky = 0; ky < s.n_ky(); ++ky) {
    const double weight = (ky == 0 || 2 * ky == n_y) ? 1.0 : 2.0;
    for (std::size_t j = 0; j < s.n_kx(); ++j) total += weight * std::norm(s.coefficients()[ky * s.n_kx() + j]);
  }
  return total;
}

void padding_suite(std::vector<VerifyRow>& rows) {
  const auto primes = padding::default_primes();
  double violations = 0.0;
  double worst_overhead = 0.0;
  for (std::uint64_t n = 1; n <= 4096; ++n) {
    const auto plan = padding::plan_padded_size(n, padding::kThreeHalves, primes);
    bool ok = plan.n_padded >= plan.n_min && plan.n_min >= plan.n_logical && padding::is_smooth(plan.n_padded, primes);
    for (auto m = plan.n_min; ok && m < plan.n_padded; ++m) ok = !padding::is_smooth(m, primes);
    if (!ok) violations += 1.0;
    if (n >= 8) {
      worst_overhead = std::max(worst_overhead, static_cast<double>(plan.n_padded) / static_cast<double>(plan.n_min));
    }
  }
  rows.push_back({"padding", "minimal_smooth_1_4096", violations, 0.0});
  rows.push_back({"padding", "overhead_ratio_8_4096", worst_overhead, 1.25});
}

void spectral_suite(const VerifyOptions& opt, std::vector<VerifyRow>& rows) {
  double roundtrip = 0.0;
  double parseval = 0.0;
  double oracle = 0.0;
  double antisymmetry = 0.0;
  double compat = 0.0;
  const CounterRng root(opt.seed);
  for (std::size_t k = 0; k < opt.seeds; ++k) {
    const auto rng = root.split(100 + k);

    const auto field = random_field(72, 72, rng.split(0));
    const auto spec = spectral::to_spectrum(field, 72, 37);
    const auto back = spectral::to_real(spec, 72, 72);
    double diff = 0.0;
    double ref = 0.0;
    for (std::size_t i = 0; i < field.values().size(); ++i) {
      diff = std::max(diff, std::abs(back.values()[i] - field.values()[i]));
      ref = std::max(ref, std::abs(field.values()[i]));
    }
    roundtrip = std::max(roundtrip, diff / ref);

    const auto unscaled = spectral::dft_oracle_2d(field);
    double energy = 0.0;
    for (double v : field.values()) energy += v * v;
    const double spectral_energy = full_spectrum_energy(unscaled, 72) / (72.0 * 72.0);
    parseval = std::max(parseval, std::abs(energy - spectral_energy) / energy);

    const auto small = random_field(8, 4, rng.split(1));
    const auto fast = spectral::to_spectrum(small, 8, 3);
    auto direct = spectral::dft_oracle_2d(small);
    for (auto& c : direct.coefficients()) c /= 32.0;
    oracle = std::max(oracle, max_abs_difference(fast.coefficients(), direct.coefficients()) /
                                  max_abs(direct.coefficients()));

    const auto f = spectral::random_hermitian_spectrum(16, 8, rng.split(2));
    const auto g = spectral::random_hermitian_spectrum(16, 8, rng.split(3));
    const auto plans = spectral::dealias_plans(16, 8);
    antisymmetry = std::max(antisymmetry, max_abs(spectral::bracket(f, f, plans).coefficients()));

    const auto base = spectral::bracket(f, g, plans);
    spectral::PlanPair larger{padding::plan_padded_size(plans.x.n_padded + 1, {1, 1}),
                              padding::plan_padded_size(plans.y.n_padded + 1, {1, 1})};
    const auto wide = spectral::bracket(f, g, larger);
    compat = std::max(compat, max_abs_difference(base.coefficients(), wide.coefficients()) / max_abs(base.coefficients()));
  }
  rows.push_back({"spectral", "roundtrip_72x72", roundtrip, 1e-12});
  rows.push_back({"spectral", "parseval_72x72", parseval, 1e-12});
  rows.push_back({"spectral", "fast_vs_direct_8x4", oracle, 1e-12});
  rows.push_back({"spectral", "bracket_self_zero_16x8", antisymmetry, 1e-12});
  rows.push_back({"spectral", "bracket_larger_padding_16x8", compat, 1e-12});
}

void kernel_suite(const VerifyOptions& opt, std::vector<VerifyRow>& rows) {
  const auto shape = make_case(opt.case_name);
  double field = 0.0;
  double stream = 0.0;
  double shear = 0.0;
  double collision = 0.0;
  double nonlinear = 0.0;
  double nonlinear_self = 0.0;
  for (std::size_t k = 0; k < opt.seeds; ++k) {
    const auto in = make_kernel_inputs(shape, Seed{opt.seed.value + k});

    field = std::max(field, kernels::max_relative_difference(
                                kernels::field_kernel(in.h, in.weights, Variant::optimized).values(),
                                kernels::field_kernel(in.h, in.weights, Variant::original).values()));
    stream = std::max(stream, kernels::max_relative_difference(
                                  kernels::stream_kernel(in.h, in.stencil, Variant::optimized).values(),
                                  kernels::stream_kernel(in.h, in.stencil, Variant::original).values()));
    const auto a = kernels::shear_kernel(in.h, in.shifts, Variant::optimized);
    const auto b = kernels::shear_kernel(in.h, in.shifts, Variant::original);
    shear = std::max(shear, max_abs_difference(a.values(), b.values()));

    const auto same = kernels::collision_kernel(in.h, kernels::CollisionMatrices::identity(shape));
    collision = std::max(collision, max_abs_difference(same.values(), in.h.values()));

    nonlinear = std::max(nonlinear, kernels::max_relative_difference(
                                        kernels::nonlinear_kernel(in.h, in.phi, kernels::nonlinear_plans(shape, Variant::optimized)).values(),
                                        kernels::nonlinear_kernel(in.h, in.phi, kernels::nonlinear_plans(shape, Variant::original)).values()));

    // every velocity slice equal to phi: the bracket vanishes
    DistributionState mirror(shape);
    const std::size_t plane = shape.plane_size();
    auto mv = mirror.values();
    for (std::size_t i = 0; i < mv.size(); i += plane * shape.n_theta()) {
      std::copy(in.phi.values().begin(), in.phi.values().end(), mv.begin() + static_cast<std::ptrdiff_t>(i));
    }
    const auto zero = kernels::nonlinear_kernel(mirror, in.phi, kernels::nonlinear_plans(shape, Variant::optimized));
    nonlinear_self = std::max(nonlinear_self, max_abs(zero.values()) / std::max(1.0, max_abs(in.phi.values())));
  }
  rows.push_back({"kernels", "field_variants", field, 1e-13});
  rows.push_back({"kernels", "stream_variants", stream, 1e-13});
  rows.push_back({"kernels", "shear_variants_exact", shear, 0.0});
  rows.push_back({"kernels", "collision_identity", collision, 0.0});
  rows.push_back({"kernels", "nonlinear_padding_schemes", nonlinear, 1e-12});
  rows.push_back({"kernels", "nonlinear_self_bracket", nonlinear_self, 1e-12});
}

}  // namespace

std::vector<VerifyRow> run_verification(const VerifyOptions& options) {
  make_case(options.case_name);  // reject unknown names before any work
  std::vector<VerifyRow> rows;
  padding_suite(rows);
  spectral_suite(options, rows);
  kernel_suite(options, rows);
  return rows;
}

}  // namespace gyroproxy::cli
