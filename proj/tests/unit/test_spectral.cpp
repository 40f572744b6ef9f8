#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gyroproxy/errors.hpp"
#include "gyroproxy/spectral.hpp"
#include "oracles/mode_sum.hpp"
#include "support/gen.hpp"

using namespace gyroproxy;
using namespace gyroproxy::spectral;

namespace {

double max_abs(std::span<const complex> v) {
  double m = 0.0;
  for (const auto& c : v) m = std::max(m, std::abs(c));
  return m;
}

double max_diff(std::span<const complex> a, std::span<const complex> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

RealField2D random_field(std::size_t nx, std::size_t ny, gen::Source& src) {
  return RealField2D(nx, ny, src.reals(nx * ny));
}

Spectrum2D random_spectrum(std::size_t n_kx, std::size_t n_ky, gen::Source& src) {
  Spectrum2D s(n_kx, n_ky, src.complexes(n_kx * n_ky));
  make_hermitian(s);
  return s;
}

std::vector<complex> to_vec(const Spectrum2D& s) { return {s.coefficients().begin(), s.coefficients().end()}; }

}  // namespace

TEST_CASE("storage columns follow transform order") {
  Spectrum2D s(6, 2);
  CHECK(s.wavenumber(0) == 0);
  CHECK(s.wavenumber(2) == 2);
  CHECK(s.wavenumber(3) == -3);
  CHECK(s.wavenumber(5) == -1);
  for (std::size_t j = 0; j < 6; ++j) CHECK(s.column(s.wavenumber(j)) == j);
  Spectrum2D odd(5, 1);
  CHECK(odd.wavenumber(2) == 2);
  CHECK(odd.wavenumber(3) == -2);
}

TEST_CASE("oracle transform on single modes") {
  RealField2D c(4, 4, std::vector<double>(16, 2.5));
  const auto s = dft_oracle_2d(c);
  CHECK(s.n_kx() == 4);
  CHECK(s.n_ky() == 3);
  CHECK(std::abs(s.at(0, 0) - complex(40.0)) < 1e-12);
  double rest = 0.0;
  for (std::size_t i = 1; i < s.coefficients().size(); ++i) rest = std::max(rest, std::abs(s.coefficients()[i]));
  CHECK(rest < 1e-12);

  const std::size_t nx = 8, ny = 4;
  RealField2D wave(nx, ny);
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t x = 0; x < nx; ++x) wave.at(x, y) = std::cos(2.0 * std::numbers::pi * x / nx);
  const auto w = dft_oracle_2d(wave);
  CHECK(std::abs(w.at(1, 0) - complex(16.0)) < 1e-12);
  CHECK(std::abs(w.at(-1, 0) - complex(16.0)) < 1e-12);
}

TEST_CASE("oracle round trip and Parseval") {
  gen::Source src(5);
  const auto f = random_field(8, 4, src);
  const auto back = dft_oracle_inverse_2d(dft_oracle_2d(f), 8, 4);
  CHECK(max_diff(back.values(), f.values()) < 1e-12);

  for (auto [nx, ny] : {std::pair{8, 4}, std::pair{9, 5}, std::pair{12, 6}}) {
    const auto g = random_field(nx, ny, src);
    const auto s = dft_oracle_2d(g);
    double energy = 0.0;
    for (double v : g.values()) energy += v * v;
    double spec = 0.0;
    for (std::size_t ky = 0; ky < s.n_ky(); ++ky) {
      const double weight = (ky == 0 || 2 * ky == static_cast<std::size_t>(ny)) ? 1.0 : 2.0;
      for (std::size_t j = 0; j < s.n_kx(); ++j) spec += weight * std::norm(s.coefficients()[ky * s.n_kx() + j]);
    }
    CHECK(std::abs(energy - spec / (nx * ny)) <= 1e-12 * energy);
  }
}

TEST_CASE("to_real") {
  const auto zero = to_real(Spectrum2D(8, 4), 12, 12);
  for (double v : zero.values()) CHECK(v == 0.0);

  // padding must not rescale modes
  Spectrum2D one(48, 8);
  one.at(1, 0) = 1.0;
  const auto plans = dealias_plans(48, 8);
  CHECK(plans.x.n_padded == 72);
  const auto wave = to_real(one, plans.x, plans.y);
  double err = 0.0;
  for (std::size_t y = 0; y < wave.n_y(); ++y)
    for (std::size_t x = 0; x < 72; ++x) err = std::max(err, std::abs(wave.at(x, y) - std::cos(2 * std::numbers::pi * x / 72.0)));
  CHECK(err < 1e-14);

  gen::Source src(6);
  for (int t = 0; t < 10; ++t) {
    const auto s = random_spectrum(16, 8, src);
    const auto fast = to_real(s, 24, 24);
    const auto slow = dft_oracle_inverse_2d(s, 24, 24);
    auto scaled = slow;
    for (auto& v : scaled.values()) v *= 24.0 * 24.0;
    CHECK(max_diff(fast.values(), scaled.values()) <= 1e-12 * max_abs(s.coefficients()) * 24 * 24);
  }
  CHECK_THROWS_AS(to_real(Spectrum2D(16, 8), 15, 24), SizeError);
  CHECK_THROWS_AS(to_real(Spectrum2D(16, 8), 16, 13), SizeError);
}

TEST_CASE("to_spectrum") {
  gen::Source src(7);
  for (int t = 0; t < 10; ++t) {
    const auto s = random_spectrum(16, 8, src);
    const auto round = to_spectrum(to_real(s, 24, 24), 16, 8);
    CHECK(max_diff(round.coefficients(), s.coefficients()) <= 1e-12 * max_abs(s.coefficients()));
  }
  const auto c = to_spectrum(RealField2D(6, 6, std::vector<double>(36, -1.5)), 6, 4);
  CHECK(std::abs(c.at(0, 0) - complex(-1.5)) < 1e-15);
  CHECK(max_abs(c.coefficients().subspan(1)) < 1e-15);

  const auto f = random_field(10, 6, src);
  const auto fast = to_spectrum(f, 6, 3);
  const auto full = dft_oracle_2d(f);
  for (std::size_t ky = 0; ky < 3; ++ky)
    for (long kx = -3; kx < 3; ++kx) CHECK(std::abs(fast.at(kx, ky) - full.at(kx, ky) / 60.0) < 1e-14);
  CHECK_THROWS_AS(to_spectrum(f, 11, 3), SizeError);
  CHECK_THROWS_AS(to_spectrum(f, 6, 5), SizeError);
}

TEST_CASE("derivatives multiply by i k and drop the unpaired radial column") {
  Spectrum2D s(4, 3, std::vector<complex>(12, complex(1.0, 0.0)));
  const auto dx = derivative_x(s);
  const auto dy = derivative_y(s);
  CHECK(dx.at(1, 2) == complex(0.0, 1.0));
  CHECK(dx.at(-1, 0) == complex(0.0, -1.0));
  CHECK(dx.at(-2, 1) == complex(0.0, 0.0));
  CHECK(dy.at(-2, 2) == complex(0.0, 2.0));
  CHECK(dy.at(1, 0) == complex(0.0, 0.0));
}

TEST_CASE("bracket of the two lowest modes against a hand derivation") {
  // f = 2 cos x, g = 2 cos y  =>  {f, g} = 4 sin x sin y = -2 cos(x + y) + 2 cos(x - y)
  Spectrum2D f(8, 4), g(8, 4);
  f.at(1, 0) = 1.0;
  f.at(-1, 0) = 1.0;
  g.at(0, 1) = 1.0;
  const auto b = bracket(f, g, dealias_plans(8, 4));
  Spectrum2D expected(8, 4);
  expected.at(1, 1) = -1.0;
  expected.at(-1, 1) = 1.0;
  CHECK(max_diff(b.coefficients(), expected.coefficients()) < 1e-14);
  CHECK(max_diff(to_vec(b), oracle::bracket(to_vec(f), to_vec(g), 8, 4)) < 1e-14);
}

TEST_CASE("bracket equals the quadratic mode-sum over random spectra") {
  gen::Source src(8);
  for (auto [nkx, nky] : {std::pair{4, 2}, std::pair{6, 3}, std::pair{7, 4}, std::pair{16, 8}, std::pair{15, 5}}) {
    for (int t = 0; t < 10; ++t) {
      CAPTURE(nkx);
      CAPTURE(nky);
      const auto f = random_spectrum(nkx, nky, src);
      const auto g = random_spectrum(nkx, nky, src);
      const auto fast = bracket(f, g, dealias_plans(nkx, nky));
      const auto slow = oracle::bracket(to_vec(f), to_vec(g), nkx, nky);
      CHECK(max_diff(fast.coefficients(), slow) <= 1e-12 * max_abs(slow));
    }
  }
}

TEST_CASE("bracket is exact even when the ky = 0 row is not Hermitian") {
  gen::Source src(9);
  const Spectrum2D f(8, 4, src.complexes(32));
  const Spectrum2D g(8, 4, src.complexes(32));
  const auto fast = bracket(f, g, dealias_plans(8, 4));
  const auto slow = oracle::bracket(to_vec(f), to_vec(g), 8, 4);
  CHECK(max_diff(fast.coefficients(), slow) <= 1e-12 * max_abs(slow));
}

TEST_CASE("bracket properties") {
  gen::Source src(10);
  const auto plans = dealias_plans(16, 8);
  for (int t = 0; t < 20; ++t) {
    const auto f = random_spectrum(16, 8, src);
    const auto g = random_spectrum(16, 8, src);
    const auto h = random_spectrum(16, 8, src);
    const double a = src.real(), b = src.real();

    CHECK(max_abs(bracket(f, f, plans).coefficients()) <= 1e-12);

    Spectrum2D mix(16, 8);
    for (std::size_t i = 0; i < mix.coefficients().size(); ++i) {
      mix.coefficients()[i] = a * f.coefficients()[i] + b * h.coefficients()[i];
    }
    const auto lhs = bracket(mix, g, plans);
    const auto bf = bracket(f, g, plans);
    const auto bh = bracket(h, g, plans);
    std::vector<complex> rhs(lhs.coefficients().size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = a * bf.coefficients()[i] + b * bh.coefficients()[i];
    CHECK(max_diff(lhs.coefficients(), rhs) <= 1e-12 * max_abs(rhs));

    // antisymmetry and reality
    const auto bg = bracket(g, f, plans);
    std::vector<complex> neg(bg.coefficients().size());
    for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -bg.coefficients()[i];
    CHECK(max_diff(bf.coefficients(), neg) <= 1e-12 * max_abs(neg));
    CHECK(hermitian_defect(bf) <= 1e-12 * max_abs(bf.coefficients()));

    // any larger smooth padding gives the same answer
    const PlanPair wide{padding::plan_padded_size(plans.x.n_padded + 5, {1, 1}),
                        padding::plan_padded_size(plans.y.n_padded + 3, {1, 1})};
    const auto bw = bracket(f, g, wide);
    CHECK(max_diff(bw.coefficients(), bf.coefficients()) <= 1e-12 * max_abs(bf.coefficients()));
  }
}

TEST_CASE("bracket rejects mismatched shapes and under-padded plans") {
  CHECK_THROWS_AS(bracket(Spectrum2D(8, 4), Spectrum2D(8, 5), dealias_plans(8, 5)), SizeError);
  const PlanPair tight{padding::plan_padded_size(8, {1, 1}), padding::plan_padded_size(8, {1, 1})};
  CHECK_THROWS_AS(bracket(Spectrum2D(8, 4), Spectrum2D(8, 4), tight), SizeError);
}

TEST_CASE("make_hermitian") {
  gen::Source src(11);
  Spectrum2D s(6, 2, src.complexes(12));
  CHECK(hermitian_defect(s) > 0.0);
  make_hermitian(s);
  CHECK(hermitian_defect(s) == 0.0);
  CHECK(s.at(-3, 0) == complex(0.0));
  // a Hermitian spectrum becomes a real field whose transform gives it back
  const auto back = to_spectrum(to_real(s, 6, 4), 6, 2);
  CHECK(max_diff(back.coefficients(), s.coefficients()) < 1e-14);
}
