#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gyroproxy/errors.hpp"
#include "gyroproxy/kernels.hpp"
#include "gyroproxy/timing.hpp"
#include "oracles/loops.hpp"
#include "oracles/mode_sum.hpp"
#include "support/gen.hpp"

using namespace gyroproxy;
using namespace gyroproxy::kernels;

namespace {

oracle::Dims dims_of(const GridShape& s) {
  return {s.n_radial(), s.n_toroidal(), s.n_theta(), s.n_xi(), s.n_energy(), s.n_species()};
}

std::vector<complex> vec(std::span<const complex> v) { return {v.begin(), v.end()}; }

double rel(std::span<const complex> a, std::span<const complex> b) { return max_relative_difference(a, b); }

DistributionState filled(const GridShape& shape, complex value) {
  return DistributionState(shape, std::vector<complex>(shape.element_count(), value));
}

const GridShape kDesk = make_case("sh03b-desk");
const GridShape kSmall(6, 4, 5, 2, 3, 2);

}  // namespace

TEST_CASE("field kernel") {
  CHECK(rel(field_kernel(DistributionState(kSmall), VelocityWeights::constant(kSmall, 1.0)).values(),
            FieldMoment(5, 4, 6).values()) == 0.0);

  const auto ones = field_kernel(filled(kDesk, 1.0), VelocityWeights::constant(kDesk, 1.0));
  for (const auto& v : ones.values()) REQUIRE(v == complex(6.0 * 4 * 3));

  const auto in = make_kernel_inputs(kDesk, Seed{7});
  const auto expect = oracle::field(dims_of(kDesk), vec(in.h.values()), in.weights.values);
  for (auto variant : {Variant::original, Variant::optimized}) {
    CHECK(rel(field_kernel(in.h, in.weights, variant).values(), expect) <= 1e-13);
  }
  CHECK(field_kernel(in.h, in.weights, Variant::original).values()[17] ==
        field_kernel(in.h, in.weights, Variant::optimized).values()[17]);

  VelocityWeights bad = in.weights;
  bad.n_xi += 1;
  CHECK_THROWS_AS(field_kernel(in.h, bad), SizeError);
}

TEST_CASE("stream kernel") {
  const auto h = random_state(kSmall, Seed{3});
  const std::vector<double> identity{1.0};
  for (auto variant : {Variant::original, Variant::optimized}) {
    CHECK(stream_kernel(h, identity, variant) == h);
    const auto flat = stream_kernel(filled(kSmall, {2.0, -1.0}), std::vector<double>{-0.5, 0.0, 0.5}, variant);
    for (const auto& v : flat.values()) REQUIRE(std::abs(v) < 1e-15);
    CHECK_THROWS_AS(stream_kernel(h, std::vector<double>{0.5, 0.5}, variant), ParameterError);
    CHECK_THROWS_AS(stream_kernel(h, std::vector<double>(7, 1.0), variant), ParameterError);
  }

  const auto stencil = default_stencil(kDesk.n_theta());
  CHECK(stencil.size() == 5);
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto in = random_state(kDesk, Seed{seed});
    const auto expect = oracle::stream(dims_of(kDesk), vec(in.values()), stencil);
    CHECK(rel(stream_kernel(in, stencil, Variant::original).values(), expect) <= 1e-13);
    CHECK(rel(stream_kernel(in, stencil, Variant::optimized).values(), expect) <= 1e-13);
  }
}

TEST_CASE("shear kernel") {
  const auto h = random_state(kSmall, Seed{4});
  for (auto variant : {Variant::original, Variant::optimized}) {
    CHECK(shear_kernel(h, std::vector<long>(4, 0), variant) == h);
    const auto gone = shear_kernel(h, std::vector<long>(4, 6), variant);
    for (const auto& v : gone.values()) REQUIRE(v == complex{});
    CHECK(shear_kernel(h, std::vector<long>(4, -6), variant) == DistributionState(kSmall));
    CHECK_THROWS_AS(shear_kernel(h, std::vector<long>(4, 7), variant), ParameterError);
    CHECK_THROWS_AS(shear_kernel(h, std::vector<long>(3, 0), variant), SizeError);
  }

  gen::Source src(11);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto in = random_state(kDesk, Seed{seed});
    std::vector<long> shift(kDesk.n_toroidal());
    for (auto& s : shift) s = src.integer(-3, 3);
    const auto expect = oracle::shear(dims_of(kDesk), vec(in.values()), shift);
    const auto a = shear_kernel(in, shift, Variant::original);
    const auto b = shear_kernel(in, shift, Variant::optimized);
    CHECK(vec(a.values()) == expect);
    CHECK(vec(b.values()) == expect);
    CHECK(checksum(a.values()) == checksum(b.values()));
  }
}

TEST_CASE("collision kernel") {
  const auto h = random_state(kSmall, Seed{5});
  CHECK(collision_kernel(h, CollisionMatrices::identity(kSmall)) == h);
  CHECK(collision_kernel(h, CollisionMatrices::zero(kSmall)) == DistributionState(kSmall));

  const auto in = make_kernel_inputs(kDesk, Seed{9});
  const auto expect = oracle::collision(dims_of(kDesk), vec(in.h.values()), in.collision.values);
  CHECK(rel(collision_kernel(in.h, in.collision).values(), expect) <= 1e-12);

  auto bad = CollisionMatrices::identity(kSmall);
  bad.dim -= 1;
  CHECK_THROWS_AS(collision_kernel(h, bad), SizeError);
}

TEST_CASE("linearity of the linear kernels") {
  gen::Source src(12);
  const auto in = make_kernel_inputs(kSmall, Seed{21});
  const auto h1 = random_state(kSmall, Seed{22});
  const auto h2 = random_state(kSmall, Seed{23});
  for (int trial = 0; trial < 5; ++trial) {
    const double a = src.real(), b = src.real();
    DistributionState mix(kSmall);
    for (std::size_t i = 0; i < mix.values().size(); ++i) mix.values()[i] = a * h1.values()[i] + b * h2.values()[i];
    auto combine = [&](std::span<const complex> x, std::span<const complex> y) {
      std::vector<complex> out(x.size());
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x[i] + b * y[i];
      return out;
    };
    CHECK(rel(field_kernel(mix, in.weights).values(),
              combine(field_kernel(h1, in.weights).values(), field_kernel(h2, in.weights).values())) <= 1e-12);
    for (auto variant : {Variant::original, Variant::optimized}) {
      CHECK(rel(stream_kernel(mix, in.stencil, variant).values(),
                combine(stream_kernel(h1, in.stencil, variant).values(), stream_kernel(h2, in.stencil, variant).values())) <=
            1e-12);
      CHECK(rel(shear_kernel(mix, in.shifts, variant).values(),
                combine(shear_kernel(h1, in.shifts, variant).values(), shear_kernel(h2, in.shifts, variant).values())) <=
            1e-12);
    }
    CHECK(rel(collision_kernel(mix, in.collision).values(),
              combine(collision_kernel(h1, in.collision).values(), collision_kernel(h2, in.collision).values())) <= 1e-12);
  }
}

TEST_CASE("nonlinear kernel") {
  const GridShape shape(16, 8, 2, 2, 1, 1);
  const auto in = make_kernel_inputs(shape, Seed{13});
  const auto plans = nonlinear_plans(shape, Variant::optimized);

  const FieldMoment zero_phi(2, 8, 16);
  const auto none = nonlinear_kernel(in.h, zero_phi, plans);
  for (const auto& v : none.values()) REQUIRE(v == complex{});

  const auto out = nonlinear_kernel(in.h, in.phi, plans);
  const std::size_t plane = shape.plane_size();
  for (std::size_t slice = 0; slice < shape.velocity_size() * shape.n_theta(); ++slice) {
    std::vector<complex> hs(in.h.values().begin() + slice * plane, in.h.values().begin() + (slice + 1) * plane);
    const auto ph = in.phi.slice(slice % shape.n_theta());
    const auto expect = oracle::bracket(hs, vec(ph.coefficients()), 16, 8);
    CHECK(rel(std::span<const complex>(out.values()).subspan(slice * plane, plane), expect) <= 1e-12);
  }

  // slices equal to phi bracket to zero
  DistributionState mirror(shape);
  for (std::size_t slice = 0; slice < 4; ++slice) {
    const auto ph = in.phi.slice(slice % 2);
    std::copy(ph.coefficients().begin(), ph.coefficients().end(), mirror.values().begin() + slice * plane);
  }
  const auto self = nonlinear_kernel(mirror, in.phi, plans);
  for (const auto& v : self.values()) REQUIRE(std::abs(v) <= 1e-12);

  // Hermitian slices in, Hermitian slices out
  DistributionState herm(shape);
  const CounterRng rng(Seed{14});
  FieldMoment hphi(2, 8, 16);
  for (std::size_t slice = 0; slice < 4; ++slice) {
    const auto s = spectral::random_hermitian_spectrum(16, 8, rng.split(slice));
    std::copy(s.coefficients().begin(), s.coefficients().end(), herm.values().begin() + slice * plane);
  }
  for (std::size_t th = 0; th < 2; ++th) {
    const auto s = spectral::random_hermitian_spectrum(16, 8, rng.split(10 + th));
    std::copy(s.coefficients().begin(), s.coefficients().end(), hphi.values().begin() + th * plane);
  }
  const auto hout = nonlinear_kernel(herm, hphi, plans);
  for (std::size_t slice = 0; slice < 4; ++slice) {
    std::vector<complex> c(hout.values().begin() + slice * plane, hout.values().begin() + (slice + 1) * plane);
    CHECK(spectral::hermitian_defect(spectral::Spectrum2D(16, 8, c)) <= 1e-12);
  }

  CHECK_THROWS_AS(nonlinear_kernel(in.h, FieldMoment(2, 8, 15), plans), SizeError);
  const spectral::PlanPair tight{padding::plan_padded_size(16, {1, 1}), padding::plan_padded_size(16, {1, 1})};
  CHECK_THROWS_AS(nonlinear_kernel(in.h, in.phi, tight), SizeError);
}

TEST_CASE("nonlinear variants use different paddings but agree") {
  // two velocity points, so phi is not just a multiple of each slice
  const GridShape shape(477, 4, 1, 2, 1, 1);
  const auto orig = nonlinear_plans(shape, Variant::original);
  const auto opt = nonlinear_plans(shape, Variant::optimized);
  CHECK(orig.x.n_padded == 716);
  CHECK(opt.x.n_padded == 720);
  const auto in = make_kernel_inputs(shape, Seed{15});
  CHECK(rel(nonlinear_kernel(in.h, in.phi, orig).values(), nonlinear_kernel(in.h, in.phi, opt).values()) <= 1e-12);
}

TEST_CASE("names round-trip") {
  for (auto k : all_kernels()) CHECK(parse_kernel(to_string(k)) == k);
  CHECK(parse_variant("original") == Variant::original);
  CHECK_THROWS_AS(parse_kernel("advect"), ParameterError);
  CHECK_THROWS_AS(parse_variant("fast"), ParameterError);
}

TEST_CASE("checksum") {
  const std::vector<complex> v{{1.0, 2.0}};
  CHECK(checksum(v) != checksum(std::vector<complex>{{2.0, 1.0}}));
  CHECK(checksum(std::vector<complex>{}) == 0xCBF29CE484222325ULL);
}
