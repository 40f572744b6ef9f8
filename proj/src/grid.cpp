#include "gyroproxy/grid.hpp"

#include <cmath>
#include <limits>
#include <new>
#include <sstream>

#include "gyroproxy/errors.hpp"

namespace gyroproxy {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::size_t checked_mul(std::size_t a, std::size_t b) {
  std::size_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw ResourceError("grid shape element count overflows addressable size");
  }
  return out;
}

}  // namespace

GridShape::GridShape(std::size_t n_radial, std::size_t n_toroidal, std::size_t n_theta, std::size_t n_xi,
                     std::size_t n_energy, std::size_t n_species)
    : n_radial_(n_radial),
      n_toroidal_(n_toroidal),
      n_theta_(n_theta),
      n_xi_(n_xi),
      n_energy_(n_energy),
      n_species_(n_species),
      element_count_(0) {
  if (n_radial == 0 || n_toroidal == 0 || n_theta == 0 || n_xi == 0 || n_energy == 0 || n_species == 0) {
    throw ParameterError("grid shape extents must all be >= 1, got " + to_string(*this));
  }
  std::size_t count = n_radial;
  for (std::size_t extent : {n_toroidal, n_theta, n_xi, n_energy, n_species}) count = checked_mul(count, extent);
  checked_mul(count, sizeof(complex));
  element_count_ = count;
}

std::string to_string(const GridShape& shape) {
  std::ostringstream os;
  os << '(' << shape.n_radial() << ',' << shape.n_toroidal() << ',' << shape.n_theta() << ',' << shape.n_xi()
     << ',' << shape.n_energy() << ")x" << shape.n_species();
  return os.str();
}

std::vector<std::string> case_names() { return {"sh03b", "em04b", "sh03b-desk", "em04b-desk"}; }

GridShape make_case(std::string_view name) {
  if (name == "sh03b") return GridShape(480, 48, 32, 24, 8, 3);
  if (name == "em04b") return GridShape(1344, 288, 24, 18, 8, 3);
  if (name == "sh03b-desk") return GridShape(48, 8, 8, 6, 4, 3);
  if (name == "em04b-desk") return GridShape(96, 16, 6, 6, 4, 3);
  std::string valid;
  for (const auto& n : case_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw ParameterError("unknown case '" + std::string(name) + "'; valid cases: " + valid);
}

CounterRng::CounterRng(Seed seed) noexcept : key_(mix64(seed.value + kGolden)) {}

CounterRng CounterRng::split(std::uint64_t stream_id) const noexcept {
  return CounterRng(FromKey{}, mix64(key_ ^ mix64(stream_id + kGolden)));
}

std::uint64_t CounterRng::bits(std::uint64_t counter) const noexcept {
  return mix64(key_ + (counter + 1) * kGolden);
}

double CounterRng::unit(std::uint64_t counter) const noexcept {
  return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

DistributionState::DistributionState(const GridShape& shape) : shape_(shape) {
  try {
    values_.assign(shape.element_count(), complex{});
  } catch (const std::bad_alloc&) {
    throw ResourceError("cannot allocate distribution state " + to_string(shape));
  } catch (const std::length_error&) {
    throw ResourceError("cannot allocate distribution state " + to_string(shape));
  }
}

DistributionState::DistributionState(const GridShape& shape, std::vector<complex> values)
    : shape_(shape), values_(std::move(values)) {
  if (values_.size() != shape.element_count()) {
    throw SizeError("state has " + std::to_string(values_.size()) + " elements, shape " + to_string(shape) +
                    " needs " + std::to_string(shape.element_count()));
  }
}

bool DistributionState::all_finite() const noexcept {
  for (const auto& v : values_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

DistributionState random_state(const GridShape& shape, Seed seed) {
  DistributionState state(shape);
  const CounterRng rng(seed);
  auto values = state.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = complex(rng.symmetric(2 * i), rng.symmetric(2 * i + 1));
  }
  return state;
}

double generator_mean_abs(Seed seed, std::size_t count) {
  if (count == 0) return 0.0;
  const CounterRng rng(seed);
  double sum = 0.0;
  for (std::size_t i = 0; i < 2 * count; ++i) sum += std::abs(rng.symmetric(i));
  return sum / static_cast<double>(2 * count);
}

}  // namespace gyroproxy
