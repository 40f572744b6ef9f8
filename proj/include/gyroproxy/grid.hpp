#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gyroproxy {

using complex = std::complex<double>;

/// Resolution of one test case: five phase-space extents per species plus the species count.
///
/// Extents are validated on construction: every field must be at least one, and the total
/// number of complex elements (and its byte size) must be representable without overflow.
class GridShape {
 public:
  GridShape(std::size_t n_radial, std::size_t n_toroidal, std::size_t n_theta, std::size_t n_xi,
            std::size_t n_energy, std::size_t n_species);

  std::size_t n_radial() const noexcept { return n_radial_; }
  std::size_t n_toroidal() const noexcept { return n_toroidal_; }
  std::size_t n_theta() const noexcept { return n_theta_; }
  std::size_t n_xi() const noexcept { return n_xi_; }
  std::size_t n_energy() const noexcept { return n_energy_; }
  std::size_t n_species() const noexcept { return n_species_; }

  /// Number of complex elements in a full distribution state.
  std::size_t element_count() const noexcept { return element_count_; }
  /// Size of the velocity-space block (xi * energy * species).
  std::size_t velocity_size() const noexcept { return n_xi_ * n_energy_ * n_species_; }
  /// Size of one (toroidal, radial) plane.
  std::size_t plane_size() const noexcept { return n_toroidal_ * n_radial_; }
  /// Size of one field moment (theta * toroidal * radial).
  std::size_t field_size() const noexcept { return n_theta_ * plane_size(); }

  friend bool operator==(const GridShape&, const GridShape&) = default;

 private:
  std::size_t n_radial_;
  std::size_t n_toroidal_;
  std::size_t n_theta_;
  std::size_t n_xi_;
  std::size_t n_energy_;
  std::size_t n_species_;
  std::size_t element_count_;
};

std::string to_string(const GridShape& shape);

/// Names accepted by make_case.
std::vector<std::string> case_names();

/// Published benchmark shapes (sh03b, em04b) and their desk-scale reductions (*-desk).
/// Throws ParameterError listing the valid names for anything else.
GridShape make_case(std::string_view name);

struct Seed {
  std::uint64_t value = 0;
  friend bool operator==(Seed, Seed) = default;
};

/// Counter-based generator built on the SplitMix64 finalizer.
///
/// The stream key is mix(seed + golden), and draw i of the stream is
/// mix(key + (i + 1) * golden) with golden = 0x9E3779B97F4A7C15. Child streams are
/// derived with split(id), whose key is mix(key ^ mix(id + golden)). Every draw is a pure
/// function of (key, i), so the generator is reproducible across platforms and trivially
/// parallel.
class CounterRng {
 public:
  explicit CounterRng(Seed seed) noexcept;

  CounterRng split(std::uint64_t stream_id) const noexcept;

  std::uint64_t bits(std::uint64_t counter) const noexcept;
  /// Uniform in [0, 1) with 53 random bits.
  double unit(std::uint64_t counter) const noexcept;
  /// Uniform in [-1, 1).
  double symmetric(std::uint64_t counter) const noexcept { return 2.0 * unit(counter) - 1.0; }

  std::uint64_t key() const noexcept { return key_; }

 private:
  struct FromKey {};
  CounterRng(FromKey, std::uint64_t key) noexcept : key_(key) {}
  std::uint64_t key_;
};

/// Dense complex state logically indexed [species][energy][xi][theta][toroidal][radial],
/// radial fastest.
class DistributionState {
 public:
  explicit DistributionState(const GridShape& shape);
  DistributionState(const GridShape& shape, std::vector<complex> values);

  const GridShape& shape() const noexcept { return shape_; }

  std::size_t index(std::size_t species, std::size_t energy, std::size_t xi, std::size_t theta,
                    std::size_t toroidal, std::size_t radial) const noexcept {
    return ((((species * shape_.n_energy() + energy) * shape_.n_xi() + xi) * shape_.n_theta() + theta) *
                shape_.n_toroidal() +
            toroidal) *
               shape_.n_radial() +
           radial;
  }

  /// Flat velocity index (species, energy, xi) matching the storage order.
  std::size_t velocity_index(std::size_t species, std::size_t energy, std::size_t xi) const noexcept {
    return (species * shape_.n_energy() + energy) * shape_.n_xi() + xi;
  }

  complex& operator()(std::size_t s, std::size_t e, std::size_t xi, std::size_t th, std::size_t ky,
                      std::size_t kx) noexcept {
    return values_[index(s, e, xi, th, ky, kx)];
  }
  const complex& operator()(std::size_t s, std::size_t e, std::size_t xi, std::size_t th, std::size_t ky,
                            std::size_t kx) const noexcept {
    return values_[index(s, e, xi, th, ky, kx)];
  }

  std::span<complex> values() noexcept { return values_; }
  std::span<const complex> values() const noexcept { return values_; }

  bool all_finite() const noexcept;

  friend bool operator==(const DistributionState&, const DistributionState&) = default;

 private:
  GridShape shape_;
  std::vector<complex> values_;
};

/// Seeded state with real and imaginary parts of element i drawn from counters 2i and 2i+1,
/// each uniform in [-1, 1).
DistributionState random_state(const GridShape& shape, Seed seed);

/// Mean of |component| over the real and imaginary parts of `count` generated elements.
double generator_mean_abs(Seed seed, std::size_t count);

}  // namespace gyroproxy
