#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gyroproxy::padding {

/// Rational dealiasing factor num/den, at least one. The 3/2 rule is the standard choice for
/// quadratic nonlinearities.
struct DealiasRule {
  std::uint32_t num = 3;
  std::uint32_t den = 2;

  friend bool operator==(DealiasRule, DealiasRule) = default;
};

inline constexpr DealiasRule kThreeHalves{3, 2};

/// Parses "3/2" or "2" into a rule; throws ParameterError on malformed or < 1 values.
DealiasRule parse_rule(std::string_view text);
std::string to_string(DealiasRule rule);

std::vector<std::uint64_t> default_primes();
/// Parses "2,3,5,7"; every entry must be prime.
std::vector<std::uint64_t> parse_primes(std::string_view text);

struct PaddedPlan {
  std::uint64_t n_logical = 0;
  std::uint64_t n_min = 0;
  std::uint64_t n_padded = 0;
  std::vector<std::uint64_t> factors;
  double cost_score = 0.0;
};

/// Nondecreasing prime factors of n; {} for n == 1. Throws DomainError for n == 0.
std::vector<std::uint64_t> factorize(std::uint64_t n);

bool is_smooth(std::uint64_t n, std::span<const std::uint64_t> allowed_primes);

/// ceil(n_logical * rule).
std::uint64_t dealias_minimum(std::uint64_t n_logical, DealiasRule rule = kThreeHalves);

/// Smallest size >= dealias_minimum whose prime factors all lie in allowed_primes.
/// Size is minimized first; cost_score is diagnostic only.
PaddedPlan plan_padded_size(std::uint64_t n_logical, DealiasRule rule = kThreeHalves,
                            std::span<const std::uint64_t> allowed_primes = {});

/// Model of a padding scheme that ignores factorization: the dealias minimum rounded up to
/// the next even number. Reproduces large-prime cofactors such as 716 = 2^2 * 179.
std::uint64_t naive_padded_size(std::uint64_t n_logical, DealiasRule rule = kThreeHalves);

/// Plan wrapper around naive_padded_size, factors and score filled in.
PaddedPlan naive_plan(std::uint64_t n_logical, DealiasRule rule = kThreeHalves);

/// Sum of prime factors with multiplicity.
double cost_score(std::span<const std::uint64_t> factors);

/// "2*2*3"; "1" for an empty list.
std::string format_factors(std::span<const std::uint64_t> factors);

/// CSV row `n_logical,n_min,n_padded,factors,score`.
std::string to_csv_row(const PaddedPlan& plan);

}  // namespace gyroproxy::padding
