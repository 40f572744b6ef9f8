#include "gyroproxy/padding.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>
#include <sstream>

#include "gyroproxy/errors.hpp"

namespace gyroproxy::padding {

namespace {

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParameterError(std::string(what) + ": expected an unsigned integer, got '" + std::string(text) + "'");
  }
  return value;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

void check_primes(std::span<const std::uint64_t> primes) {
  if (primes.empty()) throw ParameterError("allowed prime set must be nonempty");
  for (auto p : primes) {
    if (!is_prime(p)) throw ParameterError("allowed prime set contains non-prime " + std::to_string(p));
  }
}

}  // namespace

DealiasRule parse_rule(std::string_view text) {
  DealiasRule rule{1, 1};
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    rule.num = static_cast<std::uint32_t>(parse_u64(text.substr(0, slash), "dealias rule numerator"));
    rule.den = static_cast<std::uint32_t>(parse_u64(text.substr(slash + 1), "dealias rule denominator"));
  } else {
    rule.num = static_cast<std::uint32_t>(parse_u64(text, "dealias rule"));
  }
  if (rule.den == 0 || rule.num < rule.den) {
    throw ParameterError("dealias rule must be a fraction >= 1, got '" + std::string(text) + "'");
  }
  return rule;
}

std::string to_string(DealiasRule rule) { return std::to_string(rule.num) + "/" + std::to_string(rule.den); }

std::vector<std::uint64_t> default_primes() { return {2, 3, 5, 7}; }

std::vector<std::uint64_t> parse_primes(std::string_view text) {
  std::vector<std::uint64_t> primes;
  while (!text.empty()) {
    auto comma = text.find(',');
    primes.push_back(parse_u64(text.substr(0, comma), "prime list"));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  check_primes(primes);
  std::sort(primes.begin(), primes.end());
  primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
  return primes;
}

std::vector<std::uint64_t> factorize(std::uint64_t n) {
  if (n == 0) throw DomainError("factorize: n must be >= 1");
  std::vector<std::uint64_t> factors;
  for (std::uint64_t d = 2; d <= n / d; ++d) {
    while (n % d == 0) {
      factors.push_back(d);
      n /= d;
    }
  }
  if (n > 1) factors.push_back(n);
  return factors;
}

bool is_smooth(std::uint64_t n, std::span<const std::uint64_t> allowed_primes) {
  if (n == 0) return false;
  for (auto p : allowed_primes) {
    if (p < 2) continue;
    while (n % p == 0) n /= p;
  }
  return n == 1;
}

std::uint64_t dealias_minimum(std::uint64_t n_logical, DealiasRule rule) {
  if (n_logical == 0) throw DomainError("dealias_minimum: n_logical must be >= 1");
  if (rule.den == 0 || rule.num < rule.den) throw ParameterError("dealias rule must be >= 1");
  std::uint64_t scaled = 0;
  if (__builtin_mul_overflow(n_logical, std::uint64_t{rule.num}, &scaled)) {
    throw DomainError("dealias_minimum: n_logical too large");
  }
  return scaled / rule.den + (scaled % rule.den != 0 ? 1 : 0);
}

PaddedPlan plan_padded_size(std::uint64_t n_logical, DealiasRule rule, std::span<const std::uint64_t> allowed_primes) {
  const auto defaults = default_primes();
  if (allowed_primes.empty()) allowed_primes = defaults;
  check_primes(allowed_primes);

  PaddedPlan plan;
  plan.n_logical = n_logical;
  plan.n_min = dealias_minimum(n_logical, rule);
  std::uint64_t n = plan.n_min;
  while (!is_smooth(n, allowed_primes)) {
    if (n == std::numeric_limits<std::uint64_t>::max()) throw DomainError("plan_padded_size: no smooth size found");
    ++n;
  }
  plan.n_padded = n;
  plan.factors = factorize(n);
  plan.cost_score = cost_score(plan.factors);
  return plan;
}

std::uint64_t naive_padded_size(std::uint64_t n_logical, DealiasRule rule) {
  const auto n_min = dealias_minimum(n_logical, rule);
  return n_min + (n_min % 2);
}

PaddedPlan naive_plan(std::uint64_t n_logical, DealiasRule rule) {
  PaddedPlan plan;
  plan.n_logical = n_logical;
  plan.n_min = dealias_minimum(n_logical, rule);
  plan.n_padded = naive_padded_size(n_logical, rule);
  plan.factors = factorize(plan.n_padded);
  plan.cost_score = cost_score(plan.factors);
  return plan;
}

double cost_score(std::span<const std::uint64_t> factors) {
  return std::accumulate(factors.begin(), factors.end(), 0.0,
                         [](double acc, std::uint64_t f) { return acc + static_cast<double>(f); });
}

std::string format_factors(std::span<const std::uint64_t> factors) {
  if (factors.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i) out += '*';
    out += std::to_string(factors[i]);
  }
  return out;
}

std::string to_csv_row(const PaddedPlan& plan) {
  std::ostringstream os;
  os << plan.n_logical << ',' << plan.n_min << ',' << plan.n_padded << ',' << format_factors(plan.factors) << ','
     << plan.cost_score;
  return os.str();
}

}  // namespace gyroproxy::padding
