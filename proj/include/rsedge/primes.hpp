#pragma once

// Sieve utilities: primality table, prime list, smallest-prime-factor
// table (for multiplicative extension of coefficient streams), square-free
// table, and exact prime counts in d-th power windows.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace rsedge {

inline std::vector<std::uint8_t> sieve_is_prime(std::int64_t n) {
  if (n < 0) n = 0;
  std::vector<std::uint8_t> is_prime(static_cast<std::size_t>(n + 1), 1);
  if (n >= 0) is_prime[0] = 0;
  if (n >= 1) is_prime[1] = 0;
  for (std::int64_t p = 2; p * p <= n; ++p)
    if (is_prime[static_cast<std::size_t>(p)])
      for (std::int64_t m = p * p; m <= n; m += p) is_prime[static_cast<std::size_t>(m)] = 0;
  return is_prime;
}

inline std::vector<std::int64_t> primes_up_to(std::int64_t n) {
  const auto table = sieve_is_prime(n);
  std::vector<std::int64_t> primes;
  for (std::int64_t i = 2; i <= n; ++i)
    if (table[static_cast<std::size_t>(i)]) primes.push_back(i);
  return primes;
}

// Smallest prime factor for every n <= N (spf[0] = spf[1] = 0).
inline std::vector<std::int32_t> spf_table(std::int64_t n) {
  std::vector<std::int32_t> spf(static_cast<std::size_t>(n + 1), 0);
  for (std::int64_t i = 2; i <= n; ++i) {
    if (spf[static_cast<std::size_t>(i)] == 0)
      for (std::int64_t m = i; m <= n; m += i)
        if (spf[static_cast<std::size_t>(m)] == 0) spf[static_cast<std::size_t>(m)] = static_cast<std::int32_t>(i);
  }
  return spf;
}

inline std::vector<std::uint8_t> squarefree_table(std::int64_t n) {
  std::vector<std::uint8_t> sf(static_cast<std::size_t>(n + 1), 1);
  if (n >= 0) sf[0] = 0;
  for (std::int64_t p = 2; p * p <= n; ++p)
    for (std::int64_t m = p * p; m <= n; m += p * p) sf[static_cast<std::size_t>(m)] = 0;
  return sf;
}

// Exact count of primes p with Y <= p^d <= 2Y, by sieve and integer
// power comparison (no floating-point boundary trouble).
inline std::int64_t count_primes_in_dth_window(double Y, int d) {
  if (d < 1) throw std::invalid_argument("count_primes_in_dth_window: d < 1");
  const double hi_real = std::pow(2.0 * Y, 1.0 / d);
  const auto upper = static_cast<std::int64_t>(std::floor(hi_real)) + 2;
  const auto is_prime = sieve_is_prime(upper);
  std::int64_t count = 0;
  for (std::int64_t p = 2; p <= upper; ++p) {
    if (!is_prime[static_cast<std::size_t>(p)]) continue;
    double pd = 1.0;
    for (int i = 0; i < d; ++i) pd *= static_cast<double>(p);
    if (pd >= Y && pd <= 2.0 * Y) ++count;
  }
  return count;
}

}  // namespace rsedge
