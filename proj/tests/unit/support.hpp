#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mbs/finite_field.hpp"

namespace testsupport {

/// Every (p, d, h) with h >= 2 and p^(d h) <= bound.
inline std::vector<std::array<std::uint32_t, 3>> towers_up_to(std::uint64_t bound) {
  std::vector<std::array<std::uint32_t, 3>> out;
  for (std::uint32_t p = 2; p <= bound; ++p) {
    if (!mbs::is_prime(p)) continue;
    for (std::uint32_t d = 1;; ++d) {
      std::uint64_t q = 1;
      for (std::uint32_t i = 0; i < d; ++i) q *= p;
      if (q * q > bound) break;
      std::uint64_t qh = q * q;
      for (std::uint32_t h = 2; qh <= bound; ++h, qh *= q) out.push_back({p, d, h});
    }
  }
  return out;
}

inline std::uint64_t ipow(std::uint64_t b, std::uint32_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace testsupport
