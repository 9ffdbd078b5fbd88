#include "rsfft/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace rsfft {

std::vector<std::uint64_t> Rng::distinct(std::uint64_t k, std::uint64_t n) {
  if (k > n) throw std::invalid_argument("Rng::distinct: k > n");
  std::vector<std::uint64_t> out;
  out.reserve(k);
  if (k > n / 4) {
    // Partial Fisher-Yates over the full range.
    std::vector<std::uint64_t> all(n);
    for (std::uint64_t i = 0; i < n; ++i) all[i] = i;
    for (std::uint64_t i = 0; i < k; ++i) {
      const std::uint64_t j = i + below(n - i);
      std::swap(all[i], all[j]);
    }
    out.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
  } else {
    // Rejection; fine when k << n.
    while (out.size() < k) {
      const std::uint64_t v = below(n);
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rsfft
