#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace selflearn {

using Rng = std::mt19937_64;

/// Maps (seed, index, purpose) to a statistically independent sub-seed.
/// Every random stream in the library is keyed this way, so results are a
/// function of the configured seed alone.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index, std::string_view purpose) noexcept;

inline Rng make_rng(std::uint64_t seed, std::uint64_t index, std::string_view purpose) {
  return Rng(derive_seed(seed, index, purpose));
}

}  // namespace selflearn
