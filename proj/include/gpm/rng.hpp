#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

namespace gpm {

inline constexpr std::string_view kGeneratorId = "philox4x32-10/box-muller/v1";

// Counter-based Philox4x32 with 10 rounds.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter counter, Key key);
};

// The index-th standard normal of the (seed, stream) sequence. Random access, so any
// split of the index range yields identical values.
double standard_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

// Fills out[i] with standard_normal(seed, stream, first + i).
void fill_standard_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t first,
                          std::span<double> out);

// The index-th uniform on [0, 1) of the (seed, stream) sequence, 53-bit resolution.
double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

}  // namespace gpm
