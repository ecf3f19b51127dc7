#include "gpm/rng.hpp"

#include <cmath>
#include <numbers>

namespace gpm {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

Philox4x32::Counter block(std::uint64_t seed, std::uint64_t stream, std::uint64_t block_index) {
  Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_index),
                          static_cast<std::uint32_t>(block_index >> 32),
                          static_cast<std::uint32_t>(stream),
                          static_cast<std::uint32_t>(stream >> 32)};
  Philox4x32::Key key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Philox4x32::generate(ctr, key);
}

double to_unit_open_closed(std::uint32_t hi, std::uint32_t lo) {
  std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;  // (0, 1]
}

double to_unit_closed_open(std::uint32_t hi, std::uint32_t lo) {
  std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return static_cast<double>(bits) * 0x1.0p-53;  // [0, 1)
}

std::array<double, 2> box_muller(const Philox4x32::Counter& r) {
  double radius = std::sqrt(-2.0 * std::log(to_unit_open_closed(r[0], r[1])));
  double angle = 2.0 * std::numbers::pi * to_unit_closed_open(r[2], r[3]);
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
    std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
    auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

double standard_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  auto pair = box_muller(block(seed, stream, index / 2));
  return pair[index % 2];
}

void fill_standard_normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t first,
                          std::span<double> out) {
  std::size_t i = 0;
  if (first % 2 == 1 && !out.empty()) {
    out[i++] = standard_normal(seed, stream, first);
  }
  for (; i + 1 < out.size(); i += 2) {
    auto pair = box_muller(block(seed, stream, (first + i) / 2));
    out[i] = pair[0];
    out[i + 1] = pair[1];
  }
  if (i < out.size()) out[i] = standard_normal(seed, stream, first + i);
}

double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  auto r = block(seed, stream | (std::uint64_t{1} << 63), index / 2);
  return index % 2 == 0 ? to_unit_closed_open(r[0], r[1]) : to_unit_closed_open(r[2], r[3]);
}

}  // namespace gpm
