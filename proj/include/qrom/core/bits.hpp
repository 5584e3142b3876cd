#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qrom {

/// Low `bits` ones. Valid for 0..64.
constexpr std::uint64_t low_mask(unsigned bits) noexcept {
  return bits >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << bits) - 1);
}

constexpr unsigned bit_length(std::uint64_t x) noexcept {
  return static_cast<unsigned>(std::bit_width(x));
}

/// x|_ell: the leading `ell` bits of a `width`-bit string.
constexpr std::uint64_t leading_bits(std::uint64_t x, unsigned width,
                                     unsigned ell) {
  if (ell > width) throw std::invalid_argument("leading_bits: ell > width");
  return ell == 0 ? 0 : (x >> (width - ell)) & low_mask(ell);
}

/// Binary representation with exactly `width` characters, MSB first.
inline std::string to_bitstring(std::uint64_t x, unsigned width) {
  std::string s(width, '0');
  for (unsigned i = 0; i < width; ++i)
    if ((x >> (width - 1 - i)) & 1U) s[i] = '1';
  return s;
}

inline void require_width(std::uint64_t x, unsigned width, const char* what) {
  if (width < 64 && (x >> width) != 0)
    throw std::out_of_range(std::string(what) + ": value exceeds " +
                            std::to_string(width) + "-bit width");
}

}  // namespace qrom
