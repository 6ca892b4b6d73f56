#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace rnapars {

// Unsigned arbitrary-precision integer, just enough arithmetic for exact
// structure counting and uniform sampling (add, sub, mul, compare).
class BigUint {
 public:
  BigUint() = default;
  BigUint(std::uint64_t value);

  bool is_zero() const { return limbs_.empty(); }
  std::size_t bit_length() const;

  BigUint& operator+=(const BigUint& other);
  BigUint& operator-=(const BigUint& other);  // requires *this >= other
  friend BigUint operator+(BigUint a, const BigUint& b) { return a += b; }
  friend BigUint operator-(BigUint a, const BigUint& b) { return a -= b; }
  friend BigUint operator*(const BigUint& a, const BigUint& b);

  std::strong_ordering operator<=>(const BigUint& other) const;
  bool operator==(const BigUint& other) const = default;

  // Decimal rendering; "0" for zero.
  std::string to_string() const;

  // Value as u64 if it fits, otherwise throws std::overflow_error.
  std::uint64_t to_u64() const;

  // Bit i (0 = least significant).
  bool bit(std::size_t i) const;
  static BigUint from_bits(const std::vector<bool>& bits);  // bits[0] = lsb

 private:
  void trim();
  std::vector<std::uint32_t> limbs_;  // little-endian base 2^32, no trailing zeros
};

}  // namespace rnapars
