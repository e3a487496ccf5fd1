#pragma once

#include <cstdint>

namespace cechlab {

/// Prime field Z/p used for homology coefficients.
class FieldSpec {
 public:
  /// Throws ArgumentError unless `characteristic` is prime.
  explicit FieldSpec(std::uint32_t characteristic = 2);

  std::uint32_t characteristic() const noexcept { return p_; }

  std::uint32_t add(std::uint32_t a, std::uint32_t b) const noexcept {
    const std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  std::uint32_t negate(std::uint32_t a) const noexcept { return a == 0 ? 0 : p_ - a; }
  std::uint32_t multiply(std::uint32_t a, std::uint32_t b) const noexcept {
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p_);
  }
  std::uint32_t inverse(std::uint32_t a) const;
  /// Image of an integer (possibly negative) in the field.
  std::uint32_t from_int(long long v) const noexcept {
    const long long m = v % static_cast<long long>(p_);
    return static_cast<std::uint32_t>(m < 0 ? m + p_ : m);
  }

  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;

 private:
  std::uint32_t p_;
};

bool is_prime(std::uint64_t n);

}  // namespace cechlab
