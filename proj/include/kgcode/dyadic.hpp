#ifndef KGCODE_DYADIC_HPP
#define KGCODE_DYADIC_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstdint>
#include <span>
#include <string>

namespace kgcode {

/// Exact non-negative rational numerator / 2^exponent.
///
/// Always kept canonical: the numerator is odd, or it is zero and the
/// exponent is zero. Every measure and density in the library is one of
/// these; no verdict is ever taken on a floating-point value.
class Dyadic {
 public:
  using Integer = boost::multiprecision::cpp_int;

  Dyadic() = default;
  Dyadic(Integer numerator, std::uint32_t exponent);
  explicit Dyadic(std::uint64_t integer) : Dyadic(Integer(integer), 0) {}

  /// 2^k for any integer k.
  static Dyadic pow2(long k);
  /// count * 2^-exponent, the measure of `count` cylinders of equal depth.
  static Dyadic cylinders(std::uint64_t count, std::uint32_t exponent) {
    return Dyadic(Integer(count), exponent);
  }

  const Integer& numerator() const noexcept { return num_; }
  std::uint32_t exponent() const noexcept { return exp_; }
  bool is_zero() const noexcept { return num_.is_zero(); }

  /// Multiplication by 2^k; exact in both directions.
  Dyadic scaled(long k) const;

  Dyadic& operator+=(const Dyadic& rhs);
  /// Throws a precondition error if the result would be negative.
  Dyadic& operator-=(const Dyadic& rhs);
  Dyadic& operator*=(const Dyadic& rhs);

  friend Dyadic operator+(Dyadic a, const Dyadic& b) { return a += b; }
  friend Dyadic operator-(Dyadic a, const Dyadic& b) { return a -= b; }
  friend Dyadic operator*(Dyadic a, const Dyadic& b) { return a *= b; }

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exp_ == b.exp_ && a.num_ == b.num_;
  }
  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b);

  /// "num/2^k".
  std::string str() const;
  /// Display only.
  double approx() const;

 private:
  void canonicalize();

  Integer num_ = 0;
  std::uint32_t exp_ = 0;
};

Dyadic dyadic_sum(std::span<const Dyadic> terms);

}  // namespace kgcode

#endif  // KGCODE_DYADIC_HPP
