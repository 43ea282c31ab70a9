#include "kgcode/dyadic.hpp"

#include <cmath>

#include "kgcode/error.hpp"

namespace kgcode {

namespace {

// Bring both numerators onto the larger of the two exponents.
std::pair<Dyadic::Integer, Dyadic::Integer> aligned(const Dyadic& a,
                                                    const Dyadic& b,
                                                    std::uint32_t& exponent) {
  exponent = std::max(a.exponent(), b.exponent());
  Dyadic::Integer x = a.numerator() << (exponent - a.exponent());
  Dyadic::Integer y = b.numerator() << (exponent - b.exponent());
  return {std::move(x), std::move(y)};
}

}  // namespace

Dyadic::Dyadic(Integer numerator, std::uint32_t exponent)
    : num_(std::move(numerator)), exp_(exponent) {
  if (num_ < 0) fail(ErrorKind::internal, "negative dyadic numerator");
  canonicalize();
}

void Dyadic::canonicalize() {
  if (num_.is_zero()) {
    exp_ = 0;
    return;
  }
  const auto tz = static_cast<std::uint32_t>(
      boost::multiprecision::lsb(num_));
  const std::uint32_t shift = std::min(tz, exp_);
  num_ >>= shift;
  exp_ -= shift;
}

Dyadic Dyadic::pow2(long k) {
  if (k >= 0) return Dyadic(Integer(1) << static_cast<unsigned>(k), 0);
  return Dyadic(Integer(1), static_cast<std::uint32_t>(-k));
}

Dyadic Dyadic::scaled(long k) const {
  if (num_.is_zero()) return *this;
  if (k >= 0) {
    const auto up = static_cast<std::uint32_t>(k);
    if (up <= exp_) return Dyadic(num_, exp_ - up);
    return Dyadic(num_ << (up - exp_), 0);
  }
  return Dyadic(num_, exp_ + static_cast<std::uint32_t>(-k));
}

Dyadic& Dyadic::operator+=(const Dyadic& rhs) {
  std::uint32_t e = 0;
  auto [x, y] = aligned(*this, rhs, e);
  num_ = x + y;
  exp_ = e;
  canonicalize();
  return *this;
}

Dyadic& Dyadic::operator-=(const Dyadic& rhs) {
  std::uint32_t e = 0;
  auto [x, y] = aligned(*this, rhs, e);
  if (x < y)
    fail(ErrorKind::precondition,
         "dyadic subtraction would be negative: " + str() + " - " +
             rhs.str());
  num_ = x - y;
  exp_ = e;
  canonicalize();
  return *this;
}

Dyadic& Dyadic::operator*=(const Dyadic& rhs) {
  num_ *= rhs.num_;
  exp_ += rhs.exp_;
  canonicalize();
  return *this;
}

std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
  std::uint32_t e = 0;
  auto [x, y] = aligned(a, b, e);
  if (x < y) return std::strong_ordering::less;
  if (y < x) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Dyadic::str() const {
  return num_.str() + "/2^" + std::to_string(exp_);
}

double Dyadic::approx() const {
  return std::ldexp(num_.convert_to<double>(), -static_cast<int>(exp_));
}

Dyadic dyadic_sum(std::span<const Dyadic> terms) {
  Dyadic total;
  for (const auto& t : terms) total += t;
  return total;
}

}  // namespace kgcode
