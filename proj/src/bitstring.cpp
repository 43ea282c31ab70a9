#include "kgcode/bitstring.hpp"

#include <algorithm>

#include "kgcode/error.hpp"

namespace kgcode {

BitString::BitString(std::string_view text) {
  bits_.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1')
      fail(ErrorKind::input,
           "invalid bit character '" + std::string(1, c) + "'");
    bits_.push_back(c == '1');
  }
}

BitString BitString::from_index(std::uint64_t value, std::size_t length) {
  BitString out;
  out.bits_.resize(length);
  for (std::size_t i = 0; i < length; ++i) {
    const std::size_t shift = length - 1 - i;
    out.bits_[i] = shift < 64 && ((value >> shift) & 1u);
  }
  return out;
}

void BitString::append(const BitString& tail) {
  bits_.insert(bits_.end(), tail.bits_.begin(), tail.bits_.end());
}

BitString BitString::prefix(std::size_t n) const {
  BitString out;
  const std::size_t len = std::min(n, bits_.size());
  out.bits_.assign(bits_.begin(), bits_.begin() + static_cast<long>(len));
  return out;
}

BitString BitString::suffix_from(std::size_t start) const {
  BitString out;
  if (start < bits_.size())
    out.bits_.assign(bits_.begin() + static_cast<long>(start), bits_.end());
  return out;
}

bool BitString::is_prefix_of(const BitString& other) const noexcept {
  return bits_.size() <= other.bits_.size() &&
         std::equal(bits_.begin(), bits_.end(), other.bits_.begin());
}

std::uint64_t BitString::to_index() const {
  if (bits_.size() > 64)
    fail(ErrorKind::internal, "bit string too long for an integer index");
  std::uint64_t v = 0;
  for (bool b : bits_) v = (v << 1) | static_cast<std::uint64_t>(b);
  return v;
}

std::string BitString::str() const {
  std::string out;
  out.reserve(bits_.size());
  for (bool b : bits_) out.push_back(b ? '1' : '0');
  return out;
}

std::strong_ordering operator<=>(const BitString& a,
                                 const BitString& b) noexcept {
  const std::size_t n = std::min(a.bits_.size(), b.bits_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.bits_[i] != b.bits_[i])
      return a.bits_[i] ? std::strong_ordering::greater
                        : std::strong_ordering::less;
  }
  return a.bits_.size() <=> b.bits_.size();
}

std::strong_ordering lex_compare(const BitString& a,
                                 const BitString& b) noexcept {
  return a <=> b;
}

std::string node_text(const BitString& s) {
  return s.empty() ? std::string("-") : s.str();
}

BitString parse_node_text(std::string_view text) {
  if (text == "-" || text == "λ") return BitString{};
  return BitString(text);
}

}  // namespace kgcode
