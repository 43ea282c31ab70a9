#ifndef KGCODE_BITSTRING_HPP
#define KGCODE_BITSTRING_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kgcode {

/// Finite binary word. Ordering is lexicographic with a proper prefix
/// sorting before its extensions; the empty string is valid.
class BitString {
 public:
  BitString() = default;

  /// Parses ASCII '0'/'1'. Any other character is an input error.
  explicit BitString(std::string_view text);

  /// The `length`-bit big-endian binary expansion of `value`.
  static BitString from_index(std::uint64_t value, std::size_t length);

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  bool operator[](std::size_t i) const { return bits_[i]; }

  void push_back(bool bit) { bits_.push_back(bit); }
  void append(const BitString& tail);

  BitString prefix(std::size_t n) const;
  BitString suffix_from(std::size_t start) const;
  bool is_prefix_of(const BitString& other) const noexcept;

  /// Big-endian value of the bits; only defined for size() <= 64.
  std::uint64_t to_index() const;

  std::string str() const;

  friend BitString operator+(BitString lhs, const BitString& rhs) {
    lhs.append(rhs);
    return lhs;
  }
  friend bool operator==(const BitString&, const BitString&) = default;
  friend std::strong_ordering operator<=>(const BitString& a,
                                          const BitString& b) noexcept;

 private:
  std::vector<bool> bits_;
};

std::strong_ordering lex_compare(const BitString& a,
                                 const BitString& b) noexcept;

/// "-" for the empty string, the 0/1 text otherwise. Used by the tree and
/// labelling file formats.
std::string node_text(const BitString& s);
BitString parse_node_text(std::string_view text);

}  // namespace kgcode

#endif  // KGCODE_BITSTRING_HPP
