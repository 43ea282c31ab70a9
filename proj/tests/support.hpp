#ifndef KGCODE_TESTS_SUPPORT_HPP
#define KGCODE_TESTS_SUPPORT_HPP

#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "kgcode/bitstring.hpp"
#include "kgcode/clopen.hpp"
#include "kgcode/labeltree.hpp"
#include "kgcode/random.hpp"

namespace kgtest {

inline std::string source_path(const std::string& rel) {
  return std::string(KG_SOURCE_DIR) + "/" + rel;
}

inline kgcode::ClopenClass load_class(const std::string& rel) {
  std::ifstream in(source_path(rel));
  return kgcode::read_class(in);
}

inline kgcode::UTree load_tree(const std::string& rel) {
  std::ifstream in(source_path(rel));
  return kgcode::read_tree(in);
}

inline kgcode::BitString bits(const std::string& s) {
  return kgcode::parse_node_text(s);
}

inline std::vector<kgcode::BitString> strings(
    std::initializer_list<const char*> items) {
  std::vector<kgcode::BitString> out;
  for (const char* s : items) out.push_back(kgcode::parse_node_text(s));
  return out;
}

inline kgcode::ClopenClass members(unsigned depth,
                                   std::initializer_list<const char*> items) {
  const auto v = strings(items);
  return kgcode::ClopenClass::from_members(depth, v);
}

inline kgcode::BitString random_bits(std::mt19937_64& rng, std::size_t n) {
  kgcode::BitString s;
  for (std::size_t i = 0; i < n; ++i) s.push_back(rng() & 1);
  return s;
}

// Explicit member list of a random class: each string kept with
// probability keep/8.
inline kgcode::ClopenClass random_explicit(std::mt19937_64& rng,
                                           unsigned depth, unsigned keep) {
  std::vector<kgcode::BitString> out;
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << depth); ++v)
    if (kgcode::below(rng, 8) < keep)
      out.push_back(kgcode::BitString::from_index(v, depth));
  return kgcode::ClopenClass::from_members(depth, out);
}

}  // namespace kgtest

#endif  // KGCODE_TESTS_SUPPORT_HPP
