#ifndef KGCODE_CLOPEN_HPP
#define KGCODE_CLOPEN_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kgcode/bitstring.hpp"
#include "kgcode/dyadic.hpp"
#include "kgcode/schedule.hpp"

namespace kgcode {

/// Depth-d approximation of an effectively closed class: a finite union of
/// cylinders, identified with its set of length-d members.
///
/// Stored as the canonical generator set: the prefix-free list of strings
/// whose cylinder lies inside the class while their parent's does not,
/// sorted lexicographically. The full class is {λ}, so deep classes with
/// a simple shape stay small; the generators extending a string form a
/// contiguous run.
class ClopenClass {
 public:
  using Integer = Dyadic::Integer;

  ClopenClass() = default;
  /// Any generator list with lengths <= depth; canonicalized on entry.
  ClopenClass(unsigned depth, std::vector<BitString> generators);

  static ClopenClass full(unsigned depth) { return {depth, {BitString{}}}; }
  static ClopenClass empty(unsigned depth) { return {depth, {}}; }
  /// Length-d members. Rejects wrong-length and duplicate entries.
  static ClopenClass from_members(unsigned depth,
                                  std::span<const BitString> members);

  unsigned depth() const noexcept { return depth_; }
  bool empty() const noexcept { return gens_.empty(); }
  std::span<const BitString> generators() const noexcept { return gens_; }

  /// Number of length-d members.
  Integer member_count() const;
  /// Explicit length-d members. Throws if there are more than `cap`.
  std::vector<BitString> members(std::size_t cap = std::size_t{1} << 22) const;
  bool contains(const BitString& x) const;

  /// Generators extending sigma, as [first, last) into generators().
  std::pair<std::size_t, std::size_t> range_of(const BitString& sigma) const;
  /// True when [sigma] lies entirely inside the class.
  bool covers(const BitString& sigma) const;

  friend bool operator==(const ClopenClass&, const ClopenClass&) = default;

 private:
  unsigned depth_ = 0;
  std::vector<BitString> gens_;
};

Dyadic measure(const ClopenClass& c);
/// Throws "string deeper than class approximation" if |sigma| > depth.
bool is_extendible(const ClopenClass& c, const BitString& sigma);
/// 2^|sigma| * mu([sigma] intersected with c).
Dyadic density(const ClopenClass& c, const BitString& sigma);

/// The c-extendible extensions of sigma of the given length in
/// lexicographic order, at most `limit` of them.
std::vector<BitString> extendible_extensions(
    const ClopenClass& c, const BitString& sigma, unsigned length,
    std::size_t limit = static_cast<std::size_t>(-1));

/// a minus b, at equal depths.
ClopenClass difference(const ClopenClass& a, const ClopenClass& b);
bool is_subset(const ClopenClass& a, const ClopenClass& b);

/// Stages of a shrinking approximation, all at one depth.
class ApproxSequence {
 public:
  explicit ApproxSequence(std::vector<ClopenClass> stages);

  std::size_t size() const noexcept { return stages_.size(); }
  const ClopenClass& operator[](std::size_t s) const { return stages_[s]; }
  const ClopenClass& final_stage() const { return stages_.back(); }
  unsigned depth() const { return stages_.front().depth(); }

 private:
  std::vector<ClopenClass> stages_;
};

struct PruneAction {
  std::size_t step = 0;  // 1-based order of the action
  std::size_t level = 0;
  BitString node;
  Dyadic density_before;
  Dyadic removed;
};

struct PruneResult {
  ClopenClass pstar;
  ClopenClass removed;  // the enumerated class Q
  std::vector<PruneAction> trace;
  Dyadic budget;  // sum over i < levels of 2^(m_i - l_i)
};

/// Repeatedly removes [sigma] for the least string sigma (by length, then
/// lexicographically) of some length L(n), n < levels, whose remaining
/// density is positive and at most 2^(m_n - l_n). Survivors therefore have
/// density strictly above the threshold. Throws "measure budget exhausted"
/// unless the budget is strictly below measure(P).
PruneResult prune(const ClopenClass& p, const Schedule& sched,
                  std::size_t levels);

struct PropertyFailure {
  std::size_t level = 0;
  BitString node;
  std::uint64_t extensions = 0;  // extendible extensions (saturating)
  std::uint64_t required = 0;    // 2^m_level
  Dyadic density;
  Dyadic threshold;  // 2^(m_level - l_level)
};

struct PropertyVerdict {
  bool holds = true;
  std::optional<PropertyFailure> failure;  // least (level, lex) failure
};

/// Every extendible sigma of length L(i), i < levels, has at least 2^m_i
/// extendible extensions of length L(i+1).
PropertyVerdict verify_extension_property(const ClopenClass& c,
                                          const Schedule& sched,
                                          std::size_t levels);

/// Every extendible sigma of length L(i), i < levels, has density at least
/// 2^(m_i - l_i).
PropertyVerdict verify_density_property(const ClopenClass& c,
                                        const Schedule& sched,
                                        std::size_t levels);

/// Class file: "depth d", then the members one per line in lexicographic
/// order ("-" for the empty string at depth 0). A line "σ*" stands for
/// every member extending σ; write_class only uses it when the explicit
/// listing would exceed `explicit_cap` lines.
ClopenClass read_class(std::istream& in);
void write_class(std::ostream& out, const ClopenClass& c,
                 std::size_t explicit_cap = std::size_t{1} << 20);

}  // namespace kgcode

#endif  // KGCODE_CLOPEN_HPP
