#ifndef KGCODE_LABELTREE_HPP
#define KGCODE_LABELTREE_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "kgcode/bitstring.hpp"
#include "kgcode/dyadic.hpp"

namespace kgcode {

/// A (u_i)-tree. Level 0 is the root λ; level j >= 1 holds nodes of length
/// u[j-1]. Every node at level j+1 extends a node at level j.
class UTree {
 public:
  UTree() : levels_{{BitString{}}} {}
  /// Validates u (strictly increasing, positive), node lengths and
  /// downward closure. λ is added when absent.
  UTree(std::vector<unsigned> u, std::vector<BitString> nodes);

  const std::vector<unsigned>& u() const noexcept { return u_; }
  /// Number of levels above the root that u provides.
  std::size_t level_count() const noexcept { return u_.size(); }
  /// Highest level holding a node.
  std::size_t height() const noexcept;
  std::size_t length_at(std::size_t level) const {
    return level == 0 ? 0 : u_.at(level - 1);
  }
  /// Sorted nodes of one level; level 0 is {λ}.
  const std::vector<BitString>& level(std::size_t j) const {
    return levels_.at(j);
  }
  std::optional<std::size_t> level_of(const BitString& node) const;
  bool contains(const BitString& node) const;
  std::vector<BitString> children(const BitString& node) const;
  BitString parent(const BitString& node) const;
  std::vector<BitString> nodes() const;
  std::size_t node_count() const noexcept;

  friend bool operator==(const UTree&, const UTree&) = default;

 private:
  std::vector<unsigned> u_;
  std::vector<std::vector<BitString>> levels_;  // levels_[0] = {λ}
};

/// Tree file: "u: u0 u1 ...", then one node per line ("-" for λ).
/// Lines starting with '#' are comments.
UTree read_tree(std::istream& in);
void write_tree(std::ostream& out, const UTree& t);
std::string tree_text(const UTree& t);

/// Node -> subject pairs, kept in insertion order so that a node carrying
/// two labels can be reported. The root carries x_λ implicitly.
struct Labelling {
  std::vector<std::pair<BitString, BitString>> entries;

  void set(const BitString& node, const BitString& subject);
  std::optional<BitString> subject_of(const BitString& node) const;
};

/// Lines "node → subject"; "->" is accepted as the arrow.
Labelling read_labelling(std::istream& in);
void write_labelling(std::ostream& out, const Labelling& l);

struct LabelVerdict {
  bool valid = true;
  int condition = 0;  // first violated condition, 1..5
  BitString witness;  // offending node, or the missing subject for (3)
  std::string detail;
  /// Subjects placed on more than one node; allowed, reported only.
  std::vector<BitString> duplicate_subjects;
  /// Every subject of length 1..height appears.
  bool full = false;
};

/// Checks conditions (1)-(5). Throws a precondition error when a labelled
/// string is not a node of the tree.
LabelVerdict validate_labelling(const UTree& t, const Labelling& l);

struct LabelSearch {
  bool labelable = false;
  std::optional<Labelling> witness;
};

/// Exhaustive search for a full labelling. Height at most 4 and at most
/// 64 nodes per level, otherwise "instance too large for oracle".
LabelSearch is_fully_labelable_bruteforce(const UTree& t);

struct SpliceStep {
  std::size_t level = 0;
  BitString first;
  BitString second;
  BitString survivor;  // the lexicographically smaller of the two
};

struct SpliceResult {
  UTree tree;
  Labelling labelling;
  /// Old address -> new address for every node of the input tree; the
  /// absorbed sibling maps to the survivor.
  std::map<BitString, BitString> moved;
};

/// Merges two sibling nodes. The absorbed sibling's children take the next
/// free offsets under the survivor in order; when they do not fit, the
/// next level is widened by inserting zero bits, which shifts u.
SpliceResult splice(const UTree& t, const std::optional<Labelling>& l,
                    const BitString& a, const BitString& b);

struct Reduction {
  bool reducible = false;
  std::vector<SpliceStep> steps;
};

/// Decides whether splices turn t into a copy of the full binary tree of
/// its height. Search: top-down, each level's nodes below a merged node
/// are split into two groups, with memoization and descendant-count
/// pruning; the witnessing splices are then replayed and the result is
/// checked for isomorphism.
Reduction splice_reduce(const UTree& t);

/// Replays the steps, labels the binary copy and carries the labels back
/// to the nodes of t.
Labelling labelling_from_reduction(const UTree& t,
                                   const std::vector<SpliceStep>& steps);

/// Canonical shape of the tree as a partial order.
std::string shape(const UTree& t);
bool isomorphic(const UTree& a, const UTree& b);
bool is_full_binary(const UTree& t);

struct MeasureCondition {
  Dyadic sum;
  Dyadic measure;
  bool satisfied = false;
};

/// sum = Σ_{i<k} 2^(i-u_i), measure = |level k| * 2^(-u_{k-1}) with
/// k = level_count().
MeasureCondition measure_condition_check(const UTree& t);
/// Same comparison with the subject length at level j+1 counted as j+1:
/// sum = Σ_{i<k} 2^(i+1-u_i).
MeasureCondition shifted_measure_condition_check(const UTree& t);

/// Random tree of height 1..max_height with 1..max_width nodes per level,
/// embedded with the smallest gaps that fit (sometimes one bit more).
UTree random_utree(std::mt19937_64& rng, std::size_t max_height,
                   std::size_t max_width);

/// FNV-1a of the tree file text, 16 hex digits.
std::string instance_hash(const UTree& t);

struct SweepRow {
  std::string hash;
  bool labelable = false;
  bool reducible = false;
  bool condition = false;
  bool shifted_condition = false;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::vector<std::size_t> disagreements;  // rows where the deciders differ
  std::vector<std::size_t> condition_failures;  // condition holds, not labelable
  std::vector<std::size_t> shifted_condition_failures;
};

SweepRow classify(const UTree& t);
std::vector<UTree> sweep_instances(std::uint64_t seed, std::size_t count,
                                   std::size_t max_height,
                                   std::size_t max_width);
SweepReport sweep(std::uint64_t seed, std::size_t count,
                  std::size_t max_height, std::size_t max_width);
SweepReport sweep(const std::vector<UTree>& trees);
/// hash,labelable,reducible,condition_satisfied
std::string sweep_csv(const SweepReport& r);

}  // namespace kgcode

#endif  // KGCODE_LABELTREE_HPP
