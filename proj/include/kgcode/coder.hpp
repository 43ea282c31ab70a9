#ifndef KGCODE_CODER_HPP
#define KGCODE_CODER_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kgcode/bitstring.hpp"
#include "kgcode/clopen.hpp"
#include "kgcode/schedule.hpp"

namespace kgcode {

struct WordEvent {
  enum class Kind { assign, clear };
  std::size_t stage = 0;
  std::size_t slot = 0;
  Kind kind = Kind::assign;
  BitString word;  // the assigned word, or the one being cleared
};

/// The code words w_0(node) .. w_{2^m - 1}(node) for a node of length L(i):
/// distinct extendible extensions of length L(i+1).
struct WordTable {
  BitString node;
  std::size_t level = 0;
  std::vector<std::optional<BitString>> slots;
  std::vector<WordEvent> history;
  /// The process stopped because no fresh extendible extension existed.
  bool terminated = false;

  bool complete() const;
  /// Index of the slot holding `word`, if any.
  std::optional<std::size_t> slot_of(const BitString& word) const;
};

/// Runs the slot assignment process against a shrinking approximation.
/// Stage s+1 consults stage min(s+1, last) of `approx`. At each stage the
/// least slot that is undefined (a) or whose word left the class (b) is
/// acted on: (a) takes the lexicographically least extendible extension
/// not currently held by any slot, (b) clears the slot. Runs until a stage
/// at the final approximation has nothing to do, or until (a) finds no
/// candidate.
WordTable run_word_process(const ApproxSequence& approx, const Schedule& sched,
                           const BitString& node, std::size_t level);

/// The settled table against a fixed class. Throws "extension property
/// violated at <node>" when fewer than 2^m_i extendible extensions exist.
WordTable settle_words(const ClopenClass& p, const Schedule& sched,
                       const BitString& node, std::size_t level);

struct CodePath {
  BitString source;  // X restricted to M(levels)
  BitString code;    // Y restricted to L(levels)
  std::vector<std::size_t> slots;
  std::size_t levels = 0;
};

struct DecodeResult {
  BitString source;
  /// use[k]: oracle bits read when bit k became available.
  std::vector<std::uint64_t> use;
  std::vector<std::size_t> slots;
};

/// Read-only oracle access that records the furthest position touched.
class OracleTape {
 public:
  explicit OracleTape(const BitString& bits) : bits_(bits) {}

  bool at(std::size_t i);
  /// Reads positions [0, n).
  BitString read(std::size_t n);
  std::size_t high_water() const noexcept { return high_water_; }
  std::size_t size() const noexcept { return bits_.size(); }

 private:
  const BitString& bits_;
  std::size_t high_water_ = 0;
};

/// Encoder and decoder sharing memoized word tables over one class.
/// Single writer; a settled session may be read concurrently.
class CodingSession {
 public:
  CodingSession(ClopenClass p, Schedule sched)
      : p_(std::move(p)), sched_(std::move(sched)) {}

  const ClopenClass& cls() const noexcept { return p_; }
  const Schedule& schedule() const noexcept { return sched_; }

  const WordTable& table(const BitString& node, std::size_t level);

  /// |x| must equal M(n) for some n with L(n) <= depth.
  CodePath encode(const BitString& x);
  /// Decodes `levels` blocks from the oracle prefix.
  DecodeResult decode(const BitString& y, std::size_t levels);

  std::size_t memo_size() const noexcept { return memo_.size(); }

 private:
  ClopenClass p_;
  Schedule sched_;
  std::map<BitString, WordTable> memo_;
};

CodePath encode(const BitString& x, const ClopenClass& p,
                const Schedule& sched);
DecodeResult decode(const BitString& y, const ClopenClass& p,
                    const Schedule& sched, std::size_t levels);

struct EndToEndResult {
  CodePath path;
  PruneResult pruning;
  DecodeResult check;  // decode of path.code against the pruned class
};

/// Checks the measure budget, prunes P, encodes X against the pruned class
/// and decodes the result again to confirm the round trip and use profile.
EndToEndResult end_to_end(const BitString& x, const ClopenClass& p,
                          const Schedule& sched);

/// Code file: "bits=", "schedule=", "levels=", "code=", "slots=" lines.
struct CodeFile {
  std::uint64_t bits = 0;  // original source length before padding
  std::string schedule;
  std::size_t levels = 0;
  BitString code;
  std::vector<std::size_t> slots;
};

void write_code_file(std::ostream& out, const CodeFile& file);
CodeFile read_code_file(std::istream& in);

/// CSV: bit,block,use
std::string use_profile_csv(const Schedule& sched,
                            const std::vector<std::uint64_t>& use);

}  // namespace kgcode

#endif  // KGCODE_CODER_HPP
