#ifndef KGCODE_SCHEDULE_HPP
#define KGCODE_SCHEDULE_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kgcode/dyadic.hpp"

namespace kgcode {

/// ceil(2 * log2(i + 2)), computed as the bit length of (i+2)^2 - 1.
unsigned log_overhead(std::size_t i);

/// Block-length sequences: m(i) source bits are coded into l(i) oracle bits
/// at step i. M(n) and L(n) are the running sums over i < n.
class Schedule {
 public:
  enum class Kind { kucera, gacs, square, sqrt, custom };

  /// m(i) = 1, l(i) = 1 + log_overhead(i).
  static Schedule kucera();
  /// m(i) = i + 1, l(i) = m(i) + log_overhead(i).
  static Schedule gacs();
  /// m(i) = (i + 1)^2 with the same overhead; for comparison runs only.
  static Schedule square();
  /// m(i) = floor(sqrt(i + 1)) with the same overhead; comparison only.
  static Schedule sqrt();
  /// Explicit finite lists. Throws "negative overhead" if some l < m.
  static Schedule custom(std::vector<unsigned> m, std::vector<unsigned> l);

  /// "kucera", "gacs", "square", "sqrt" or "custom:m=1,2;l=3,4".
  static Schedule parse(std::string_view spec);

  Kind kind() const noexcept { return kind_; }
  /// Canonical text form, round-trips through parse().
  std::string spec() const;

  /// Number of defined blocks; nullopt for the infinite presets.
  std::optional<std::size_t> block_count() const;

  unsigned m(std::size_t i) const;
  unsigned l(std::size_t i) const;
  unsigned g(std::size_t i) const { return l(i) - m(i); }

  std::uint64_t M(std::size_t n) const;
  std::uint64_t L(std::size_t n) const;

  /// The unique s with M(s) <= bit < M(s+1).
  std::size_t block_of(std::uint64_t bit) const;
  /// n with M(n) == bits, if there is one.
  std::optional<std::size_t> levels_for_source(std::uint64_t bits) const;
  /// Smallest n with M(n) >= bits.
  std::size_t levels_covering(std::uint64_t bits) const;

  friend bool operator==(const Schedule&, const Schedule&) = default;

 private:
  Schedule(Kind kind, std::vector<unsigned> m, std::vector<unsigned> l)
      : kind_(kind), m_(std::move(m)), l_(std::move(l)) {}
  void check_index(std::size_t i) const;

  Kind kind_;
  std::vector<unsigned> m_;
  std::vector<unsigned> l_;
};

struct ConvergenceMargin {
  Dyadic partial_sum;
  bool within = false;
};

/// Exact sum over i < k of 2^(m_i - l_i), and whether it is strictly below
/// `budget`.
ConvergenceMargin convergence_margin(const Schedule& s, std::size_t k,
                                     const Dyadic& budget);

/// Oracle bits consulted for source bit `bit`: L(s+1) for its block s.
std::uint64_t oracle_use_bound(const Schedule& s, std::uint64_t bit);

/// Exact three-way comparison of an integer r against sqrt(n) * log2(n),
/// for n >= 1. Interval refinement on big integers; no floating point.
std::strong_ordering compare_sqrt_log2(std::uint64_t r, std::uint64_t n);

struct RedundancyRow {
  std::uint64_t n = 0;
  std::uint64_t use = 0;
  std::uint64_t redundancy = 0;
  double bound_nlogn = 0;      // n * log2 n, display column
  double bound_sqrtnlogn = 0;  // sqrt(n) * log2 n, display column
};

struct RedundancyReport {
  std::string schedule;
  std::vector<RedundancyRow> rows;
  /// partial_sums[k] = sum over i < k of 2^(m_i - l_i), k up to the
  /// number of blocks touched by the report.
  std::vector<Dyadic> partial_sums;
};

/// Rows for n = 1..n_max. use(n) = oracle_use_bound(s, n - 1), the oracle
/// length read once the first n source bits are out.
RedundancyReport redundancy_report(const Schedule& s, std::uint64_t n_max);

/// CSV: n,use,redundancy,bound_nlogn,bound_sqrtnlogn
std::string to_csv(const RedundancyReport& report);

}  // namespace kgcode

#endif  // KGCODE_SCHEDULE_HPP
