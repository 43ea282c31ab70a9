#include "kgcode/schedule.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "kgcode/error.hpp"

namespace kgcode {

namespace {

using Integer = Dyadic::Integer;

std::vector<unsigned> parse_list(std::string_view text) {
  std::vector<unsigned> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view item =
        text.substr(pos, comma == std::string_view::npos ? text.npos
                                                         : comma - pos);
    if (item.empty()) fail(ErrorKind::input, "empty entry in schedule list");
    unsigned value = 0;
    for (char c : item) {
      if (c < '0' || c > '9')
        fail(ErrorKind::input,
             "invalid schedule entry '" + std::string(item) + "'");
      value = value * 10 + static_cast<unsigned>(c - '0');
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string join(const std::vector<unsigned>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(v[i]);
  }
  return out;
}

std::uint64_t isqrt(std::uint64_t x) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(x)));
  while (r * r > x) --r;
  while ((r + 1) * (r + 1) <= x) ++r;
  return r;
}

// floor(log2(x)) for x >= 1.
std::uint64_t floor_log2(const Integer& x) {
  return boost::multiprecision::msb(x);
}

}  // namespace

unsigned log_overhead(std::size_t i) {
  const std::uint64_t base = i + 2;
  return static_cast<unsigned>(std::bit_width(base * base - 1));
}

Schedule Schedule::kucera() { return Schedule(Kind::kucera, {}, {}); }
Schedule Schedule::gacs() { return Schedule(Kind::gacs, {}, {}); }
Schedule Schedule::square() { return Schedule(Kind::square, {}, {}); }
Schedule Schedule::sqrt() { return Schedule(Kind::sqrt, {}, {}); }

Schedule Schedule::custom(std::vector<unsigned> m, std::vector<unsigned> l) {
  if (m.size() != l.size())
    fail(ErrorKind::input, "custom schedule needs equally long m and l lists");
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] == 0 || l[i] == 0)
      fail(ErrorKind::input, "block lengths must be positive");
    if (l[i] < m[i])
      fail(ErrorKind::input, "negative overhead at block " + std::to_string(i));
  }
  return Schedule(Kind::custom, std::move(m), std::move(l));
}

Schedule Schedule::parse(std::string_view spec) {
  if (spec == "kucera") return kucera();
  if (spec == "gacs") return gacs();
  if (spec == "square") return square();
  if (spec == "sqrt") return sqrt();
  constexpr std::string_view prefix = "custom:";
  if (spec.substr(0, prefix.size()) == prefix) {
    std::string_view rest = spec.substr(prefix.size());
    const std::size_t semi = rest.find(';');
    if (semi == std::string_view::npos)
      fail(ErrorKind::input, "custom schedule must be custom:m=...;l=...");
    std::string_view mpart = rest.substr(0, semi);
    std::string_view lpart = rest.substr(semi + 1);
    if (mpart.substr(0, 2) != "m=" || lpart.substr(0, 2) != "l=")
      fail(ErrorKind::input, "custom schedule must be custom:m=...;l=...");
    return custom(parse_list(mpart.substr(2)), parse_list(lpart.substr(2)));
  }
  fail(ErrorKind::input, "unknown schedule '" + std::string(spec) + "'");
}

std::string Schedule::spec() const {
  switch (kind_) {
    case Kind::kucera: return "kucera";
    case Kind::gacs: return "gacs";
    case Kind::square: return "square";
    case Kind::sqrt: return "sqrt";
    case Kind::custom: return "custom:m=" + join(m_) + ";l=" + join(l_);
  }
  return {};
}

std::optional<std::size_t> Schedule::block_count() const {
  if (kind_ == Kind::custom) return m_.size();
  return std::nullopt;
}

void Schedule::check_index(std::size_t i) const {
  if (kind_ == Kind::custom && i >= m_.size())
    fail(ErrorKind::precondition,
         "schedule defines only " + std::to_string(m_.size()) + " blocks");
}

unsigned Schedule::m(std::size_t i) const {
  check_index(i);
  switch (kind_) {
    case Kind::kucera: return 1;
    case Kind::gacs: return static_cast<unsigned>(i + 1);
    case Kind::square: return static_cast<unsigned>((i + 1) * (i + 1));
    case Kind::sqrt: return static_cast<unsigned>(isqrt(i + 1));
    case Kind::custom: return m_[i];
  }
  return 0;
}

unsigned Schedule::l(std::size_t i) const {
  if (kind_ == Kind::custom) {
    check_index(i);
    return l_[i];
  }
  return m(i) + log_overhead(i);
}

std::uint64_t Schedule::M(std::size_t n) const {
  if (kind_ == Kind::kucera) return n;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += m(i);
  return total;
}

std::uint64_t Schedule::L(std::size_t n) const {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += l(i);
  return total;
}

std::size_t Schedule::block_of(std::uint64_t bit) const {
  std::uint64_t start = 0;
  for (std::size_t s = 0;; ++s) {
    const std::uint64_t end = start + m(s);
    if (bit < end) return s;
    start = end;
  }
}

std::optional<std::size_t> Schedule::levels_for_source(
    std::uint64_t bits) const {
  std::uint64_t total = 0;
  for (std::size_t n = 0;; ++n) {
    if (total == bits) return n;
    if (total > bits) return std::nullopt;
    if (block_count() && n >= *block_count()) return std::nullopt;
    total += m(n);
  }
}

std::size_t Schedule::levels_covering(std::uint64_t bits) const {
  std::uint64_t total = 0;
  std::size_t n = 0;
  while (total < bits) total += m(n++);
  return n;
}

ConvergenceMargin convergence_margin(const Schedule& s, std::size_t k,
                                     const Dyadic& budget) {
  ConvergenceMargin out;
  for (std::size_t i = 0; i < k; ++i)
    out.partial_sum += Dyadic::pow2(-static_cast<long>(s.g(i)));
  out.within = out.partial_sum < budget;
  return out;
}

std::uint64_t oracle_use_bound(const Schedule& s, std::uint64_t bit) {
  return s.L(s.block_of(bit) + 1);
}

std::strong_ordering compare_sqrt_log2(std::uint64_t r, std::uint64_t n) {
  if (n == 0) fail(ErrorKind::precondition, "sqrt-log bound needs n >= 1");
  if (n == 1) return r <=> std::uint64_t{0};
  // r vs sqrt(n) * log2(n)  <=>  r^2 vs n * log2(n)^2.
  // With q a power of two: floor(q log2 n) = floor_log2(n^q) brackets
  // log2 n in [a/q, (a+1)/q], exact when n is a power of two.
  const Integer r2 = Integer(r) * r;
  const bool pow2 = std::has_single_bit(n);
  for (unsigned q = 16; q <= (1u << 16); q *= 2) {
    const Integer nq = boost::multiprecision::pow(Integer(n), q);
    const Integer a = floor_log2(nq);
    // Bounds on r^2 * q^2 against n * (q log2 n)^2.
    const Integer lhs = r2 * q * q;
    const Integer lo = Integer(n) * a * a;
    if (pow2) return lhs.compare(lo) <=> 0;
    const Integer hi = Integer(n) * (a + 1) * (a + 1);
    if (lhs < lo) return std::strong_ordering::less;
    if (lhs > hi) return std::strong_ordering::greater;
  }
  fail(ErrorKind::internal, "sqrt-log comparison did not separate");
}

RedundancyReport redundancy_report(const Schedule& s, std::uint64_t n_max) {
  RedundancyReport report;
  report.schedule = s.spec();
  report.rows.reserve(n_max);

  std::size_t block = 0;
  std::uint64_t block_end = s.m(0);
  std::uint64_t use = s.l(0);
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    while (n > block_end) {
      ++block;
      block_end += s.m(block);
      use += s.l(block);
    }
    RedundancyRow row;
    row.n = n;
    row.use = use;
    row.redundancy = use - n;
    const double lg = std::log2(static_cast<double>(n));
    row.bound_nlogn = static_cast<double>(n) * lg;
    row.bound_sqrtnlogn = std::sqrt(static_cast<double>(n)) * lg;
    report.rows.push_back(row);
  }

  Dyadic running;
  report.partial_sums.push_back(running);
  for (std::size_t i = 0; i <= block; ++i) {
    running += Dyadic::pow2(-static_cast<long>(s.g(i)));
    report.partial_sums.push_back(running);
  }
  return report;
}

std::string to_csv(const RedundancyReport& report) {
  std::ostringstream out;
  out << "n,use,redundancy,bound_nlogn,bound_sqrtnlogn\n";
  char buf[64];
  for (const auto& row : report.rows) {
    out << row.n << ',' << row.use << ',' << row.redundancy << ',';
    std::snprintf(buf, sizeof buf, "%.6f,%.6f", row.bound_nlogn,
                  row.bound_sqrtnlogn);
    out << buf << '\n';
  }
  return out.str();
}

}  // namespace kgcode
