#include "kgcode/clopen.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <string>

#include "kgcode/error.hpp"

namespace kgcode {

namespace {

using Integer = ClopenClass::Integer;

void check_length(const ClopenClass& c, const BitString& sigma) {
  if (sigma.size() > c.depth())
    fail(ErrorKind::precondition, "string deeper than class approximation");
}

void check_schedule_depth(const ClopenClass& c, const Schedule& sched,
                          std::size_t levels) {
  const std::uint64_t need = sched.L(levels);
  if (need > c.depth())
    fail(ErrorKind::precondition,
         "schedule needs depth L(" + std::to_string(levels) +
             ") = " + std::to_string(need) + " but the class has depth " +
             std::to_string(c.depth()));
}

bool siblings(const BitString& a, const BitString& b) {
  const std::size_t n = a.size();
  if (n == 0 || b.size() != n || a[n - 1] || !b[n - 1]) return false;
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (a[i] != b[i]) return false;
  return true;
}

std::uint64_t saturating_pow2(std::size_t k) {
  return k >= 63 ? (std::uint64_t{1} << 63) : (std::uint64_t{1} << k);
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t cap = std::uint64_t{1} << 63;
  return (a >= cap || b >= cap || a + b >= cap) ? cap : a + b;
}

// Appends every length-`length` extension of `base`, in order, until `out`
// holds `limit` strings.
void append_extensions(const BitString& base, unsigned length,
                       std::size_t limit, std::vector<BitString>& out) {
  const std::size_t free_bits = length - base.size();
  for (std::uint64_t k = 0; out.size() < limit; ++k) {
    if (free_bits < 64 && k >= (std::uint64_t{1} << free_bits)) break;
    out.push_back(base + BitString::from_index(k, free_bits));
  }
}

struct LevelGeometry {
  unsigned length = 0;  // L(i)
  unsigned next = 0;    // L(i+1)
  unsigned m = 0;
  unsigned g = 0;
};

std::vector<LevelGeometry> geometry(const Schedule& sched,
                                    std::size_t levels) {
  std::vector<LevelGeometry> out;
  std::uint64_t length = 0;
  for (std::size_t i = 0; i < levels; ++i) {
    LevelGeometry lv;
    lv.length = static_cast<unsigned>(length);
    lv.m = sched.m(i);
    lv.g = sched.g(i);
    length += sched.l(i);
    lv.next = static_cast<unsigned>(length);
    out.push_back(lv);
  }
  return out;
}

}  // namespace

ClopenClass::ClopenClass(unsigned depth, std::vector<BitString> generators)
    : depth_(depth) {
  for (const auto& g : generators)
    if (g.size() > depth)
      fail(ErrorKind::precondition, "generator '" + node_text(g) +
                                        "' is longer than the class depth");
  std::sort(generators.begin(), generators.end());
  generators.erase(std::unique(generators.begin(), generators.end()),
                   generators.end());
  gens_.reserve(generators.size());
  for (auto& g : generators) {
    if (!gens_.empty() && gens_.back().is_prefix_of(g)) continue;
    gens_.push_back(std::move(g));
    while (gens_.size() >= 2 &&
           siblings(gens_[gens_.size() - 2], gens_.back())) {
      BitString parent = gens_.back().prefix(gens_.back().size() - 1);
      gens_.pop_back();
      gens_.back() = std::move(parent);
    }
  }
}

ClopenClass ClopenClass::from_members(unsigned depth,
                                      std::span<const BitString> members) {
  std::vector<BitString> sorted(members.begin(), members.end());
  for (const auto& s : sorted)
    if (s.size() != depth)
      fail(ErrorKind::input, "wrong-length member '" + node_text(s) + "'");
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    fail(ErrorKind::input, "duplicate member in class");
  return ClopenClass(depth, std::move(sorted));
}

Integer ClopenClass::member_count() const {
  Integer total = 0;
  for (const auto& g : gens_) total += Integer(1) << (depth_ - g.size());
  return total;
}

std::vector<BitString> ClopenClass::members(std::size_t cap) const {
  if (member_count() > cap)
    fail(ErrorKind::precondition,
         "class has too many members to list explicitly");
  std::vector<BitString> out;
  for (const auto& g : gens_)
    append_extensions(g, depth_, static_cast<std::size_t>(-1), out);
  return out;
}

bool ClopenClass::contains(const BitString& x) const {
  return x.size() == depth_ && covers(x);
}

std::pair<std::size_t, std::size_t> ClopenClass::range_of(
    const BitString& sigma) const {
  check_length(*this, sigma);
  const auto first = std::lower_bound(gens_.begin(), gens_.end(), sigma);
  const auto last =
      std::partition_point(first, gens_.end(), [&](const BitString& g) {
        return sigma.is_prefix_of(g);
      });
  return {static_cast<std::size_t>(first - gens_.begin()),
          static_cast<std::size_t>(last - gens_.begin())};
}

bool ClopenClass::covers(const BitString& sigma) const {
  check_length(*this, sigma);
  const auto it = std::lower_bound(gens_.begin(), gens_.end(), sigma);
  if (it != gens_.end() && *it == sigma) return true;
  return it != gens_.begin() && std::prev(it)->is_prefix_of(sigma);
}

Dyadic measure(const ClopenClass& c) {
  Dyadic total;
  for (const auto& g : c.generators())
    total += Dyadic::pow2(-static_cast<long>(g.size()));
  return total;
}

bool is_extendible(const ClopenClass& c, const BitString& sigma) {
  if (c.covers(sigma)) return true;
  const auto [first, last] = c.range_of(sigma);
  return first != last;
}

Dyadic density(const ClopenClass& c, const BitString& sigma) {
  if (c.covers(sigma)) return Dyadic(1);
  const auto [first, last] = c.range_of(sigma);
  Dyadic total;
  const auto gens = c.generators();
  for (std::size_t k = first; k < last; ++k)
    total += Dyadic::pow2(static_cast<long>(sigma.size()) -
                          static_cast<long>(gens[k].size()));
  return total;
}

std::vector<BitString> extendible_extensions(const ClopenClass& c,
                                             const BitString& sigma,
                                             unsigned length,
                                             std::size_t limit) {
  if (length < sigma.size() || length > c.depth())
    fail(ErrorKind::precondition, "extension length outside class depth");
  std::vector<BitString> out;
  if (c.covers(sigma)) {
    append_extensions(sigma, length, limit, out);
    return out;
  }
  const auto [first, last] = c.range_of(sigma);
  const auto gens = c.generators();
  for (std::size_t k = first; k < last && out.size() < limit; ++k) {
    const BitString& g = gens[k];
    if (g.size() >= length) {
      BitString tau = g.prefix(length);
      if (out.empty() || out.back() != tau) out.push_back(std::move(tau));
    } else {
      append_extensions(g, length, limit, out);
    }
  }
  return out;
}

namespace {

void difference_into(const ClopenClass& b, const BitString& c,
                     std::vector<BitString>& out) {
  if (b.covers(c)) return;
  const auto [first, last] = b.range_of(c);
  if (first == last) {
    out.push_back(c);
    return;
  }
  BitString left = c, right = c;
  left.push_back(false);
  right.push_back(true);
  difference_into(b, left, out);
  difference_into(b, right, out);
}

}  // namespace

ClopenClass difference(const ClopenClass& a, const ClopenClass& b) {
  if (a.depth() != b.depth())
    fail(ErrorKind::precondition, "class depths differ");
  std::vector<BitString> out;
  for (const auto& g : a.generators()) difference_into(b, g, out);
  return ClopenClass(a.depth(), std::move(out));
}

bool is_subset(const ClopenClass& a, const ClopenClass& b) {
  if (a.depth() != b.depth()) return false;
  // Canonical generators are maximal, so [g] inside b means some
  // generator of b is a prefix of g.
  for (const auto& g : a.generators())
    if (!b.covers(g)) return false;
  return true;
}

ApproxSequence::ApproxSequence(std::vector<ClopenClass> stages)
    : stages_(std::move(stages)) {
  if (stages_.empty())
    fail(ErrorKind::precondition, "approximation needs at least one stage");
  for (std::size_t s = 1; s < stages_.size(); ++s) {
    if (!is_subset(stages_[s], stages_[s - 1]))
      fail(ErrorKind::precondition,
           "approximation stage " + std::to_string(s) +
               " is not contained in the previous stage");
  }
}

namespace {

Integer as_integer(std::uint64_t w) { return Integer(w); }
const Integer& as_integer(const Integer& w) { return w; }

// Range sums of generator weights under deletion.
template <typename W>
class Fenwick {
 public:
  explicit Fenwick(const std::vector<W>& weights)
      : tree_(weights.size() + 1, W(0)) {
    for (std::size_t i = 1; i < tree_.size(); ++i) {
      tree_[i] += weights[i - 1];
      const std::size_t parent = i + (i & (~i + 1));
      if (parent < tree_.size()) tree_[parent] += tree_[i];
    }
  }
  void subtract(std::size_t pos, const W& w) {
    for (std::size_t i = pos + 1; i < tree_.size(); i += i & (~i + 1))
      tree_[i] -= w;
  }
  W prefix(std::size_t end) const {
    W total(0);
    for (std::size_t i = end; i > 0; i -= i & (~i + 1)) total += tree_[i];
    return total;
  }
  W range(std::size_t first, std::size_t last) const {
    return prefix(last) - prefix(first);
  }

 private:
  std::vector<W> tree_;
};

// W counts length-d members: uint64 while 2^depth fits, big integers
// beyond that.
template <typename W>
PruneResult prune_impl(const ClopenClass& p, const Schedule& sched,
                       std::size_t levels, const Dyadic& budget) {
  const unsigned d = p.depth();
  const auto gens = p.generators();
  const std::size_t n = gens.size();
  const auto geo = geometry(sched, levels);

  std::vector<W> weight(n);
  for (std::size_t k = 0; k < n; ++k)
    weight[k] = W(1) << (d - gens[k].size());

  // Density at most 2^(m_i - l_i) means a member count at most
  // 2^(d - L_i - g_i). Every g_i >= 1 once the budget check passed, so
  // strings inside a single generator never qualify.
  std::vector<W> threshold;
  for (const auto& lv : geo) threshold.push_back(W(1) << (d - lv.length - lv.g));

  std::vector<char> alive(n, 1);
  Fenwick<W> counts(weight);

  using Key = std::pair<std::size_t, BitString>;  // (level, node)
  std::set<Key> pending;
  for (std::size_t lvl = 0; lvl < geo.size(); ++lvl) {
    const unsigned len = geo[lvl].length;
    BitString last_node;
    bool have_last = false;
    for (std::size_t k = 0; k < n; ++k) {
      if (gens[k].size() <= len) continue;
      BitString node = gens[k].prefix(len);
      if (have_last && node == last_node) continue;
      const auto [first, last] = p.range_of(node);
      if (counts.range(first, last) <= threshold[lvl])
        pending.emplace(lvl, node);
      last_node = std::move(node);
      have_last = true;
    }
  }

  PruneResult result;
  result.budget = budget;
  std::vector<BitString> removed;
  while (!pending.empty()) {
    auto node_it = pending.begin();
    const std::size_t lvl = node_it->first;
    const BitString node = node_it->second;
    pending.erase(node_it);

    const auto& lv = geo[lvl];
    const auto [first, last] = p.range_of(node);
    const W count = counts.range(first, last);
    if (count == W(0)) continue;
    if (count > threshold[lvl])
      fail(ErrorKind::internal, "pruning count increased");

    PruneAction act;
    act.step = result.trace.size() + 1;
    act.level = lvl;
    act.node = node;
    act.density_before = Dyadic(as_integer(count), d - lv.length);
    act.removed = Dyadic(as_integer(count), d);
    result.trace.push_back(std::move(act));

    for (std::size_t k = first; k < last; ++k) {
      if (!alive[k]) continue;
      alive[k] = 0;
      counts.subtract(k, weight[k]);
      removed.push_back(gens[k]);
    }
    // Only ancestors of the acted string lose mass.
    for (std::size_t up = 0; up < lvl; ++up) {
      BitString anc = node.prefix(geo[up].length);
      const auto [a, b] = p.range_of(anc);
      const W c = counts.range(a, b);
      if (c > W(0) && c <= threshold[up]) pending.emplace(up, std::move(anc));
    }
  }

  std::vector<BitString> survivors;
  survivors.reserve(n - removed.size());
  for (std::size_t k = 0; k < n; ++k)
    if (alive[k]) survivors.push_back(gens[k]);
  result.pstar = ClopenClass(d, std::move(survivors));
  result.removed = ClopenClass(d, std::move(removed));
  return result;
}

}  // namespace

PruneResult prune(const ClopenClass& p, const Schedule& sched,
                  std::size_t levels) {
  check_schedule_depth(p, sched, levels);
  const auto margin = convergence_margin(sched, levels, measure(p));
  if (!margin.within)
    fail(ErrorKind::precondition,
         "measure budget exhausted: sum of 2^(m_i-l_i) over i<" +
             std::to_string(levels) + " is " + margin.partial_sum.str() +
             ", not below measure " + measure(p).str());
  if (p.depth() < 64)
    return prune_impl<std::uint64_t>(p, sched, levels, margin.partial_sum);
  return prune_impl<Integer>(p, sched, levels, margin.partial_sum);
}

namespace {

// Calls `check` once per extendible level string that is not covered by a
// single generator, in (level, lex) order, and stops at the first failure.
// Covered strings pass both properties outright: density 1 and 2^l_i
// extendible extensions.
template <typename Check>
PropertyVerdict scan_levels(const ClopenClass& c, const Schedule& sched,
                            std::size_t levels, Check check) {
  check_schedule_depth(c, sched, levels);
  const auto geo = geometry(sched, levels);
  const auto gens = c.generators();
  const std::size_t n = gens.size();
  for (std::size_t lvl = 0; lvl < geo.size(); ++lvl) {
    const auto& lv = geo[lvl];
    if (lv.m >= 63)
      fail(ErrorKind::precondition, "block length too large to verify");
    std::size_t k = 0;
    while (k < n) {
      if (gens[k].size() <= lv.length) {
        ++k;
        continue;
      }
      const BitString node = gens[k].prefix(lv.length);
      PropertyFailure f;
      f.level = lvl;
      f.node = node;
      f.required = std::uint64_t{1} << lv.m;
      f.threshold = Dyadic::pow2(-static_cast<long>(lv.g));
      BitString last_tau;
      bool have_tau = false;
      while (k < n && node.is_prefix_of(gens[k])) {
        const BitString& g = gens[k];
        if (g.size() >= lv.next) {
          BitString tau = g.prefix(lv.next);
          if (!have_tau || tau != last_tau) {
            f.extensions = saturating_add(f.extensions, 1);
            last_tau = std::move(tau);
            have_tau = true;
          }
        } else {
          f.extensions =
              saturating_add(f.extensions, saturating_pow2(lv.next - g.size()));
        }
        f.density += Dyadic::pow2(static_cast<long>(lv.length) -
                                  static_cast<long>(g.size()));
        ++k;
      }
      if (!check(f)) return PropertyVerdict{false, std::move(f)};
    }
  }
  return PropertyVerdict{};
}

}  // namespace

PropertyVerdict verify_extension_property(const ClopenClass& c,
                                          const Schedule& sched,
                                          std::size_t levels) {
  return scan_levels(c, sched, levels, [](const PropertyFailure& f) {
    return f.extensions >= f.required;
  });
}

PropertyVerdict verify_density_property(const ClopenClass& c,
                                        const Schedule& sched,
                                        std::size_t levels) {
  return scan_levels(c, sched, levels, [](const PropertyFailure& f) {
    return f.density >= f.threshold;
  });
}

ClopenClass read_class(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  unsigned long depth = 0;
  bool have_header = false;
  while (!have_header && std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = " at line " + std::to_string(line_no);
    if (line.rfind("depth ", 0) != 0)
      fail(ErrorKind::input, "expected 'depth d' header" + where);
    const std::string digits = line.substr(6);
    if (digits.empty() || digits.size() > 6 ||
        digits.find_first_not_of("0123456789") != std::string::npos)
      fail(ErrorKind::input, "malformed depth header" + where);
    depth = std::stoul(digits);
    have_header = true;
  }
  if (!have_header) fail(ErrorKind::input, "missing 'depth d' header");

  std::vector<BitString> gens;
  BitString prev;
  bool have_prev = false, prev_cylinder = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = " at line " + std::to_string(line_no);
    const bool cylinder = line.back() == '*';
    if (cylinder) line.pop_back();
    BitString s;
    try {
      s = (cylinder && line.empty()) ? BitString{} : parse_node_text(line);
    } catch (const Error&) {
      fail(ErrorKind::input, "invalid member" + where);
    }
    if (cylinder ? s.size() > depth : s.size() != depth)
      fail(ErrorKind::input, "wrong-length member" + where);
    if (have_prev) {
      if (s == prev || (prev_cylinder && prev.is_prefix_of(s)))
        fail(ErrorKind::input, "duplicate member" + where);
      if (s < prev) fail(ErrorKind::input, "unsorted member" + where);
    }
    prev = s;
    prev_cylinder = cylinder;
    have_prev = true;
    gens.push_back(std::move(s));
  }
  return ClopenClass(static_cast<unsigned>(depth), std::move(gens));
}

void write_class(std::ostream& out, const ClopenClass& c,
                 std::size_t explicit_cap) {
  out << "depth " << c.depth() << '\n';
  if (c.member_count() <= explicit_cap) {
    for (const auto& x : c.members(explicit_cap)) out << node_text(x) << '\n';
    return;
  }
  for (const auto& g : c.generators()) {
    if (g.size() == c.depth())
      out << node_text(g) << '\n';
    else
      out << g.str() << "*\n";
  }
}

}  // namespace kgcode
