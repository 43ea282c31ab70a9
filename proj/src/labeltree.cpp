#include "kgcode/labeltree.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <deque>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "kgcode/error.hpp"
#include "kgcode/random.hpp"

namespace kgcode {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

BitString zeros(std::size_t n) {
  BitString z;
  for (std::size_t i = 0; i < n; ++i) z.push_back(false);
  return z;
}

std::string subject_text(const BitString& s) { return "x_" + node_text(s); }

}  // namespace

UTree::UTree(std::vector<unsigned> u, std::vector<BitString> nodes)
    : u_(std::move(u)) {
  for (std::size_t i = 0; i < u_.size(); ++i) {
    if (u_[i] == 0) fail(ErrorKind::input, "u must be positive");
    if (i > 0 && u_[i] <= u_[i - 1])
      fail(ErrorKind::input, "u must be strictly increasing");
  }
  levels_.assign(u_.size() + 1, {});
  levels_[0].push_back(BitString{});
  for (auto& node : nodes) {
    if (node.empty()) continue;
    const auto it = std::lower_bound(u_.begin(), u_.end(), node.size());
    if (it == u_.end() || *it != node.size())
      fail(ErrorKind::input, "node " + node.str() + " has length " +
                                 std::to_string(node.size()) +
                                 ", which is not in u");
    levels_[static_cast<std::size_t>(it - u_.begin()) + 1].push_back(
        std::move(node));
  }
  for (std::size_t j = 1; j < levels_.size(); ++j) {
    auto& lv = levels_[j];
    std::sort(lv.begin(), lv.end());
    const auto dup = std::adjacent_find(lv.begin(), lv.end());
    if (dup != lv.end()) fail(ErrorKind::input, "duplicate node " + dup->str());
    for (const auto& node : lv) {
      const BitString up = node.prefix(length_at(j - 1));
      if (!std::binary_search(levels_[j - 1].begin(), levels_[j - 1].end(),
                              up))
        fail(ErrorKind::input,
             "node " + node.str() + " has no parent in the tree");
    }
  }
}

std::size_t UTree::height() const noexcept {
  std::size_t h = 0;
  for (std::size_t j = 0; j < levels_.size(); ++j)
    if (!levels_[j].empty()) h = j;
  return h;
}

std::optional<std::size_t> UTree::level_of(const BitString& node) const {
  if (node.empty()) return 0;
  const auto it = std::lower_bound(u_.begin(), u_.end(), node.size());
  if (it == u_.end() || *it != node.size()) return std::nullopt;
  const std::size_t j = static_cast<std::size_t>(it - u_.begin()) + 1;
  if (!std::binary_search(levels_[j].begin(), levels_[j].end(), node))
    return std::nullopt;
  return j;
}

bool UTree::contains(const BitString& node) const {
  return level_of(node).has_value();
}

std::vector<BitString> UTree::children(const BitString& node) const {
  const auto j = level_of(node);
  if (!j) fail(ErrorKind::precondition, node_text(node) + " is not a node");
  if (*j + 1 >= levels_.size()) return {};
  const auto& up = levels_[*j + 1];
  std::vector<BitString> out;
  for (auto it = std::lower_bound(up.begin(), up.end(), node);
       it != up.end() && node.is_prefix_of(*it); ++it)
    out.push_back(*it);
  return out;
}

BitString UTree::parent(const BitString& node) const {
  const auto j = level_of(node);
  if (!j || *j == 0)
    fail(ErrorKind::precondition, node_text(node) + " has no parent");
  return node.prefix(length_at(*j - 1));
}

std::vector<BitString> UTree::nodes() const {
  std::vector<BitString> out;
  for (const auto& lv : levels_) out.insert(out.end(), lv.begin(), lv.end());
  return out;
}

std::size_t UTree::node_count() const noexcept {
  std::size_t n = 0;
  for (const auto& lv : levels_) n += lv.size();
  return n;
}

UTree read_tree(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::vector<unsigned>> u;
  std::vector<BitString> nodes;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (!u) {
      if (line.rfind("u:", 0) != 0) fail(ErrorKind::input, "missing 'u:' header");
      u.emplace();
      std::istringstream items(line.substr(2));
      std::string item;
      while (items >> item) {
        if (item.size() > 9 ||
            item.find_first_not_of("0123456789") != std::string::npos)
          fail(ErrorKind::input, "invalid level length at line " +
                                     std::to_string(line_no));
        u->push_back(static_cast<unsigned>(std::stoul(item)));
      }
      continue;
    }
    try {
      nodes.push_back(parse_node_text(line));
    } catch (const Error&) {
      fail(ErrorKind::input, "invalid node at line " + std::to_string(line_no));
    }
  }
  if (!u) fail(ErrorKind::input, "missing 'u:' header");
  return UTree(std::move(*u), std::move(nodes));
}

void write_tree(std::ostream& out, const UTree& t) { out << tree_text(t); }

std::string tree_text(const UTree& t) {
  std::string s = "u:";
  for (unsigned x : t.u()) s += " " + std::to_string(x);
  s += '\n';
  for (const auto& node : t.nodes()) s += node_text(node) + '\n';
  return s;
}

void Labelling::set(const BitString& node, const BitString& subject) {
  for (auto& [n, s] : entries)
    if (n == node) {
      s = subject;
      return;
    }
  entries.emplace_back(node, subject);
}

std::optional<BitString> Labelling::subject_of(const BitString& node) const {
  for (const auto& [n, s] : entries)
    if (n == node) return s;
  return std::nullopt;
}

Labelling read_labelling(std::istream& in) {
  Labelling l;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::size_t arrow = line.find("→");
    std::size_t width = 3;
    if (arrow == std::string::npos) {
      arrow = line.find("->");
      width = 2;
    }
    if (arrow == std::string::npos)
      fail(ErrorKind::input,
           "malformed labelling line " + std::to_string(line_no));
    try {
      l.entries.emplace_back(parse_node_text(trim(line.substr(0, arrow))),
                             parse_node_text(trim(line.substr(arrow + width))));
    } catch (const Error&) {
      fail(ErrorKind::input,
           "malformed labelling line " + std::to_string(line_no));
    }
  }
  return l;
}

void write_labelling(std::ostream& out, const Labelling& l) {
  for (const auto& [node, subject] : l.entries)
    out << node_text(node) << " → " << node_text(subject) << '\n';
}

LabelVerdict validate_labelling(const UTree& t, const Labelling& l) {
  for (const auto& [node, subject] : l.entries)
    if (!t.contains(node))
      fail(ErrorKind::precondition,
           "labelled string " + node_text(node) + " is not a node of the tree");

  LabelVerdict v;
  auto violate = [&](int condition, const BitString& witness,
                     std::string detail) {
    v.valid = false;
    v.condition = condition;
    v.witness = witness;
    v.detail = std::move(detail);
  };

  std::set<BitString> subjects{BitString{}};
  std::map<BitString, std::set<BitString>> holders;
  for (const auto& [node, subject] : l.entries) {
    subjects.insert(subject);
    holders[subject].insert(node);
  }
  for (const auto& [subject, nodes] : holders)
    if (nodes.size() > 1) v.duplicate_subjects.push_back(subject);

  for (const auto& [node, subject] : l.entries)
    if (node.empty() && !subject.empty()) {
      violate(1, node, "the root carries " + subject_text(subject));
      return v;
    }

  for (const auto& [node, subject] : l.entries) {
    const std::size_t j = *t.level_of(node);
    if (subject.size() != j) {
      violate(2, node,
              "node " + node_text(node) + " at level " + std::to_string(j) +
                  " carries " + subject_text(subject));
      return v;
    }
  }

  std::size_t longest = 0;
  for (const auto& s : subjects) longest = std::max(longest, s.size());
  for (std::size_t len = 1; len <= longest; ++len) {
    std::uint64_t expect = 0;
    for (const auto& s : subjects) {
      if (s.size() != len) continue;
      if (s.to_index() != expect) break;
      ++expect;
    }
    if (len >= 64 || expect < (std::uint64_t{1} << len)) {
      const BitString missing = BitString::from_index(expect, len);
      violate(3, missing,
              subject_text(missing) + " is missing while a label of length " +
                  std::to_string(longest) + " exists");
      return v;
    }
  }

  std::set<BitString> seen;
  for (const auto& [node, subject] : l.entries)
    if (!seen.insert(node).second) {
      violate(4, node, "node " + node_text(node) + " carries two labels");
      return v;
    }

  for (const auto& [node, subject] : l.entries) {
    const std::size_t j = *t.level_of(node);
    for (std::size_t i = 1; i < j; ++i) {
      const BitString below = node.prefix(t.length_at(i));
      const auto s = l.subject_of(below);
      if (!s || *s != subject.prefix(i)) {
        violate(5, node,
                "node " + node_text(node) + " carries " +
                    subject_text(subject) + " but " + node_text(below) +
                    (s ? " carries " + subject_text(*s) : " is unlabelled"));
        return v;
      }
    }
  }

  v.full = true;
  const std::size_t h = t.height();
  for (std::size_t len = 1; len <= h && v.full; ++len) {
    std::size_t n = 0;
    for (const auto& s : subjects) n += s.size() == len;
    v.full = len < 64 && n == (std::size_t{1} << len);
  }
  return v;
}

namespace {

// Nodes of each level indexed in sorted order; kids[j][i] is the bitmask
// of level j+1 indices above node i of level j.
struct Indexed {
  std::size_t height = 0;
  std::vector<std::vector<BitString>> nodes;
  std::vector<std::vector<std::uint64_t>> kids;

  Indexed(const UTree& t, const char* too_large) {
    height = t.height();
    for (std::size_t j = 0; j <= height; ++j) {
      if (t.level(j).size() > 64) fail(ErrorKind::precondition, too_large);
      nodes.push_back(t.level(j));
    }
    kids.resize(height + 1);
    for (std::size_t j = 0; j <= height; ++j) {
      kids[j].assign(nodes[j].size(), 0);
      if (j == height) continue;
      for (std::size_t c = 0; c < nodes[j + 1].size(); ++c) {
        const BitString up = t.parent(nodes[j + 1][c]);
        const auto p = static_cast<std::size_t>(
            std::lower_bound(nodes[j].begin(), nodes[j].end(), up) -
            nodes[j].begin());
        kids[j][p] |= std::uint64_t{1} << c;
      }
    }
  }

  std::uint64_t children(std::size_t j, std::uint64_t mask) const {
    std::uint64_t out = 0;
    for (; mask; mask &= mask - 1) out |= kids[j][std::countr_zero(mask)];
    return out;
  }
};

using Memo = std::vector<std::unordered_map<std::uint64_t, std::uint64_t>>;
constexpr std::uint64_t kNone = 0;

}  // namespace

LabelSearch is_fully_labelable_bruteforce(const UTree& t) {
  constexpr const char* too_large = "instance too large for oracle";
  if (t.height() > 4) fail(ErrorKind::precondition, too_large);
  const Indexed ix(t, too_large);

  // best[j][mask]: the level j+1 set labelled σ0 below a level j set
  // labelled σ, or kNone when no full labelling of the part above exists.
  Memo best(ix.height + 1);
  auto search = [&](auto&& self, std::size_t j, std::uint64_t mask) -> bool {
    if (j == ix.height) return true;
    if (auto it = best[j].find(mask); it != best[j].end())
      return it->second != kNone;
    const std::uint64_t kids = ix.children(j, mask);
    if (std::popcount(kids) > 24) fail(ErrorKind::precondition, too_large);
    const std::uint64_t low = kids & (~kids + 1);
    const std::uint64_t rest = kids & ~low;
    std::uint64_t found = kNone;
    // Children left unlabelled never help, so every child of a σ-node is
    // given σ0 or σ1: the lowest one σ0, the others in all combinations.
    for (std::uint64_t sub = rest;; sub = (sub - 1) & rest) {
      const std::uint64_t zero = low | sub;
      const std::uint64_t one = rest & ~sub;
      if (low && one && self(self, j + 1, zero) && self(self, j + 1, one)) {
        found = zero;
        break;
      }
      if (sub == 0) break;
    }
    best[j][mask] = found;
    return found != kNone;
  };

  LabelSearch out;
  out.labelable = search(search, 0, 1);
  if (!out.labelable) return out;

  Labelling l;
  auto assign = [&](auto&& self, std::size_t j, std::uint64_t mask,
                    const BitString& subject) -> void {
    if (j > 0)
      for (std::uint64_t m = mask; m; m &= m - 1)
        l.set(ix.nodes[j][std::countr_zero(m)], subject);
    if (j == ix.height) return;
    const std::uint64_t zero = best[j].at(mask);
    const std::uint64_t one = ix.children(j, mask) & ~zero;
    BitString s0 = subject, s1 = subject;
    s0.push_back(false);
    s1.push_back(true);
    self(self, j + 1, zero, s0);
    self(self, j + 1, one, s1);
  };
  assign(assign, 0, 1, BitString{});
  std::sort(l.entries.begin(), l.entries.end(), [](const auto& a, const auto& b) {
    return a.first.size() != b.first.size() ? a.first.size() < b.first.size()
                                            : a.first < b.first;
  });
  out.witness = std::move(l);
  return out;
}

SpliceResult splice(const UTree& t, const std::optional<Labelling>& l,
                    const BitString& a, const BitString& b) {
  const auto ja = t.level_of(a);
  const auto jb = t.level_of(b);
  if (!ja || !jb)
    fail(ErrorKind::precondition, "splice needs two nodes of the tree");
  if (a == b) fail(ErrorKind::precondition, "splice needs two distinct siblings");
  if (*ja != *jb || *ja == 0 || t.parent(a) != t.parent(b))
    fail(ErrorKind::precondition, node_text(a) + " and " + node_text(b) +
                                      " are not siblings");
  const std::size_t j = *ja;
  const BitString& s0 = std::min(a, b);
  const BitString& o0 = std::max(a, b);

  std::optional<BitString> label_s, label_o;
  if (l) {
    label_s = l->subject_of(s0);
    label_o = l->subject_of(o0);
    if (label_s && label_o && *label_s != *label_o)
      fail(ErrorKind::precondition, "label conflict");
  }

  std::vector<unsigned> u = t.u();
  const std::size_t p = t.length_at(j);
  std::size_t widen = 0;
  std::vector<BitString> cs, co;
  if (j < t.level_count()) {
    cs = t.children(s0);
    co = t.children(o0);
    const std::size_t gap = t.length_at(j + 1) - p;
    const std::size_t total = cs.size() + co.size();
    if (!co.empty() && gap < 64 && total > (std::size_t{1} << gap)) {
      widen = std::bit_width(total - 1) - gap;
      for (std::size_t i = j; i < u.size(); ++i)
        u[i] += static_cast<unsigned>(widen);
    }
  }
  auto widened = [&](const BitString& x) {
    if (widen == 0 || x.size() <= p) return x;
    return x.prefix(p) + zeros(widen) + x.suffix_from(p);
  };
  const BitString s = widened(s0);
  const BitString o = widened(o0);

  // Absorbed children take the free offsets under the survivor in order.
  std::map<BitString, BitString> relocated;
  if (!co.empty()) {
    const std::size_t gap = u[j] - p;
    std::set<BitString> used;
    for (const auto& c : cs) used.insert(widened(c).suffix_from(p));
    std::uint64_t offset = 0;
    for (const auto& c : co) {
      BitString tail = BitString::from_index(offset, gap);
      while (used.count(tail)) tail = BitString::from_index(++offset, gap);
      ++offset;
      relocated[widened(c)] = s + tail;
    }
  }

  SpliceResult out;
  std::vector<BitString> nodes;
  for (const auto& x : t.nodes()) {
    BitString y = widened(x);
    if (y == o) {
      y = s;
    } else if (o.is_prefix_of(y)) {
      const BitString c = y.prefix(u[j]);
      y = relocated.at(c) + y.suffix_from(u[j]);
    }
    if (x != o0) nodes.push_back(y);
    out.moved.emplace(x, std::move(y));
  }
  out.tree = UTree(std::move(u), std::move(nodes));

  if (l) {
    for (const auto& [node, subject] : l->entries) {
      if (node == o0) continue;
      out.labelling.set(out.moved.at(node), subject);
    }
    if (!label_s && label_o) out.labelling.set(s, *label_o);
  }
  return out;
}

std::string shape(const UTree& t) {
  auto rec = [&](auto&& self, const BitString& node) -> std::string {
    std::vector<std::string> parts;
    for (const auto& c : t.children(node)) parts.push_back(self(self, c));
    std::sort(parts.begin(), parts.end());
    std::string s = "(";
    for (const auto& part : parts) s += part;
    return s + ")";
  };
  return rec(rec, BitString{});
}

bool isomorphic(const UTree& a, const UTree& b) { return shape(a) == shape(b); }

bool is_full_binary(const UTree& t) {
  const std::size_t h = t.height();
  for (std::size_t j = 0; j < h; ++j)
    for (const auto& node : t.level(j))
      if (t.children(node).size() != 2) return false;
  return true;
}

Reduction splice_reduce(const UTree& t) {
  constexpr const char* too_large = "instance too large for splice search";
  const Indexed ix(t, too_large);
  const std::size_t h = ix.height;
  Reduction out;
  if (h == 0) {
    out.reducible = true;
    return out;
  }

  // desc[j][i][d]: descendants of node i of level j at level j+d.
  std::vector<std::vector<std::vector<std::uint64_t>>> desc(h + 1);
  for (std::size_t j = h + 1; j-- > 0;) {
    desc[j].assign(ix.nodes[j].size(), std::vector<std::uint64_t>(h - j + 1));
    for (std::size_t i = 0; i < ix.nodes[j].size(); ++i) {
      desc[j][i][0] = 1;
      if (j == h) continue;
      for (std::uint64_t m = ix.kids[j][i]; m; m &= m - 1) {
        const auto& up = desc[j + 1][std::countr_zero(m)];
        for (std::size_t d = 0; d < up.size(); ++d) desc[j][i][d + 1] += up[d];
      }
    }
  }
  auto enough = [&](std::size_t j, std::uint64_t mask) {
    for (std::size_t d = 1; d <= h - j; ++d) {
      std::uint64_t n = 0;
      for (std::uint64_t m = mask; m; m &= m - 1)
        n += desc[j][std::countr_zero(m)][d];
      if (d < 64 && n < (std::uint64_t{1} << d)) return false;
    }
    return true;
  };

  // split[j][mask]: the first group of level j+1 nodes under the merged
  // node formed from `mask`, or kNone.
  Memo split(h + 1);
  auto reduce = [&](auto&& self, std::size_t j, std::uint64_t mask) -> bool {
    if (j == h) return true;
    if (auto it = split[j].find(mask); it != split[j].end())
      return it->second != kNone;
    std::uint64_t found = kNone;
    if (enough(j, mask)) {
      const std::uint64_t kids = ix.children(j, mask);
      if (std::popcount(kids) > 24) fail(ErrorKind::precondition, too_large);
      const std::uint64_t low = kids & (~kids + 1);
      const std::uint64_t rest = kids & ~low;
      for (std::uint64_t sub = rest;; sub = (sub - 1) & rest) {
        const std::uint64_t left = low | sub;
        const std::uint64_t right = rest & ~sub;
        if (right && enough(j + 1, left) && enough(j + 1, right) &&
            self(self, j + 1, left) && self(self, j + 1, right)) {
          found = left;
          break;
        }
        if (sub == 0) break;
      }
    }
    split[j][mask] = found;
    return found != kNone;
  };
  if (!reduce(reduce, 0, 1)) return out;

  // Replay the groups level by level as real splices.
  std::map<BitString, BitString> cur;
  for (const auto& node : t.nodes()) cur.emplace(node, node);
  UTree work = t;
  std::deque<std::pair<std::size_t, std::uint64_t>> queue{{0, 1}};
  while (!queue.empty()) {
    const auto [j, mask] = queue.front();
    queue.pop_front();
    if (j == h) continue;
    const std::uint64_t left = split[j].at(mask);
    const std::uint64_t right = ix.children(j, mask) & ~left;
    for (const std::uint64_t group : {left, right}) {
      const BitString& first = ix.nodes[j + 1][std::countr_zero(group)];
      for (std::uint64_t m = group & (group - 1); m; m &= m - 1) {
        const BitString& other = ix.nodes[j + 1][std::countr_zero(m)];
        SpliceResult r = splice(work, std::nullopt, cur[first], cur[other]);
        out.steps.push_back(
            {j + 1, cur[first], cur[other], r.moved.at(cur[first])});
        for (auto& [orig, now] : cur) now = r.moved.at(now);
        work = std::move(r.tree);
      }
      queue.emplace_back(j + 1, group);
    }
  }
  if (work.height() != h || !is_full_binary(work))
    fail(ErrorKind::internal, "splice replay did not reach the full binary tree");
  out.reducible = true;
  return out;
}

Labelling labelling_from_reduction(const UTree& t,
                                   const std::vector<SpliceStep>& steps) {
  std::map<BitString, BitString> cur;
  for (const auto& node : t.nodes()) cur.emplace(node, node);
  UTree work = t;
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const auto& step = steps[k];
    SpliceResult r;
    try {
      if (work.level_of(step.first) != step.level)
        fail(ErrorKind::precondition, node_text(step.first) +
                                          " is not at level " +
                                          std::to_string(step.level));
      r = splice(work, std::nullopt, step.first, step.second);
    } catch (const Error& e) {
      fail(ErrorKind::precondition, "invalid reduction step " +
                                        std::to_string(k + 1) + ": " + e.what());
    }
    for (auto& [orig, now] : cur) now = r.moved.at(now);
    work = std::move(r.tree);
  }
  if (work.height() != t.height() || !is_full_binary(work))
    fail(ErrorKind::precondition,
         "steps do not reduce the tree to the full binary tree");

  std::map<BitString, BitString> subject{{BitString{}, BitString{}}};
  for (std::size_t j = 0; j < work.height(); ++j)
    for (const auto& node : work.level(j)) {
      const auto kids = work.children(node);
      subject[kids[0]] = subject.at(node) + BitString("0");
      subject[kids[1]] = subject.at(node) + BitString("1");
    }
  Labelling l;
  for (std::size_t j = 1; j <= t.height(); ++j)
    for (const auto& node : t.level(j)) l.set(node, subject.at(cur.at(node)));
  return l;
}

MeasureCondition measure_condition_check(const UTree& t) {
  MeasureCondition c;
  const auto& u = t.u();
  for (std::size_t i = 0; i < u.size(); ++i)
    c.sum += Dyadic::pow2(static_cast<long>(i) - static_cast<long>(u[i]));
  const std::size_t k = u.size();
  c.measure = Dyadic(static_cast<std::uint64_t>(t.level(k).size()))
                  .scaled(k == 0 ? 0 : -static_cast<long>(u[k - 1]));
  c.satisfied = c.sum < c.measure;
  return c;
}

MeasureCondition shifted_measure_condition_check(const UTree& t) {
  MeasureCondition c = measure_condition_check(t);
  c.sum = c.sum.scaled(1);
  c.satisfied = c.sum < c.measure;
  return c;
}

UTree random_utree(std::mt19937_64& rng, std::size_t max_height,
                   std::size_t max_width) {
  if (max_height == 0 || max_width == 0)
    fail(ErrorKind::precondition, "sweep bounds must be positive");
  const std::size_t h = between(rng, 1, max_height);
  std::vector<unsigned> u;
  std::vector<BitString> previous{BitString{}};
  std::vector<BitString> nodes;
  for (std::size_t j = 1; j <= h; ++j) {
    std::size_t lo = 1;
    if (below(rng, 2) == 0)
      lo = std::min<std::size_t>(std::size_t{1} << j, max_width);
    const std::size_t count = between(rng, lo, max_width);
    std::vector<std::size_t> per_parent(previous.size(), 0);
    for (std::size_t c = 0; c < count; ++c)
      ++per_parent[below(rng, previous.size())];
    const std::size_t widest =
        *std::max_element(per_parent.begin(), per_parent.end());
    unsigned gap = std::max<unsigned>(
        1, static_cast<unsigned>(std::bit_width(widest - 1)));
    if (below(rng, 4) == 0) ++gap;
    u.push_back((u.empty() ? 0 : u.back()) + gap);
    std::vector<BitString> level;
    for (std::size_t p = 0; p < previous.size(); ++p)
      for (std::size_t c = 0; c < per_parent[p]; ++c)
        level.push_back(previous[p] + BitString::from_index(c, gap));
    nodes.insert(nodes.end(), level.begin(), level.end());
    previous = std::move(level);
  }
  return UTree(std::move(u), std::move(nodes));
}

std::string instance_hash(const UTree& t) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char ch : tree_text(t)) {
    hash ^= ch;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(hash));
  return buf;
}

SweepRow classify(const UTree& t) {
  SweepRow row;
  row.hash = instance_hash(t);
  row.labelable = is_fully_labelable_bruteforce(t).labelable;
  row.reducible = splice_reduce(t).reducible;
  row.condition = measure_condition_check(t).satisfied;
  row.shifted_condition = shifted_measure_condition_check(t).satisfied;
  return row;
}

std::vector<UTree> sweep_instances(std::uint64_t seed, std::size_t count,
                                   std::size_t max_height,
                                   std::size_t max_width) {
  std::mt19937_64 rng(seed);
  std::vector<UTree> trees;
  trees.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    trees.push_back(random_utree(rng, max_height, max_width));
  return trees;
}

SweepReport sweep(const std::vector<UTree>& trees) {
  SweepReport r;
  for (const auto& t : trees) {
    const std::size_t i = r.rows.size();
    r.rows.push_back(classify(t));
    const SweepRow& row = r.rows.back();
    if (row.labelable != row.reducible) r.disagreements.push_back(i);
    if (row.condition && !row.labelable) r.condition_failures.push_back(i);
    if (row.shifted_condition && !row.labelable)
      r.shifted_condition_failures.push_back(i);
  }
  return r;
}

SweepReport sweep(std::uint64_t seed, std::size_t count,
                  std::size_t max_height, std::size_t max_width) {
  return sweep(sweep_instances(seed, count, max_height, max_width));
}

std::string sweep_csv(const SweepReport& r) {
  std::string s = "hash,labelable,reducible,condition_satisfied\n";
  for (const auto& row : r.rows)
    s += row.hash + ',' + (row.labelable ? "1" : "0") + ',' +
         (row.reducible ? "1" : "0") + ',' + (row.condition ? "1" : "0") + '\n';
  return s;
}

}  // namespace kgcode
