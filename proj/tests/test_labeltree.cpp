#include <doctest.h>

#include <filesystem>
#include <set>
#include <sstream>

#include "kgcode/error.hpp"
#include "kgcode/labeltree.hpp"
#include "support.hpp"

using namespace kgcode;
using kgtest::bits;
using kgtest::strings;

namespace {

UTree full_binary(std::size_t height) {
  std::vector<unsigned> u;
  std::vector<BitString> nodes;
  for (std::size_t j = 1; j <= height; ++j) {
    u.push_back(static_cast<unsigned>(j));
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << j); ++v)
      nodes.push_back(BitString::from_index(v, j));
  }
  return UTree(u, nodes);
}

UTree tree(std::vector<unsigned> u, std::initializer_list<const char*> nodes) {
  return UTree(std::move(u), strings(nodes));
}

Labelling identity(const UTree& t) {
  Labelling l;
  for (std::size_t j = 1; j <= t.height(); ++j)
    for (const auto& n : t.level(j)) l.set(n, n.prefix(j));
  return l;
}

std::vector<std::pair<std::string, bool>> fixtures() {
  std::vector<std::pair<std::string, bool>> out;
  for (const auto& e :
       std::filesystem::directory_iterator(kgtest::source_path("fixtures/trees")))
    out.emplace_back("fixtures/trees/" + e.path().filename().string(),
                     e.path().filename().string().rfind("labelable", 0) == 0);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("tree construction") {
  const auto t = tree({1, 3}, {"0", "1", "000", "100", "101"});
  CHECK(t.height() == 2);
  CHECK(t.node_count() == 6);
  CHECK(t.children(bits("1")) == strings({"100", "101"}));
  CHECK(t.parent(bits("101")) == bits("1"));
  CHECK(t.level_of(bits("000")) == std::optional<std::size_t>(2));
  CHECK(t.contains(BitString{}));
  CHECK_FALSE(t.contains(bits("11")));

  CHECK_THROWS_WITH(tree({0, 2}, {}), "u must be positive");
  CHECK_THROWS_WITH(tree({2, 2}, {}), "u must be strictly increasing");
  CHECK_THROWS_WITH(tree({1, 3}, {"0", "01"}), doctest::Contains("not in u"));
  CHECK_THROWS_WITH(tree({1, 3}, {"0", "100"}), doctest::Contains("no parent"));
  CHECK_THROWS_WITH(tree({1}, {"0", "0"}), doctest::Contains("duplicate node"));
}

TEST_CASE("tree files") {
  std::istringstream in("# comment\nu: 1 3\n-\n0\n1\n011\n");
  const auto t = read_tree(in);
  CHECK(t == tree({1, 3}, {"0", "1", "011"}));
  std::istringstream back(tree_text(t));
  CHECK(read_tree(back) == t);
  std::istringstream headless("0\n");
  CHECK_THROWS_WITH(read_tree(headless), "missing 'u:' header");
  std::istringstream junk("u: 1\n0x\n");
  CHECK_THROWS_WITH(read_tree(junk), "invalid node at line 2");
}

TEST_CASE("labelling files") {
  std::istringstream in("0 → 1\n1 -> 0\n");
  const auto l = read_labelling(in);
  CHECK(l.subject_of(bits("0")) == bits("1"));
  CHECK(l.subject_of(bits("1")) == bits("0"));
  std::ostringstream out;
  write_labelling(out, l);
  CHECK(out.str() == "0 → 1\n1 → 0\n");
  std::istringstream bad("0 1\n");
  CHECK_THROWS_WITH(read_labelling(bad), doctest::Contains("malformed labelling line 1"));
}

TEST_CASE("labelling conditions") {
  const auto t = full_binary(2);
  const auto id = validate_labelling(t, identity(t));
  CHECK(id.valid);
  CHECK(id.full);
  CHECK(id.duplicate_subjects.empty());

  Labelling twice;
  twice.set(bits("0"), bits("0"));
  twice.set(bits("1"), bits("0"));
  const auto lone = validate_labelling(full_binary(1), twice);
  CHECK_FALSE(lone.valid);
  CHECK(lone.condition == 3);
  CHECK(lone.witness == bits("1"));
  CHECK(lone.duplicate_subjects == strings({"0"}));

  const auto dup = validate_labelling(tree({2}, {"00", "01", "10"}),
                                      [&] {
                                        Labelling l;
                                        l.set(bits("00"), bits("0"));
                                        l.set(bits("01"), bits("0"));
                                        l.set(bits("10"), bits("1"));
                                        return l;
                                      }());
  CHECK(dup.valid);
  CHECK(dup.full);
  CHECK(dup.duplicate_subjects == strings({"0"}));

  Labelling clash = identity(t);
  clash.set(bits("10"), bits("01"));
  clash.set(bits("01"), bits("10"));
  const auto five = validate_labelling(t, clash);
  CHECK_FALSE(five.valid);
  CHECK(five.condition == 5);
  CHECK((five.witness == bits("01") || five.witness == bits("10")));

  Labelling root;
  root.set(BitString{}, bits("0"));
  CHECK(validate_labelling(t, root).condition == 1);

  Labelling wrong_len;
  wrong_len.set(bits("0"), bits("01"));
  CHECK(validate_labelling(t, wrong_len).condition == 2);

  Labelling gap;
  gap.set(bits("0"), bits("0"));
  const auto three = validate_labelling(t, gap);
  CHECK(three.condition == 3);
  CHECK(three.witness == bits("1"));

  Labelling two_labels = identity(t);
  two_labels.entries.emplace_back(bits("0"), bits("1"));
  CHECK(validate_labelling(t, two_labels).condition == 4);

  Labelling stray;
  stray.set(bits("111"), bits("111"));
  CHECK_THROWS_AS(validate_labelling(t, stray), Error);
}

TEST_CASE("exhaustive labelability") {
  const auto full = is_fully_labelable_bruteforce(full_binary(3));
  CHECK(full.labelable);
  REQUIRE(full.witness);
  CHECK(validate_labelling(full_binary(3), *full.witness).full);
  CHECK_FALSE(is_fully_labelable_bruteforce(tree({1, 2}, {"0", "00"})).labelable);
  CHECK_FALSE(is_fully_labelable_bruteforce(
                  tree({1, 3}, {"0", "1", "000", "100", "101", "110"}))
                  .labelable);
  CHECK_THROWS_WITH(is_fully_labelable_bruteforce(full_binary(5)),
                    "instance too large for oracle");
}

TEST_CASE("splice basics") {
  const auto one = splice(full_binary(1), std::nullopt, bits("0"), bits("1"));
  CHECK(one.tree == tree({1}, {"0"}));
  CHECK(one.moved.at(bits("1")) == bits("0"));

  const auto lonely = tree({1, 2}, {"0", "00"});
  CHECK_THROWS_AS(splice(lonely, std::nullopt, bits("0"), bits("1")), Error);
  CHECK_THROWS_AS(splice(lonely, std::nullopt, bits("0"), bits("0")), Error);
  CHECK_THROWS_WITH(splice(full_binary(2), std::nullopt, bits("00"), bits("10")),
                    doctest::Contains("not siblings"));

  Labelling l;
  l.set(bits("0"), bits("0"));
  l.set(bits("1"), bits("1"));
  CHECK_THROWS_WITH(splice(full_binary(1), l, bits("0"), bits("1")),
                    "label conflict");
  Labelling partial;
  partial.set(bits("1"), bits("1"));
  const auto carried = splice(full_binary(1), partial, bits("0"), bits("1"));
  CHECK(carried.labelling.subject_of(bits("0")) == bits("1"));
}

TEST_CASE("splice widens a crowded level") {
  const auto r = splice(full_binary(2), std::nullopt, bits("0"), bits("1"));
  CHECK(r.tree.u() == std::vector<unsigned>{1, 3});
  CHECK(r.tree.level(1) == strings({"0"}));
  CHECK(r.tree.children(bits("0")).size() == 4);
}

TEST_CASE("splice keeps the tree structure") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    const auto t = random_utree(rng, 3, 6);
    std::vector<BitString> parents;
    for (const auto& n : t.nodes())
      if (t.children(n).size() >= 2) parents.push_back(n);
    if (parents.empty()) continue;
    const auto p = parents[below(rng, parents.size())];
    const auto kids = t.children(p);
    const std::size_t i = below(rng, kids.size());
    std::size_t j = below(rng, kids.size() - 1);
    if (j >= i) ++j;
    const auto ab = splice(t, std::nullopt, kids[i], kids[j]);
    const auto ba = splice(t, std::nullopt, kids[j], kids[i]);
    CHECK(ab.tree == ba.tree);
    CHECK(ab.tree.node_count() + 1 == t.node_count());
    for (const auto& n : t.nodes()) {
      REQUIRE(ab.moved.count(n));
      CHECK(ab.tree.contains(ab.moved.at(n)));
      if (!n.empty())
        CHECK(ab.moved.at(t.parent(n)) == ab.tree.parent(ab.moved.at(n)));
    }
    CHECK(isomorphic(ab.tree, ba.tree));
  }
}

TEST_CASE("isomorphism ignores addresses") {
  CHECK(isomorphic(tree({1, 3}, {"0", "1", "000"}), tree({2, 5}, {"01", "10", "10011"})));
  CHECK_FALSE(isomorphic(tree({1, 3}, {"0", "1", "000"}), tree({1, 3}, {"0", "000", "001"})));
  CHECK(is_full_binary(full_binary(3)));
  CHECK_FALSE(is_full_binary(tree({1, 3}, {"0", "1", "000"})));
}

TEST_CASE("splice reduction") {
  const auto full = splice_reduce(full_binary(3));
  CHECK(full.reducible);
  CHECK(full.steps.empty());
  CHECK(validate_labelling(full_binary(3),
                           labelling_from_reduction(full_binary(3), {})).full);

  const auto chains = kgtest::load_tree("fixtures/trees/labelable-eight-unary-chains.tree");
  const auto r = splice_reduce(chains);
  REQUIRE(r.reducible);
  std::size_t level_one = 0;
  for (const auto& s : r.steps) level_one += s.level == 1;
  CHECK(level_one == 6);
  const auto lab = labelling_from_reduction(chains, r.steps);
  const auto verdict = validate_labelling(chains, lab);
  CHECK(verdict.valid);
  CHECK(verdict.full);
  std::set<BitString> two;
  for (const auto& n : chains.level(2)) {
    const auto s = lab.subject_of(n);
    if (s) two.insert(*s);
  }
  CHECK(two == std::set<BitString>{bits("00"), bits("01"), bits("10"), bits("11")});

  std::vector<SpliceStep> bogus{{2, bits("0000"), bits("0010"), bits("0000")}};
  CHECK_THROWS_WITH(labelling_from_reduction(chains, bogus),
                    doctest::Contains("invalid reduction step"));
  CHECK_THROWS_AS(labelling_from_reduction(chains, {}), Error);
}

TEST_CASE("illustrated trees against both deciders") {
  const auto all = fixtures();
  CHECK(all.size() == 12);
  for (const auto& [path, expected] : all) {
    CAPTURE(path);
    const auto t = kgtest::load_tree(path);
    const auto brute = is_fully_labelable_bruteforce(t);
    const auto red = splice_reduce(t);
    CHECK(brute.labelable == expected);
    CHECK(red.reducible == expected);
    if (red.reducible) {
      const auto v = validate_labelling(t, labelling_from_reduction(t, red.steps));
      CHECK(v.valid);
      CHECK(v.full);
    }
  }
}

TEST_CASE("measure condition") {
  const auto seven = tree({2, 4}, {"00", "01", "0000", "0001", "0010", "0011",
                                   "0100", "0101", "0110"});
  const auto c = measure_condition_check(seven);
  CHECK(c.sum == Dyadic(3, 3));
  CHECK(c.measure == Dyadic(7, 4));
  CHECK(c.satisfied);
  CHECK(measure_condition_check(full_binary(1)).satisfied);
  for (std::size_t k = 2; k <= 4; ++k) {
    const auto f = measure_condition_check(full_binary(k));
    CHECK(f.measure == Dyadic(1));
    CHECK(f.sum == Dyadic(k, 1));
    CHECK_FALSE(f.satisfied);
  }
  const auto empty = measure_condition_check(tree({1, 2}, {"0", "1"}));
  CHECK(empty.measure == Dyadic(0));
  CHECK_FALSE(empty.satisfied);
  CHECK(shifted_measure_condition_check(seven).sum == Dyadic(3, 2));
}

TEST_CASE("adding nodes never breaks labelability") {
  std::mt19937_64 rng(43);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const auto big = random_utree(rng, 3, 6);
    std::vector<BitString> drop;
    for (const auto& n : big.nodes())
      if (!n.empty() && below(rng, 4) == 0) drop.push_back(n);
    std::vector<BitString> keep;
    for (const auto& n : big.nodes()) {
      if (n.empty()) continue;
      bool gone = false;
      for (const auto& d : drop) gone = gone || d.is_prefix_of(n);
      if (!gone) keep.push_back(n);
    }
    const UTree small(big.u(), keep);
    if (!is_fully_labelable_bruteforce(small).labelable) continue;
    if (small.height() < big.height()) continue;
    ++checked;
    CHECK(is_fully_labelable_bruteforce(big).labelable);
    CHECK(splice_reduce(big).reducible);
  }
  CHECK(checked > 20);
}

TEST_CASE("sweep") {
  const auto a = sweep(5, 400, 3, 8);
  const auto b = sweep(5, 400, 3, 8);
  CHECK(a.rows.size() == 400);
  CHECK(a.disagreements.empty());
  CHECK(a.condition_failures.empty());
  CHECK(sweep_csv(a) == sweep_csv(b));
  CHECK(sweep_csv(a).rfind("hash,labelable,reducible,condition_satisfied\n", 0) == 0);
  std::size_t yes = 0;
  for (const auto& r : a.rows) yes += r.labelable;
  CHECK(yes > 20);
  CHECK(yes < 380);
  CHECK(instance_hash(full_binary(2)).size() == 16);
  CHECK(instance_hash(full_binary(2)) == instance_hash(full_binary(2)));
  CHECK(instance_hash(full_binary(2)) != instance_hash(full_binary(3)));
}
