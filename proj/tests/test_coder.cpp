#include <doctest.h>

#include <set>
#include <sstream>

#include "kgcode/coder.hpp"
#include "kgcode/error.hpp"
#include "support.hpp"

using namespace kgcode;
using kgtest::bits;
using kgtest::members;

namespace {

std::vector<BitString> defined(const WordTable& t) {
  std::vector<BitString> out;
  for (const auto& s : t.slots)
    if (s) out.push_back(*s);
  return out;
}

}  // namespace

TEST_CASE("settled word tables") {
  const auto one = Schedule::custom({1}, {2});
  CHECK(defined(settle_words(ClopenClass::full(2), one, BitString{}, 0)) ==
        kgtest::strings({"00", "01"}));
  CHECK(defined(settle_words(members(2, {"01", "10", "11"}), one, BitString{},
                             0)) == kgtest::strings({"01", "10"}));
  const auto forced = members(2, {"01", "11"});
  CHECK(defined(settle_words(forced, one, BitString{}, 0)) ==
        kgtest::strings({"01", "11"}));
  CHECK_THROWS_WITH(settle_words(members(2, {"11"}), one, BitString{}, 0),
                    doctest::Contains("extension property violated at"));
}

TEST_CASE("encode and decode examples") {
  const auto one = Schedule::custom({1}, {2});
  CHECK(encode(bits("0"), ClopenClass::full(2), one).code == bits("00"));
  CHECK(encode(bits("1"), members(2, {"01", "10", "11"}), one).code ==
        bits("10"));
  CHECK(encode(BitString{}, ClopenClass::full(2), one).code.empty());

  const auto d = decode(bits("00"), ClopenClass::full(2), one, 1);
  CHECK(d.source == bits("0"));
  CHECK(d.use == std::vector<std::uint64_t>{2});

  CHECK_THROWS_WITH(decode(bits("00"), members(2, {"01", "10", "11"}), one, 1),
                    doctest::Contains("oracle outside code tree"));
  CHECK_THROWS_WITH(encode(bits("01"), ClopenClass::full(2), one),
                    doctest::Contains("source length must equal M(n)"));
  CHECK_THROWS_AS(encode(bits("0"), ClopenClass::empty(2), one), Error);
}

TEST_CASE("coding through the independently pruned classes") {
  struct Case {
    const char* file;
    Schedule sched;
    std::vector<const char*> codes;
  };
  const std::vector<Case> cases{
      {"tests/data/oracle-c.cls", Schedule::kucera(),
       {"00000000", "00000001", "00100000", "00100010"}},
      {"tests/data/oracle-e.cls", Schedule::kucera(),
       {"00110000", "00110001", "01000000", "01000001"}},
      {"tests/data/oracle-d.cls", Schedule::gacs(),
       {"000000000", "000000001", "000000010", "000000011", "001000000",
        "001000001", "001000010", "001000011"}},
  };
  for (const auto& k : cases) {
    CAPTURE(k.file);
    const auto pstar = prune(kgtest::load_class(k.file), k.sched, 2).pstar;
    CodingSession session(pstar, k.sched);
    const std::size_t width = k.sched.M(2);
    std::set<BitString> seen;
    for (std::size_t v = 0; v < k.codes.size(); ++v) {
      const auto x = BitString::from_index(v, width);
      const auto path = session.encode(x);
      CHECK(path.code == bits(k.codes[v]));
      CHECK(session.decode(path.code, 2).source == x);
      seen.insert(path.code);
    }
    CHECK(seen.size() == k.codes.size());
  }
}

TEST_CASE("staged word process clears and reassigns") {
  const auto full = ClopenClass::full(3);
  const auto s1 = difference(full, members(3, {"000", "001"}));
  const auto s2 = difference(s1, members(3, {"010"}));
  const ApproxSequence approx({full, s1, s2});
  const auto t = run_word_process(approx, Schedule::custom({2}, {3}),
                                  BitString{}, 0);
  CHECK_FALSE(t.terminated);
  CHECK(t.complete());
  CHECK(defined(t) == kgtest::strings({"011", "100", "101", "110"}));
  struct Ev {
    std::size_t stage, slot;
    WordEvent::Kind kind;
    const char* word;
  };
  using K = WordEvent::Kind;
  const std::vector<Ev> expect{{1, 0, K::assign, "010"}, {2, 0, K::clear, "010"},
                               {3, 0, K::assign, "011"}, {4, 1, K::assign, "100"},
                               {5, 2, K::assign, "101"}, {6, 3, K::assign, "110"}};
  REQUIRE(t.history.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    CHECK(t.history[i].stage == expect[i].stage);
    CHECK(t.history[i].slot == expect[i].slot);
    CHECK(t.history[i].kind == expect[i].kind);
    CHECK(t.history[i].word == bits(expect[i].word));
  }
  CHECK(t.slot_of(bits("101")) == std::optional<std::size_t>(2));
}

TEST_CASE("word process terminates when the node runs dry") {
  const auto thin = members(2, {"00", "01", "10"});
  const auto t = run_word_process(ApproxSequence({thin}), Schedule::custom({2}, {2}),
                                  BitString{}, 0);
  CHECK(t.terminated);
  CHECK_FALSE(t.complete());
}

TEST_CASE("end to end examples") {
  const auto k = Schedule::kucera();
  const auto full = ClopenClass::full(static_cast<unsigned>(k.L(3)));
  for (std::uint64_t v = 0; v < 8; ++v) {
    const auto x = BitString::from_index(v, 3);
    const auto r = end_to_end(x, full, k);
    CHECK(r.check.source == x);
    for (std::size_t b = 0; b < 3; ++b) CHECK(r.check.use[b] <= k.L(b + 1));
  }
  CHECK_THROWS_WITH(end_to_end(bits("0"), members(2, {"00"}),
                               Schedule::custom({1}, {1})),
                    doctest::Contains("measure budget exhausted"));

  const auto g = Schedule::gacs();
  const auto x = bits("1011001110");  // 8 bits padded to M(4) = 10
  const auto r = end_to_end(x, ClopenClass::full(static_cast<unsigned>(g.L(4))), g);
  CHECK(r.check.source == x);
  const auto report = redundancy_report(g, x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(r.check.use[i] == report.rows[i].use);
}

TEST_CASE("coding properties on random pruned classes") {
  std::mt19937_64 rng(31);
  int runs = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const auto sched = trial % 2 ? Schedule::gacs() : Schedule::kucera();
    const std::size_t levels = trial % 2 ? 2 : 3;
    const unsigned d = static_cast<unsigned>(sched.L(levels));
    const auto c = kgtest::random_explicit(rng, d, 6 + below(rng, 2));
    if (measure(c) <= convergence_margin(sched, levels, Dyadic(1)).partial_sum)
      continue;
    const auto pstar = prune(c, sched, levels).pstar;
    CodingSession session(pstar, sched);
    const std::size_t width = sched.M(levels);
    std::set<BitString> codes;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << width); ++v) {
      const auto x = BitString::from_index(v, width);
      const auto path = session.encode(x);
      CHECK(path.code.size() == sched.L(levels));
      CHECK(pstar.contains(path.code));
      const auto back = session.decode(path.code, levels);
      CHECK(back.source == x);
      for (std::size_t i = 0; i < width; ++i)
        CHECK(back.use[i] <= oracle_use_bound(sched, i));
      // Shorter prefixes decode consistently.
      for (std::size_t n = 0; n < levels; ++n)
        CHECK(session.decode(path.code.prefix(sched.L(n + 1)), n + 1).source ==
              x.prefix(sched.M(n + 1)));
      codes.insert(path.code);
    }
    CHECK(codes.size() == (std::size_t{1} << width));
    ++runs;
  }
  CHECK(runs > 30);
}

TEST_CASE("code files") {
  CodeFile f;
  f.bits = 8;
  f.schedule = "gacs";
  f.levels = 4;
  f.code = bits("0101");
  f.slots = {0, 1, 3, 2};
  std::ostringstream out;
  write_code_file(out, f);
  std::istringstream in(out.str());
  const auto g = read_code_file(in);
  CHECK(g.bits == 8);
  CHECK(g.schedule == "gacs");
  CHECK(g.levels == 4);
  CHECK(g.code == f.code);
  CHECK(g.slots == f.slots);

  std::istringstream missing("bits=3\n");
  CHECK_THROWS_AS(read_code_file(missing), Error);
  std::istringstream junk("bits=x\nlevels=1\ncode=0\n");
  CHECK_THROWS_WITH(read_code_file(junk), doctest::Contains("malformed number"));
}

TEST_CASE("use profile csv") {
  const auto csv = use_profile_csv(Schedule::gacs(), {3, 9, 9});
  CHECK(csv == "bit,block,use\n0,0,3\n1,1,9\n2,1,9\n");
}
