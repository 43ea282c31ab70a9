#include <doctest.h>

#include <cmath>

#include "kgcode/error.hpp"
#include "kgcode/schedule.hpp"

using namespace kgcode;

TEST_CASE("overhead term") {
  CHECK(log_overhead(0) == 2);
  CHECK(log_overhead(1) == 4);
  CHECK(log_overhead(2) == 4);
  CHECK(log_overhead(3) == 5);
  CHECK(log_overhead(6) == 6);
  CHECK(log_overhead(7) == 7);
  CHECK(log_overhead(14) == 8);
}

TEST_CASE("kucera preset") {
  const auto s = Schedule::kucera();
  const unsigned l[] = {3, 5, 5, 6, 7, 7, 7, 8, 8, 8};
  const std::uint64_t L[] = {0, 3, 8, 13, 19, 26, 33, 40, 48, 56, 64};
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(s.m(i) == 1);
    CHECK(s.l(i) == l[i]);
  }
  for (std::size_t n = 0; n <= 10; ++n) {
    CHECK(s.L(n) == L[n]);
    CHECK(s.M(n) == n);
  }
}

TEST_CASE("gacs preset") {
  const auto s = Schedule::gacs();
  CHECK(s.m(2) == 3);
  CHECK(s.l(2) == 7);
  const std::uint64_t M[] = {0, 1, 3, 6, 10, 15, 21, 28, 36, 45, 55, 66, 78};
  const std::uint64_t L[] = {0,  3,  9,  16, 25,  36, 48,
                             61, 76, 92, 109, 128, 148};
  for (std::size_t n = 0; n <= 12; ++n) {
    CHECK(s.M(n) == M[n]);
    CHECK(s.L(n) == L[n]);
  }
  CHECK(s.block_of(0) == 0);
  CHECK(s.block_of(5) == 2);
  CHECK(s.block_of(6) == 3);
  CHECK(s.levels_for_source(10) == std::optional<std::size_t>(4));
  CHECK_FALSE(s.levels_for_source(8));
  CHECK(s.levels_covering(8) == 4);
}

TEST_CASE("custom schedules") {
  const auto s = Schedule::custom({1, 1}, {1, 1});
  CHECK(s.g(0) == 0);
  CHECK(s.g(1) == 0);
  CHECK(s.block_count() == std::optional<std::size_t>(2));
  CHECK(Schedule::parse(s.spec()) == s);
  CHECK(Schedule::parse("gacs") == Schedule::gacs());
  CHECK_THROWS_WITH(Schedule::custom({2}, {1}),
                    doctest::Contains("negative overhead"));
  CHECK_THROWS_AS(Schedule::parse("fibonacci"), Error);
  CHECK_THROWS_AS(Schedule::parse("custom:m=1,;l=2,2"), Error);
}

TEST_CASE("convergence margin") {
  const auto k2 = convergence_margin(Schedule::kucera(), 2, Dyadic(1));
  CHECK(k2.partial_sum == Dyadic(5, 4));
  CHECK(k2.within);
  const auto zero = convergence_margin(Schedule::custom({1, 1, 1, 1}, {1, 1, 1, 1}),
                                       4, Dyadic(1));
  CHECK(zero.partial_sum == Dyadic(4));
  CHECK_FALSE(zero.within);
  const auto none = convergence_margin(Schedule::gacs(), 0, Dyadic(1));
  CHECK(none.partial_sum == Dyadic(0));
  CHECK(none.within);
}

TEST_CASE("convergence margin grows monotonically") {
  for (const auto& s : {Schedule::kucera(), Schedule::gacs(), Schedule::sqrt()}) {
    Dyadic prev(0);
    for (std::size_t k = 0; k <= 60; ++k) {
      const auto cur = convergence_margin(s, k, Dyadic(1)).partial_sum;
      CHECK(cur >= prev);
      CHECK(cur < Dyadic(1));
      prev = cur;
    }
  }
}

TEST_CASE("oracle use bound") {
  CHECK(oracle_use_bound(Schedule::gacs(), 0) == 3);
  CHECK(oracle_use_bound(Schedule::gacs(), 3) == 16);
  CHECK(oracle_use_bound(Schedule::kucera(), 2) == 13);
  CHECK(oracle_use_bound(Schedule::custom({2}, {2}), 1) == 2);
}

TEST_CASE("use bound chains through the block sums") {
  for (const auto& s : {Schedule::kucera(), Schedule::gacs()}) {
    for (std::uint64_t n = 0; n < 2000; ++n) {
      const std::size_t b = s.block_of(n);
      std::uint64_t sum_g = 0;
      for (std::size_t i = 0; i <= b; ++i) sum_g += s.g(i);
      CHECK(oracle_use_bound(s, n) == s.L(b + 1));
      CHECK(s.L(b + 1) <= n + s.m(b) + sum_g);
    }
  }
}

TEST_CASE("exact sqrt-log comparison") {
  CHECK(compare_sqrt_log2(48, 64) == std::strong_ordering::equal);
  CHECK(compare_sqrt_log2(47, 64) == std::strong_ordering::less);
  CHECK(compare_sqrt_log2(49, 64) == std::strong_ordering::greater);
  CHECK(compare_sqrt_log2(0, 1) == std::strong_ordering::equal);
  CHECK(compare_sqrt_log2(3, 2) == std::strong_ordering::greater);
  CHECK(compare_sqrt_log2(1, 2) == std::strong_ordering::less);
  CHECK(compare_sqrt_log2(768, 4096) == std::strong_ordering::equal);
  for (std::uint64_t n = 2; n < 600; ++n) {
    const double v = std::sqrt(double(n)) * std::log2(double(n));
    const auto r = static_cast<std::uint64_t>(std::floor(v));
    if (v - std::floor(v) > 1e-9) {
      CHECK(compare_sqrt_log2(r, n) == std::strong_ordering::less);
      CHECK(compare_sqrt_log2(r + 1, n) == std::strong_ordering::greater);
    }
  }
}

TEST_CASE("redundancy report matches the independent computation") {
  const auto k = redundancy_report(Schedule::kucera(), 4096);
  const auto g = redundancy_report(Schedule::gacs(), 4096);
  REQUIRE(k.rows.size() == 4096);
  CHECK(k.rows.back().use == 92543);
  CHECK(k.rows.back().redundancy == 88447);
  CHECK(g.rows.back().use == 5171);
  CHECK(g.rows.back().redundancy == 1075);
  CHECK(g.rows[63].use == 128);

  double worst = 0;
  std::uint64_t at = 0;
  std::size_t above = 0;
  for (const auto& row : k.rows) {
    const double c = double(row.redundancy) / (row.n * std::log2(row.n + 2.0));
    if (c > worst) worst = c, at = row.n;
  }
  for (std::size_t i = 63; i < 4096; ++i) {
    if (compare_sqrt_log2(g.rows[i].redundancy, g.rows[i].n) ==
        std::strong_ordering::greater)
      ++above;
  }
  CHECK(at == 3798);
  CHECK(worst == doctest::Approx(1.7999).epsilon(1e-4));
  CHECK(above == 4033);

  for (std::size_t i = 1; i < g.rows.size(); ++i)
    CHECK(g.rows[i].use >= g.rows[i - 1].use);
}

TEST_CASE("redundancy report csv") {
  const auto r = redundancy_report(Schedule::gacs(), 3);
  const auto csv = to_csv(r);
  CHECK(csv.rfind("n,use,redundancy,bound_nlogn,bound_sqrtnlogn\n", 0) == 0);
  CHECK(csv == to_csv(redundancy_report(Schedule::gacs(), 3)));
  CHECK(r.rows[0].use == 3);
  CHECK(r.rows[1].use == 9);
  CHECK(r.rows[2].use == 9);
}
