#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dptlab/bounds.hpp"
#include "dptlab/error.hpp"

using namespace dptlab;

namespace {

Rational q(long p, long d) { return ratio(p, d); }

// Independent float64 recomputations for the oracles below.
double choose(int n, int s) {
  double c = 1;
  for (int i = 1; i <= s; ++i) c = c * (n - s + i) / i;
  return c;
}

double tail_ge(int k, double p, double threshold) {
  double t = 0;
  for (int s = 0; s <= k; ++s)
    if (s >= threshold - 1e-12) t += choose(k, s) * std::pow(p, s) * std::pow(1 - p, k - s);
  return t;
}

}  // namespace

TEST_CASE("binomial values") {
  CHECK(binom_pmf(3, q(1, 2), 2) == q(3, 8));
  CHECK(binom_tail(2, q(3, 4), 1, false) == q(15, 16));
  CHECK(binom_lower_tail(8, q(1, 2), 2, true) == q(9, 256));
  CHECK(binom_tail(2, q(3, 4), q(3, 2), false) == q(9, 16));
  CHECK(binom_tail(2, q(3, 4), 2, true) == 0);
  CHECK_THROWS_AS(binom_pmf(3, q(3, 2), 1), Error);
  CHECK_THROWS_AS(binom_pmf(3, q(1, 2), 4), Error);
}

TEST_CASE("property: binomial arithmetic is exact and self-consistent") {
  for (int k = 0; k <= 20; ++k)
    for (int pn = 0; pn <= 6; ++pn) {
      const Rational p = q(pn, 6);
      Rational total = 0;
      for (int s = 0; s <= k; ++s) {
        total += binom_pmf(k, p, s);
        // Pr[Y = s+1] (s+1)(1-p) = Pr[Y = s] (k-s) p
        if (s < k) CHECK(binom_pmf(k, p, s + 1) * (s + 1) * (1 - p) == binom_pmf(k, p, s) * (k - s) * p);
        CHECK(binom_tail(k, p, s, false) + binom_lower_tail(k, p, s, true) == 1);
        CHECK(binom_tail(k, p, s, true) + binom_lower_tail(k, p, s, false) == 1);
      }
      CHECK(total == 1);
    }
}

TEST_CASE("DPT bound") {
  const auto a = dpt_bound(q(1, 4), 1, 2);
  CHECK(a.exact.value == doctest::Approx(std::pow(2.0, 0.5) * 0.5625).epsilon(1e-12));
  CHECK(a.exact.value == doctest::Approx(0.795495).epsilon(1e-6));
  CHECK(*a.relaxed.exact == q(576, 625));
  CHECK(a.exact_below_relaxed);
  const auto b = dpt_bound(q(1, 4), 1, 8);
  REQUIRE(b.exact.exact);
  CHECK(*b.exact.exact == 4 * power(q(3, 4), 8));
  CHECK(b.exact.value == doctest::Approx(0.400451).epsilon(1e-6));
  const auto tiny = dpt_bound(q(1, 1000000), 1, 3);
  CHECK(tiny.exact.value == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(tiny.relaxed.value == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(*dpt_bound(q(1, 4), q(1, 2), 3, 2).budget == q(3, 4));
  CHECK_THROWS_AS(dpt_bound(0, 1, 2), Error);
  CHECK_THROWS_AS(dpt_bound(q(1, 4), q(3, 2), 2), Error);
}

TEST_CASE("property: 2^{αε}(1-ε) < 1-ε+0.84αε on the whole grid") {
  for (int en = 1; en <= 20; ++en)
    for (int an = 1; an <= 20; ++an)
      for (int k = 1; k <= 12; ++k) {
        const Rational eps = q(en, 20), alpha = q(an, 20);
        if (alpha * eps > q(1, 2)) continue;
        CHECK(dpt_bound(eps, alpha, k).exact_below_relaxed);
      }
}

TEST_CASE("exact comparison against irrational bounds") {
  const auto b = BoundValue::scaled_power(q(9, 16), 2, q(1, 2));  // 9√2/16
  CHECK(*compare(q(9, 16), b) < 0);
  CHECK(*compare(q(7955, 10000), b) > 0);
  CHECK(*compare(q(7954, 10000), b) < 0);
  // (x/c)^2 == 2 exactly is impossible for rationals, but equality on
  // rational powers is detected.
  const auto c = BoundValue::scaled_power(q(1, 2), 4, q(1, 2));  // = 1
  CHECK(*compare(Rational(1), c) == 0);
  CHECK(judge(Rational(1), c) == Verdict::holds);
  CHECK(judge(Rational(1), BoundValue::of(q(1, 2))) == Verdict::violated);
  CHECK(judge(q(1, 2), BoundValue::real(7.6)) == Verdict::vacuous);
  CHECK(judge(0.5, BoundValue::real(0.5 + 1e-14)) == Verdict::indeterminate);
  CHECK(worst(Verdict::holds, Verdict::violated) == Verdict::violated);
}

TEST_CASE("worst-case bound") {
  const auto w = worstcase_bound(q(1, 10), 10, 100);
  CHECK(w.success.get_d() == doctest::Approx(0.0060466).epsilon(1e-6));
  CHECK(w.budget == q(1, 11));
  CHECK(worstcase_bound(q(2499, 10000), 3, 1).success.get_d() == doctest::Approx(std::pow(0.75, 3)).epsilon(1e-3));
  CHECK(worstcase_bound(q(1, 10), 1, 1).success == q(3, 5));
  CHECK_THROWS_AS(worstcase_bound(q(1, 4), 1, 1), Error);
}

TEST_CASE("XOR bound") {
  CHECK(xor_bound(q(1, 4), 1, 2).exact == q(5, 8));
  CHECK(xor_bound(q(1, 2), 1, 3).exact == q(1, 2));
  for (int en = 1; en < 10; ++en) {
    const Rational eps = q(en, 20);
    CHECK(xor_bound(eps, q(1, 2), 1).exact == 1 - eps);
  }
  CHECK_THROWS_AS(xor_bound(q(3, 5), 1, 2), Error);
}

TEST_CASE("property: XOR exact form stays below its closed form") {
  int checked = 0;
  for (int en = 1; en <= 10; ++en)
    for (int an = 1; an <= 10; ++an)
      for (int k = 1; k <= 24; ++k) {
        const auto x = xor_bound(q(en, 20), q(an, 10), k);
        CHECK(x.exact_le_closed);
        ++checked;
      }
  CHECK(checked == 2400);
}

TEST_CASE("threshold bounds") {
  const auto t = threshold_bound(q(1, 4), 1, 1, 2, 2);
  CHECK(*t.stmt2.exact == q(9, 16));
  CHECK(threshold_bound(q(1, 4), q(1, 2), q(1, 1000), 4, 2).stmt2.value == doctest::Approx(1.0));
  const auto s = threshold_bound(q(1, 4), q(1, 2), q(3, 4), 4, 2);
  CHECK_FALSE(s.stmt1.exact.has_value());
  CHECK(*compare(s.stmt1, BoundValue::scaled_power(binom_tail(4, q(3, 4), 3, false), 2, q(1, 2))) == 0);
  const auto whole = threshold_bound(q(1, 4), 1, q(3, 4), 4, 2);
  CHECK(*whole.stmt1.exact == Rational(2 * binom_tail(4, q(3, 4), 3, false)));
  CHECK_FALSE(threshold_bound(q(1, 4), 1, 1, 2, 2).chern.has_value());
  CHECK(threshold_bound(q(1, 4), q(1, 2), 1, 2, 2).chern.has_value());
}

TEST_CASE("generalized threshold bounds") {
  for (int k = 1; k <= 4; ++k) {
    const auto g = gen_threshold_bound(q(1, 4), q(1, 2), k, MonotoneFamily::full_set(k), 2);
    const auto d = dpt_bound(q(1, 4), q(1, 2), k);
    CHECK(*compare(g.stmt1, d.exact) == 0);
  }
  std::vector<Subset> singles{0b01, 0b10};
  const auto nonempty = MonotoneFamily::upward_closure(2, singles);
  const auto g = gen_threshold_bound(q(1, 4), 1, 2, nonempty, 2);
  CHECK(g.neighborhood.count() == 3);  // αεk = 1/2: strict radius keeps A itself
  CHECK(*g.stmt2.exact == q(15, 16));
  CHECK(*compare(g.stmt1, BoundValue::scaled_power(q(15, 16), 2, q(1, 2))) == 0);
}

TEST_CASE("search and zero-error bounds") {
  CHECK(zerr_bound(q(1, 2), 1, 2) == q(1, 4));
  CHECK(search_bound(q(1, 4), q(1, 1000000), 1, 3) == power(q(3, 4), 3));
  const auto w = wc_zerr_bound(q(1, 2), 1, 8);
  CHECK(w.success == doctest::Approx(11 * std::log(2.0)).epsilon(1e-12));
  CHECK(w.success > 1);
  CHECK(w.budget == q(1, 2));
  CHECK_THROWS_AS(wc_zerr_bound(q(3, 4), 1, 8), Error);
}

TEST_CASE("size bound") {
  const auto s = size_bound(q(1, 4), 1, 2, 3);
  CHECK(s.success.value == doctest::Approx(0.7955).epsilon(1e-4));
  CHECK(s.size_budget == doctest::Approx(std::sqrt(3.0)));
  CHECK(s.size_floor == 1);
  const auto t = size_bound(q(1, 4), 1, 4, 4);
  CHECK(t.size_floor == 4);
  CHECK(t.success.value == doctest::Approx(0.6328125).epsilon(1e-9));
  const auto u = size_bound(q(1, 1000000), 1, 1, 5);
  CHECK(u.size_floor == 1);
  CHECK(u.success.value == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("Chernoff forms") {
  CHECK(chernoff_small(q(1, 2), q(1, 100), 1) == doctest::Approx(0.5 + 0.21 * std::log(100.0) * 0.5).epsilon(1e-12));
  CHECK(chernoff_small(q(1, 2), q(1, 100), 1) == doctest::Approx(0.9835).epsilon(1e-4));
  CHECK(chernoff_general(q(1, 3), 0, 5) == doctest::Approx(1.0));
  const double x = 1.0 / (2 * 10 * std::log(10.0));
  CHECK(entropy_h(x) == doctest::Approx(0.08316).epsilon(1e-3));
  CHECK(entropy_h(x) < 0.1);
  CHECK_THROWS_AS(chernoff_small(q(1, 2), q(3, 5), 1), Error);
}

TEST_CASE("property: exact tails stay under both Chernoff forms") {
  for (int dn = 1; dn <= 10; ++dn)
    for (int bn = 1; bn <= 10; ++bn)
      for (int k = 1; k <= 64; ++k) {
        const Rational delta = q(dn, 20), beta = q(bn, 20);
        const Rational tail = binom_tail(k, Rational(1 - delta), Rational((1 - beta * delta) * k), true);
        CHECK(tail.get_d() <= chernoff_small(delta, beta, k));
        const Rational t = (1 - beta) * delta;
        CHECK(tail.get_d() <= chernoff_general(Rational(1 - delta), t, k) * (1 + 1e-12));
      }
}

TEST_CASE("float cross-check of the exact tails") {
  for (int k = 1; k <= 30; ++k)
    for (int pn = 0; pn <= 8; ++pn)
      for (int tn = 0; tn <= 4 * k; ++tn) {
        const double p = pn / 8.0;
        CHECK(binom_tail(k, q(pn, 8), q(tn, 4), false).get_d() == doctest::Approx(tail_ge(k, p, tn / 4.0)).epsilon(1e-9));
      }
}

TEST_CASE("property: the eta = 1 closed form also covers the non-strict tail") {
  for (int en = 1; en <= 20; en += 3)
    for (int an = 1; an <= 10; an += 3)
      for (int k = 1; k <= 48; k += 5) {
        const Rational eps = q(en, 20), alpha = q(an, 20);
        const auto t = threshold_bound(eps, alpha, 1, k, 2);
        REQUIRE(t.chern.has_value());
        const Rational tail = binom_tail(k, Rational(1 - eps), Rational((1 - alpha * eps) * k), false);
        CHECK(tail.get_d() <= *t.chern);
      }
}
