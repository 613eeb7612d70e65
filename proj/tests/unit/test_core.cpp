#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dptlab/distribution.hpp"
#include "dptlab/error.hpp"
#include "dptlab/monotone_family.hpp"
#include "dptlab/numeric.hpp"
#include "dptlab/partial_assignment.hpp"
#include "dptlab/tables.hpp"

using namespace dptlab;

namespace {

using Dist = InputDistribution<Rational>;

Dist random_distribution(int n, std::mt19937_64& rng, bool allow_zero) {
  std::uniform_int_distribution<int> weight(allow_zero ? 0 : 1, 6);
  std::vector<Rational> w(std::size_t{1} << n);
  Rational total = 0;
  for (auto& x : w) {
    x = weight(rng);
    total += x;
  }
  if (total == 0) {
    w[0] = 1;
    total = 1;
  }
  for (auto& x : w) x /= total;
  return Dist(n, w);
}

PartialAssignment random_assignment(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> tri(0, 2);
  PartialAssignment u(n);
  for (int i = 0; i < n; ++i) {
    const int c = tri(rng);
    if (c < 2) u = u.with(i, c);
  }
  return u;
}

}  // namespace

TEST_CASE("rational parsing is exact") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("-1e-3") == Rational(-1, 1000));
  CHECK(parse_rational("7") == 7);
  CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
  CHECK_THROWS_AS(parse_rational("x"), ParseError);
  CHECK(floor_power(3, Rational(1, 2)) == 1);
  CHECK(floor_power(4, Rational(1)) == 4);
  CHECK(floor_power(2, Rational(3, 2)) == 2);
  CHECK(floor_power(9, Rational(1, 2)) == 3);
}

TEST_CASE("partial assignments") {
  const auto v = PartialAssignment::parse("1**");
  CHECK(extends(0b101u, v));
  CHECK_FALSE(extends(0b001u, v));
  const auto a = PartialAssignment::parse("1*0");
  const auto b = PartialAssignment::parse("*10");
  CHECK(agree(a, b));
  CHECK(agree(b, a));
  CHECK(overlay(a, b) == PartialAssignment::parse("110"));
  CHECK_FALSE(agree(PartialAssignment::parse("1*"), PartialAssignment::parse("0*")));
  CHECK_THROWS_AS(overlay(PartialAssignment::parse("1*"), PartialAssignment::parse("0*")), Error);
  CHECK(a.size() == 2);
  CHECK(a.to_string() == "1*0");
}

TEST_CASE("conditioning") {
  const auto mu = Dist::uniform(2);
  const auto c = mu.condition(PartialAssignment::parse("1*"));
  CHECK(c[0] == 0);
  CHECK(c[1] == 0);
  CHECK(c[2] == Rational(1, 2));
  CHECK(c[3] == Rational(1, 2));
  CHECK(mu.condition(PartialAssignment(2)) == mu);
  const auto d = mu.condition(PartialAssignment::parse("*0"));
  CHECK(d[0] == Rational(1, 2));
  CHECK(d[1] == 0);
  CHECK(d[2] == Rational(1, 2));
  CHECK(d[3] == 0);
  const Dist point(1, {Rational(1), Rational(0)});
  CHECK_THROWS_AS(point.condition(PartialAssignment::parse("1")), Error);
  CHECK_FALSE(point.full_support());
  CHECK(mu.full_support());
}

TEST_CASE("float distributions renormalize within tolerance") {
  const InputDistribution<double> mu(1, {0.5 + 4e-10, 0.5});
  CHECK(mu[0] + mu[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(InputDistribution<double>(1, {0.5, 0.6}), Error);
  CHECK_THROWS_AS(Dist(1, {Rational(1, 2), Rational(1, 3)}), Error);
}

TEST_CASE("property: iterated conditioning equals conditioning on the overlay") {
  std::mt19937_64 rng(7);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const Dist mu = random_distribution(n, rng, true);
    const auto u = random_assignment(n, rng);
    const auto v = random_assignment(n, rng);
    if (!agree(u, v)) continue;
    const auto uv = overlay(u, v);
    if (mu.mass_of(uv) == 0) continue;
    CHECK(mu.condition(u).condition(v) == mu.condition(uv));
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("relations must be total") {
  CHECK_THROWS_AS(RelationTable(1, 2, {1, 0, 0, 0}), Error);
  const RelationTable p(functions::conjunction(2));
  CHECK(p.contains(3, 1));
  CHECK_FALSE(p.contains(3, 0));
}

TEST_CASE("named functions") {
  CHECK(functions::parity(3)(0b111) == 1);
  CHECK(functions::majority(3)(0b110) == 1);
  CHECK(functions::majority(3)(0b100) == 0);
  CHECK(functions::two_bit(0b0001) == functions::conjunction(2));
  CHECK(functions::two_bit(0b0111) == functions::disjunction(2));
  CHECK(functions::dictator(2, 0)(0b10) == 1);
}

TEST_CASE("neighborhoods use a strict radius") {
  const auto full = MonotoneFamily::full_set(2);
  CHECK(neighborhood(full, Rational(1)) == full);
  const auto n15 = neighborhood(full, Rational(3, 2));
  CHECK(n15.contains(0b11));
  CHECK(n15.contains(0b01));
  CHECK(n15.contains(0b10));
  CHECK_FALSE(n15.contains(0b00));
  CHECK(n15.count() == 3);
}

TEST_CASE("family probabilities") {
  const Subset one = 0b01;
  const auto a = MonotoneFamily::upward_closure(2, std::span<const Subset>(&one, 1));
  const std::vector<Rational> p{Rational(3, 4), Rational(3, 4)};
  CHECK(family_prob<Rational>(a, p) == Rational(3, 4));
  CHECK(family_prob<Rational>(MonotoneFamily::all_subsets(2), p) == 1);
  CHECK(family_prob<Rational>(MonotoneFamily::empty(2), p) == 0);
  CHECK_THROWS_AS(MonotoneFamily(2, {1, 0, 0, 0}), Error);
  CHECK(MonotoneFamily::enumerate_all(2).size() == 6);
  CHECK(MonotoneFamily::enumerate_all(3).size() == 20);
  CHECK(MonotoneFamily::at_least(3, Rational(3, 2)).is_symmetric());
  CHECK_FALSE(a.is_symmetric());
}

TEST_CASE("property: neighborhoods stay monotone and family_prob is monotone") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pnum(0, 8);
  for (int k = 1; k <= 3; ++k) {
    const auto families = MonotoneFamily::enumerate_all(k);
    for (const auto& a : families) {
      for (int twice_r = 1; twice_r <= 8; ++twice_r) {
        const auto nb = neighborhood(a, ratio(twice_r, 2));
        CHECK(is_monotone(k, nb.members()));
        for (Subset s = 0; s < (1u << k); ++s)
          if (a.contains(s)) CHECK(nb.contains(s));
      }
      for (int trial = 0; trial < 10; ++trial) {
        std::vector<Rational> p(static_cast<std::size_t>(k));
        for (auto& x : p) x = ratio(pnum(rng), 8);
        const Rational base = family_prob<Rational>(a, p);
        CHECK(base >= 0);
        CHECK(base <= 1);
        for (int j = 0; j < k; ++j) {
          auto q = p;
          q[static_cast<std::size_t>(j)] = (q[static_cast<std::size_t>(j)] + 1) / 2;
          CHECK(family_prob<Rational>(a, q) >= base);
        }
        for (const auto& b : families) {
          bool subset = true;
          for (Subset s = 0; s < (1u << k); ++s) subset = subset && (!a.contains(s) || b.contains(s));
          if (subset) CHECK(family_prob<Rational>(b, p) >= base);
        }
        // Independent recomputation by explicit subset products.
        Rational direct = 0;
        for (Subset s = 0; s < (1u << k); ++s) {
          if (!a.contains(s)) continue;
          Rational w = 1;
          for (int j = 0; j < k; ++j) w *= (s >> j & 1u) ? p[static_cast<std::size_t>(j)] : 1 - p[static_cast<std::size_t>(j)];
          direct += w;
        }
        CHECK(direct == base);
      }
    }
  }
}
