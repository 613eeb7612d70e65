#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <random>

#include "../support/brute_force.hpp"
#include "dptlab/error.hpp"
#include "dptlab/kfold.hpp"

using namespace dptlab;

namespace {

using Dist = InputDistribution<Rational>;

Dist random_distribution(int n, std::mt19937_64& rng, bool full_support) {
  std::uniform_int_distribution<int> weight(full_support ? 1 : 0, 4);
  std::vector<Rational> w(std::size_t{1} << n);
  Rational total = 0;
  for (auto& x : w) {
    x = weight(rng);
    total += x;
  }
  if (total == 0) {
    w.front() = 1;
    total = 1;
  }
  for (auto& x : w) x /= total;
  return Dist(n, w);
}

BooleanTable random_function(int n, int codomain, std::mt19937_64& rng) {
  std::vector<std::uint32_t> v(std::size_t{1} << n);
  for (auto& x : v) x = static_cast<std::uint32_t>(rng() % static_cast<std::uint64_t>(codomain));
  return BooleanTable(n, codomain, v);
}

}  // namespace

TEST_CASE("documented k-fold values") {
  const auto and2 = functions::conjunction(2);
  const auto u2 = Dist::uniform(2);
  CHECK(kfold_opt<Rational>(and2, u2, 2, 0, KFoldMode::product()) == Rational(9, 16));
  CHECK(kfold_opt<Rational>(and2, u2, 2, 0, KFoldMode::xor_parity()) == Rational(5, 8));
  CHECK(kfold_opt<Rational>(and2, u2, 2, 1, KFoldMode::product(), true) == Rational(9, 16));

  const SearchSet v(2, {PartialAssignment::parse("1*")});
  CHECK(kfold_opt_search<Rational>(v, u2, 2, 2, MonotoneFamily::full_set(2)) == Rational(1, 4));
  CHECK(kfold_opt_search<Rational>(v, u2, 2, 0, MonotoneFamily::all_subsets(2)) == 1);
  CHECK(kfold_opt_search<Rational>(v, u2, 3, 0, MonotoneFamily::full_set(3)) == 0);

  CHECK_THROWS_AS(kfold_opt<Rational>(BooleanTable(1, 3, {0, 2}), Dist::uniform(1), 2, 0, KFoldMode::xor_parity()),
                  Error);
  try {
    kfold_opt<Rational>(functions::parity(3), Dist::uniform(3), 4, 0, KFoldMode::product());
    FAIL("expected StateSpaceTooLarge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StateSpaceTooLarge);
  }
}

TEST_CASE("the state cap can be raised from the environment") {
  ::setenv("DPTLAB_MAX_STATE_BITS", "10", 1);
  CHECK(max_state_bits(true) == 10);
  CHECK(kfold_opt<Rational>(functions::parity(2), Dist::uniform(2), 5, 0, KFoldMode::product()) == Rational(1, 32));
  ::unsetenv("DPTLAB_MAX_STATE_BITS");
  CHECK(max_state_bits(true) == 9);
  CHECK(max_state_bits(false) == 12);
}

TEST_CASE("k-fold engine agrees with enumeration of joint trees") {
  std::mt19937_64 rng(5);
  const auto families2 = MonotoneFamily::enumerate_all(2);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 1 + trial % 2;
    const auto f = random_function(n, 2, rng);
    const auto mu = random_distribution(n, rng, trial % 3 != 0);
    const int max_depth = n == 1 ? 2 : 2;
    for (int m = 0; m <= max_depth; ++m) {
      CHECK(kfold_opt<Rational>(f, mu, 2, m, KFoldMode::product()) ==
            brute::kfold_family(f, mu, 2, m, MonotoneFamily::full_set(2)));
      CHECK(kfold_opt<Rational>(f, mu, 2, m, KFoldMode::xor_parity()) == brute::kfold_xor(f, mu, 2, m));
      if (n == 1) {
        for (const auto& a : families2)
          CHECK(kfold_opt<Rational>(f, mu, 2, m, KFoldMode::threshold(a)) == brute::kfold_family(f, mu, 2, m, a));
      }
    }
    // per-instance budget 1
    CHECK(kfold_opt<Rational>(f, mu, 2, 1, KFoldMode::product(), true) ==
          brute::kfold_family(f, mu, 2, 2, MonotoneFamily::full_set(2), 1));
    for (std::int64_t z = 1; z <= 3; ++z)
      CHECK(kfold_opt_size<Rational>(f, mu, 2, z) ==
            brute::kfold_family(f, mu, 2, 2 * n, MonotoneFamily::full_set(2), -1, static_cast<int>(z)));
  }
}

TEST_CASE("k = 3 single-bit instances, all monotone families") {
  std::mt19937_64 rng(9);
  const auto families3 = MonotoneFamily::enumerate_all(3);
  for (int trial = 0; trial < 3; ++trial) {
    const auto f = random_function(1, 2, rng);
    const auto mu = random_distribution(1, rng, true);
    for (int m = 0; m <= 2; ++m)
      for (const auto& a : families3)
        CHECK(kfold_opt<Rational>(f, mu, 3, m, KFoldMode::threshold(a)) == brute::kfold_family(f, mu, 3, m, a));
  }
}

TEST_CASE("k-fold search agrees with enumeration") {
  std::mt19937_64 rng(13);
  const auto families2 = MonotoneFamily::enumerate_all(2);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 2;
    std::vector<PartialAssignment> w;
    for (int c = 0; c < 2; ++c) {
      PartialAssignment u(n);
      for (int i = 0; i < n; ++i)
        if (const auto r = rng() % 3; r < 2) u = u.with(i, static_cast<int>(r));
      w.push_back(u);
    }
    const SearchSet v(n, w);
    const auto mu = random_distribution(n, rng, trial % 2 == 0);
    for (int m = 0; m <= 2; ++m)
      for (const auto& a : families2)
        CHECK(kfold_opt_search<Rational>(v, mu, 2, m, a) == brute::kfold_search(v, mu, 2, m, a));
  }
}

TEST_CASE("property: fair product optimum is the k-th power") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const int k = 2 + static_cast<int>(rng() % 2);
    if (k * n > 9) continue;
    const auto f = random_function(n, 2, rng);
    const auto mu = random_distribution(n, rng, trial % 2 == 0);
    for (int t = 0; t <= n; ++t) {
      const Rational single = opt_success<Rational>(f, mu, t);
      CHECK(kfold_opt<Rational>(f, mu, k, t, KFoldMode::product(), true) == power(single, k));
    }
  }
}

TEST_CASE("property: monotone in budget and in the family") {
  std::mt19937_64 rng(25);
  const auto families = MonotoneFamily::enumerate_all(2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_function(2, 2, rng);
    const auto mu = random_distribution(2, rng, true);
    Rational prev = -1;
    for (int m = 0; m <= 4; ++m) {
      const Rational v = kfold_opt<Rational>(f, mu, 2, m, KFoldMode::product());
      CHECK(v >= prev);
      prev = v;
      for (const auto& a : families)
        for (const auto& b : families) {
          bool subset = true;
          for (Subset s = 0; s < 4; ++s) subset = subset && (!a.contains(s) || b.contains(s));
          if (subset)
            CHECK(kfold_opt<Rational>(f, mu, 2, m, KFoldMode::threshold(a)) <=
                  kfold_opt<Rational>(f, mu, 2, m, KFoldMode::threshold(b)));
        }
    }
  }
}

TEST_CASE("float engine matches the exact engine") {
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_function(2, 2, rng);
    const auto mu = random_distribution(2, rng, true);
    std::vector<double> w;
    for (const auto& x : mu.mass()) w.push_back(x.get_d());
    const InputDistribution<double> muf(2, w);
    for (int m = 0; m <= 3; ++m)
      CHECK(kfold_opt<double>(f, muf, 3, m, KFoldMode::xor_parity()) ==
            doctest::Approx(kfold_opt<Rational>(f, mu, 3, m, KFoldMode::xor_parity()).get_d()).epsilon(1e-12));
  }
}

TEST_CASE("tree text format round trips") {
  const auto tree = KFoldTree::parse(" (q 1 2 (leaf 0 1)\n (q 2 1 (leaf 1 1) (leaf 0 0)))");
  CHECK(tree.to_string() == "(q 1 2 (leaf 0 1) (q 2 1 (leaf 1 1) (leaf 0 0)))");
  CHECK(KFoldTree::parse(tree.to_string()).to_string() == tree.to_string());
  CHECK(tree.depth() == 2);
  CHECK(tree.leaf_count() == 3);
  try {
    KFoldTree::parse("(q 1 1 (leaf 0)\n (oops))");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(tree.validate(1, 2, 2, 2), Error);
  CHECK_THROWS_AS(tree.validate(2, 1, 2, 2), Error);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const auto t = random_kfold_tree(2, 2, 2, 4, rng);
    CHECK(KFoldTree::parse(t.to_string()).to_string() == t.to_string());
  }
}

TEST_CASE("trace of the constant tree") {
  const auto and2 = functions::conjunction(2);
  const auto u2 = Dist::uniform(2);
  for (int k = 1; k <= 3; ++k) {
    KFoldTree tree;
    tree.add_leaf(std::vector<std::uint32_t>(static_cast<std::size_t>(k), 0));
    const auto r = trace_tree<Rational>(tree, and2, u2, 0, k);
    CHECK(r.success_paths == power(Rational(3, 4), k));
    CHECK(r.expected_product[0] == power(Rational(3, 4), k));
    CHECK(r.ok());
  }
}

TEST_CASE("trace of the fair instance-by-instance tree") {
  const auto and2 = functions::conjunction(2);
  const auto u2 = Dist::uniform(2);
  const auto tree = fair_product_tree<Rational>(and2, u2, 1, 2);
  const auto r = trace_tree<Rational>(tree, and2, u2, 1, 2);
  CHECK(r.success_paths == Rational(9, 16));
  CHECK(r.success_direct == Rational(9, 16));
  CHECK(r.expected_product.back() == Rational(9, 16));
  CHECK(r.success_paths == kfold_opt<Rational>(and2, u2, 2, 1, KFoldMode::product(), true));
  CHECK(r.ok());
}

TEST_CASE("property: random trees never break the supermartingale or factorization") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const int k = 1 + static_cast<int>(rng() % 2);
    const auto f = random_function(n, trial % 4 == 0 ? 3 : 2, rng);
    const auto mu = random_distribution(n, rng, trial % 3 != 0);
    const auto tree = random_kfold_tree(k, n, f.codomain(), 5, rng);
    for (int t = 0; t <= n; ++t) {
      const auto r = trace_tree<Rational>(tree, f, mu, t, k);
      CHECK(r.chain_violations == 0);
      CHECK(r.node_violations == 0);
      CHECK(r.factorization_violations == 0);
      CHECK(r.factorization_checks > 0);
      CHECK(r.success_paths == r.success_direct);
      CHECK(r.bound_holds());
    }
  }
}

TEST_CASE("Monte Carlo estimate brackets the exact success") {
  const auto f = functions::majority(3);
  const auto mu = Dist::uniform(3);
  std::mt19937_64 rng(2);
  const auto tree = random_kfold_tree(2, 3, 2, 4, rng);
  const auto exact = trace_tree<Rational>(tree, f, mu, 1, 2).success_paths.get_d();
  const auto est = simulate_tree<Rational>(tree, f, mu, 2, 200000, 0);
  CHECK(std::abs(est.estimate - exact) <= 2 * est.half_width + 1e-12);
  const auto again = simulate_tree<Rational>(tree, f, mu, 2, 200000, 0);
  CHECK(again.successes == est.successes);
}
