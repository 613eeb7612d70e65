#include "dptlab/hardness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <random>

#include "dptlab/bounds.hpp"
#include "dptlab/error.hpp"
#include "dptlab/optimal_dp.hpp"

namespace dptlab {

namespace {

[[noreturn]] void domain(const std::string& what) { throw Error(ErrorKind::DomainError, what); }

void require_eps(const Rational& eps) {
  if (eps <= 0 || eps >= Rational(1, 2)) domain("epsilon must lie in (0, 1/2), got " + to_string(eps));
}

void require_alpha(const Rational& alpha) {
  if (alpha <= 0 || alpha > 1) domain("alpha must lie in (0, 1], got " + to_string(alpha));
}

void require_k(int k) {
  if (k < 1) domain("k must be at least 1");
}

Rational pow2(std::int64_t e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
  return e >= 0 ? Rational(p) : Rational(mpz_class(1), p);
}

bool monochromatic(const BooleanTable& f, const PartialAssignment& u) {
  const std::uint32_t free_bits = ~u.mask() & (f.size() - 1);
  const std::uint32_t first = f(u.values());
  // Walk the subsets of the free bits.
  for (std::uint32_t s = free_bits;; s = (s - 1) & free_bits) {
    if (f(u.values() | s) != first) return false;
    if (s == 0) break;
  }
  return true;
}

}  // namespace

// ---- Shaltiel family -------------------------------------------------------

ShaltielInstance shaltiel_instance(int T, const Rational& eps, int check_limit) {
  if (T < 1) domain("T must be at least 1");
  require_eps(eps);
  const int n = T + 2;
  if (n > kMaxArity)
    throw Error(ErrorKind::ArityCap, "f_T needs " + std::to_string(n) + " bits, cap is " + std::to_string(kMaxArity));

  const std::uint32_t x1 = variable_bit(n, 0);
  const std::uint32_t x2 = variable_bit(n, 1);
  const std::uint32_t tail = x1 - 1;  // bits 2..n
  auto f = BooleanTable::from_function(n, 2, [&](std::uint32_t x) -> std::uint32_t {
    if (x & x1) return (x & x2) ? 1 : 0;
    return static_cast<std::uint32_t>(std::popcount(x & tail) & 1);
  });
  std::vector<Rational> ones(static_cast<std::size_t>(n), Rational(1, 2));
  ones[0] = 1 - 2 * eps;
  auto mu = InputDistribution<Rational>::product(ones);

  ShaltielInstance inst{T, eps, std::move(f), std::move(mu), std::nullopt};
  if (n <= check_limit) {
    inst.optimum = opt_success<Rational>(inst.f, inst.mu, T);
    if (*inst.optimum != 1 - eps)
      domain("self-check failed: optimum " + to_string(*inst.optimum) + " differs from 1 - eps");
  }
  return inst;
}

std::vector<Rational> shaltiel_solved_distribution(const Rational& eps, int k, std::int64_t rescues) {
  require_eps(eps);
  require_k(k);
  if (rescues < 0) domain("rescue count must be nonnegative");
  std::vector<Rational> solved(static_cast<std::size_t>(k) + 1, Rational(0));
  const Rational half(1, 2);
  for (int b = 0; b <= k; ++b) {
    const Rational pb = binom_pmf(k, 2 * eps, b);
    if (pb == 0) continue;
    const int guessed = static_cast<int>(std::max<std::int64_t>(0, b - rescues));
    for (int g = 0; g <= guessed; ++g)
      solved[static_cast<std::size_t>(k - guessed + g)] += pb * binom_pmf(guessed, half, g);
  }
  return solved;
}

Rational shaltiel_success_with_rescues(const Rational& eps, int k, std::int64_t rescues) {
  require_eps(eps);
  require_k(k);
  if (rescues < 0) domain("rescue count must be nonnegative");
  Rational total = 0;
  for (int b = 0; b <= k; ++b)
    total += binom_pmf(k, 2 * eps, b) * pow2(-std::max<std::int64_t>(0, b - rescues));
  return total;
}

ShaltielAlgorithm shaltiel_alg_success(int T, const Rational& eps, const Rational& alpha, int k) {
  if (T < 1) domain("T must be at least 1");
  require_eps(eps);
  require_alpha(alpha);
  require_k(k);
  ShaltielAlgorithm out;
  out.rescues = floor_to_int64(alpha * eps * k);
  out.exact = shaltiel_success_with_rescues(eps, k, out.rescues);
  out.queries_used = 2 * static_cast<std::int64_t>(k) + out.rescues * T;
  out.theorem_budget = alpha * eps * T * k;
  out.solved = shaltiel_solved_distribution(eps, k, out.rescues);
  out.expected_solved = 0;
  for (std::size_t c = 0; c < out.solved.size(); ++c) out.expected_solved += Rational(static_cast<long>(c)) * out.solved[c];
  return out;
}

KFoldTree shaltiel_d_tree(int T, int k, std::int64_t rescues) {
  if (T < 1) domain("T must be at least 1");
  require_k(k);
  const int n = T + 2;
  KFoldTree tree;
  std::vector<std::uint32_t> outs;

  std::function<int(int, std::int64_t)> build;
  // Reads x_3..x_n of instance j, accumulating parity, then moves on.
  std::function<int(int, int, std::uint32_t, std::int64_t)> chain = [&](int j, int idx, std::uint32_t par,
                                                                        std::int64_t used) -> int {
    if (idx == n) {
      outs.push_back(par);
      const int id = build(j + 1, used);
      outs.pop_back();
      return id;
    }
    const int left = chain(j, idx + 1, par, used);
    const int right = chain(j, idx + 1, par ^ 1u, used);
    return tree.add_query(j, idx, left, right);
  };
  build = [&](int j, std::int64_t used) -> int {
    if (j == k) return tree.add_leaf(outs);
    int bad[2];
    int good[2];
    for (std::uint32_t v = 0; v < 2; ++v) {
      if (used < rescues) {
        bad[v] = chain(j, 2, v, used + 1);
      } else {
        outs.push_back(0);
        bad[v] = build(j + 1, used);
        outs.pop_back();
      }
      outs.push_back(v);
      good[v] = build(j + 1, used);
      outs.pop_back();
    }
    const int bad_node = tree.add_query(j, 1, bad[0], bad[1]);
    const int good_node = tree.add_query(j, 1, good[0], good[1]);
    return tree.add_query(j, 0, bad_node, good_node);
  };
  tree.set_root(build(0, 0));
  return tree;
}

Rational happyeq_lower(const Rational& eps, const Rational& alpha, int k) {
  require_eps(eps);
  require_alpha(alpha);
  require_k(k);
  const Rational threshold = alpha * eps * k;
  const std::int64_t s = floor_to_int64(threshold);
  return pow2(s) * (power(Rational(1 - eps), k) - binom_lower_tail(k, 2 * eps, threshold, true));
}

// ---- minimax ---------------------------------------------------------------

bool tree_correct(const KFoldTree& tree, const BooleanTable& f, std::uint32_t x, YaoFlavor flavor) {
  const int n = f.arity();
  PartialAssignment u(n);
  int id = tree.root();
  while (!tree.node(id).leaf) {
    const auto& nd = tree.node(id);
    const int b = (x & variable_bit(n, nd.index)) ? 1 : 0;
    u = u.with(nd.index, b);
    id = b ? nd.right : nd.left;
  }
  if (flavor == YaoFlavor::plain) return tree.node(id).outputs.at(0) == f(x);
  return monochromatic(f, u);
}

MinimaxResult yao_hard_dist(const BooleanTable& f, int T, YaoFlavor flavor, const YaoOptions& options) {
  check_budget(T);
  if (options.iterations < 1) domain("iterations must be at least 1");
  const int n = f.arity();
  const std::uint32_t N = f.size();
  const int iters = options.iterations;

  MinimaxResult r;
  r.iterations = iters;
  r.step = options.step ? *options.step
                        : std::min(0.5, std::sqrt(std::log(static_cast<double>(N)) / static_cast<double>(iters)));
  if (!(r.step >= 0)) domain("step size must be nonnegative");

  const RelationTable relation(f);
  const SearchSet forcing = flavor == YaoFlavor::zerr ? forcing_set(f) : SearchSet();
  auto model_for = [&](const std::vector<double>& w) {
    InputDistribution<double> mu(n, w);
    return flavor == YaoFlavor::plain ? std::make_shared<InstanceModel<double>>(relation, mu)
                                      : std::make_shared<InstanceModel<double>>(forcing, mu);
  };

  std::mt19937_64 rng(options.seed);
  std::vector<double> log_w(N, 0.0);
  std::vector<double> mu_t(N);
  std::vector<double> mu_sum(N, 0.0);
  std::vector<double> tail_sum(N, 0.0);
  std::vector<double> best_iterate;
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<std::int64_t> correct(N, 0);
  double value_sum = 0;
  r.min_iteration_gap = std::numeric_limits<double>::infinity();
  const PartialAssignment root(n);

  for (int t = 0; t < iters; ++t) {
    const double top = *std::max_element(log_w.begin(), log_w.end());
    double z = 0;
    for (std::uint32_t x = 0; x < N; ++x) z += (mu_t[x] = std::exp(log_w[x] - top));
    for (double& m : mu_t) m /= z;

    ValueTable<double> table(model_for(mu_t));
    const double v_t = table.value(root, T);
    value_sum += v_t;
    if (v_t < best_value) {
      best_value = v_t;
      best_iterate = mu_t;
    }
    const KFoldTree tree = table.best_tree(T, options.tie_noise ? &rng : nullptr);
    for (std::uint32_t x = 0; x < N; ++x) {
      mu_sum[x] += mu_t[x];
      if (2 * t >= iters) tail_sum[x] += mu_t[x];
      if (tree_correct(tree, f, x, flavor)) {
        ++correct[x];
        log_w[x] -= r.step;
      }
    }

    // Certificate so far: BR(μ̂_t) against the averaged strategies' worst input.
    std::vector<double> avg(N);
    for (std::uint32_t x = 0; x < N; ++x) avg[x] = mu_sum[x] / (t + 1);
    ValueTable<double> check(model_for(avg));
    const double lower_t = static_cast<double>(*std::min_element(correct.begin(), correct.end())) / (t + 1);
    r.min_iteration_gap = std::min(r.min_iteration_gap, check.value(root, T) - lower_t);
  }

  // Any distribution certifies an upper bound; keep the best of three.
  const int tail_count = iters - (iters + 1) / 2;
  std::vector<std::pair<const char*, std::vector<double>>> candidates;
  candidates.emplace_back("average", mu_sum);
  for (double& m : candidates.back().second) m /= iters;
  if (tail_count > 0) {
    candidates.emplace_back("tail average", tail_sum);
    for (double& m : candidates.back().second) m /= tail_count;
  }
  candidates.emplace_back("best iterate", best_iterate);
  bool first = true;
  for (const auto& [name, w] : candidates) {
    std::vector<Rational> exact(N);
    Rational total = 0;
    for (std::uint32_t x = 0; x < N; ++x) {
      exact[x] = Rational(w[x]);
      total += exact[x];
    }
    for (Rational& e : exact) e /= total;
    const InputDistribution<Rational> mu(n, std::move(exact));
    Rational up = flavor == YaoFlavor::plain ? opt_success<Rational>(f, mu, T) : opt_success_zerr<Rational>(f, mu, T);
    if (first || up < r.upper) {
      r.upper = up;
      r.mu_hat = w;
      r.certificate = name;
      first = false;
    }
  }
  r.lower = ratio(static_cast<long>(*std::min_element(correct.begin(), correct.end())), iters);
  r.gap = r.upper - r.lower;
  r.average_value = value_sum / iters;
  return r;
}

AmplificationBudget amplification_budget(const Rational& gamma) {
  if (gamma <= 0 || gamma >= Rational(1, 4)) domain("gamma must lie in (0, 1/4), got " + to_string(gamma));
  const Rational sq = gamma * gamma;
  return {ceil_to_int64(Rational(3 / sq)), Rational(4 / sq)};
}

}  // namespace dptlab
