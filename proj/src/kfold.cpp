#include "dptlab/kfold.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <string>

#include "dptlab/error.hpp"

namespace dptlab {

int max_state_bits(bool exact) {
  if (const char* env = std::getenv("DPTLAB_MAX_STATE_BITS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<int>(std::min<long>(v, 32));
  }
  return exact ? 9 : 12;
}

void check_state_space(int k, int arity, bool exact) {
  if (k < 1) throw Error(ErrorKind::DomainError, "k must be at least 1");
  const int cap = max_state_bits(exact);
  if (k * arity > cap)
    throw Error(ErrorKind::StateSpaceTooLarge,
                "k*n = " + std::to_string(k * arity) + " exceeds the cap of " + std::to_string(cap) +
                    " (reduce k to " + std::to_string(std::max(1, cap / std::max(1, arity))) +
                    " or fewer, or raise DPTLAB_MAX_STATE_BITS)");
}

// ---- KFoldEngine -----------------------------------------------------------

template <class S>
KFoldEngine<S>::KFoldEngine(std::shared_ptr<InstanceModel<S>> model, int k, KFoldMode mode)
    : model_(std::move(model)), k_(k), mode_(std::move(mode)) {
  check_state_space(k, model_->arity(), ScalarTraits<S>::exact);
  if (mode_.kind == KFoldMode::Kind::threshold && mode_.family.k() != k)
    throw Error(ErrorKind::ArityMismatch, "family is over [" + std::to_string(mode_.family.k()) +
                                              "], expected [" + std::to_string(k) + "]");
  if (mode_.kind == KFoldMode::Kind::xor_parity && (model_->is_search() || model_->codomain() != 2))
    throw Error(ErrorKind::NonBooleanXor, "XOR mode needs a Boolean function");
  exchangeable_ = mode_.kind != KFoldMode::Kind::threshold || mode_.family.is_symmetric();
}

template <class S>
std::uint64_t KFoldEngine<S>::key(const State& s) const {
  const int n = model_->arity();
  std::uint64_t codes[32];
  for (int j = 0; j < k_; ++j)
    codes[j] = (std::uint64_t{s[static_cast<std::size_t>(j)].mask()} << n) | s[static_cast<std::size_t>(j)].values();
  if (exchangeable_) std::sort(codes, codes + k_);
  std::uint64_t out = 0;
  for (int j = 0; j < k_; ++j) out |= codes[j] << (2 * n * j);
  return out;
}

template <class S>
S KFoldEngine<S>::leaf_value(const State& s) {
  InstanceModel<S>& m = *model_;
  switch (mode_.kind) {
    case KFoldMode::Kind::product: {
      S out = 1;
      for (const auto& u : s) out *= m.stop_value(u);
      return out;
    }
    case KFoldMode::Kind::threshold: {
      std::vector<S> hit, total;
      for (const auto& u : s) {
        hit.push_back(m.stop_value(u));
        total.push_back(m.mass(u));
      }
      return family_weight<S>(mode_.family, hit, total);
    }
    case KFoldMode::Kind::xor_parity: {
      S all = 1, bias = 1;
      for (const auto& u : s) {
        all *= m.mass(u);
        bias *= ScalarTraits<S>::abs(m.hit(u, 1) - m.hit(u, 0));
      }
      return (all + bias) / 2;
    }
  }
  return S(0);
}

template <class S>
S KFoldEngine<S>::depth_value(State& s) {
  const std::uint64_t id = key(s);
  if (auto it = memo_.find(id); it != memo_.end()) return it->second;
  S best = leaf_value(s);
  int used = 0;
  for (const auto& u : s) used += u.size();
  if (fair_ || used < budget_) {
    for (int j = 0; j < k_; ++j) {
      PartialAssignment& u = s[static_cast<std::size_t>(j)];
      if (fair_ && u.size() >= budget_) continue;
      if (exchangeable_) {
        bool duplicate = false;
        for (int e = 0; e < j && !duplicate; ++e) duplicate = s[static_cast<std::size_t>(e)] == u;
        if (duplicate) continue;
      }
      const PartialAssignment original = u;
      for (int i = 0; i < original.arity(); ++i) {
        if (original.is_fixed(i)) continue;
        S sum = 0;
        for (int b = 0; b < 2; ++b) {
          const PartialAssignment child = original.with(i, b);
          if (ScalarTraits<S>::is_zero(model_->mass(child))) continue;
          s[static_cast<std::size_t>(j)] = child;
          sum += depth_value(s);
        }
        s[static_cast<std::size_t>(j)] = original;
        if (sum > best) best = sum;
      }
    }
  }
  memo_.emplace(id, best);
  return best;
}

template <class S>
S KFoldEngine<S>::optimum(int budget, bool fair) {
  check_budget(budget);
  budget_ = budget;
  fair_ = fair;
  memo_.clear();
  State root(static_cast<std::size_t>(k_), PartialAssignment(model_->arity()));
  return depth_value(root);
}

template <class S>
S KFoldEngine<S>::size_value(State& s, std::int64_t leaves) {
  int free = 0;
  for (const auto& u : s) free += u.free_count();
  if (free < 62) leaves = std::min<std::int64_t>(leaves, std::int64_t{1} << free);
  if (leaves == 1) return leaf_value(s);
  const std::uint64_t id = key(s);
  if (auto row = size_memo_.find(id); row != size_memo_.end())
    if (auto it = row->second.find(leaves); it != row->second.end()) return it->second;
  S best = leaf_value(s);
  for (int j = 0; j < k_; ++j) {
    const PartialAssignment original = s[static_cast<std::size_t>(j)];
    for (int i = 0; i < original.arity(); ++i) {
      if (original.is_fixed(i)) continue;
      const PartialAssignment zero = original.with(i, 0);
      const PartialAssignment one = original.with(i, 1);
      const bool zero_live = !ScalarTraits<S>::is_zero(model_->mass(zero));
      const bool one_live = !ScalarTraits<S>::is_zero(model_->mass(one));
      for (std::int64_t z0 = 1; z0 < leaves; ++z0) {
        S sum = 0;
        if (zero_live) {
          s[static_cast<std::size_t>(j)] = zero;
          sum += size_value(s, z0);
        }
        if (one_live) {
          s[static_cast<std::size_t>(j)] = one;
          sum += size_value(s, leaves - z0);
        }
        s[static_cast<std::size_t>(j)] = original;
        if (sum > best) best = sum;
      }
    }
  }
  size_memo_[id].emplace(leaves, best);
  return best;
}

template <class S>
S KFoldEngine<S>::optimum_size(std::int64_t leaves) {
  if (leaves < 1) throw Error(ErrorKind::SizeBudgetTooSmall, "size budget must be at least 1");
  State root(static_cast<std::size_t>(k_), PartialAssignment(model_->arity()));
  return size_value(root, leaves);
}

// ---- entry points ----------------------------------------------------------

namespace {

bool is_functional_boolean(const RelationTable& p) {
  if (p.codomain() != 2) return false;
  for (std::uint32_t x = 0; x < (1u << p.arity()); ++x)
    if (p.contains(x, 0) == p.contains(x, 1)) return false;
  return true;
}

}  // namespace

template <class S>
S kfold_opt(const RelationTable& p, const InputDistribution<S>& mu, int k, int budget, const KFoldMode& mode,
            bool fair) {
  if (mode.kind == KFoldMode::Kind::xor_parity && !is_functional_boolean(p))
    throw Error(ErrorKind::NonBooleanXor, "XOR mode needs a Boolean function");
  KFoldEngine<S> engine(std::make_shared<InstanceModel<S>>(p, mu), k, mode);
  return engine.optimum(budget, fair);
}

template <class S>
S kfold_opt(const BooleanTable& f, const InputDistribution<S>& mu, int k, int budget, const KFoldMode& mode,
            bool fair) {
  if (mode.kind == KFoldMode::Kind::xor_parity && !f.is_boolean())
    throw Error(ErrorKind::NonBooleanXor, "XOR mode needs |B| = 2");
  return kfold_opt<S>(RelationTable(f), mu, k, budget, mode, fair);
}

template <class S>
S kfold_opt_search(const SearchSet& v, const InputDistribution<S>& mu, int k, int budget,
                   const MonotoneFamily& family, bool fair) {
  KFoldEngine<S> engine(std::make_shared<InstanceModel<S>>(v, mu), k, KFoldMode::threshold(family));
  return engine.optimum(budget, fair);
}

template <class S>
S kfold_opt_size(const BooleanTable& f, const InputDistribution<S>& mu, int k, std::int64_t leaves,
                 const KFoldMode& mode) {
  if (mode.kind == KFoldMode::Kind::xor_parity && !f.is_boolean())
    throw Error(ErrorKind::NonBooleanXor, "XOR mode needs |B| = 2");
  KFoldEngine<S> engine(std::make_shared<InstanceModel<S>>(RelationTable(f), mu), k, mode);
  return engine.optimum_size(leaves);
}

// ---- tracer ----------------------------------------------------------------

template <class S>
bool TraceReport<S>::success_agrees() const {
  return !direct_checked || ScalarTraits<S>::eq(success_paths, success_direct);
}

template <class S>
bool TraceReport<S>::bound_holds() const {
  return ScalarTraits<S>::le(success_paths, weighted_bound) && ScalarTraits<S>::le(weighted_bound, global_bound) &&
         leaf_violations == 0;
}

template <class S>
bool TraceReport<S>::ok() const {
  return chain_violations == 0 && node_violations == 0 && factorization_violations == 0 && success_agrees() &&
         bound_holds();
}

template <class S>
TraceReport<S> trace_tree(const KFoldTree& tree, const BooleanTable& f, const InputDistribution<S>& mu, int T,
                          int k) {
  check_budget(T);
  check_arity(f.arity(), mu.arity());
  const int n = f.arity();
  tree.validate(k, n, k, f.codomain());
  if (k * n > 32) throw Error(ErrorKind::StateSpaceTooLarge, "trace needs k*n <= 32");

  auto model = std::make_shared<InstanceModel<S>>(RelationTable(f), mu);
  ValueTable<S> table(model);
  const S floor_fortune = S(1) / S(f.codomain());
  auto fortune = [&](const PartialAssignment& u) -> S {
    return u.size() <= T ? table.fortune(u, T - u.size()) : floor_fortune;
  };

  TraceReport<S> report;
  report.k = k;
  report.hardness_budget = T;
  report.steps = tree.depth();

  using State = std::vector<PartialAssignment>;
  std::vector<State> node_state(tree.node_count());
  std::vector<char> node_live(tree.node_count(), 0);
  std::vector<std::vector<S>> prefix;

  auto state_mass = [&](const State& s) {
    S m = 1;
    for (const auto& u : s) m *= model->mass(u);
    return m;
  };
  auto product = [](const std::vector<S>& x) {
    S p = 1;
    for (const S& v : x) p *= v;
    return p;
  };

  std::function<void(int, State&)> walk = [&](int id, State& s) {
    node_state[static_cast<std::size_t>(id)] = s;
    node_live[static_cast<std::size_t>(id)] = 1;
    std::vector<S> here;
    for (const auto& u : s) here.push_back(fortune(u));
    prefix.push_back(here);
    const auto& node = tree.node(id);
    const S reach = state_mass(s);
    if (node.leaf) {
      TracePath<S> path;
      path.probability = reach;
      path.fortunes = prefix;
      path.outputs = node.outputs;
      path.success = 1;
      for (int j = 0; j < k; ++j) {
        const auto& u = s[static_cast<std::size_t>(j)];
        path.success *= model->hit(u, node.outputs[static_cast<std::size_t>(j)]);
        path.queries.push_back(u.size());
        if (u.size() > T) ++path.over_budget;
      }
      report.paths.push_back(std::move(path));
    } else {
      const std::size_t j = static_cast<std::size_t>(node.instance);
      const PartialAssignment original = s[j];
      S next = 0;
      for (int b = 0; b < 2; ++b) {
        const int child = b ? node.right : node.left;
        if (original.is_fixed(node.index)) {
          if (original.bit(node.index) != b) continue;
          s[j] = original;
        } else {
          s[j] = original.with(node.index, b);
        }
        if (ScalarTraits<S>::is_zero(model->mass(s[j]))) continue;
        const S child_reach = state_mass(s);
        std::vector<S> child_fortunes = here;
        child_fortunes[j] = fortune(s[j]);
        next += child_reach * product(child_fortunes);
        walk(child, s);
      }
      s[j] = original;
      ++report.node_checks;
      if (!ScalarTraits<S>::le(next, reach * product(here))) ++report.node_violations;
    }
    prefix.pop_back();
  };
  State root(static_cast<std::size_t>(k), PartialAssignment(n));
  walk(tree.root(), root);

  // E[P_t]: a path that has stopped keeps its final fortunes.
  const int M = report.steps;
  report.expected_product.assign(static_cast<std::size_t>(M) + 1, S(0));
  report.success_paths = 0;
  report.weighted_bound = 0;
  for (const auto& path : report.paths) {
    const std::size_t last = path.fortunes.size() - 1;
    for (int t = 0; t <= M; ++t)
      report.expected_product[static_cast<std::size_t>(t)] +=
          path.probability * product(path.fortunes[std::min<std::size_t>(static_cast<std::size_t>(t), last)]);
    report.success_paths += path.success;
    const S scale = power(S(f.codomain()), path.over_budget);
    const S leaf_bound = path.probability * scale * product(path.fortunes[last]);
    report.weighted_bound += leaf_bound;
    if (!ScalarTraits<S>::le(path.success, leaf_bound)) ++report.leaf_violations;
    report.max_over_budget = std::max(report.max_over_budget, path.over_budget);
  }
  for (int t = 0; t < M; ++t)
    if (!ScalarTraits<S>::le(report.expected_product[static_cast<std::size_t>(t) + 1],
                             report.expected_product[static_cast<std::size_t>(t)]))
      ++report.chain_violations;
  report.global_bound = power(S(f.codomain()), report.max_over_budget) * report.expected_product.back();

  // Independent check by brute force over all joint inputs.
  if (k * n <= 20) {
    report.direct_checked = true;
    report.success_direct = 0;
    std::vector<S> reach(tree.node_count(), S(0));
    std::vector<char> inclusion_ok(tree.node_count(), 1);
    const std::uint64_t joint_points = std::uint64_t{1} << (k * n);
    const std::uint32_t low = (1u << n) - 1;
    std::vector<std::uint32_t> x(static_cast<std::size_t>(k));
    for (std::uint64_t joint = 0; joint < joint_points; ++joint) {
      S weight = 1;
      for (int j = 0; j < k; ++j) {
        x[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(joint >> (n * (k - 1 - j))) & low;
        weight *= mu[x[static_cast<std::size_t>(j)]];
      }
      if (ScalarTraits<S>::is_zero(weight)) continue;
      int id = tree.root();
      while (true) {
        reach[static_cast<std::size_t>(id)] += weight;
        const State& s = node_state[static_cast<std::size_t>(id)];
        if (!node_live[static_cast<std::size_t>(id)]) {
          inclusion_ok[static_cast<std::size_t>(id)] = 0;
        } else {
          for (int j = 0; j < k; ++j)
            if (!s[static_cast<std::size_t>(j)].extended_by(x[static_cast<std::size_t>(j)]))
              inclusion_ok[static_cast<std::size_t>(id)] = 0;
        }
        const auto& node = tree.node(id);
        if (node.leaf) {
          bool correct = true;
          for (int j = 0; j < k; ++j)
            correct = correct && node.outputs[static_cast<std::size_t>(j)] == f(x[static_cast<std::size_t>(j)]);
          if (correct) report.success_direct += weight;
          break;
        }
        const bool one = (x[static_cast<std::size_t>(node.instance)] & variable_bit(n, node.index)) != 0;
        id = one ? node.right : node.left;
      }
    }
    for (std::size_t id = 0; id < tree.node_count(); ++id) {
      const bool live = node_live[id] != 0;
      if (!live && ScalarTraits<S>::is_zero(reach[id])) continue;
      ++report.factorization_checks;
      if (!live || !inclusion_ok[id] || !ScalarTraits<S>::eq(reach[id], state_mass(node_state[id])))
        ++report.factorization_violations;
    }
  }
  return report;
}

KFoldTree random_kfold_tree(int k, int arity, int codomain, int max_depth, std::mt19937_64& rng, double stop) {
  KFoldTree tree;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> symbol(0, codomain - 1);
  std::vector<std::uint32_t> fixed(static_cast<std::size_t>(k), 0);
  std::function<int(int)> grow = [&](int depth) -> int {
    if (depth >= max_depth || unit(rng) < stop) {
      std::vector<std::uint32_t> out(static_cast<std::size_t>(k));
      for (auto& b : out) b = static_cast<std::uint32_t>(symbol(rng));
      return tree.add_leaf(std::move(out));
    }
    std::vector<std::pair<int, int>> fresh, any;
    for (int j = 0; j < k; ++j)
      for (int i = 0; i < arity; ++i) {
        any.emplace_back(j, i);
        if (!(fixed[static_cast<std::size_t>(j)] & variable_bit(arity, i))) fresh.emplace_back(j, i);
      }
    const auto& pool = (!fresh.empty() && unit(rng) < 0.9) ? fresh : any;
    const auto [j, i] = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
    const std::uint32_t saved = fixed[static_cast<std::size_t>(j)];
    fixed[static_cast<std::size_t>(j)] |= variable_bit(arity, i);
    const int left = grow(depth + 1);
    const int right = grow(depth + 1);
    fixed[static_cast<std::size_t>(j)] = saved;
    return tree.add_query(j, i, left, right);
  };
  tree.set_root(grow(0));
  return tree;
}

template <class S>
KFoldTree fair_product_tree(const BooleanTable& f, const InputDistribution<S>& mu, int T, int k) {
  ValueTable<S> table(std::make_shared<InstanceModel<S>>(RelationTable(f), mu));
  const KFoldTree single = table.best_tree(T);
  KFoldTree tree;
  std::vector<std::uint32_t> outputs;
  std::function<int(int)> stack;
  std::function<int(int, int)> copy = [&](int j, int id) -> int {
    const auto& node = single.node(id);
    if (node.leaf) {
      outputs.push_back(node.outputs[0]);
      const int below = stack(j + 1);
      outputs.pop_back();
      return below;
    }
    const int left = copy(j, node.left);
    const int right = copy(j, node.right);
    return tree.add_query(j, node.index, left, right);
  };
  stack = [&](int j) -> int {
    if (j == k) return tree.add_leaf(outputs);
    return copy(j, single.root());
  };
  tree.set_root(stack(0));
  return tree;
}

// ---- Monte Carlo -----------------------------------------------------------

MonteCarloEstimate binomial_estimate(std::uint64_t successes, std::uint64_t samples) {
  MonteCarloEstimate out;
  out.samples = samples;
  out.successes = successes;
  if (samples == 0) return out;
  const double p = static_cast<double>(successes) / static_cast<double>(samples);
  out.estimate = p;
  out.half_width = 1.96 * std::sqrt(p * (1 - p) / static_cast<double>(samples));
  return out;
}

template <class S>
MonteCarloEstimate simulate_tree(const KFoldTree& tree, const BooleanTable& f, const InputDistribution<S>& mu,
                                 int k, std::uint64_t samples, std::uint64_t seed) {
  check_arity(f.arity(), mu.arity());
  tree.validate(k, f.arity(), k, f.codomain());
  std::vector<double> weights;
  for (const S& w : mu.mass()) weights.push_back(to_double(w));
  std::discrete_distribution<std::uint32_t> draw(weights.begin(), weights.end());
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> x(static_cast<std::size_t>(k));
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    for (auto& xi : x) xi = draw(rng);
    const auto& leaf = tree.node(tree.leaf_for(x, f.arity()));
    bool ok = true;
    for (int j = 0; j < k && ok; ++j) ok = leaf.outputs[static_cast<std::size_t>(j)] == f(x[static_cast<std::size_t>(j)]);
    hits += ok;
  }
  return binomial_estimate(hits, samples);
}

#define DPTLAB_INSTANTIATE(S)                                                                                 \
  template class KFoldEngine<S>;                                                                              \
  template struct TraceReport<S>;                                                                             \
  template S kfold_opt<S>(const RelationTable&, const InputDistribution<S>&, int, int, const KFoldMode&, bool); \
  template S kfold_opt<S>(const BooleanTable&, const InputDistribution<S>&, int, int, const KFoldMode&, bool);  \
  template S kfold_opt_search<S>(const SearchSet&, const InputDistribution<S>&, int, int, const MonotoneFamily&, \
                                 bool);                                                                       \
  template S kfold_opt_size<S>(const BooleanTable&, const InputDistribution<S>&, int, std::int64_t,          \
                               const KFoldMode&);                                                             \
  template TraceReport<S> trace_tree<S>(const KFoldTree&, const BooleanTable&, const InputDistribution<S>&, int, \
                                        int);                                                                 \
  template KFoldTree fair_product_tree<S>(const BooleanTable&, const InputDistribution<S>&, int, int);         \
  template MonteCarloEstimate simulate_tree<S>(const KFoldTree&, const BooleanTable&, const InputDistribution<S>&, \
                                               int, std::uint64_t, std::uint64_t);

DPTLAB_INSTANTIATE(Rational)
DPTLAB_INSTANTIATE(double)

#undef DPTLAB_INSTANTIATE

}  // namespace dptlab
