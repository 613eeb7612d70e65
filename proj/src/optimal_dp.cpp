#include "dptlab/optimal_dp.hpp"

#include <algorithm>
#include <functional>

#include "dptlab/error.hpp"

namespace dptlab {

void check_budget(int budget) {
  if (budget < 0) throw Error(ErrorKind::BudgetNegative, "budget " + std::to_string(budget) + " < 0");
}

void check_arity(int expected, int actual) {
  if (expected != actual)
    throw Error(ErrorKind::ArityMismatch, "arity " + std::to_string(actual) + " does not match " +
                                              std::to_string(expected));
}

namespace {

int first_free(const PartialAssignment& u) {
  for (int i = 0; i < u.arity(); ++i)
    if (!u.is_fixed(i)) return i;
  return -1;
}

}  // namespace

// ---- InstanceModel ---------------------------------------------------------

template <class S>
InstanceModel<S>::InstanceModel(RelationTable relation, InputDistribution<S> mu)
    : relation_(std::move(relation)), mu_(std::move(mu)) {
  check_arity(relation_.arity(), mu_.arity());
}

template <class S>
InstanceModel<S>::InstanceModel(SearchSet witnesses, InputDistribution<S> mu)
    : search_(true), witnesses_(std::move(witnesses)), mu_(std::move(mu)) {
  check_arity(witnesses_.arity(), mu_.arity());
}

template <class S>
const typename InstanceModel<S>::Cell& InstanceModel<S>::cell(const PartialAssignment& u) {
  if (auto it = cells_.find(u.key()); it != cells_.end()) return it->second;
  Cell c;
  const int i = first_free(u);
  const std::size_t width = search_ ? 0 : static_cast<std::size_t>(codomain());
  if (i < 0) {
    const std::uint32_t x = u.values();
    c.mass = mu_[x];
    c.hit.assign(width, S(0));
    for (std::size_t b = 0; b < width; ++b)
      if (relation_.contains(x, static_cast<int>(b))) c.hit[b] = c.mass;
  } else {
    const Cell zero = cell(u.with(i, 0));
    const Cell& one = cell(u.with(i, 1));
    c.mass = zero.mass + one.mass;
    c.hit.resize(width);
    for (std::size_t b = 0; b < width; ++b) c.hit[b] = zero.hit[b] + one.hit[b];
  }
  return cells_.emplace(u.key(), std::move(c)).first->second;
}

template <class S>
S InstanceModel<S>::stop_value(const PartialAssignment& u) {
  const Cell& c = cell(u);
  if (search_) return witnesses_.solved_by(u) ? c.mass : S(0);
  S best = c.hit[0];
  for (std::size_t b = 1; b < c.hit.size(); ++b)
    if (c.hit[b] > best) best = c.hit[b];
  return best;
}

template <class S>
std::uint32_t InstanceModel<S>::best_output(const PartialAssignment& u) {
  if (search_) return 0;
  const Cell& c = cell(u);
  std::uint32_t best = 0;
  for (std::uint32_t b = 1; b < c.hit.size(); ++b)
    if (c.hit[b] > c.hit[best]) best = b;
  return best;
}

// ---- ValueTable ------------------------------------------------------------

template <class S>
ValueTable<S>::ValueTable(std::shared_ptr<InstanceModel<S>> model)
    : model_(std::move(model)), memo_(static_cast<std::size_t>(kMaxArity) + 1) {}

template <class S>
S ValueTable<S>::value(const PartialAssignment& u, int remaining) {
  check_budget(remaining);
  remaining = std::min(remaining, u.free_count());
  if (remaining == 0) return model_->stop_value(u);
  auto& level = memo_[static_cast<std::size_t>(remaining)];
  if (auto it = level.find(u.key()); it != level.end()) return it->second;
  S best = model_->stop_value(u);
  for (int i = 0; i < u.arity(); ++i) {
    if (u.is_fixed(i)) continue;
    S sum = 0;
    for (int b = 0; b < 2; ++b) {
      const PartialAssignment child = u.with(i, b);
      if (ScalarTraits<S>::is_zero(model_->mass(child))) continue;
      sum += value(child, remaining - 1);
    }
    if (sum > best) best = sum;
  }
  level.emplace(u.key(), best);
  return best;
}

template <class S>
S ValueTable<S>::fortune(const PartialAssignment& u, int remaining) {
  const S m = model_->mass(u);
  if (ScalarTraits<S>::is_zero(m))
    throw Error(ErrorKind::ZeroMassConditioning, "no supported input extends " + u.to_string());
  return value(u, remaining) / m;
}

template <class S>
int ValueTable<S>::best_query(const PartialAssignment& u, int remaining, std::mt19937_64* tie_noise) {
  remaining = std::min(remaining, u.free_count());
  if (remaining <= 0) return -1;
  const S target = value(u, remaining);
  std::vector<int> options;
  if (ScalarTraits<S>::eq(model_->stop_value(u), target)) {
    if (!tie_noise) return -1;
    options.push_back(-1);
  }
  for (int i = 0; i < u.arity(); ++i) {
    if (u.is_fixed(i)) continue;
    S sum = 0;
    for (int b = 0; b < 2; ++b) {
      const PartialAssignment child = u.with(i, b);
      if (ScalarTraits<S>::is_zero(model_->mass(child))) continue;
      sum += value(child, remaining - 1);
    }
    if (ScalarTraits<S>::eq(sum, target)) {
      if (!tie_noise) return i;
      options.push_back(i);
    }
  }
  if (options.empty()) return -1;
  std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
  return options[pick(*tie_noise)];
}

template <class S>
KFoldTree ValueTable<S>::best_tree(int budget, std::mt19937_64* tie_noise) {
  check_budget(budget);
  KFoldTree tree;
  InstanceModel<S>& m = *model_;
  std::function<int(const PartialAssignment&, int)> build = [&](const PartialAssignment& u,
                                                                int remaining) -> int {
    const int i = best_query(u, remaining, tie_noise);
    if (i < 0) {
      std::uint32_t out = m.best_output(u);
      if (tie_noise && !m.is_search()) {
        std::vector<std::uint32_t> tied;
        for (std::uint32_t b = 0; b < static_cast<std::uint32_t>(m.codomain()); ++b)
          if (ScalarTraits<S>::eq(m.hit(u, b), m.hit(u, out))) tied.push_back(b);
        std::uniform_int_distribution<std::size_t> pick(0, tied.size() - 1);
        out = tied[pick(*tie_noise)];
      }
      return tree.add_leaf({out});
    }
    const int left = build(u.with(i, 0), remaining - 1);
    const int right = build(u.with(i, 1), remaining - 1);
    return tree.add_query(0, i, left, right);
  };
  tree.set_root(build(PartialAssignment(m.arity()), budget));
  return tree;
}

template <class S>
std::size_t ValueTable<S>::memo_size() const {
  std::size_t total = 0;
  for (const auto& level : memo_) total += level.size();
  return total;
}

// ---- SizeTable -------------------------------------------------------------

template <class S>
SizeTable<S>::SizeTable(std::shared_ptr<InstanceModel<S>> model) : model_(std::move(model)) {}

template <class S>
S SizeTable<S>::value(const PartialAssignment& u, std::int64_t leaves) {
  if (leaves < 1) throw Error(ErrorKind::SizeBudgetTooSmall, "size budget must be at least 1");
  // A complete tree below u has 2^free leaves; more never helps.
  const int free = u.free_count();
  if (free < 62) leaves = std::min<std::int64_t>(leaves, std::int64_t{1} << free);
  if (leaves == 1) return model_->stop_value(u);
  auto& row = memo_[u.key()];
  if (auto it = row.find(leaves); it != row.end()) return it->second;
  S best = model_->stop_value(u);
  for (int i = 0; i < u.arity(); ++i) {
    if (u.is_fixed(i)) continue;
    const PartialAssignment zero = u.with(i, 0);
    const PartialAssignment one = u.with(i, 1);
    const bool zero_live = !ScalarTraits<S>::is_zero(model_->mass(zero));
    const bool one_live = !ScalarTraits<S>::is_zero(model_->mass(one));
    for (std::int64_t z0 = 1; z0 < leaves; ++z0) {
      S sum = 0;
      if (zero_live) sum += value(zero, z0);
      if (one_live) sum += value(one, leaves - z0);
      if (sum > best) best = sum;
    }
  }
  memo_[u.key()].emplace(leaves, best);
  return best;
}

// ---- checks and entry points ----------------------------------------------

template <class S>
SupermartingaleCheck check_supermartingale(ValueTable<S>& table, int budget) {
  check_budget(budget);
  SupermartingaleCheck report;
  const int n = table.model().arity();
  const std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  for (std::uint32_t mask = 0; mask <= full; ++mask) {
    const int fixed = std::popcount(mask);
    if (fixed >= budget) continue;
    // Enumerate the value patterns on `mask` as subsets of it.
    std::uint32_t values = 0;
    while (true) {
      const PartialAssignment u(n, mask, values);
      if (!ScalarTraits<S>::is_zero(table.model().mass(u))) {
        const S here = table.value(u, budget - fixed);
        for (int i = 0; i < n; ++i) {
          if (u.is_fixed(i)) continue;
          S sum = 0;
          for (int b = 0; b < 2; ++b) {
            const PartialAssignment child = u.with(i, b);
            if (ScalarTraits<S>::is_zero(table.model().mass(child))) continue;
            sum += table.value(child, budget - fixed - 1);
          }
          ++report.checked;
          if (!ScalarTraits<S>::le(sum, here)) ++report.violations;
        }
      }
      if (values == mask) break;
      values = (values - mask) & mask;
    }
    if (mask == full) break;
  }
  return report;
}

template <class S>
S opt_success_rel(const RelationTable& p, const InputDistribution<S>& mu, int budget) {
  check_budget(budget);
  ValueTable<S> table(std::make_shared<InstanceModel<S>>(p, mu));
  return table.value(PartialAssignment(mu.arity()), budget);
}

template <class S>
S opt_success(const BooleanTable& f, const InputDistribution<S>& mu, int budget) {
  return opt_success_rel<S>(RelationTable(f), mu, budget);
}

template <class S>
S opt_bias_xor(const BooleanTable& f, const InputDistribution<S>& mu, int budget) {
  if (!f.is_boolean()) throw Error(ErrorKind::NonBooleanCodomain, "XOR bias needs |B| = 2");
  return S(2) * opt_success<S>(f, mu, budget) - S(1);
}

template <class S>
S opt_success_search(const SearchSet& v, const InputDistribution<S>& mu, int budget) {
  check_budget(budget);
  ValueTable<S> table(std::make_shared<InstanceModel<S>>(v, mu));
  return table.value(PartialAssignment(mu.arity()), budget);
}

template <class S>
S opt_success_zerr(const BooleanTable& f, const InputDistribution<S>& mu, int budget) {
  check_arity(f.arity(), mu.arity());
  return opt_success_search<S>(forcing_set(f), mu, budget);
}

template <class S>
S opt_success_size(const BooleanTable& f, const InputDistribution<S>& mu, std::int64_t leaves) {
  if (leaves < 1) throw Error(ErrorKind::SizeBudgetTooSmall, "size budget must be at least 1");
  SizeTable<S> table(std::make_shared<InstanceModel<S>>(RelationTable(f), mu));
  return table.value(PartialAssignment(mu.arity()), leaves);
}

SearchSet forcing_set(const BooleanTable& f) {
  const int n = f.arity();
  // forced[u] = f's constant value on the subcube of u, or -1.
  std::unordered_map<std::uint64_t, long> forced;
  std::function<long(const PartialAssignment&)> value_on = [&](const PartialAssignment& u) -> long {
    if (auto it = forced.find(u.key()); it != forced.end()) return it->second;
    const int i = first_free(u);
    long out = 0;
    if (i < 0) {
      out = f(u.values());
    } else {
      const long a = value_on(u.with(i, 0));
      const long b = value_on(u.with(i, 1));
      out = (a >= 0 && a == b) ? a : -1;
    }
    forced.emplace(u.key(), out);
    return out;
  };
  std::vector<PartialAssignment> witnesses;
  const std::uint32_t full = (1u << n) - 1;
  for (std::uint32_t mask = 0;; ++mask) {
    std::uint32_t values = 0;
    while (true) {
      const PartialAssignment u(n, mask, values);
      if (value_on(u) >= 0) {
        bool minimal = true;
        for (int i = 0; i < n && minimal; ++i) {
          if (!u.is_fixed(i)) continue;
          const std::uint32_t bit = variable_bit(n, i);
          if (value_on(PartialAssignment(n, mask & ~bit, values & ~bit)) >= 0) minimal = false;
        }
        if (minimal) witnesses.push_back(u);
      }
      if (values == mask) break;
      values = (values - mask) & mask;
    }
    if (mask == full) break;
  }
  std::sort(witnesses.begin(), witnesses.end(), [](const PartialAssignment& a, const PartialAssignment& b) {
    return a.to_string() < b.to_string();
  });
  return SearchSet(n, std::move(witnesses));
}

#define DPTLAB_INSTANTIATE(S)                                                              \
  template class InstanceModel<S>;                                                         \
  template class ValueTable<S>;                                                            \
  template class SizeTable<S>;                                                             \
  template SupermartingaleCheck check_supermartingale<S>(ValueTable<S>&, int);             \
  template S opt_success<S>(const BooleanTable&, const InputDistribution<S>&, int);        \
  template S opt_success_rel<S>(const RelationTable&, const InputDistribution<S>&, int);   \
  template S opt_bias_xor<S>(const BooleanTable&, const InputDistribution<S>&, int);       \
  template S opt_success_search<S>(const SearchSet&, const InputDistribution<S>&, int);    \
  template S opt_success_zerr<S>(const BooleanTable&, const InputDistribution<S>&, int);   \
  template S opt_success_size<S>(const BooleanTable&, const InputDistribution<S>&, std::int64_t);

DPTLAB_INSTANTIATE(Rational)
DPTLAB_INSTANTIATE(double)

#undef DPTLAB_INSTANTIATE

}  // namespace dptlab
