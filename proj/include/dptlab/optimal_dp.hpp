#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <unordered_map>
#include <vector>

#include "dptlab/distribution.hpp"
#include "dptlab/partial_assignment.hpp"
#include "dptlab/tables.hpp"
#include "dptlab/tree.hpp"

namespace dptlab {

/// One instance of a problem (a relation or a search set) under a fixed
/// input distribution, with memoized subcube masses. All quantities are
/// unnormalized: they carry the factor Pr[x extends u], so the recurrences
/// never divide and zero-mass subcubes simply contribute 0.
template <class S>
class InstanceModel {
 public:
  InstanceModel(RelationTable relation, InputDistribution<S> mu);
  InstanceModel(SearchSet witnesses, InputDistribution<S> mu);

  bool is_search() const noexcept { return search_; }
  int arity() const noexcept { return mu_.arity(); }
  int codomain() const noexcept { return relation_.codomain(); }
  const InputDistribution<S>& distribution() const noexcept { return mu_; }
  const RelationTable& relation() const noexcept { return relation_; }
  const SearchSet& witnesses() const noexcept { return witnesses_; }

  /// Pr[x extends u].
  const S& mass(const PartialAssignment& u) { return cell(u).mass; }
  /// Pr[x extends u and (x, b) ∈ P].
  const S& hit(const PartialAssignment& u, std::uint32_t b) { return cell(u).hit[b]; }
  /// Best stopping value: max_b hit(u, b), or mass(u)·[u solves V].
  S stop_value(const PartialAssignment& u);
  /// The smallest b attaining max_b hit(u, b) (0 for search problems).
  std::uint32_t best_output(const PartialAssignment& u);
  bool solved(const PartialAssignment& u) const { return witnesses_.solved_by(u); }

 private:
  struct Cell {
    S mass;
    std::vector<S> hit;
  };
  const Cell& cell(const PartialAssignment& u);

  bool search_ = false;
  RelationTable relation_;
  SearchSet witnesses_;
  InputDistribution<S> mu_;
  std::unordered_map<std::uint64_t, Cell> cells_;
};

/// W⋆ for depth budgets: value(u, r) is the best unnormalized success from
/// state u with r more queries. Not thread safe; use one table per thread.
template <class S>
class ValueTable {
 public:
  explicit ValueTable(std::shared_ptr<InstanceModel<S>> model);

  InstanceModel<S>& model() { return *model_; }

  S value(const PartialAssignment& u, int remaining);
  /// W⋆(u) = value / Pr[x extends u]; throws ZeroMassConditioning.
  S fortune(const PartialAssignment& u, int remaining);
  /// Index to query next, or -1 to stop. With `tie_noise`, ties are broken
  /// uniformly at random instead of toward stopping / the smaller index.
  int best_query(const PartialAssignment& u, int remaining, std::mt19937_64* tie_noise = nullptr);
  /// An optimal deterministic tree for budget T (k = 1 inputs).
  KFoldTree best_tree(int budget, std::mt19937_64* tie_noise = nullptr);

  std::size_t memo_size() const;

 private:
  std::shared_ptr<InstanceModel<S>> model_;
  std::vector<std::unordered_map<std::uint64_t, S>> memo_;
};

/// W⋆_size(u, Z): best unnormalized success with at most Z leaves.
template <class S>
class SizeTable {
 public:
  explicit SizeTable(std::shared_ptr<InstanceModel<S>> model);
  S value(const PartialAssignment& u, std::int64_t leaves);

 private:
  std::shared_ptr<InstanceModel<S>> model_;
  std::unordered_map<std::uint64_t, std::unordered_map<std::int64_t, S>> memo_;
};

struct SupermartingaleCheck {
  std::size_t checked = 0;
  std::size_t violations = 0;
};

/// For every u with |u| < T and Pr[u] > 0 and every free i, checks
/// E[W⋆(u[x_i <- y_i])] <= W⋆(u) on the stored values.
template <class S>
SupermartingaleCheck check_supermartingale(ValueTable<S>& table, int budget);

template <class S>
S opt_success(const BooleanTable& f, const InputDistribution<S>& mu, int budget);
template <class S>
S opt_success_rel(const RelationTable& p, const InputDistribution<S>& mu, int budget);
template <class S>
S opt_bias_xor(const BooleanTable& f, const InputDistribution<S>& mu, int budget);
template <class S>
S opt_success_search(const SearchSet& v, const InputDistribution<S>& mu, int budget);
template <class S>
S opt_success_zerr(const BooleanTable& f, const InputDistribution<S>& mu, int budget);
template <class S>
S opt_success_size(const BooleanTable& f, const InputDistribution<S>& mu, std::int64_t leaves);

/// All minimal u such that f is constant on the extensions of u.
SearchSet forcing_set(const BooleanTable& f);

/// Validation shared by every engine entry point.
void check_budget(int budget);
void check_arity(int expected, int actual);

}  // namespace dptlab
