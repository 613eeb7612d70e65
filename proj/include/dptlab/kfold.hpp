#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <unordered_map>
#include <vector>

#include "dptlab/distribution.hpp"
#include "dptlab/monotone_family.hpp"
#include "dptlab/optimal_dp.hpp"
#include "dptlab/tables.hpp"
#include "dptlab/tree.hpp"

namespace dptlab {

/// How a k-fold run is scored at a leaf.
struct KFoldMode {
  enum class Kind { product, threshold, xor_parity };
  Kind kind = Kind::product;
  MonotoneFamily family;  // threshold only

  static KFoldMode product() { return {}; }
  static KFoldMode threshold(MonotoneFamily a) { return {Kind::threshold, std::move(a)}; }
  static KFoldMode xor_parity() { return {Kind::xor_parity, {}}; }
};

/// Largest k·n handled exactly. Defaults: 9 for rationals, 12 for float64;
/// DPTLAB_MAX_STATE_BITS overrides both (hard ceiling 32).
int max_state_bits(bool exact);
void check_state_space(int k, int arity, bool exact);

/// Exact optimum over deterministic k-fold algorithms. The joint state is
/// (u^1, ..., u^k); under μ^⊗k the posterior at a state is the product of
/// the conditioned marginals, so leaves are scored per instance.
template <class S>
class KFoldEngine {
 public:
  KFoldEngine(std::shared_ptr<InstanceModel<S>> model, int k, KFoldMode mode);

  /// Global budget M (queries in total), or per-instance budget when fair.
  S optimum(int budget, bool fair);
  /// At most `leaves` leaves in total.
  S optimum_size(std::int64_t leaves);

  std::size_t states() const noexcept { return memo_.size() + size_memo_.size(); }

 private:
  using State = std::vector<PartialAssignment>;

  S leaf_value(const State& s);
  S depth_value(State& s);
  S size_value(State& s, std::int64_t leaves);
  std::uint64_t key(const State& s) const;

  std::shared_ptr<InstanceModel<S>> model_;
  int k_;
  KFoldMode mode_;
  bool exchangeable_;
  int budget_ = 0;
  bool fair_ = false;
  std::unordered_map<std::uint64_t, S> memo_;
  std::unordered_map<std::uint64_t, std::unordered_map<std::int64_t, S>> size_memo_;
};

template <class S>
S kfold_opt(const RelationTable& p, const InputDistribution<S>& mu, int k, int budget, const KFoldMode& mode,
            bool fair = false);
template <class S>
S kfold_opt(const BooleanTable& f, const InputDistribution<S>& mu, int k, int budget, const KFoldMode& mode,
            bool fair = false);
template <class S>
S kfold_opt_search(const SearchSet& v, const InputDistribution<S>& mu, int k, int budget,
                   const MonotoneFamily& family, bool fair = false);
template <class S>
S kfold_opt_size(const BooleanTable& f, const InputDistribution<S>& mu, int k, std::int64_t leaves,
                 const KFoldMode& mode = KFoldMode::product());

// ---- martingale tracer -----------------------------------------------------

template <class S>
struct TracePath {
  S probability;                       // Pr[reach leaf]
  std::vector<std::vector<S>> fortunes;  // fortunes[t][j] = X_{j,t}, t = 0..length
  std::vector<std::uint32_t> outputs;
  std::vector<int> queries;            // |u^j| at the leaf
  int over_budget = 0;                 // #{j : |u^j| > T}
  S success;                           // Pr[reach leaf and every output correct]
};

template <class S>
struct TraceReport {
  int k = 0;
  int steps = 0;                 // tree depth M
  int hardness_budget = 0;       // T
  std::vector<S> expected_product;  // E[P_t], t = 0..M
  std::vector<TracePath<S>> paths;
  S success_paths;               // Σ over leaves of exact per-leaf success
  S success_direct;              // brute force over all joint inputs
  bool direct_checked = false;
  int max_over_budget = 0;
  S weighted_bound;              // E[|B|^{over} · P_M]
  S global_bound;                // |B|^{max over} · E[P_M]
  std::size_t chain_violations = 0;
  std::size_t node_checks = 0;
  std::size_t node_violations = 0;
  std::size_t leaf_violations = 0;
  std::size_t factorization_checks = 0;
  std::size_t factorization_violations = 0;

  bool success_agrees() const;
  bool bound_holds() const;
  bool ok() const;
};

/// Traces the fortunes X_{j,t} = W⋆(u^j_t) (1/|B| once |u^j_t| > T) along
/// every root-to-leaf path of `tree` under μ^⊗k.
template <class S>
TraceReport<S> trace_tree(const KFoldTree& tree, const BooleanTable& f, const InputDistribution<S>& mu, int T,
                          int k);

/// A random well-formed tree: each node stops with probability `stop`,
/// queries are mostly on unfixed bits, leaves carry random outputs.
KFoldTree random_kfold_tree(int k, int arity, int codomain, int max_depth, std::mt19937_64& rng,
                            double stop = 0.25);

/// The tree that solves each instance with its own optimal depth-T tree,
/// instance by instance (a fair algorithm using T queries per instance).
template <class S>
KFoldTree fair_product_tree(const BooleanTable& f, const InputDistribution<S>& mu, int T, int k);

// ---- Monte Carlo fallback --------------------------------------------------

struct MonteCarloEstimate {
  double estimate = 0;
  double half_width = 0;  // 95% normal-approximation binomial interval
  std::uint64_t samples = 0;
  std::uint64_t successes = 0;
};

/// Success of a k-fold tree estimated by sampling μ^⊗k (used when k·n is
/// over the exact cap). Deterministic for a given seed.
template <class S>
MonteCarloEstimate simulate_tree(const KFoldTree& tree, const BooleanTable& f, const InputDistribution<S>& mu,
                                 int k, std::uint64_t samples, std::uint64_t seed);

MonteCarloEstimate binomial_estimate(std::uint64_t successes, std::uint64_t samples);

}  // namespace dptlab
