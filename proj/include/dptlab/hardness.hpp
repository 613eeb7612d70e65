#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dptlab/distribution.hpp"
#include "dptlab/numeric.hpp"
#include "dptlab/tables.hpp"
#include "dptlab/tree.hpp"

namespace dptlab {

/// f_T(x) = x_2 if x_1 = 1, else x_2 ⊕ ... ⊕ x_{T+2}; under μ_ε the bits
/// are independent with Pr[x_1 = 1] = 1 - 2ε and the rest uniform.
struct ShaltielInstance {
  int T = 0;
  Rational eps;
  BooleanTable f;
  InputDistribution<Rational> mu;
  std::optional<Rational> optimum;  // opt_success(f, μ, T), when checked
};

/// Throws DomainError if the self-check finds opt_success(f_T, μ_ε, T) ≠ 1 - ε.
/// The check is skipped when T + 2 > `check_limit`.
ShaltielInstance shaltiel_instance(int T, const Rational& eps, int check_limit = 12);

/// The algorithm D on k instances: query x_1, x_2 of every input, then spend
/// T more queries on each of the first s = ⌊αεk⌋ bad inputs (x_1 = 0).
struct ShaltielAlgorithm {
  Rational exact;                    // success probability
  std::int64_t rescues = 0;          // s
  std::int64_t queries_used = 0;     // 2k + sT
  Rational theorem_budget;           // αεTk, which D exceeds by 2k
  std::vector<Rational> solved;      // solved[c] = Pr[exactly c instances right]
  Rational expected_solved;
};
ShaltielAlgorithm shaltiel_alg_success(int T, const Rational& eps, const Rational& alpha, int k);

/// Success of D with `rescues` slots, independent of how s was chosen.
Rational shaltiel_success_with_rescues(const Rational& eps, int k, std::int64_t rescues);
std::vector<Rational> shaltiel_solved_distribution(const Rational& eps, int k, std::int64_t rescues);

/// D written out as an explicit k-fold tree (guessing 0 on unrescued bad
/// inputs). Its size is exponential in k; meant for T ≤ 2, k ≤ 3.
KFoldTree shaltiel_d_tree(int T, int k, std::int64_t rescues);

/// 2^s((1-ε)^k - Pr[|B| < αεk]) with |B| ~ B(k, 2ε) and s = ⌊αεk⌋.
Rational happyeq_lower(const Rational& eps, const Rational& alpha, int k);

// ---- minimax hard distribution --------------------------------------------

enum class YaoFlavor { plain, zerr };

struct YaoOptions {
  int iterations = 1000;
  std::optional<double> step;  // default min(1/2, sqrt(ln 2^n / iterations))
  std::uint64_t seed = 0;
  bool tie_noise = true;
};

struct MinimaxResult {
  std::vector<double> mu_hat;  // the certifying input distribution
  std::string certificate;     // which candidate μ̂ is: average, tail average, best iterate
  Rational upper;              // best response value against μ̂, exact
  Rational lower;              // min_x of the averaged best responses' success, exact
  Rational gap;                // upper - lower
  double average_value = 0;    // mean of the per-iteration best-response values
  double step = 0;
  int iterations = 0;
  double min_iteration_gap = 0;  // smallest BR(μ̂_t) - lower_t over iterations, float64

  double value() const { return to_double(upper); }
};

/// Multiplicative weights over inputs against the exact best response.
/// The game value lies in [lower, upper]; upper is the exact optimum against
/// the best of the averaged, tail-averaged and best single iterate.
MinimaxResult yao_hard_dist(const BooleanTable& f, int T, YaoFlavor flavor, const YaoOptions& options = {});

/// Exact success of a single-instance tree on input x: plain checks the
/// leaf output against f(x), zerr checks that the leaf's subcube is
/// monochromatic.
bool tree_correct(const KFoldTree& tree, const BooleanTable& f, std::uint32_t x, YaoFlavor flavor);

struct AmplificationBudget {
  std::int64_t trials = 0;  // ⌈3/γ²⌉
  Rational factor;          // 4/γ²
};
AmplificationBudget amplification_budget(const Rational& gamma);

}  // namespace dptlab
