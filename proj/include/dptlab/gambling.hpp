#pragma once

#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "dptlab/monotone_family.hpp"
#include "dptlab/numeric.hpp"

namespace dptlab {

/// A finite gambling process at k tables. Each round names one table and a
/// finite distribution over that table's next fortune in [0,1]; the
/// conditional mean may not exceed the current fortune.
class BettingProcess {
 public:
  struct Outcome {
    Rational probability;
    Rational value;
    int child = -1;
  };
  struct Node {
    bool stop = true;
    int table = 0;  // 0-based
    std::vector<Outcome> outcomes;
  };

  BettingProcess() = default;
  BettingProcess(std::vector<Rational> endowments, std::optional<int> horizon = std::nullopt);

  int add_stop();
  int add_bet(int table, std::vector<Outcome> outcomes);
  void set_root(int id) { root_ = id; }

  int k() const noexcept { return static_cast<int>(endowments_.size()); }
  const std::vector<Rational>& endowments() const noexcept { return endowments_; }
  std::optional<int> horizon() const noexcept { return horizon_; }
  int root() const noexcept { return root_; }
  const Node& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  int depth() const;

  /// Throws InvalidProcess naming the violated constraint.
  void validate() const;

  /// Header lines `k <k>`, `p <p_1> ... <p_k>`, optional `N <horizon>`,
  /// then the tree: `(stop)` or `(bet <j> (<prob> <value> <subtree>) ...)`.
  static BettingProcess parse(std::string_view text);
  std::string to_string() const;

  /// Independent all-or-nothing bets at each table in turn.
  static BettingProcess all_or_nothing(const std::vector<Rational>& endowments);

 private:
  std::vector<Rational> endowments_;
  std::optional<int> horizon_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

struct GamblingReport {
  Rational lhs;  // Pr[{j : X_{j,N} = 1} ∈ A]
  Rational rhs;  // Pr[D ∈ A]
  bool holds = false;
  bool equality = false;
};

GamblingReport gambling_check(const BettingProcess& process, const MonotoneFamily& family);

/// Random valid process with k tables and horizon N built from two-point
/// moves that either preserve or lower the mean.
BettingProcess random_process(int k, int horizon, std::mt19937_64& rng);

/// A random monotone family on [k] (upward closure of random generators).
MonotoneFamily random_family(int k, std::mt19937_64& rng);

struct FuzzSummary {
  int processes = 0;
  int holds = 0;
  int violations = 0;
  Rational worst_margin;  // min over runs of rhs - lhs
};

FuzzSummary gambling_fuzz(int count, std::uint64_t seed, int max_k = 4, int max_horizon = 6);

}  // namespace dptlab
