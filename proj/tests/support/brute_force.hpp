#pragma once

// Independent oracles for the tests: explicit enumeration of deterministic
// trees as input -> (output, transcript) behaviours, with no memoization and
// no shared code with the DP engines.

#include <cstdint>
#include <functional>
#include <vector>

#include "dptlab/distribution.hpp"
#include "dptlab/monotone_family.hpp"
#include "dptlab/partial_assignment.hpp"
#include "dptlab/tables.hpp"

namespace brute {

using dptlab::PartialAssignment;
using dptlab::Rational;

struct Behaviour {
  std::vector<std::uint32_t> output;          // per input
  std::vector<PartialAssignment> transcript;  // per input
  int leaves = 1;
};

/// Every deterministic tree over n bits with depth <= depth and at most
/// max_leaves leaves, codomain `codomain`.
inline std::vector<Behaviour> all_trees(int n, int codomain, int depth, int max_leaves = 1 << 20) {
  const std::uint32_t points = 1u << n;
  std::vector<Behaviour> out;
  for (int b = 0; b < codomain; ++b) {
    Behaviour leaf;
    leaf.output.assign(points, static_cast<std::uint32_t>(b));
    leaf.transcript.assign(points, PartialAssignment(n));
    out.push_back(leaf);
  }
  if (depth == 0 || max_leaves < 2) return out;
  const std::vector<Behaviour> sub = all_trees(n, codomain, depth - 1, max_leaves - 1);
  for (int i = 0; i < n; ++i)
    for (const Behaviour& l : sub)
      for (const Behaviour& r : sub) {
        if (l.leaves + r.leaves > max_leaves) continue;
        Behaviour t;
        t.leaves = l.leaves + r.leaves;
        t.output.resize(points);
        t.transcript.resize(points);
        for (std::uint32_t x = 0; x < points; ++x) {
          const int bit = (x >> (n - 1 - i)) & 1u;
          const Behaviour& side = bit ? r : l;
          t.output[x] = side.output[x];
          PartialAssignment u = side.transcript[x];
          if (!u.is_fixed(i)) u = u.with(i, bit);
          t.transcript[x] = u;
        }
        out.push_back(std::move(t));
      }
  return out;
}

template <class Score>
Rational best_over(const std::vector<Behaviour>& trees, Score score) {
  Rational best = -1;
  for (const Behaviour& t : trees) {
    const Rational s = score(t);
    if (s > best) best = s;
  }
  return best;
}

inline Rational plain_success(const dptlab::BooleanTable& f, const dptlab::InputDistribution<Rational>& mu,
                              int depth) {
  return best_over(all_trees(f.arity(), f.codomain(), depth), [&](const Behaviour& t) {
    Rational s = 0;
    for (std::uint32_t x = 0; x < f.size(); ++x)
      if (t.output[x] == f(x)) s += mu[x];
    return s;
  });
}

inline Rational size_success(const dptlab::BooleanTable& f, const dptlab::InputDistribution<Rational>& mu,
                             int leaves) {
  return best_over(all_trees(f.arity(), f.codomain(), f.arity(), leaves), [&](const Behaviour& t) {
    Rational s = 0;
    for (std::uint32_t x = 0; x < f.size(); ++x)
      if (t.output[x] == f(x)) s += mu[x];
    return s;
  });
}

inline Rational search_success(const dptlab::SearchSet& v, const dptlab::InputDistribution<Rational>& mu,
                               int depth) {
  return best_over(all_trees(v.arity(), 1, depth), [&](const Behaviour& t) {
    Rational s = 0;
    for (std::uint32_t x = 0; x < mu.size(); ++x) {
      bool ok = false;
      for (const PartialAssignment& w : v.witnesses()) ok = ok || t.transcript[x].extends(w);
      if (ok) s += mu[x];
    }
    return s;
  });
}

/// u forces f when every extension agrees; brute force over all 3^n strings.
inline std::vector<PartialAssignment> minimal_forcing(const dptlab::BooleanTable& f) {
  const int n = f.arity();
  std::vector<PartialAssignment> forcing;
  std::uint32_t total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  for (std::uint32_t code = 0; code < total; ++code) {
    std::uint32_t c = code, mask = 0, values = 0;
    for (int i = 0; i < n; ++i, c /= 3) {
      const std::uint32_t bit = 1u << (n - 1 - i);
      if (c % 3 != 2) {
        mask |= bit;
        if (c % 3 == 1) values |= bit;
      }
    }
    const PartialAssignment u(n, mask, values);
    std::vector<std::uint32_t> seen;
    for (std::uint32_t x = 0; x < f.size(); ++x)
      if (u.extended_by(x)) seen.push_back(f(x));
    bool constant = true;
    for (std::uint32_t s : seen) constant = constant && s == seen.front();
    if (constant) forcing.push_back(u);
  }
  std::vector<PartialAssignment> minimal;
  for (const PartialAssignment& u : forcing) {
    bool is_min = true;
    for (const PartialAssignment& v : forcing)
      if (!(v == u) && u.extends(v)) is_min = false;
    if (is_min) minimal.push_back(u);
  }
  return minimal;
}

}  // namespace brute

namespace brute {

/// Joint input index: instance 1 occupies the most significant n bits.
inline std::uint32_t part(std::uint32_t joint, int j, int k, int n) {
  return (joint >> (n * (k - 1 - j))) & ((1u << n) - 1);
}

inline std::vector<Rational> joint_mass(const dptlab::InputDistribution<Rational>& mu, int k) {
  const int n = mu.arity();
  std::vector<Rational> out(std::size_t{1} << (k * n));
  for (std::uint32_t x = 0; x < out.size(); ++x) {
    Rational w = 1;
    for (int j = 0; j < k; ++j) w *= mu[part(x, j, k, n)];
    out[x] = w;
  }
  return out;
}

/// Which instances a joint output (base-|B| digits, instance 1 most
/// significant) gets right on joint input x.
inline dptlab::Subset correct_set(const dptlab::BooleanTable& f, std::uint32_t x, std::uint32_t out, int k) {
  const int n = f.arity();
  dptlab::Subset s = 0;
  std::uint32_t rest = out;
  for (int j = k - 1; j >= 0; --j) {
    const std::uint32_t b = rest % static_cast<std::uint32_t>(f.codomain());
    rest /= static_cast<std::uint32_t>(f.codomain());
    if (f(part(x, j, k, n)) == b) s |= dptlab::Subset{1} << j;
  }
  return s;
}

/// Per-instance query counts along the path a joint input takes.
inline bool fair_transcript(const PartialAssignment& u, int k, int n, int per_instance) {
  for (int j = 0; j < k; ++j) {
    int count = 0;
    for (int i = 0; i < n; ++i) count += u.is_fixed(j * n + i);
    if (count > per_instance) return false;
  }
  return true;
}

inline int ipow(int b, int e) {
  int r = 1;
  while (e-- > 0) r *= b;
  return r;
}

/// Best Pr[{j correct} ∈ A] over all trees on the joint input.
inline Rational kfold_family(const dptlab::BooleanTable& f, const dptlab::InputDistribution<Rational>& mu, int k,
                             int depth, const dptlab::MonotoneFamily& a, int fair_budget = -1,
                             int max_leaves = 1 << 20) {
  const int n = f.arity();
  const auto mass = joint_mass(mu, k);
  const auto trees = all_trees(k * n, ipow(f.codomain(), k), depth, max_leaves);
  return best_over(trees, [&](const Behaviour& t) {
    Rational s = 0;
    for (std::uint32_t x = 0; x < mass.size(); ++x) {
      if (fair_budget >= 0 && !fair_transcript(t.transcript[x], k, n, fair_budget)) return Rational(-1);
      if (a.contains(correct_set(f, x, t.output[x], k))) s += mass[x];
    }
    return s;
  });
}

inline Rational kfold_xor(const dptlab::BooleanTable& f, const dptlab::InputDistribution<Rational>& mu, int k,
                          int depth) {
  const int n = f.arity();
  const auto mass = joint_mass(mu, k);
  return best_over(all_trees(k * n, 2, depth), [&](const Behaviour& t) {
    Rational s = 0;
    for (std::uint32_t x = 0; x < mass.size(); ++x) {
      std::uint32_t parity = 0;
      for (int j = 0; j < k; ++j) parity ^= f(part(x, j, k, n));
      if (t.output[x] == parity) s += mass[x];
    }
    return s;
  });
}

inline Rational kfold_search(const dptlab::SearchSet& v, const dptlab::InputDistribution<Rational>& mu, int k,
                             int depth, const dptlab::MonotoneFamily& a) {
  const int n = v.arity();
  const auto mass = joint_mass(mu, k);
  return best_over(all_trees(k * n, 1, depth), [&](const Behaviour& t) {
    Rational s = 0;
    for (std::uint32_t x = 0; x < mass.size(); ++x) {
      dptlab::Subset solved = 0;
      for (int j = 0; j < k; ++j) {
        std::uint32_t mask = 0, values = 0;
        for (int i = 0; i < n; ++i)
          if (t.transcript[x].is_fixed(j * n + i)) {
            mask |= 1u << (n - 1 - i);
            if (t.transcript[x].bit(j * n + i)) values |= 1u << (n - 1 - i);
          }
        if (v.solved_by(PartialAssignment(n, mask, values))) solved |= dptlab::Subset{1} << j;
      }
      if (a.contains(solved)) s += mass[x];
    }
    return s;
  });
}

}  // namespace brute
