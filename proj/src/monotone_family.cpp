#include "dptlab/monotone_family.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <limits>

#include "dptlab/error.hpp"

namespace dptlab {

namespace {

void check_k(int k) {
  if (k < 0 || k > kMaxFamilyK)
    throw Error(ErrorKind::DomainError, "family size k=" + std::to_string(k) + " outside [0, " +
                                            std::to_string(kMaxFamilyK) + "]");
}

}  // namespace

bool is_monotone(int k, std::span<const char> members) {
  const Subset all = (Subset{1} << k) - 1;
  for (Subset s = 0; s <= all; ++s) {
    if (!members[s]) continue;
    for (int j = 0; j < k; ++j)
      if (!members[s | (Subset{1} << j)]) return false;
  }
  return true;
}

MonotoneFamily::MonotoneFamily(int k, std::vector<char> members) : k_(k), members_(std::move(members)) {
  check_k(k);
  if (members_.size() != (std::size_t{1} << k))
    throw Error(ErrorKind::ArityMismatch, "family table must have 2^k entries");
  for (char& c : members_) c = c ? 1 : 0;
  if (!is_monotone(k, members_)) throw Error(ErrorKind::NotMonotone, "family is not upward closed");
}

MonotoneFamily MonotoneFamily::empty(int k) {
  check_k(k);
  return MonotoneFamily(k, std::vector<char>(std::size_t{1} << k, 0));
}

MonotoneFamily MonotoneFamily::all_subsets(int k) {
  check_k(k);
  return MonotoneFamily(k, std::vector<char>(std::size_t{1} << k, 1));
}

MonotoneFamily MonotoneFamily::full_set(int k) {
  const Subset all = (Subset{1} << k) - 1;
  return upward_closure(k, std::span<const Subset>(&all, 1));
}

MonotoneFamily MonotoneFamily::upward_closure(int k, std::span<const Subset> generators) {
  check_k(k);
  std::vector<char> members(std::size_t{1} << k, 0);
  for (Subset s = 0; s < members.size(); ++s)
    for (Subset g : generators)
      if ((s & g) == g) {
        members[s] = 1;
        break;
      }
  return MonotoneFamily(k, std::move(members));
}

MonotoneFamily MonotoneFamily::at_least(int k, const Rational& threshold) {
  check_k(k);
  std::vector<char> members(std::size_t{1} << k, 0);
  for (Subset s = 0; s < members.size(); ++s) members[s] = Rational(std::popcount(s)) >= threshold;
  return MonotoneFamily(k, std::move(members));
}

std::vector<MonotoneFamily> MonotoneFamily::enumerate_all(int k) {
  if (k < 0 || k > 4) throw Error(ErrorKind::DomainError, "enumerate_all supports k <= 4");
  const std::size_t subsets = std::size_t{1} << k;
  std::vector<MonotoneFamily> out;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << subsets); ++code) {
    std::vector<char> members(subsets);
    for (std::size_t s = 0; s < subsets; ++s) members[s] = (code >> s) & 1u;
    if (is_monotone(k, members)) out.emplace_back(k, std::move(members));
  }
  return out;
}

std::size_t MonotoneFamily::count() const {
  return static_cast<std::size_t>(std::count(members_.begin(), members_.end(), 1));
}

bool MonotoneFamily::is_symmetric() const {
  std::vector<int> by_size(static_cast<std::size_t>(k_) + 1, -1);
  for (Subset s = 0; s < members_.size(); ++s) {
    int& seen = by_size[static_cast<std::size_t>(std::popcount(s))];
    if (seen == -1) {
      seen = members_[s];
    } else if (seen != members_[s]) {
      return false;
    }
  }
  return true;
}

MonotoneFamily neighborhood(const MonotoneFamily& family, const Rational& radius) {
  if (sgn(radius) <= 0) throw Error(ErrorKind::DomainError, "neighborhood radius must be positive");
  const int k = family.k();
  const std::size_t subsets = std::size_t{1} << k;
  // Multi-source BFS on the hypercube gives min_{A∈A} |A △ B| for every B.
  constexpr int unreached = std::numeric_limits<int>::max();
  std::vector<int> distance(subsets, unreached);
  std::deque<Subset> frontier;
  for (Subset s = 0; s < subsets; ++s)
    if (family.contains(s)) {
      distance[s] = 0;
      frontier.push_back(s);
    }
  while (!frontier.empty()) {
    const Subset s = frontier.front();
    frontier.pop_front();
    for (int j = 0; j < k; ++j) {
      const Subset t = s ^ (Subset{1} << j);
      if (distance[t] == unreached) {
        distance[t] = distance[s] + 1;
        frontier.push_back(t);
      }
    }
  }
  std::vector<char> members(subsets, 0);
  for (Subset s = 0; s < subsets; ++s)
    members[s] = distance[s] != unreached && Rational(distance[s]) < radius;
  return MonotoneFamily(k, std::move(members));
}

template <class S>
S family_weight(const MonotoneFamily& family, std::span<const S> hit, std::span<const S> total) {
  const int k = family.k();
  if (static_cast<int>(hit.size()) != k || static_cast<int>(total.size()) != k)
    throw Error(ErrorKind::ArityMismatch, "family_prob needs exactly k probabilities");
  // weight[s] for s ⊆ {1..j} built one coordinate at a time.
  std::vector<S> weight(std::size_t{1} << k);
  weight[0] = 1;
  for (int j = 0; j < k; ++j) {
    const std::size_t half = std::size_t{1} << j;
    const S miss = total[static_cast<std::size_t>(j)] - hit[static_cast<std::size_t>(j)];
    for (std::size_t s = 0; s < half; ++s) {
      weight[s | half] = weight[s] * hit[static_cast<std::size_t>(j)];
      weight[s] *= miss;
    }
  }
  S sum = 0;
  for (Subset s = 0; s < weight.size(); ++s)
    if (family.contains(s)) sum += weight[s];
  return sum;
}

template <class S>
S family_prob(const MonotoneFamily& family, std::span<const S> p) {
  for (const S& pj : p)
    if (pj < 0 || pj > 1) throw Error(ErrorKind::DomainError, "probability outside [0,1]");
  std::vector<S> ones(p.size(), S(1));
  return family_weight<S>(family, p, ones);
}

template Rational family_weight<Rational>(const MonotoneFamily&, std::span<const Rational>,
                                          std::span<const Rational>);
template double family_weight<double>(const MonotoneFamily&, std::span<const double>,
                                      std::span<const double>);
template Rational family_prob<Rational>(const MonotoneFamily&, std::span<const Rational>);
template double family_prob<double>(const MonotoneFamily&, std::span<const double>);

}  // namespace dptlab
