#include "dptlab/gambling.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

#include "dptlab/error.hpp"

namespace dptlab {

BettingProcess::BettingProcess(std::vector<Rational> endowments, std::optional<int> horizon)
    : endowments_(std::move(endowments)), horizon_(horizon) {}

int BettingProcess::add_stop() {
  nodes_.push_back(Node{});
  root_ = static_cast<int>(nodes_.size()) - 1;
  return root_;
}

int BettingProcess::add_bet(int table, std::vector<Outcome> outcomes) {
  Node n;
  n.stop = false;
  n.table = table;
  n.outcomes = std::move(outcomes);
  nodes_.push_back(std::move(n));
  root_ = static_cast<int>(nodes_.size()) - 1;
  return root_;
}

int BettingProcess::depth() const {
  std::function<int(int)> rec = [&](int id) -> int {
    const Node& n = node(id);
    int d = 0;
    for (const auto& o : n.outcomes) d = std::max(d, 1 + rec(o.child));
    return d;
  };
  return root_ < 0 ? 0 : rec(root_);
}

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::InvalidProcess, what); }

}  // namespace

void BettingProcess::validate() const {
  if (endowments_.empty() || endowments_.size() > static_cast<std::size_t>(kMaxFamilyK))
    invalid("number of tables must be in [1, 20]");
  for (const auto& p : endowments_)
    if (p < 0 || p > 1) invalid("endowment " + dptlab::to_string(p) + " outside [0,1]");
  if (root_ < 0) invalid("process has no root");
  if (horizon_ && depth() > *horizon_)
    invalid("depth " + std::to_string(depth()) + " exceeds horizon " + std::to_string(*horizon_));
  std::vector<int> seen(nodes_.size(), 0);
  std::vector<Rational> fortune = endowments_;
  std::function<void(int)> rec = [&](int id) {
    if (id < 0 || static_cast<std::size_t>(id) >= nodes_.size()) invalid("dangling subtree");
    if (seen[static_cast<std::size_t>(id)]++) invalid("subtree shared between rounds");
    const Node& n = node(id);
    if (n.stop) return;
    if (n.table < 0 || n.table >= k()) invalid("bet names table " + std::to_string(n.table + 1));
    if (n.outcomes.empty()) invalid("bet without outcomes");
    Rational total = 0, mean = 0;
    for (const auto& o : n.outcomes) {
      if (o.probability <= 0) invalid("outcome probability must be positive");
      if (o.value < 0 || o.value > 1) invalid("fortune " + dptlab::to_string(o.value) + " outside [0,1]");
      total += o.probability;
      mean += o.probability * o.value;
    }
    if (total != 1) invalid("outcome probabilities sum to " + dptlab::to_string(total));
    Rational& x = fortune[static_cast<std::size_t>(n.table)];
    if (mean > x)
      invalid("favourable bet at table " + std::to_string(n.table + 1) + ": mean " + dptlab::to_string(mean) +
              " exceeds fortune " + dptlab::to_string(x));
    const Rational saved = x;
    for (const auto& o : n.outcomes) {
      x = o.value;
      rec(o.child);
    }
    x = saved;
  };
  rec(root_);
}

BettingProcess BettingProcess::all_or_nothing(const std::vector<Rational>& endowments) {
  BettingProcess proc(endowments);
  // Built bottom-up: table k bets last. Each bet continues on both branches.
  std::function<int(int)> build = [&](int j) -> int {
    if (j == proc.k()) return proc.add_stop();
    const Rational& p = endowments[static_cast<std::size_t>(j)];
    if (p == 0 || p == 1) return build(j + 1);
    const int win = build(j + 1);
    const int lose = build(j + 1);
    return proc.add_bet(j, {{p, Rational(1), win}, {1 - p, Rational(0), lose}});
  };
  proc.set_root(build(0));
  return proc;
}

GamblingReport gambling_check(const BettingProcess& process, const MonotoneFamily& family) {
  process.validate();
  if (family.k() != process.k())
    throw Error(ErrorKind::ArityMismatch, "family is over [" + std::to_string(family.k()) + "] but the process has " +
                                              std::to_string(process.k()) + " tables");
  GamblingReport report;
  report.lhs = 0;
  std::vector<Rational> fortune = process.endowments();
  std::function<void(int, const Rational&)> rec = [&](int id, const Rational& prob) {
    const auto& n = process.node(id);
    if (n.stop) {
      Subset won = 0;
      for (int j = 0; j < process.k(); ++j)
        if (fortune[static_cast<std::size_t>(j)] == 1) won |= Subset{1} << j;
      if (family.contains(won)) report.lhs += prob;
      return;
    }
    Rational& x = fortune[static_cast<std::size_t>(n.table)];
    const Rational saved = x;
    for (const auto& o : n.outcomes) {
      x = o.value;
      rec(o.child, prob * o.probability);
    }
    x = saved;
  };
  rec(process.root(), Rational(1));
  report.rhs = family_prob<Rational>(family, process.endowments());
  report.holds = report.lhs <= report.rhs;
  report.equality = report.lhs == report.rhs;
  return report;
}

// ---- text format -----------------------------------------------------------

namespace {

class ProcessParser {
 public:
  explicit ProcessParser(std::string_view text) : text_(text) {}

  BettingProcess run() {
    std::optional<int> k, horizon;
    std::vector<Rational> p;
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) fail("missing process tree");
      if (text_[pos_] == '(') break;
      const std::string head = token();
      if (head == "k") {
        k = static_cast<int>(integer(token()));
      } else if (head == "N") {
        horizon = static_cast<int>(integer(token()));
      } else if (head == "p") {
        if (!k) fail("'p' line before 'k'");
        for (int j = 0; j < *k; ++j) p.push_back(rational(token()));
      } else {
        fail("unknown header '" + head + "'");
      }
    }
    if (!k || static_cast<int>(p.size()) != *k) fail("header must give k and k endowments");
    BettingProcess proc(p, horizon);
    const int root = node(proc);
    skip_space();
    if (pos_ != text_.size()) fail("trailing text after process");
    proc.set_root(root);
    return proc;
  }

 private:
  int node(BettingProcess& proc) {
    expect('(');
    const std::string head = token();
    int id = -1;
    if (head == "stop") {
      id = proc.add_stop();
    } else if (head == "bet") {
      const long j = integer(token());
      if (j < 1) fail("tables are 1-based");
      std::vector<BettingProcess::Outcome> outcomes;
      skip_space();
      while (pos_ < text_.size() && text_[pos_] == '(') {
        expect('(');
        BettingProcess::Outcome o;
        o.probability = rational(token());
        o.value = rational(token());
        o.child = node(proc);
        expect(')');
        outcomes.push_back(std::move(o));
        skip_space();
      }
      id = proc.add_bet(static_cast<int>(j - 1), std::move(outcomes));
    } else {
      fail("expected 'stop' or 'bet', got '" + head + "'");
    }
    expect(')');
    return id;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  std::string token() {
    skip_space();
    token_line_ = line_;
    token_column_ = column_;
    std::string out;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')') {
      out += text_[pos_];
      advance();
    }
    if (out.empty()) fail("expected a token");
    return out;
  }

  long integer(const std::string& t) {
    const Rational r = rational(t);
    if (r.get_den() != 1) throw ParseError("expected an integer, got '" + t + "'", token_line_, token_column_);
    return r.get_num().get_si();
  }

  Rational rational(const std::string& t) {
    try {
      return parse_rational(t);
    } catch (const ParseError&) {
      throw ParseError("malformed number '" + t + "'", token_line_, token_column_);
    }
  }

  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, line_, column_); }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  int token_line_ = 1;
  int token_column_ = 1;
};

}  // namespace

BettingProcess BettingProcess::parse(std::string_view text) { return ProcessParser(text).run(); }

std::string BettingProcess::to_string() const {
  std::ostringstream out;
  out << "k " << k() << "\np";
  for (const auto& p : endowments_) out << ' ' << dptlab::to_string(p);
  out << '\n';
  if (horizon_) out << "N " << *horizon_ << '\n';
  std::function<void(int)> rec = [&](int id) {
    const Node& n = node(id);
    if (n.stop) {
      out << "(stop)";
      return;
    }
    out << "(bet " << n.table + 1;
    for (const auto& o : n.outcomes) {
      out << " (" << dptlab::to_string(o.probability) << ' ' << dptlab::to_string(o.value) << ' ';
      rec(o.child);
      out << ')';
    }
    out << ')';
  };
  if (root_ >= 0) rec(root_);
  out << '\n';
  return out.str();
}

// ---- fuzzing ---------------------------------------------------------------

BettingProcess random_process(int k, int horizon, std::mt19937_64& rng) {
  constexpr int grid = 8;
  std::uniform_int_distribution<int> cell(0, grid);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Rational> p(static_cast<std::size_t>(k));
  for (auto& x : p) x = ratio(cell(rng), grid);
  BettingProcess proc(p, horizon);
  std::vector<Rational> fortune = p;

  std::function<int(int)> grow = [&](int depth) -> int {
    std::vector<int> open;
    for (int j = 0; j < k; ++j)
      if (fortune[static_cast<std::size_t>(j)] > 0 && fortune[static_cast<std::size_t>(j)] < 1) open.push_back(j);
    if (depth >= horizon || open.empty() || unit(rng) < 0.15) return proc.add_stop();
    const int j = open[std::uniform_int_distribution<std::size_t>(0, open.size() - 1)(rng)];
    Rational& x = fortune[static_cast<std::size_t>(j)];
    const Rational current = x;
    // Target mean: the current fortune, or a lower grid point.
    Rational mean = current;
    if (unit(rng) < 0.4) mean = current * ratio(std::uniform_int_distribution<int>(0, grid - 1)(rng), grid);
    Rational low, high;
    if (unit(rng) < 0.2) {
      low = 0;
      high = 1;
    } else {
      std::vector<Rational> below, above;
      for (int g = 0; g <= grid; ++g) {
        const Rational v = ratio(g, grid);
        if (v <= mean) below.push_back(v);
        if (v >= mean) above.push_back(v);
      }
      low = below[std::uniform_int_distribution<std::size_t>(0, below.size() - 1)(rng)];
      high = above[std::uniform_int_distribution<std::size_t>(0, above.size() - 1)(rng)];
    }
    std::vector<BettingProcess::Outcome> outcomes;
    auto branch = [&](const Rational& prob, const Rational& value) {
      x = value;
      const int child = grow(depth + 1);
      outcomes.push_back({prob, value, child});
    };
    if (low == high) {
      branch(Rational(1), low);
    } else {
      const Rational up = (mean - low) / (high - low);
      if (up > 0) branch(up, high);
      if (up < 1) branch(1 - up, low);
    }
    x = current;
    return proc.add_bet(j, std::move(outcomes));
  };
  proc.set_root(grow(0));
  return proc;
}

MonotoneFamily random_family(int k, std::mt19937_64& rng) {
  std::vector<Subset> generators;
  const int count = static_cast<int>(rng() % 4);
  for (int g = 0; g < count; ++g) generators.push_back(static_cast<Subset>(rng() % (std::uint64_t{1} << k)));
  return MonotoneFamily::upward_closure(k, generators);
}

FuzzSummary gambling_fuzz(int count, std::uint64_t seed, int max_k, int max_horizon) {
  std::mt19937_64 rng(seed);
  FuzzSummary summary;
  summary.worst_margin = 1;
  for (int run = 0; run < count; ++run) {
    const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_k));
    const int horizon = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_horizon));
    const auto proc = random_process(k, horizon, rng);
    const auto family = random_family(k, rng);
    const auto report = gambling_check(proc, family);
    ++summary.processes;
    if (report.holds) {
      ++summary.holds;
    } else {
      ++summary.violations;
    }
    summary.worst_margin = std::min(summary.worst_margin, Rational(report.rhs - report.lhs));
  }
  return summary;
}

}  // namespace dptlab
