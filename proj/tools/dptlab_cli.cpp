#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cstdio>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "dptlab/bounds.hpp"
#include "dptlab/error.hpp"
#include "dptlab/gambling.hpp"
#include "dptlab/hardness.hpp"
#include "dptlab/io.hpp"
#include "dptlab/kfold.hpp"
#include "dptlab/optimal_dp.hpp"
#include "dptlab/verify.hpp"

using namespace dptlab;
using nlohmann::ordered_json;

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitError = 2;

struct Globals {
  std::string format = "text";
  std::uint64_t seed = 0;
  int jobs = 1;
  bool json() const { return format == "json"; }
};

// A parse failure tied to an input file, reported as path:line:col.
struct FileError {
  std::string path;
  ParseError error;
};

template <class F>
auto load(const std::string& path, F&& parse) {
  try {
    return parse(io::read_file(path));
  } catch (const ParseError& e) {
    throw FileError{path, e};
  }
}

std::string fmt(double v) { return ScalarTraits<double>::format(v); }

std::string fixed6(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.6f", v);
  return buffer;
}

Rational rational_arg(const std::string& text, const char* name) {
  try {
    return parse_rational(text);
  } catch (const ParseError&) {
    throw ParseError(std::string("--") + name + ": malformed number '" + text + "'", 0, 0);
  }
}

// Runs body(i) for i in [0, count) on up to `jobs` threads.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, jobs)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

int emit(const RunReport& report, const Globals& g) {
  std::cout << (g.json() ? report.to_json() : report.to_text());
  return report.violated() ? kExitViolation : 0;
}

// ---- compute ----------------------------------------------------------------

struct ComputeArgs {
  std::string fn, dist, relation, search, flavor = "plain";
  std::int64_t budget = 0;
};

template <class S>
S compute_value(const ComputeArgs& a, const InputDistribution<S>& mu) {
  const auto need_fn = [&] {
    if (a.fn.empty()) throw Error(ErrorKind::DomainError, "--fn is required for flavor " + a.flavor);
    return load(a.fn, io::parse_function);
  };
  if (a.budget < 0) throw Error(ErrorKind::BudgetNegative, "budget must be nonnegative");
  const int depth = static_cast<int>(std::min<std::int64_t>(a.budget, 64));
  if (a.flavor == "plain") return opt_success<S>(need_fn(), mu, depth);
  if (a.flavor == "xor") return opt_bias_xor<S>(need_fn(), mu, depth);
  if (a.flavor == "zerr") return opt_success_zerr<S>(need_fn(), mu, depth);
  if (a.flavor == "size") return opt_success_size<S>(need_fn(), mu, a.budget);
  if (a.flavor == "rel") {
    const RelationTable p = a.relation.empty() ? RelationTable(need_fn()) : load(a.relation, io::parse_relation);
    return opt_success_rel<S>(p, mu, depth);
  }
  if (a.flavor == "search") {
    const SearchSet v = a.search.empty() ? forcing_set(need_fn()) : load(a.search, io::parse_search_set);
    return opt_success_search<S>(v, mu, depth);
  }
  throw Error(ErrorKind::DomainError, "unknown flavor " + a.flavor);
}

int run_compute(const ComputeArgs& a, const Globals& g) {
  const auto mu = load(a.dist, io::parse_distribution);
  std::string value, tag;
  double approx = 0;
  std::visit(
      [&](const auto& d) {
        const auto v = compute_value(a, d);
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, Rational>) {
          value = to_string(v);
          tag = "exact";
        } else {
          value = fmt(v);
          tag = "float64";
        }
        approx = to_double(v);
      },
      mu);
  if (g.json()) {
    ordered_json j;
    j["format_version"] = kReportFormatVersion;
    j["flavor"] = a.flavor;
    j["budget"] = a.budget;
    j["value"] = value;
    j["value_float"] = approx;
    j["representation"] = tag;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << value << " [" << tag << "]\n";
  }
  return 0;
}

// ---- verify -----------------------------------------------------------------

struct VerifyArgs {
  std::string theorem, fn, dist, family, relation, search;
  int T = 1, k = 2;
  std::string alpha = "1", eta = "1";
};

int run_verify(const VerifyArgs& a, const Globals& g, const std::string& command) {
  VerifyInput in;
  const auto t = parse_theorem(a.theorem);
  if (!t) throw Error(ErrorKind::DomainError, "unknown theorem '" + a.theorem + "'");
  in.theorem = *t;
  in.f = load(a.fn, io::parse_function);
  in.mu = load(a.dist, io::parse_distribution);
  if (!a.family.empty()) in.family = load(a.family, io::parse_family);
  if (!a.relation.empty()) in.relation = load(a.relation, io::parse_relation);
  if (!a.search.empty()) in.search = load(a.search, io::parse_search_set);
  in.T = a.T;
  in.k = a.k;
  in.alpha = rational_arg(a.alpha, "alpha");
  in.eta = rational_arg(a.eta, "eta");
  RunReport report;
  report.command = command;
  report.grid = {{"theorem", a.theorem}, {"T", std::to_string(a.T)}, {"alpha", a.alpha}, {"k", std::to_string(a.k)}};
  report.cells.push_back(verify(in));
  return emit(report, g);
}

// ---- shaltiel ---------------------------------------------------------------

struct ShaltielArgs {
  int T = 2, k = 8;
  std::string eps = "1/4", alpha = "1";
};

int run_shaltiel(const ShaltielArgs& a, const Globals& g, const std::string& command) {
  const Rational eps = rational_arg(a.eps, "eps");
  const Rational alpha = rational_arg(a.alpha, "alpha");
  const auto d = shaltiel_alg_success(a.T, eps, alpha, a.k);
  const Rational lower = happyeq_lower(eps, alpha, a.k);
  const auto bound = dpt_bound(eps, alpha, a.k, a.T);
  const std::vector<std::pair<std::string, std::string>> params = {
      {"T", std::to_string(a.T)}, {"eps", to_string(eps)}, {"alpha", to_string(alpha)}, {"k", std::to_string(a.k)}};

  RunReport report;
  report.command = command;
  report.grid = params;

  if (a.T + 2 <= 12) {
    const auto inst = shaltiel_instance(a.T, eps);
    ReportCell c;
    c.label = "single-instance optimum";
    c.params = params;
    c.representation = "exact";
    c.oracle = to_string(*inst.optimum);
    c.oracle_value = to_double(*inst.optimum);
    c.budget = std::to_string(a.T) + " queries";
    c.bounds.push_back({"1-ε", BoundValue::of(1 - eps), judge(*inst.optimum, BoundValue::of(1 - eps))});
    c.verdict = *inst.optimum == 1 - eps ? Verdict::holds : Verdict::violated;
    c.note = "equality expected";
    report.cells.push_back(std::move(c));
  }

  ReportCell sandwich;
  sandwich.label = "happy-event lower bound vs algorithm D";
  sandwich.params = params;
  sandwich.representation = "exact";
  sandwich.oracle = to_string(lower);
  sandwich.oracle_value = to_double(lower);
  sandwich.bounds.push_back({"D success", BoundValue::of(d.exact), judge(lower, BoundValue::of(d.exact))});
  sandwich.verdict = sandwich.bounds.back().verdict;
  report.cells.push_back(std::move(sandwich));

  ReportCell alg;
  alg.label = "algorithm D vs direct-product bound";
  alg.params = params;
  alg.representation = "exact";
  alg.oracle = to_string(d.exact);
  alg.oracle_value = to_double(d.exact);
  alg.budget = std::to_string(d.queries_used) + " queries";
  alg.bounds.push_back({"(2^{αε}(1-ε))^k", bound.exact, judge(d.exact, bound.exact)});
  alg.verdict = alg.bounds.back().verdict;
  alg.note = "D uses 2k + sT = " + std::to_string(d.queries_used) + " queries, 2k = " + std::to_string(2 * a.k) +
             " more than the budget αεTk = " + to_string(d.theorem_budget);
  std::string dist;
  for (std::size_t c = 0; c < d.solved.size(); ++c) dist += (c ? " " : "") + fmt(to_double(d.solved[c]));
  alg.extras = {{"rescues", std::to_string(d.rescues)},
                {"solved_dist", dist},
                {"mean_solved", fmt(to_double(d.expected_solved))},
                {"mean/k", fmt(to_double(d.expected_solved) / a.k)}};
  report.cells.push_back(std::move(alg));

  if (!g.json())
    std::cout << "exact " << fixed6(to_double(d.exact)) << ", lower " << fixed6(to_double(lower)) << ", thm1.1-bound "
              << fixed6(bound.exact.value) << "\n";
  return emit(report, g);
}

// ---- yao --------------------------------------------------------------------

struct YaoArgs {
  std::string fn, flavor = "plain";
  int T = 1, iters = 1000;
  double step = -1;
};

int run_yao(const YaoArgs& a, const Globals& g) {
  const auto f = load(a.fn, io::parse_function);
  YaoOptions opt;
  opt.iterations = a.iters;
  opt.seed = g.seed;
  if (a.step >= 0) opt.step = a.step;
  if (a.flavor != "plain" && a.flavor != "zerr") throw Error(ErrorKind::DomainError, "flavor must be plain or zerr");
  const auto r = yao_hard_dist(f, a.T, a.flavor == "plain" ? YaoFlavor::plain : YaoFlavor::zerr, opt);
  if (g.json()) {
    ordered_json j;
    j["format_version"] = kReportFormatVersion;
    j["flavor"] = a.flavor;
    j["T"] = a.T;
    j["iterations"] = r.iterations;
    j["step"] = r.step;
    j["mu_hat"] = r.mu_hat;
    j["certificate"] = r.certificate;
    j["value"] = r.value();
    j["upper"] = to_string(r.upper);
    j["lower"] = to_string(r.lower);
    j["gap"] = to_double(r.gap);
    j["average_value"] = r.average_value;
    j["min_iteration_gap"] = r.min_iteration_gap;
    std::cout << j.dump(2) << "\n";
  } else {
    const int n = f.arity();
    std::cout << "mu_hat (" << r.certificate << "):\n";
    for (std::uint32_t x = 0; x < r.mu_hat.size(); ++x) {
      std::string bits;
      for (int i = 0; i < n; ++i) bits += (x & variable_bit(n, i)) ? '1' : '0';
      std::cout << "  " << bits << "  " << fmt(r.mu_hat[x]) << "\n";
    }
    std::cout << "value  " << fmt(r.value()) << "  (upper, exact " << to_string(r.upper) << ")\n"
              << "lower  " << fmt(to_double(r.lower)) << "\n"
              << "gap    " << fmt(to_double(r.gap)) << "\n"
              << "iterations " << r.iterations << ", step " << fmt(r.step) << "\n";
  }
  return r.gap < 0 ? kExitViolation : 0;
}

// ---- bounds sweep -----------------------------------------------------------

struct Axis {
  std::vector<Rational> values;
};

std::vector<Rational> parse_range(const std::string& key, const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.empty() || parts.size() > 3) throw ParseError("range for " + key + " must be a[:b[:step]]", 0, 0);
  const Rational from = rational_arg(parts[0], key.c_str());
  if (parts.size() == 1) return {from};
  const Rational to = rational_arg(parts[1], key.c_str());
  const Rational step = parts.size() == 3 ? rational_arg(parts[2], key.c_str()) : Rational(1);
  if (step <= 0) throw ParseError("step for " + key + " must be positive", 0, 0);
  std::vector<Rational> out;
  for (Rational v = from; v <= to; v += step) {
    out.push_back(v);
    if (out.size() > 100000) throw ParseError("range for " + key + " is too long", 0, 0);
  }
  return out;
}

struct SweepRow {
  std::vector<std::string> cells;
};

std::string opt_cell(const std::function<std::string()>& fn) {
  try {
    return fn();
  } catch (const Error&) {
    return "";  // outside this bound's domain
  }
}

int run_bounds(const std::string& sweep, int codomain, const Globals& g) {
  std::map<std::string, std::vector<Rational>> axes = {
      {"alpha", {Rational(1)}}, {"k", {Rational(1)}}, {"eta", {Rational(1)}}, {"B", {Rational(codomain)}}};
  bool have_eps = false;
  std::stringstream ss(sweep);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ParseError("sweep item '" + item + "' is not key=range", 0, 0);
    const std::string key = item.substr(0, eq);
    if (key != "eps" && !axes.count(key)) throw ParseError("unknown sweep key '" + key + "'", 0, 0);
    axes[key] = parse_range(key, item.substr(eq + 1));
    have_eps = have_eps || key == "eps";
  }
  if (!have_eps) throw ParseError("sweep needs an eps range", 0, 0);

  struct Point {
    Rational eps, alpha, eta;
    int k, b;
  };
  std::vector<Point> grid;
  for (const auto& eps : axes["eps"])
    for (const auto& alpha : axes["alpha"])
      for (const auto& kr : axes["k"])
        for (const auto& eta : axes["eta"])
          for (const auto& br : axes["B"]) {
            if (kr.get_den() != 1 || br.get_den() != 1) throw ParseError("k and B must be integers", 0, 0);
            grid.push_back({eps, alpha, eta, static_cast<int>(kr.get_num().get_si()), static_cast<int>(br.get_num().get_si())});
          }

  static const std::vector<std::string> columns = {
      "eps",       "alpha",          "k",           "eta",        "B",
      "dpt_exact", "dpt_relaxed",    "xor_exact",   "xor_closed", "threshold_stmt1",
      "threshold_stmt2", "chernoff", "search",      "zerr"};
  std::vector<SweepRow> rows(grid.size());
  parallel_for(grid.size(), g.jobs, [&](std::size_t i) {
    const Point& p = grid[i];
    auto& r = rows[i].cells;
    r = {fmt(to_double(p.eps)), fmt(to_double(p.alpha)), std::to_string(p.k), fmt(to_double(p.eta)), std::to_string(p.b)};
    r.push_back(opt_cell([&] { return fmt(dpt_bound(p.eps, p.alpha, p.k).exact.value); }));
    r.push_back(opt_cell([&] { return fmt(dpt_bound(p.eps, p.alpha, p.k).relaxed.value); }));
    r.push_back(opt_cell([&] { return fmt(to_double(xor_bound(p.eps, p.alpha, p.k).exact)); }));
    r.push_back(opt_cell([&] { return fmt(xor_bound(p.eps, p.alpha, p.k).closed); }));
    r.push_back(opt_cell([&] { return fmt(threshold_bound(p.eps, p.alpha, p.eta, p.k, p.b).stmt1.value); }));
    r.push_back(opt_cell([&] { return fmt(threshold_bound(p.eps, p.alpha, p.eta, p.k, p.b).stmt2.value); }));
    r.push_back(opt_cell([&] {
      const auto c = threshold_bound(p.eps, p.alpha, Rational(1), p.k, p.b).chern;
      return c ? fmt(*c) : std::string();
    }));
    r.push_back(opt_cell([&] { return fmt(to_double(search_bound(p.eps, p.alpha, p.eta, p.k))); }));
    r.push_back(opt_cell([&] { return fmt(to_double(zerr_bound(p.eps, p.alpha, p.k))); }));
  });

  if (g.json()) {
    ordered_json j;
    j["format_version"] = kReportFormatVersion;
    j["columns"] = columns;
    j["rows"] = ordered_json::array();
    for (const auto& row : rows) j["rows"].push_back(row.cells);
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  for (std::size_t c = 0; c < columns.size(); ++c) std::cout << (c ? "," : "") << columns[c];
  std::cout << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.cells.size(); ++c) std::cout << (c ? "," : "") << row.cells[c];
    std::cout << "\n";
  }
  return 0;
}

// ---- trace ------------------------------------------------------------------

template <class S>
int print_trace(const TraceReport<S>& r, const Globals& g) {
  const auto show = [](const S& v) {
    if constexpr (std::is_same_v<S, Rational>) {
      return to_string(v);
    } else {
      return fmt(v);
    }
  };
  if (g.json()) {
    ordered_json j;
    j["format_version"] = kReportFormatVersion;
    j["k"] = r.k;
    j["steps"] = r.steps;
    j["T"] = r.hardness_budget;
    j["expected_product"] = ordered_json::array();
    for (const auto& e : r.expected_product) j["expected_product"].push_back(show(e));
    j["paths"] = r.paths.size();
    j["success"] = show(r.success_paths);
    if (r.direct_checked) j["success_direct"] = show(r.success_direct);
    j["max_over_budget"] = r.max_over_budget;
    j["weighted_bound"] = show(r.weighted_bound);
    j["global_bound"] = show(r.global_bound);
    j["chain_violations"] = r.chain_violations;
    j["node_checks"] = r.node_checks;
    j["node_violations"] = r.node_violations;
    j["leaf_violations"] = r.leaf_violations;
    j["factorization_checks"] = r.factorization_checks;
    j["factorization_violations"] = r.factorization_violations;
    j["verdict"] = r.ok() ? "holds" : "violated";
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "k " << r.k << ", depth " << r.steps << ", T " << r.hardness_budget << ", " << r.paths.size()
              << " leaves\n";
    std::cout << "E[P_t]:";
    for (const auto& e : r.expected_product) std::cout << " " << show(e);
    std::cout << "\nsuccess            " << show(r.success_paths);
    if (r.direct_checked) std::cout << "  (direct " << show(r.success_direct) << ")";
    std::cout << "\nweighted bound     " << show(r.weighted_bound) << "\nglobal bound       " << show(r.global_bound)
              << "  (|B|^" << r.max_over_budget << " E[P_M])\n"
              << "supermartingale    " << r.chain_violations << " chain / " << r.node_violations << " of "
              << r.node_checks << " node violations\n"
              << "factorization      " << r.factorization_violations << " of " << r.factorization_checks
              << " violations\n"
              << "verdict            " << (r.ok() ? "holds" : "violated") << "\n";
  }
  return r.ok() ? 0 : kExitViolation;
}

int run_trace(const std::string& tree_path, const std::string& fn, const std::string& dist, int T, const Globals& g) {
  const auto tree = load(tree_path, [](const std::string& s) { return KFoldTree::parse(s); });
  const auto f = load(fn, io::parse_function);
  const auto mu = load(dist, io::parse_distribution);
  const int k = tree.output_width();
  return std::visit([&](const auto& d) { return print_trace(trace_tree(tree, f, d, T, k), g); }, mu);
}

// ---- gamble -----------------------------------------------------------------

int run_gamble(const std::string& proc_path, const std::string& family_path, int fuzz, int max_k, int max_horizon,
               const Globals& g) {
  if (fuzz > 0) {
    const auto s = gambling_fuzz(fuzz, g.seed, max_k, max_horizon);
    if (g.json()) {
      ordered_json j;
      j["format_version"] = kReportFormatVersion;
      j["processes"] = s.processes;
      j["holds"] = s.holds;
      j["violations"] = s.violations;
      j["worst_margin"] = to_string(s.worst_margin);
      j["verdict"] = s.violations == 0 ? "holds" : "violated";
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << s.holds << "/" << s.processes << " holds (min margin " << to_string(s.worst_margin) << ")\n";
    }
    return s.violations == 0 ? 0 : kExitViolation;
  }
  if (proc_path.empty() || family_path.empty())
    throw Error(ErrorKind::DomainError, "gamble needs --proc and --family, or --fuzz N");
  const auto proc = load(proc_path, [](const std::string& s) { return BettingProcess::parse(s); });
  const auto family = load(family_path, io::parse_family);
  const auto r = gambling_check(proc, family);
  if (g.json()) {
    ordered_json j;
    j["format_version"] = kReportFormatVersion;
    j["lhs"] = to_string(r.lhs);
    j["rhs"] = to_string(r.rhs);
    j["equality"] = r.equality;
    j["verdict"] = r.holds ? "holds" : "violated";
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "Pr[{j : X_j,N = 1} in A] = " << to_string(r.lhs) << "\nPr[D in A]              = " << to_string(r.rhs)
              << "\nverdict " << (r.holds ? "holds" : "violated") << (r.equality ? " (equality)" : "") << "\n";
  }
  return r.holds ? 0 : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact query-complexity oracles and bound checks"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--seed", g.seed, "Seed for randomized paths");
  app.add_option("--jobs", g.jobs, "Parallel workers for sweeps")->check(CLI::PositiveNumber);

  std::string command;
  for (int i = 1; i < argc; ++i) command += (i > 1 ? " " : "") + std::string(argv[i]);

  ComputeArgs ca;
  auto* compute = app.add_subcommand("compute", "Optimal single-instance success");
  compute->add_option("--fn", ca.fn, "Function file");
  compute->add_option("--dist", ca.dist, "Distribution file")->required();
  compute->add_option("--budget", ca.budget, "Query budget (leaves for size)")->required();
  compute->add_option("--flavor", ca.flavor, "plain|rel|xor|search|zerr|size")
      ->check(CLI::IsMember({"plain", "rel", "xor", "search", "zerr", "size"}));
  compute->add_option("--relation", ca.relation, "Relation file (rel)");
  compute->add_option("--search", ca.search, "Search-set file (search)");

  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "Check one theorem's bound against the exact oracle");
  verify_cmd->add_option("--theorem", va.theorem, "1.1|1.3|1.4|6.2|6.3|7.2|7.5|8.1")->required();
  verify_cmd->add_option("--fn", va.fn, "Function file")->required();
  verify_cmd->add_option("--dist", va.dist, "Distribution file")->required();
  verify_cmd->add_option("--T", va.T, "Single-instance budget (depth, or size for 8.1)")->required();
  verify_cmd->add_option("--alpha", va.alpha, "alpha in (0,1]");
  verify_cmd->add_option("--k", va.k, "Number of instances");
  verify_cmd->add_option("--eta", va.eta, "Threshold fraction (1.4, 6.3, 7.2)");
  verify_cmd->add_option("--family", va.family, "Monotone family file (6.2)");
  verify_cmd->add_option("--relation", va.relation, "Relation file (6.2, 6.3)");
  verify_cmd->add_option("--search", va.search, "Search-set file (7.2)");

  ShaltielArgs sa;
  auto* shaltiel = app.add_subcommand("shaltiel", "Algorithm D on the f_T family");
  shaltiel->add_option("--T", sa.T, "T")->required();
  shaltiel->add_option("--eps", sa.eps, "epsilon in (0,1/2)")->required();
  shaltiel->add_option("--alpha", sa.alpha, "alpha in (0,1]")->required();
  shaltiel->add_option("--k", sa.k, "Number of instances")->required();

  YaoArgs ya;
  auto* yao = app.add_subcommand("yao", "Hard distribution by multiplicative weights");
  yao->add_option("--fn", ya.fn, "Function file")->required();
  yao->add_option("--T", ya.T, "Query budget")->required();
  yao->add_option("--iters", ya.iters, "Iterations")->check(CLI::PositiveNumber);
  yao->add_option("--flavor", ya.flavor, "plain|zerr")->check(CLI::IsMember({"plain", "zerr"}));
  yao->add_option("--step", ya.step, "Step size (default min(1/2, sqrt(ln 2^n / iters)))");

  std::string sweep;
  int sweep_codomain = 2;
  auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate every bound formula over a grid (CSV)");
  bounds_cmd->add_option("--sweep", sweep, "e.g. eps=0.1:0.5:0.1,alpha=0.25,k=1:16")->required();
  bounds_cmd->add_option("--B", sweep_codomain, "Codomain size for threshold bounds");

  std::string tree_path, trace_fn, trace_dist;
  int trace_T = 1;
  auto* trace = app.add_subcommand("trace", "Fortune martingales along a k-fold tree");
  trace->add_option("--tree", tree_path, "Tree file")->required();
  trace->add_option("--fn", trace_fn, "Function file")->required();
  trace->add_option("--dist", trace_dist, "Distribution file")->required();
  trace->add_option("--T", trace_T, "Single-instance budget")->required();

  std::string proc_path, family_path;
  int fuzz = 0, max_k = 4, max_horizon = 6;
  auto* gamble = app.add_subcommand("gamble", "Gambling lemma check or fuzz");
  gamble->add_option("--proc", proc_path, "Betting process file");
  gamble->add_option("--family", family_path, "Monotone family file");
  gamble->add_option("--fuzz", fuzz, "Number of random processes");
  gamble->add_option("--max-k", max_k, "Largest k when fuzzing")->check(CLI::Range(1, 8));
  gamble->add_option("--max-horizon", max_horizon, "Largest horizon when fuzzing")->check(CLI::Range(1, 12));

  for (auto* sub : {compute, verify_cmd, shaltiel, yao, bounds_cmd, trace, gamble}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*compute) return run_compute(ca, g);
    if (*verify_cmd) return run_verify(va, g, command);
    if (*shaltiel) return run_shaltiel(sa, g, command);
    if (*yao) return run_yao(ya, g);
    if (*bounds_cmd) return run_bounds(sweep, sweep_codomain, g);
    if (*trace) return run_trace(tree_path, trace_fn, trace_dist, trace_T, g);
    if (*gamble) return run_gamble(proc_path, family_path, fuzz, max_k, max_horizon, g);
  } catch (const FileError& e) {
    std::cerr << e.path << ":" << e.error.line() << ":" << e.error.column() << ": " << e.error.detail() << "\n";
    return kExitError;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.detail() << "\n";
    return kExitError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
