#include "dptlab/verify.hpp"

#include <chrono>
#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "dptlab/error.hpp"
#include "dptlab/kfold.hpp"
#include "dptlab/optimal_dp.hpp"

namespace dptlab {

namespace {

struct TheoremName {
  Theorem theorem;
  const char* id;
  const char* label;
};

constexpr TheoremName kTheorems[] = {
    {Theorem::dpt, "1.1", "direct product"},
    {Theorem::xor_lemma, "1.3", "XOR"},
    {Theorem::threshold, "1.4", "threshold"},
    {Theorem::gen_threshold, "6.2", "monotone family"},
    {Theorem::relation_threshold, "6.3", "relation threshold"},
    {Theorem::search, "7.2", "search"},
    {Theorem::zero_error, "7.5", "zero error"},
    {Theorem::size, "8.1", "tree size"},
};

const TheoremName& name_of(Theorem t) {
  for (const auto& n : kTheorems)
    if (n.theorem == t) return n;
  return kTheorems[0];
}

Rational as_rational(const Rational& x) { return x; }
Rational as_rational(double x) { return Rational(x); }

std::string format_value(const Rational& x) { return to_string(x); }
std::string format_value(double x) { return ScalarTraits<double>::format(x); }

Verdict judge_value(const Rational& x, const BoundValue& b) { return judge(x, b); }
Verdict judge_value(double x, const BoundValue& b) { return judge(x, b); }

template <class S>
ReportCell run(const VerifyInput& in, const InputDistribution<S>& mu) {
  ReportCell c;
  const auto& names = name_of(in.theorem);
  c.label = std::string("theorem ") + names.id + " (" + names.label + ")";
  c.representation = ScalarTraits<S>::exact ? "exact" : "float64";
  c.params = {{"theorem", names.id},
              {"T", std::to_string(in.T)},
              {"alpha", to_string(in.alpha)},
              {"k", std::to_string(in.k)}};
  const bool uses_eta = in.theorem == Theorem::threshold || in.theorem == Theorem::relation_threshold ||
                        in.theorem == Theorem::search;
  if (uses_eta) c.params.emplace_back("eta", to_string(in.eta));

  if (in.alpha <= 0 || in.alpha > 1) throw Error(ErrorKind::DomainError, "alpha must lie in (0, 1]");
  if (in.k < 1) throw Error(ErrorKind::DomainError, "k must be at least 1");
  if (uses_eta && (in.eta <= 0 || in.eta > 1)) throw Error(ErrorKind::DomainError, "eta must lie in (0, 1]");
  check_budget(in.T);

  const bool relation_input = in.relation.has_value() &&
                              (in.theorem == Theorem::gen_threshold || in.theorem == Theorem::relation_threshold);
  const RelationTable relation = relation_input ? *in.relation : RelationTable(in.f);
  check_arity(relation.arity(), mu.arity());
  const int codomain = relation.codomain();

  if (in.theorem == Theorem::threshold && codomain != 2)
    throw Error(ErrorKind::NonBooleanCodomain, "theorem 1.4 is stated for Boolean f; use 6.3");
  std::optional<MonotoneFamily> family = in.family;
  if (in.theorem == Theorem::gen_threshold) {
    if (!family) throw Error(ErrorKind::DomainError, "theorem 6.2 needs a monotone family");
    if (family->k() != in.k)
      throw Error(ErrorKind::ArityMismatch,
                  "family is over [" + std::to_string(family->k()) + "] but k = " + std::to_string(in.k));
    c.params.emplace_back("family", std::to_string(family->count()) + " sets");
  }
  SearchSet witnesses;
  if (in.theorem == Theorem::search) witnesses = in.search ? *in.search : forcing_set(in.f);
  if (in.theorem == Theorem::zero_error) witnesses = forcing_set(in.f);
  if (in.theorem == Theorem::search || in.theorem == Theorem::zero_error) check_arity(witnesses.arity(), mu.arity());

  const auto start = std::chrono::steady_clock::now();

  S single;
  switch (in.theorem) {
    case Theorem::search:
    case Theorem::zero_error:
      single = opt_success_search<S>(witnesses, mu, in.T);
      break;
    case Theorem::size:
      single = opt_success_size<S>(in.f, mu, std::max(1, in.T));
      break;
    default:
      single = opt_success_rel<S>(relation, mu, in.T);
  }
  Rational eps = as_rational(S(1) - single);
  if constexpr (!ScalarTraits<S>::exact) {
    if (abs(eps) < Rational(1, 1000000000)) eps = 0;
  }
  c.eps = format_value(S(1) - single);
  if (eps < 0) eps = 0;

  const Rational spend = in.alpha * eps * in.T * in.k;
  const std::int64_t depth_budget = floor_to_int64(spend);
  std::int64_t size_budget = 1;
  if (in.theorem == Theorem::size) {
    size_budget = in.T >= 1 ? floor_power(in.T, in.alpha * eps * in.k) : 1;
    c.budget = std::to_string(size_budget) + " leaves";
  } else {
    c.budget = std::to_string(depth_budget) + " queries";
  }

  const Rational eta_k = in.eta * in.k;
  S oracle;
  switch (in.theorem) {
    case Theorem::dpt:
      oracle = kfold_opt<S>(relation, mu, in.k, static_cast<int>(depth_budget), KFoldMode::product());
      break;
    case Theorem::xor_lemma:
      oracle = kfold_opt<S>(in.f, mu, in.k, static_cast<int>(depth_budget), KFoldMode::xor_parity());
      break;
    case Theorem::threshold:
    case Theorem::relation_threshold:
      oracle = kfold_opt<S>(relation, mu, in.k, static_cast<int>(depth_budget),
                            KFoldMode::threshold(MonotoneFamily::at_least(in.k, eta_k)));
      break;
    case Theorem::gen_threshold:
      oracle = kfold_opt<S>(relation, mu, in.k, static_cast<int>(depth_budget), KFoldMode::threshold(*family));
      break;
    case Theorem::search:
      oracle = kfold_opt_search<S>(witnesses, mu, in.k, static_cast<int>(depth_budget),
                                   MonotoneFamily::at_least(in.k, eta_k));
      break;
    case Theorem::zero_error:
      oracle = kfold_opt_search<S>(witnesses, mu, in.k, static_cast<int>(depth_budget), MonotoneFamily::full_set(in.k));
      break;
    case Theorem::size:
      oracle = kfold_opt_size<S>(in.f, mu, in.k, size_budget);
      break;
  }
  c.oracle = format_value(oracle);
  c.oracle_value = to_double(oracle);

  auto add = [&](std::string name, BoundValue b) {
    const Verdict v = judge_value(oracle, b);
    c.bounds.push_back({std::move(name), std::move(b), v});
  };

  if (eps == 0) {
    c.verdict = Verdict::vacuous;
    c.note = "ε = 0 outside the theorem domain (ε > 0)";
  } else {
    switch (in.theorem) {
      case Theorem::dpt: {
        const auto b = dpt_bound(eps, in.alpha, in.k, in.T);
        add("(2^{αε}(1-ε))^k", b.exact);
        add("(1-ε+0.84αε)^k", b.relaxed);
        break;
      }
      case Theorem::xor_lemma: {
        const auto b = xor_bound(eps, in.alpha, in.k);
        add("½(1+Pr[Y>(1-αε)k])", BoundValue::of(b.exact));
        add("½(1+[1-2ε+21α ln(2/α)ε]^k)", BoundValue::real(b.closed));
        break;
      }
      case Theorem::threshold:
      case Theorem::relation_threshold: {
        const auto b = threshold_bound(eps, in.alpha, in.eta, in.k, codomain);
        add("|B|^{αεk} Pr[Y≥ηk]", b.stmt1);
        add("Pr[Y≥(η-αε)k]", b.stmt2);
        if (in.eta == 1 && b.chern) add("[1-ε+21α ln(1/α)ε]^k", BoundValue::real(*b.chern));
        break;
      }
      case Theorem::gen_threshold: {
        const auto b = gen_threshold_bound(eps, in.alpha, in.k, *family, codomain);
        add("|B|^{αεk} Pr[D∈A]", b.stmt1);
        add("Pr[D∈N(A)]", b.stmt2);
        break;
      }
      case Theorem::search:
        add("Pr[Y>(η-αε)k]", BoundValue::of(search_bound(eps, in.alpha, in.eta, in.k)));
        break;
      case Theorem::zero_error:
        add("Pr[Y>(1-αε)k]", BoundValue::of(zerr_bound(eps, in.alpha, in.k)));
        break;
      case Theorem::size: {
        const auto b = size_bound(eps, in.alpha, in.k, std::max(1, in.T));
        add("2^{αεk}(1-ε)^k", b.success);
        break;
      }
    }
    c.verdict = c.bounds.front().verdict;
    for (const auto& b : c.bounds) c.verdict = worst(c.verdict, b.verdict);
  }
  c.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return c;
}

}  // namespace

std::optional<Theorem> parse_theorem(std::string_view id) {
  for (const auto& n : kTheorems)
    if (id == n.id) return n.theorem;
  return std::nullopt;
}

const char* theorem_id(Theorem t) { return name_of(t).id; }

ReportCell verify(const VerifyInput& in) {
  return std::visit([&](const auto& mu) { return run(in, mu); }, in.mu);
}

// ---- reports ----------------------------------------------------------------

Verdict RunReport::overall() const {
  if (cells.empty()) return Verdict::holds;
  Verdict v = cells.front().verdict;
  for (const auto& c : cells) v = worst(v, c.verdict);
  return v;
}

std::string RunReport::to_json() const {
  using nlohmann::ordered_json;
  ordered_json j;
  j["format_version"] = kReportFormatVersion;
  j["command"] = command;
  ordered_json grid_json = ordered_json::object();
  for (const auto& [key, value] : grid) grid_json[key] = value;
  j["grid"] = grid_json;
  j["cells"] = ordered_json::array();
  for (const auto& c : cells) {
    ordered_json cell;
    cell["label"] = c.label;
    ordered_json params = ordered_json::object();
    for (const auto& [key, value] : c.params) params[key] = value;
    cell["params"] = params;
    cell["representation"] = c.representation;
    if (!c.eps.empty()) cell["eps"] = c.eps;
    cell["oracle"] = c.oracle;
    cell["oracle_value"] = c.oracle_value;
    if (!c.budget.empty()) cell["budget"] = c.budget;
    cell["bounds"] = ordered_json::array();
    for (const auto& b : c.bounds) {
      ordered_json bj;
      bj["name"] = b.name;
      bj["value"] = b.bound.value;
      bj["exact"] = b.bound.describe();
      bj["verdict"] = to_string(b.verdict);
      cell["bounds"].push_back(bj);
    }
    cell["verdict"] = to_string(c.verdict);
    if (!c.note.empty()) cell["note"] = c.note;
    if (!c.extras.empty()) {
      ordered_json extras = ordered_json::object();
      for (const auto& [key, value] : c.extras) extras[key] = value;
      cell["extras"] = extras;
    }
    cell["runtime_ms"] = c.runtime_ms;
    j["cells"].push_back(cell);
  }
  j["verdict"] = to_string(overall());
  return j.dump(2) + "\n";
}

std::string RunReport::to_text() const {
  std::ostringstream out;
  if (!command.empty()) out << "# " << command << "\n";
  for (const auto& c : cells) {
    out << c.label << "\n";
    for (const auto& [key, value] : c.params) out << "  " << std::left << std::setw(14) << key << value << "\n";
    if (!c.eps.empty()) out << "  " << std::setw(14) << "eps" << c.eps << "\n";
    if (!c.budget.empty()) out << "  " << std::setw(14) << "budget" << c.budget << "\n";
    out << "  " << std::setw(14) << "oracle" << c.oracle << " [" << c.representation << "]";
    if (c.representation == "exact" && c.oracle.find('/') != std::string::npos)
      out << " ≈ " << ScalarTraits<double>::format(c.oracle_value);
    out << "\n";
    for (const auto& b : c.bounds)
      out << "  bound " << std::setw(30) << b.name << " " << std::setw(12) << ScalarTraits<double>::format(b.bound.value)
          << " " << to_string(b.verdict) << "\n";
    for (const auto& [key, value] : c.extras) out << "  " << std::setw(14) << key << value << "\n";
    out << "  " << std::setw(14) << "verdict" << to_string(c.verdict);
    if (!c.note.empty()) out << "  (" << c.note << ")";
    out << "\n";
  }
  out << "overall: " << to_string(overall()) << "\n";
  return out.str();
}

}  // namespace dptlab
