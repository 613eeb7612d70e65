#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dptlab/bounds.hpp"
#include "dptlab/error.hpp"
#include "dptlab/gambling.hpp"
#include "dptlab/hardness.hpp"
#include "dptlab/io.hpp"
#include "dptlab/optimal_dp.hpp"
#include "dptlab/verify.hpp"

namespace py = pybind11;
using namespace dptlab;

namespace {

py::object fraction(const Rational& r) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(to_string(r));
}

// Accepts int, str ("1/4", "0.25") or fractions.Fraction.
Rational rational(const py::handle& value) {
  if (py::isinstance<py::float_>(value))
    throw py::type_error("pass exact values as str, int or Fraction, not float");
  return parse_rational(py::str(value).cast<std::string>());
}

py::object scalar(const Rational& r) { return fraction(r); }
py::object scalar(double d) { return py::float_(d); }

// io::Distribution wrapped so Python sees one class for both representations.
struct Dist {
  io::Distribution mu;
};

Dist make_dist(const py::sequence& weights) {
  bool floats = false;
  for (const auto& w : weights) floats = floats || py::isinstance<py::float_>(w);
  std::size_t n = 0;
  while ((std::size_t{1} << n) < weights.size()) ++n;
  if ((std::size_t{1} << n) != weights.size()) throw Error(ErrorKind::DomainError, "need 2^n weights");
  if (floats) {
    std::vector<double> mass;
    for (const auto& w : weights) mass.push_back(w.cast<double>());
    return {InputDistribution<double>(static_cast<int>(n), std::move(mass))};
  }
  std::vector<Rational> mass;
  for (const auto& w : weights) mass.push_back(rational(w));
  return {InputDistribution<Rational>(static_cast<int>(n), std::move(mass))};
}

py::object optimum(const BooleanTable& f, const Dist& d, std::int64_t budget, const std::string& flavor) {
  return std::visit(
      [&](const auto& mu) -> py::object {
        const int depth = static_cast<int>(std::min<std::int64_t>(budget, 64));
        if (budget < 0) throw Error(ErrorKind::BudgetNegative, "budget must be nonnegative");
        if (flavor == "plain") return scalar(opt_success(f, mu, depth));
        if (flavor == "xor") return scalar(opt_bias_xor(f, mu, depth));
        if (flavor == "zerr") return scalar(opt_success_zerr(f, mu, depth));
        if (flavor == "size") return scalar(opt_success_size(f, mu, budget));
        if (flavor == "search") return scalar(opt_success_search(forcing_set(f), mu, depth));
        throw Error(ErrorKind::DomainError, "unknown flavor " + flavor);
      },
      d.mu);
}

py::object json_loads(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact query-complexity oracles and bound checks";

  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<BooleanTable>(m, "Function")
      .def(py::init<int, int, std::vector<std::uint32_t>>(), py::arg("arity"), py::arg("codomain"), py::arg("values"))
      .def_static("parse", &io::parse_function)
      .def_property_readonly("arity", &BooleanTable::arity)
      .def_property_readonly("codomain", &BooleanTable::codomain)
      .def_property_readonly("values",
                             [](const BooleanTable& f) {
                               return std::vector<std::uint32_t>(f.values().begin(), f.values().end());
                             })
      .def("__call__", &BooleanTable::operator())
      .def("__str__", &io::function_to_string);

  py::class_<Dist>(m, "Distribution")
      .def(py::init(&make_dist), py::arg("weights"))
      .def_static("parse", [](const std::string& text) { return Dist{io::parse_distribution(text)}; })
      .def_static("uniform", [](int n) { return Dist{InputDistribution<Rational>::uniform(n)}; })
      .def_property_readonly("exact",
                             [](const Dist& d) { return std::holds_alternative<InputDistribution<Rational>>(d.mu); })
      .def_property_readonly("arity", [](const Dist& d) { return io::arity_of(d.mu); })
      .def("__str__", [](const Dist& d) { return std::visit([](const auto& mu) { return io::distribution_to_string(mu); }, d.mu); });

  m.def("opt_success", &optimum, py::arg("f"), py::arg("mu"), py::arg("budget"), py::arg("flavor") = "plain",
        "Optimal success (or XOR bias) of a budget-limited tree; Fraction for exact inputs.");

  m.def(
      "dpt_bound",
      [](const py::object& eps, const py::object& alpha, int k) {
        const auto b = dpt_bound(rational(eps), rational(alpha), k);
        return py::dict(py::arg("exact") = b.exact.value, py::arg("relaxed") = b.relaxed.value);
      },
      py::arg("eps"), py::arg("alpha"), py::arg("k"));

  m.def(
      "shaltiel",
      [](int T, const py::object& eps, const py::object& alpha, int k) {
        const Rational e = rational(eps), a = rational(alpha);
        const auto d = shaltiel_alg_success(T, e, a, k);
        py::list solved;
        for (const auto& s : d.solved) solved.append(fraction(s));
        return py::dict(py::arg("exact") = fraction(d.exact), py::arg("lower") = fraction(happyeq_lower(e, a, k)),
                        py::arg("bound") = dpt_bound(e, a, k).exact.value, py::arg("rescues") = d.rescues,
                        py::arg("queries_used") = d.queries_used, py::arg("solved") = solved,
                        py::arg("expected_solved") = fraction(d.expected_solved));
      },
      py::arg("T"), py::arg("eps"), py::arg("alpha"), py::arg("k"));

  m.def(
      "verify",
      [](const std::string& theorem, const BooleanTable& f, const Dist& d, int T, const py::object& alpha, int k,
         const py::object& eta) {
        VerifyInput in;
        const auto t = parse_theorem(theorem);
        if (!t) throw Error(ErrorKind::DomainError, "unknown theorem '" + theorem + "'");
        in.theorem = *t;
        in.f = f;
        in.mu = d.mu;
        in.T = T;
        in.alpha = rational(alpha);
        in.k = k;
        in.eta = rational(eta);
        RunReport report;
        report.command = "python verify";
        report.cells.push_back(verify(in));
        return json_loads(report.to_json());
      },
      py::arg("theorem"), py::arg("f"), py::arg("mu"), py::arg("T"), py::arg("alpha") = 1, py::arg("k") = 2,
      py::arg("eta") = 1, "Runs one theorem check and returns the JSON report as a dict.");

  m.def(
      "yao",
      [](const BooleanTable& f, int T, int iterations, std::uint64_t seed, bool zero_error) {
        YaoOptions opt;
        opt.iterations = iterations;
        opt.seed = seed;
        const auto r = yao_hard_dist(f, T, zero_error ? YaoFlavor::zerr : YaoFlavor::plain, opt);
        return py::dict(py::arg("mu_hat") = r.mu_hat, py::arg("value") = r.value(),
                        py::arg("upper") = fraction(r.upper), py::arg("lower") = fraction(r.lower),
                        py::arg("gap") = fraction(r.gap), py::arg("certificate") = r.certificate);
      },
      py::arg("f"), py::arg("T"), py::arg("iterations") = 1000, py::arg("seed") = 0, py::arg("zero_error") = false);

  m.def(
      "gambling_fuzz",
      [](int count, std::uint64_t seed) {
        const auto s = gambling_fuzz(count, seed);
        return py::dict(py::arg("processes") = s.processes, py::arg("holds") = s.holds,
                        py::arg("violations") = s.violations, py::arg("worst_margin") = fraction(s.worst_margin));
      },
      py::arg("count"), py::arg("seed") = 0);
}
