#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "twistforge/pipelines.hpp"
#include "twistforge/qfactor.hpp"
#include "twistforge/twistgen.hpp"

namespace py = pybind11;
using namespace twistforge;

namespace {

// Documents cross the boundary as JSON text; the package wraps them with
// the json module.
json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
}

std::string report_json(const RunReport& R) {
  json j = R.to_json();
  j["exit_code"] = R.exit_code();
  return j.dump();
}

}  // namespace

PYBIND11_MODULE(_twistforge, m) {
  m.doc() = "exact descent, twist and smoothness certificates";

  // Translators registered later are tried first.
  auto& error = py::register_exception<Error>(m, "TwistforgeError");
  py::register_exception<ParseError>(m, "MalformedInput", error.ptr());

  m.def("verify_paper_example", [](const std::string& which, const std::string& params) {
    return report_json(verify_paper_example(which, parse(params)));
  });
  m.def("run_check", [](const std::string& check, const std::vector<std::string>& docs, const std::string& flags) {
    std::vector<json> parsed;
    for (const auto& d : docs) parsed.push_back(parse(d));
    return report_json(run_check(check, parsed, parse(flags)));
  });
  m.def("recheck", [](const std::string& report) { return report_json(recheck(parse(report))); });
  m.def("certify_smooth", [](const std::string& form) {
    HomForm F = HomForm::from_json(parse(form));
    return certify_smooth(F).to_json(*F.field()).dump();
  });
  m.def("diagonal_twist", [](const std::string& form, const std::string& psi, const std::string& b) {
    DiagonalAutomorphism A = DiagonalAutomorphism::from_json(parse(psi));
    HomForm F = HomForm::from_json(parse(form), A.field);
    FieldPtr k = common_field(F.field(), A.field);
    return diagonal_twist(F, A, NFElem(k, k->elem_from_json(parse(b)))).to_json().dump();
  });
  m.def("factor_over_q", [](const std::vector<std::string>& coeffs) {
    std::vector<Rational> c;
    for (const auto& s : coeffs) c.push_back(parse_rational(s));
    QFactorization f = factor_over_Q(UPoly::over_q(c));
    std::vector<std::pair<std::vector<std::string>, int>> out;
    for (const auto& q : f.factors) {
      std::vector<std::string> cs;
      for (const auto& x : q.factor.coeffs) cs.push_back(to_string(x.q()));
      out.emplace_back(cs, q.multiplicity);
    }
    return py::make_tuple(to_string(f.unit), out);
  });
  m.def("fnv1a_hex", &fnv1a_hex);
}
