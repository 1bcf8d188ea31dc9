#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "unialg/algebra.hpp"
#include "unialg/cli.hpp"
#include "unialg/congruence.hpp"
#include "unialg/free_algebra.hpp"
#include "unialg/io.hpp"
#include "unialg/pseudovariety.hpp"
#include "unialg/verify.hpp"

namespace py = pybind11;
using namespace unialg;

namespace {

FiniteAlgebra make_algebra(const std::string& name, std::size_t size,
                           const std::vector<std::pair<std::string, std::size_t>>& symbols,
                           std::vector<std::vector<Element>> tables) {
  std::vector<OperationSymbol> sig;
  for (const auto& [s, arity] : symbols) {
    sig.push_back({s, arity});
  }
  return FiniteAlgebra(name, Signature(std::move(sig)), size, std::move(tables));
}

py::dict membership(const FiniteAlgebra& b, const std::vector<FiniteAlgebra>& generators) {
  const auto r = member(b, generators);
  py::dict out;
  out["member"] = r.member;
  out["verified"] = verify_certificate(b, generators, r.certificate).empty();
  if (const auto* p = std::get_if<PositiveCertificate>(&r.certificate)) {
    out["kind"] = "positive";
    out["tuple"] = p->tuple;
    out["kernel"] = p->kernel.labels();
  } else if (const auto* n = std::get_if<NegativeCertificate>(&r.certificate)) {
    out["kind"] = "negative";
    out["tuple"] = n->tuple;
    out["lhs"] = n->lhs.to_string(b.signature());
    out["rhs"] = n->rhs.to_string(b.signature());
  }
  return out;
}

py::tuple run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Finite universal algebra: free algebras, congruences, pseudovariety membership.";

  auto base_error = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", base_error.ptr());
  py::register_exception<ResourceLimitError>(m, "ResourceLimitError", base_error.ptr());

  py::class_<FiniteAlgebra>(m, "FiniteAlgebra")
      .def(py::init(&make_algebra), py::arg("name"), py::arg("size"), py::arg("symbols"),
           py::arg("tables"))
      .def_property_readonly("name", &FiniteAlgebra::name)
      .def_property_readonly("size", &FiniteAlgebra::size)
      .def_property_readonly("tables", &FiniteAlgebra::tables)
      .def("__eq__", [](const FiniteAlgebra& a, const FiniteAlgebra& b) { return a == b; })
      .def("__repr__", [](const FiniteAlgebra& a) {
        return "<FiniteAlgebra " + a.name() + " of size " + std::to_string(a.size()) + ">";
      });

  m.def("parse_algebra", [](const std::string& text) { return parse_algebra(text, "<string>"); },
        py::arg("text"));
  m.def("load_algebra", &parse_algebra_file, py::arg("path"));
  m.def("serialize_algebra", &serialize_algebra, py::arg("algebra"));

  m.def(
      "free_algebra_size",
      [](std::size_t k, const std::vector<FiniteAlgebra>& base) {
        return free_algebra(k, base).size();
      },
      py::arg("k"), py::arg("base"));
  m.def(
      "congruences",
      [](const FiniteAlgebra& a) {
        std::vector<std::vector<std::uint32_t>> out;
        for (const auto& p : congruence_lattice(a)) {
          out.push_back(p.labels());
        }
        return out;
      },
      py::arg("algebra"), "Congruences as canonical class labels, finest first.");
  m.def("member", &membership, py::arg("algebra"), py::arg("generators"),
        "Decide membership in the pseudovariety generated by `generators`.");
  m.def(
      "verify_pointwise",
      [](const FiniteAlgebra& a, std::size_t k) {
        return verify_pointwise_uniformity(a, k).passed();
      },
      py::arg("algebra"), py::arg("k"));
  m.def(
      "verify_correspondence",
      [](const std::vector<FiniteAlgebra>& base, std::size_t size_bound, std::size_t arity_bound,
         std::size_t tuple_bound) {
        CorrespondenceOptions options;
        options.size_bound = size_bound;
        options.arity_bound = arity_bound;
        options.tuple_bound = tuple_bound;
        return verify_correspondence(base, options).passed();
      },
      py::arg("base"), py::arg("size_bound") = 7, py::arg("arity_bound") = 3,
      py::arg("tuple_bound") = 3);
  m.def("run_cli", &run_cli, py::arg("args"),
        "Run the command-line tool in process; returns (exit code, stdout, stderr).");
}
