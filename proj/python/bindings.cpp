// Python bindings for the core operations. Report structs cross the boundary
// as plain dicts produced from the same serializers the CLI uses, so the
// python surface and the JSON reports share one schema.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hodgelab/eig.hpp"
#include "hodgelab/errors.hpp"
#include "hodgelab/fields.hpp"
#include "hodgelab/identity_lab.hpp"
#include "hodgelab/mesh.hpp"
#include "hodgelab/report.hpp"
#include "hodgelab/smooth_ops.hpp"
#include "hodgelab/spectra.hpp"
#include "hodgelab/whitney.hpp"

namespace py = pybind11;
using namespace hodgelab;

namespace {

py::object to_py(const nlohmann::ordered_json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

template <typename R>
py::object as_dict(const R& r) {
  return to_py(report_json(r));
}

py::list suite_list(const std::vector<IdentityReport>& rs) {
  py::list out;
  for (const auto& r : rs) out.append(as_dict(r));
  return out;
}

ScalarField field_or_empty(const std::string& text, int dim) {
  return text.empty() ? ScalarField() : parse_field(text, dim);
}

FlatDomain named_domain(const std::string& name, double r0, double r1) {
  if (name == "ball2") return FlatDomain::ball(1.0, 2);
  if (name == "ball3") return FlatDomain::ball(1.0, 3);
  if (name == "annulus2") return FlatDomain::annulus(r0, r1, 2);
  if (name == "annulus3") return FlatDomain::annulus(r0, r1, 3);
  throw UnsupportedShape("unknown domain '" + name +
                         "' (ball2|ball3|annulus2|annulus3)");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "weighted Hodge-theory verification kernels";

  // translators run newest-first: the base class must be registered before
  // the more specific ParseError or it would shadow it
  py::register_exception<Error>(m, "HodgeLabError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "FieldParseError", PyExc_ValueError);

  m.attr("schema_version") = kReportSchemaVersion;
  m.attr("conventions") = kConventionLedger;

  // --- fields ---------------------------------------------------------------
  py::class_<ScalarField>(m, "ScalarField")
      .def_static("constant", &ScalarField::constant)
      .def("value", &ScalarField::value, py::arg("x"))
      .def("deriv", &ScalarField::deriv, py::arg("i"))
      .def("is_constant", &ScalarField::is_constant)
      .def("__str__", &ScalarField::to_string)
      .def("__repr__", [](const ScalarField& f) {
        return "ScalarField(" + (f.valid() ? f.to_string() : std::string("<empty>")) + ")";
      });

  m.def("parse_field", &parse_field, py::arg("text"), py::arg("dim"),
        "Parse an expression over coordinates x1..x<dim> (also r2, sin, cos, "
        "exp, sqrt, pow).");

  // --- meshes ---------------------------------------------------------------
  py::class_<SimplicialComplex>(m, "SimplicialComplex")
      .def_readonly("name", &SimplicialComplex::name)
      .def_readonly("ambient_dim", &SimplicialComplex::ambient_dim)
      .def_readonly("top_dim", &SimplicialComplex::top_dim)
      .def_readonly("vertices", &SimplicialComplex::vertices)
      .def("count", &SimplicialComplex::count, py::arg("k"))
      .def("euler_characteristic", &SimplicialComplex::euler_characteristic)
      .def("__repr__", [](const SimplicialComplex& K) {
        return "SimplicialComplex(" + K.name + ")";
      });

  m.def("icosphere", &gen_icosphere, py::arg("level"));
  m.def("circle", &gen_circle, py::arg("nseg"));
  m.def("flat_torus", &gen_flat_torus, py::arg("nx"), py::arg("ny"),
        py::arg("wx") = 1.0, py::arg("wy") = 1.0);
  m.def("disc", &gen_disc, py::arg("level"));
  m.def("ball3", &gen_ball3, py::arg("level"));
  m.def("annulus3", &gen_annulus3, py::arg("level"), py::arg("r0") = 0.5,
        py::arg("r1") = 1.0);
  m.def("betti", &betti, py::arg("K"));
  m.def("longest_edge", &longest_edge, py::arg("K"));

  // --- weighted complexes -----------------------------------------------------
  py::class_<WeightedComplex>(m, "WeightedComplex")
      .def_readonly("mesh", &WeightedComplex::mesh)
      .def_readonly("quad_order", &WeightedComplex::quad_order);

  m.def(
      "assemble",
      [](const SimplicialComplex& K, const std::string& weight, int quad_order) {
        const ScalarField f = weight.empty()
                                  ? ScalarField::constant(0.0)
                                  : parse_field(weight, K.ambient_dim);
        return assemble(K, f, quad_order);
      },
      py::arg("K"), py::arg("weight") = "", py::arg("quad_order") = 4,
      "Whitney mass matrices with the weight exp(-f) at quadrature points.");

  m.def("harmonic_dim", &harmonic_dim, py::arg("W"), py::arg("p"));

  // --- spectra ---------------------------------------------------------------
  m.def(
      "coexact_spectrum",
      [](const WeightedComplex& W, int p, int k) {
        return as_dict(coexact_spectrum(W, p, k));
      },
      py::arg("W"), py::arg("p"), py::arg("k"));
  m.def(
      "exact_spectrum",
      [](const WeightedComplex& W, int p, int k) {
        return as_dict(exact_spectrum(W, p, k));
      },
      py::arg("W"), py::arg("p"), py::arg("k"));
  m.def(
      "full_spectrum",
      [](const WeightedComplex& W, int p, int k) {
        return as_dict(full_spectrum(W, p, k));
      },
      py::arg("W"), py::arg("p"), py::arg("k"));
  m.def(
      "check_duality",
      [](const WeightedComplex& W, double tol_rel) {
        return as_dict(check_duality(W, tol_rel));
      },
      py::arg("W"), py::arg("tol_rel") = 1e-7);
  m.def(
      "steklov_spectrum",
      [](const WeightedComplex& W, int p, int k, bool harmonics) {
        return as_dict(steklov_spectrum(W, p, k, harmonics));
      },
      py::arg("W"), py::arg("p"), py::arg("k"),
      py::arg("include_boundary_harmonics") = true);

  // --- theorem checks ----------------------------------------------------------
  m.def(
      "check_theorem",
      [](const std::string& case_id, const std::string& domain, int level,
         double r0, double r1, const std::string& weight,
         const std::string& potential, int p, int k, int quad_order,
         double tol_rel, unsigned seed) {
        TheoremConfig cfg;
        cfg.domain = domain;
        cfg.level = level;
        cfg.r0 = r0;
        cfg.r1 = r1;
        cfg.weight = field_or_empty(weight, 3);
        cfg.potential = field_or_empty(potential, 3);
        cfg.p = p;
        cfg.k = k;
        cfg.quad_order = quad_order;
        cfg.tol_rel = tol_rel;
        cfg.seed = seed;
        return as_dict(check_theorem(case_id, cfg));
      },
      py::arg("case_id"), py::arg("domain") = "ball3", py::arg("level") = 2,
      py::arg("r0") = 0.5, py::arg("r1") = 1.0, py::arg("weight") = "",
      py::arg("potential") = "", py::arg("p") = 1, py::arg("k") = 5,
      py::arg("quad_order") = 8, py::arg("tol_rel") = 0.05,
      py::arg("seed") = 2024,
      "case_id in {thm1.2, thm1.3, thm1.5, thm1.6}; weight/potential are "
      "field strings over x1..x3.");

  m.def(
      "lp_check",
      [](const std::string& embedding, const std::string& weight, double radius,
         int p, int j, int k_terms, int mesh_n, int quad_order, double tol_rel,
         int sample_points, unsigned seed) {
        const int ambient = embedding == "clifford" ? 4
                            : embedding == "sphere2" ? 3
                                                     : 2;
        EmbeddingData E =
            make_embedding(embedding, field_or_empty(weight, ambient), radius);
        LpConfig cfg;
        cfg.p = p;
        cfg.j = j;
        cfg.k_terms = k_terms;
        cfg.mesh_n = mesh_n;
        cfg.quad_order = quad_order;
        cfg.tol_rel = tol_rel;
        cfg.sample_points = sample_points;
        cfg.seed = seed;
        return as_dict(lp_check(E, cfg));
      },
      py::arg("embedding"), py::arg("weight") = "", py::arg("radius") = 1.0,
      py::arg("p") = 1, py::arg("j") = 1, py::arg("k_terms") = 0,
      py::arg("mesh_n") = 64, py::arg("quad_order") = 6,
      py::arg("tol_rel") = 0.02, py::arg("sample_points") = 25,
      py::arg("seed") = 7,
      "Eigenvalue-sum bound on a model embedding (circle|clifford|sphere2).");

  // --- identity suites -----------------------------------------------------------
  m.def(
      "pointwise_suite",
      [](int dim, int cases, unsigned long long seed, double tol) {
        return suite_list(pointwise_suite(dim, cases, seed, tol));
      },
      py::arg("dim"), py::arg("cases") = 20, py::arg("seed") = 1,
      py::arg("tol") = 1e-10);
  m.def(
      "integral_suite",
      [](const std::string& domain, double r0, double r1,
         unsigned long long seed, int order, double tol) {
        return suite_list(integral_suite(named_domain(domain, r0, r1), seed,
                                         order, tol));
      },
      py::arg("domain"), py::arg("r0") = 0.5, py::arg("r1") = 1.0,
      py::arg("seed") = 1, py::arg("order") = 12, py::arg("tol") = 1e-8);
  m.def(
      "boundary_split_suite",
      [](const std::string& domain, double r0, double r1, int npoints,
         unsigned long long seed, double tol) {
        return suite_list(boundary_split_suite(named_domain(domain, r0, r1),
                                               npoints, seed, tol));
      },
      py::arg("domain"), py::arg("r0") = 0.5, py::arg("r1") = 1.0,
      py::arg("npoints") = 10, py::arg("seed") = 1, py::arg("tol") = 1e-8);
}
