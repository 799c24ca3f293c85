#include "hodgelab/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "hodgelab/errors.hpp"

namespace hodgelab {

using nlohmann::ordered_json;

namespace {

const char* kind_name(SpectrumKind k) {
  switch (k) {
    case SpectrumKind::coexact: return "coexact";
    case SpectrumKind::exact: return "exact";
    case SpectrumKind::full: return "full";
  }
  return "?";
}

}  // namespace

ordered_json report_json(const IdentityReport& r) {
  return ordered_json{{"type", "identity"},
                      {"name", r.name},
                      {"domain", r.domain},
                      {"degree", r.degree},
                      {"seed", r.seed},
                      {"quad_order", r.quad_order},
                      {"lhs", r.lhs},
                      {"rhs", r.rhs},
                      {"rel_residual", r.rel_residual},
                      {"tolerance", r.tolerance},
                      {"pass", r.pass}};
}

ordered_json report_json(const SpectrumResult& r) {
  ordered_json j{{"type", "spectrum"},
                 {"mesh", r.mesh},
                 {"weight", r.weight},
                 {"degree", r.degree},
                 {"kind", kind_name(r.kind)},
                 {"h", r.h},
                 {"eigenvalues", r.eigenvalues},
                 {"residuals", r.residuals}};
  if (!r.projected.empty()) j["projected"] = r.projected;
  return j;
}

ordered_json report_json(const SteklovResult& r) {
  return ordered_json{{"type", "steklov"},
                      {"boundary_mesh", r.boundary_mesh},
                      {"weight", r.weight},
                      {"degree", r.degree},
                      {"h", r.h},
                      {"sigma", r.sigma},
                      {"residuals", r.residuals},
                      {"coclosed_dim", r.coclosed_dim},
                      {"harmonic_trace_dim", r.harmonic_trace_dim},
                      {"include_boundary_harmonics", r.include_boundary_harmonics}};
}

ordered_json report_json(const TheoremCheck& r) {
  ordered_json consts = ordered_json::array();
  for (const auto& c : r.constants)
    consts.push_back(ordered_json{
        {"name", c.name}, {"value", c.value}, {"provenance", c.provenance}});
  return ordered_json{{"type", "theorem"},
                      {"case", r.theorem_id},
                      {"constants", consts},
                      {"computed", r.computed},
                      {"bound", r.bound},
                      {"margin", r.margin},
                      {"tol_rel", r.tol_rel},
                      {"hypotheses_ok", r.hypotheses_ok},
                      {"violations", r.violations},
                      {"pass", r.pass},
                      {"note", r.note}};
}

ordered_json report_json(const DualityReport& r) {
  ordered_json pairs = ordered_json::array();
  for (const auto& p : r.pairs)
    pairs.push_back(ordered_json{{"p", p.p},
                                 {"coexact", p.coexact},
                                 {"exact_next", p.exact_next},
                                 {"exact_dual", p.exact_dual},
                                 {"rel_next", p.rel_next},
                                 {"rel_dual", p.rel_dual}});
  return ordered_json{{"type", "duality"},
                      {"mesh", r.mesh},
                      {"weight", r.weight},
                      {"tol_rel", r.tol_rel},
                      {"pairs", pairs},
                      {"max_rel_next", r.max_rel_next},
                      {"max_rel_dual", r.max_rel_dual},
                      {"pass_next", r.pass_next},
                      {"pass_dual", r.pass_dual}};
}

ordered_json report_json(const TraceReport& r) {
  return ordered_json{{"type", "trace"},
                      {"points", r.points},
                      {"res_laplacian", r.res_laplacian},
                      {"res_dirsum", r.res_dirsum},
                      {"res_gradsum", r.res_gradsum},
                      {"tol", r.tol},
                      {"pass", r.pass}};
}

void write_text_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp + "' for writing");
    out << text;
    if (!out.flush()) throw Error("write to '" + tmp + "' failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error("rename of '" + tmp + "' onto '" + path + "' failed");
}

}  // namespace hodgelab
