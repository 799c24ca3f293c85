#include "hodgelab/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hodgelab/domain.hpp"
#include "hodgelab/errors.hpp"
#include "hodgelab/fields.hpp"
#include "hodgelab/identity_lab.hpp"
#include "hodgelab/mesh.hpp"
#include "hodgelab/report.hpp"
#include "hodgelab/spectra.hpp"
#include "hodgelab/whitney.hpp"

namespace hodgelab {

namespace {

using nlohmann::ordered_json;

enum class Origin { kDefault, kFile, kFlag };

struct Entry {
  std::string value;
  int line = 0;
  int col = 0;
  Origin origin = Origin::kDefault;
};

using KeyMap = std::map<std::string, Entry>;

// keys each command accepts; the config validator rejects anything else
const std::map<std::string, std::set<std::string>>& command_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"identities",
       {"domain", "r0", "r1", "weight", "potential", "order", "seed", "cases",
        "points", "tol", "ptol", "out"}},
      {"spectrum",
       {"shape", "level", "n", "lx", "ly", "weight", "p", "k", "kind", "order",
        "seed", "tol", "out"}},
      {"steklov",
       {"shape", "level", "r0", "r1", "weight", "p", "k", "order", "harmonics",
        "seed", "tol", "out"}},
      {"theorem",
       {"case", "domain", "level", "r0", "r1", "weight", "potential", "p", "k",
        "order", "tol", "seed", "harmonics", "out"}},
      {"lp",
       {"embedding", "radius", "weight", "p", "j", "terms", "n", "order", "tol",
        "points", "seed", "trace", "out"}},
      {"convergence",
       {"shape", "level_min", "level_max", "n", "lx", "ly", "weight", "p", "k",
        "kind", "order", "seed", "tol", "out", "csv"}},
  };
  return keys;
}

KeyMap command_defaults(const std::string& cmd) {
  auto e = [](const char* v) { return Entry{v, 0, 0, Origin::kDefault}; };
  if (cmd == "identities")
    return {{"domain", e("ball3")}, {"r0", e("0.5")},      {"r1", e("1")},
            {"weight", e("")},      {"potential", e("")},  {"order", e("12")},
            {"seed", e("2024")},    {"cases", e("20")},    {"points", e("10")},
            {"tol", e("1e-8")},     {"ptol", e("1e-10")},  {"out", e("")}};
  if (cmd == "spectrum")
    return {{"shape", e("icosphere")}, {"level", e("2")},  {"n", e("64")},
            {"lx", e("1")},            {"ly", e("1")},     {"weight", e("")},
            {"p", e("0")},             {"k", e("4")},      {"kind", e("coexact")},
            {"order", e("4")},         {"seed", e("2024")},{"tol", e("1e-8")},
            {"out", e("")}};
  if (cmd == "steklov")
    return {{"shape", e("disc")}, {"level", e("4")},      {"r0", e("0.5")},
            {"r1", e("1")},       {"weight", e("")},      {"p", e("0")},
            {"k", e("6")},        {"order", e("4")},      {"harmonics", e("true")},
            {"seed", e("2024")},  {"tol", e("1e-8")},     {"out", e("")}};
  if (cmd == "theorem")
    return {{"case", e("thm1.2")}, {"domain", e("ball3")}, {"level", e("2")},
            {"r0", e("0.5")},      {"r1", e("1")},         {"weight", e("")},
            {"potential", e("")},  {"p", e("1")},          {"k", e("5")},
            {"order", e("8")},     {"tol", e("0.05")},     {"seed", e("2024")},
            {"harmonics", e("true")}, {"out", e("")}};
  if (cmd == "lp")
    return {{"embedding", e("circle")}, {"radius", e("1")}, {"weight", e("")},
            {"p", e("1")},              {"j", e("1")},      {"terms", e("0")},
            {"n", e("128")},            {"order", e("6")},  {"tol", e("0.02")},
            {"points", e("25")},        {"seed", e("7")},   {"trace", e("true")},
            {"out", e("")}};
  if (cmd == "convergence")
    return {{"shape", e("icosphere")}, {"level_min", e("0")}, {"level_max", e("3")},
            {"n", e("8")},             {"lx", e("1")},        {"ly", e("1")},
            {"weight", e("")},         {"p", e("0")},         {"k", e("4")},
            {"kind", e("coexact")},    {"order", e("4")},     {"seed", e("2024")},
            {"tol", e("1e-8")},        {"out", e("")},        {"csv", e("")}};
  throw ConfigError("unknown command '" + cmd + "'", 0, 0);
}

// --- config file -------------------------------------------------------------

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// flat `key = value` lines grouped by optional `[command]` sections; keys
// before the first section apply to every command that knows them
void apply_config_file(const std::string& path, const std::string& cmd, KeyMap& km) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'", 0, 0);

  const auto& keysets = command_keys();
  const auto& own = keysets.at(cmd);
  std::string section;  // empty = global scope
  std::string raw;
  int lineno = 0;
  std::map<std::string, Entry> global, scoped;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("unterminated section header", lineno, 1);
      section = trim(line.substr(1, line.size() - 2));
      if (keysets.find(section) == keysets.end())
        throw ConfigError("unknown section '" + section + "'", lineno, 2);
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value'", lineno,
                        static_cast<int>(raw.find_first_not_of(" \t") + 1));
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    const int col = static_cast<int>(raw.find(key) + 1);
    if (key.empty()) throw ConfigError("empty key", lineno, col);

    if (section.empty()) {
      bool known = false;
      for (const auto& [c, ks] : keysets) known = known || ks.count(key) > 0;
      if (!known) throw ConfigError("unknown key '" + key + "'", lineno, col);
      if (own.count(key)) global[key] = {val, lineno, col, Origin::kFile};
    } else if (section == cmd) {
      if (!own.count(key))
        throw ConfigError("key '" + key + "' not valid for command '" + cmd + "'",
                          lineno, col);
      scoped[key] = {val, lineno, col, Origin::kFile};
    } else {
      if (!keysets.at(section).count(key))
        throw ConfigError("key '" + key + "' not valid for section '" + section + "'",
                          lineno, col);
    }
  }
  for (const auto& [k, v] : global) km[k] = v;
  for (const auto& [k, v] : scoped) km[k] = v;  // section beats global
}

// --- typed getters ------------------------------------------------------------

[[noreturn]] void bad_value(const std::string& key, const Entry& e,
                            const std::string& want) {
  throw ConfigError("value '" + e.value + "' for '" + key + "' is not " + want,
                    e.line, e.col);
}

const Entry& entry(const KeyMap& km, const std::string& key) {
  auto it = km.find(key);
  if (it == km.end()) throw ConfigError("missing key '" + key + "'", 0, 0);
  return it->second;
}

std::string get_str(const KeyMap& km, const std::string& key) {
  return entry(km, key).value;
}

int get_int(const KeyMap& km, const std::string& key) {
  const Entry& e = entry(km, key);
  try {
    std::size_t used = 0;
    const int v = std::stoi(e.value, &used);
    if (used != e.value.size()) bad_value(key, e, "an integer");
    return v;
  } catch (const std::logic_error&) {
    bad_value(key, e, "an integer");
  }
}

double get_double(const KeyMap& km, const std::string& key) {
  const Entry& e = entry(km, key);
  try {
    std::size_t used = 0;
    const double v = std::stod(e.value, &used);
    if (used != e.value.size()) bad_value(key, e, "a number");
    return v;
  } catch (const std::logic_error&) {
    bad_value(key, e, "a number");
  }
}

bool get_bool(const KeyMap& km, const std::string& key) {
  const Entry& e = entry(km, key);
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  bad_value(key, e, "a boolean (true/false)");
}

// parse a field string, rethrowing with the config location of the key
ScalarField get_field(const KeyMap& km, const std::string& key, int dim,
                      double fallback) {
  const Entry& e = entry(km, key);
  if (e.value.empty()) return ScalarField::constant(fallback);
  try {
    return parse_field(e.value, dim);
  } catch (const ParseError& pe) {
    // file-origin keys point at the config file, flag values at the string itself
    if (e.line > 0)
      throw ConfigError("field '" + key + "': " + pe.what(), e.line, e.col);
    throw ConfigError("field '" + key + "': " + pe.what(), pe.line, pe.col);
  }
}

bool user_set(const KeyMap& km, const std::string& key) {
  return entry(km, key).origin != Origin::kDefault;
}

// --- shared plumbing -----------------------------------------------------------

FlatDomain named_domain(const KeyMap& km) {
  const std::string d = get_str(km, "domain");
  const double r0 = get_double(km, "r0"), r1 = get_double(km, "r1");
  if (d == "ball2") return FlatDomain::ball(1.0, 2);
  if (d == "ball3") return FlatDomain::ball(1.0, 3);
  if (d == "annulus2") return FlatDomain::annulus(r0, r1, 2);
  if (d == "annulus3") return FlatDomain::annulus(r0, r1, 3);
  throw ConfigError("unknown domain '" + d + "'", entry(km, "domain").line,
                    entry(km, "domain").col);
}

SimplicialComplex named_mesh(const KeyMap& km, int level_override = -1) {
  const std::string s = get_str(km, "shape");
  const int level = level_override >= 0 ? level_override : get_int(km, "level");
  if (s == "icosphere") return gen_icosphere(level);
  if (s == "circle") return gen_circle(get_int(km, "n"));
  if (s == "flat_torus") {
    const int n = get_int(km, "n");
    return gen_flat_torus(n, n, get_double(km, "lx"), get_double(km, "ly"));
  }
  if (s == "disc") return gen_disc(level);
  if (s == "ball3") return gen_ball3(level);
  if (s == "annulus3")
    return gen_annulus3(level, get_double(km, "r0"), get_double(km, "r1"));
  throw ConfigError("unknown shape '" + s + "'", entry(km, "shape").line,
                    entry(km, "shape").col);
}

void require_shape(const KeyMap& km, const std::set<std::string>& allowed) {
  const Entry& e = entry(km, "shape");
  if (!allowed.count(e.value)) {
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    throw ConfigError("shape '" + e.value + "' not supported here (use: " + list + ")",
                      e.line, e.col);
  }
}

struct CommandOutput {
  ordered_json results = ordered_json::array();
  bool pass = true;
  std::string csv;  // only the convergence command fills this
};

// --- commands -------------------------------------------------------------------

CommandOutput run_identities(const KeyMap& km) {
  const FlatDomain dom = named_domain(km);
  const int dim = dom.dim();
  const int order = get_int(km, "order");
  const unsigned long long seed = static_cast<unsigned long long>(get_int(km, "seed"));
  const double tol = get_double(km, "tol");
  const ScalarField f = get_field(km, "weight", dim, 0.0);
  const ScalarField V = get_field(km, "potential", dim, 1.0);

  std::vector<IdentityReport> reports =
      pointwise_suite(dim, get_int(km, "cases"), seed, get_double(km, "ptol"));

  // integral identities with the configured weight/potential on seeded forms
  std::mt19937_64 rng(seed);
  VectorField F;
  for (int a = 0; a < dim; ++a) F.comps.push_back(random_polynomial(dim, 2, rng));
  std::vector<IdentityReport> integral;
  for (int r = 0; r + 1 <= dim; ++r) {
    const PFormField w = random_form(dim, r, 2, rng);
    const PFormField psi = random_form(dim, r + 1, 2, rng);
    integral.push_back(check_green(dom, w, psi, f, order));
  }
  for (int p = 0; p <= dim; ++p) {
    const PFormField w = random_form(dim, p, 2, rng);
    integral.push_back(check_green_laplacian(dom, w, f, order));
    if (p <= dim - 1) integral.push_back(check_pohozhaev(dom, w, F, f, order));
    for (auto& rep : check_reilly(dom, w, f, V, order)) integral.push_back(rep);
  }
  for (auto& rep : integral) {
    rep.seed = seed;
    rep.tolerance = tol;
    rep.pass = rep.rel_residual < tol;
    reports.push_back(rep);
  }

  for (auto& rep : boundary_split_suite(dom, get_int(km, "points"), seed, tol))
    reports.push_back(rep);

  CommandOutput out;
  for (const auto& rep : reports) {
    out.results.push_back(report_json(rep));
    out.pass = out.pass && rep.pass;
  }
  return out;
}

CommandOutput run_spectrum(const KeyMap& km) {
  require_shape(km, {"icosphere", "circle", "flat_torus"});
  const SimplicialComplex K = named_mesh(km);
  const ScalarField f = get_field(km, "weight", K.ambient_dim, 0.0);
  WeightedComplex W = assemble(K, f, get_int(km, "order"));
  const int p = get_int(km, "p");
  const int k = get_int(km, "k");
  const std::string kind = get_str(km, "kind");

  CommandOutput out;
  if (kind == "duality") {
    const double tol = user_set(km, "tol") ? get_double(km, "tol") : 1e-7;
    DualityReport rep = check_duality(W, tol);
    out.results.push_back(report_json(rep));
    out.pass = rep.pass_next && rep.pass_dual;
    return out;
  }

  SpectrumResult s;
  if (kind == "coexact")
    s = coexact_spectrum(W, p, k);
  else if (kind == "exact")
    s = exact_spectrum(W, p, k);
  else if (kind == "full")
    s = full_spectrum(W, p, k);
  else
    throw ConfigError("unknown kind '" + kind + "'", entry(km, "kind").line,
                      entry(km, "kind").col);
  out.results.push_back(report_json(s));
  const double tol = get_double(km, "tol");
  for (double r : s.residuals) out.pass = out.pass && r <= tol;
  return out;
}

CommandOutput run_steklov(const KeyMap& km) {
  require_shape(km, {"disc", "ball3", "annulus3"});
  const SimplicialComplex K = named_mesh(km);
  const ScalarField f = get_field(km, "weight", K.ambient_dim, 0.0);
  WeightedComplex W = assemble(K, f, get_int(km, "order"));
  SteklovResult s = steklov_spectrum(W, get_int(km, "p"), get_int(km, "k"),
                                     get_bool(km, "harmonics"));
  CommandOutput out;
  out.results.push_back(report_json(s));
  const double tol = get_double(km, "tol");
  for (double r : s.residuals) out.pass = out.pass && r <= tol;
  return out;
}

CommandOutput run_theorem(const KeyMap& km) {
  TheoremConfig cfg;
  cfg.domain = get_str(km, "domain");
  cfg.level = get_int(km, "level");
  cfg.r0 = get_double(km, "r0");
  cfg.r1 = get_double(km, "r1");
  cfg.weight = get_field(km, "weight", 3, 0.0);
  cfg.potential = get_field(km, "potential", 3, 1.0);
  cfg.p = get_int(km, "p");
  cfg.k = get_int(km, "k");
  cfg.quad_order = get_int(km, "order");
  cfg.tol_rel = get_double(km, "tol");
  cfg.seed = static_cast<unsigned>(get_int(km, "seed"));
  cfg.include_boundary_harmonics = get_bool(km, "harmonics");
  if (cfg.domain != "ball3" && cfg.domain != "annulus3")
    throw ConfigError("theorem domains are ball3 and annulus3",
                      entry(km, "domain").line, entry(km, "domain").col);

  TheoremCheck tc = check_theorem(get_str(km, "case"), cfg);
  CommandOutput out;
  out.results.push_back(report_json(tc));
  out.pass = tc.pass;
  return out;
}

CommandOutput run_lp(const KeyMap& km) {
  const std::string name = get_str(km, "embedding");
  int ambient = 0;
  if (name == "circle") ambient = 2;
  else if (name == "clifford") ambient = 4;
  else if (name == "sphere2") ambient = 3;
  else
    throw ConfigError("unknown embedding '" + name + "'",
                      entry(km, "embedding").line, entry(km, "embedding").col);

  const Entry& we = entry(km, "weight");
  const ScalarField w =
      we.value.empty() ? ScalarField() : get_field(km, "weight", ambient, 0.0);
  EmbeddingData E = make_embedding(name, w, get_double(km, "radius"));

  LpConfig cfg;
  cfg.p = get_int(km, "p");
  cfg.j = get_int(km, "j");
  cfg.k_terms = get_int(km, "terms");
  cfg.mesh_n = get_int(km, "n");
  cfg.quad_order = get_int(km, "order");
  cfg.tol_rel = get_double(km, "tol");
  cfg.sample_points = get_int(km, "points");
  cfg.seed = static_cast<unsigned>(get_int(km, "seed"));

  TheoremCheck tc = lp_check(E, cfg);
  CommandOutput out;
  out.results.push_back(report_json(tc));
  out.pass = tc.pass;

  if (get_bool(km, "trace")) {
    PFormField form(E.m, 1);
    for (int s = 0; s < form.ncomp(); ++s)
      form.comp(s) = parse_field(s == 0 ? "sin(x1)+0.5" : "cos(x1)*x2", E.m);
    TraceReport tr = trace_identities(E, form, cfg.sample_points, cfg.seed);
    out.results.push_back(report_json(tr));
    out.pass = out.pass && tr.pass;
  }
  return out;
}

CommandOutput run_convergence(const KeyMap& km) {
  require_shape(km, {"icosphere", "circle", "flat_torus"});
  const std::string shape = get_str(km, "shape");
  const int lmin = get_int(km, "level_min");
  const int lmax = get_int(km, "level_max");
  if (lmin < 0 || lmax < lmin)
    throw ConfigError("need 0 <= level_min <= level_max",
                      entry(km, "level_min").line, entry(km, "level_min").col);
  const int p = get_int(km, "p");
  const int k = get_int(km, "k");
  const int order = get_int(km, "order");
  const double tol = get_double(km, "tol");
  const std::string kind = get_str(km, "kind");
  if (kind != "coexact" && kind != "full")
    throw ConfigError("convergence kind must be coexact or full",
                      entry(km, "kind").line, entry(km, "kind").col);

  CommandOutput out;
  std::ostringstream csv;
  csv << "level,h";
  for (int i = 1; i <= k; ++i) csv << ",lambda_" << i;
  csv << "\n";

  std::vector<std::vector<double>> history;
  for (int level = lmin; level <= lmax; ++level) {
    SimplicialComplex K;
    if (shape == "icosphere") {
      K = gen_icosphere(level);
    } else if (shape == "circle") {
      K = gen_circle(get_int(km, "n") << level);
    } else {
      const int n = get_int(km, "n") << level;
      K = gen_flat_torus(n, n, get_double(km, "lx"), get_double(km, "ly"));
    }
    const ScalarField f = get_field(km, "weight", K.ambient_dim, 0.0);
    WeightedComplex W = assemble(K, f, order);
    SpectrumResult s =
        kind == "full" ? full_spectrum(W, p, k) : coexact_spectrum(W, p, k);
    out.results.push_back(report_json(s));
    for (double r : s.residuals) out.pass = out.pass && r <= tol;

    csv << level << "," << ordered_json(s.h).dump();
    for (int i = 0; i < k; ++i)
      csv << ","
          << (i < static_cast<int>(s.eigenvalues.size())
                  ? ordered_json(s.eigenvalues[i]).dump()
                  : "");
    csv << "\n";
    history.push_back(s.eigenvalues);
  }

  // discrete eigenvalues of these pencils approach the limit from above;
  // record per-index monotonicity under refinement as a diagnostic
  ordered_json mono = ordered_json::array();
  for (int i = 0; i < k; ++i) {
    bool m = true;
    for (std::size_t l = 1; l < history.size(); ++l)
      if (i < static_cast<int>(history[l].size()) &&
          i < static_cast<int>(history[l - 1].size()))
        m = m && history[l][i] <= history[l - 1][i] * (1.0 + 1e-12) + 1e-12;
    mono.push_back(m);
  }
  out.results.push_back(ordered_json{{"type", "monotonicity"}, {"decreasing", mono}});
  out.csv = csv.str();
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  const auto t0 = std::chrono::steady_clock::now();

  CLI::App app{"weighted Hodge laboratory batch runner"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "flat key=value config file");

  // every key doubles as a flag; flags override config-file values
  std::map<std::string, std::map<std::string, std::string>> flag_vals;
  std::map<std::string, std::map<std::string, CLI::Option*>> flag_opts;
  for (const auto& [cmd, keys] : command_keys()) {
    CLI::App* sub = app.add_subcommand(cmd);
    sub->add_option("--config", config_path, "flat key=value config file");
    for (const auto& key : keys) {
      std::string flag = "--" + key;
      for (auto& ch : flag) if (ch == '_') ch = '-';
      flag_opts[cmd][key] = sub->add_option(flag, flag_vals[cmd][key]);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();

  try {
    KeyMap km = command_defaults(cmd);
    if (!config_path.empty()) apply_config_file(config_path, cmd, km);
    for (const auto& [key, opt] : flag_opts[cmd])
      if (opt->count() > 0) km[key] = {flag_vals[cmd][key], 0, 0, Origin::kFlag};

    CommandOutput res;
    if (cmd == "identities") res = run_identities(km);
    else if (cmd == "spectrum") res = run_spectrum(km);
    else if (cmd == "steklov") res = run_steklov(km);
    else if (cmd == "theorem") res = run_theorem(km);
    else if (cmd == "lp") res = run_lp(km);
    else res = run_convergence(km);

    ordered_json doc;
    doc["schema_version"] = kReportSchemaVersion;
    doc["conventions"] = kConventionLedger;
    doc["command"] = cmd;
    doc["seed"] = get_int(km, "seed");
    ordered_json echo;
    for (const auto& [key, e] : km) echo[key] = e.value;  // km is sorted
    doc["config"] = echo;
    doc["results"] = res.results;
    doc["pass"] = res.pass;
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    doc["wall_time_s"] = dt.count();

    const std::string text = doc.dump(2) + "\n";
    const std::string out_path = get_str(km, "out");
    if (out_path.empty()) {
      std::cout << text;
    } else {
      write_text_atomic(out_path, text);
      std::cout << (res.pass ? "pass" : "FAIL") << " -> " << out_path << "\n";
    }
    if (!res.csv.empty()) {
      const std::string csv_path =
          km.count("csv") && !km["csv"].value.empty() ? km["csv"].value : "";
      if (!csv_path.empty()) write_text_atomic(csv_path, res.csv);
    }
    return res.pass ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace hodgelab
