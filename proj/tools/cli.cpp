#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "formcalc/formcalc.hpp"

namespace formcalc::cli {
namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Triple = std::array<std::string, 3>;

struct ParamSpec {
  std::string name, from, to;
};

// Everything a single invocation needs; filled from flags, then from the job
// file, which wins where both set a value.
struct JobSpec {
  std::string operation;
  std::string kind;
  std::string theorem;
  std::optional<int> k;
  std::map<std::string, std::string> coeffs;  // f, M, N, P, S, T, U
  std::optional<Triple> field;
  std::vector<ParamSpec> params;
  std::array<std::optional<std::string>, 3> map;
  int orientation = 1;
  std::optional<std::array<std::string, 6>> box;
  std::optional<Triple> base;
  std::vector<Triple> points;
  std::vector<Triple> rows;
  std::optional<int> order;
  std::optional<int> subdivisions;
  std::optional<double> tol;
  std::optional<double> zero_tol;
  std::string output = "text";
  int n = 5;
};

// ---- formatting -----------------------------------------------------------

std::string fmt(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v == 0.0 ? 0.0 : v);
  return std::string(buf, r.ptr);
}

std::string fmt17(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

// ---- input parsing --------------------------------------------------------

std::string trim(std::string s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, std::size_t count, const char* what) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(trim(item));
  if (!text.empty() && text.back() == ',') parts.emplace_back();
  if (parts.size() != count) {
    throw UsageError(std::string(what) + " expects " + std::to_string(count) +
                     " comma-separated values, got '" + text + "'");
  }
  return parts;
}

template <std::size_t N>
std::array<std::string, N> split_array(const std::string& text, const char* what) {
  auto v = split(text, N, what);
  std::array<std::string, N> a;
  std::copy(v.begin(), v.end(), a.begin());
  return a;
}

Expr expr(const std::string& text, const std::string& what) {
  try {
    return parse_expr(text);
  } catch (const ParseError& e) {
    throw ParseError(what + " '" + text + "': " + e.what(), e.offset(), e.expected());
  }
}

// A constant expression such as "2*pi".
double number(const std::string& text, const std::string& what) {
  Expr e = expr(text, what);
  auto free = free_variables(e);
  if (!free.empty()) {
    throw UsageError(what + " '" + text + "' must be a constant, found variable '" +
                     *free.begin() + "'");
  }
  return eval(e, {});
}

// Coefficient expression in x, y, z.
Expr coefficient(const std::string& text, const std::string& what) {
  Expr e = expr(text, what);
  for (const auto& v : free_variables(e)) {
    if (v != "x" && v != "y" && v != "z") {
      throw UsageError(what + " '" + text + "' uses '" + v + "'; only x, y, z are allowed");
    }
  }
  return e;
}

std::string json_scalar(const json& v, const char* what) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return fmt(v.get<double>());
  throw UsageError(std::string("job: ") + what + " must be a number or a string");
}

template <std::size_t N>
std::array<std::string, N> json_array(const json& v, const char* what) {
  if (!v.is_array() || v.size() != N) {
    throw UsageError(std::string("job: ") + what + " must be an array of " + std::to_string(N));
  }
  std::array<std::string, N> a;
  for (std::size_t i = 0; i < N; ++i) a[i] = json_scalar(v[i], what);
  return a;
}

void overlay(JobSpec& job, const json& j) {
  if (!j.is_object()) throw UsageError("job: top level must be an object");
  static const std::set<std::string> known{"operation", "kind",  "theorem", "k",      "form",
                                           "field",     "chain", "box",     "base",   "points",
                                           "rows",      "config", "output", "n"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw UsageError("job: unknown key '" + key + "'");
  }
  if (j.contains("operation")) job.operation = j["operation"].get<std::string>();
  if (j.contains("kind")) job.kind = j["kind"].get<std::string>();
  if (j.contains("theorem")) job.theorem = j["theorem"].get<std::string>();
  if (j.contains("k")) job.k = j["k"].get<int>();
  if (j.contains("form")) {
    static const std::set<std::string> names{"f", "M", "N", "P", "S", "T", "U"};
    for (const auto& [key, v] : j["form"].items()) {
      if (!names.contains(key)) throw UsageError("job: unknown form coefficient '" + key + "'");
      job.coeffs[key] = json_scalar(v, "form coefficient");
    }
  }
  if (j.contains("field")) job.field = json_array<3>(j["field"], "field");
  if (j.contains("chain")) {
    const json& c = j["chain"];
    if (c.contains("params")) {
      job.params.clear();
      for (const json& p : c["params"]) {
        job.params.push_back({p.at("name").get<std::string>(), json_scalar(p.at("from"), "from"),
                              json_scalar(p.at("to"), "to")});
      }
    }
    if (c.contains("map")) {
      auto m = json_array<3>(c["map"], "chain.map");
      for (int i = 0; i < 3; ++i) job.map[i] = m[i];
    }
    if (c.contains("orientation")) job.orientation = c["orientation"].get<int>();
  }
  if (j.contains("box")) job.box = json_array<6>(j["box"], "box");
  if (j.contains("base")) job.base = json_array<3>(j["base"], "base");
  if (j.contains("points")) {
    job.points.clear();
    for (const json& p : j["points"]) job.points.push_back(json_array<3>(p, "points"));
  }
  if (j.contains("rows")) {
    job.rows.clear();
    for (const json& r : j["rows"]) job.rows.push_back(json_array<3>(r, "rows"));
  }
  if (j.contains("config")) {
    const json& c = j["config"];
    if (c.contains("gauss_order")) job.order = c["gauss_order"].get<int>();
    if (c.contains("subdivisions")) job.subdivisions = c["subdivisions"].get<int>();
    if (c.contains("tol")) job.tol = c["tol"].get<double>();
    if (c.contains("zero_tol")) job.zero_tol = c["zero_tol"].get<double>();
  }
  if (j.contains("output")) job.output = j["output"].get<std::string>();
  if (j.contains("n")) job.n = j["n"].get<int>();
}

// ---- building library objects ---------------------------------------------

DomainBox make_box(const JobSpec& job) {
  if (!job.box) return DomainBox::cube(-10, 10);
  std::array<double, 6> b{};
  for (int i = 0; i < 6; ++i) b[i] = number((*job.box)[i], "--box");
  return {{b[0], b[1]}, {b[2], b[3]}, {b[4], b[5]}};
}

QuadConfig make_config(const JobSpec& job) {
  QuadConfig cfg;
  if (job.order) cfg.gauss_order = *job.order;
  if (job.subdivisions) cfg.subdivisions = *job.subdivisions;
  if (job.zero_tol) cfg.zero_tol = *job.zero_tol;
  if (job.tol) cfg.potential_tol = *job.tol;
  if (const char* seed = std::getenv("FORMCALC_SEED")) {
    std::string s = seed;
    auto r = std::from_chars(s.data(), s.data() + s.size(), cfg.zero_seed);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size()) {
      throw UsageError("FORMCALC_SEED must be a non-negative integer, got '" + s + "'");
    }
  }
  cfg.validate();
  return cfg;
}

double verify_tol(const JobSpec& job) { return job.tol.value_or(kDefaultVerifyTol); }

json config_json(const QuadConfig& cfg, double tol) {
  return {{"gauss_order", cfg.gauss_order},
          {"subdivisions", cfg.subdivisions},
          {"tol", tol},
          {"zero_tol", cfg.zero_tol}};
}

// Rejects coefficients the operation does not use.
void only_coeffs(const JobSpec& job, const std::string& allowed, bool field_ok,
                 const std::string& op) {
  for (const auto& [name, _] : job.coeffs) {
    if (allowed.find(name) == std::string::npos) {
      throw UsageError(op + " does not take coefficient -" + name);
    }
  }
  if (job.field && !field_ok) throw UsageError(op + " does not take --field");
}

Expr require_coeff(const JobSpec& job, const std::string& name, const std::string& op) {
  auto it = job.coeffs.find(name);
  if (it == job.coeffs.end()) throw UsageError(op + " requires -" + name);
  return coefficient(it->second, "-" + name);
}

// Three coefficients from --field, or from the named flags (either "MNP" or
// "STU" when both are acceptable).
std::array<Expr, 3> triple(const JobSpec& job, const std::vector<std::string>& sets,
                           const std::string& op) {
  std::string allowed;
  for (const auto& s : sets) allowed += s;
  only_coeffs(job, allowed, true, op);
  if (job.field) {
    if (!job.coeffs.empty()) throw UsageError(op + ": give either --field or coefficients");
    return {coefficient((*job.field)[0], "--field"), coefficient((*job.field)[1], "--field"),
            coefficient((*job.field)[2], "--field")};
  }
  for (const auto& s : sets) {
    if (job.coeffs.contains(s.substr(0, 1)) || job.coeffs.contains(s.substr(1, 1)) ||
        job.coeffs.contains(s.substr(2, 1))) {
      return {require_coeff(job, s.substr(0, 1), op), require_coeff(job, s.substr(1, 1), op),
              require_coeff(job, s.substr(2, 1), op)};
    }
  }
  throw UsageError(op + " requires --field or -" + sets.front().substr(0, 1) + " -" +
                   sets.front().substr(1, 1) + " -" + sets.front().substr(2, 1));
}

std::array<Expr, 3> chain_map(const JobSpec& job) {
  const char* flags[3] = {"--x", "--y", "--z"};
  std::array<Expr, 3> m{Expr::constant(0), Expr::constant(0), Expr::constant(0)};
  for (int i = 0; i < 3; ++i) {
    if (!job.map[i]) throw UsageError(std::string("chain requires ") + flags[i]);
    m[i] = expr(*job.map[i], flags[i]);
  }
  return m;
}

void require_params(const JobSpec& job, std::size_t count, const std::string& what) {
  if (job.params.size() != count) {
    throw UsageError(what + " needs " + std::to_string(count) + " --param/--from/--to, got " +
                     std::to_string(job.params.size()));
  }
}

Interval range_of(const ParamSpec& p) {
  return {number(p.from, "--from"), number(p.to, "--to")};
}

Path make_path(const JobSpec& job) {
  require_params(job, 1, "a path");
  return Path(job.params[0].name, chain_map(job), range_of(job.params[0]), job.orientation);
}

Surface make_surface(const JobSpec& job) {
  require_params(job, 2, "a surface");
  return Surface({job.params[0].name, job.params[1].name}, chain_map(job),
                 {range_of(job.params[0]), range_of(job.params[1])}, job.orientation);
}

Region make_region(const JobSpec& job) {
  require_params(job, 3, "a region");
  return Region({job.params[0].name, job.params[1].name, job.params[2].name}, chain_map(job),
                {range_of(job.params[0]), range_of(job.params[1]), range_of(job.params[2])},
                job.orientation);
}

Vec3 point(const Triple& t, const char* what) {
  return {number(t[0], what), number(t[1], what), number(t[2], what)};
}

json point_json(const Vec3& p) { return json::array({p.x, p.y, p.z}); }

std::string point_text(const Vec3& p) {
  return "(" + fmt(p.x) + ", " + fmt(p.y) + ", " + fmt(p.z) + ")";
}

bool want_json(const JobSpec& job) { return job.output == "json"; }

// ---- operations -----------------------------------------------------------

int cmd_d(const JobSpec& job, std::ostream& out) {
  if (!job.k) throw UsageError("d requires --k 0, 1 or 2");
  DomainBox box = make_box(job);
  std::string text;
  json coeffs;
  switch (*job.k) {
    case 0: {
      only_coeffs(job, "f", false, "d --k 0");
      Form1 r = d0({require_coeff(job, "f", "d --k 0"), box});
      text = to_string(r);
      coeffs = {{"M", to_string(r.M)}, {"N", to_string(r.N)}, {"P", to_string(r.P)}};
      break;
    }
    case 1: {
      auto c = triple(job, {"MNP"}, "d --k 1");
      Form2 r = d1({c[0], c[1], c[2], box});
      text = to_string(r);
      coeffs = {{"S", to_string(r.S)}, {"T", to_string(r.T)}, {"U", to_string(r.U)}};
      break;
    }
    case 2: {
      auto c = triple(job, {"STU"}, "d --k 2");
      Form3 r = d2({c[0], c[1], c[2], box});
      text = to_string(r);
      coeffs = {{"g", to_string(r.g)}};
      break;
    }
    default: throw UsageError("--k must be 0, 1 or 2");
  }
  if (want_json(job)) {
    out << json{{"operation", "d"}, {"k", *job.k}, {"result", text}, {"coefficients", coeffs}}
               .dump(2)
        << "\n";
  } else {
    out << text << "\n";
  }
  return kOk;
}

int emit_field(const JobSpec& job, const char* op, const VectorField& F, std::ostream& out) {
  if (want_json(job)) {
    out << json{{"operation", op},
                {"result", {to_string(F.i), to_string(F.j), to_string(F.k)}}}
               .dump(2)
        << "\n";
  } else {
    out << to_string(F) << "\n";
  }
  return kOk;
}

int cmd_grad(const JobSpec& job, std::ostream& out) {
  only_coeffs(job, "f", false, "grad");
  return emit_field(job, "grad", gradient({require_coeff(job, "f", "grad"), make_box(job)}), out);
}

int cmd_curl(const JobSpec& job, std::ostream& out) {
  auto c = triple(job, {"MNP"}, "curl");
  return emit_field(job, "curl", curl({c[0], c[1], c[2], make_box(job)}), out);
}

int cmd_div(const JobSpec& job, std::ostream& out) {
  auto c = triple(job, {"MNP", "STU"}, "div");
  Form0 r = divergence({c[0], c[1], c[2], make_box(job)});
  if (want_json(job)) {
    out << json{{"operation", "div"}, {"result", to_string(r.f)}}.dump(2) << "\n";
  } else {
    out << to_string(r.f) << "\n";
  }
  return kOk;
}

std::vector<Vec3> query_points(const JobSpec& job, const DomainBox& box) {
  std::vector<Vec3> pts;
  for (const auto& p : job.points) pts.push_back(point(p, "--at"));
  if (pts.empty()) {
    // A few deterministic interior points.
    for (std::uint64_t i = 1; i <= 5; ++i) {
      auto h = halton3(i);
      std::array<double, 3> c{};
      for (int a = 0; a < 3; ++a) {
        const Interval& iv = box.axis(a);
        c[a] = iv.lo + (0.1 + 0.8 * h[a]) * iv.length();
      }
      pts.push_back({c[0], c[1], c[2]});
    }
  }
  return pts;
}

int cmd_potential(const JobSpec& job, std::ostream& out) {
  std::string kind = job.kind.empty() ? "scalar" : job.kind;
  if (kind != "scalar" && kind != "vector") {
    throw UsageError("potential --kind must be scalar or vector");
  }
  DomainBox box = make_box(job);
  QuadConfig cfg = make_config(job);
  auto c = triple(job, {"MNP", "STU"}, "potential");
  VectorField F{c[0], c[1], c[2], box};
  BasePoint base{box.x.lo + 0.5 * box.x.length(), box.y.lo + 0.5 * box.y.length(),
                 box.z.lo + 0.5 * box.z.length()};
  if (job.base) {
    Vec3 b = point(*job.base, "--base");
    base = {b.x, b.y, b.z};
  }
  std::vector<Vec3> pts = query_points(job, box);

  json rows = json::array();
  bool pass = true;
  std::ostringstream text;
  if (kind == "scalar") {
    ScalarPotential f = scalar_potential(F, base, box, cfg);
    for (const Vec3& q : pts) {
      double v = f(q);
      double r = gradient_residual(f, F, q);
      pass = pass && r <= cfg.potential_tol;
      rows.push_back({{"point", point_json(q)}, {"value", v}, {"residual", r}});
      text << "f" << point_text(q) << " = " << fmt(v) << "  residual " << fmt(r) << "\n";
    }
  } else {
    VectorPotential A = vector_potential(F, base, box, cfg);
    for (const Vec3& q : pts) {
      Vec3 v = A(q);
      double r = curl_residual(A, F, q);
      pass = pass && r <= cfg.potential_tol;
      rows.push_back({{"point", point_json(q)}, {"value", point_json(v)}, {"residual", r}});
      text << "A" << point_text(q) << " = " << point_text(v) << "  residual " << fmt(r) << "\n";
    }
  }
  if (want_json(job)) {
    out << json{{"operation", "potential"},
                {"kind", kind},
                {"base", {base.x, base.y, base.z}},
                {"points", rows},
                {"tol", cfg.potential_tol},
                {"pass", pass}}
               .dump(2)
        << "\n";
  } else {
    out << kind << " potential, base " << point_text({base.x, base.y, base.z}) << "\n"
        << text.str() << (pass ? "pass" : "FAIL: residual exceeds " + fmt(cfg.potential_tol))
        << "\n";
  }
  return pass ? kOk : kFail;
}

int cmd_integrate(const JobSpec& job, std::ostream& out) {
  DomainBox box = make_box(job);
  QuadConfig cfg = make_config(job);
  std::string kind = job.kind;
  double value = 0.0;
  if (kind == "path") {
    auto c = triple(job, {"MNP"}, "integrate --kind path");
    value = integrate_path({c[0], c[1], c[2], box}, make_path(job), cfg);
  } else if (kind == "surface") {
    auto c = triple(job, {"STU"}, "integrate --kind surface");
    value = integrate_surface({c[0], c[1], c[2], box}, make_surface(job), cfg);
  } else if (kind == "volume") {
    only_coeffs(job, "f", false, "integrate --kind volume");
    value = integrate_volume({require_coeff(job, "f", "integrate --kind volume"), box},
                             make_region(job), cfg);
  } else {
    throw UsageError("integrate --kind must be path, surface or volume");
  }
  if (want_json(job)) {
    out << json{{"operation", "integrate"},
                {"kind", kind},
                {"value", value},
                {"config", config_json(cfg, verify_tol(job))}}
               .dump(2)
        << "\n";
  } else {
    out << fmt(value) << "\n";
  }
  return kOk;
}

int cmd_verify(const JobSpec& job, std::ostream& out) {
  DomainBox box = make_box(job);
  QuadConfig cfg = make_config(job);
  double tol = verify_tol(job);
  const std::string& th = job.theorem;
  VerifyReport rep;
  if (th == "ftc") {
    only_coeffs(job, "f", false, "verify ftc");
    rep = verify_ftc({require_coeff(job, "f", "verify ftc"), box}, make_path(job), cfg, tol);
  } else if (th == "stokes") {
    auto c = triple(job, {"MNP"}, "verify stokes");
    rep = verify_stokes({c[0], c[1], c[2], box}, make_surface(job), cfg, tol);
  } else if (th == "green" || th == "plane-div") {
    only_coeffs(job, "MN", false, "verify " + th);
    Expr M = require_coeff(job, "M", "verify " + th);
    Expr N = require_coeff(job, "N", "verify " + th);
    Surface s = make_surface(job);
    rep = th == "green" ? verify_green(M, N, s, cfg, tol)
                        : verify_plane_divergence(M, N, s, cfg, tol);
  } else if (th == "gauss") {
    auto c = triple(job, {"STU"}, "verify gauss");
    rep = verify_gauss({c[0], c[1], c[2], box}, make_region(job), cfg, tol);
  } else {
    throw UsageError("verify --theorem must be ftc, stokes, green, plane-div or gauss");
  }
  if (want_json(job)) {
    out << json{{"theorem", rep.theorem},
                {"lhs", rep.lhs},
                {"rhs", rep.rhs},
                {"abs_err", rep.abs_err},
                {"rel_err", rep.rel_err},
                {"pass", rep.pass},
                {"config", config_json(cfg, tol)}}
               .dump(2)
        << "\n";
  } else {
    out << "theorem  " << rep.theorem << "\n"
        << "lhs      " << fmt(rep.lhs) << "\n"
        << "rhs      " << fmt(rep.rhs) << "\n"
        << "abs_err  " << fmt(rep.abs_err) << "\n"
        << "rel_err  " << fmt(rep.rel_err) << "\n"
        << "tol      " << fmt(rep.tol) << "\n";
    for (const auto& part : rep.diagnostics) {
      out << "  " << part.label << ": " << fmt(part.value) << "\n";
    }
    out << (rep.pass ? "pass" : "FAIL") << "\n";
  }
  return rep.pass ? kOk : kFail;
}

int cmd_sample_field(const JobSpec& job, std::ostream& out, std::ostream& err) {
  if (job.n < 2) throw UsageError("--n must be at least 2");
  DomainBox box = make_box(job);
  auto c = triple(job, {"MNP", "STU"}, "sample-field");
  std::array<Program, 3> prog{Program(c[0], {"x", "y", "z"}), Program(c[1], {"x", "y", "z"}),
                              Program(c[2], {"x", "y", "z"})};
  auto grid = [&](const Interval& iv, int i) {
    return i == job.n - 1 ? iv.hi : iv.lo + iv.length() * i / (job.n - 1);
  };
  std::size_t bad = 0;
  json rows = json::array();
  bool as_json = want_json(job);
  if (!as_json) out << "x,y,z,Fx,Fy,Fz\n";
  for (int i = 0; i < job.n; ++i) {
    for (int j = 0; j < job.n; ++j) {
      for (int k = 0; k < job.n; ++k) {
        double p[3] = {grid(box.x, i), grid(box.y, j), grid(box.z, k)};
        double v[3];
        for (int a = 0; a < 3; ++a) {
          try {
            v[a] = prog[a](std::span<const double>(p, 3));
          } catch (const EvalError&) {
            v[a] = std::nan("");
            ++bad;
          }
        }
        if (as_json) {
          json row = json::array();
          for (double x : p) row.push_back(x);
          for (double x : v) row.push_back(std::isfinite(x) ? json(x) : json(nullptr));
          rows.push_back(row);
        } else {
          out << fmt17(p[0]) << "," << fmt17(p[1]) << "," << fmt17(p[2]) << "," << fmt17(v[0])
              << "," << fmt17(v[1]) << "," << fmt17(v[2]) << "\n";
        }
      }
    }
  }
  if (as_json) {
    out << json{{"columns", {"x", "y", "z", "Fx", "Fy", "Fz"}}, {"rows", rows}}.dump(2) << "\n";
  }
  if (bad) err << "warning: " << bad << " non-finite field values written as nan\n";
  return kOk;
}

int cmd_det(const JobSpec& job, std::ostream& out) {
  if (job.rows.size() != 3) throw UsageError("det requires exactly three --row values");
  Matrix3Sym m{{{Expr::constant(0), Expr::constant(0), Expr::constant(0)},
                {Expr::constant(0), Expr::constant(0), Expr::constant(0)},
                {Expr::constant(0), Expr::constant(0), Expr::constant(0)}}};
  bool numeric = true;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      m[i][j] = expr(job.rows[i][j], "--row");
      numeric = numeric && free_variables(m[i][j]).empty();
    }
  }
  json result;
  std::string text;
  if (numeric) {
    Matrix3 a{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a[i][j] = eval(m[i][j], {});
    double v = det3_num(a);
    text = fmt(v);
    result = v;
  } else {
    text = to_string(det3_sym(m));
    result = text;
  }
  if (want_json(job)) {
    out << json{{"operation", "det"}, {"result", result}}.dump(2) << "\n";
  } else {
    out << text << "\n";
  }
  return kOk;
}

int dispatch(const JobSpec& job, std::ostream& out, std::ostream& err) {
  if (job.output != "text" && job.output != "json" && job.output != "csv") {
    throw UsageError("output must be text, json or csv");
  }
  const std::string& op = job.operation;
  if (op == "d") return cmd_d(job, out);
  if (op == "grad") return cmd_grad(job, out);
  if (op == "curl") return cmd_curl(job, out);
  if (op == "div") return cmd_div(job, out);
  if (op == "potential") return cmd_potential(job, out);
  if (op == "integrate") return cmd_integrate(job, out);
  if (op == "verify") return cmd_verify(job, out);
  if (op == "sample-field") return cmd_sample_field(job, out, err);
  if (op == "det") return cmd_det(job, out);
  if (op.empty()) throw UsageError("no operation given (use a subcommand or --job)");
  throw UsageError("unknown operation '" + op + "'");
}

// ---- flag definitions -----------------------------------------------------

struct Flags {
  std::map<std::string, std::string> coeffs;
  std::string field, box, base;
  std::vector<std::string> params, from, to, at, rows;
  std::array<std::string, 3> map;
  int orientation = 1;
  std::string kind, theorem, job_file;
  int k = -1;
  int n = 5;
  int order = 0, subdiv = 0;
  double tol = 0, zero_tol = 0;
  bool json = false;
};

void add_coeffs(CLI::App* app, Flags& f, const std::string& names) {
  for (char c : names) {
    std::string name(1, c);
    app->add_option("-" + name, f.coeffs[name], "coefficient " + name + "(x,y,z)");
  }
}

void add_field(CLI::App* app, Flags& f) {
  app->add_option("--field", f.field, "vector field \"Fx,Fy,Fz\"");
}

void add_chain(CLI::App* app, Flags& f) {
  app->add_option("--param", f.params, "chain parameter name (repeat per parameter)");
  app->add_option("--from", f.from, "lower bound of the matching --param");
  app->add_option("--to", f.to, "upper bound of the matching --param");
  app->add_option("--x", f.map[0], "x component of the chain map");
  app->add_option("--y", f.map[1], "y component of the chain map");
  app->add_option("--z", f.map[2], "z component of the chain map");
  app->add_option("--orientation", f.orientation, "+1 or -1");
}

JobSpec job_from_flags(const Flags& f, const CLI::App& app, const CLI::App* active) {
  auto given = [&](const std::string& name) {
    if (active) {
      if (const CLI::Option* o = active->get_option_no_throw(name)) {
        if (o->count()) return true;
      }
    }
    const CLI::Option* o = app.get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
  };
  JobSpec job;
  job.operation = active ? active->get_name() : "";
  job.kind = f.kind;
  job.theorem = f.theorem;
  if (given("--k")) job.k = f.k;
  for (const auto& [name, value] : f.coeffs) {
    if (given("-" + name)) job.coeffs[name] = value;
  }
  if (given("--field")) job.field = split_array<3>(f.field, "--field");
  if (f.params.size() != f.from.size() || f.params.size() != f.to.size()) {
    throw UsageError("each --param needs one --from and one --to");
  }
  for (std::size_t i = 0; i < f.params.size(); ++i) {
    job.params.push_back({f.params[i], f.from[i], f.to[i]});
  }
  const char* map_flags[3] = {"--x", "--y", "--z"};
  for (int i = 0; i < 3; ++i) {
    if (given(map_flags[i])) job.map[i] = f.map[i];
  }
  job.orientation = f.orientation;
  if (given("--box")) job.box = split_array<6>(f.box, "--box");
  if (given("--base")) job.base = split_array<3>(f.base, "--base");
  for (const auto& p : f.at) job.points.push_back(split_array<3>(p, "--at"));
  for (const auto& r : f.rows) job.rows.push_back(split_array<3>(r, "--row"));
  if (given("--order")) job.order = f.order;
  if (given("--subdiv")) job.subdivisions = f.subdiv;
  if (given("--tol")) job.tol = f.tol;
  if (given("--zero-tol")) job.zero_tol = f.zero_tol;
  if (given("--n")) job.n = f.n;
  if (job.operation == "sample-field") job.output = "csv";
  if (f.json) job.output = "json";
  return job;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Differential forms on boxes in R^3: derivatives, potentials, integrals and "
               "theorem checks.",
               "formcalc"};
  app.set_version_flag("--version", "formcalc 0.1.0");
  app.require_subcommand(0, 1);
  Flags f;
  app.add_option("--order", f.order, "Gauss-Legendre points per subinterval");
  app.add_option("--subdiv", f.subdiv, "subintervals per integration axis");
  app.add_option("--tol", f.tol,
                             "verification tolerance (default 1e-6); potential residual "
                             "tolerance (default 1e-5)");
  app.add_option("--zero-tol", f.zero_tol, "zero-test tolerance (default 1e-9)");
  app.add_option("--box", f.box,
                             "domain box \"xlo,xhi,ylo,yhi,zlo,zhi\" (default -10..10 each)");
  app.add_flag("--json", f.json, "print JSON instead of text");
  app.add_option("--job", f.job_file, "JSON job file; its values win over flags");

  auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };

  CLI::App* d = sub("d", "exterior derivative of a 0-, 1- or 2-form");
  d->add_option("--k", f.k, "degree of the input form")->check(CLI::Range(0, 2));
  add_coeffs(d, f, "fMNPSTU");
  add_field(d, f);

  CLI::App* grad = sub("grad", "gradient of -f");
  add_coeffs(grad, f, "f");
  CLI::App* curl_cmd = sub("curl", "curl of a vector field");
  add_coeffs(curl_cmd, f, "MNP");
  add_field(curl_cmd, f);
  CLI::App* div = sub("div", "divergence of a vector field");
  add_coeffs(div, f, "MNPSTU");
  add_field(div, f);

  CLI::App* pot = sub("potential", "reconstruct a scalar or vector potential");
  pot->add_option("--kind", f.kind, "scalar or vector")->default_str("scalar");
  add_coeffs(pot, f, "MNPSTU");
  add_field(pot, f);
  pot->add_option("--base", f.base, "base point \"x,y,z\" (default: box centre)");
  pot->add_option("--at", f.at, "query point \"x,y,z\" (repeatable)");

  CLI::App* integ = sub("integrate", "integrate a form over a path, surface or region");
  integ->add_option("--kind", f.kind, "path, surface or volume");
  add_coeffs(integ, f, "fMNPSTU");
  add_field(integ, f);
  add_chain(integ, f);

  CLI::App* ver = sub("verify", "check an integral theorem on a chain");
  ver->add_option("--theorem", f.theorem, "ftc, stokes, green, plane-div or gauss");
  add_coeffs(ver, f, "fMNPSTU");
  add_field(ver, f);
  add_chain(ver, f);

  CLI::App* sample = sub("sample-field", "CSV samples of a field on an n x n x n grid");
  add_coeffs(sample, f, "MNPSTU");
  add_field(sample, f);
  sample->add_option("--n", f.n, "grid points per axis (default 5)");

  CLI::App* det = sub("det", "3x3 determinant of numeric or symbolic entries");
  det->add_option("--row", f.rows, "row \"a,b,c\" (give three)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    auto active = app.get_subcommands();
    JobSpec job = job_from_flags(f, app, active.empty() ? nullptr : active.front());
    if (!f.job_file.empty()) {
      std::ifstream in(f.job_file);
      if (!in) throw UsageError("cannot open job file '" + f.job_file + "'");
      overlay(job, json::parse(in));
    }
    return dispatch(job, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NotClosedError& e) {
    err << "error: " << e.what() << "\n";
    err << "max residual: " << fmt(e.max_residual()) << "\n";
    return kFail;
  } catch (const EvalError& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == EvalError::Kind::NonFinite ? kNumeric : kUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const json::exception& e) {
    err << "error: job file: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace formcalc::cli
