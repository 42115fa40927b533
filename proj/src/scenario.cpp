#include "beltstab/scenario.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "beltstab/errors.hpp"

namespace beltstab::scenario {

namespace {

constexpr int kSchemaVersion = 1;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ScenarioError(where, what);
}

std::string join_ptr(const std::string& base, const std::string& key) {
  return base + "/" + key;
}

std::string join_ptr(const std::string& base, std::size_t idx) {
  return base + "/" + std::to_string(idx);
}

// Tracks which keys of an object were consumed so leftovers can be rejected.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string ptr) : j_(j), ptr_(std::move(ptr)) {
    if (!j_.is_object()) fail(ptr_.empty() ? "/" : ptr_, "expected an object");
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json& require(const std::string& key) {
    const json* v = find(key);
    if (!v) fail(join_ptr(ptr_, key), "required field is missing");
    return *v;
  }

  std::string ptr(const std::string& key) const { return join_ptr(ptr_, key); }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) fail(join_ptr(ptr_, k), "unknown field");
    }
  }

 private:
  const json& j_;
  std::string ptr_;
  std::set<std::string> seen_;
};

std::optional<Dimension> dimension_from_string(const std::string& s) {
  if (s == "length") return Dimension::length;
  if (s == "mass") return Dimension::mass;
  if (s == "time") return Dimension::time;
  if (s == "density") return Dimension::density;
  if (s == "grav_const") return Dimension::grav_const;
  if (s == "dimensionless") return Dimension::dimensionless;
  return std::nullopt;
}

// Scale factors of the three declared base units.
struct DeclaredUnits {
  double length = 1.0;
  double mass = 1.0;
  double time = 1.0;

  double factor(Dimension d) const {
    switch (d) {
      case Dimension::length: return length;
      case Dimension::mass: return mass;
      case Dimension::time: return time;
      case Dimension::density: return mass / (length * length * length);
      case Dimension::grav_const: return length * length * length / (mass * time * time);
      case Dimension::dimensionless: return 1.0;
    }
    return 1.0;
  }
};

struct Context {
  const ConstantsTable& table;
  DeclaredUnits units;
  std::map<std::string, Unit> local_units;  // declared in the scenario

  const Unit* unit(const std::string& name) const {
    if (auto it = local_units.find(name); it != local_units.end()) return &it->second;
    if (auto it = table.units.find(name); it != table.units.end()) return &it->second;
    return nullptr;
  }
};

enum class Sign { positive, non_negative, any };

double check_sign(double v, Sign sign, const std::string& ptr) {
  if (!std::isfinite(v)) fail(ptr, "must be finite");
  if (sign == Sign::positive && !(v > 0.0)) fail(ptr, "must be positive");
  if (sign == Sign::non_negative && !(v >= 0.0)) fail(ptr, "must be non-negative");
  return v;
}

double quantity(const Context& ctx, const json& v, Dimension dim, const std::string& ptr,
                Sign sign = Sign::positive) {
  if (v.is_number()) return check_sign(v.get<double>() * ctx.units.factor(dim), sign, ptr);
  if (!v.is_string()) fail(ptr, "expected a number or a \"<value> <unit>\" string");
  const std::string s = v.get<std::string>();
  std::istringstream in(s);
  double number = 0.0;
  std::string unit_name, extra;
  if (!(in >> number)) fail(ptr, "cannot read a number from \"" + s + "\"");
  in >> unit_name >> extra;
  if (!extra.empty()) fail(ptr, "trailing text in quantity \"" + s + "\"");
  if (unit_name.empty()) {
    return check_sign(number * ctx.units.factor(dim), sign, ptr);
  }
  const Unit* u = ctx.unit(unit_name);
  if (!u) fail(ptr, "unknown unit '" + unit_name + "'");
  if (u->dimension != dim) {
    fail(ptr, "unit mismatch: '" + unit_name + "' is a " + to_string(u->dimension) +
                  " unit, field expects " + to_string(dim));
  }
  return check_sign(number * u->si, sign, ptr);
}

double dimensionless(const json& v, const std::string& ptr, Sign sign = Sign::positive) {
  if (!v.is_number()) fail(ptr, "expected a number");
  return check_sign(v.get<double>(), sign, ptr);
}

std::int64_t integer(const json& v, const std::string& ptr) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::nearbyint(d) == d && std::abs(d) < 9.0e15) return static_cast<std::int64_t>(d);
  }
  fail(ptr, "expected an integer");
}

std::uint64_t count(const json& v, const std::string& ptr) {
  const std::int64_t n = integer(v, ptr);
  if (n < 1) fail(ptr, "must be at least 1");
  return static_cast<std::uint64_t>(n);
}

std::string string_field(const json& v, const std::string& ptr) {
  if (!v.is_string()) fail(ptr, "expected a string");
  return v.get<std::string>();
}

void read_units(Context& ctx, const json& j, const std::string& ptr) {
  ObjectReader r(j, ptr);
  const auto base = [&](const char* key, Dimension dim, double& target) {
    const json* v = r.find(key);
    if (!v) return;
    const std::string p = r.ptr(key);
    if (v->is_string()) {
      const std::string name = v->get<std::string>();
      const Unit* u = ctx.unit(name);
      if (!u) fail(p, "unknown unit '" + name + "'");
      if (u->dimension != dim) {
        fail(p, "unit mismatch: '" + name + "' is a " + to_string(u->dimension) + " unit");
      }
      target = u->si;
    } else {
      ObjectReader ur(*v, p);
      const std::string name = string_field(ur.require("name"), ur.ptr("name"));
      const double si = dimensionless(ur.require("si"), ur.ptr("si"));
      ur.finish();
      ctx.local_units[name] = Unit{dim, si, "declared in scenario"};
      target = si;
    }
  };
  base("length", Dimension::length, ctx.units.length);
  base("mass", Dimension::mass, ctx.units.mass);
  base("time", Dimension::time, ctx.units.time);
  r.finish();
}

// Raw parameter block -> SI parameter block (numbers only).
json resolve_similar(const Context& ctx, const json& j, const std::string& ptr) {
  ObjectReader r(j, ptr);
  json out = json::object();
  out["N"] = count(r.require("N"), r.ptr("N"));
  out["a"] = quantity(ctx, r.require("a"), Dimension::length, r.ptr("a"));
  out["gamma"] = dimensionless(r.require("gamma"), r.ptr("gamma"));
  out["density_ratio"] = dimensionless(r.require("density_ratio"), r.ptr("density_ratio"));
  out["R"] = quantity(ctx, r.require("R"), Dimension::length, r.ptr("R"));
  out["R_s"] = quantity(ctx, r.require("R_s"), Dimension::length, r.ptr("R_s"));
  r.finish();
  return out;
}

json resolve_powerlaw(const Context& ctx, const json& j, const std::string& ptr) {
  ObjectReader r(j, ptr);
  json out = json::object();
  out["N"] = count(r.require("N"), r.ptr("N"));
  const json* nu = r.find("nu");
  out["nu"] = nu ? dimensionless(*nu, r.ptr("nu")) : 2.0;
  if (!(out["nu"].get<double>() > 1.0)) fail(r.ptr("nu"), "must exceed 1");
  out["L"] = count(r.require("L"), r.ptr("L"));
  out["gamma"] = dimensionless(r.require("gamma"), r.ptr("gamma"));
  out["density_ratio"] = dimensionless(r.require("density_ratio"), r.ptr("density_ratio"));
  out["R"] = quantity(ctx, r.require("R"), Dimension::length, r.ptr("R"));
  out["R_s"] = quantity(ctx, r.require("R_s"), Dimension::length, r.ptr("R_s"));
  out["unit_length"] = quantity(ctx, r.require("unit_length"), Dimension::length,
                                r.ptr("unit_length"));
  r.finish();
  return out;
}

json resolve_planets(const Context& ctx, const json& j, const std::string& ptr) {
  ObjectReader r(j, ptr);
  json out = json::object();
  out["b"] = quantity(ctx, r.require("b"), Dimension::length, r.ptr("b"), Sign::non_negative);
  out["c"] = quantity(ctx, r.require("c"), Dimension::length, r.ptr("c"));
  out["a"] = dimensionless(r.require("a"), r.ptr("a"));
  if (!(out["a"].get<double>() > 1.0)) fail(r.ptr("a"), "must exceed 1");
  out["i_min"] = integer(r.require("i_min"), r.ptr("i_min"));
  out["i_max"] = integer(r.require("i_max"), r.ptr("i_max"));
  if (out["i_min"].get<std::int64_t>() > out["i_max"].get<std::int64_t>()) {
    fail(r.ptr("i_max"), "must not be below i_min");
  }
  out["gamma"] = dimensionless(r.require("gamma"), r.ptr("gamma"));
  out["k_typical"] = dimensionless(r.require("k_typical"), r.ptr("k_typical"));
  out["M"] = quantity(ctx, r.require("M"), Dimension::mass, r.ptr("M"));
  if (const json* v = r.find("c2")) out["c2"] = quantity(ctx, *v, Dimension::length, r.ptr("c2"));
  if (const json* v = r.find("m_max")) {
    out["m_max"] = quantity(ctx, *v, Dimension::mass, r.ptr("m_max"));
  }
  if (const json* v = r.find("estimate")) {
    const std::string e = string_field(*v, r.ptr("estimate"));
    try {
      bounds::planet_estimate_from_string(e);
    } catch (const DomainError& err) {
      fail(r.ptr("estimate"), err.what());
    }
    out["estimate"] = e;
  }

  const json& list = r.require("planets");
  const std::string lp = r.ptr("planets");
  if (!list.is_array()) fail(lp, "expected an array");
  json planets = json::array();
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string p = join_ptr(lp, k);
    const json& e = list[k];
    json entry = json::object();
    if (e.is_string()) {
      const std::string name = e.get<std::string>();
      const auto it = ctx.table.bodies.find(name);
      if (it == ctx.table.bodies.end()) fail(p, "body '" + name + "' is not in the catalogue");
      entry["name"] = name;
      entry["mass"] = it->second.mass;
      entry["radius"] = it->second.radius;
    } else {
      ObjectReader er(e, p);
      if (const json* n = er.find("name")) entry["name"] = string_field(*n, er.ptr("name"));
      entry["mass"] = quantity(ctx, er.require("mass"), Dimension::mass, er.ptr("mass"));
      entry["radius"] = quantity(ctx, er.require("radius"), Dimension::length, er.ptr("radius"));
      er.finish();
      if (!entry.contains("name")) entry["name"] = "planet " + std::to_string(k);
    }
    planets.push_back(entry);
  }
  const auto expected = static_cast<std::size_t>(out["i_max"].get<std::int64_t>() -
                                                 out["i_min"].get<std::int64_t>() + 1);
  if (planets.size() != expected) {
    fail(lp, "needs i_max - i_min + 1 = " + std::to_string(expected) + " entries, got " +
                 std::to_string(planets.size()));
  }
  out["planets"] = planets;
  r.finish();
  return out;
}

json resolve_custom(const Context& ctx, const json& j, const std::string& ptr) {
  ObjectReader r(j, ptr);
  json out = json::object();
  out["star_mass"] = quantity(ctx, r.require("star_mass"), Dimension::mass, r.ptr("star_mass"));
  out["star_radius"] = quantity(ctx, r.require("star_radius"), Dimension::length,
                                r.ptr("star_radius"));
  if (const json* g = r.find("G")) {
    out["G"] = quantity(ctx, *g, Dimension::grav_const, r.ptr("G"));
  } else {
    out["G"] = ctx.table.constant("G");
  }
  out["density"] = quantity(ctx, r.require("density"), Dimension::density, r.ptr("density"));
  out["star_density"] = quantity(ctx, r.require("star_density"), Dimension::density,
                                 r.ptr("star_density"));
  std::string measure = "gaussian";
  if (const json* v = r.find("free_measure")) {
    measure = string_field(*v, r.ptr("free_measure"));
    if (measure != "gaussian" && measure != "truncated") {
      fail(r.ptr("free_measure"), "expected gaussian or truncated");
    }
  }
  out["free_measure"] = measure;

  const json& list = r.require("bodies");
  const std::string lp = r.ptr("bodies");
  if (!list.is_array() || list.empty()) fail(lp, "expected a non-empty array");
  json bodies = json::array();
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string p = join_ptr(lp, k);
    ObjectReader br(list[k], p);
    json b = json::object();
    b["name"] = br.find("name") ? string_field(*br.find("name"), br.ptr("name"))
                                : "body " + std::to_string(k);
    b["mass"] = quantity(ctx, br.require("mass"), Dimension::mass, br.ptr("mass"));
    b["radius"] = quantity(ctx, br.require("radius"), Dimension::length, br.ptr("radius"));
    b["orbit_radius"] = quantity(ctx, br.require("orbit_radius"), Dimension::length,
                                 br.ptr("orbit_radius"));
    b["gamma"] = dimensionless(br.require("gamma"), br.ptr("gamma"));
    br.finish();
    if (k > 0 && b["orbit_radius"].get<double>() < bodies.back()["orbit_radius"].get<double>()) {
      fail(join_ptr(p, "orbit_radius"), "bodies must be ordered by orbit radius");
    }
    bodies.push_back(b);
  }
  out["bodies"] = bodies;

  if (const json* v = r.find("xi_upper")) {
    const std::string p = r.ptr("xi_upper");
    if (!v->is_array() || v->size() != bodies.size()) fail(p, "expected one value per body");
    json xs = json::array();
    for (std::size_t k = 0; k < v->size(); ++k) xs.push_back(dimensionless((*v)[k], join_ptr(p, k)));
    out["xi_upper"] = xs;
  }
  r.finish();
  return out;
}

// SI parameter block -> typed parameters. Shared by loading and sweeps.
void build_typed(Scenario& s) {
  const json& p = s.si_params;
  switch (s.kind) {
    case Kind::similar: {
      auto& q = s.similar;
      q.N = p.at("N").get<std::uint64_t>();
      q.a = p.at("a").get<double>();
      q.gamma = p.at("gamma").get<double>();
      q.density_ratio = p.at("density_ratio").get<double>();
      q.R = p.at("R").get<double>();
      q.R_s = p.at("R_s").get<double>();
      q.validate();
      break;
    }
    case Kind::powerlaw: {
      auto& q = s.powerlaw;
      q.N = p.at("N").get<std::uint64_t>();
      q.nu = p.at("nu").get<double>();
      q.L = p.at("L").get<int>();
      q.gamma = p.at("gamma").get<double>();
      q.density_ratio = p.at("density_ratio").get<double>();
      q.unit_length = p.at("unit_length").get<double>();
      q.R = p.at("R").get<double>() / q.unit_length;
      q.R_s = p.at("R_s").get<double>() / q.unit_length;
      q.validate();
      break;
    }
    case Kind::planets: {
      auto& ps = s.planets;
      auto& q = ps.params;
      q.b = p.at("b").get<double>();
      q.c = p.at("c").get<double>();
      q.a = p.at("a").get<double>();
      q.i_min = p.at("i_min").get<int>();
      q.i_max = p.at("i_max").get<int>();
      q.gamma = p.at("gamma").get<double>();
      q.k_typical = p.at("k_typical").get<double>();
      q.M = p.at("M").get<double>();
      q.c2_override.reset();
      if (p.contains("c2")) q.c2_override = p.at("c2").get<double>();
      ps.m_max.reset();
      if (p.contains("m_max")) ps.m_max = p.at("m_max").get<double>();
      q.estimate = p.contains("estimate")
                       ? bounds::planet_estimate_from_string(p.at("estimate").get<std::string>())
                       : bounds::PlanetEstimate::closed_form;
      q.masses.clear();
      q.planet_radii.clear();
      ps.names.clear();
      for (const auto& e : p.at("planets")) {
        ps.names.push_back(e.at("name").get<std::string>());
        q.masses.push_back(e.at("mass").get<double>());
        q.planet_radii.push_back(e.at("radius").get<double>());
      }
      q.validate();
      break;
    }
    case Kind::custom_system: {
      auto& cs = s.custom;
      auto& sys = cs.system;
      sys.star_mass = p.at("star_mass").get<double>();
      sys.star_radius = p.at("star_radius").get<double>();
      sys.grav_const = p.at("G").get<double>();
      sys.density = p.at("density").get<double>();
      sys.star_density = p.at("star_density").get<double>();
      sys.bodies.clear();
      cs.names.clear();
      std::size_t idx = 0;
      for (const auto& b : p.at("bodies")) {
        model::Body body;
        body.index = idx++;
        body.mass = b.at("mass").get<double>();
        body.body_radius = b.at("radius").get<double>();
        body.orbit_radius = b.at("orbit_radius").get<double>();
        body.gamma = b.at("gamma").get<double>();
        sys.bodies.push_back(body);
        cs.names.push_back(b.at("name").get<std::string>());
      }
      cs.free_measure = p.at("free_measure").get<std::string>() == "truncated"
                            ? sampler::FreeMeasure::truncated
                            : sampler::FreeMeasure::gaussian;
      cs.xi_upper.clear();
      if (p.contains("xi_upper")) {
        for (const auto& x : p.at("xi_upper")) cs.xi_upper.push_back(x.get<double>());
      } else {
        const double outer = sys.bodies.back().orbit_radius;
        for (const auto& b : sys.bodies) cs.xi_upper.push_back(2.0 * outer / b.orbit_radius);
      }
      sys.validate();
      break;
    }
  }
}

Kind kind_from_string(const std::string& s, const std::string& ptr) {
  if (s == "similar") return Kind::similar;
  if (s == "powerlaw") return Kind::powerlaw;
  if (s == "planets") return Kind::planets;
  if (s == "custom-system") return Kind::custom_system;
  fail(ptr, "unknown kind '" + s + "' (expected similar, powerlaw, planets or custom-system)");
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

}  // namespace

std::string to_string(Dimension d) {
  switch (d) {
    case Dimension::length: return "length";
    case Dimension::mass: return "mass";
    case Dimension::time: return "time";
    case Dimension::density: return "density";
    case Dimension::grav_const: return "grav_const";
    case Dimension::dimensionless: return "dimensionless";
  }
  return "?";
}

std::string to_string(Kind k) {
  switch (k) {
    case Kind::similar: return "similar";
    case Kind::powerlaw: return "powerlaw";
    case Kind::planets: return "planets";
    case Kind::custom_system: return "custom-system";
  }
  return "?";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(path.string(), "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

ConstantsTable ConstantsTable::load(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(path.string() + ": line " + std::to_string(line_of(text, e.byte)), e.what());
  }
  ConstantsTable t;
  t.path = path;
  t.sha256 = sha256_hex(text);
  ObjectReader r(j, "");
  r.find("schema_version");
  r.find("description");
  if (const json* units = r.find("units")) {
    for (const auto& [name, u] : units->items()) {
      const std::string p = "/units/" + name;
      ObjectReader ur(u, p);
      const std::string dim_name = string_field(ur.require("dimension"), ur.ptr("dimension"));
      const auto dim = dimension_from_string(dim_name);
      if (!dim) fail(ur.ptr("dimension"), "unknown dimension '" + dim_name + "'");
      Unit unit;
      unit.dimension = *dim;
      unit.si = dimensionless(ur.require("si"), ur.ptr("si"));
      unit.source = string_field(ur.require("source"), ur.ptr("source"));
      ur.finish();
      t.units[name] = unit;
    }
  }
  Context ctx{t, {}, {}};
  if (const json* consts = r.find("constants")) {
    for (const auto& [name, c] : consts->items()) {
      const std::string p = "/constants/" + name;
      ObjectReader cr(c, p);
      const std::string dim_name = string_field(cr.require("dimension"), cr.ptr("dimension"));
      const auto dim = dimension_from_string(dim_name);
      if (!dim) fail(cr.ptr("dimension"), "unknown dimension '" + dim_name + "'");
      t.constants[name] = quantity(ctx, cr.require("value"), *dim, cr.ptr("value"));
      string_field(cr.require("source"), cr.ptr("source"));
      cr.finish();
    }
  }
  if (const json* bodies = r.find("bodies")) {
    for (const auto& [name, b] : bodies->items()) {
      const std::string p = "/bodies/" + name;
      ObjectReader br(b, p);
      CatalogBody cb;
      cb.mass = quantity(ctx, br.require("mass"), Dimension::mass, br.ptr("mass"));
      cb.radius = quantity(ctx, br.require("radius"), Dimension::length, br.ptr("radius"));
      cb.source = string_field(br.require("source"), br.ptr("source"));
      br.finish();
      t.bodies[name] = cb;
    }
  }
  r.finish();
  return t;
}

double ConstantsTable::constant(const std::string& name) const {
  const auto it = constants.find(name);
  if (it == constants.end()) throw ScenarioError("/constants/" + name, "constant not defined");
  return it->second;
}

std::filesystem::path dataset_dir() {
  if (const char* env = std::getenv("BELTSTAB_DATASETS"); env && *env) return env;
  return BELTSTAB_DATASET_DIR;
}

const ConstantsTable& bundled_constants() {
  static const ConstantsTable table = ConstantsTable::load(dataset_dir() / "constants.json");
  return table;
}

bounds::PlanetChainParams PlanetScenario::effective() const {
  return m_max ? bounds::with_max_mass(params, *m_max) : params;
}

json Scenario::echo() const {
  json out = json::object();
  out["schema_version"] = schema_version;
  out["kind"] = to_string(kind);
  out["name"] = name;
  if (!description.empty()) out["description"] = description;
  out["units"] = {{"length", "m"}, {"mass", "kg"}, {"time", "s"}};
  out["params"] = si_params;
  return out;
}

Scenario parse_scenario(const std::string& text, const std::string& origin,
                        const ConstantsTable& table) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("line " + std::to_string(line_of(text, e.byte)), std::string("syntax error: ") + e.what());
  }
  Scenario s;
  s.origin = origin;
  s.sha256 = sha256_hex(text);

  ObjectReader r(j, "");
  const json& version = r.require("schema_version");
  if (!version.is_number_integer() || version.get<int>() != kSchemaVersion) {
    fail("/schema_version", "unsupported schema version (expected " +
                                std::to_string(kSchemaVersion) + ")");
  }
  s.schema_version = kSchemaVersion;
  s.kind = kind_from_string(string_field(r.require("kind"), "/kind"), "/kind");
  if (const json* n = r.find("name")) s.name = string_field(*n, "/name");
  if (const json* d = r.find("description")) s.description = string_field(*d, "/description");

  Context ctx{table, {}, {}};
  if (const json* u = r.find("units")) read_units(ctx, *u, "/units");

  const json& params = r.require("params");
  switch (s.kind) {
    case Kind::similar: s.si_params = resolve_similar(ctx, params, "/params"); break;
    case Kind::powerlaw: s.si_params = resolve_powerlaw(ctx, params, "/params"); break;
    case Kind::planets: s.si_params = resolve_planets(ctx, params, "/params"); break;
    case Kind::custom_system: s.si_params = resolve_custom(ctx, params, "/params"); break;
  }
  r.finish();
  try {
    build_typed(s);
  } catch (const DomainError& e) {
    fail("/params", e.what());
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path, const ConstantsTable& table) {
  const std::string text = read_file(path);
  try {
    return parse_scenario(text, path.string(), table);
  } catch (const ScenarioError& e) {
    throw ScenarioError(path.string() + ":" + e.where(),
                        std::string(e.what()).substr(e.where().empty() ? 0 : e.where().size() + 2));
  }
}

std::filesystem::path resolve_scenario_path(const std::string& name_or_path) {
  const std::filesystem::path p(name_or_path);
  if (std::filesystem::exists(p)) return p;
  const std::filesystem::path bundled = dataset_dir() / (name_or_path + ".json");
  if (p.extension().empty() && std::filesystem::exists(bundled)) return bundled;
  throw ScenarioError(name_or_path, "no such scenario file or bundled dataset");
}

std::vector<DatasetInfo> list_datasets() {
  std::vector<DatasetInfo> out;
  for (const auto& entry : std::filesystem::directory_iterator(dataset_dir())) {
    if (entry.path().extension() != ".json" || entry.path().stem() == "constants") continue;
    DatasetInfo info;
    info.name = entry.path().stem().string();
    info.path = entry.path();
    const std::string text = read_file(entry.path());
    info.sha256 = sha256_hex(text);
    const Scenario s = parse_scenario(text, entry.path().string());
    info.kind = to_string(s.kind);
    info.description = s.description;
    out.push_back(info);
  }
  std::sort(out.begin(), out.end(),
            [](const DatasetInfo& a, const DatasetInfo& b) { return a.name < b.name; });
  return out;
}

SampleTarget sample_target(const Scenario& s) {
  SampleTarget t;
  switch (s.kind) {
    case Kind::similar: {
      const auto& p = s.similar;
      if (p.N > kMaxSampledBodies) {
        throw ScenarioError("/params/N", "belts above " + std::to_string(kMaxSampledBodies) +
                                             " bodies are not sampled");
      }
      // Equal bodies of radius a on one orbit. Only the ratios m/M and a/R_s
      // enter the couplings, so the star mass is a nominal solar mass.
      model::StarSystem sys;
      sys.star_mass = bundled_constants().units.at("M_sun").si;
      sys.star_radius = p.R_s;
      sys.grav_const = bundled_constants().constant("G");
      sys.star_density = sys.star_mass / (4.0 / 3.0 * model::kPi * p.R_s * p.R_s * p.R_s);
      sys.density = p.density_ratio * sys.star_density;
      for (std::uint64_t i = 0; i < p.N; ++i) {
        model::Body b;
        b.index = i;
        b.body_radius = p.a;
        b.mass = 4.0 / 3.0 * model::kPi * sys.density * p.a * p.a * p.a;
        b.orbit_radius = p.R;
        b.gamma = p.gamma;
        sys.bodies.push_back(b);
        t.names.push_back("body " + std::to_string(i));
      }
      t.model = sampler::GibbsModel::from_system(sys);
      t.system = sys;
      return t;
    }
    case Kind::powerlaw:
      throw ScenarioError("/kind", "power-law belts have no explicit body list to sample");
    case Kind::planets: {
      const bounds::PlanetChainParams p = s.planets.effective();
      const std::size_t n = p.count();
      std::vector<model::Body> bodies(n);
      for (std::size_t k = 0; k < n; ++k) {
        bodies[k].index = k;
        bodies[k].mass = p.masses[k];
        bodies[k].body_radius = p.planet_radii[k];
        bodies[k].orbit_radius = p.orbit(p.i_min + static_cast<int>(k));
        bodies[k].gamma = p.gamma;
      }
      auto& m = t.model;
      m.free_measure = sampler::FreeMeasure::truncated;
      m.coupling.assign(n * n, 0.0);
      const double outer = bodies.back().orbit_radius;
      for (const auto& b : bodies) {
        m.gamma.push_back(b.gamma);
        m.orbit_radius.push_back(b.orbit_radius);
        m.body_radius.push_back(b.body_radius);
        m.xi_upper.push_back(2.0 * outer / b.orbit_radius);
      }
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          const auto pc = model::pair_coupling(bodies[i], bodies[j], p.M);
          m.set_pair(i, j, pc.gamma_ij * pc.r_ij);
        }
      }
      t.names = s.planets.names;
      return t;
    }
    case Kind::custom_system: {
      t.model = sampler::GibbsModel::from_system(s.custom.system);
      t.model.free_measure = s.custom.free_measure;
      t.model.xi_upper = s.custom.xi_upper;
      t.names = s.custom.names;
      t.system = s.custom.system;
      return t;
    }
  }
  return t;
}

std::vector<std::string> sweepable(Kind kind) {
  switch (kind) {
    case Kind::similar: return {"N", "a", "gamma", "density_ratio", "R", "R_s"};
    case Kind::powerlaw: return {"N", "L", "gamma", "density_ratio", "R", "R_s", "unit_length"};
    case Kind::planets: return {"m_max", "gamma", "k_typical", "a", "b", "c", "c2"};
    case Kind::custom_system: return {};
  }
  return {};
}

Scenario with_parameter(const Scenario& s, const std::string& axis, double value) {
  const auto axes = sweepable(s.kind);
  if (std::find(axes.begin(), axes.end(), axis) == axes.end()) {
    std::string list;
    for (const auto& a : axes) list += (list.empty() ? "" : ", ") + a;
    throw ScenarioError("/params/" + axis, "not a sweepable parameter for kind " +
                                               to_string(s.kind) + " (sweepable: " +
                                               (list.empty() ? "none" : list) + ")");
  }
  Scenario out = s;
  if (axis == "N" || axis == "L") {
    const double r = std::nearbyint(value);
    if (!(r >= 1.0)) throw ScenarioError("/params/" + axis, "must be at least 1");
    out.si_params[axis] = static_cast<std::uint64_t>(r);
  } else {
    out.si_params[axis] = value;
  }
  try {
    build_typed(out);
  } catch (const DomainError& e) {
    throw ScenarioError("/params/" + axis, e.what());
  }
  return out;
}

}  // namespace beltstab::scenario
