#include "bdf/io/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "bdf/mean_field.hpp"

namespace bdf::io {

namespace {

namespace pt = boost::property_tree;

// canonical key -> symbol alias (empty when none)
using KeyTable = std::map<std::string, std::string, std::less<>>;

const std::map<std::string, KeyTable, std::less<>>& schema() {
  static const std::map<std::string, KeyTable, std::less<>> s = {
      {"lattice", {{"spacing", "h"}, {"cutoff", "Λ"}}},
      {"source", {{"charge", "Z"}, {"width", ""}, {"alpha", "α"}}},
      {"initial", {{"mode", ""}, {"electrons", "N"}, {"snapshot_path", ""}}},
      {"evolve",
       {{"dt", "Δt"},
        {"steps", ""},
        {"record_interval", ""},
        {"integrator", ""},
        {"idempotence_hard_limit", ""}}},
      {"scf",
       {{"chemical_potential", "λ"},
        {"target_charge", "N"},
        {"tol", ""},
        {"max_iter", ""},
        {"damping", "θ"}}},
      {"output", {{"directory", ""}, {"snapshot_interval", ""}}},
  };
  return s;
}

struct Entry {
  std::string written;  // key path as spelled in the document
  std::string value;
};

// section -> canonical key -> entry
using Document = std::map<std::string, std::map<std::string, Entry>>;

std::string strip_comments(std::string_view text) {
  std::string out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] == '#') line[first] = ';';
    out += line;
    out += '\n';
  }
  return out;
}

Document load(std::string_view text) {
  pt::ptree tree;
  std::istringstream in(strip_comments(text));
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("", "malformed config at line " + std::to_string(e.line()) + ": " + e.message());
  }

  Document doc;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError(section, "key '" + section + "' appears outside any section");
    }
    const auto sec = schema().find(section);
    if (sec == schema().end()) throw ConfigError(section, "unknown section [" + section + "]");
    for (const auto& [key, node] : body) {
      const std::string path = section + "." + key;
      std::string canonical;
      for (const auto& [name, symbol] : sec->second) {
        if (key == name || (!symbol.empty() && key == symbol)) canonical = name;
      }
      if (canonical.empty()) throw ConfigError(path, "unknown key " + path);
      auto& slot = doc[section];
      if (slot.count(canonical)) {
        throw ConfigError(path, "duplicate key " + path + " (already given as " + slot[canonical].written + ")");
      }
      slot[canonical] = {path, node.data()};
    }
  }
  return doc;
}

class Reader {
 public:
  explicit Reader(const Document& doc) : doc_(doc) {}

  const Entry* find(const std::string& section, const std::string& key) const {
    const auto s = doc_.find(section);
    if (s == doc_.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  bool has_section(const std::string& section) const { return doc_.count(section) != 0; }

  template <class T>
  std::optional<T> number(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    std::string v = e->value;
    // Accept the typographic minus sign.
    if (v.rfind("\u2212", 0) == 0) v.replace(0, 3, "-");
    T out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
      throw ConfigError(e->written, e->written + ": expected " +
                                        (std::is_integral_v<T> ? "an integer" : "a number") +
                                        ", got '" + v + "'");
    }
    if constexpr (std::is_floating_point_v<T>) {
      if (!std::isfinite(out)) throw ConfigError(e->written, e->written + ": value must be finite");
    }
    return out;
  }

  std::optional<std::string> text(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    if (!e) return std::nullopt;
    return e->value;
  }

  // Path for messages about a key that may be absent.
  std::string path(const std::string& section, const std::string& key) const {
    const Entry* e = find(section, key);
    return e ? e->written : section + "." + key;
  }

 private:
  const Document& doc_;
};

template <class T>
void check(bool ok, const Reader& r, const std::string& section, const std::string& key, T value,
           const std::string& what) {
  if (ok) return;
  std::ostringstream os;
  os.precision(17);
  const std::string p = r.path(section, key);
  os << p << ": " << what << ", got " << value;
  throw ConfigError(p, os.str());
}

}  // namespace

ConfigError::ConfigError(std::string key_path, const std::string& message)
    : std::runtime_error(message), key_path_(std::move(key_path)) {}

ScfSettings SimulationConfig::scf_settings() const {
  ScfSettings s;
  s.max_iter = scf.max_iter;
  s.tol = scf.tol;
  s.damping = scf.damping;
  s.chemical_potential = scf.chemical_potential;
  return s;
}

SimulationConfig parse_config(std::string_view text) {
  const Document doc = load(text);
  const Reader r(doc);
  SimulationConfig c;

  // lattice
  const auto h = r.number<double>("lattice", "spacing");
  if (!h) throw ConfigError("lattice.spacing", "missing required key lattice.spacing");
  const auto cutoff = r.number<double>("lattice", "cutoff");
  if (!cutoff) throw ConfigError("lattice.cutoff", "missing required key lattice.cutoff");
  c.lattice.spacing = *h;
  c.lattice.cutoff = *cutoff;
  check(*h > 0.0, r, "lattice", "spacing", *h, "must be positive");
  check(*cutoff >= 0.0, r, "lattice", "cutoff", *cutoff, "must be non-negative");

  // source
  if (auto v = r.number<double>("source", "charge")) c.source.charge = *v;
  if (auto v = r.number<double>("source", "width")) c.source.width = *v;
  if (auto v = r.number<double>("source", "alpha")) c.source.alpha = *v;
  check(c.source.width > 0.0, r, "source", "width", c.source.width, "must be positive");
  check(c.source.alpha >= 0.0, r, "source", "alpha", c.source.alpha, "must be non-negative");
  if (c.source.alpha >= kCoercivityCouplingLimit) {
    std::ostringstream os;
    os << r.path("source", "alpha") << " = " << c.source.alpha
       << " is at or above 4/pi; the energy is no longer known to be bounded below";
    c.warnings.push_back(os.str());
  }

  // initial
  if (auto v = r.text("initial", "mode")) {
    static const std::map<std::string, InitialMode> modes = {{"vacuum", InitialMode::vacuum},
                                                             {"charged_free", InitialMode::charged_free},
                                                             {"charged_scf", InitialMode::charged_scf},
                                                             {"snapshot", InitialMode::snapshot}};
    const auto it = modes.find(*v);
    if (it == modes.end()) {
      const std::string p = r.path("initial", "mode");
      throw ConfigError(p, p + ": expected vacuum, charged_free, charged_scf or snapshot, got '" + *v + "'");
    }
    c.initial.mode = it->second;
  }
  if (auto v = r.number<int>("initial", "electrons")) c.initial.electrons = *v;
  if (auto v = r.text("initial", "snapshot_path")) c.initial.snapshot_path = *v;
  check(c.initial.electrons >= 0, r, "initial", "electrons", c.initial.electrons, "must be non-negative");
  if (c.initial.mode == InitialMode::snapshot && c.initial.snapshot_path.empty()) {
    throw ConfigError("initial.snapshot_path", "initial.mode = snapshot requires initial.snapshot_path");
  }

  // evolve
  if (r.has_section("evolve")) {
    c.evolve.dt = r.number<double>("evolve", "dt");
    c.evolve.steps = r.number<std::int64_t>("evolve", "steps");
    if (!c.evolve.dt) throw ConfigError("evolve.dt", "missing required key evolve.dt");
    if (!c.evolve.steps) throw ConfigError("evolve.steps", "missing required key evolve.steps");
    check(*c.evolve.dt > 0.0, r, "evolve", "dt", *c.evolve.dt, "must be positive");
    check(*c.evolve.steps >= 0, r, "evolve", "steps", *c.evolve.steps, "must be non-negative");
  }
  if (auto v = r.number<std::int64_t>("evolve", "record_interval")) c.evolve.record_interval = *v;
  check(c.evolve.record_interval >= 1, r, "evolve", "record_interval", c.evolve.record_interval,
        "must be at least 1");
  if (auto v = r.text("evolve", "integrator")) {
    if (*v == "unitary") {
      c.evolve.integrator = Integrator::unitary;
    } else if (*v == "rk4") {
      c.evolve.integrator = Integrator::rk4;
    } else {
      const std::string p = r.path("evolve", "integrator");
      throw ConfigError(p, p + ": expected unitary or rk4, got '" + *v + "'");
    }
  }
  if (auto v = r.number<double>("evolve", "idempotence_hard_limit")) c.evolve.idempotence_hard_limit = *v;
  check(c.evolve.idempotence_hard_limit > 0.0, r, "evolve", "idempotence_hard_limit",
        c.evolve.idempotence_hard_limit, "must be positive");

  // scf
  const bool has_lambda = r.find("scf", "chemical_potential") != nullptr;
  const bool has_target = r.find("scf", "target_charge") != nullptr;
  if (has_lambda && has_target) {
    const std::string p = r.path("scf", "target_charge");
    throw ConfigError(p, p + ": give either " + r.path("scf", "chemical_potential") + " or " + p + ", not both");
  }
  if (auto v = r.number<double>("scf", "chemical_potential")) c.scf.chemical_potential = *v;
  if (auto v = r.number<int>("scf", "target_charge")) {
    c.scf.target_charge = *v;
    check(*v >= 0, r, "scf", "target_charge", *v, "must be non-negative");
  }
  if (auto v = r.number<double>("scf", "tol")) c.scf.tol = *v;
  if (auto v = r.number<int>("scf", "max_iter")) c.scf.max_iter = *v;
  if (auto v = r.number<double>("scf", "damping")) c.scf.damping = *v;
  check(c.scf.tol > 0.0, r, "scf", "tol", c.scf.tol, "must be positive");
  check(c.scf.max_iter >= 1, r, "scf", "max_iter", c.scf.max_iter, "must be at least 1");
  check(c.scf.damping > 0.0 && c.scf.damping <= 1.0, r, "scf", "damping", c.scf.damping,
        "must lie in (0, 1]");

  // output
  if (auto v = r.text("output", "directory")) c.output.directory = *v;
  if (c.output.directory.empty()) throw ConfigError(r.path("output", "directory"), "output.directory is empty");
  if (auto v = r.number<std::int64_t>("output", "snapshot_interval")) c.output.snapshot_interval = *v;
  check(c.output.snapshot_interval >= 0, r, "output", "snapshot_interval", c.output.snapshot_interval,
        "must be non-negative");

  return c;
}

SimulationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading config file " + path.string());
  return parse_config(buf.str());
}

void require_evolve(const SimulationConfig& config) {
  if (!config.evolve.dt) throw ConfigError("evolve.dt", "missing required key evolve.dt");
  if (!config.evolve.steps) throw ConfigError("evolve.steps", "missing required key evolve.steps");
}

}  // namespace bdf::io
