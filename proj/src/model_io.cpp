#include "fdtlab/model_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fdtlab {

namespace {

using nlohmann::json;

int line_of_byte(const std::string& text, std::size_t byte) {
  std::size_t cut = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + cut, '\n'));
}

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ValidationError(field + " " + what);
}

const json& require(const json& doc, const std::string& field) {
  if (!doc.contains(field)) fail(field, "is missing");
  return doc.at(field);
}

double number_at(const json& value, const std::string& field) {
  if (!value.is_number()) fail(field, "must be a number");
  return value.get<double>();
}

std::string string_at(const json& value, const std::string& field) {
  if (!value.is_string()) fail(field, "must be a string");
  return value.get<std::string>();
}

StateSpace parse_states(const json& doc) {
  const json& states = require(doc, "states");
  if (!states.is_array() || states.size() < 2) {
    fail("states", "must be an array of at least two labels");
  }
  std::vector<std::string> labels;
  labels.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    labels.push_back(
        string_at(states[i], "states[" + std::to_string(i) + "]"));
  }
  return StateSpace::with_labels(std::move(labels));
}

int state_index(const StateSpace& space, const std::string& label,
                const std::string& field) {
  for (int i = 0; i < space.size(); ++i) {
    if (space.labels[i] == label) return i;
  }
  fail(field, "names unknown state \"" + label + "\"");
}

std::vector<double> coeff_list(const json& value, const std::string& field) {
  if (!value.is_array()) fail(field, "must be an array of numbers");
  std::vector<double> out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(number_at(value[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

FourierSeries parse_series(const json& value, const std::string& field) {
  if (!value.is_object()) {
    fail(field, "must be an object with a0 / cos / sin coefficients");
  }
  FourierSeries out;
  if (value.contains("a0")) out.a0 = number_at(value.at("a0"), field + ".a0");
  if (value.contains("cos")) out.cos_coeffs = coeff_list(value.at("cos"), field + ".cos");
  if (value.contains("sin")) out.sin_coeffs = coeff_list(value.at("sin"), field + ".sin");
  for (const auto& [key, ignored] : value.items()) {
    if (key != "a0" && key != "cos" && key != "sin") {
      fail(field + "." + key, "is not a series field (use a0, cos, sin)");
    }
  }
  return out;
}

Vector per_state_values(const json& value, const StateSpace& space,
                        const std::string& field) {
  Vector out(space.size());
  if (value.is_array()) {
    if (static_cast<int>(value.size()) != space.size()) {
      fail(field, "must list one value per state (" +
                      std::to_string(space.size()) + " states, " +
                      std::to_string(value.size()) + " values)");
    }
    for (int i = 0; i < space.size(); ++i) {
      out(i) = number_at(value[i], field + "[" + std::to_string(i) + "]");
    }
    return out;
  }
  if (value.is_object()) {
    if (static_cast<int>(value.size()) != space.size()) {
      fail(field, "must assign a value to every state");
    }
    for (const auto& [label, entry] : value.items()) {
      int idx = state_index(space, label, field);
      out(idx) = number_at(entry, field + "." + label);
    }
    return out;
  }
  fail(field, "must be an array or a state-to-value object");
}

void parse_rates(const json& doc, ModelBundle& bundle) {
  const json& rates = require(doc, "rates");
  if (!rates.is_array() || rates.empty()) {
    fail("rates", "must be a non-empty array of {from, to, rate}");
  }
  Matrix offdiag = Matrix::Zero(bundle.space.size(), bundle.space.size());
  for (std::size_t i = 0; i < rates.size(); ++i) {
    std::string field = "rates[" + std::to_string(i) + "]";
    const json& row = rates[i];
    if (!row.is_object()) fail(field, "must be an object {from, to, rate}");
    int from = state_index(bundle.space,
                           string_at(require(row, "from"), field + ".from"),
                           field + ".from");
    int to = state_index(bundle.space,
                         string_at(require(row, "to"), field + ".to"),
                         field + ".to");
    double rate = number_at(require(row, "rate"), field + ".rate");
    if (from == to) fail(field, "must connect two distinct states");
    if (rate < 0.0) fail(field + ".rate", "< 0");
    offdiag(from, to) = rate;
  }
  bundle.generator = Generator::from_offdiagonal(bundle.space, offdiag);
}

void parse_hamiltonian(const json& doc, ModelBundle& bundle) {
  const json& edges = require(doc, "edges");
  if (!edges.is_array() || edges.empty()) {
    fail("edges", "must be a non-empty array of two-state pairs");
  }
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    std::string field = "edges[" + std::to_string(i) + "]";
    const json& e = edges[i];
    if (!e.is_array() || e.size() != 2) fail(field, "must be a pair of labels");
    int x = state_index(bundle.space, string_at(e[0], field + "[0]"), field);
    int y = state_index(bundle.space, string_at(e[1], field + "[1]"), field);
    if (x == y) fail(field, "must connect two distinct states");
    pairs.emplace_back(x, y);
  }
  Vector h = per_state_values(require(doc, "H"), bundle.space, "H");
  bundle.graph = HamiltonianGraph::make(bundle.space, std::move(pairs),
                                        Observable::on(bundle.space, h));
}

void parse_cycles(const json& doc, ModelBundle& bundle) {
  const json& cycles = require(doc, "cycles");
  if (!cycles.is_array() || cycles.empty()) {
    fail("cycles", "must be a non-empty array");
  }
  for (std::size_t i = 0; i < cycles.size(); ++i) {
    std::string field = "cycles[" + std::to_string(i) + "]";
    const json& c = cycles[i];
    if (!c.is_object()) fail(field, "must be an object {states, alpha, beta}");
    const json& members = require(c, "states");
    if (!members.is_array() || members.size() < 2) {
      fail(field + ".states", "must list at least two states");
    }
    CycleWeight w;
    for (std::size_t k = 0; k < members.size(); ++k) {
      w.states.push_back(state_index(
          bundle.space,
          string_at(members[k], field + ".states[" + std::to_string(k) + "]"),
          field + ".states"));
    }
    w.alpha = number_at(require(c, "alpha"), field + ".alpha");
    w.beta = number_at(require(c, "beta"), field + ".beta");
    if (w.alpha < 0.0) fail(field + ".alpha", "< 0");
    bundle.cycles.push_back(std::move(w));
  }
  Vector weights = per_state_values(require(doc, "mu0"), bundle.space, "mu0");
  if (weights.minCoeff() <= 0.0) fail("mu0", "must be strictly positive");
  Measure mu = Measure::on(bundle.space, weights / weights.sum());
  mu.normalized = true;
  bundle.mu0 = std::move(mu);
}

void parse_torus(const json& doc, ModelBundle& bundle) {
  TorusModel model;
  model.H = parse_series(require(doc, "H"), "H");
  model.f = parse_series(require(doc, "f"), "f");
  if (doc.contains("psi")) model.psi = number_at(doc.at("psi"), "psi");
  bundle.torus = std::move(model);
}

void parse_observables(const json& doc, ModelBundle& bundle) {
  if (!doc.contains("observables")) return;
  const json& obs = doc.at("observables");
  if (!obs.is_object()) fail("observables", "must map names to definitions");
  for (const auto& [name, value] : obs.items()) {
    std::string field = "observables." + name;
    if (bundle.kind == ModelKind::Torus) {
      bundle.torus_observables.emplace(name, parse_series(value, field));
    } else {
      bundle.observables.emplace(
          name, Observable::on(bundle.space,
                               per_state_values(value, bundle.space, field)));
    }
  }
}

}  // namespace

std::string model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Rates: return "rates";
    case ModelKind::Hamiltonian: return "hamiltonian";
    case ModelKind::Cycles: return "cycles";
    case ModelKind::Torus: return "torus";
  }
  throw ValidationError("unknown model kind");
}

const Observable& ModelBundle::observable(const std::string& name) const {
  auto it = observables.find(name);
  if (it == observables.end()) {
    throw ValidationError("model defines no observable named \"" + name + "\"");
  }
  return it->second;
}

const FourierSeries& ModelBundle::torus_observable(const std::string& name) const {
  auto it = torus_observables.find(name);
  if (it == torus_observables.end()) {
    throw ValidationError("model defines no observable named \"" + name + "\"");
  }
  return it->second;
}

ModelBundle parse_model(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ":" + std::to_string(line_of_byte(text, e.byte)) +
                     ": " + e.what());
  }
  if (!doc.is_object()) throw ValidationError("model document must be an object");

  ModelBundle bundle;
  std::string kind = string_at(require(doc, "kind"), "kind");
  if (kind == "rates") {
    bundle.kind = ModelKind::Rates;
  } else if (kind == "hamiltonian") {
    bundle.kind = ModelKind::Hamiltonian;
  } else if (kind == "cycles") {
    bundle.kind = ModelKind::Cycles;
  } else if (kind == "torus") {
    bundle.kind = ModelKind::Torus;
  } else {
    fail("kind", "must be rates, hamiltonian, cycles, or torus (got \"" + kind +
                     "\")");
  }

  switch (bundle.kind) {
    case ModelKind::Rates:
      bundle.space = parse_states(doc);
      parse_rates(doc, bundle);
      break;
    case ModelKind::Hamiltonian:
      bundle.space = parse_states(doc);
      parse_hamiltonian(doc, bundle);
      break;
    case ModelKind::Cycles:
      bundle.space = parse_states(doc);
      parse_cycles(doc, bundle);
      break;
    case ModelKind::Torus:
      parse_torus(doc, bundle);
      break;
  }
  parse_observables(doc, bundle);
  return bundle;
}

ModelBundle load_model(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ParseError("cannot open model file: " + path);
  std::ostringstream text;
  text << file.rdbuf();
  return parse_model(text.str(), path);
}

}  // namespace fdtlab
