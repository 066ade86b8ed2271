#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fdtlab/family.hpp"
#include "fdtlab/torus.hpp"

namespace fdtlab {

enum class ModelKind { Rates, Hamiltonian, Cycles, Torus };

std::string model_kind_name(ModelKind kind);

/// One loaded model document: a finite-state chain given by explicit rates,
/// an energy landscape on a graph, a list of oriented cycles with a base
/// measure, or a torus diffusion. Finite-state kinds carry named observables
/// as state vectors; the torus kind carries them as trigonometric series.
struct ModelBundle {
  ModelKind kind = ModelKind::Rates;

  StateSpace space;                       // finite-state kinds
  std::optional<Generator> generator;     // kind == Rates
  std::optional<HamiltonianGraph> graph;  // kind == Hamiltonian
  std::vector<CycleWeight> cycles;        // kind == Cycles
  std::optional<Measure> mu0;             // kind == Cycles
  std::map<std::string, Observable> observables;

  std::optional<TorusModel> torus;        // kind == Torus
  std::map<std::string, FourierSeries> torus_observables;

  bool finite_state() const { return kind != ModelKind::Torus; }
  const Observable& observable(const std::string& name) const;
  const FourierSeries& torus_observable(const std::string& name) const;
};

/// Parses a model document. ParseError carries the line of a syntax error;
/// ValidationError names the violated field (e.g. "rates[3].rate < 0").
ModelBundle parse_model(const std::string& text,
                        const std::string& origin = "<memory>");

/// Reads and parses the file at path.
ModelBundle load_model(const std::string& path);

}  // namespace fdtlab
