// config.hpp: JSON run configuration for the command-line front end.
//
// Schema (all matrices as {"re": [[...]], "im": [[...]]}, "im" optional):
//   hbar, tau1, tau2
//   hamiltonian:   {"eigenvalues": [...]} | {"matrix": M}
//   initial_state: {"matrix": M} | {"pure_vector": {"re": [...], "im": [...]}}
//                | {"coherent": {"alpha_re", "alpha_im", "dim"}}
//   times:         {"start", "stop", "count"}
//   observables:   [{"name", "matrix": M}]   ("H" without a matrix = Hamiltonian)
//   track_elements: [[n, m], ...]
//   seed, output   (optional)

#pragma once

#include "decohere/core.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace decohere::cli {

struct TimeGrid {
    double start = 0.0;
    double stop = 1.0;
    std::size_t count = 2;

    // Inclusive linear span; the last point is exactly stop.
    std::vector<double> values() const;
    double spacing() const { return (stop - start) / static_cast<double>(count - 1); }
};

struct HamiltonianSpec {
    std::optional<std::vector<double>> eigenvalues;
    std::optional<Matrix> matrix;
};

enum class StateKind { matrix, pure_vector, coherent };

struct StateSpec {
    StateKind kind = StateKind::matrix;
    Matrix matrix;       // kind == matrix
    Vector vector;       // kind == pure_vector
    cplx alpha;          // kind == coherent
    std::size_t dim = 0; // kind == coherent
};

struct ObservableSpec {
    std::string name;
    std::optional<Matrix> matrix;  // absent only for "H"
};

struct RunConfig {
    double hbar = 1.0;
    double tau1 = 0.1;
    double tau2 = 0.1;
    HamiltonianSpec hamiltonian;
    StateSpec initial_state;
    TimeGrid times;
    std::vector<ObservableSpec> observables;
    std::vector<std::pair<std::size_t, std::size_t>> track_elements;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output;

    std::size_t dim() const;
};

bool operator==(const RunConfig& a, const RunConfig& b);

// Throws ValidationError naming the offending field path (e.g.
// "initial_state.matrix.re[1][0]") for malformed JSON or semantic violations.
RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& cfg);

RunConfig load_config(const std::string& path);

DecoherenceParams build_params(const RunConfig& cfg);
SpectralHamiltonian build_hamiltonian(const RunConfig& cfg);
DensityMatrix build_initial_state(const RunConfig& cfg);
// Observable in the input basis; "H" without an explicit matrix is the Hamiltonian.
Matrix build_observable(const RunConfig& cfg, const ObservableSpec& obs, const SpectralHamiltonian& spec);
// Lookup by name; ValidationError if unknown.
Matrix build_observable(const RunConfig& cfg, const std::string& name, const SpectralHamiltonian& spec);

// Message when the grid spacing is not a whole number of cronons.
std::optional<std::string> cronon_warning(const TimeGrid& grid, const DecoherenceParams& params);

}  // namespace decohere::cli
