// runner.hpp: Subcommand drivers. Each returns a Table; the caller decides
// where the CSV goes.

#pragma once

#include "decohere/config.hpp"
#include "decohere/table.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace decohere::cli {

// time, rho_<n>_<m>_re/_im for tracked elements (input basis), one column per
// observable. Metadata lists the distinct Bohr frequencies with gamma and nu.
Table run_evolve(const RunConfig& cfg);

// omega, gamma, nu rows in input order.
Table run_rates(const std::vector<double>& omegas, const DecoherenceParams& params);

struct ScenarioOptions {
    double tau1 = 0.1;
    double tau2 = 0.1;
    double hbar = 1.0;
    double t_max = 10.0;
    std::size_t steps = 201;

    // oscillator
    double alpha_re = 2.0;
    double alpha_im = 0.0;
    double omega = 1.0;
    std::size_t dim = 0;  // 0 = smallest admissible truncation

    // free particle and cat
    double sigma_x = 1.0;
    double sigma_v = 1.0;  // free particle only; the cat uses minimum uncertainty
    double separation = 10.0;
    double mass = 1.0;
    double x_min = -10.0;
    double x_max = 10.0;
    std::size_t x_count = 41;

    // spin, epr, rabi
    double omega0 = 1.0;
    double length = 1.0;
    double velocity = 1.0;
    double g = 5.0;
    std::uint64_t n_photons = 0;
};

// name: oscillator | free-particle | cat | spin | rabi | epr. Time grid is the
// inclusive span [0, t_max] with `steps` points.
Table run_scenario(const std::string& name, const ScenarioOptions& opt);

// Seeded Monte-Carlo estimates next to the closed form. The stream for time
// index i is derived from (seed, i), so rows do not depend on each other.
Table run_mc(const RunConfig& cfg, std::size_t samples, std::uint64_t seed);

struct TmRun {
    Table table;
    std::size_t violations = 0;
};

// Row 0 is the configured case; rows 1..fuzz are random systems with N <= 4
// drawn from `seed`, using the configured tau1, tau2 and hbar.
TmRun run_tm_check(const RunConfig& cfg, const std::string& observable, double t, std::size_t fuzz,
                   std::uint64_t seed);

struct DistGrid {
    double lo;
    double hi;
    std::size_t count;
};

// "a:b:n" -> inclusive span. ValidationError on malformed input.
DistGrid parse_grid(const std::string& text);

// t_prime, pdf, singular columns.
Table run_dist(double t, const DecoherenceParams& params, const DistGrid& grid);

}  // namespace decohere::cli
