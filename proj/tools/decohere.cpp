// decohere: command-line front end. Writes CSV to --out or stdout.
// Exit codes: 0 success, 2 configuration/validation error, 3 numeric failure.

#include "decohere/config.hpp"
#include "decohere/errors.hpp"
#include "decohere/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

using namespace decohere;
using namespace decohere::cli;

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

void emit(const Table& table, const std::string& out) {
    if (out.empty()) {
        table.write_csv(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw ValidationError("cannot open output file '" + out + "'");
    }
    table.write_csv(f);
    if (!f.flush()) {
        throw ValidationError("failed writing '" + out + "'");
    }
}

void warn_cronon(const RunConfig& cfg) {
    if (auto w = cronon_warning(cfg.times, build_params(cfg))) {
        std::cerr << *w << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Intrinsic-decoherence density-matrix evolution"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    std::string config_path, out_path;

    auto* evolve = app.add_subcommand("evolve", "Closed-form evolution of a configured system");
    evolve->add_option("--config", config_path, "JSON run configuration")->required();
    evolve->add_option("--out", out_path, "Output CSV (default: config 'output', else stdout)");

    std::vector<double> omegas;
    double tau1 = 0.1, tau2 = 0.1, hbar = 1.0;
    auto* rates = app.add_subcommand("rates", "Damping rate and frequency shift per Bohr frequency");
    rates->add_option("--omega", omegas, "Comma-separated frequencies")->required()->delimiter(',');
    rates->add_option("--tau1", tau1)->required();
    rates->add_option("--tau2", tau2)->required();
    rates->add_option("--hbar", hbar);
    rates->add_option("--out", out_path);

    std::string scenario_name;
    ScenarioOptions so;
    auto* scenario = app.add_subcommand("scenario", "Built-in physical scenario");
    scenario->add_option("name", scenario_name, "oscillator | free-particle | cat | spin | rabi | epr")->required();
    scenario->add_option("--tau1", so.tau1);
    scenario->add_option("--tau2", so.tau2);
    scenario->add_option("--hbar", so.hbar);
    scenario->add_option("--t-max", so.t_max);
    scenario->add_option("--steps", so.steps);
    scenario->add_option("--alpha-re", so.alpha_re);
    scenario->add_option("--alpha-im", so.alpha_im);
    scenario->add_option("--omega", so.omega);
    scenario->add_option("--dim", so.dim);
    scenario->add_option("--sigma-x", so.sigma_x);
    scenario->add_option("--sigma-v", so.sigma_v);
    scenario->add_option("--separation", so.separation);
    scenario->add_option("--mass", so.mass);
    scenario->add_option("--x-min", so.x_min);
    scenario->add_option("--x-max", so.x_max);
    scenario->add_option("--x-count", so.x_count);
    scenario->add_option("--omega0", so.omega0);
    scenario->add_option("--length", so.length);
    scenario->add_option("--velocity", so.velocity);
    scenario->add_option("--g", so.g);
    scenario->add_option("--n", so.n_photons);
    scenario->add_option("--out", out_path);

    std::size_t samples = 10000;
    std::optional<std::uint64_t> seed;
    auto* mc = app.add_subcommand("mc", "Monte-Carlo estimate over sampled effective times");
    mc->add_option("--config", config_path)->required();
    mc->add_option("--samples", samples);
    mc->add_option("--seed", seed);
    mc->add_option("--out", out_path);

    std::string observable = "H";
    double t_check = 0.0;
    std::size_t fuzz = 0;
    auto* tm = app.add_subcommand("tm-check", "Finite-difference time-energy inequality");
    tm->add_option("--config", config_path)->required();
    tm->add_option("--observable", observable);
    tm->add_option("--t", t_check)->required();
    tm->add_option("--fuzz", fuzz, "Additional random systems");
    tm->add_option("--seed", seed);
    tm->add_option("--out", out_path);

    double t_dist = 0.0;
    std::string grid;
    auto* dist = app.add_subcommand("dist", "Waiting-time density on a grid");
    dist->add_option("--t", t_dist)->required();
    dist->add_option("--tau1", tau1)->required();
    dist->add_option("--tau2", tau2)->required();
    dist->add_option("--hbar", hbar);
    dist->add_option("--grid", grid, "a:b:n")->required();
    dist->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (evolve->parsed()) {
            const RunConfig cfg = load_config(config_path);
            warn_cronon(cfg);
            emit(run_evolve(cfg), out_path.empty() ? cfg.output.value_or("") : out_path);
        } else if (rates->parsed()) {
            emit(run_rates(omegas, DecoherenceParams(tau1, tau2, hbar)), out_path);
        } else if (scenario->parsed()) {
            emit(run_scenario(scenario_name, so), out_path);
        } else if (mc->parsed()) {
            const RunConfig cfg = load_config(config_path);
            warn_cronon(cfg);
            emit(run_mc(cfg, samples, seed.value_or(cfg.seed.value_or(0))), out_path);
        } else if (tm->parsed()) {
            const RunConfig cfg = load_config(config_path);
            const TmRun run = run_tm_check(cfg, observable, t_check, fuzz, seed.value_or(cfg.seed.value_or(0)));
            emit(run.table, out_path);
            if (run.violations > 0) {
                std::cerr << "error: " << run.violations << " time-energy inequality violation(s)\n";
                return kExitNumeric;
            }
        } else if (dist->parsed()) {
            emit(run_dist(t_dist, DecoherenceParams(tau1, tau2, hbar), parse_grid(grid)), out_path);
        }
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kExitNumeric;
    }
    return 0;
}
