#include "decohere/runner.hpp"

#include "decohere/errors.hpp"
#include "decohere/evolution.hpp"
#include "decohere/models.hpp"
#include "decohere/observables.hpp"
#include "decohere/rng.hpp"
#include "decohere/trajectories.hpp"
#include "decohere/waiting_time.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace decohere::cli {

namespace {

std::string num(double x) { return format_number(x); }

void add_header(Table& table, const std::string& command, const DecoherenceParams& params) {
    table.add_metadata(std::string("decohere ") + kVersion);
    table.add_metadata("command: " + command);
    table.add_metadata("params: hbar=" + num(params.hbar()) + " tau1=" + num(params.tau1()) +
                       " tau2=" + num(params.tau2()));
}

void add_seed(Table& table, std::uint64_t seed) {
    table.add_metadata("seed: " + std::to_string(seed));
    table.add_metadata(std::string("rng: ") + kRngName);
}

void add_rate(Table& table, const std::string& label, double omega, const DecoherenceParams& params) {
    table.add_metadata("rate: " + (label.empty() ? std::string() : label + " ") + "omega=" + num(omega) +
                       " gamma=" + num(damping_rate(omega, params)) + " nu=" + num(frequency_shift(omega, params)));
}

// Distinct positive Bohr frequencies, ascending.
std::vector<double> distinct_frequencies(const FrequencyMatrix& f) {
    std::vector<double> w;
    for (Eigen::Index n = 0; n < f.omegas.rows(); ++n) {
        for (Eigen::Index m = 0; m < n; ++m) {
            const double x = std::abs(f.omegas(n, m));
            if (x > 0.0) {
                w.push_back(x);
            }
        }
    }
    std::sort(w.begin(), w.end());
    std::vector<double> out;
    for (double x : w) {
        if (out.empty() || x - out.back() > 1e-12 * std::max(1.0, x)) {
            out.push_back(x);
        }
    }
    return out;
}

std::string element_name(std::size_t n, std::size_t m) {
    return "rho_" + std::to_string(n) + "_" + std::to_string(m);
}

std::vector<double> linspace(double lo, double hi, std::size_t count) {
    return TimeGrid{lo, hi, count}.values();
}

Matrix random_hermitian(Xoshiro256& rng, Eigen::Index n) {
    Matrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            g(i, j) = cplx(rng.normal(), rng.normal());
        }
    }
    return hermitian_part(g);
}

Matrix random_density(Xoshiro256& rng, Eigen::Index n) {
    Matrix g(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            g(i, j) = cplx(rng.normal(), rng.normal());
        }
    }
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return hermitian_part(rho);
}

struct TmColumns {
    std::vector<double> t, delta, sigma_a, sigma_h, tau_e, lhs, rhs, slack, satisfied, tau_e_inf, sigma_a_zero;

    void push(double time, const TmReport& r) {
        t.push_back(time);
        delta.push_back(r.delta_a_bar);
        sigma_a.push_back(r.sigma_a);
        sigma_h.push_back(r.sigma_h);
        tau_e.push_back(r.tau_e);
        lhs.push_back(r.lhs);
        rhs.push_back(r.rhs);
        slack.push_back(r.slack);
        satisfied.push_back(r.satisfied ? 1.0 : 0.0);
        tau_e_inf.push_back(r.tau_e_infinite ? 1.0 : 0.0);
        sigma_a_zero.push_back(r.sigma_a_zero ? 1.0 : 0.0);
    }
};

// ------------------------------------------------------------------ scenarios

Table scenario_oscillator(const ScenarioOptions& o, const DecoherenceParams& params, const std::vector<double>& ts) {
    const cplx alpha(o.alpha_re, o.alpha_im);
    const models::OscillatorScenario sc{alpha, o.omega,
                                        o.dim == 0 ? models::OscillatorScenario::minimum_dim(alpha) : o.dim};
    const DensityMatrix rho0 = models::coherent_state(sc);
    const SpectralHamiltonian spec = models::oscillator_hamiltonian(sc, params);
    const Matrix a = models::annihilation(sc.dim);
    const Matrix number = a.adjoint() * a;

    std::vector<cplx> mean_a, closed;
    std::vector<double> mean_n;
    for (double t : ts) {
        const DensityMatrix rho = propagate_closed_form(rho0, spec, params, t);
        mean_a.push_back((rho.entries() * a).trace());
        closed.push_back(models::coherent_amplitude(sc, params, t));
        mean_n.push_back(expectation(rho, number));
    }
    Table table = Table::time_series(ts);
    add_header(table, "scenario oscillator", params);
    table.add_metadata("dim: " + std::to_string(sc.dim));
    add_rate(table, "", o.omega, params);
    table.add_complex("a", mean_a);
    table.add_complex("a_closed", closed);
    table.add("n_mean", mean_n);
    return table;
}

Table scenario_free_particle(const ScenarioOptions& o, const DecoherenceParams& params,
                             const std::vector<double>& ts) {
    std::vector<double> quad, closed, tbar;
    for (double t : ts) {
        quad.push_back(models::free_particle_averaged_variance(o.sigma_x, o.sigma_v, params, t));
        closed.push_back(models::free_particle_spread(o.sigma_x, o.sigma_v, params, t));
        tbar.push_back(t * params.tau1() / params.tau2());
    }
    Table table = Table::time_series(ts);
    add_header(table, "scenario free-particle", params);
    table.add_metadata("sigma_x=" + num(o.sigma_x) + " sigma_v=" + num(o.sigma_v));
    table.add("tbar", tbar);
    table.add("variance", quad);
    table.add("variance_closed", closed);
    return table;
}

Table scenario_cat(const ScenarioOptions& o, const DecoherenceParams& params, const std::vector<double>& ts) {
    const auto sc = models::CatScenario::minimum_uncertainty(o.sigma_x, o.separation, o.mass, params.hbar());
    if (o.x_count < 1 || !(o.x_max >= o.x_min) || (o.x_count > 1 && !(o.x_max > o.x_min))) {
        throw ValidationError("cat: need x_count >= 1 and x_max > x_min");
    }
    const std::vector<double> xs = o.x_count == 1 ? std::vector<double>{o.x_min} : linspace(o.x_min, o.x_max, o.x_count);

    Table table = Table::time_series(ts);
    add_header(table, "scenario cat", params);
    table.add_metadata("sigma_x=" + num(sc.sigma_x) + " sigma_v=" + num(sc.sigma_v) + " separation=" +
                       num(sc.separation) + " mass=" + num(sc.mass));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        table.add_metadata("x_" + std::to_string(i) + "=" + num(xs[i]));
    }

    std::vector<double> interference0, halfwidth;
    std::vector<cplx> coherence0;
    for (double t : ts) {
        interference0.push_back(models::cat_interference(sc, params, 0.0, t));
        coherence0.push_back(models::cat_coherence(sc, params, 0.0, t));
        halfwidth.push_back(models::cat_undamped_halfwidth(sc, params, t));
    }
    table.add("interference_x0", interference0);
    table.add_complex("coherence_x0", coherence0);
    table.add("undamped_halfwidth", halfwidth);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::vector<double> density;
        for (double t : ts) {
            density.push_back(models::cat_density(sc, params, xs[i], t));
        }
        table.add("density_" + std::to_string(i), density);
    }
    return table;
}

Table scenario_spin(const ScenarioOptions& o, const DecoherenceParams& params, const std::vector<double>& ts) {
    const models::TwoLevelScenario sc{models::TwoLevelKind::spin_larmor, o.omega0, 0, 0.0, o.length, o.velocity};
    const auto spec = models::spin_hamiltonian(sc, params);
    const auto rho0 = models::spin_initial_state();
    std::vector<double> plus, minus;
    std::vector<cplx> coherence;
    for (double t : ts) {
        const auto sg = models::spin_stern_gerlach(sc, params, t);
        plus.push_back(sg.p_plus_x);
        minus.push_back(sg.p_minus_x);
        coherence.push_back(propagate_closed_form(rho0, spec, params, t).entries()(0, 1));
    }
    const auto c = models::two_level_coherence(sc, params);
    Table table = Table::time_series(ts);
    add_header(table, "scenario spin", params);
    add_rate(table, "", sc.frequency(), params);
    table.add_metadata("transit: L=" + num(sc.length) + " v=" + num(sc.velocity) + " survival=" + num(c.survival));
    table.add("p_plus_x", plus);
    table.add("p_minus_x", minus);
    table.add_complex("coherence", coherence);
    return table;
}

Table scenario_rabi(const ScenarioOptions& o, const DecoherenceParams& params, const std::vector<double>& ts) {
    const models::TwoLevelScenario sc{models::TwoLevelKind::rabi_fock, 0.0, o.n_photons, o.g, o.length, o.velocity};
    const auto c = models::two_level_coherence(sc, params);
    std::vector<double> d, upper, envelope;
    for (double t : ts) {
        const double dt = models::rabi_population_difference(sc, params, t);
        d.push_back(dt);
        upper.push_back(0.5 * (1.0 + dt));
        envelope.push_back(std::exp(-c.gamma * t));
    }
    Table table = Table::time_series(ts);
    add_header(table, "scenario rabi", params);
    table.add_metadata("g=" + num(sc.g) + " n=" + std::to_string(sc.n_photons) + " Omega=" + num(sc.frequency()));
    add_rate(table, "", sc.frequency(), params);
    std::vector<std::uint64_t> ns;
    for (std::uint64_t n = 0; n <= std::max<std::uint64_t>(sc.n_photons, 5); ++n) {
        ns.push_back(n);
    }
    const auto tab = models::rabi_damping_vs_n(sc.g, ns, params);
    for (const auto& row : tab.rows) {
        table.add_metadata("rabi: n=" + std::to_string(row.n) + " gamma=" + num(row.gamma));
    }
    table.add("d", d);
    table.add("p_upper", upper);
    table.add("envelope", envelope);
    return table;
}

Table scenario_epr(const ScenarioOptions& o, const DecoherenceParams& params, const std::vector<double>& ts) {
    const models::TwoLevelScenario sc{models::TwoLevelKind::epr_singlet, o.omega0, 0, 0.0, o.length, o.velocity};
    const auto spec = models::epr_hamiltonian(sc, params);
    const auto rho0 = models::epr_singlet();
    std::vector<cplx> cross;
    std::vector<double> survival, xx;
    for (double t : ts) {
        const DensityMatrix rho = propagate_closed_form(rho0, spec, params, t);
        cross.push_back(rho.entries()(1, 2));
        survival.push_back(std::abs(rho.entries()(1, 2)) / 0.5);
        xx.push_back(models::epr_correlation_xx(rho));
    }
    const auto c = models::two_level_coherence(sc, params);
    Table table = Table::time_series(ts);
    add_header(table, "scenario epr", params);
    add_rate(table, "", sc.frequency(), params);
    table.add_metadata("transit: L=" + num(sc.length) + " v=" + num(sc.velocity) + " survival=" + num(c.survival));
    table.add_complex("cross_coherence", cross);
    table.add("survival", survival);
    table.add("correlation_xx", xx);
    return table;
}

}  // namespace

Table run_evolve(const RunConfig& cfg) {
    const DecoherenceParams params = build_params(cfg);
    const SpectralHamiltonian spec = build_hamiltonian(cfg);
    const DensityMatrix rho0 = build_initial_state(cfg);
    const std::vector<double> ts = cfg.times.values();

    std::vector<Matrix> observables;
    for (const auto& o : cfg.observables) {
        observables.push_back(build_observable(cfg, o, spec));
    }
    std::vector<std::vector<cplx>> elements(cfg.track_elements.size());
    std::vector<std::vector<double>> values(observables.size());
    for (double t : ts) {
        const DensityMatrix rho = propagate_closed_form(rho0, spec, params, t);
        for (std::size_t k = 0; k < cfg.track_elements.size(); ++k) {
            const auto [n, m] = cfg.track_elements[k];
            elements[k].push_back(rho.entries()(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)));
        }
        for (std::size_t k = 0; k < observables.size(); ++k) {
            values[k].push_back(expectation(rho, observables[k]));
        }
    }

    Table table = Table::time_series(ts);
    add_header(table, "evolve", params);
    table.add_metadata("dim: " + std::to_string(spec.dim()));
    for (double w : distinct_frequencies(bohr_frequencies(spec, params))) {
        add_rate(table, "", w, params);
    }
    for (std::size_t k = 0; k < cfg.track_elements.size(); ++k) {
        const auto [n, m] = cfg.track_elements[k];
        table.add_complex(element_name(n, m), elements[k]);
    }
    for (std::size_t k = 0; k < observables.size(); ++k) {
        table.add(cfg.observables[k].name, values[k]);
    }
    return table;
}

Table run_rates(const std::vector<double>& omegas, const DecoherenceParams& params) {
    if (omegas.empty()) {
        throw ValidationError("rates: empty omega list");
    }
    std::vector<double> gamma, nu, index;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        if (!std::isfinite(omegas[i])) {
            throw ValidationError("rates: omega[" + std::to_string(i) + "] is not finite");
        }
        index.push_back(static_cast<double>(i));
        gamma.push_back(damping_rate(omegas[i], params));
        nu.push_back(frequency_shift(omegas[i], params));
    }
    Table table("index", index, true);
    add_header(table, "rates", params);
    table.add("omega", omegas);
    table.add("gamma", gamma);
    table.add("nu", nu);
    return table;
}

Table run_scenario(const std::string& name, const ScenarioOptions& opt) {
    const DecoherenceParams params(opt.tau1, opt.tau2, opt.hbar);
    if (!(opt.t_max > 0.0) || !std::isfinite(opt.t_max)) {
        throw ValidationError("scenario: --t-max must be positive");
    }
    if (opt.steps < 2) {
        throw ValidationError("scenario: --steps must be >= 2");
    }
    const std::vector<double> ts = linspace(0.0, opt.t_max, opt.steps);
    if (name == "oscillator") {
        return scenario_oscillator(opt, params, ts);
    }
    if (name == "free-particle") {
        return scenario_free_particle(opt, params, ts);
    }
    if (name == "cat") {
        return scenario_cat(opt, params, ts);
    }
    if (name == "spin") {
        return scenario_spin(opt, params, ts);
    }
    if (name == "rabi") {
        return scenario_rabi(opt, params, ts);
    }
    if (name == "epr") {
        return scenario_epr(opt, params, ts);
    }
    throw ValidationError("scenario: unknown name '" + name +
                          "' (expected oscillator, free-particle, cat, spin, rabi or epr)");
}

Table run_mc(const RunConfig& cfg, std::size_t samples, std::uint64_t seed) {
    const DecoherenceParams params = build_params(cfg);
    const SpectralHamiltonian spec = build_hamiltonian(cfg);
    const DensityMatrix rho0 = build_initial_state(cfg);
    const std::vector<double> ts = cfg.times.values();
    if (samples < 2) {
        throw DomainError("mc: --samples must be >= 2");
    }

    std::vector<Matrix> observables;
    for (const auto& o : cfg.observables) {
        observables.push_back(build_observable(cfg, o, spec));
    }
    const std::size_t ne = cfg.track_elements.size();
    std::vector<std::vector<cplx>> est(ne), closed(ne);
    std::vector<std::vector<double>> se(ne);
    std::vector<std::vector<double>> o_est(observables.size()), o_se(observables.size()), o_closed(observables.size());

    for (std::size_t i = 0; i < ts.size(); ++i) {
        const McConfig mc{samples, mix64(seed ^ mix64(static_cast<std::uint64_t>(i))), 0};
        const DensityMatrix exact = propagate_closed_form(rho0, spec, params, ts[i]);
        if (ne > 0) {
            const DensityEstimate d = mc_estimate_density(rho0, spec, params, ts[i], mc);
            for (std::size_t k = 0; k < ne; ++k) {
                const auto n = static_cast<Eigen::Index>(cfg.track_elements[k].first);
                const auto m = static_cast<Eigen::Index>(cfg.track_elements[k].second);
                est[k].push_back(d.estimate(n, m));
                se[k].push_back(d.std_error(n, m));
                closed[k].push_back(exact.entries()(n, m));
            }
        }
        for (std::size_t k = 0; k < observables.size(); ++k) {
            const ObservableEstimate e = mc_estimate_observable(rho0, spec, params, observables[k], ts[i], mc);
            o_est[k].push_back(e.value);
            o_se[k].push_back(e.std_error);
            o_closed[k].push_back(expectation(exact, observables[k]));
        }
    }

    Table table = Table::time_series(ts);
    add_header(table, "mc", params);
    add_seed(table, seed);
    table.add_metadata("samples: " + std::to_string(samples));
    for (std::size_t k = 0; k < ne; ++k) {
        const std::string base = element_name(cfg.track_elements[k].first, cfg.track_elements[k].second);
        table.add_complex(base + "_mc", est[k]);
        table.add(base + "_se", se[k]);
        table.add_complex(base, closed[k]);
    }
    for (std::size_t k = 0; k < observables.size(); ++k) {
        const std::string& base = cfg.observables[k].name;
        table.add(base + "_mc", o_est[k]);
        table.add(base + "_se", o_se[k]);
        table.add(base, o_closed[k]);
    }
    return table;
}

TmRun run_tm_check(const RunConfig& cfg, const std::string& observable, double t, std::size_t fuzz,
                   std::uint64_t seed) {
    const DecoherenceParams params = build_params(cfg);
    const SpectralHamiltonian spec = build_hamiltonian(cfg);
    const DensityMatrix rho0 = build_initial_state(cfg);
    const Matrix a = build_observable(cfg, observable, spec);

    TmColumns cols;
    std::vector<double> cases;
    cases.push_back(0.0);
    cols.push(t, tm_check(rho0, spec, params, a, t));
    for (std::size_t i = 1; i <= fuzz; ++i) {
        Xoshiro256 rng = Xoshiro256::substream(seed, i);
        const auto n = static_cast<Eigen::Index>(2 + std::min<std::uint64_t>(2, rng() % 3));
        const SpectralHamiltonian h = diagonalize_hamiltonian(random_hermitian(rng, n));
        const DensityMatrix rho = validate_density_matrix(random_density(rng, n));
        const Matrix obs = random_hermitian(rng, n);
        const double ti = params.tau2() * (1.0 + 19.0 * rng.uniform());
        cases.push_back(static_cast<double>(i));
        cols.push(ti, tm_check(rho, h, params, obs, ti));
    }

    TmRun run{Table("case", cases, true), 0};
    Table& table = run.table;
    add_header(table, "tm-check", params);
    if (fuzz > 0) {
        add_seed(table, seed);
    }
    table.add_metadata("observable: " + observable);
    table.add("t", cols.t);
    table.add("delta_a_bar", cols.delta);
    table.add("sigma_a", cols.sigma_a);
    table.add("sigma_h", cols.sigma_h);
    table.add("tau_e", cols.tau_e);
    table.add("lhs", cols.lhs);
    table.add("rhs", cols.rhs);
    table.add("slack", cols.slack);
    table.add("satisfied", cols.satisfied);
    table.add("tau_e_infinite", cols.tau_e_inf);
    table.add("sigma_a_zero", cols.sigma_a_zero);
    for (double s : cols.satisfied) {
        run.violations += s == 0.0 ? 1 : 0;
    }
    return run;
}

DistGrid parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        parts.push_back(item);
    }
    if (parts.size() != 3) {
        throw ValidationError("--grid: expected a:b:n, got '" + text + "'");
    }
    DistGrid g{};
    try {
        std::size_t pos = 0;
        g.lo = std::stod(parts[0], &pos);
        if (pos != parts[0].size()) throw std::invalid_argument("trailing");
        g.hi = std::stod(parts[1], &pos);
        if (pos != parts[1].size()) throw std::invalid_argument("trailing");
        const long long n = std::stoll(parts[2], &pos);
        if (pos != parts[2].size() || n < 2) throw std::invalid_argument("count");
        g.count = static_cast<std::size_t>(n);
    } catch (const std::exception&) {
        throw ValidationError("--grid: expected a:b:n with numbers a < b and integer n >= 2, got '" + text + "'");
    }
    if (!(g.lo >= 0.0) || !(g.hi > g.lo) || !std::isfinite(g.hi)) {
        throw ValidationError("--grid: need 0 <= a < b");
    }
    if (g.count > 10'000'000) {
        throw ValidationError("--grid: n must be <= 10000000");
    }
    return g;
}

Table run_dist(double t, const DecoherenceParams& params, const DistGrid& grid) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw DomainError("dist: --t must be > 0");
    }
    const std::vector<double> xs = linspace(grid.lo, grid.hi, grid.count);
    std::vector<double> pdf, singular;
    for (double x : xs) {
        const auto p = waiting_time::gamma_pdf(x, t, params);
        pdf.push_back(p.value);
        singular.push_back(p.singular ? 1.0 : 0.0);
    }
    const auto m = waiting_time::gamma_moments(t, params);
    Table table("t_prime", xs, true);
    add_header(table, "dist", params);
    table.add_metadata("t=" + num(t) + " shape=" + num(params.shape(t)) + " scale=" + num(params.tau1()) +
                       " mean=" + num(m.mean) + " sigma=" + num(m.sigma));
    table.add("pdf", pdf);
    table.add("singular", singular);
    return table;
}

}  // namespace decohere::cli
