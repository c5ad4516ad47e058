#include "oracles.hpp"

#include "decohere/errors.hpp"
#include "decohere/evolution.hpp"
#include "decohere/models.hpp"
#include "decohere/observables.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace decohere;
using namespace decohere::models;

TEST_SUITE("models") {

TEST_CASE("oscillator: truncated coherent state") {
    const OscillatorScenario sc{cplx(2.0, 0.0), 1.0, OscillatorScenario::minimum_dim(cplx(2.0, 0.0))};
    CHECK(sc.dim >= 44);
    const DensityMatrix rho = coherent_state(sc);
    CHECK(std::abs(rho.entries().trace() - 1.0) <= 1e-12);
    // Poisson weights survive the truncation
    for (std::size_t n = 0; n < 10; ++n) {
        const double poisson = std::exp(-4.0 + n * std::log(4.0) - std::lgamma(n + 1.0));
        CHECK(std::abs(rho.entries()(n, n).real() - poisson) <= 1e-10);
    }
    CHECK_THROWS_AS((OscillatorScenario{cplx(2.0, 0.0), 1.0, 40}.validate()), DomainError);
}

TEST_CASE("oscillator: coherent amplitude") {
    const DecoherenceParams p(0.1, 0.1);
    const cplx alpha(2.0, 0.0);
    const OscillatorScenario sc{alpha, 1.0, OscillatorScenario::minimum_dim(alpha)};
    CHECK(coherent_amplitude(sc, p, 0.0) == alpha);
    const cplx a1 = coherent_amplitude(sc, p, 1.0);
    CHECK(std::abs(a1) == doctest::Approx(1.902931375213498).epsilon(1e-13));
    CHECK(std::arg(a1) == doctest::Approx(-0.996686524911620).epsilon(1e-13));

    // matrix propagation of the truncated state
    const auto spec = oscillator_hamiltonian(sc, p);
    const Matrix a = annihilation(sc.dim);
    for (double t : {0.3, 1.0, 4.0}) {
        const DensityMatrix rho = propagate_closed_form(coherent_state(sc), spec, p, t);
        const cplx via_matrix = (rho.entries() * a).trace();
        CHECK(std::abs(via_matrix - coherent_amplitude(sc, p, t)) <= 1e-8);
    }

    double last = std::abs(alpha);
    for (double t = 0.25; t < 1e4; t *= 2.0) {
        const double m = std::abs(coherent_amplitude(sc, p, t));
        CHECK(m < last);
        last = m;
    }
    CHECK(last < 1e-10);
}

TEST_CASE("oscillator: Fock matrix elements") {
    const DecoherenceParams p(0.1, 0.1);
    const cplx alpha(1.5, -0.5);
    const OscillatorScenario sc{alpha, 1.0, OscillatorScenario::minimum_dim(alpha)};
    const double nbar = std::norm(alpha);
    for (std::size_t n = 0; n < 6; ++n) {
        const double poisson = std::exp(-nbar + n * std::log(nbar) - std::lgamma(n + 1.0));
        CHECK(std::abs(fock_matrix_decoherence(sc, p, 7.0, n, n) - poisson) <= 1e-14);
    }
    const DensityMatrix rho = propagate_closed_form(coherent_state(sc), oscillator_hamiltonian(sc, p), p, 1.0);
    // the truncated state is renormalized, so compare through the untruncated weight
    const cplx exact = fock_matrix_decoherence(sc, p, 1.0, 1, 0);
    const double renorm = rho.entries()(0, 0).real() / std::exp(-nbar);
    CHECK(std::abs(rho.entries()(1, 0) / renorm - exact) <= 1e-12);

    const double g10 = damping_rate(1.0, p);
    CHECK(fock_matrix_decoherence(sc, p, 1e3 / g10, 1, 0) == cplx(0.0, 0.0));
    CHECK_THROWS(fock_matrix_decoherence(sc, p, 1.0, sc.dim, 0));
}

TEST_CASE("milburn frozen frequencies") {
    const DecoherenceParams p(1.0, 1.0);
    const double w = 2.0 * std::numbers::pi;
    const MilburnContrast c = milburn_frozen_compare(w, p, 3.0);
    CHECK(std::abs(c.milburn) <= 1e-12);
    CHECK(c.ours / 3.0 == doctest::Approx(1.850384466706849).epsilon(1e-14));
    CHECK(c.ours / 3.0 == doctest::Approx(std::log1p(4.0 * std::numbers::pi * std::numbers::pi) / 2.0).epsilon(1e-15));

    const DecoherenceParams q(0.3, 0.5);
    const MilburnContrast d = milburn_frozen_compare(2.0 * std::numbers::pi / q.tau2(), q, 1.0);
    CHECK(d.ours == doctest::Approx(std::log1p(std::pow(2.0 * std::numbers::pi * 0.6, 2)) / 1.0).epsilon(1e-14));
    const MilburnContrast z = milburn_frozen_compare(1e-9, q, 1.0);
    CHECK(z.ours < 1e-15);
    CHECK(z.milburn < 1e-15);
}

TEST_CASE("free particle spread") {
    CHECK(free_particle_spread(0.7, 0.3, DecoherenceParams(0.1, 0.2), 0.0) == doctest::Approx(0.49).epsilon(1e-15));
    CHECK(free_particle_spread(1.0, 0.1, DecoherenceParams(0.01, 0.01), 10.0) == doctest::Approx(2.001).epsilon(1e-14));

    for (double t : {1.0, 5.0, 20.0}) {
        const DecoherenceParams p(0.01, 0.01);
        const double v = free_particle_averaged_variance(1.0, 0.5, p, t);
        const double e = free_particle_spread(1.0, 0.5, p, t);
        CHECK(std::abs(v - e) <= 0.01 * e);
    }
    const DecoherenceParams lim(0.001, 0.001);
    const double t = 10.0;
    CHECK(free_particle_spread(0.5, 0.2, lim, t) == doctest::Approx(0.25 + 0.04 * t * t).epsilon(1e-4));
}

TEST_CASE("cat: packets, frequencies and interference") {
    const CatScenario sc = CatScenario::minimum_uncertainty(1.0, 10.0, 1.0, 1.0);
    CHECK(sc.sigma_v == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(cat_frequency(sc, 0.0) == 0.0);
    CHECK(cat_frequency(sc, -2.0) == -cat_frequency(sc, 2.0));
    CHECK(cat_packet(sc, 1, 5.0) > cat_packet(sc, 2, 5.0));
    CHECK(cat_packet(sc, 1, -3.0) == doctest::Approx(cat_packet(sc, 2, 3.0)).epsilon(1e-15));

    const DecoherenceParams p(0.1, 0.2);
    const double i0 = cat_interference(sc, p, 0.0, 0.0);
    for (double t : {0.0, 1.0, 10.0, 1e4}) {
        CHECK(cat_interference(sc, p, 0.0, t) == i0);
    }

    oracle::Gen gen(51);
    for (int trial = 0; trial < 50; ++trial) {
        const double x = gen.uniform(-8.0, 8.0);
        const double w = cat_frequency(sc, x);
        const double t = gen.uniform(0.5, 20.0);
        const cplx c = cat_coherence(sc, p, x, t);
        const double rate = -std::log(std::abs(c)) / t;
        CHECK(std::abs(rate - damping_rate(w, p)) <= 1e-12 * std::max(1.0, damping_rate(w, p)));
        const double s = averaged_signal({[w](double u) { return std::cos(w * u); }, 1.0}, std::max(t, p.tau2()), p);
        CHECK(std::abs(s - cat_coherence(sc, p, x, std::max(t, p.tau2())).real()) <= 1e-8);
    }
}

TEST_CASE("cat: normalization and the macroscopic trend") {
    const CatScenario sc = CatScenario::minimum_uncertainty(1.0, 12.0, 1.0, 1.0);
    const DecoherenceParams p(0.1, 0.2);
    for (double t : {0.0, 2.0, 50.0}) {
        double norm = 0.0;
        const double h = 0.01;
        for (double x = -30.0; x <= 30.0; x += h) {
            norm += cat_density(sc, p, x, t) * h;
        }
        CHECK(std::abs(norm - 1.0) <= 1e-6);
    }

    double last = INFINITY;
    for (double mass : {1.0, 10.0, 100.0, 1000.0}) {
        const CatScenario heavy = CatScenario::minimum_uncertainty_from_velocity(0.5, 10.0, mass, 1.0);
        const double w = cat_undamped_halfwidth(heavy, p, 5.0);
        CHECK(w < last);
        last = w;
    }
}

TEST_CASE("two-level coherence and survival") {
    const DecoherenceParams p(0.1, 0.1);
    TwoLevelScenario off{TwoLevelKind::spin_larmor, 0.0};
    CHECK(two_level_coherence(off, p).survival == 1.0);

    TwoLevelScenario spin{TwoLevelKind::spin_larmor, 1.0};
    spin.length = 2.0 * std::numbers::pi;
    spin.velocity = 1.0;
    const TwoLevelCoherence c = two_level_coherence(spin, p);
    CHECK(c.survival == doctest::Approx(0.731543302739390).epsilon(1e-13));
    CHECK(c.gamma * spin.transit_time() == doctest::Approx(0.312598863091007).epsilon(1e-13));

    // closed-form propagation of the 2x2 system
    const DensityMatrix out = propagate_closed_form(spin_initial_state(), spin_hamiltonian(spin, p), p, spin.transit_time());
    CHECK(std::abs(std::abs(out.entries()(0, 1)) / 0.5 - c.survival) <= 1e-12);
    const SternGerlach sg = spin_stern_gerlach(spin, p, spin.transit_time());
    CHECK(sg.p_plus_x + sg.p_minus_x == doctest::Approx(1.0).epsilon(1e-15));
    const SternGerlach late = spin_stern_gerlach(spin, p, 1e3);
    CHECK(std::abs(late.p_plus_x - 0.5) <= 1e-12);

    TwoLevelScenario rabi{TwoLevelKind::rabi_fock};
    rabi.g = 2.0;
    rabi.n_photons = 3;
    CHECK(rabi.frequency() == doctest::Approx(4.0).epsilon(1e-15));
}

TEST_CASE("EPR singlet") {
    const DecoherenceParams p(0.1, 0.1);
    TwoLevelScenario epr{TwoLevelKind::epr_singlet, 1.0};
    const DensityMatrix s = epr_singlet();
    CHECK(epr_correlation_xx(s) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(std::abs(epr_cross_coherence(epr, p, 0.0) + 0.5) <= 1e-15);

    const auto h = epr_hamiltonian(epr, p);
    const TwoLevelCoherence c = two_level_coherence(epr, p);
    for (double t : {0.5, 3.0, 40.0}) {
        const DensityMatrix out = propagate_closed_form(s, h, p, t);
        CHECK(out.entries()(1, 1).real() == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(out.entries()(2, 2).real() == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(std::abs(std::abs(epr_cross_coherence(epr, p, t)) / 0.5 - std::exp(-c.gamma * t)) <= 1e-12);
    }
}

TEST_CASE("Rabi oscillation damping") {
    const DecoherenceParams p(0.1, 0.1);
    TwoLevelScenario sc{TwoLevelKind::rabi_fock};
    sc.g = 5.0;
    sc.n_photons = 0;
    CHECK(rabi_population_difference(sc, p, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    const double gamma = two_level_coherence(sc, p).gamma;
    CHECK(gamma == doctest::Approx(1.115717756571049).epsilon(1e-13));
    for (double t : {0.1, 0.7, 2.0}) {
        const double d = rabi_population_difference(sc, p, t);
        const double nu = frequency_shift(5.0, p);
        CHECK(std::abs(d - std::exp(-gamma * t) * std::cos(nu * t)) <= 1e-12);
    }
    const double late = rabi_population_difference(sc, p, 10.0 / gamma);
    CHECK(std::abs(late) < 0.01);
    CHECK(std::abs((1.0 + late) / 2.0 - 0.5) <= 0.005);
}

TEST_CASE("Rabi damping against photon number") {
    const RabiDampingTable one = rabi_damping_vs_n(1.0, {0}, DecoherenceParams(1.0, 1.0));
    CHECK(one.rows.at(0).gamma == doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-15));

    std::vector<std::uint64_t> ns;
    for (std::uint64_t n = 0; n <= 50; ++n) {
        ns.push_back(n);
    }
    const RabiDampingTable t = rabi_damping_vs_n(1.0, ns, DecoherenceParams(1.0, 1.0));
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
        CHECK(t.rows[i].gamma > t.rows[i - 1].gamma);
    }
    const RabiDampingTable fit = rabi_damping_vs_n(1.0, {0, 1, 2, 3, 4, 5}, DecoherenceParams(1.0, 1.0));
    CHECK(fit.power_law_exponent > 0.0);
    CHECK(fit.power_law_exponent < 1.0);
}

}  // TEST_SUITE
