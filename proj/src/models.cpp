#include "decohere/models.hpp"

#include "decohere/errors.hpp"
#include "decohere/evolution.hpp"
#include "decohere/quadrature.hpp"
#include "decohere/waiting_time.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace decohere::models {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

void require_positive(double x, const char* what) {
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw ValidationError(std::string(what) + " must be positive and finite");
    }
}

Matrix pauli_x() {
    Matrix s = Matrix::Zero(2, 2);
    s(0, 1) = s(1, 0) = 1.0;
    return s;
}

Matrix pauli_z() {
    Matrix s = Matrix::Zero(2, 2);
    s(0, 0) = 1.0;
    s(1, 1) = -1.0;
    return s;
}

}  // namespace

// ------------------------------------------------------------------ oscillator

std::size_t OscillatorScenario::minimum_dim(cplx alpha0) {
    const double a = std::abs(alpha0);
    return static_cast<std::size_t>(std::ceil(a * a + 10.0 * a + 20.0));
}

void OscillatorScenario::validate() const {
    if (!std::isfinite(alpha0.real()) || !std::isfinite(alpha0.imag()) || !std::isfinite(omega)) {
        throw ValidationError("oscillator: alpha0 and omega must be finite");
    }
    if (dim < minimum_dim(alpha0)) {
        throw DomainError("oscillator: truncation dim " + std::to_string(dim) + " leaves a coherent-state tail above 1e-10 (need >= " +
                          std::to_string(minimum_dim(alpha0)) + ")");
    }
}

DensityMatrix coherent_state(const OscillatorScenario& sc) {
    sc.validate();
    Vector c(idx(sc.dim));
    c(0) = std::exp(-0.5 * std::norm(sc.alpha0));
    for (std::size_t n = 1; n < sc.dim; ++n) {
        c(idx(n)) = c(idx(n - 1)) * sc.alpha0 / std::sqrt(static_cast<double>(n));
    }
    c /= c.norm();
    return DensityMatrix::trusted(c * c.adjoint(), Basis::input);
}

SpectralHamiltonian oscillator_hamiltonian(const OscillatorScenario& sc, const DecoherenceParams& params) {
    std::vector<double> energies(sc.dim);
    for (std::size_t n = 0; n < sc.dim; ++n) {
        energies[n] = params.hbar() * sc.omega * static_cast<double>(n);
    }
    return SpectralHamiltonian::from_eigenvalues(energies);
}

Matrix annihilation(std::size_t dim) {
    Matrix a = Matrix::Zero(idx(dim), idx(dim));
    for (std::size_t n = 1; n < dim; ++n) {
        a(idx(n - 1), idx(n)) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

cplx coherent_amplitude(const OscillatorScenario& sc, const DecoherenceParams& params, double t) {
    sc.validate();
    return sc.alpha0 * propagator_factor(sc.omega, params, t);
}

cplx fock_matrix_decoherence(const OscillatorScenario& sc, const DecoherenceParams& params, double t, std::size_t n,
                             std::size_t m) {
    sc.validate();
    if (n >= sc.dim || m >= sc.dim) {
        throw DomainError("fock_matrix_decoherence: index outside the truncation");
    }
    const double a = std::abs(sc.alpha0);
    if (a == 0.0) {
        return n == 0 && m == 0 ? cplx(1.0, 0.0) : cplx(0.0, 0.0);
    }
    const double dn = static_cast<double>(n);
    const double dm = static_cast<double>(m);
    const double w = (dn - dm) * sc.omega;
    const double log_mod = -a * a + (dn + dm) * std::log(a) - 0.5 * (std::lgamma(dn + 1.0) + std::lgamma(dm + 1.0)) -
                           damping_rate(w, params) * t;
    if (log_mod < std::log(1e-300)) {
        return {0.0, 0.0};
    }
    const double phase = (dn - dm) * std::arg(sc.alpha0) - frequency_shift(w, params) * t;
    return std::polar(std::exp(log_mod), phase);
}

MilburnContrast milburn_frozen_compare(double omega, const DecoherenceParams& params, double t) {
    const double tau2 = params.tau2();
    return {damping_rate(omega, params) * t, (t / tau2) * (1.0 - std::cos(omega * tau2))};
}

// ---------------------------------------------------------------- free particle

double free_particle_spread(double sigma_x, double sigma_v, const DecoherenceParams& params, double t) {
    require_positive(sigma_x, "sigma_x");
    require_positive(sigma_v, "sigma_v");
    if (!(t >= 0.0)) {
        throw DomainError("free_particle_spread: t must be >= 0");
    }
    const double tbar = t * params.tau1() / params.tau2();
    return sigma_x * sigma_x + sigma_v * sigma_v * (tbar * tbar + tbar * params.tau1());
}

WaveFunction gaussian_packet(double sigma_x, double sigma_v) {
    require_positive(sigma_x, "sigma_x");
    require_positive(sigma_v, "sigma_v");
    const double norm = std::pow(2.0 * std::numbers::pi * sigma_x * sigma_x, -0.25);
    return [=](double x, double t) {
        const cplx spread(1.0, sigma_v * t / sigma_x);
        return norm / std::sqrt(spread) * std::exp(-x * x / (4.0 * sigma_x * sigma_x * spread));
    };
}

double free_particle_averaged_variance(double sigma_x, double sigma_v, const DecoherenceParams& params, double t) {
    const WaveFunction psi = gaussian_packet(sigma_x, sigma_v);
    if (!(t >= 0.0)) {
        throw DomainError("free_particle_averaged_variance: t must be >= 0");
    }
    const double tp_hi = t == 0.0 ? 0.0 : params.tau1() * waiting_time::truncated_support(params.shape(t), 1e-14).hi;
    const double half_width = 12.0 * std::sqrt(sigma_x * sigma_x + sigma_v * sigma_v * tp_hi * tp_hi);
    // The density is even in x, so both moments are taken over [0, L].
    quadrature::Options opt;
    opt.abs_tol = 1e-11 * half_width;
    const double mass = quadrature::integrate(
        [&](double x) { return averaged_position_density(psi, x, t, params); }, 0.0, half_width, opt).value;
    opt.abs_tol = 1e-11 * half_width * half_width * half_width;
    const double second = quadrature::integrate(
        [&](double x) { return x * x * averaged_position_density(psi, x, t, params); }, 0.0, half_width, opt).value;
    return second / mass;
}

// --------------------------------------------------------------------- cat

CatScenario CatScenario::minimum_uncertainty(double sigma_x, double separation, double mass, double hbar) {
    require_positive(sigma_x, "sigma_x");
    require_positive(mass, "mass");
    require_positive(hbar, "hbar");
    CatScenario sc{sigma_x, hbar / (2.0 * mass * sigma_x), separation, mass, hbar};
    sc.validate();
    return sc;
}

CatScenario CatScenario::minimum_uncertainty_from_velocity(double sigma_v, double separation, double mass,
                                                           double hbar) {
    require_positive(sigma_v, "sigma_v");
    require_positive(mass, "mass");
    require_positive(hbar, "hbar");
    CatScenario sc{hbar / (2.0 * mass * sigma_v), sigma_v, separation, mass, hbar};
    sc.validate();
    return sc;
}

void CatScenario::validate() const {
    require_positive(sigma_x, "sigma_x");
    require_positive(sigma_v, "sigma_v");
    require_positive(separation, "separation");
    require_positive(mass, "mass");
    require_positive(hbar, "hbar");
}

double cat_packet(const CatScenario& sc, int j, double x) {
    const double centre = j == 1 ? 0.5 * sc.separation : -0.5 * sc.separation;
    const double d = x - centre;
    return std::pow(2.0 * std::numbers::pi * sc.sigma_x * sc.sigma_x, -0.25) *
           std::exp(-d * d / (4.0 * sc.sigma_x * sc.sigma_x));
}

double cat_frequency(const CatScenario& sc, double x) {
    return sc.sigma_v * x * sc.separation / (2.0 * sc.sigma_x * sc.sigma_x * sc.sigma_x);
}

cplx cat_coherence(const CatScenario& sc, const DecoherenceParams& params, double x, double t) {
    return averaged_phase_factor(cat_frequency(sc, x), params, t);
}

double cat_interference(const CatScenario& sc, const DecoherenceParams& params, double x, double t) {
    return cat_packet(sc, 1, x) * cat_packet(sc, 2, x) * cat_coherence(sc, params, x, t).real();
}

double cat_density(const CatScenario& sc, const DecoherenceParams& params, double x, double t) {
    const double p1 = cat_packet(sc, 1, x);
    const double p2 = cat_packet(sc, 2, x);
    return 0.5 * (p1 * p1 + p2 * p2) + cat_interference(sc, params, x, t);
}

double cat_undamped_halfwidth(const CatScenario& sc, const DecoherenceParams& params, double t) {
    if (!(t > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    // gamma(w*) t = 1  <=>  ln(1 + w*^2 tau1^2) = 2 tau2 / t
    const double w_star = std::sqrt(std::expm1(2.0 * params.tau2() / t)) / params.tau1();
    return w_star * 2.0 * sc.sigma_x * sc.sigma_x * sc.sigma_x / (sc.sigma_v * sc.separation);
}

// ----------------------------------------------------------------- two-level

double TwoLevelScenario::frequency() const {
    if (kind == TwoLevelKind::rabi_fock) {
        return g * std::sqrt(static_cast<double>(n_photons) + 1.0);
    }
    return splitting;
}

void TwoLevelScenario::validate() const {
    require_positive(length, "length");
    require_positive(velocity, "velocity");
    if (!std::isfinite(splitting) || !std::isfinite(g)) {
        throw ValidationError("two-level scenario: frequencies must be finite");
    }
    if (kind == TwoLevelKind::rabi_fock && g < 0.0) {
        throw ValidationError("rabi scenario: g must be >= 0");
    }
}

TwoLevelCoherence two_level_coherence(const TwoLevelScenario& sc, const DecoherenceParams& params) {
    sc.validate();
    const double w = sc.frequency();
    const double gamma = damping_rate(w, params);
    return {gamma, frequency_shift(w, params), std::exp(-gamma * sc.transit_time())};
}

SpectralHamiltonian spin_hamiltonian(const TwoLevelScenario& sc, const DecoherenceParams& params) {
    const double half = 0.5 * params.hbar() * sc.splitting;
    return SpectralHamiltonian::from_eigenvalues({half, -half});
}

DensityMatrix spin_initial_state() { return DensityMatrix::trusted(Matrix::Constant(2, 2, 0.5), Basis::input); }

SternGerlach spin_stern_gerlach(const TwoLevelScenario& sc, const DecoherenceParams& params, double t) {
    sc.validate();
    const DensityMatrix rho = propagate_closed_form(spin_initial_state(), spin_hamiltonian(sc, params), params, t);
    const Matrix& r = rho.entries();
    const double p_plus = 0.5 * (r(0, 0).real() + r(1, 1).real()) + r(0, 1).real();
    return {p_plus, 1.0 - p_plus};
}

SpectralHamiltonian epr_hamiltonian(const TwoLevelScenario& sc, const DecoherenceParams& params) {
    const double half = 0.5 * params.hbar() * sc.splitting;
    return SpectralHamiltonian::from_eigenvalues({half, half, -half, -half});
}

DensityMatrix epr_singlet() {
    Matrix r = Matrix::Zero(4, 4);
    r(1, 1) = r(2, 2) = 0.5;
    r(1, 2) = r(2, 1) = -0.5;
    return DensityMatrix::trusted(std::move(r), Basis::input);
}

double epr_correlation_xx(const DensityMatrix& rho) {
    if (rho.dim() != 4) {
        throw ValidationError("epr_correlation_xx: needs a two-qubit state");
    }
    const Matrix sx = pauli_x();
    Matrix xx(4, 4);
    for (Eigen::Index a = 0; a < 2; ++a) {
        for (Eigen::Index b = 0; b < 2; ++b) {
            xx.block(2 * a, 2 * b, 2, 2) = sx(a, b) * sx;
        }
    }
    return expectation(rho, xx);
}

cplx epr_cross_coherence(const TwoLevelScenario& sc, const DecoherenceParams& params, double t) {
    sc.validate();
    return propagate_closed_form(epr_singlet(), epr_hamiltonian(sc, params), params, t).entries()(1, 2);
}

SpectralHamiltonian rabi_hamiltonian(const TwoLevelScenario& sc, const DecoherenceParams& params) {
    return diagonalize_hamiltonian(0.5 * params.hbar() * sc.frequency() * pauli_x());
}

DensityMatrix rabi_initial_state() {
    Matrix r = Matrix::Zero(2, 2);
    r(0, 0) = 1.0;
    return DensityMatrix::trusted(std::move(r), Basis::input);
}

double rabi_population_difference(const TwoLevelScenario& sc, const DecoherenceParams& params, double t) {
    if (sc.kind != TwoLevelKind::rabi_fock) {
        throw ValidationError("rabi_population_difference: scenario kind must be rabi-fock");
    }
    sc.validate();
    const DensityMatrix rho = propagate_closed_form(rabi_initial_state(), rabi_hamiltonian(sc, params), params, t);
    return expectation(rho, pauli_z());
}

RabiDampingTable rabi_damping_vs_n(double g, const std::vector<std::uint64_t>& n_list,
                                   const DecoherenceParams& params) {
    require_positive(g, "g");
    RabiDampingTable table;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::uint64_t n : n_list) {
        const double omega = g * std::sqrt(static_cast<double>(n) + 1.0);
        const double gamma = damping_rate(omega, params);
        table.rows.push_back({n, gamma});
        const double x = std::log(static_cast<double>(n) + 1.0);
        const double y = std::log(gamma);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double k = static_cast<double>(n_list.size());
    const double denom = k * sxx - sx * sx;
    table.power_law_exponent =
        n_list.size() < 2 || denom == 0.0 ? std::numeric_limits<double>::quiet_NaN() : (k * sxy - sx * sy) / denom;
    return table;
}

}  // namespace decohere::models
