#include "decohere/observables.hpp"

#include "decohere/errors.hpp"
#include "decohere/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace decohere {

namespace {

void check_square(const Matrix& a, Eigen::Index n, const char* what) {
    if (a.rows() != n || a.cols() != n) {
        std::ostringstream os;
        os << what << ": dimension mismatch (expected " << n << "x" << n << ")";
        throw ValidationError(os.str());
    }
}

double entry_scale(const Matrix& a) { return std::max(1.0, a.size() ? a.cwiseAbs().maxCoeff() : 0.0); }

}  // namespace

double expectation(const Matrix& rho, const Matrix& a) {
    check_square(a, rho.rows(), "expectation");
    const cplx tr = (rho * a).trace();
    if (std::abs(tr.imag()) > 1e-12 * entry_scale(a)) {
        std::ostringstream os;
        os << "expectation: imaginary residual " << tr.imag() << " (non-Hermitian state or observable)";
        throw NumericError(os.str());
    }
    return tr.real();
}

double expectation(const DensityMatrix& rho, const Matrix& a) { return expectation(rho.entries(), a); }

double averaged_expectation(const DensityMatrix& rho0, const SpectralHamiltonian& spec,
                            const DecoherenceParams& params, const Matrix& a, double t) {
    return expectation(propagate_closed_form(rho0, spec, params, t), a);
}

cplx averaged_phase_factor(double omega, const DecoherenceParams& params, double t) {
    if (!(t >= 0.0)) {
        throw DomainError("averaged_phase_factor: t must be >= 0");
    }
    return std::conj(propagator_factor(omega, params, t));
}

double averaged_signal(const BoundedSignal& signal, double t, const DecoherenceParams& params, double tol) {
    if (!signal.f) {
        throw ValidationError("averaged_signal: empty signal");
    }
    if (!(tol > 0.0) || !(signal.bound > 0.0)) {
        throw DomainError("averaged_signal: tolerance and bound must be positive");
    }
    waiting_time::AverageOptions opt;
    opt.abs_tol = tol;
    opt.tail = std::clamp(0.25 * tol / signal.bound, 1e-30, 1e-14);
    return waiting_time::gamma_average(signal.f, t, params, opt).value;
}

double averaged_position_density(const WaveFunction& psi, double x, double t, const DecoherenceParams& params,
                                 double tol) {
    if (!psi) {
        throw ValidationError("averaged_position_density: empty wave function");
    }
    waiting_time::AverageOptions opt;
    opt.abs_tol = tol;
    auto density = [&](double tp) { return std::norm(psi(x, tp)); };
    return std::max(0.0, waiting_time::gamma_average(density, t, params, opt).value);
}

DriftCheck finite_difference_drift(const DensityMatrix& rho0, const SpectralHamiltonian& spec,
                                   const DecoherenceParams& params, const Matrix& a, double t) {
    if (!(t >= params.tau2())) {
        throw DomainError("finite_difference_drift: needs t >= tau2");
    }
    const DensityMatrix now = propagate_closed_form(rho0, spec, params, t);
    const DensityMatrix before = propagate_closed_form(rho0, spec, params, t - params.tau2());
    const double lhs = (expectation(now, a) - expectation(before, a)) / params.tau1();

    const Matrix h = spec.matrix(rho0.basis());
    const Matrix comm = a * h - h * a;
    // -(i/hbar) Tr(rho [A, H]); i[A, H] is Hermitian.
    const cplx tr = (now.entries() * comm).trace();
    const double rhs = (cplx(0.0, -1.0) * tr).real() / params.hbar();
    return {lhs, rhs};
}

double standard_deviation(const DensityMatrix& rho, const Matrix& a) {
    check_square(a, static_cast<Eigen::Index>(rho.dim()), "standard_deviation");
    const double mean = expectation(rho, a);
    const Matrix shifted = a - mean * Matrix::Identity(a.rows(), a.cols());
    return std::sqrt(std::max(0.0, (rho.entries() * shifted * shifted).trace().real()));
}

double energy_spread(const DensityMatrix& rho, const SpectralHamiltonian& spec) {
    const Matrix e = to_energy_basis(rho, spec).entries();
    const auto& energies = spec.eigenvalues();
    double mean = 0.0;
    for (Eigen::Index n = 0; n < e.rows(); ++n) {
        mean += e(n, n).real() * energies(n);
    }
    double var = 0.0;
    for (Eigen::Index n = 0; n < e.rows(); ++n) {
        const double d = energies(n) - mean;
        var += e(n, n).real() * d * d;
    }
    return std::sqrt(std::max(0.0, var));
}

TmReport tm_check(const DensityMatrix& rho0, const SpectralHamiltonian& spec, const DecoherenceParams& params,
                  const Matrix& a, double t) {
    if (!(t >= params.tau2())) {
        throw DomainError("tm_check: needs t >= tau2");
    }
    check_square(a, static_cast<Eigen::Index>(rho0.dim()), "tm_check");
    const DensityMatrix now = propagate_closed_form(rho0, spec, params, t);
    const DensityMatrix before = propagate_closed_form(rho0, spec, params, t - params.tau2());

    TmReport r;
    r.delta_a_bar = expectation(now, a) - expectation(before, a);
    r.sigma_a = standard_deviation(now, a);
    r.sigma_h = energy_spread(now, spec);

    const double e_scale = std::max(1.0, spec.eigenvalues().cwiseAbs().maxCoeff());
    r.tau_e_infinite = r.sigma_h <= 1e-14 * e_scale;
    r.tau_e = r.tau_e_infinite ? std::numeric_limits<double>::infinity() : params.hbar() / (2.0 * r.sigma_h);
    r.rhs = r.tau_e_infinite ? 0.0 : params.tau1() / r.tau_e;

    r.sigma_a_zero = r.sigma_a <= 1e-14 * entry_scale(a);
    if (r.sigma_a_zero) {
        r.lhs = std::abs(r.delta_a_bar) <= kTmTolerance ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
        r.lhs = std::abs(r.delta_a_bar) / r.sigma_a;
    }
    r.satisfied = r.lhs <= r.rhs + kTmTolerance;
    r.slack = r.rhs - r.lhs;
    return r;
}

double max_quasi_continuous_tau1(const DensityMatrix& rho, const SpectralHamiltonian& spec,
                                 const DecoherenceParams& params) {
    const double sigma = energy_spread(rho, spec);
    const double e_scale = std::max(1.0, spec.eigenvalues().cwiseAbs().maxCoeff());
    if (sigma <= 1e-14 * e_scale) {
        throw DomainError("max_quasi_continuous_tau1: sigma(H) = 0, no finite bound");
    }
    return params.hbar() / (2.0 * sigma);
}

}  // namespace decohere
