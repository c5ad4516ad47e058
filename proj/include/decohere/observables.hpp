// observables.hpp: Averaged expectation values and signals, position densities,
// and the finite-difference time-energy inequality.

#pragma once

#include "decohere/core.hpp"
#include "decohere/waiting_time.hpp"

#include <functional>
#include <limits>

namespace decohere {

// Tr(rho A). Throws NumericError if the imaginary part exceeds 1e-12 (scaled by
// the largest entry of A), which signals a non-Hermitian input.
double expectation(const Matrix& rho, const Matrix& a);
double expectation(const DensityMatrix& rho, const Matrix& a);

// Expectation of A (given in rho0's basis) on the closed-form state at t.
double averaged_expectation(const DensityMatrix& rho0, const SpectralHamiltonian& spec,
                            const DecoherenceParams& params, const Matrix& a, double t);

// <exp(i w t')> = (1 - i w tau1)^(-t/tau2) = exp(-gamma t) exp(+i nu t).
cplx averaged_phase_factor(double omega, const DecoherenceParams& params, double t);

// A real signal of the effective time with a declared bound |f| <= bound, used
// to size the tail truncation of the waiting-time integral.
struct BoundedSignal {
    std::function<double(double)> f;
    double bound = 1.0;
};

// Integral of P(t, t') f(t') dt' to absolute tolerance tol. t = 0 evaluates f(0)
// (point mass). Throws NumericError on quadrature failure.
double averaged_signal(const BoundedSignal& signal, double t, const DecoherenceParams& params, double tol = 1e-10);

// psi(x, t') for a pure-state model.
using WaveFunction = std::function<cplx(double x, double t_prime)>;

// P(x, t) = integral of P(t, t') |psi(x, t')|^2 dt'.
double averaged_position_density(const WaveFunction& psi, double x, double t, const DecoherenceParams& params,
                                 double tol = 1e-12);

struct DriftCheck {
    double lhs;  // (A(t) - A(t - tau2)) / tau1
    double rhs;  // -(i/hbar) Tr(rho(t) [A, H])
};

// Both sides of the finite-difference Ehrenfest identity. Needs t >= tau2.
DriftCheck finite_difference_drift(const DensityMatrix& rho0, const SpectralHamiltonian& spec,
                                   const DecoherenceParams& params, const Matrix& a, double t);

struct TmReport {
    double delta_a_bar = 0.0;  // A(t) - A(t - tau2)
    double sigma_a = 0.0;      // on rho(t)
    double sigma_h = 0.0;      // on rho(t)
    double tau_e = std::numeric_limits<double>::infinity();
    double lhs = 0.0;          // |delta A| / sigma(A)
    double rhs = 0.0;          // tau1 / tau_E
    bool satisfied = true;
    double slack = 0.0;        // rhs - lhs
    bool tau_e_infinite = false;
    bool sigma_a_zero = false; // degenerate branch: sigma(A) = 0, delta A must vanish
};

inline constexpr double kTmTolerance = 1e-10;

// Moments are evaluated on rho(t). Needs t >= tau2.
TmReport tm_check(const DensityMatrix& rho0, const SpectralHamiltonian& spec, const DecoherenceParams& params,
                  const Matrix& a, double t);

// Standard deviation of an observable on a state.
double standard_deviation(const DensityMatrix& rho, const Matrix& a);

// sigma(H) on rho; energy populations only.
double energy_spread(const DensityMatrix& rho, const SpectralHamiltonian& spec);

// hbar / (2 sigma(H)): the largest tau1 for which no observable changes
// appreciably within one cronon. DomainError if sigma(H) = 0.
double max_quasi_continuous_tau1(const DensityMatrix& rho, const SpectralHamiltonian& spec,
                                 const DecoherenceParams& params);

}  // namespace decohere
