// evolution.hpp: Propagators for the Gamma-averaged Liouville dynamics.
//
// In the energy basis every coherence evolves independently:
//
//   rho_nm(t) = (1 + i w_nm tau1)^(-t/tau2) rho_nm(0) = exp(-(gamma_nm + i nu_nm) t) rho_nm(0)
//   gamma = ln(1 + w^2 tau1^2) / (2 tau2),   nu = arctan(w tau1) / tau2
//
// Populations never change. The closed form is the analytic interpolation of the
// finite-difference (cronon) grid t = k tau2; finite_difference_step is the
// grid-exact stepper. propagate_quadrature evaluates the defining integral over
// the waiting-time law and is the independent oracle for the closed form.

#pragma once

#include "decohere/core.hpp"

#include <string>

namespace decohere {

double damping_rate(double omega, const DecoherenceParams& params);
double frequency_shift(double omega, const DecoherenceParams& params);

// (1 + i w tau1)^(-t/tau2), principal branch.
cplx propagator_factor(double omega, const DecoherenceParams& params, double t);

struct PropagatorFactor {
    Matrix factors;    // f_nm(t)
    RealMatrix gamma;  // gamma_nm
    RealMatrix nu;     // nu_nm
};

PropagatorFactor propagator_factors(const FrequencyMatrix& freqs, const DecoherenceParams& params, double t);

// Output is in the basis of rho0. t = 0 returns rho0 unchanged.
DensityMatrix propagate_closed_form(const DensityMatrix& rho0, const SpectralHamiltonian& spec,
                                    const DecoherenceParams& params, double t);

// Elementwise integral of P(t, t') exp(-i w_nm t') against rho0, one integral per
// distinct frequency. Restricted to t >= tau2 so the integrand is bounded.
// Throws DomainError for t < tau2 and NumericError if the quadrature fails.
DensityMatrix propagate_quadrature(const DensityMatrix& rho0, const SpectralHamiltonian& spec,
                                   const DecoherenceParams& params, double t, double tol = 1e-10);

// One cronon step rho(k) = (1 + i tau1 L)^(-1) rho(k-1). Input must be in the
// energy basis.
DensityMatrix finite_difference_step(const DensityMatrix& rho_bar, const SpectralHamiltonian& spec,
                                     const DecoherenceParams& params);

// d rho/dt = -(1/tau2) ln(1 + i tau1 L) rho, elementwise -(gamma + i nu) rho_nm.
// Returned in the basis of rho.
Matrix generator_apply(const DensityMatrix& rho, const SpectralHamiltonian& spec, const DecoherenceParams& params);

// Second-order expansion of the generator:
//   d rho/dt = -i (tau1/tau2) L rho - (tau1^2 / 2 tau2) L^2 rho,
// elementwise -(i w tau1/tau2 + w^2 tau1^2 / (2 tau2)) rho_nm. Only valid while
// every |w tau1| << 1. Returned in the basis of rho.
Matrix phase_destroying_rhs(const Matrix& rho, const SpectralHamiltonian& spec, const DecoherenceParams& params,
                            Basis basis);

// Poisson-averaged (Milburn) propagator with a single time constant tau:
// elementwise factor exp[(t/tau)(exp(-i w tau) - 1)].
cplx milburn_factor(double omega, double tau, double t);
DensityMatrix milburn_propagate(const DensityMatrix& rho0, const SpectralHamiltonian& spec, double tau, double t,
                                double hbar = 1.0);

enum class SemigroupMode { gamma, regular };

// Generic map semigroup for a per-event map M acting on vec(rho):
//   regular: exp[(t/tau2) ln M] vec(rho0)
//   gamma:   (I - ln M)^(-t/tau2) vec(rho0)
// Principal logarithms via eigendecomposition of M. DomainError if an eigenvalue
// of M (or of I - ln M in gamma mode) lies on the closed negative real axis;
// NumericError if M is not diagonalizable to working precision (eigenvector
// condition number above 1e8). rho0 is read in the basis M acts on.
DensityMatrix map_semigroup_propagate(const Superoperator& m, const DensityMatrix& rho0,
                                      const DecoherenceParams& params, double t, SemigroupMode mode);

}  // namespace decohere
