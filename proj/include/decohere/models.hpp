// models.hpp: Concrete scenarios: coherent-state oscillator, free-particle
// spread, two-packet (cat) localization, spin precession and EPR transit, and
// damped Rabi oscillations.
//
// Each scenario offers an analytic prediction and, where a finite-dimensional
// state exists, the matching DensityMatrix/Hamiltonian so the prediction can be
// checked against the generic propagators.

#pragma once

#include "decohere/core.hpp"
#include "decohere/observables.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace decohere::models {

// ------------------------------------------------------------------ oscillator

struct OscillatorScenario {
    cplx alpha0;
    double omega;
    std::size_t dim;

    // Smallest truncation keeping the Poisson tail beyond dim below 1e-10.
    static std::size_t minimum_dim(cplx alpha0);
    void validate() const;
};

// Fock-basis coherent state truncated to dim levels and renormalized.
DensityMatrix coherent_state(const OscillatorScenario& sc);
// E_n = hbar * omega * n.
SpectralHamiltonian oscillator_hamiltonian(const OscillatorScenario& sc, const DecoherenceParams& params);
Matrix annihilation(std::size_t dim);

// <a(t)> = alpha0 (1 + i omega tau1)^(-t/tau2).
cplx coherent_amplitude(const OscillatorScenario& sc, const DecoherenceParams& params, double t);

// rho_nm(t) of the untruncated coherent state; moduli below 1e-300 are returned
// as exact zero.
cplx fock_matrix_decoherence(const OscillatorScenario& sc, const DecoherenceParams& params, double t, std::size_t n,
                             std::size_t m);

struct MilburnContrast {
    double ours;     // gamma(omega) t
    double milburn;  // (t/tau2)(1 - cos(omega tau2))
};

// Log-decay of <a> after t in both pictures (Milburn with tau = tau2).
MilburnContrast milburn_frozen_compare(double omega, const DecoherenceParams& params, double t);

// ---------------------------------------------------------------- free particle

// sigma_x^2 + sigma_v^2 (tbar^2 + tbar tau1), tbar = t tau1 / tau2.
double free_particle_spread(double sigma_x, double sigma_v, const DecoherenceParams& params, double t);

// Minimum-uncertainty packet at rest in the origin; |psi(x, t)|^2 is a Gaussian
// of variance sigma_x^2 + sigma_v^2 t^2.
WaveFunction gaussian_packet(double sigma_x, double sigma_v);

// Variance of the waiting-time averaged position density of gaussian_packet,
// by quadrature over x of the averaged density.
double free_particle_averaged_variance(double sigma_x, double sigma_v, const DecoherenceParams& params, double t);

// --------------------------------------------------------------------- cat

struct CatScenario {
    double sigma_x;
    double sigma_v;
    double separation;  // D; packets centred at +-D/2
    double mass;
    double hbar;

    // sigma_v = hbar / (2 m sigma_x)
    static CatScenario minimum_uncertainty(double sigma_x, double separation, double mass, double hbar);
    // sigma_x = hbar / (2 m sigma_v)
    static CatScenario minimum_uncertainty_from_velocity(double sigma_v, double separation, double mass, double hbar);
    void validate() const;
};

// Static envelope of packet j (j = 1 at +D/2, j = 2 at -D/2).
double cat_packet(const CatScenario& sc, int j, double x);

// Interference frequency omega(x) = sigma_v x D / (2 sigma_x^3).
double cat_frequency(const CatScenario& sc, double x);

// <exp(i omega(x) t')>: the factor multiplying the interference term.
cplx cat_coherence(const CatScenario& sc, const DecoherenceParams& params, double x, double t);

// psi1 psi2 exp(-gamma(x) t) cos(nu(x) t)
double cat_interference(const CatScenario& sc, const DecoherenceParams& params, double x, double t);

// (psi1^2 + psi2^2)/2 + interference.
double cat_density(const CatScenario& sc, const DecoherenceParams& params, double x, double t);

// |x| below which gamma(x) t < 1, i.e. the interference survives at time t.
double cat_undamped_halfwidth(const CatScenario& sc, const DecoherenceParams& params, double t);

// ----------------------------------------------------------------- two-level

enum class TwoLevelKind { spin_larmor, rabi_fock, epr_singlet };

struct TwoLevelScenario {
    TwoLevelKind kind;
    double splitting = 0.0;       // omega0 for spin/EPR; ignored for Rabi
    std::uint64_t n_photons = 0;  // Rabi only
    double g = 0.0;               // one-photon Rabi frequency, Rabi only
    double length = 1.0;          // field region
    double velocity = 1.0;

    // Omega = g sqrt(n + 1) for Rabi, the splitting otherwise.
    double frequency() const;
    double transit_time() const { return length / velocity; }
    void validate() const;
};

struct TwoLevelCoherence {
    double gamma;
    double nu;
    double survival;  // exp(-gamma L / v)
};

TwoLevelCoherence two_level_coherence(const TwoLevelScenario& sc, const DecoherenceParams& params);

// Spin prepared along +x, precessing about z: H = (hbar omega0 / 2) sigma_z.
SpectralHamiltonian spin_hamiltonian(const TwoLevelScenario& sc, const DecoherenceParams& params);
DensityMatrix spin_initial_state();

struct SternGerlach {
    double p_plus_x;
    double p_minus_x;
};
// Outcome probabilities of an x-oriented Stern-Gerlach analysis after time t.
SternGerlach spin_stern_gerlach(const TwoLevelScenario& sc, const DecoherenceParams& params, double t);

// Singlet (|+-> - |-+>)/sqrt2 with the field acting on particle 1 only:
// H = (hbar omega0 / 2) sigma_z (x) I. Basis order |++>, |+->, |-+>, |-->.
SpectralHamiltonian epr_hamiltonian(const TwoLevelScenario& sc, const DecoherenceParams& params);
DensityMatrix epr_singlet();
// <sigma_x (x) sigma_x> on a two-particle state (-1 for the singlet).
double epr_correlation_xx(const DensityMatrix& rho);
// The |+-><-+| element after time t.
cplx epr_cross_coherence(const TwoLevelScenario& sc, const DecoherenceParams& params, double t);

// Rabi oscillation between |e> and |g> as a dressed two-level system
// H = (hbar Omega / 2) sigma_x, starting from |e><e|.
SpectralHamiltonian rabi_hamiltonian(const TwoLevelScenario& sc, const DecoherenceParams& params);
DensityMatrix rabi_initial_state();

// <sigma_z>(t) from the propagated 2x2 state.
double rabi_population_difference(const TwoLevelScenario& sc, const DecoherenceParams& params, double t);

struct RabiRate {
    std::uint64_t n;
    double gamma;
};

struct RabiDampingTable {
    std::vector<RabiRate> rows;
    // Least-squares slope of ln gamma_n against ln(n + 1); NaN with fewer than
    // two rows.
    double power_law_exponent;
};

RabiDampingTable rabi_damping_vs_n(double g, const std::vector<std::uint64_t>& n_list,
                                   const DecoherenceParams& params);

}  // namespace decohere::models
