// trajectories.hpp: Monte-Carlo evaluation of the averaged dynamics.
//
// Each sample draws an effective evolution time t' from the Gamma waiting-time
// law and evolves the state unitarily for t'. Averages over samples estimate the
// propagated density matrix and expectation values independently of the closed
// form and the quadrature oracle.

#pragma once

#include "decohere/core.hpp"
#include "decohere/rng.hpp"

#include <cstddef>
#include <cstdint>

namespace decohere {

struct McConfig {
    std::size_t samples = 10000;
    std::uint64_t seed = 0;
    // 0 = DECOHERE_THREADS if set, otherwise the hardware concurrency.
    std::size_t worker_hint = 0;
};

// Draws t' ~ Gamma(shape = t/tau2, scale = tau1). Marsaglia-Tsang for shape >= 1;
// shape < 1 uses Gamma(shape + 1) * U^(1/shape). Throws DomainError for t <= 0.
double sample_effective_time(Xoshiro256& rng, double t, const DecoherenceParams& params);

struct DensityEstimate {
    Matrix estimate;     // symmetrized sample mean, in the basis of rho0
    RealMatrix std_error;  // per-element standard error (unbiased variance)
};

// samples >= 2 required (DomainError otherwise). t = 0 returns rho0 exactly.
DensityEstimate mc_estimate_density(const DensityMatrix& rho0, const SpectralHamiltonian& spec,
                                    const DecoherenceParams& params, double t, const McConfig& cfg);

struct ObservableEstimate {
    double value;
    double std_error;
};

// A is given in the basis of rho0 and must be Hermitian.
ObservableEstimate mc_estimate_observable(const DensityMatrix& rho0, const SpectralHamiltonian& spec,
                                          const DecoherenceParams& params, const Matrix& a, double t,
                                          const McConfig& cfg);

// Effective times for samples [first, first + count) of the stream keyed by seed.
// Exposed for determinism tests.
void draw_effective_times(double* out, std::size_t first, std::size_t count, std::uint64_t seed, double t,
                          const DecoherenceParams& params, std::size_t worker_hint);

std::size_t resolve_workers(std::size_t worker_hint);

}  // namespace decohere
