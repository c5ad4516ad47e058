#include "decohere/trajectories.hpp"

#include "decohere/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace decohere {

namespace {

constexpr std::size_t kChunk = 1 << 16;

// Marsaglia & Tsang (2000), shape >= 1, unit scale.
double gamma_marsaglia_tsang(Xoshiro256& rng, double shape) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        const double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) {
            return d * v;
        }
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) {
            return d * v;
        }
    }
}

void check_samples(const McConfig& cfg) {
    if (cfg.samples < 2) {
        throw DomainError("Monte-Carlo estimate needs at least 2 samples");
    }
}

// Sequential Welford accumulation over sample values produced by `value(t')`,
// drawing effective times chunk by chunk.
template <class Accumulate>
void for_each_effective_time(std::size_t samples, std::uint64_t seed, double t, const DecoherenceParams& params,
                             std::size_t worker_hint, Accumulate&& accumulate) {
    std::vector<double> times(std::min(samples, kChunk));
    for (std::size_t first = 0; first < samples; first += kChunk) {
        const std::size_t count = std::min(kChunk, samples - first);
        draw_effective_times(times.data(), first, count, seed, t, params, worker_hint);
        for (std::size_t i = 0; i < count; ++i) {
            accumulate(times[i]);
        }
    }
}

}  // namespace

std::size_t resolve_workers(std::size_t worker_hint) {
    std::size_t workers = worker_hint;
    if (workers == 0) {
        if (const char* env = std::getenv("DECOHERE_THREADS"); env != nullptr && *env != '\0') {
            try {
                workers = static_cast<std::size_t>(std::stoul(env));
            } catch (const std::exception&) {
                workers = 0;
            }
        }
    }
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    return workers;
}

double sample_effective_time(Xoshiro256& rng, double t, const DecoherenceParams& params) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw DomainError("sample_effective_time: t must be > 0");
    }
    const double shape = params.shape(t);
    if (shape >= 1.0) {
        return params.tau1() * gamma_marsaglia_tsang(rng, shape);
    }
    const double boosted = gamma_marsaglia_tsang(rng, shape + 1.0);
    return params.tau1() * boosted * std::pow(rng.uniform(), 1.0 / shape);
}

void draw_effective_times(double* out, std::size_t first, std::size_t count, std::uint64_t seed, double t,
                          const DecoherenceParams& params, std::size_t worker_hint) {
    auto work = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            Xoshiro256 rng = Xoshiro256::substream(seed, first + i);
            out[i] = sample_effective_time(rng, t, params);
        }
    };
    const std::size_t workers = std::min(resolve_workers(worker_hint), std::max<std::size_t>(1, count / 1024));
    if (workers <= 1) {
        work(0, count);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t per = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * per;
        const std::size_t end = std::min(count, begin + per);
        if (begin < end) {
            pool.emplace_back(work, begin, end);
        }
    }
    for (auto& th : pool) {
        th.join();
    }
}

DensityEstimate mc_estimate_density(const DensityMatrix& rho0, const SpectralHamiltonian& spec,
                                    const DecoherenceParams& params, double t, const McConfig& cfg) {
    check_samples(cfg);
    const auto n = static_cast<Eigen::Index>(rho0.dim());
    if (t == 0.0) {
        return {rho0.entries(), RealMatrix::Zero(n, n)};
    }
    const Matrix e0 = to_energy_basis(rho0, spec).entries();
    const FrequencyMatrix freqs = bohr_frequencies(spec, params);
    const bool back = rho0.basis() == Basis::input;

    Matrix mean = Matrix::Zero(n, n);
    RealMatrix m2 = RealMatrix::Zero(n, n);
    Matrix sample(n, n);
    std::size_t k = 0;
    for_each_effective_time(cfg.samples, cfg.seed, t, params, cfg.worker_hint, [&](double tp) {
        for (Eigen::Index a = 0; a < n; ++a) {
            sample(a, a) = e0(a, a);
            for (Eigen::Index b = a + 1; b < n; ++b) {
                const double w = freqs.omegas(a, b);
                sample(a, b) = (w == 0.0 ? cplx(1.0, 0.0) : std::exp(cplx(0.0, -w * tp))) * e0(a, b);
                sample(b, a) = std::conj(sample(a, b));
            }
        }
        const Matrix z = back ? spec.from_energy_basis(sample) : sample;
        ++k;
        const double inv_k = 1.0 / static_cast<double>(k);
        for (Eigen::Index a = 0; a < n; ++a) {
            for (Eigen::Index b = 0; b < n; ++b) {
                const cplx delta = z(a, b) - mean(a, b);
                mean(a, b) += delta * inv_k;
                const cplx delta2 = z(a, b) - mean(a, b);
                m2(a, b) += (delta.real() * delta2.real() + delta.imag() * delta2.imag());
            }
        }
    });
    const double samples = static_cast<double>(cfg.samples);
    RealMatrix se = (m2 / (samples - 1.0) / samples).cwiseSqrt();
    return {hermitian_part(mean), std::move(se)};
}

ObservableEstimate mc_estimate_observable(const DensityMatrix& rho0, const SpectralHamiltonian& spec,
                                          const DecoherenceParams& params, const Matrix& a, double t,
                                          const McConfig& cfg) {
    check_samples(cfg);
    const auto n = static_cast<Eigen::Index>(rho0.dim());
    if (a.rows() != n || a.cols() != n) {
        throw ValidationError("mc_estimate_observable: observable dimension mismatch");
    }
    if (hermiticity_residual(a) > 1e-10 * std::max(1.0, a.cwiseAbs().maxCoeff())) {
        throw ValidationError("mc_estimate_observable: observable must be Hermitian");
    }
    const Matrix e0 = to_energy_basis(rho0, spec).entries();
    const Matrix ae = rho0.basis() == Basis::input ? spec.to_energy_basis(a) : a;
    const FrequencyMatrix freqs = bohr_frequencies(spec, params);

    // Tr(rho(t') A) = sum_n rho_nn A_nn + 2 Re sum_{n<m} rho_nm(t') A_mn
    double stationary = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        stationary += (e0(i, i) * ae(i, i)).real();
    }
    auto value_at = [&](double tp) {
        double v = stationary;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const cplx term = e0(i, j) * ae(j, i);
                if (term == cplx(0.0, 0.0)) {
                    continue;
                }
                const double w = freqs.omegas(i, j);
                v += 2.0 * (w == 0.0 ? term : std::exp(cplx(0.0, -w * tp)) * term).real();
            }
        }
        return v;
    };
    if (t == 0.0) {
        return {value_at(0.0), 0.0};
    }
    double mean = 0.0;
    double m2 = 0.0;
    std::size_t k = 0;
    for_each_effective_time(cfg.samples, cfg.seed, t, params, cfg.worker_hint, [&](double tp) {
        const double x = value_at(tp);
        ++k;
        const double delta = x - mean;
        mean += delta / static_cast<double>(k);
        m2 += delta * (x - mean);
    });
    const double samples = static_cast<double>(cfg.samples);
    return {mean, std::sqrt(m2 / (samples - 1.0) / samples)};
}

}  // namespace decohere
