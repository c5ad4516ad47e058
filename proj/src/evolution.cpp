#include "decohere/evolution.hpp"

#include "decohere/errors.hpp"
#include "decohere/waiting_time.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace decohere {

namespace {

// Applies an elementwise coherence map g(w_nm) in the energy basis and returns
// the result in rho's basis. Diagonal elements are untouched; the lower triangle
// is the conjugate of the upper one, so Hermiticity is exact.
template <class G>
DensityMatrix map_coherences(const DensityMatrix& rho, const SpectralHamiltonian& spec,
                             const DecoherenceParams& params, G&& g) {
    const DensityMatrix e = to_energy_basis(rho, spec);
    const FrequencyMatrix freqs = bohr_frequencies(spec, params);
    Matrix out = e.entries();
    const auto n = out.rows();
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = a + 1; b < n; ++b) {
            out(a, b) = g(freqs.omegas(a, b)) * e.entries()(a, b);
            out(b, a) = std::conj(out(a, b));
        }
    }
    const DensityMatrix result = DensityMatrix::trusted(std::move(out), Basis::energy);
    return rho.basis() == Basis::energy ? result : from_energy_basis(result, spec);
}

Matrix to_basis(const Matrix& energy, const SpectralHamiltonian& spec, Basis basis) {
    return basis == Basis::energy ? energy : spec.from_energy_basis(energy);
}

}  // namespace

double damping_rate(double omega, const DecoherenceParams& params) {
    const double x = omega * params.tau1();
    return std::log1p(x * x) / (2.0 * params.tau2());
}

double frequency_shift(double omega, const DecoherenceParams& params) {
    return std::atan(omega * params.tau1()) / params.tau2();
}

cplx propagator_factor(double omega, const DecoherenceParams& params, double t) {
    if (omega == 0.0 || t == 0.0) {
        return {1.0, 0.0};
    }
    return std::exp(-t * cplx(damping_rate(omega, params), frequency_shift(omega, params)));
}

PropagatorFactor propagator_factors(const FrequencyMatrix& freqs, const DecoherenceParams& params, double t) {
    const auto n = freqs.omegas.rows();
    PropagatorFactor pf{Matrix::Ones(n, n), RealMatrix::Zero(n, n), RealMatrix::Zero(n, n)};
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = a + 1; b < n; ++b) {
            const double w = freqs.omegas(a, b);
            pf.gamma(a, b) = pf.gamma(b, a) = damping_rate(w, params);
            pf.nu(a, b) = frequency_shift(w, params);
            pf.nu(b, a) = -pf.nu(a, b);
            pf.factors(a, b) = propagator_factor(w, params, t);
            pf.factors(b, a) = std::conj(pf.factors(a, b));
        }
    }
    return pf;
}

DensityMatrix propagate_closed_form(const DensityMatrix& rho0, const SpectralHamiltonian& spec,
                                    const DecoherenceParams& params, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw DomainError("propagate_closed_form: t must be finite and >= 0");
    }
    if (t == 0.0) {
        return rho0;
    }
    return map_coherences(rho0, spec, params, [&](double w) { return propagator_factor(w, params, t); });
}

DensityMatrix propagate_quadrature(const DensityMatrix& rho0, const SpectralHamiltonian& spec,
                                   const DecoherenceParams& params, double t, double tol) {
    if (!(t >= params.tau2()) || !std::isfinite(t)) {
        throw DomainError("propagate_quadrature: needs t >= tau2 (bounded integrand)");
    }
    if (!(tol > 0.0)) {
        throw DomainError("propagate_quadrature: tolerance must be positive");
    }
    waiting_time::AverageOptions opt;
    opt.abs_tol = tol;
    std::map<double, cplx> cache;
    auto characteristic = [&](double w) -> cplx {
        if (w == 0.0) {
            return {1.0, 0.0};
        }
        if (auto it = cache.find(w); it != cache.end()) {
            return it->second;
        }
        auto phase = [w](double tp) { return std::exp(cplx(0.0, -w * tp)); };
        const cplx value = waiting_time::gamma_average(phase, t, params, opt).value;
        cache.emplace(w, value);
        return value;
    };
    return map_coherences(rho0, spec, params, characteristic);
}

DensityMatrix finite_difference_step(const DensityMatrix& rho_bar, const SpectralHamiltonian& spec,
                                     const DecoherenceParams& params) {
    if (rho_bar.basis() != Basis::energy) {
        throw ValidationError("finite_difference_step: input must be in the energy basis");
    }
    const double tau1 = params.tau1();
    return map_coherences(rho_bar, spec, params, [tau1](double w) { return 1.0 / cplx(1.0, w * tau1); });
}

Matrix generator_apply(const DensityMatrix& rho, const SpectralHamiltonian& spec, const DecoherenceParams& params) {
    const Matrix e = to_energy_basis(rho, spec).entries();
    const FrequencyMatrix freqs = bohr_frequencies(spec, params);
    const auto n = e.rows();
    Matrix out = Matrix::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            const double w = freqs.omegas(a, b);
            if (w != 0.0) {
                out(a, b) = -cplx(damping_rate(w, params), frequency_shift(w, params)) * e(a, b);
            }
        }
    }
    return to_basis(out, spec, rho.basis());
}

Matrix phase_destroying_rhs(const Matrix& rho, const SpectralHamiltonian& spec, const DecoherenceParams& params,
                            Basis basis) {
    const Matrix e = basis == Basis::energy ? rho : spec.to_energy_basis(rho);
    const FrequencyMatrix freqs = bohr_frequencies(spec, params);
    const double tau1 = params.tau1();
    const double tau2 = params.tau2();
    const auto n = e.rows();
    Matrix out(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            const double w = freqs.omegas(a, b);
            const double x = w * tau1;
            out(a, b) = -cplx(x * x / (2.0 * tau2), x / tau2) * e(a, b);
        }
    }
    return to_basis(out, spec, basis);
}

cplx milburn_factor(double omega, double tau, double t) {
    if (!(tau > 0.0)) {
        throw DomainError("milburn_factor: tau must be positive");
    }
    const double x = omega * tau;
    // exp(-i x) - 1 = (cos x - 1) - i sin x
    return std::exp((t / tau) * cplx(std::cos(x) - 1.0, -std::sin(x)));
}

DensityMatrix milburn_propagate(const DensityMatrix& rho0, const SpectralHamiltonian& spec, double tau, double t,
                                double hbar) {
    // tau1 = tau2 = tau; hbar sets the Bohr frequencies.
    const DecoherenceParams params(tau, tau, hbar);
    return map_coherences(rho0, spec, params, [&](double w) { return milburn_factor(w, tau, t); });
}

DensityMatrix map_semigroup_propagate(const Superoperator& m, const DensityMatrix& rho0,
                                      const DecoherenceParams& params, double t, SemigroupMode mode) {
    if (rho0.dim() != m.dim()) {
        throw ValidationError("map_semigroup_propagate: dimension mismatch");
    }
    if (!(t >= 0.0)) {
        throw DomainError("map_semigroup_propagate: t must be >= 0");
    }
    Eigen::ComplexEigenSolver<Matrix> solver(m.matrix());
    if (solver.info() != Eigen::Success) {
        throw NumericError("map_semigroup_propagate: eigensolver did not converge");
    }
    const Matrix& v = solver.eigenvectors();
    Eigen::JacobiSVD<Matrix> svd(v);
    const auto& sv = svd.singularValues();
    const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
    if (!(cond <= 1e8)) {
        std::ostringstream os;
        os << "map_semigroup_propagate: map is not diagonalizable to working precision (eigenvector condition "
           << cond << ")";
        throw NumericError(os.str());
    }
    auto on_negative_axis = [](cplx z) {
        const double scale = std::max(1.0, std::abs(z));
        return z.real() <= 1e-14 * scale && std::abs(z.imag()) <= 1e-12 * scale;
    };
    const double power = t / params.tau2();
    const Vector& lambda = solver.eigenvalues();
    Vector weights(lambda.size());
    for (Eigen::Index j = 0; j < lambda.size(); ++j) {
        const cplx l = lambda(j);
        if (on_negative_axis(l)) {
            std::ostringstream os;
            os << "map_semigroup_propagate: eigenvalue " << l << " of M lies on the logarithm branch cut";
            throw DomainError(os.str());
        }
        const cplx log_l = std::log(l);
        if (mode == SemigroupMode::regular) {
            weights(j) = std::exp(power * log_l);
        } else {
            const cplx base = 1.0 - log_l;
            if (on_negative_axis(base)) {
                std::ostringstream os;
                os << "map_semigroup_propagate: eigenvalue " << base << " of I - ln M lies on the branch cut";
                throw DomainError(os.str());
            }
            weights(j) = std::exp(-power * std::log(base));
        }
    }
    const Vector coeffs = v.partialPivLu().solve(vectorize(rho0.entries()));
    const Vector out = v * weights.cwiseProduct(coeffs);
    return DensityMatrix::trusted(unvectorize(out, m.dim()), rho0.basis());
}

}  // namespace decohere
