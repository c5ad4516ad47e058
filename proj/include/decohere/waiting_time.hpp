// waiting_time.hpp: The Gamma waiting-time law for the effective evolution time.
//
// After elapsed time t, t/tau2 independent evolution events of width tau1 have
// taken place; the total effective time t' is Gamma distributed with shape
// k = t/tau2 and scale tau1:
//
//   P(t, t') = exp(-t'/tau1) (t'/tau1)^(k-1) / (tau1 Gamma(k)).
//
// The law is continued to non-integer k. gamma_average() integrates an arbitrary
// signal against it and is the quadrature engine behind every oracle.

#pragma once

#include "decohere/core.hpp"
#include "decohere/quadrature.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

namespace decohere::waiting_time {

struct GammaLaw {
    double shape;
    double scale;

    static GammaLaw at(double t, const DecoherenceParams& params);

    double log_pdf(double t_prime) const;
    double pdf(double t_prime) const;
    double mean() const noexcept { return shape * scale; }
    double variance() const noexcept { return shape * scale * scale; }
};

// Density value; `singular` marks the integrable +inf at t' = 0 for shape < 1.
struct PdfValue {
    double value;
    bool singular;
};

// Throws DomainError for t <= 0 (the t -> 0 law is a point mass) or t' < 0.
PdfValue gamma_pdf(double t_prime, double t, const DecoherenceParams& params);

struct Moments {
    double mean;
    double sigma;

    double relative_dispersion() const noexcept { return sigma / mean; }
};

// Mean t tau1/tau2 (the reduced time) and dispersion sqrt(mean * tau1).
Moments gamma_moments(double t, const DecoherenceParams& params);

// Same moments, packaged as a Gaussian surrogate. Only meaningful for many
// events: throws DomainError unless t/tau2 > 1.
Moments gaussian_approximation(double t, const DecoherenceParams& params);
double gaussian_pdf(double t_prime, const Moments& m);

// Poisson law for the number of events in the Milburn picture.
double milburn_poisson_pmf(std::uint64_t n, double t, double tau);

// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x).
double regularized_lower_gamma(double shape, double x);
double regularized_upper_gamma(double shape, double x);

// Interval [lo, hi] in units of the scale outside which each tail of the
// standard Gamma(shape) law holds at most `tail` probability. lo is 0 for
// shape < 1.
struct Support {
    double lo;
    double hi;
};
Support truncated_support(double shape, double tail);

struct AverageOptions {
    double abs_tol = 1e-12;
    double rel_tol = 0.0;
    double tail = 1e-14;
    std::size_t initial_panels = 16;
    std::size_t max_panels = 20000;
};

// E[f(t')] for t' ~ P(t, .). t = 0 is the point mass at t' = 0. For shape < 1
// the substitution s = (t'/tau1)^shape removes the endpoint singularity.
// Throws NumericError if the quadrature budget is exhausted.
template <class F>
auto gamma_average(F f, double t, const DecoherenceParams& params, const AverageOptions& opt = {})
    -> quadrature::Result<decltype(f(0.0))> {
    using T = decltype(f(0.0));
    if (t < 0.0 || !std::isfinite(t)) {
        throw DomainError("gamma_average: t must be finite and >= 0");
    }
    if (t == 0.0) {
        return {f(0.0), 0.0, 0};
    }
    const double k = params.shape(t);
    const double scale = params.tau1();
    const Support sup = truncated_support(k, opt.tail);
    const quadrature::Options qopt{opt.abs_tol, opt.rel_tol, opt.initial_panels, opt.max_panels};
    if (k >= 1.0) {
        const double log_norm = std::lgamma(k);
        auto integrand = [&](double u) -> T {
            const double log_w = -u + (k == 1.0 ? 0.0 : (k - 1.0) * std::log(u)) - log_norm;
            return f(scale * u) * std::exp(log_w);
        };
        return quadrature::integrate(integrand, sup.lo, sup.hi, qopt);
    }
    const double inv_k = 1.0 / k;
    const double norm = std::exp(-std::lgamma(k + 1.0));
    auto integrand = [&](double s) -> T {
        const double u = std::pow(s, inv_k);
        return f(scale * u) * (std::exp(-u) * norm);
    };
    return quadrature::integrate(integrand, 0.0, std::pow(sup.hi, k), qopt);
}

}  // namespace decohere::waiting_time
