#include "decohere/waiting_time.hpp"

#include "decohere/errors.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace decohere::waiting_time {

GammaLaw GammaLaw::at(double t, const DecoherenceParams& params) {
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw DomainError("Gamma law needs t > 0 (t = 0 is a point mass at t' = 0)");
    }
    return GammaLaw{params.shape(t), params.tau1()};
}

double GammaLaw::log_pdf(double t_prime) const {
    const double u = t_prime / scale;
    if (u == 0.0) {
        if (shape < 1.0) return std::numeric_limits<double>::infinity();
        if (shape == 1.0) return -std::log(scale);
        return -std::numeric_limits<double>::infinity();
    }
    return -u + (shape - 1.0) * std::log(u) - std::lgamma(shape) - std::log(scale);
}

double GammaLaw::pdf(double t_prime) const { return std::exp(log_pdf(t_prime)); }

PdfValue gamma_pdf(double t_prime, double t, const DecoherenceParams& params) {
    if (!(t_prime >= 0.0)) {
        throw DomainError("gamma_pdf: t' must be >= 0");
    }
    const GammaLaw law = GammaLaw::at(t, params);
    if (t_prime == 0.0 && law.shape < 1.0) {
        return {std::numeric_limits<double>::infinity(), true};
    }
    return {law.pdf(t_prime), false};
}

Moments gamma_moments(double t, const DecoherenceParams& params) {
    const GammaLaw law = GammaLaw::at(t, params);
    const double mean = law.mean();
    return {mean, std::sqrt(mean * params.tau1())};
}

Moments gaussian_approximation(double t, const DecoherenceParams& params) {
    if (!(params.shape(t) > 1.0)) {
        throw DomainError("Gaussian approximation needs many events (t/tau2 > 1)");
    }
    return gamma_moments(t, params);
}

double gaussian_pdf(double t_prime, const Moments& m) {
    const double z = (t_prime - m.mean) / m.sigma;
    return std::exp(-0.5 * z * z) / (m.sigma * std::sqrt(2.0 * std::numbers::pi));
}

double milburn_poisson_pmf(std::uint64_t n, double t, double tau) {
    if (!(tau > 0.0) || !(t >= 0.0)) {
        throw DomainError("milburn_poisson_pmf: need t >= 0 and tau > 0");
    }
    const double mu = t / tau;
    if (mu == 0.0) {
        return n == 0 ? 1.0 : 0.0;
    }
    const double k = static_cast<double>(n);
    return std::exp(-mu + k * std::log(mu) - std::lgamma(k + 1.0));
}

double regularized_lower_gamma(double shape, double x) { return boost::math::gamma_p(shape, x); }

double regularized_upper_gamma(double shape, double x) { return boost::math::gamma_q(shape, x); }

Support truncated_support(double shape, double tail) {
    if (!(shape > 0.0) || !(tail > 0.0 && tail < 0.5)) {
        throw DomainError("truncated_support: need shape > 0 and 0 < tail < 0.5");
    }
    const double hi = boost::math::gamma_q_inv(shape, tail);
    const double lo = shape < 1.0 ? 0.0 : boost::math::gamma_p_inv(shape, tail);
    return {lo, hi};
}

}  // namespace decohere::waiting_time
