// oracles.hpp: Independent reference computations and random generators for
// the test suites. Nothing here calls the library's propagators or quadrature.

#pragma once

#include "decohere/core.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using decohere::cplx;
using decohere::Matrix;
using decohere::Vector;

// Seeded generator for property tests.
struct Gen {
    std::mt19937_64 engine;

    explicit Gen(std::uint64_t seed) : engine(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine); }
    cplx cnormal() { return {normal(), normal()}; }

    Matrix complex_gaussian(Eigen::Index n) {
        Matrix g(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                g(i, j) = cnormal();
            }
        }
        return g;
    }

    Matrix hermitian(Eigen::Index n, double scale = 1.0) {
        const Matrix g = complex_gaussian(n);
        return scale * 0.5 * (g + g.adjoint());
    }

    Matrix unitary(Eigen::Index n) {
        Eigen::HouseholderQR<Matrix> qr(complex_gaussian(n));
        return qr.householderQ() * Matrix::Identity(n, n);
    }

    // Random mixed state of full rank.
    Matrix density(Eigen::Index n) {
        const Matrix g = complex_gaussian(n);
        Matrix rho = g * g.adjoint();
        rho /= rho.trace().real();
        return 0.5 * (rho + rho.adjoint());
    }

    Matrix pure(Eigen::Index n) {
        Vector v(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            v(i) = cnormal();
        }
        v.normalize();
        return v * v.adjoint();
    }

    std::vector<double> probabilities(Eigen::Index n) {
        std::vector<double> p(static_cast<std::size_t>(n));
        double sum = 0.0;
        for (auto& x : p) {
            x = -std::log(uniform(1e-300, 1.0));
            sum += x;
        }
        for (auto& x : p) {
            x /= sum;
        }
        return p;
    }
};

// rho(t) = exp(-iHt/hbar) rho exp(+iHt/hbar) via the matrix exponential.
inline Matrix unitary_evolve(const Matrix& rho, const Matrix& h, double t, double hbar = 1.0) {
    const Matrix u = (cplx(0.0, -t / hbar) * h).exp();
    return u * rho * u.adjoint();
}

// Classic fixed-step fourth-order Runge-Kutta for a matrix ODE.
inline Matrix rk4(const std::function<Matrix(const Matrix&)>& rhs, Matrix y, double t_end, std::size_t steps) {
    const double h = t_end / static_cast<double>(steps);
    for (std::size_t i = 0; i < steps; ++i) {
        const Matrix k1 = rhs(y);
        const Matrix k2 = rhs(y + 0.5 * h * k1);
        const Matrix k3 = rhs(y + 0.5 * h * k2);
        const Matrix k4 = rhs(y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return y;
}

// (1 + i w tau1)^(-t/tau2) on the principal branch, straight from std::pow.
inline cplx factor(double w, double tau1, double tau2, double t) {
    return std::pow(cplx(1.0, w * tau1), -t / tau2);
}

// Gamma(shape, scale) density written out from its definition.
inline double gamma_density(double x, double shape, double scale) {
    if (x <= 0.0) {
        return shape == 1.0 ? 1.0 / scale : (shape > 1.0 ? 0.0 : INFINITY);
    }
    const double u = x / scale;
    return std::exp((shape - 1.0) * std::log(u) - u - std::lgamma(shape)) / scale;
}

// Integral of f over [0, inf) for a function concentrated like Gamma(shape,
// scale), by splitting around the bulk and using Boost quadrature.
inline double integrate_gamma_like(const std::function<double(double)>& f, double shape, double scale) {
    const double mean = shape * scale;
    const double sd = std::sqrt(shape) * scale;
    const double hi = mean + 60.0 * sd + 80.0 * scale;
    if (shape < 1.0) {
        boost::math::quadrature::tanh_sinh<double> ts;
        return ts.integrate(f, 0.0, hi, 1e-13);
    }
    const double lo = std::max(0.0, mean - 60.0 * sd);
    double total = 0.0;
    const int pieces = 64;
    for (int i = 0; i < pieces; ++i) {
        const double a = lo + (hi - lo) * i / pieces;
        const double b = lo + (hi - lo) * (i + 1) / pieces;
        total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 10, 1e-13);
    }
    return total;
}

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace oracle
