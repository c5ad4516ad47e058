// quadrature.hpp: Globally adaptive 7/15-point Gauss-Kronrod integration for
// real or complex valued integrands on a finite interval.
//
// The interval with the largest error estimate is bisected until the summed
// estimate meets max(abs_tol, rel_tol * |I|). The per-panel error estimate is
// the raw |K15 - G7| difference, which is conservative for smooth integrands.

#pragma once

#include "decohere/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <sstream>
#include <vector>

namespace decohere::quadrature {

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 0.0;
    std::size_t initial_panels = 16;
    std::size_t max_panels = 20000;
};

template <class T>
struct Result {
    T value{};
    double error = 0.0;
    std::size_t panels = 0;
};

namespace detail {

// Kronrod abscissae (x >= 0, descending) and weights; Gauss weights for the
// embedded 7-point rule live on the odd Kronrod nodes.
inline constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& z) { return std::abs(z); }

template <class T>
struct Panel {
    double a;
    double b;
    T value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class T, class F>
Panel<T> gauss_kronrod_15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const T fc = f(center);
    T kronrod = fc * kWk[7];
    T gauss = fc * kWg[3];
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kXk[j];
        const T f1 = f(center - dx);
        const T f2 = f(center + dx);
        kronrod += (f1 + f2) * kWk[j];
        if (j % 2 == 1) {
            gauss += (f1 + f2) * kWg[j / 2];
        }
    }
    const T value = kronrod * half;
    return {a, b, value, magnitude((kronrod - gauss) * half)};
}

}  // namespace detail

// Integrates f over [a, b]. Throws NumericError when max_panels is exhausted
// before the tolerance is met; the message carries the achieved error.
template <class F>
auto integrate(F f, double a, double b, const Options& opt = {}) -> Result<decltype(f(a))> {
    using T = decltype(f(a));
    using detail::Panel;
    Result<T> result;
    if (!(b > a)) {
        return result;
    }
    std::priority_queue<Panel<T>> heap;
    const std::size_t initial = opt.initial_panels == 0 ? 1 : opt.initial_panels;
    const double width = (b - a) / static_cast<double>(initial);
    T total{};
    double error = 0.0;
    for (std::size_t i = 0; i < initial; ++i) {
        const double lo = a + width * static_cast<double>(i);
        const double hi = i + 1 == initial ? b : lo + width;
        auto p = detail::gauss_kronrod_15<T>(f, lo, hi);
        total += p.value;
        error += p.error;
        heap.push(p);
    }
    std::size_t panels = initial;
    auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(total)); };
    while (error > target()) {
        if (panels >= opt.max_panels) {
            std::ostringstream os;
            os << "adaptive quadrature did not converge: estimated error " << error
               << " exceeds tolerance " << target() << " after " << panels << " panels";
            throw NumericError(os.str());
        }
        const Panel<T> worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        auto left = detail::gauss_kronrod_15<T>(f, worst.a, mid);
        auto right = detail::gauss_kronrod_15<T>(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++panels;
    }
    // Final sum over the panels.
    T value{};
    double err = 0.0;
    while (!heap.empty()) {
        value += heap.top().value;
        err += heap.top().error;
        heap.pop();
    }
    result.value = value;
    result.error = err;
    result.panels = panels;
    return result;
}

}  // namespace decohere::quadrature
