#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

namespace bistab {

struct QuadOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_depth = 48;
};

namespace quad_detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK dqk15).
inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

template <class F>
std::pair<double, double> gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double result_gauss = wg[3] * fc;
    double result_kronrod = wgk[7] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = h * xgk[j];
        const double fsum = f(c - dx) + f(c + dx);
        result_kronrod += wgk[j] * fsum;
        if (j % 2 == 1) result_gauss += wg[j / 2] * fsum;
    }
    result_gauss *= h;
    result_kronrod *= h;
    return {result_kronrod, std::fabs(result_kronrod - result_gauss)};
}

template <class F>
double adapt(F& f, double a, double b, double tol, int depth, const QuadOptions& opt) {
    auto [value, err] = gk15(f, a, b);
    if (err <= tol || err <= opt.rel_tol * std::fabs(value)) return value;
    if (depth >= opt.max_depth)
        throw std::runtime_error("adaptive quadrature failed to converge");
    const double c = 0.5 * (a + b);
    return adapt(f, a, c, 0.5 * tol, depth + 1, opt) +
           adapt(f, c, b, 0.5 * tol, depth + 1, opt);
}

}  // namespace quad_detail

// Adaptive Gauss-Kronrod integration of f over [a, b]. Orientation follows the
// usual convention: integrate(f, b, a) == -integrate(f, a, b).
template <class F>
double integrate(F&& f, double a, double b, QuadOptions opt = {}) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    auto& fn = f;
    return sign * quad_detail::adapt(fn, a, b, opt.abs_tol, 0, opt);
}

}  // namespace bistab
