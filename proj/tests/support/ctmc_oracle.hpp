#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "bistab/bd.hpp"

namespace testsupport {

// Transient distribution of a birth-death CTMC at time t, started from x0,
// by uniformization: p(t) = sum_k Pois(k; lam*t) (P_uni)^k p(0). Poisson
// weights are evaluated in log space; the truncation index covers the tail
// far beyond 1e-12 and the result is renormalized over the kept terms.
inline std::vector<double> ctmc_transient(const bistab::BirthDeathModel& m, std::int64_t x0,
                                          double t) {
    const std::int64_t N = m.N;
    if (x0 < 0 || x0 > N) throw std::invalid_argument("ctmc_transient: x0 out of range");
    std::vector<double> v(static_cast<std::size_t>(N + 1), 0.0);
    v[static_cast<std::size_t>(x0)] = 1.0;
    double lam = 0.0;
    for (std::int64_t i = 0; i <= N; ++i)
        lam = std::max(lam, m.up[static_cast<std::size_t>(i)] +
                                m.down[static_cast<std::size_t>(i)]);
    if (!(t > 0.0) || lam == 0.0) return v;
    lam *= 1.000001;
    const double a = lam * t;
    if (a > 1e6) throw std::invalid_argument("ctmc_transient: lam*t too large");

    const auto K = static_cast<std::int64_t>(a + 12.0 * std::sqrt(a + 1.0) + 30.0);
    std::vector<double> out(static_cast<std::size_t>(N + 1), 0.0);
    std::vector<double> next(static_cast<std::size_t>(N + 1), 0.0);
    double wsum = 0.0;
    for (std::int64_t k = 0; k <= K; ++k) {
        const double logw = k == 0 ? -a
                                   : -a + static_cast<double>(k) * std::log(a) -
                                         std::lgamma(static_cast<double>(k) + 1.0);
        const double w = std::exp(logw);
        wsum += w;
        for (std::int64_t j = 0; j <= N; ++j)
            out[static_cast<std::size_t>(j)] += w * v[static_cast<std::size_t>(j)];
        if (k == K) break;
        for (std::int64_t j = 0; j <= N; ++j) {
            const auto ju = static_cast<std::size_t>(j);
            double acc = v[ju] * (1.0 - (m.up[ju] + m.down[ju]) / lam);
            if (j > 0) acc += v[ju - 1] * m.up[ju - 1] / lam;
            if (j < N) acc += v[ju + 1] * m.down[ju + 1] / lam;
            next[ju] = acc;
        }
        v.swap(next);
    }
    for (auto& p : out) p /= wsum;
    return out;
}

inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw std::invalid_argument("total_variation: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

}  // namespace testsupport
