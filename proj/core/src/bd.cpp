#include "bistab/bd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bistab {

namespace {

// Neumaier-compensated accumulator for long positive sums.
struct CompSum {
    double s = 0.0, c = 0.0;
    void add(double v) {
        const double t = s + v;
        if (std::abs(s) >= std::abs(v))
            c += (s - t) + v;
        else
            c += (v - t) + s;
        s = t;
    }
    double get() const { return s + c; }
};

void require_interior_rates(const BirthDeathModel& m) {
    if (m.N < 2) throw std::invalid_argument("birth-death analysis needs N >= 2");
    for (std::int64_t i = 1; i < m.N; ++i)
        if (!(m.up[i] > 0.0) || !(m.down[i] > 0.0))
            throw std::invalid_argument("degenerate chain: zero rate at interior state " +
                                        std::to_string(i));
}

// Shared scaffolding for absorption formulas. With rho_j = down(j)/up(j) and
// P_k = prod_{j<=k} rho_j the classical ladder sums are
//   Phi_j = sum_{k=0}^{j-1} P_k          (hit probability: pi_j = Phi_j/Phi_N)
//   Xi_j  = sum_{k=j}^{N-1} P_k
//   t_i   = 1 / (up(i) P_i)
// and the absorption time admits the everywhere-positive Green form
//   e_j * Phi_N = Xi_j sum_{i<j} Phi_i t_i + Phi_j sum_{i>=j} Xi_i t_i.
// Everything is carried as exp(log) relative to running maxima so strongly
// biased chains neither overflow nor cancel.
struct Ladder {
    std::int64_t N;
    std::vector<double> lp;    // lp[k] = sum_{j<=k} log rho_j, k = 0..N-1
    std::vector<double> phis;  // Phi_j / exp(Mphi), j = 0..N
    std::vector<double> xis;   // Xi_j / exp(Mphi), j = 0..N
    double Mphi = 0.0;

    explicit Ladder(const BirthDeathModel& m) : N(m.N) {
        require_interior_rates(m);
        lp.assign(N, 0.0);
        CompSum logsum;
        for (std::int64_t k = 1; k < N; ++k) {
            logsum.add(std::log(m.down[k]) - std::log(m.up[k]));
            lp[k] = logsum.get();
        }
        Mphi = *std::max_element(lp.begin(), lp.end());
        phis.assign(N + 1, 0.0);
        CompSum acc;
        for (std::int64_t j = 1; j <= N; ++j) {
            acc.add(std::exp(lp[j - 1] - Mphi));
            phis[j] = acc.get();
        }
        xis.assign(N + 1, 0.0);
        CompSum racc;
        for (std::int64_t j = N - 1; j >= 0; --j) {
            racc.add(std::exp(lp[j] - Mphi));
            xis[j] = racc.get();
        }
    }
};

}  // namespace

static void add_reaction_rates(const ReactionNetwork& net, std::int64_t N,
                               BirthDeathModel& m) {
    for (const auto& r : net.reactions()) {
        if (r.zeta != 1 && r.zeta != -1)
            throw std::invalid_argument(
                "birth-death build: reaction increments must be +1 or -1");
        for (std::int64_t x = 0; x <= N; ++x) {
            const double lam = propensity(r, x, N);
            if (r.zeta == 1)
                m.up[x] += lam;
            else
                m.down[x] += lam;
        }
    }
}

BirthDeathModel build_reactions_only(const ReactionNetwork& net, std::int64_t N) {
    if (N < 2) throw std::invalid_argument("birth-death build: N must be >= 2");
    BirthDeathModel m;
    m.N = N;
    m.up.assign(N + 1, 0.0);
    m.down.assign(N + 1, 0.0);
    add_reaction_rates(net, N, m);
    m.up[N] = 0.0;
    m.down[0] = 0.0;
    return m;
}

BirthDeathModel build_birth_death(const ReactionNetwork& net, const SplittingKernel& kernel,
                                  const SplitRateSpec& rate, std::int64_t N) {
    if (!kernel.unit_step())
        throw std::invalid_argument(
            "birth-death build: kernel must make unit steps (BernoulliStep or an "
            "equivalent custom kernel)");
    BirthDeathModel m = build_reactions_only(net, N);
    for (std::int64_t x = 1; x < N; ++x) {
        const double g = rate.rate(x, N);
        m.up[x] += g * kernel.up_prob(x, N);
        m.down[x] += g * kernel.down_prob(x, N);
    }
    return m;
}

std::vector<double> hitting_prob_all(const BirthDeathModel& model) {
    Ladder lad(model);
    std::vector<double> pi(model.N + 1, 0.0);
    const double total = lad.phis[model.N];
    for (std::int64_t j = 0; j <= model.N; ++j) pi[j] = lad.phis[j] / total;
    pi[model.N] = 1.0;
    return pi;
}

double hitting_prob(const BirthDeathModel& model, std::int64_t j) {
    if (j < 0 || j > model.N) throw std::invalid_argument("hitting_prob: j outside [0, N]");
    return hitting_prob_all(model)[j];
}

std::vector<double> expected_hitting_time_all(const BirthDeathModel& model) {
    Ladder lad(model);
    const std::int64_t N = model.N;
    // tau[i] = t_i / exp(Mt) with t_i = 1/(up(i) P_i)
    std::vector<double> lt(N, 0.0);
    double Mt = -std::numeric_limits<double>::infinity();
    for (std::int64_t i = 1; i < N; ++i) {
        lt[i] = -lad.lp[i] - std::log(model.up[i]);
        Mt = std::max(Mt, lt[i]);
    }
    std::vector<double> u(N + 1, 0.0);  // u[j] = sum_{i<j} Phi_i t_i, scaled
    CompSum uacc;
    for (std::int64_t j = 2; j <= N; ++j) {
        uacc.add(lad.phis[j - 1] * std::exp(lt[j - 1] - Mt));
        u[j] = uacc.get();
    }
    std::vector<double> v(N + 1, 0.0);  // v[j] = sum_{i>=j} Xi_i t_i, scaled
    CompSum vacc;
    for (std::int64_t j = N - 1; j >= 1; --j) {
        vacc.add(lad.xis[j] * std::exp(lt[j] - Mt));
        v[j] = vacc.get();
    }
    std::vector<double> e(N + 1, 0.0);
    const double lden = std::log(lad.phis[N]);
    for (std::int64_t j = 1; j < N; ++j) {
        const double num = lad.xis[j] * u[j] + lad.phis[j] * v[j];
        e[j] = std::exp(lad.Mphi + Mt + std::log(num) - lden);
    }
    return e;
}

double expected_hitting_time(const BirthDeathModel& model, std::int64_t j) {
    if (j < 0 || j > model.N)
        throw std::invalid_argument("expected_hitting_time: j outside [0, N]");
    return expected_hitting_time_all(model)[j];
}

BdSolution oracle_solve(const BirthDeathModel& model) {
    const std::int64_t N = model.N;
    if (N > 2000) throw std::invalid_argument("oracle_solve: dense solve limited to N <= 2000");
    require_interior_rates(model);
    // Thomas elimination on  up(i) y(i+1) - (up+down)(i) y(i) + down(i) y(i-1) = rhs(i)
    auto solve = [&](double rhs_const, double yN) {
        std::vector<double> cp(N, 0.0), dp(N, 0.0);
        for (std::int64_t i = 1; i < N; ++i) {
            const double a = model.down[i];
            const double b = -(model.up[i] + model.down[i]);
            const double c = model.up[i];
            const double m = b - a * cp[i - 1];
            if (m == 0.0) throw std::runtime_error("oracle_solve: singular tridiagonal system");
            cp[i] = c / m;
            dp[i] = (rhs_const - a * dp[i - 1]) / m;
        }
        std::vector<double> y(N + 1, 0.0);
        y[N] = yN;
        for (std::int64_t i = N - 1; i >= 1; --i) y[i] = dp[i] - cp[i] * y[i + 1];
        return y;
    };
    BdSolution sol;
    sol.pi = solve(0.0, 1.0);
    sol.pi[N] = 1.0;
    sol.e = solve(-1.0, 0.0);
    return sol;
}

BiasProfile bias_profile(const BirthDeathModel& model) {
    require_interior_rates(model);
    BiasProfile p;
    p.eps.assign(model.N + 1, 0.0);
    CompSum acc;
    for (std::int64_t i = 1; i < model.N; ++i) {
        p.eps[i] = model.down[i] / model.up[i] - 1.0;
        acc.add(std::abs(p.eps[i]));
    }
    p.sum_abs = acc.get();
    return p;
}

FastConditionReport check_fast_conditions(const ReactionNetwork& net,
                                          const SplittingKernel& kernel,
                                          const SplitRateSpec& rate,
                                          const std::vector<std::int64_t>& N_list) {
    FastConditionReport rep;
    rep.structure_ok = true;
    bool has_escape_up = false, has_escape_down = false;
    for (const auto& r : net.reactions()) {
        if (r.zeta != 1 && r.zeta != -1) {
            rep.structure_ok = false;
            rep.structure_issues.push_back("reaction with |increment| != 1");
        }
        if (!r.has_standard_scale()) {
            rep.structure_ok = false;
            rep.structure_issues.push_back("reaction without standard scaling");
        }
        if (r.a == 0 && r.zeta == 1) {
            has_escape_up = true;
            rep.r01_pred += r.kappa;
        }
        if (r.b == 0 && r.zeta == -1) {
            has_escape_down = true;
            rep.r10_pred += r.kappa;
        }
    }
    if (!has_escape_up) {
        rep.structure_ok = false;
        rep.structure_issues.push_back("no (0,b,+1) reaction active at state 0");
    }
    if (!has_escape_down) {
        rep.structure_ok = false;
        rep.structure_issues.push_back("no (a,0,-1) reaction active at state N");
    }
    if (!kernel.unit_step()) {
        rep.structure_ok = false;
        rep.structure_issues.push_back("kernel does not make unit steps");
    }

    for (std::int64_t N : N_list) {
        FastConditionRow row;
        row.N = N;
        const double g = rate.state_factor(static_cast<double>(N));
        CompSum s1, s2, s3;
        for (std::int64_t i = 1; i < N; ++i) {
            const double p = rate.shape_at(static_cast<double>(i) / static_cast<double>(N));
            if (!(p > 0.0))
                throw std::invalid_argument("fast conditions: shape vanishes at interior state");
            s1.add(1.0 / p);
            s2.add(static_cast<double>(i) / p);
            s3.add(static_cast<double>(N - i) / p);
        }
        row.sum1 = static_cast<double>(N) / g * s1.get();
        row.sum2 = s2.get() / g;
        row.sum3 = s3.get() / g;
        if (rep.structure_ok && kernel.unit_step()) {
            BirthDeathModel m = build_birth_death(net, kernel, rate, N);
            row.sum_abs_eps = bias_profile(m).sum_abs;
            row.N_pi_1N = static_cast<double>(N) * hitting_prob(m, 1);
            row.N_e_1 = static_cast<double>(N) * expected_hitting_time(m, 1);
        }
        rep.rows.push_back(row);
    }

    rep.sums_decreasing = rep.rows.size() >= 2;
    for (std::size_t k = 1; k < rep.rows.size(); ++k) {
        const auto& a = rep.rows[k - 1];
        const auto& b = rep.rows[k];
        if (!(b.sum1 < a.sum1 && b.sum2 < a.sum2 && b.sum3 < a.sum3))
            rep.sums_decreasing = false;
    }
    return rep;
}

}  // namespace bistab
