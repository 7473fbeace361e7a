#include "bistab/reaction.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace bistab {

ReactionNetwork::ReactionNetwork(std::vector<Reaction> reactions)
    : reactions_(std::move(reactions)) {
    for (const auto& r : reactions_) {
        if (r.a < 0 || r.b < 0) throw std::invalid_argument("reaction: negative reactant count");
        if (r.zeta == 0) throw std::invalid_argument("reaction: no net change (zeta = 0)");
        if (r.zeta < -r.a || r.zeta > r.b)
            throw std::invalid_argument("reaction: zeta outside {-a..b} breaks conservation");
        if (!(r.kappa > 0.0)) throw std::invalid_argument("reaction: rate constant must be positive");
    }

    group_of_.resize(reactions_.size());
    std::map<std::pair<int, int>, int> ids;
    for (std::size_t i = 0; i < reactions_.size(); ++i) {
        auto key = std::make_pair(reactions_[i].a, reactions_[i].b);
        auto [it, inserted] = ids.try_emplace(key, static_cast<int>(ids.size()));
        group_of_[i] = it->second;
    }

    group_balanced_.assign(ids.size(), false);
    for (int g = 0; g < static_cast<int>(ids.size()); ++g) {
        bool all_exact = true;
        Rat64 exact_sum(0);
        double sum = 0.0, abs_sum = 0.0;
        for (std::size_t i = 0; i < reactions_.size(); ++i) {
            if (group_of_[i] != g) continue;
            const auto& r = reactions_[i];
            sum += r.zeta * r.kappa;
            abs_sum += std::abs(r.zeta * r.kappa);
            if (all_exact && r.kappa_exact)
                exact_sum = exact_sum + Rat64(r.zeta) * (*r.kappa_exact);
            else
                all_exact = false;
        }
        if (all_exact)
            group_balanced_[g] = exact_sum.is_zero();
        else
            group_balanced_[g] = abs_sum > 0.0 && std::abs(sum) <= 1e-12 * abs_sum;
    }
}

bool ReactionNetwork::unit_step() const {
    for (const auto& r : reactions_)
        if (r.zeta != 1 && r.zeta != -1) return false;
    return true;
}

double ReactionNetwork::max_kappa() const {
    double m = 0.0;
    for (const auto& r : reactions_) m = std::max(m, r.kappa);
    return m;
}

double scaled_falling_factorial(double z, int c, double N) {
    double v = 1.0;
    for (int k = 0; k < c; ++k) v *= z - k / N;
    return v;
}

double falling_factorial(double x, int c) {
    double v = 1.0;
    for (int k = 0; k < c; ++k) v *= x - k;
    return v;
}

double propensity(const Reaction& r, std::int64_t x, std::int64_t N) {
    if (x < r.a || N - x < r.b) return 0.0;
    const double scale = std::pow(static_cast<double>(N), r.scale);
    return r.kappa * scale * falling_factorial(static_cast<double>(x), r.a) *
           falling_factorial(static_cast<double>(N - x), r.b);
}

double finite_size_drift(const ReactionNetwork& net, double z, std::int64_t N) {
    const double Nd = static_cast<double>(N);
    double drift = 0.0;
    for (std::size_t i = 0; i < net.size(); ++i) {
        if (net.balanced(i)) continue;
        const auto& r = net.reactions()[i];
        const double order = std::pow(Nd, r.a + r.b - 1 + r.scale);
        drift += r.zeta * r.kappa * order * scaled_falling_factorial(z, r.a, Nd) *
                 scaled_falling_factorial(1.0 - z, r.b, Nd);
    }
    return drift;
}

namespace {

// Accumulates zeta kappa x^a (1-x)^b into ascending power-of-x coefficients,
// exactly when every contributing rate constant is an exact rational.
struct DriftAccumulator {
    std::vector<Rat64> exact;
    std::vector<double> approx;
    bool all_exact = true;

    void ensure(std::size_t n) {
        if (exact.size() < n) exact.resize(n, Rat64(0));
        if (approx.size() < n) approx.resize(n, 0.0);
    }

    void add(const Reaction& r) {
        const int deg = r.a + r.b;
        ensure(static_cast<std::size_t>(deg) + 1);
        // (1-x)^b = sum_j C(b,j) (-1)^j x^j
        std::int64_t binom = 1;
        for (int j = 0; j <= r.b; ++j) {
            const std::int64_t signed_c = (j % 2 == 0) ? binom : -binom;
            const double w = static_cast<double>(r.zeta) * static_cast<double>(signed_c);
            approx[r.a + j] += w * r.kappa;
            if (all_exact && r.kappa_exact) {
                exact[r.a + j] =
                    exact[r.a + j] + Rat64(r.zeta) * Rat64(signed_c) * (*r.kappa_exact);
            } else {
                all_exact = false;
            }
            binom = binom * (r.b - j) / (j + 1);
        }
    }

    Polynomial poly() const {
        std::vector<double> c(approx.size());
        for (std::size_t k = 0; k < c.size(); ++k)
            c[k] = all_exact ? exact[k].value() : approx[k];
        return Polynomial(c);
    }
};

}  // namespace

Polynomial limiting_drift(const ReactionNetwork& net) {
    DriftAccumulator acc;
    for (std::size_t i = 0; i < net.size(); ++i) {
        if (net.balanced(i)) continue;
        const auto& r = net.reactions()[i];
        if (!r.has_standard_scale())
            throw std::invalid_argument(
                "limiting_drift: biased reaction with nonstandard scale has no drift limit");
        acc.add(r);
    }
    return acc.poly();
}

Polynomial limiting_rate(const ReactionNetwork& net, int direction) {
    if (direction != 1 && direction != -1)
        throw std::invalid_argument("limiting_rate: direction must be +1 or -1");
    DriftAccumulator acc;
    for (std::size_t i = 0; i < net.size(); ++i) {
        const auto& r = net.reactions()[i];
        if (r.zeta != 1 && r.zeta != -1)
            throw std::invalid_argument("limiting_rate: requires unit-step reactions");
        if (!r.has_standard_scale())
            throw std::invalid_argument("limiting_rate: requires standard scaling");
        if (r.zeta != direction) continue;
        Reaction unit = r;
        unit.zeta = 1;
        acc.add(unit);
    }
    return acc.poly();
}

ValidationReport validate(const ReactionNetwork& net, std::int64_t N) {
    ValidationReport rep;

    for (std::size_t i = 0; i < net.size(); ++i) {
        const auto& r = net.reactions()[i];
        // State must stay in [0,N]: a decrease by |zeta| needs at least |zeta|
        // copies of A in the propensity, an increase needs zeta copies of B.
        if (r.zeta < 0 && r.a < -r.zeta) {
            rep.assumption_bounds = false;
            rep.issues.push_back("reaction " + std::to_string(i) +
                                 ": can take the state below 0 (a < |zeta|)");
        }
        if (r.zeta > 0 && r.b < r.zeta) {
            rep.assumption_bounds = false;
            rep.issues.push_back("reaction " + std::to_string(i) +
                                 ": can take the state above N (b < zeta)");
        }
        if (net.balanced(i) && (r.a < 1 || r.b < 1)) {
            rep.balanced_structure = false;
            rep.issues.push_back("reaction " + std::to_string(i) +
                                 ": balanced reactions need a>0 and b>0");
        }
    }

    double drift0 = 0.0, driftN = 0.0;
    for (const auto& r : net.reactions()) {
        drift0 += r.zeta * propensity(r, 0, N);
        driftN += r.zeta * propensity(r, N, N);
    }
    rep.drift_at_0 = drift0;
    rep.drift_at_N = driftN;
    if (!(drift0 > 0.0)) {
        rep.assumption_escape_0 = false;
        rep.issues.push_back("no escape from the boundary x=0: net rate " +
                             std::to_string(drift0));
    }
    if (!(driftN < 0.0)) {
        rep.assumption_escape_N = false;
        rep.issues.push_back("no escape from the boundary x=N: net rate " +
                             std::to_string(driftN));
    }

    rep.ok = rep.assumption_bounds && rep.assumption_escape_0 && rep.assumption_escape_N &&
             rep.balanced_structure;
    return rep;
}

}  // namespace bistab
