#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bistab/polynomial.hpp"
#include "bistab/rational.hpp"

namespace bistab {

// One conservative reaction aA + bB -> (a+zeta)A + (b-zeta)B with rate
// constant kappa(N) = kappa_tilde * N^scale. The default ("standard") scale
// is 1-(a+b), under which propensities are O(N) and the drift has a limit.
struct Reaction {
    int a = 0;
    int b = 0;
    int zeta = 0;
    double kappa = 0.0;
    std::optional<Rat64> kappa_exact;
    double scale = 0.0;

    int order() const { return a + b; }
    double standard_scale() const { return 1.0 - (a + b); }
    bool has_standard_scale() const { return scale == standard_scale(); }
};

inline Reaction make_reaction(int a, int b, int zeta, Rat64 kappa) {
    Reaction r;
    r.a = a;
    r.b = b;
    r.zeta = zeta;
    r.kappa = kappa.value();
    r.kappa_exact = kappa;
    r.scale = r.standard_scale();
    return r;
}

// A network over the conserved pair (A, B). Reactions are grouped by reactant
// signature (a,b); a group is balanced when its zeta-weighted rate constants
// sum to zero, in which case it contributes noise but no drift.
class ReactionNetwork {
public:
    ReactionNetwork() = default;
    explicit ReactionNetwork(std::vector<Reaction> reactions);

    const std::vector<Reaction>& reactions() const { return reactions_; }
    std::size_t size() const { return reactions_.size(); }
    bool empty() const { return reactions_.empty(); }

    int group_of(std::size_t r) const { return group_of_[r]; }
    int group_count() const { return static_cast<int>(group_balanced_.size()); }
    bool group_balanced(int g) const { return group_balanced_[g]; }
    bool balanced(std::size_t r) const { return group_balanced_[group_of_[r]]; }

    bool unit_step() const;   // every |zeta| == 1
    double max_kappa() const;

private:
    std::vector<Reaction> reactions_;
    std::vector<int> group_of_;
    std::vector<bool> group_balanced_;
};

// (z)_{c,N} = z (z - 1/N) ... (z - (c-1)/N); equals 1 when c = 0.
double scaled_falling_factorial(double z, int c, double N);

// (x)_c = x (x-1) ... (x-c+1) on reals; equals 1 when c = 0.
double falling_factorial(double x, int c);

// lambda(x) = kappa_tilde N^scale (x)_a (N-x)_b; zero when x < a or N-x < b.
double propensity(const Reaction& r, std::int64_t x, std::int64_t N);

// Finite-N drift F_N(z) = sum over biased reactions of
// zeta kappa_tilde N^{a+b-1+scale} (z)_{a,N} (1-z)_{b,N}.
double finite_size_drift(const ReactionNetwork& net, double z, std::int64_t N);

// Limit drift phi(x) = sum over biased reactions of zeta kappa_tilde x^a (1-x)^b.
// Requires standard scaling on every biased reaction.
Polynomial limiting_drift(const ReactionNetwork& net);

// One-sided limit rates r(x) = sum over all unit-step reactions with the
// given direction of kappa_tilde x^a (1-x)^b (the N->inf limit of r(Nx)/N).
Polynomial limiting_rate(const ReactionNetwork& net, int direction);

struct ValidationReport {
    bool ok = true;
    bool assumption_bounds = true;      // propensities vanish before leaving [0, N]
    bool assumption_escape_0 = true;    // net drift at x=0 is positive
    bool assumption_escape_N = true;    // net drift at x=N is negative
    bool balanced_structure = true;     // balanced reactions have a>0 and b>0
    double drift_at_0 = 0.0;
    double drift_at_N = 0.0;
    std::vector<std::string> issues;
};

ValidationReport validate(const ReactionNetwork& net, std::int64_t N);

}  // namespace bistab
