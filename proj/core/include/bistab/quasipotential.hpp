#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bistab/polynomial.hpp"
#include "bistab/reaction.hpp"
#include "bistab/splitting.hpp"

namespace bistab {

// Interior zeros of a double-well drift: stable, unstable, stable.
struct EquilibriumSet {
    double x1 = 0.0, x2 = 0.0, x3 = 0.0;
    double dphi_x1 = 0.0, dphi_x2 = 0.0, dphi_x3 = 0.0;
};

struct EquilibriaResult {
    std::optional<EquilibriumSet> wells;
    std::vector<double> roots;  // all interior roots found, ascending
    std::string message;        // empty on success
};

// Roots of the drift polynomial in (0, 1) by sign-bracket bisection plus
// Newton polish; classifies the double-well pattern via derivative signs.
EquilibriaResult find_equilibria(const Polynomial& phi);

// Monotone change of variable g with g'(y) = gamma_tilde * sigma(g(y)),
// g(0) = 1/2, tabulated over the y-range where g stays in
// [1e-6, 1 - 1e-6]; h is the inverse read off the same table.
class GTransform {
public:
    static GTransform build(std::function<double(double)> sigma_sq, double gamma_tilde,
                            double step = 1e-4);

    double g_at(double y) const;
    double h_at(double x) const;
    // Transformed drift alpha(y) = phi(g(y)) / (gamma_tilde * sigma(g(y))).
    double alpha_at(double y, const Polynomial& phi) const;

    double y_min() const { return y_min_; }
    double y_max() const { return y_min_ + step_ * static_cast<double>(g_.size() - 1); }
    double step() const { return step_; }
    double gamma_tilde() const { return gamma_tilde_; }

private:
    GTransform() = default;
    std::vector<double> g_;  // g on the uniform grid y_min + k*step
    double y_min_ = 0.0;
    double step_ = 0.0;
    double gamma_tilde_ = 1.0;
    std::function<double(double)> sigma_sq_;
};

// Diffusion barriers I = -int phi / (0.5 gamma_tilde^2 sigma_sq) over each
// well-to-saddle stretch, reported both directly and as transformed-potential
// depths with the additive constant fixed by A(y1) = 0.
struct DiffusionBarriers {
    double I12 = 0.0;  // barrier seen from the left well x1
    double I32 = 0.0;  // barrier seen from the right well x3
    double A_y1 = 0.0;
    double A_y2 = 0.0;
    double A_y3 = 0.0;
};

DiffusionBarriers barrier_diffusion(const Polynomial& phi,
                                    const std::function<double(double)>& sigma_sq,
                                    double gamma_tilde, const EquilibriumSet& eq);

// Predicted switch rate exp(-I_min / eps_sq) for the diffusion route.
double slow_switch_rate(const DiffusionBarriers& b, double eps_sq);

// Jump-process barriers: integrals of log(rate toward the well / rate away)
// between each well and the saddle.
struct JumpBarriers {
    double iota12 = 0.0;
    double iota32 = 0.0;
};

JumpBarriers barrier_jump(const std::function<double(double)>& r_plus,
                          const std::function<double(double)>& r_minus,
                          const EquilibriumSet& eq);

// Predicted switch rate exp(-N * iota_min) for the jump route.
double jump_switch_rate(const JumpBarriers& b, double N);

// Jump barriers never exceed diffusion barriers on a shared configuration;
// the pointwise bounds u - 1 >= log u >= 1 - 1/u on the log rate ratio give
// a two-sided sandwich evaluated by the same quadrature.
struct BarrierComparison {
    DiffusionBarriers diffusion;
    JumpBarriers jump;
    double lower12 = 0.0, upper12 = 0.0;
    double lower32 = 0.0, upper32 = 0.0;
    bool jump_le_diffusion = false;
    bool sandwich_ok = false;
};

BarrierComparison compare_barriers(const Polynomial& phi,
                                   const std::function<double(double)>& sigma_sq,
                                   double gamma_tilde,
                                   const std::function<double(double)>& r_plus,
                                   const std::function<double(double)>& r_minus,
                                   const EquilibriumSet& eq);

// Noise-to-drift ratio at capacity N: balanced-reaction noise plus the peak
// splitting diffusivity, over the biased-reaction drift scale.
double epsilon_A(const ReactionNetwork& net, const SplittingKernel& kernel,
                 const SplitRateSpec& rate, std::int64_t N);
double epsilon_A(const ReactionNetwork& net, std::int64_t N);  // no splitting

enum class Regime { Slow, Diffusive, Fast, Indeterminate };
const char* regime_name(Regime r);

struct RegimeReport {
    Regime label = Regime::Indeterminate;
    std::vector<std::int64_t> N_ladder;
    std::vector<double> eps_A;
    double eps_A_slope = 0.0;            // log-log slope across the ladder
    std::vector<double> corcond_slopes;  // filled only for fast candidates
    std::string switching_states;
    std::string time_scale;
    std::string rationale;
};

// Classify on a geometric ladder anchored at N: {N, 2N, 4N}.
RegimeReport classify_regime(const ReactionNetwork& net, const SplittingKernel& kernel,
                             const SplitRateSpec& rate, const std::vector<std::int64_t>& N_list);

}  // namespace bistab
