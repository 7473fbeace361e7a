#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bistab/rational.hpp"
#include "bistab/rng.hpp"

namespace bistab {

enum class KernelKind { Hypergeometric, Binomial, BernoulliStep, Custom };

// Unbiased, boundary-absorbing splitting/resampling kernel: on a split the
// state jumps from x to y ~ p_{x,.}, with E[y] = x and p_{0,0} = p_{N,N} = 1.
class SplittingKernel {
public:
    static SplittingKernel hypergeometric() { return SplittingKernel(KernelKind::Hypergeometric); }
    static SplittingKernel binomial() { return SplittingKernel(KernelKind::Binomial); }
    static SplittingKernel bernoulli_step() { return SplittingKernel(KernelKind::BernoulliStep); }
    // rows[x][y] for x,y in [0,N]; validated for row sums, unbiasedness and
    // absorbing boundaries at construction.
    static SplittingKernel custom(std::vector<std::vector<double>> rows);

    KernelKind kind() const { return kind_; }
    std::int64_t custom_size() const;  // N for Custom kernels

    std::vector<double> pmf(std::int64_t x, std::int64_t N) const;
    double mean(std::int64_t x, std::int64_t N) const;
    double variance(std::int64_t x, std::int64_t N) const;
    std::int64_t sample(std::int64_t x, std::int64_t N, Rng& rng) const;

    // True when every row moves by at most one step (BernoulliStep, or a
    // Custom kernel with support {x-1, x, x+1}); needed by birth-death builds.
    bool unit_step() const;
    // p_{x,x+1} and p_{x,x-1} for unit-step kernels.
    double up_prob(std::int64_t x, std::int64_t N) const;
    double down_prob(std::int64_t x, std::int64_t N) const;

private:
    explicit SplittingKernel(KernelKind k) : kind_(k) {}
    KernelKind kind_;
    std::vector<std::vector<double>> rows_;
};

// The limiting noise profile sigma_tilde^2(z) = z(1-z)/2 shared by the three
// built-in kernels, together with the rate normalization that produces
// state-diffusivity gamma_tilde^2 sigma_tilde^2(z): gamma(x,N) = gt2*N for HG,
// gt2*N/2 for Bin, and (gt2/2)*N^2*z(1-z) for BernoulliStep.
struct VarianceProfile {
    std::function<double(double)> sigma_sq;  // z -> limiting variance profile
    std::string rate_description;
    std::function<double(double, double)> rate;  // (gamma_tilde_sq, N) -> gamma(N) factor
    bool shape_is_well;  // rate carries an extra z(1-z) state factor
};

VarianceProfile limiting_variance_profile(const SplittingKernel& kernel);

// State-independent factor gamma(N) given as c, c*N, c*N^2, c*N^2*log(N) or
// c*N^3 (c a positive rational or decimal).
class GammaExpr {
public:
    static GammaExpr parse(const std::string& text);
    static GammaExpr make(double c, int power, bool log_factor);

    double operator()(double N) const;
    double coeff() const { return c_; }
    int power() const { return power_; }
    bool log_factor() const { return log_; }
    std::string str() const;

private:
    double c_ = 1.0;
    std::optional<Rat64> c_exact_;
    int power_ = 0;
    bool log_ = false;
};

enum class ShapeKind { Constant, Well };  // Well: z(1-z)

// Splitting rate gamma(x, N) = [epsilon_sq] * gamma_N(N) * shape(x/N).
struct SplitRateSpec {
    GammaExpr gamma_N;
    ShapeKind shape = ShapeKind::Constant;
    std::optional<double> epsilon_sq;

    static SplitRateSpec for_kernel(KernelKind kind, GammaExpr gamma,
                                    std::optional<double> eps_sq = std::nullopt);

    double shape_at(double z) const { return shape == ShapeKind::Well ? z * (1.0 - z) : 1.0; }
    double state_factor(double N) const {
        return (epsilon_sq ? *epsilon_sq : 1.0) * gamma_N(N);
    }
    double rate(std::int64_t x, std::int64_t N) const {
        const double z = static_cast<double>(x) / static_cast<double>(N);
        return state_factor(static_cast<double>(N)) * shape_at(z);
    }
};

struct NoSplitting {};  // tag for configurations without a splitting mechanism

}  // namespace bistab
