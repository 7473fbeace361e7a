#include "bistab/splitting.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

namespace bistab {

namespace {

double lchoose(double n, double k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

// Hypergeometric row for a split of 2x marked among 2N items into halves:
// p_{x,y} = C(2x,y) C(2N-2x,N-y) / C(2N,N), support 0 v (2x-N) <= y <= 2x ^ N.
void hg_support(std::int64_t x, std::int64_t N, std::int64_t& lo, std::int64_t& hi) {
    lo = std::max<std::int64_t>(0, 2 * x - N);
    hi = std::min<std::int64_t>(2 * x, N);
}

double hg_log_pmf(std::int64_t x, std::int64_t N, std::int64_t y) {
    return lchoose(2.0 * x, static_cast<double>(y)) +
           lchoose(2.0 * (N - x), static_cast<double>(N - y)) -
           lchoose(2.0 * N, static_cast<double>(N));
}

// p(y+1)/p(y) along the hypergeometric row.
double hg_ratio(std::int64_t x, std::int64_t N, std::int64_t y) {
    return (static_cast<double>(2 * x - y) * static_cast<double>(N - y)) /
           (static_cast<double>(y + 1) * static_cast<double>(N - 2 * x + y + 1));
}

double bin_log_pmf(std::int64_t x, std::int64_t N, std::int64_t y) {
    const double q = static_cast<double>(x) / static_cast<double>(N);
    return lchoose(static_cast<double>(N), static_cast<double>(y)) +
           y * std::log(q) + (N - y) * std::log1p(-q);
}

double bin_ratio(std::int64_t x, std::int64_t N, std::int64_t y) {
    const double q = static_cast<double>(x) / static_cast<double>(N);
    return (static_cast<double>(N - y) / static_cast<double>(y + 1)) * (q / (1.0 - q));
}

// Exact inverse-CDF draw enumerated outward from the mode, using the pmf
// recurrence ratios. Enumerating from the mode keeps every multiplier on a
// representable scale; a plain left-to-right scan underflows to zero for
// N in the thousands and can never recover.
template <class LogPmf, class Ratio>
std::int64_t mode_walk_sample(std::int64_t lo, std::int64_t hi, std::int64_t mode,
                              LogPmf&& log_pmf, Ratio&& ratio, Rng& rng) {
    mode = std::clamp(mode, lo, hi);
    const double u = rng.uniform();
    double p_right = std::exp(log_pmf(mode));
    double p_left = p_right;
    double acc = p_right;
    std::int64_t right = mode, left = mode;
    std::int64_t last = mode;
    while (acc < u && (right < hi || left > lo)) {
        if (right < hi) {
            p_right *= ratio(right);
            ++right;
            acc += p_right;
            last = right;
            if (acc >= u) return right;
        }
        if (left > lo) {
            --left;
            p_left /= ratio(left);
            acc += p_left;
            last = left;
        }
    }
    if (acc >= u) return last;
    return mode;  // accumulated mass fell short of u by rounding only
}

}  // namespace

SplittingKernel SplittingKernel::custom(std::vector<std::vector<double>> rows) {
    SplittingKernel k(KernelKind::Custom);
    const std::int64_t N = static_cast<std::int64_t>(rows.size()) - 1;
    if (N < 1) throw std::invalid_argument("custom kernel: need rows for x = 0..N, N >= 1");
    for (std::int64_t x = 0; x <= N; ++x) {
        const auto& row = rows[x];
        if (static_cast<std::int64_t>(row.size()) != N + 1)
            throw std::invalid_argument("custom kernel: row length must be N+1");
        double sum = 0.0, mean = 0.0;
        for (std::int64_t y = 0; y <= N; ++y) {
            if (row[y] < 0.0) throw std::invalid_argument("custom kernel: negative probability");
            sum += row[y];
            mean += row[y] * static_cast<double>(y);
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("custom kernel: row does not sum to 1");
        if (std::abs(mean - static_cast<double>(x)) > 1e-12 * static_cast<double>(N))
            throw std::invalid_argument("custom kernel: row is biased (mean != x)");
    }
    if (std::abs(rows[0][0] - 1.0) > 1e-12 || std::abs(rows[N][N] - 1.0) > 1e-12)
        throw std::invalid_argument("custom kernel: boundaries must be absorbing");
    k.rows_ = std::move(rows);
    return k;
}

std::int64_t SplittingKernel::custom_size() const {
    if (kind_ != KernelKind::Custom)
        throw std::logic_error("custom_size: not a custom kernel");
    return static_cast<std::int64_t>(rows_.size()) - 1;
}

std::vector<double> SplittingKernel::pmf(std::int64_t x, std::int64_t N) const {
    if (x < 0 || x > N) throw std::invalid_argument("pmf: x outside [0, N]");
    std::vector<double> p(static_cast<std::size_t>(N) + 1, 0.0);
    switch (kind_) {
        case KernelKind::Hypergeometric: {
            if (x == 0 || x == N) {
                p[x] = 1.0;
                break;
            }
            std::int64_t lo, hi;
            hg_support(x, N, lo, hi);
            for (std::int64_t y = lo; y <= hi; ++y) p[y] = std::exp(hg_log_pmf(x, N, y));
            break;
        }
        case KernelKind::Binomial: {
            if (x == 0 || x == N) {
                p[x] = 1.0;
                break;
            }
            for (std::int64_t y = 0; y <= N; ++y) p[y] = std::exp(bin_log_pmf(x, N, y));
            break;
        }
        case KernelKind::BernoulliStep: {
            if (x == 0 || x == N)
                p[x] = 1.0;
            else {
                p[x - 1] = 0.5;
                p[x + 1] = 0.5;
            }
            break;
        }
        case KernelKind::Custom: {
            if (N != custom_size())
                throw std::invalid_argument("pmf: custom kernel defined for a different N");
            p = rows_[x];
            break;
        }
    }
    return p;
}

double SplittingKernel::mean(std::int64_t x, std::int64_t N) const {
    if (kind_ != KernelKind::Custom) return static_cast<double>(x);
    const auto& row = rows_.at(x);
    double m = 0.0;
    for (std::int64_t y = 0; y <= N; ++y) m += row[y] * static_cast<double>(y);
    return m;
}

double SplittingKernel::variance(std::int64_t x, std::int64_t N) const {
    if (x < 0 || x > N) throw std::invalid_argument("variance: x outside [0, N]");
    const double xd = static_cast<double>(x), Nd = static_cast<double>(N);
    switch (kind_) {
        case KernelKind::Hypergeometric:
            return xd * (Nd - xd) / (2.0 * Nd - 1.0);
        case KernelKind::Binomial:
            return xd * (Nd - xd) / Nd;
        case KernelKind::BernoulliStep:
            return (x == 0 || x == N) ? 0.0 : 1.0;
        case KernelKind::Custom: {
            const auto& row = rows_.at(x);
            double v = 0.0;
            for (std::int64_t y = 0; y <= N; ++y) {
                const double d = static_cast<double>(y) - xd;
                v += row[y] * d * d;
            }
            return v;
        }
    }
    return 0.0;
}

std::int64_t SplittingKernel::sample(std::int64_t x, std::int64_t N, Rng& rng) const {
    if (x < 0 || x > N) throw std::invalid_argument("sample: x outside [0, N]");
    if (x == 0 || x == N) {
        if (kind_ == KernelKind::Custom) {
            // custom boundary rows are validated absorbing
            return x;
        }
        return x;
    }
    switch (kind_) {
        case KernelKind::Hypergeometric: {
            std::int64_t lo, hi;
            hg_support(x, N, lo, hi);
            // mode of the hypergeometric row: floor((2x+1)(N+1)/(2N+2))
            const std::int64_t mode = (2 * x + 1) * (N + 1) / (2 * N + 2);
            return mode_walk_sample(
                lo, hi, mode, [&](std::int64_t y) { return hg_log_pmf(x, N, y); },
                [&](std::int64_t y) { return hg_ratio(x, N, y); }, rng);
        }
        case KernelKind::Binomial: {
            const double q = static_cast<double>(x) / static_cast<double>(N);
            const std::int64_t mode =
                std::min<std::int64_t>(N, static_cast<std::int64_t>((N + 1) * q));
            return mode_walk_sample(
                0, N, mode, [&](std::int64_t y) { return bin_log_pmf(x, N, y); },
                [&](std::int64_t y) { return bin_ratio(x, N, y); }, rng);
        }
        case KernelKind::BernoulliStep:
            return rng.coin() ? x + 1 : x - 1;
        case KernelKind::Custom: {
            if (N != custom_size())
                throw std::invalid_argument("sample: custom kernel defined for a different N");
            const auto& row = rows_[x];
            const double u = rng.uniform();
            double acc = 0.0;
            for (std::int64_t y = 0; y <= N; ++y) {
                acc += row[y];
                if (acc >= u) return y;
            }
            return N;
        }
    }
    return x;
}

bool SplittingKernel::unit_step() const {
    switch (kind_) {
        case KernelKind::BernoulliStep:
            return true;
        case KernelKind::Custom: {
            const std::int64_t N = custom_size();
            for (std::int64_t x = 0; x <= N; ++x)
                for (std::int64_t y = 0; y <= N; ++y)
                    if (rows_[x][y] != 0.0 && (y < x - 1 || y > x + 1)) return false;
            return true;
        }
        default:
            return false;
    }
}

double SplittingKernel::up_prob(std::int64_t x, std::int64_t N) const {
    if (x <= 0 || x >= N) return 0.0;
    if (kind_ == KernelKind::BernoulliStep) return 0.5;
    if (kind_ == KernelKind::Custom) return rows_.at(x)[x + 1];
    throw std::logic_error("up_prob: kernel is not unit-step");
}

double SplittingKernel::down_prob(std::int64_t x, std::int64_t N) const {
    if (x <= 0 || x >= N) return 0.0;
    if (kind_ == KernelKind::BernoulliStep) return 0.5;
    if (kind_ == KernelKind::Custom) return rows_.at(x)[x - 1];
    throw std::logic_error("down_prob: kernel is not unit-step");
}

VarianceProfile limiting_variance_profile(const SplittingKernel& kernel) {
    VarianceProfile p;
    p.sigma_sq = [](double z) { return 0.5 * z * (1.0 - z); };
    switch (kernel.kind()) {
        case KernelKind::Hypergeometric:
            p.rate_description = "gamma(x,N) = gt2 * N";
            p.rate = [](double gt2, double N) { return gt2 * N; };
            p.shape_is_well = false;
            break;
        case KernelKind::Binomial:
            p.rate_description = "gamma(x,N) = gt2 * N / 2";
            p.rate = [](double gt2, double N) { return 0.5 * gt2 * N; };
            p.shape_is_well = false;
            break;
        case KernelKind::BernoulliStep:
            p.rate_description = "gamma(x,N) = (gt2 / 2) * N^2 * (x/N)(1 - x/N)";
            p.rate = [](double gt2, double N) { return 0.5 * gt2 * N * N; };
            p.shape_is_well = true;
            break;
        case KernelKind::Custom:
            throw std::invalid_argument(
                "limiting_variance_profile: custom kernels carry no built-in limit profile");
    }
    return p;
}

GammaExpr GammaExpr::make(double c, int power, bool log_factor) {
    if (!(c > 0.0)) throw std::invalid_argument("gamma_N: coefficient must be positive");
    if (power < 0 || power > 3) throw std::invalid_argument("gamma_N: power must be in 0..3");
    GammaExpr e;
    e.c_ = c;
    e.power_ = power;
    e.log_ = log_factor;
    return e;
}

GammaExpr GammaExpr::parse(const std::string& text) {
    GammaExpr e;
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : text) {
        if (ch == '*') {
            tokens.push_back(cur);
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            cur.push_back(ch);
        }
    }
    tokens.push_back(cur);

    bool have_coeff = false;
    for (const auto& tok : tokens) {
        if (tok.empty()) throw std::invalid_argument("gamma_N: empty factor in '" + text + "'");
        if (tok == "N") {
            e.power_ += 1;
        } else if (tok == "N^2") {
            e.power_ += 2;
        } else if (tok == "N^3") {
            e.power_ += 3;
        } else if (tok == "log(N)") {
            if (e.log_) throw std::invalid_argument("gamma_N: repeated log(N)");
            e.log_ = true;
        } else {
            if (have_coeff)
                throw std::invalid_argument("gamma_N: unrecognized factor '" + tok + "'");
            auto r = Rat64::parse(tok);
            if (r) {
                e.c_exact_ = r;
                e.c_ = r->value();
            } else {
                char* end = nullptr;
                e.c_ = std::strtod(tok.c_str(), &end);
                if (end == tok.c_str() || *end != '\0')
                    throw std::invalid_argument("gamma_N: unrecognized factor '" + tok + "'");
            }
            have_coeff = true;
        }
    }
    if (!(e.c_ > 0.0)) throw std::invalid_argument("gamma_N: coefficient must be positive");
    if (e.power_ > 3) throw std::invalid_argument("gamma_N: power above N^3 not supported");
    return e;
}

double GammaExpr::operator()(double N) const {
    double v = c_;
    for (int k = 0; k < power_; ++k) v *= N;
    if (log_) v *= std::log(N);
    return v;
}

std::string GammaExpr::str() const {
    std::string s;
    if (c_exact_)
        s = c_exact_->str();
    else {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", c_);
        s = buf;
    }
    if (power_ == 1) s += "*N";
    if (power_ == 2) s += "*N^2";
    if (power_ == 3) s += "*N^3";
    if (log_) s += "*log(N)";
    return s;
}

SplitRateSpec SplitRateSpec::for_kernel(KernelKind kind, GammaExpr gamma,
                                        std::optional<double> eps_sq) {
    SplitRateSpec spec;
    spec.gamma_N = gamma;
    spec.shape = (kind == KernelKind::BernoulliStep) ? ShapeKind::Well : ShapeKind::Constant;
    spec.epsilon_sq = eps_sq;
    return spec;
}

}  // namespace bistab
