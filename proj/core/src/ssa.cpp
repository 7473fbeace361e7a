#include "bistab/ssa.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bistab {

void SwitchDetector::feed(double t, double z) {
    int side = -1;
    switch (opts_.mode) {
        case SwitchMode::None:
            return;
        case SwitchMode::Wells:
            if (std::abs(z - opts_.x1) <= opts_.c)
                side = 0;
            else if (std::abs(z - opts_.x3) <= opts_.c)
                side = 1;
            break;
        case SwitchMode::Boundary:
            if (z == 0.0)
                side = 0;
            else if (z == 1.0)
                side = 1;
            break;
    }
    if (side < 0 || side == current_side_) return;
    if (current_side_ >= 0) {
        SwitchEvent ev;
        ev.time = t;
        ev.side = side;
        if (opts_.mode == SwitchMode::Wells)
            ev.kind = side == 0 ? "enter_x1" : "enter_x3";
        else
            ev.kind = side == 0 ? "reach_0" : "reach_N";
        events_.push_back(ev);
    }
    current_side_ = side;
}

namespace {

struct RateTable {
    // cumulative channel rates per state: channels 0..R-1 are reactions in
    // network order, channel R is splitting; entry (x, c) at x*(R+1)+c
    std::int64_t N = 0;
    std::size_t R = 0;
    std::vector<double> cum;
    std::vector<std::int32_t> zeta;

    double total(std::int64_t x) const { return cum[static_cast<std::size_t>(x) * (R + 1) + R]; }
    std::size_t pick(std::int64_t x, double u) const {
        const double* row = cum.data() + static_cast<std::size_t>(x) * (R + 1);
        for (std::size_t c = 0; c <= R; ++c)
            if (u <= row[c]) return c;
        return R;
    }
};

RateTable build_rate_table(const ReactionNetwork& net, const SplittingKernel* kernel,
                           const SplitRateSpec* rate, std::int64_t N) {
    RateTable tab;
    tab.N = N;
    tab.R = net.size();
    tab.cum.assign(static_cast<std::size_t>(N + 1) * (tab.R + 1), 0.0);
    for (const auto& r : net.reactions()) tab.zeta.push_back(r.zeta);
    for (std::int64_t x = 0; x <= N; ++x) {
        double acc = 0.0;
        double* row = tab.cum.data() + static_cast<std::size_t>(x) * (tab.R + 1);
        for (std::size_t c = 0; c < tab.R; ++c) {
            acc += propensity(net.reactions()[c], x, N);
            row[c] = acc;
        }
        if (kernel && x > 0 && x < N) acc += rate->rate(x, N);
        row[tab.R] = acc;
    }
    return tab;
}

Trajectory run_jump(const ReactionNetwork& net, const SplittingKernel* kernel,
                    const SplitRateSpec* rate, std::int64_t N, std::int64_t x0, double t_max,
                    std::uint64_t seed, const SimulateOptions& opts) {
    if (N < 1) throw std::invalid_argument("simulate: N must be positive");
    if (x0 < 0 || x0 > N) throw std::invalid_argument("simulate: x0 outside [0, N]");
    if (!(t_max > 0.0)) throw std::invalid_argument("simulate: t_max must be positive");
    const RateTable tab = build_rate_table(net, kernel, rate, N);
    Rng rng(seed);

    Trajectory traj;
    traj.N = N;
    traj.x0 = static_cast<double>(x0);
    traj.dwell.assign(N + 1, 0.0);
    traj.has_events = opts.store_events;

    SwitchDetector detector(opts.switches);
    const double Nd = static_cast<double>(N);

    const std::int64_t snaps = opts.snapshots;
    const double snap_dt = snaps > 0 ? t_max / static_cast<double>(snaps) : 0.0;
    std::int64_t snap_idx = 0;
    auto record_snaps_until = [&](double t_limit, std::int64_t x_cur) {
        if (snaps <= 0) return;
        while (snap_idx <= snaps && static_cast<double>(snap_idx) * snap_dt < t_limit) {
            traj.snap_times.push_back(static_cast<double>(snap_idx) * snap_dt);
            traj.snap_states.push_back(static_cast<double>(x_cur));
            ++snap_idx;
        }
    };
    auto flush_snaps_at_end = [&](std::int64_t x_cur) {
        if (snaps <= 0) return;
        while (snap_idx <= snaps) {
            traj.snap_times.push_back(
                std::min(static_cast<double>(snap_idx) * snap_dt, t_max));
            traj.snap_states.push_back(static_cast<double>(x_cur));
            ++snap_idx;
        }
    };

    double t = 0.0;
    std::int64_t x = x0;
    if (opts.store_events) {
        traj.times.push_back(0.0);
        traj.states.push_back(static_cast<double>(x));
        traj.tags.push_back(-1);
    }
    detector.feed(0.0, static_cast<double>(x) / Nd);

    while (true) {
        const double lam = tab.total(x);
        if (!(lam > 0.0)) {
            traj.frozen = true;
            traj.dwell[x] += t_max - t;
            break;
        }
        const double dt = rng.exponential(lam);
        if (t + dt >= t_max) {
            traj.dwell[x] += t_max - t;
            break;
        }
        record_snaps_until(t + dt, x);
        traj.dwell[x] += dt;
        t += dt;
        const std::size_t c = tab.pick(x, rng.uniform() * lam);
        if (c < tab.R) {
            x += tab.zeta[c];
        } else {
            x = kernel->sample(x, N, rng);
        }
        ++traj.event_count;
        if (opts.store_events) {
            traj.times.push_back(t);
            traj.states.push_back(static_cast<double>(x));
            traj.tags.push_back(static_cast<std::int32_t>(c));
        }
        detector.feed(t, static_cast<double>(x) / Nd);
    }
    traj.t_end = t_max;
    flush_snaps_at_end(x);
    traj.switches = detector.take();
    return traj;
}

}  // namespace

Trajectory simulate(const ReactionNetwork& net, const SplittingKernel& kernel,
                    const SplitRateSpec& rate, std::int64_t N, std::int64_t x0, double t_max,
                    std::uint64_t seed, const SimulateOptions& opts) {
    return run_jump(net, &kernel, &rate, N, x0, t_max, seed, opts);
}

Trajectory simulate(const ReactionNetwork& net, std::int64_t N, std::int64_t x0, double t_max,
                    std::uint64_t seed, const SimulateOptions& opts) {
    return run_jump(net, nullptr, nullptr, N, x0, t_max, seed, opts);
}

double OccupationHistogram::mass_in(double lo, double hi) const {
    double total = 0.0;
    for (std::int64_t k = 0; k < bins; ++k) {
        const double l = bin_left(k), r = bin_right(k);
        const double overlap = std::min(hi, r) - std::max(lo, l);
        if (overlap <= 0.0) continue;
        total += mass[k] * overlap / (r - l);
    }
    return total;
}

OccupationHistogram occupation_density(const Trajectory& traj, std::int64_t bins) {
    if (bins < 1) throw std::invalid_argument("occupation: bins must be positive");
    if (!(traj.t_end > 0.0)) throw std::invalid_argument("occupation: empty trajectory");
    OccupationHistogram h;
    h.bins = bins;
    h.mass.assign(bins, 0.0);
    auto bin_of = [&](double z) {
        auto k = static_cast<std::int64_t>(z * static_cast<double>(bins));
        return std::clamp<std::int64_t>(k, 0, bins - 1);
    };
    if (!traj.dwell.empty()) {
        const double Nd = static_cast<double>(traj.N);
        for (std::int64_t x = 0; x < static_cast<std::int64_t>(traj.dwell.size()); ++x)
            if (traj.dwell[x] > 0.0)
                h.mass[bin_of(static_cast<double>(x) / Nd)] += traj.dwell[x] / traj.t_end;
    } else if (!traj.snap_states.empty()) {
        const double w = 1.0 / static_cast<double>(traj.snap_states.size());
        for (double z : traj.snap_states) h.mass[bin_of(z)] += w;
    } else {
        throw std::invalid_argument("occupation: trajectory carries no dwell or snapshots");
    }
    return h;
}

std::vector<SwitchEvent> extract_switch_times(const Trajectory& traj,
                                              const SwitchOptions& opts) {
    if (!traj.has_events)
        throw std::invalid_argument("extract_switch_times: trajectory carries no event log");
    const double scale = traj.N > 0 ? static_cast<double>(traj.N) : 1.0;
    SwitchDetector detector(opts);
    for (std::size_t i = 0; i < traj.times.size(); ++i)
        detector.feed(traj.times[i], traj.states[i] / scale);
    return detector.take();
}

std::vector<std::pair<double, double>> quantile_data(std::vector<double> times) {
    if (times.empty()) return {};
    std::sort(times.begin(), times.end());
    std::vector<std::pair<double, double>> out;
    out.reserve(times.size());
    const double n = static_cast<double>(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        out.emplace_back(times[i], static_cast<double>(i + 1) / n);
    return out;
}

double ks_distance_exponential(const std::vector<double>& samples, double rate) {
    if (samples.empty()) throw std::invalid_argument("ks distance: empty sample");
    std::vector<double> s = samples;
    std::sort(s.begin(), s.end());
    const double n = static_cast<double>(s.size());
    double sup = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double F = 1.0 - std::exp(-rate * s[i]);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        sup = std::max(sup, std::max(std::abs(F - lo), std::abs(hi - F)));
    }
    return sup;
}

Trajectory simulate_diffusion(const Polynomial& phi,
                              const std::function<double(double)>& sigma, double eps, double x0,
                              double t_max, double dt, std::uint64_t seed,
                              const SimulateOptions& opts) {
    if (!(dt > 0.0)) throw std::invalid_argument("diffusion: dt must be positive");
    if (x0 < 0.0 || x0 > 1.0) throw std::invalid_argument("diffusion: x0 outside [0, 1]");
    if (!(t_max > 0.0)) throw std::invalid_argument("diffusion: t_max must be positive");
    Rng rng(seed);
    Trajectory traj;
    traj.N = 0;
    traj.x0 = x0;
    traj.t_end = t_max;
    SwitchDetector detector(opts.switches);

    const auto steps = static_cast<std::uint64_t>(std::ceil(t_max / dt));
    const std::int64_t snaps = opts.snapshots;
    const std::uint64_t stride =
        snaps > 0 ? std::max<std::uint64_t>(1, steps / static_cast<std::uint64_t>(snaps)) : 0;

    double x = x0;
    detector.feed(0.0, x);
    if (stride > 0) {
        traj.snap_times.push_back(0.0);
        traj.snap_states.push_back(x);
    }
    for (std::uint64_t k = 0; k < steps; ++k) {
        const double t = std::min(static_cast<double>(k + 1) * dt, t_max);
        const double h = t - static_cast<double>(k) * dt;
        x += phi(x) * h + eps * sigma(x) * std::sqrt(h) * rng.normal();
        x = std::clamp(x, 0.0, 1.0);
        detector.feed(t, x);
        if (stride > 0 && ((k + 1) % stride == 0 || k + 1 == steps)) {
            traj.snap_times.push_back(t);
            traj.snap_states.push_back(x);
        }
    }
    traj.event_count = steps;
    traj.switches = detector.take();
    return traj;
}

}  // namespace bistab
