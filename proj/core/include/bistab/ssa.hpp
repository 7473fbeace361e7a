#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bistab/polynomial.hpp"
#include "bistab/reaction.hpp"
#include "bistab/rng.hpp"
#include "bistab/splitting.hpp"

namespace bistab {

// One completed switch: first entry into the opposite well neighbourhood
// (wells mode) or first arrival at the opposite boundary (boundary mode).
struct SwitchEvent {
    double time = 0.0;
    std::string kind;  // "enter_x1"/"enter_x3" or "reach_0"/"reach_N"
    int side = 0;      // 0 = left target (x1 or state 0), 1 = right target
};

enum class SwitchMode { None, Wells, Boundary };

struct SwitchOptions {
    SwitchMode mode = SwitchMode::None;
    double c = 0.1;  // well neighbourhood radius in rescaled units
    double x1 = 0.25;
    double x3 = 0.75;
};

// Streaming detector fed with (time, rescaled state); emits alternating
// events only after the path has visited the opposite target set.
class SwitchDetector {
public:
    explicit SwitchDetector(const SwitchOptions& opts) : opts_(opts) {}
    void feed(double t, double z);
    const std::vector<SwitchEvent>& events() const { return events_; }
    std::vector<SwitchEvent> take() { return std::move(events_); }

private:
    SwitchOptions opts_;
    int current_side_ = -1;
    std::vector<SwitchEvent> events_;
};

// Sample path summary. Integer jump paths always carry per-state dwell times;
// real-valued diffusion paths carry snapshots only (N = 0, dwell empty).
struct Trajectory {
    std::int64_t N = 0;
    double x0 = 0.0;
    double t_end = 0.0;
    bool frozen = false;  // total rate hit zero before t_max
    std::uint64_t event_count = 0;

    bool has_events = false;  // full log kept (times/states/tags aligned)
    std::vector<double> times;
    std::vector<double> states;
    std::vector<std::int32_t> tags;  // reaction index, R = splitting, -1 = start

    std::vector<double> snap_times;  // decimated piecewise-constant samples
    std::vector<double> snap_states;

    std::vector<double> dwell;  // time spent in each integer state
    std::vector<SwitchEvent> switches;
};

struct SimulateOptions {
    bool store_events = false;
    std::int64_t snapshots = 10000;  // 0 disables decimated storage
    SwitchOptions switches;
};

// Exact direct-method realization of the combined reaction + splitting jump
// process on {0..N}: exponential waiting time at the total rate, channel
// chosen in proportion, split target drawn from the kernel row.
Trajectory simulate(const ReactionNetwork& net, const SplittingKernel& kernel,
                    const SplitRateSpec& rate, std::int64_t N, std::int64_t x0, double t_max,
                    std::uint64_t seed, const SimulateOptions& opts = {});
Trajectory simulate(const ReactionNetwork& net, std::int64_t N, std::int64_t x0, double t_max,
                    std::uint64_t seed, const SimulateOptions& opts = {});

// Time-weighted histogram of the rescaled state over [0, 1]; masses sum to 1.
struct OccupationHistogram {
    std::int64_t bins = 0;
    std::vector<double> mass;
    double bin_left(std::int64_t k) const { return static_cast<double>(k) / bins; }
    double bin_right(std::int64_t k) const { return static_cast<double>(k + 1) / bins; }
    // total mass of bins overlapping [lo, hi] (overlap taken pro rata)
    double mass_in(double lo, double hi) const;
};

OccupationHistogram occupation_density(const Trajectory& traj, std::int64_t bins);

// Re-run switch detection over a stored event log.
std::vector<SwitchEvent> extract_switch_times(const Trajectory& traj,
                                              const SwitchOptions& opts);

// Empirical CDF sample points (t, fraction <= t), ascending.
std::vector<std::pair<double, double>> quantile_data(std::vector<double> times);

// Sup distance between the empirical law of the samples and
// exponential(rate).
double ks_distance_exponential(const std::vector<double>& samples, double rate);

// Euler-Maruyama path of dX = phi(X)dt + eps*sigma(X)dB clamped to [0, 1];
// comparison tool for the limiting dynamics, not part of the exact simulator.
Trajectory simulate_diffusion(const Polynomial& phi,
                              const std::function<double(double)>& sigma, double eps, double x0,
                              double t_max, double dt, std::uint64_t seed,
                              const SimulateOptions& opts = {});

}  // namespace bistab
