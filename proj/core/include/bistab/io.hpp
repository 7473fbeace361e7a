#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bistab/ssa.hpp"

namespace bistab {

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

inline constexpr int kSchemaVersion = 1;

// All floats are written with 17 significant digits.
std::string format_float(double v);

void write_text_file(const std::string& path, const std::string& content);
void make_dirs(const std::string& path);

// time,state
void write_trajectory_csv(const std::string& path, const Trajectory& traj);
// bin_left,bin_right,mass
void write_occupation_csv(const std::string& path, const OccupationHistogram& hist);
// index,kind,time,delta_since_last
void write_switches_csv(const std::string& path, const std::vector<SwitchEvent>& events);
// t,fraction
void write_quantiles_csv(const std::string& path,
                         const std::vector<std::pair<double, double>>& points);

}  // namespace bistab
