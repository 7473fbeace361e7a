#include "bistab/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

namespace bistab {

std::string format_float(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void make_dirs(const std::string& path) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw IoError("cannot create directory '" + path + "': " + ec.message());
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for '" + path + "'");
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::string s = "time,state\n";
    const auto& ts = traj.snap_times.empty() && traj.has_events ? traj.times : traj.snap_times;
    const auto& xs =
        traj.snap_times.empty() && traj.has_events ? traj.states : traj.snap_states;
    for (std::size_t i = 0; i < ts.size(); ++i)
        s += format_float(ts[i]) + "," + format_float(xs[i]) + "\n";
    write_text_file(path, s);
}

void write_occupation_csv(const std::string& path, const OccupationHistogram& hist) {
    std::string s = "bin_left,bin_right,mass\n";
    for (std::int64_t k = 0; k < hist.bins; ++k)
        s += format_float(hist.bin_left(k)) + "," + format_float(hist.bin_right(k)) + "," +
             format_float(hist.mass[k]) + "\n";
    write_text_file(path, s);
}

void write_switches_csv(const std::string& path, const std::vector<SwitchEvent>& events) {
    std::string s = "index,kind,time,delta_since_last\n";
    double prev = 0.0;
    for (std::size_t i = 0; i < events.size(); ++i) {
        s += std::to_string(i) + "," + events[i].kind + "," + format_float(events[i].time) +
             "," + format_float(events[i].time - prev) + "\n";
        prev = events[i].time;
    }
    write_text_file(path, s);
}

void write_quantiles_csv(const std::string& path,
                         const std::vector<std::pair<double, double>>& points) {
    std::string s = "t,fraction\n";
    for (const auto& [t, f] : points) s += format_float(t) + "," + format_float(f) + "\n";
    write_text_file(path, s);
}

}  // namespace bistab
