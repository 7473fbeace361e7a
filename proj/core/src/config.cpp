#include "bistab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace bistab {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string strip_comment(const std::string& line) {
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') in_str = !in_str;
        if (line[i] == '#' && !in_str) return line.substr(0, i);
    }
    return line;
}

std::string unquote(const std::string& v) {
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
        return v.substr(1, v.size() - 2);
    return v;
}

// raw key -> value text, in file order
std::map<std::string, std::string> read_pairs(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": unterminated [section]");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": empty key or value");
        if (!section.empty()) key = section + "." + key;
        if (kv.count(key))
            throw ConfigError("config: duplicate key '" + key + "'");
        kv[key] = val;
    }
    return kv;
}

double to_real(const std::string& key, const std::string& raw) {
    const std::string v = unquote(raw);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || end == v.c_str() || *end != '\0')
        throw ConfigError("config key '" + key + "': cannot parse number '" + v + "'");
    return x;
}

std::int64_t to_int(const std::string& key, const std::string& raw) {
    const double x = to_real(key, raw);
    const auto i = static_cast<std::int64_t>(x);
    if (static_cast<double>(i) != x)
        throw ConfigError("config key '" + key + "': expected an integer, got '" + raw + "'");
    return i;
}

bool to_bool(const std::string& key, const std::string& raw) {
    const std::string v = unquote(raw);
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("config key '" + key + "': expected true or false, got '" + v + "'");
}

std::vector<std::int64_t> to_int_list(const std::string& key, const std::string& raw) {
    std::string v = unquote(raw);
    if (v.size() < 2 || v.front() != '[' || v.back() != ']')
        throw ConfigError("config key '" + key + "': expected a [a, b, ...] list");
    v = v.substr(1, v.size() - 2);
    std::vector<std::int64_t> out;
    std::size_t at = 0;
    while (at < v.size()) {
        auto comma = v.find(',', at);
        if (comma == std::string::npos) comma = v.size();
        const std::string item = trim(v.substr(at, comma - at));
        if (!item.empty()) out.push_back(to_int(key, item));
        at = comma + 1;
    }
    if (out.empty())
        throw ConfigError("config key '" + key + "': list must not be empty");
    return out;
}

KernelKind to_kernel(const std::string& raw) {
    const std::string v = unquote(raw);
    if (v == "bern" || v == "bernoulli") return KernelKind::BernoulliStep;
    if (v == "hg" || v == "hypergeometric") return KernelKind::Hypergeometric;
    if (v == "bin" || v == "binomial") return KernelKind::Binomial;
    throw ConfigError("config key 'splitting.kind': unknown kernel '" + v +
                      "' (use none, bern, hg, or bin)");
}

const char* kernel_config_name(KernelKind k) {
    switch (k) {
        case KernelKind::Hypergeometric:
            return "hg";
        case KernelKind::Binomial:
            return "bin";
        case KernelKind::BernoulliStep:
            return "bern";
        case KernelKind::Custom:
            return "custom";
    }
    return "?";
}

std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& dir) {
    auto kv = read_pairs(text);
    ExperimentConfig cfg;
    cfg.config_dir = dir;

    auto take = [&](const char* key) -> std::optional<std::string> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    if (auto v = take("network")) cfg.network_path = unquote(*v);
    if (auto v = take("splitting.kind")) {
        const std::string kind = unquote(*v);
        if (kind != "none") {
            cfg.has_splitting = true;
            cfg.kernel = to_kernel(*v);
        }
    }
    if (auto v = take("splitting.gamma")) cfg.gamma_text = unquote(*v);
    if (auto v = take("splitting.epsilon_sq")) {
        const double e = to_real("splitting.epsilon_sq", *v);
        if (!(e > 0.0)) throw ConfigError("config key 'splitting.epsilon_sq' must be positive");
        cfg.epsilon_sq = e;
    }
    if (auto v = take("N")) cfg.N = to_int("N", *v);
    if (auto v = take("N_list")) cfg.N_ladder = to_int_list("N_list", *v);
    if (auto v = take("x0")) cfg.x0 = to_int("x0", *v);
    if (auto v = take("t_max")) cfg.t_max = to_real("t_max", *v);
    if (auto v = take("seed")) cfg.seed = static_cast<std::uint64_t>(to_int("seed", *v));
    if (auto v = take("replicates")) cfg.replicates = to_int("replicates", *v);
    if (auto v = take("out_dir")) cfg.out_dir = unquote(*v);
    if (auto v = take("bins")) cfg.bins = to_int("bins", *v);
    if (auto v = take("switch.mode")) cfg.switch_mode = unquote(*v);
    if (auto v = take("switch.c")) cfg.switch_c = to_real("switch.c", *v);
    if (auto v = take("switch.x1")) cfg.switch_x1 = to_real("switch.x1", *v);
    if (auto v = take("switch.x3")) cfg.switch_x3 = to_real("switch.x3", *v);
    if (auto v = take("snapshots")) cfg.snapshots = to_int("snapshots", *v);
    if (auto v = take("store_events")) cfg.store_events = to_bool("store_events", *v);
    if (auto v = take("dt")) cfg.dt = to_real("dt", *v);
    if (auto v = take("diffusion")) cfg.diffusion = to_bool("diffusion", *v);

    if (!kv.empty()) throw ConfigError("config: unknown key '" + kv.begin()->first + "'");

    if (cfg.switch_mode != "none" && cfg.switch_mode != "wells" &&
        cfg.switch_mode != "boundary")
        throw ConfigError("config key 'switch.mode': use none, wells, or boundary");
    if (cfg.N < 0) throw ConfigError("config key 'N' must be positive");
    if (cfg.replicates < 1) throw ConfigError("config key 'replicates' must be >= 1");
    if (cfg.bins < 1) throw ConfigError("config key 'bins' must be >= 1");
    if (cfg.snapshots < 0) throw ConfigError("config key 'snapshots' must be >= 0");
    if (!(cfg.dt > 0.0)) throw ConfigError("config key 'dt' must be positive");
    if (!cfg.N_ladder.empty() &&
        !std::is_sorted(cfg.N_ladder.begin(), cfg.N_ladder.end(),
                        [](auto a, auto b) { return a <= b; }))
        throw ConfigError("config key 'N_list' must be strictly increasing");
    // validate the gamma expression eagerly for a better error location
    GammaExpr::parse(cfg.gamma_text);
    return cfg;
}

ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    auto kv = read_pairs(buf.str());
    for (const auto& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("override '" + ov + "': expected key=value");
        const std::string key = trim(ov.substr(0, eq));
        const std::string val = trim(ov.substr(eq + 1));
        if (val.empty()) throw ConfigError("override '" + ov + "': empty value");
        kv[key] = val;
    }
    std::string merged;
    for (const auto& [k, v] : kv) merged += k + " = " + v + "\n";
    std::string dir = ".";
    if (const auto slash = path.find_last_of('/'); slash != std::string::npos)
        dir = path.substr(0, slash);
    return parse_config(merged, dir);
}

std::string ExperimentConfig::canonical() const {
    std::string s;
    s += "network = " + network_path + "\n";
    s += "splitting.kind = ";
    s += has_splitting ? kernel_config_name(kernel) : "none";
    s += "\n";
    s += "splitting.gamma = " + GammaExpr::parse(gamma_text).str() + "\n";
    if (epsilon_sq) s += "splitting.epsilon_sq = " + fmt_real(*epsilon_sq) + "\n";
    s += "N = " + std::to_string(N) + "\n";
    if (!N_ladder.empty()) {
        s += "N_list = [";
        for (std::size_t i = 0; i < N_ladder.size(); ++i) {
            if (i) s += ", ";
            s += std::to_string(N_ladder[i]);
        }
        s += "]\n";
    }
    if (x0) s += "x0 = " + std::to_string(*x0) + "\n";
    s += "t_max = " + fmt_real(t_max) + "\n";
    s += "seed = " + std::to_string(seed) + "\n";
    s += "replicates = " + std::to_string(replicates) + "\n";
    s += "bins = " + std::to_string(bins) + "\n";
    s += "switch.mode = " + switch_mode + "\n";
    s += "switch.c = " + fmt_real(switch_c) + "\n";
    s += "switch.x1 = " + fmt_real(switch_x1) + "\n";
    s += "switch.x3 = " + fmt_real(switch_x3) + "\n";
    s += "snapshots = " + std::to_string(snapshots) + "\n";
    s += std::string("store_events = ") + (store_events ? "true" : "false") + "\n";
    s += "dt = " + fmt_real(dt) + "\n";
    s += std::string("diffusion = ") + (diffusion ? "true" : "false") + "\n";
    return s;
}

std::string ExperimentConfig::hash() const {
    const std::string c = canonical();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : c) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace bistab
