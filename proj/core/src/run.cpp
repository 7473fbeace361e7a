#include "bistab/run.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "bistab/bd.hpp"
#include "bistab/dsl.hpp"
#include "bistab/io.hpp"
#include "bistab/quasipotential.hpp"
#include "bistab/reaction.hpp"
#include "bistab/rng.hpp"
#include "bistab/ssa.hpp"

namespace bistab {
namespace {

using ordered_json = nlohmann::ordered_json;

// Shared exception-to-exit-code mapping. Most-derived classes first:
// ParseError/ConfigError/IoError extend runtime_error, invalid_argument and
// domain_error extend logic_error.
int guarded(const char* cmd, const std::function<int()>& body) {
    try {
        return body();
    } catch (const IoError& e) {
        std::fprintf(stderr, "%s: i/o error: %s\n", cmd, e.what());
        return 4;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "%s: network parse error: %s\n", cmd, e.what());
        return 2;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "%s: %s\n", cmd, e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "%s: %s\n", cmd, e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "%s: %s\n", cmd, e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s: %s\n", cmd, e.what());
        return 3;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failed on '" + path + "'");
    return buf.str();
}

std::string resolve_path(const ExperimentConfig& cfg, const std::string& p) {
    if (p.empty() || p.front() == '/' || cfg.config_dir.empty()) return p;
    return cfg.config_dir + "/" + p;
}

ParsedNetwork load_network(const ExperimentConfig& cfg) {
    std::string text = cfg.network_text;
    if (text.empty()) {
        if (cfg.network_path.empty()) throw ConfigError("no reaction network (set 'network')");
        text = read_file(resolve_path(cfg, cfg.network_path));
    }
    ParsedNetwork parsed = parse_network(text);
    for (const auto& w : parsed.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    return parsed;
}

SplittingKernel kernel_from(const ExperimentConfig& cfg) {
    switch (cfg.kernel) {
        case KernelKind::Hypergeometric:
            return SplittingKernel::hypergeometric();
        case KernelKind::Binomial:
            return SplittingKernel::binomial();
        case KernelKind::BernoulliStep:
            return SplittingKernel::bernoulli_step();
        case KernelKind::Custom:
            break;
    }
    throw ConfigError("custom kernels are construction-only; configs accept hg, bin, bern");
}

SplitRateSpec rate_from(const ExperimentConfig& cfg) {
    return SplitRateSpec::for_kernel(cfg.kernel, GammaExpr::parse(cfg.gamma_text),
                                     cfg.epsilon_sq);
}

SwitchOptions switch_options(const ExperimentConfig& cfg) {
    SwitchOptions sw;
    if (cfg.switch_mode == "wells")
        sw.mode = SwitchMode::Wells;
    else if (cfg.switch_mode == "boundary")
        sw.mode = SwitchMode::Boundary;
    else
        sw.mode = SwitchMode::None;
    sw.c = cfg.switch_c;
    sw.x1 = cfg.switch_x1;
    sw.x3 = cfg.switch_x3;
    return sw;
}

// gamma_tilde^2 implied by the configured rate when it sits exactly on the
// diffusive normalization of its kernel (HG: c*N -> c; Bin: c*N -> 2c;
// Bern: c*N^2 -> 2c). Anything else gets no inference.
std::optional<double> infer_gamma_tilde_sq(KernelKind kind, const GammaExpr& g) {
    if (g.log_factor()) return std::nullopt;
    switch (kind) {
        case KernelKind::Hypergeometric:
            if (g.power() == 1) return g.coeff();
            break;
        case KernelKind::Binomial:
            if (g.power() == 1) return 2.0 * g.coeff();
            break;
        case KernelKind::BernoulliStep:
            if (g.power() == 2) return 2.0 * g.coeff();
            break;
        case KernelKind::Custom:
            break;
    }
    return std::nullopt;
}

// Limiting per-capita escape rates off the boundaries: reactions that fire
// at x = 0 (a = 0, up) and at x = N (b = 0, down).
std::pair<double, double> boundary_escape_rates(const ReactionNetwork& net) {
    double r01 = 0.0, r10 = 0.0;
    for (const auto& r : net.reactions()) {
        if (r.a == 0 && r.zeta == 1) r01 += r.kappa;
        if (r.b == 0 && r.zeta == -1) r10 += r.kappa;
    }
    return {r01, r10};
}

std::vector<double> switch_deltas(const std::vector<SwitchEvent>& events) {
    std::vector<double> deltas;
    for (std::size_t i = 1; i < events.size(); ++i)
        deltas.push_back(events[i].time - events[i - 1].time);
    return deltas;
}

void write_json_file(const std::string& path, const ordered_json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

double wall_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int run_simulate(const ExperimentConfig& cfg) {
    return guarded("simulate", [&]() -> int {
        const auto t0 = std::chrono::steady_clock::now();
        if (cfg.N < 1) throw ConfigError("simulate: N must be >= 1");
        if (!(cfg.t_max > 0.0)) throw ConfigError("simulate: t_max must be positive");
        const std::int64_t x0 = cfg.x0 ? *cfg.x0 : cfg.N / 2;
        if (x0 < 0 || x0 > cfg.N) throw ConfigError("simulate: x0 must lie in [0, N]");
        if (cfg.diffusion && !cfg.epsilon_sq)
            throw ConfigError("simulate: diffusion mode needs splitting.epsilon_sq");
        if (cfg.diffusion && cfg.snapshots < 1)
            throw ConfigError("simulate: diffusion mode needs snapshots >= 1");

        const ParsedNetwork parsed = load_network(cfg);
        const ReactionNetwork& net = parsed.net;
        const ValidationReport vr = validate(net, cfg.N);
        if (!vr.ok) {
            for (const auto& s : vr.issues)
                std::fprintf(stderr, "simulate: invalid network: %s\n", s.c_str());
            return 2;
        }

        SimulateOptions opts;
        opts.store_events = cfg.store_events;
        opts.snapshots = cfg.snapshots;
        opts.switches = switch_options(cfg);

        std::optional<SplittingKernel> kernel;
        SplitRateSpec rate;
        if (cfg.has_splitting) {
            kernel = kernel_from(cfg);
            rate = rate_from(cfg);
        }

        Polynomial phi;
        std::function<double(double)> sigma;
        double eps = 0.0;
        if (cfg.diffusion) {
            phi = limiting_drift(net);
            double gt2 = 1.0;
            if (cfg.has_splitting) {
                if (auto v = infer_gamma_tilde_sq(cfg.kernel, GammaExpr::parse(cfg.gamma_text)))
                    gt2 = *v;
                else
                    std::fprintf(stderr,
                                 "simulate: rate is not on the diffusive normalization; "
                                 "using gamma_tilde = 1\n");
            }
            sigma = [gt2](double z) { return std::sqrt(gt2 * 0.5 * z * (1.0 - z)); };
            eps = std::sqrt(*cfg.epsilon_sq);
        }

        const std::int64_t R = cfg.replicates;
        std::vector<Trajectory> trajs(static_cast<std::size_t>(R));
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(R));
        std::atomic<std::int64_t> next{0};
        auto worker = [&]() {
            for (;;) {
                const std::int64_t k = next.fetch_add(1);
                if (k >= R) break;
                try {
                    const std::uint64_t seed_k = replicate_seed(cfg.seed, static_cast<std::uint64_t>(k));
                    if (cfg.diffusion) {
                        const double z0 =
                            static_cast<double>(x0) / static_cast<double>(cfg.N);
                        trajs[static_cast<std::size_t>(k)] = simulate_diffusion(
                            phi, sigma, eps, z0, cfg.t_max, cfg.dt, seed_k, opts);
                    } else if (kernel) {
                        trajs[static_cast<std::size_t>(k)] =
                            simulate(net, *kernel, rate, cfg.N, x0, cfg.t_max, seed_k, opts);
                    } else {
                        trajs[static_cast<std::size_t>(k)] =
                            simulate(net, cfg.N, x0, cfg.t_max, seed_k, opts);
                    }
                } catch (...) {
                    errors[static_cast<std::size_t>(k)] = std::current_exception();
                }
            }
        };
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        const unsigned workers = static_cast<unsigned>(
            std::min<std::int64_t>(R, static_cast<std::int64_t>(std::min(hw, 16u))));
        if (workers <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
            for (auto& t : pool) t.join();
        }
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);

        make_dirs(cfg.out_dir);
        std::vector<std::string> outputs;
        std::uint64_t total_events = 0;
        bool any_frozen = false;
        ordered_json switch_counts = ordered_json::array();
        for (std::int64_t k = 0; k < R; ++k) {
            const Trajectory& tr = trajs[static_cast<std::size_t>(k)];
            total_events += tr.event_count;
            any_frozen = any_frozen || tr.frozen;
            switch_counts.push_back(tr.switches.size());
            const std::string suf = R == 1 ? "" : "_rep" + std::to_string(k);
            const auto emit = [&](const std::string& name) {
                outputs.push_back(name);
                return cfg.out_dir + "/" + name;
            };
            write_trajectory_csv(emit("trajectory" + suf + ".csv"), tr);
            write_occupation_csv(emit("occupation" + suf + ".csv"),
                                 occupation_density(tr, cfg.bins));
            write_switches_csv(emit("switches" + suf + ".csv"), tr.switches);
            write_quantiles_csv(emit("quantiles" + suf + ".csv"),
                                quantile_data(switch_deltas(tr.switches)));
        }

        ordered_json manifest;
        manifest["schema_version"] = kSchemaVersion;
        manifest["command"] = "simulate";
        manifest["config_hash"] = cfg.hash();
        manifest["seed"] = cfg.seed;
        manifest["replicates"] = R;
        manifest["N"] = cfg.N;
        manifest["x0"] = x0;
        manifest["t_max"] = cfg.t_max;
        manifest["diffusion"] = cfg.diffusion;
        manifest["event_count"] = total_events;
        manifest["frozen"] = any_frozen;
        manifest["switch_counts"] = switch_counts;
        manifest["wall_time_s"] = wall_seconds(t0);
        manifest["outputs"] = outputs;
        write_json_file(cfg.out_dir + "/manifest.json", manifest);

        if (any_frozen) {
            std::fprintf(stderr,
                         "simulate: trajectory frozen (total jump rate hit zero) before "
                         "t_max; outputs were still written\n");
            return 3;
        }
        return 0;
    });
}

int run_analyze(const ExperimentConfig& cfg) {
    return guarded("analyze", [&]() -> int {
        std::vector<std::int64_t> ladder = cfg.N_ladder;
        if (ladder.empty() && cfg.N >= 1) ladder.push_back(cfg.N);
        if (ladder.empty()) throw ConfigError("analyze: set N or N_list");
        for (std::int64_t n : ladder)
            if (n < 2) throw ConfigError("analyze: every N must be >= 2");
        if (ladder.back() > 5000000) throw ConfigError("analyze: N above 5e6 not supported");

        const ParsedNetwork parsed = load_network(cfg);
        const ReactionNetwork& net = parsed.net;
        if (!net.unit_step())
            throw ConfigError(
                "analyze: birth-death analysis needs unit-increment reactions only");

        std::optional<SplittingKernel> kernel;
        SplitRateSpec rate;
        if (cfg.has_splitting) {
            kernel = kernel_from(cfg);
            if (!kernel->unit_step())
                throw ConfigError(
                    "analyze: a multi-step kernel has no birth-death representation; "
                    "use splitting.kind = bern");
            rate = rate_from(cfg);
        }

        // Per-N chain statistics from the stable log-space solver, checked
        // against nothing here (tests carry the dense-solve oracle).
        struct Entry {
            std::int64_t N;
            double pi_1N, e_1, e_max, sum_abs_eps;
            std::vector<double> pi, e;
        };
        std::vector<Entry> entries;
        for (std::int64_t n : ladder) {
            BirthDeathModel m = kernel ? build_birth_death(net, *kernel, rate, n)
                                       : build_reactions_only(net, n);
            Entry ent;
            ent.N = n;
            ent.pi = hitting_prob_all(m);
            ent.e = expected_hitting_time_all(m);
            ent.pi_1N = ent.pi[1];
            ent.e_1 = ent.e[1];
            ent.e_max = *std::max_element(ent.e.begin(), ent.e.end());
            ent.sum_abs_eps = bias_profile(m).sum_abs;
            if (n > 1000) {
                ent.pi.clear();
                ent.e.clear();
            }
            entries.push_back(std::move(ent));
        }

        FastConditionReport rep;
        if (kernel) {
            rep = check_fast_conditions(net, *kernel, rate, ladder);
        } else {
            rep.structure_ok = false;
            rep.structure_issues.push_back("no splitting mechanism configured");
            const auto [r01, r10] = boundary_escape_rates(net);
            rep.r01_pred = r01;
            rep.r10_pred = r10;
            for (std::int64_t n : ladder) {
                FastConditionRow row;
                row.N = n;
                rep.rows.push_back(row);
            }
        }
        // One source of truth for the chain statistics in both reports.
        for (std::size_t i = 0; i < rep.rows.size(); ++i) {
            rep.rows[i].sum_abs_eps = entries[i].sum_abs_eps;
            rep.rows[i].N_pi_1N = static_cast<double>(entries[i].N) * entries[i].pi_1N;
            rep.rows[i].N_e_1 = static_cast<double>(entries[i].N) * entries[i].e_1;
        }

        make_dirs(cfg.out_dir);

        ordered_json bd;
        bd["schema_version"] = kSchemaVersion;
        bd["command"] = "analyze";
        bd["config_hash"] = cfg.hash();
        bd["has_splitting"] = cfg.has_splitting;
        ordered_json jentries = ordered_json::array();
        for (const auto& ent : entries) {
            ordered_json je;
            je["N"] = ent.N;
            je["pi_1N"] = ent.pi_1N;
            je["N_pi_1N"] = static_cast<double>(ent.N) * ent.pi_1N;
            je["e_1"] = ent.e_1;
            je["N_e_1"] = static_cast<double>(ent.N) * ent.e_1;
            je["e_max"] = ent.e_max;
            je["sum_abs_eps"] = ent.sum_abs_eps;
            if (!ent.pi.empty()) {
                je["pi"] = ent.pi;
                je["e"] = ent.e;
            }
            jentries.push_back(std::move(je));
        }
        bd["entries"] = jentries;
        write_json_file(cfg.out_dir + "/bd_report.json", bd);

        ordered_json cond;
        cond["schema_version"] = kSchemaVersion;
        cond["command"] = "analyze";
        cond["config_hash"] = cfg.hash();
        cond["structure_ok"] = rep.structure_ok;
        cond["structure_issues"] = rep.structure_issues;
        cond["sums_decreasing"] = rep.sums_decreasing;
        ordered_json rows = ordered_json::array();
        for (const auto& row : rep.rows) {
            ordered_json jr;
            jr["N"] = row.N;
            if (kernel) {
                jr["sum1"] = row.sum1;
                jr["sum2"] = row.sum2;
                jr["sum3"] = row.sum3;
            } else {
                jr["sum1"] = nullptr;
                jr["sum2"] = nullptr;
                jr["sum3"] = nullptr;
            }
            jr["sum_abs_eps"] = row.sum_abs_eps;
            jr["N_pi_1N"] = row.N_pi_1N;
            jr["N_e_1"] = row.N_e_1;
            jr["r01_pred"] = rep.r01_pred;
            jr["r10_pred"] = rep.r10_pred;
            rows.push_back(std::move(jr));
        }
        cond["rows"] = rows;
        write_json_file(cfg.out_dir + "/conditions.json", cond);
        return 0;
    });
}

int run_quasipotential(const ExperimentConfig& cfg) {
    return guarded("quasipotential", [&]() -> int {
        const ParsedNetwork parsed = load_network(cfg);
        const ReactionNetwork& net = parsed.net;
        std::vector<std::string> notes;

        const Polynomial phi = limiting_drift(net);
        const EquilibriaResult eqr = find_equilibria(phi);
        if (!eqr.wells && !eqr.message.empty()) notes.push_back(eqr.message);

        double gt2 = 1.0;
        bool gt2_inferred = false;
        if (cfg.has_splitting) {
            if (auto v = infer_gamma_tilde_sq(cfg.kernel, GammaExpr::parse(cfg.gamma_text))) {
                gt2 = *v;
                gt2_inferred = true;
            } else {
                notes.push_back(
                    "splitting rate is not on the diffusive normalization; diffusion "
                    "barriers use the reference gamma_tilde = 1");
            }
        }
        const auto sigma_sq = [](double z) { return 0.5 * z * (1.0 - z); };

        ordered_json barriers;
        barriers["I12"] = nullptr;
        barriers["I32"] = nullptr;
        barriers["iota12"] = nullptr;
        barriers["iota32"] = nullptr;
        barriers["A_y2"] = nullptr;
        ordered_json predictions;
        predictions["slow_rate"] = nullptr;
        predictions["jump_rate"] = nullptr;
        const auto [r01, r10] = boundary_escape_rates(net);
        predictions["fast_r01"] = r01;
        predictions["fast_r10"] = r10;

        if (eqr.wells) {
            const DiffusionBarriers db =
                barrier_diffusion(phi, sigma_sq, std::sqrt(gt2), *eqr.wells);
            barriers["I12"] = db.I12;
            barriers["I32"] = db.I32;
            barriers["A_y2"] = db.A_y2;
            if (cfg.epsilon_sq)
                predictions["slow_rate"] = slow_switch_rate(db, *cfg.epsilon_sq);
            else
                notes.push_back("no splitting.epsilon_sq: slow_rate not predicted");
            if (net.unit_step()) {
                const Polynomial rp = limiting_rate(net, +1);
                const Polynomial rm = limiting_rate(net, -1);
                try {
                    const JumpBarriers jb = barrier_jump(
                        [&rp](double x) { return rp(x); },
                        [&rm](double x) { return rm(x); }, *eqr.wells);
                    barriers["iota12"] = jb.iota12;
                    barriers["iota32"] = jb.iota32;
                    if (cfg.N >= 1)
                        predictions["jump_rate"] =
                            jump_switch_rate(jb, static_cast<double>(cfg.N));
                    else
                        notes.push_back("no N: jump_rate not predicted");
                } catch (const std::domain_error& e) {
                    notes.push_back(std::string("log-ratio barriers unavailable: ") +
                                    e.what());
                }
            } else {
                notes.push_back(
                    "multi-step reactions: log-ratio barriers are only defined for "
                    "unit-increment networks");
            }
        }

        std::vector<std::int64_t> ladder = cfg.N_ladder;
        if (ladder.size() < 2) {
            const std::int64_t n0 = cfg.N >= 1 ? cfg.N : 200;
            ladder = {n0, 2 * n0, 4 * n0};
        }

        RegimeReport rr;
        if (cfg.has_splitting) {
            rr = classify_regime(net, kernel_from(cfg), rate_from(cfg), ladder);
        } else {
            rr.N_ladder = ladder;
            bool all_zero = true;
            for (std::int64_t n : ladder) {
                rr.eps_A.push_back(epsilon_A(net, n));
                all_zero = all_zero && rr.eps_A.back() == 0.0;
            }
            if (all_zero) {
                rr.label = Regime::Slow;
                rr.rationale =
                    "no splitting and no balanced reactions: the noise-to-drift ratio "
                    "is identically zero, so only an explicit small parameter can "
                    "drive switching";
            } else {
                double s0 = std::log(rr.eps_A.front()), s1 = std::log(rr.eps_A.back());
                double n0 = std::log(static_cast<double>(ladder.front()));
                double n1 = std::log(static_cast<double>(ladder.back()));
                rr.eps_A_slope = (s1 - s0) / (n1 - n0);
                if (rr.eps_A_slope < -0.1) {
                    rr.label = Regime::Slow;
                    rr.rationale =
                        "balanced-reaction noise decays relative to drift as N grows";
                } else {
                    rr.label = Regime::Indeterminate;
                    rr.rationale =
                        "noise-to-drift ratio does not decay, but without a splitting "
                        "mechanism no fast route applies";
                }
            }
            if (eqr.wells) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "{%.6g, %.6g}", eqr.wells->x1, eqr.wells->x3);
                rr.switching_states = buf;
                rr.time_scale = "exp(min(I12, I32) / eps^2)";
            }
        }

        make_dirs(cfg.out_dir);
        ordered_json out;
        out["schema_version"] = kSchemaVersion;
        out["command"] = "quasipotential";
        out["config_hash"] = cfg.hash();
        out["regime"] = regime_name(rr.label);
        out["regime_rationale"] = rr.rationale;
        out["switching_states"] = rr.switching_states;
        out["time_scale"] = rr.time_scale;
        out["N_ladder"] = rr.N_ladder;
        out["eps_A"] = rr.eps_A;
        out["eps_A_slope"] = rr.eps_A_slope;
        if (!rr.corcond_slopes.empty()) out["condition_sum_slopes"] = rr.corcond_slopes;
        if (eqr.wells) {
            ordered_json je;
            je["x1"] = eqr.wells->x1;
            je["x2"] = eqr.wells->x2;
            je["x3"] = eqr.wells->x3;
            out["equilibria"] = je;
        } else {
            out["equilibria"] = nullptr;
        }
        out["roots"] = eqr.roots;
        out["gamma_tilde_sq"] = gt2;
        out["gamma_tilde_inferred"] = gt2_inferred;
        out["barriers"] = barriers;
        out["predictions"] = predictions;
        out["notes"] = notes;
        write_json_file(cfg.out_dir + "/quasipotential.json", out);
        return 0;
    });
}

int run_validate(const ExperimentConfig& cfg) {
    return guarded("validate", [&]() -> int {
        const ParsedNetwork parsed = load_network(cfg);
        const ReactionNetwork& net = parsed.net;
        const std::int64_t N = cfg.N >= 1 ? cfg.N : 1000;
        const ValidationReport vr = validate(net, N);

        std::printf("network (canonical form):\n%s", pretty_print(net).c_str());
        int balanced = 0;
        for (int g = 0; g < net.group_count(); ++g)
            if (net.group_balanced(g)) ++balanced;
        std::printf("reactions: %zu, reactant groups: %d (%d balanced)\n", net.size(),
                    net.group_count(), balanced);
        std::printf("checked at N = %lld\n", static_cast<long long>(N));
        std::printf("net drift at state 0: %s\n", format_float(vr.drift_at_0).c_str());
        std::printf("net drift at state N: %s\n", format_float(vr.drift_at_N).c_str());

        try {
            const Polynomial phi = limiting_drift(net);
            const EquilibriaResult eqr = find_equilibria(phi);
            if (eqr.wells) {
                std::printf("limit drift: double well, equilibria %.6g, %.6g, %.6g\n",
                            eqr.wells->x1, eqr.wells->x2, eqr.wells->x3);
            } else {
                std::printf("limit drift: %s\n",
                            eqr.message.empty() ? "no double-well structure"
                                                : eqr.message.c_str());
            }
        } catch (const std::invalid_argument& e) {
            std::printf("limit drift unavailable: %s\n", e.what());
        }

        for (const auto& s : vr.issues) std::printf("issue: %s\n", s.c_str());
        std::printf("%s\n", vr.ok ? "ok" : "invalid");
        return vr.ok ? 0 : 2;
    });
}

}  // namespace bistab
