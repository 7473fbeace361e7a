#include <cmath>
#include <cstdint>
#include <string>

#include "doctest.h"

#include "bistab/config.hpp"
#include "bistab/io.hpp"
#include "bistab/rng.hpp"
#include "support/test_util.hpp"

using namespace bistab;

TEST_CASE("config defaults hold for an empty file") {
    const ExperimentConfig cfg = parse_config("", ".");
    CHECK(cfg.N == 0);
    CHECK(cfg.t_max == 0.0);
    CHECK(cfg.seed == 1);
    CHECK(cfg.replicates == 1);
    CHECK(cfg.out_dir == "out");
    CHECK(cfg.bins == 100);
    CHECK(cfg.switch_mode == "none");
    CHECK(cfg.snapshots == 10000);
    CHECK(!cfg.store_events);
    CHECK(cfg.dt == 1e-4);
    CHECK(!cfg.diffusion);
    CHECK(!cfg.has_splitting);
    CHECK(!cfg.epsilon_sq.has_value());
    CHECK(!cfg.x0.has_value());
    CHECK(cfg.N_ladder.empty());
}

TEST_CASE("sections fold into dotted keys") {
    const std::string text =
        "network = \"net.reactions\"\n"
        "N = 100  # trailing comment\n"
        "t_max = 2.5\n"
        "x0 = 75\n"
        "\n"
        "[splitting]\n"
        "kind = bern\n"
        "gamma = 0.5*N^2\n"
        "epsilon_sq = 0.02\n"
        "\n"
        "[switch]\n"
        "mode = wells\n"
        "c = 0.08\n";
    const ExperimentConfig cfg = parse_config(text, "/tmp/somewhere");
    CHECK(cfg.config_dir == "/tmp/somewhere");
    CHECK(cfg.network_path == "net.reactions");
    CHECK(cfg.N == 100);
    CHECK(cfg.t_max == 2.5);
    REQUIRE(cfg.x0.has_value());
    CHECK(*cfg.x0 == 75);
    CHECK(cfg.has_splitting);
    CHECK(cfg.kernel == KernelKind::BernoulliStep);
    CHECK(cfg.gamma_text == "0.5*N^2");
    REQUIRE(cfg.epsilon_sq.has_value());
    CHECK(*cfg.epsilon_sq == 0.02);
    CHECK(cfg.switch_mode == "wells");
    CHECK(cfg.switch_c == 0.08);
}

TEST_CASE("splitting kind none disables splitting") {
    const ExperimentConfig cfg = parse_config("[splitting]\nkind = none\n", ".");
    CHECK(!cfg.has_splitting);
}

TEST_CASE("integer lists require brackets and ascending order") {
    const ExperimentConfig cfg = parse_config("N_list = [100, 200, 400]\n", ".");
    REQUIRE(cfg.N_ladder.size() == 3);
    CHECK(cfg.N_ladder[0] == 100);
    CHECK(cfg.N_ladder[2] == 400);
    CHECK_THROWS_AS(parse_config("N_list = 100, 200\n", "."), ConfigError);
    CHECK_THROWS_AS(parse_config("N_list = []\n", "."), ConfigError);
    CHECK_THROWS_AS(parse_config("N_list = [200, 100]\n", "."), ConfigError);
}

TEST_CASE("malformed configs are rejected with the offending key or line") {
    CHECK_THROWS_WITH_AS(parse_config("bogus_key = 1\n", "."),
                         doctest::Contains("unknown key 'bogus_key'"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("N = 1\nN = 2\n", "."),
                         doctest::Contains("duplicate key 'N'"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("just some words\n", "."),
                         doctest::Contains("line 1"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config("\n[splitting\nkind = bern\n", "."),
                         doctest::Contains("line 2"), ConfigError);
    CHECK_THROWS_AS(parse_config("[]\n", "."), ConfigError);
    CHECK_THROWS_AS(parse_config("N = twelve\n", "."), ConfigError);
    CHECK_THROWS_AS(parse_config("N = 1.5\n", "."), ConfigError);
    CHECK_THROWS_AS(parse_config("store_events = yes\n", "."), ConfigError);
    CHECK_THROWS_AS(parse_config("[splitting]\nkind = magic\n", "."), ConfigError);
    CHECK_THROWS_AS(parse_config("[splitting]\nepsilon_sq = 0\n", "."), ConfigError);
    CHECK_THROWS_AS(parse_config("[switch]\nmode = sideways\n", "."), ConfigError);
    CHECK_THROWS_AS(parse_config("replicates = 0\n", "."), ConfigError);
    CHECK_THROWS_AS(parse_config("bins = 0\n", "."), ConfigError);
    CHECK_THROWS_AS(parse_config("dt = 0\n", "."), ConfigError);
    CHECK_THROWS_AS(parse_config("N = -5\n", "."), ConfigError);
}

TEST_CASE("file loading applies overrides on top of the file") {
    testsupport::TempDir dir;
    dir.write("exp.toml",
              "N = 100\n"
              "t_max = 1\n"
              "seed = 7\n");
    const ExperimentConfig base = load_config(dir.file("exp.toml"), {});
    CHECK(base.N == 100);
    CHECK(base.seed == 7);
    CHECK(base.config_dir == dir.path());

    const ExperimentConfig tweaked =
        load_config(dir.file("exp.toml"), {"seed=42", "out_dir=elsewhere"});
    CHECK(tweaked.N == 100);
    CHECK(tweaked.seed == 42);
    CHECK(tweaked.out_dir == "elsewhere");

    CHECK_THROWS_AS(load_config(dir.file("exp.toml"), {"seed"}), ConfigError);
    CHECK_THROWS_AS(load_config(dir.file("exp.toml"), {"seed="}), ConfigError);
    CHECK_THROWS_AS(load_config(dir.file("missing.toml"), {}), ConfigError);
}

TEST_CASE("config hash tracks semantic fields only") {
    ExperimentConfig a = parse_config("N = 100\nt_max = 1\n", ".");
    ExperimentConfig b = parse_config("N = 100\nt_max = 1\nout_dir = somewhere_else\n", ".");
    ExperimentConfig c = parse_config("N = 100\nt_max = 1\nseed = 2\n", ".");
    CHECK(a.hash().size() == 16);
    CHECK(a.hash() == b.hash());  // out_dir is presentation, not physics
    CHECK(a.hash() != c.hash());
    CHECK(a.canonical().find("N = 100\n") != std::string::npos);
    CHECK(a.hash().find_first_not_of("0123456789abcdef") == std::string::npos);
}

TEST_CASE("float formatting survives a round trip") {
    CHECK(format_float(1.0) == "1");
    CHECK(format_float(0.1) == "0.10000000000000001");
    Rng rng(33);
    for (int i = 0; i < 200; ++i) {
        const double v = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform() * 20 - 10);
        CHECK(std::stod(format_float(v)) == v);
    }
}

TEST_CASE("csv writers emit the documented headers and rows") {
    testsupport::TempDir dir;

    Trajectory tr;
    tr.snap_times = {0.0, 0.5, 1.0};
    tr.snap_states = {5.0, 6.0, 5.0};
    write_trajectory_csv(dir.file("traj.csv"), tr);
    CHECK(testsupport::slurp(dir.file("traj.csv")) ==
          "time,state\n0,5\n0.5,6\n1,5\n");

    OccupationHistogram h;
    h.bins = 2;
    h.mass = {0.25, 0.75};
    write_occupation_csv(dir.file("occ.csv"), h);
    CHECK(testsupport::slurp(dir.file("occ.csv")) ==
          "bin_left,bin_right,mass\n0,0.5,0.25\n0.5,1,0.75\n");

    std::vector<SwitchEvent> ev(2);
    ev[0].time = 1.5;
    ev[0].kind = "enter_x3";
    ev[1].time = 4.0;
    ev[1].kind = "enter_x1";
    write_switches_csv(dir.file("sw.csv"), ev);
    CHECK(testsupport::slurp(dir.file("sw.csv")) ==
          "index,kind,time,delta_since_last\n0,enter_x3,1.5,1.5\n1,enter_x1,4,2.5\n");

    write_quantiles_csv(dir.file("q.csv"), {{0.5, 0.5}, {2.0, 1.0}});
    CHECK(testsupport::slurp(dir.file("q.csv")) == "t,fraction\n0.5,0.5\n2,1\n");
}

TEST_CASE("event-log trajectories fall back to the full log") {
    testsupport::TempDir dir;
    Trajectory tr;
    tr.has_events = true;
    tr.times = {0.0, 0.25};
    tr.states = {3.0, 4.0};
    tr.tags = {-1, 0};
    write_trajectory_csv(dir.file("traj.csv"), tr);
    CHECK(testsupport::slurp(dir.file("traj.csv")) == "time,state\n0,3\n0.25,4\n");
}

TEST_CASE("filesystem failures surface as io errors") {
    testsupport::TempDir dir;
    CHECK_THROWS_AS(write_text_file(dir.path() + "/no_such_dir/file.txt", "x"), IoError);
    make_dirs(dir.path() + "/a/b/c");
    write_text_file(dir.path() + "/a/b/c/file.txt", "x");
    CHECK(testsupport::slurp(dir.path() + "/a/b/c/file.txt") == "x");
}
