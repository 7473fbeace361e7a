#include <cmath>

#include "doctest.h"

#include "bistab/quasipotential.hpp"
#include "bistab/reaction.hpp"
#include "bistab/splitting.hpp"
#include "support/test_util.hpp"

using namespace bistab;

namespace {

Polynomial double_well_drift() { return limiting_drift(testsupport::double_well_network()); }

double half_well(double z) { return 0.5 * z * (1.0 - z); }

EquilibriumSet double_well_eq() { return *find_equilibria(double_well_drift()).wells; }

}  // namespace

TEST_CASE("equilibria of the double-well drift to 1e-10") {
    const EquilibriaResult r = find_equilibria(double_well_drift());
    REQUIRE(r.wells.has_value());
    CHECK(r.wells->x1 == doctest::Approx(0.25).scale(1.0).epsilon(1e-10));
    CHECK(r.wells->x2 == doctest::Approx(0.5).scale(1.0).epsilon(1e-10));
    CHECK(r.wells->x3 == doctest::Approx(0.75).scale(1.0).epsilon(1e-10));
    CHECK(r.wells->dphi_x1 < 0.0);
    CHECK(r.wells->dphi_x2 > 0.0);
    CHECK(r.wells->dphi_x3 < 0.0);
    CHECK(r.roots.size() == 3);
}

TEST_CASE("non-double-well drifts are reported, not classified") {
    // single interior zero
    const EquilibriaResult one = find_equilibria(Polynomial({0.5, -1.0}));
    CHECK(!one.wells.has_value());
    CHECK(!one.message.empty());

    // three zeros with inverted stability (unstable, stable, unstable)
    const EquilibriaResult inv =
        find_equilibria(Polynomial({-3.0 / 32.0, 11.0 / 16.0, -1.5, 1.0}));
    CHECK(!inv.wells.has_value());
    CHECK(!inv.message.empty());
}

TEST_CASE("change of variable reproduces the trigonometric closed form") {
    // g' = sqrt(g(1-g)), g(0) = 1/2 integrates to cos^2(y/2 - pi/4).
    const GTransform t = GTransform::build([](double z) { return z * (1.0 - z); }, 1.0);
    double sup = 0.0;
    for (double y = -1.4; y <= 1.4; y += 0.002) {
        const double c = std::cos(0.5 * y - 0.25 * M_PI);
        sup = std::max(sup, std::abs(t.g_at(y) - c * c));
    }
    CHECK(sup < 1e-6);
    CHECK(t.h_at(0.25) == doctest::Approx(-M_PI / 6.0).scale(1.0).epsilon(1e-6));
    CHECK(t.h_at(0.75) == doctest::Approx(M_PI / 6.0).scale(1.0).epsilon(1e-6));
    // h inverts g across the tabulated range
    for (double y = -1.3; y <= 1.3; y += 0.1)
        CHECK(t.h_at(t.g_at(y)) == doctest::Approx(y).scale(1.0).epsilon(1e-8));
}

TEST_CASE("transformed drift vanishes at the well images") {
    const GTransform t = GTransform::build(half_well, 1.0);
    const Polynomial phi = double_well_drift();
    const EquilibriumSet eq = double_well_eq();
    CHECK(t.alpha_at(t.h_at(eq.x1), phi) == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
    CHECK(t.alpha_at(t.h_at(eq.x3), phi) == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
}

TEST_CASE("diffusion barriers of the reference configuration") {
    const DiffusionBarriers b =
        barrier_diffusion(double_well_drift(), half_well, 1.0, double_well_eq());
    CHECK(b.I12 == doctest::Approx(0.18260504352621).scale(1.0).epsilon(1e-10));
    CHECK(b.I32 == doctest::Approx(0.18260504352621).scale(1.0).epsilon(1e-10));
    CHECK(b.A_y1 == 0.0);
    CHECK(b.A_y2 == doctest::Approx(0.09130252176310).scale(1.0).epsilon(1e-10));
    // symmetric wells: equal depths
    CHECK(b.A_y3 == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
    CHECK(slow_switch_rate(b, 0.02) ==
          doctest::Approx(1.0833826131123e-4).scale(1.0).epsilon(1e-8));
}

TEST_CASE("jump barriers of the reference configuration") {
    const Polynomial rp = limiting_rate(testsupport::double_well_network(), +1);
    const Polynomial rm = limiting_rate(testsupport::double_well_network(), -1);
    const JumpBarriers jb = barrier_jump([&](double x) { return rp(x); },
                                         [&](double x) { return rm(x); }, double_well_eq());
    CHECK(jb.iota12 == doctest::Approx(0.006713257748724).scale(1.0).epsilon(1e-9));
    CHECK(jb.iota32 == doctest::Approx(0.005539914047698).scale(1.0).epsilon(1e-9));
    CHECK(jump_switch_rate(jb, 1500.0) ==
          doctest::Approx(std::exp(-1500.0 * jb.iota32)).epsilon(1e-12));
}

TEST_CASE("jump barriers require positive rates between the wells") {
    const auto eq = double_well_eq();
    CHECK_THROWS_AS(barrier_jump([](double x) { return x - 0.3; },
                                 [](double x) { return x + 1.0; }, eq),
                    std::domain_error);
}

TEST_CASE("barrier comparison: ordering and sandwich bounds") {
    // Shared configuration: unit-step reaction rates plus the splitting
    // contribution x(1-x)/4 on both sides, diffusion profile z(1-z)/2.
    const Polynomial rp = limiting_rate(testsupport::double_well_network(), +1);
    const Polynomial rm = limiting_rate(testsupport::double_well_network(), -1);
    auto rps = [&](double x) { return rp(x) + 0.25 * x * (1.0 - x); };
    auto rms = [&](double x) { return rm(x) + 0.25 * x * (1.0 - x); };
    const BarrierComparison cmp = compare_barriers(double_well_drift(), half_well, 1.0, rps,
                                                   rms, double_well_eq());
    CHECK(cmp.jump_le_diffusion);
    CHECK(cmp.sandwich_ok);
    CHECK(cmp.jump.iota12 == doctest::Approx(0.006475069).scale(1.0).epsilon(1e-6));
    CHECK(cmp.jump.iota32 == doctest::Approx(0.005376343).scale(1.0).epsilon(1e-6));
    CHECK(cmp.lower12 == doctest::Approx(0.006373218).scale(1.0).epsilon(1e-6));
    CHECK(cmp.upper12 == doctest::Approx(0.006579280).scale(1.0).epsilon(1e-6));
    CHECK(cmp.lower32 == doctest::Approx(0.005306902).scale(1.0).epsilon(1e-6));
    CHECK(cmp.upper32 == doctest::Approx(0.005447093).scale(1.0).epsilon(1e-6));
    CHECK(cmp.lower12 <= cmp.jump.iota12);
    CHECK(cmp.jump.iota12 <= cmp.upper12);
    CHECK(cmp.jump.iota12 <= cmp.diffusion.I12);
    CHECK(cmp.jump.iota32 <= cmp.diffusion.I32);
}

TEST_CASE("noise-to-drift ratio closed forms") {
    const auto net = testsupport::double_well_network();
    const auto bern = SplittingKernel::bernoulli_step();

    const auto fast =
        SplitRateSpec::for_kernel(KernelKind::BernoulliStep, GammaExpr::parse("0.5*N^3"));
    for (std::int64_t N : {100, 144, 400})
        CHECK(epsilon_A(net, bern, fast, N) ==
              doctest::Approx(static_cast<double>(N) / 144.0).epsilon(1e-12));

    const auto slow = SplitRateSpec::for_kernel(KernelKind::BernoulliStep,
                                                GammaExpr::parse("0.5*N^2"), 0.02);
    for (std::int64_t N : {100, 1500})
        CHECK(epsilon_A(net, bern, slow, N) == doctest::Approx(0.02 / 144.0).epsilon(1e-12));

    // no splitting, no balanced reactions: identically zero
    CHECK(epsilon_A(net, 100) == 0.0);

    // a balanced pair contributes noise that decays like 1/N relative to drift
    std::vector<Reaction> rs;
    rs.push_back(make_reaction(0, 1, +1, Rat64(1)));
    rs.push_back(make_reaction(1, 0, -1, Rat64(1)));
    rs.push_back(make_reaction(1, 1, +1, Rat64(2)));
    rs.push_back(make_reaction(1, 1, -1, Rat64(2)));
    const ReactionNetwork withbal(std::move(rs));
    CHECK(epsilon_A(withbal, 200) == doctest::Approx(0.5 * epsilon_A(withbal, 100)).epsilon(1e-12));

    // all-balanced network has no drift to compare against
    std::vector<Reaction> onlybal;
    onlybal.push_back(make_reaction(1, 1, +1, Rat64(2)));
    onlybal.push_back(make_reaction(1, 1, -1, Rat64(2)));
    const ReactionNetwork nodrift(std::move(onlybal));
    CHECK_THROWS_AS(epsilon_A(nodrift, 100), std::domain_error);
}

TEST_CASE("regime classification across the three scenarios") {
    const auto net = testsupport::double_well_network();
    const auto bern = SplittingKernel::bernoulli_step();

    const auto fast =
        SplitRateSpec::for_kernel(KernelKind::BernoulliStep, GammaExpr::parse("0.5*N^3"));
    const RegimeReport rf = classify_regime(net, bern, fast, {100, 200, 400});
    CHECK(rf.label == Regime::Fast);
    CHECK(rf.eps_A_slope > 0.1);
    CHECK(!rf.corcond_slopes.empty());
    for (double s : rf.corcond_slopes) CHECK(s < -0.25);
    CHECK(!rf.rationale.empty());
    CHECK(!rf.switching_states.empty());

    const auto diffusive = SplitRateSpec::for_kernel(KernelKind::BernoulliStep,
                                                     GammaExpr::parse("0.5*N^2"), 0.02);
    const RegimeReport rd = classify_regime(net, bern, diffusive, {1500, 3000, 6000});
    CHECK(rd.label == Regime::Diffusive);

    const auto tiny = SplitRateSpec::for_kernel(KernelKind::BernoulliStep,
                                                GammaExpr::parse("0.5*N^2"), 2e-4);
    const RegimeReport rs = classify_regime(net, bern, tiny, {500, 1000, 2000});
    CHECK(rs.label == Regime::Slow);

    const auto hg_small = SplitRateSpec::for_kernel(KernelKind::Hypergeometric,
                                                    GammaExpr::parse("N"), 1e-6);
    const RegimeReport rh = classify_regime(net, SplittingKernel::hypergeometric(), hg_small,
                                            {100, 200, 400});
    CHECK(rh.label == Regime::Slow);
}
