#include <cmath>
#include <vector>

#include "doctest.h"

#include "bistab/rational.hpp"
#include "bistab/reaction.hpp"
#include "bistab/rng.hpp"
#include "support/test_util.hpp"

using namespace bistab;

TEST_CASE("falling factorials") {
    CHECK(falling_factorial(5.0, 0) == 1.0);
    CHECK(falling_factorial(5.0, 3) == 60.0);
    CHECK(scaled_falling_factorial(0.5, 0, 100.0) == 1.0);
    CHECK(scaled_falling_factorial(0.5, 2, 100.0) == doctest::Approx(0.5 * (0.5 - 0.01)));
}

TEST_CASE("network grouping and balance detection") {
    const auto net = testsupport::double_well_network();
    REQUIRE(net.size() == 4);
    CHECK(net.group_count() == 4);
    for (std::size_t r = 0; r < net.size(); ++r) CHECK(!net.balanced(r));
    CHECK(net.unit_step());

    // Same reactant signature, opposite unit increments, equal rates: the
    // zeta-weighted sum cancels exactly, so the pair is balanced.
    std::vector<Reaction> rs;
    rs.push_back(make_reaction(1, 1, +1, Rat64(16, 3)));
    rs.push_back(make_reaction(1, 1, -1, Rat64(16, 3)));
    const ReactionNetwork bal(std::move(rs));
    CHECK(bal.group_count() == 1);
    CHECK(bal.group_balanced(0));
    CHECK(limiting_drift(bal).empty());
}

TEST_CASE("propensities follow falling-factorial mass action") {
    const auto net = testsupport::double_well_network();
    const std::int64_t N = 40;
    // 2A + B -> 3A has kappa 32/3, a=2, b=1, scale -2.
    const Reaction& r = net.reactions()[3];
    REQUIRE(r.a == 2);
    const std::int64_t x = 13;
    const double expect = (32.0 / 3.0) / (40.0 * 40.0) * 13.0 * 12.0 * 27.0;
    CHECK(propensity(r, x, N) == doctest::Approx(expect).epsilon(1e-14));
    CHECK(propensity(r, 1, N) == 0.0);  // needs two copies of A
    CHECK(propensity(r, 40, N) == 0.0);  // needs one copy of B
}

TEST_CASE("limit drift of the double-well network") {
    const auto net = testsupport::double_well_network();
    const Polynomial phi = limiting_drift(net);
    REQUIRE(phi.degree() == 3);
    // -(32/3)(x - 1/4)(x - 1/2)(x - 3/4) = 1 - (22/3)x + 16x^2 - (32/3)x^3
    CHECK(phi.coeffs()[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(phi.coeffs()[1] == doctest::Approx(-22.0 / 3.0).epsilon(1e-14));
    CHECK(phi.coeffs()[2] == doctest::Approx(16.0).epsilon(1e-14));
    CHECK(phi.coeffs()[3] == doctest::Approx(-32.0 / 3.0).epsilon(1e-14));
    CHECK(phi(0.25) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(phi(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(phi(0.75) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
}

TEST_CASE("finite-size drift converges to the limit drift") {
    const auto net = testsupport::double_well_network();
    const Polynomial phi = limiting_drift(net);
    double prev = 1e9;
    for (std::int64_t N : {100, 1000, 10000}) {
        double worst = 0.0;
        for (double z = 0.05; z < 1.0; z += 0.1)
            worst = std::max(worst, std::abs(finite_size_drift(net, z, N) - phi(z)));
        CHECK(worst < prev);
        prev = worst;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("one-sided limit rates split the drift") {
    const auto net = testsupport::double_well_network();
    const Polynomial rp = limiting_rate(net, +1);
    const Polynomial rm = limiting_rate(net, -1);
    const Polynomial phi = limiting_drift(net);
    for (double x = 0.0; x <= 1.0; x += 0.05) {
        // r_plus(x) = (1-x)(1 + (32/3)x^2), r_minus(x) = x(1 + (16/3)(1-x))
        CHECK(rp(x) == doctest::Approx((1.0 - x) * (1.0 + 32.0 / 3.0 * x * x)).epsilon(1e-13));
        CHECK(rm(x) == doctest::Approx(x * (1.0 + 16.0 / 3.0 * (1.0 - x))).epsilon(1e-13));
        CHECK(rp(x) - rm(x) == doctest::Approx(phi(x)).scale(1.0).epsilon(1e-12));
    }
}

TEST_CASE("balanced reactions contribute to one-sided rates but not drift") {
    std::vector<Reaction> rs;
    rs.push_back(make_reaction(0, 1, +1, Rat64(1)));
    rs.push_back(make_reaction(1, 0, -1, Rat64(1)));
    rs.push_back(make_reaction(1, 1, +1, Rat64(2)));
    rs.push_back(make_reaction(1, 1, -1, Rat64(2)));
    const ReactionNetwork net(std::move(rs));
    CHECK(net.group_balanced(net.group_of(2)));
    const Polynomial rp = limiting_rate(net, +1);
    const Polynomial phi = limiting_drift(net);
    CHECK(rp(0.5) == doctest::Approx(0.5 + 2.0 * 0.25));
    CHECK(phi(0.3) == doctest::Approx(1.0 - 2.0 * 0.3));  // balanced pair cancels
}

TEST_CASE("mirror symmetry of the drift under species exchange") {
    // Swapping the species roles maps (a, b, zeta) to (b, a, -zeta) and the
    // rescaled state x to 1-x; the drift must flip sign accordingly.
    Rng rng(515);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Reaction> fwd, rev;
        const int n_reactions = 1 + static_cast<int>(rng.below(4));
        for (int k = 0; k < n_reactions; ++k) {
            const int a = static_cast<int>(rng.below(3));
            const int b = static_cast<int>(rng.below(3));
            std::vector<int> zetas;
            for (int z = -a; z <= b; ++z)
                if (z != 0) zetas.push_back(z);
            if (zetas.empty()) continue;
            const int zeta = zetas[rng.below(zetas.size())];
            const double kappa = 0.1 + 9.9 * rng.uniform();
            Reaction r;
            r.a = a;
            r.b = b;
            r.zeta = zeta;
            r.kappa = kappa;
            r.scale = r.standard_scale();
            fwd.push_back(r);
            Reaction m = r;
            m.a = r.b;
            m.b = r.a;
            m.zeta = -r.zeta;
            rev.push_back(m);
        }
        if (fwd.empty()) continue;
        const ReactionNetwork nf(fwd), nr(rev);
        const Polynomial pf = limiting_drift(nf), pr = limiting_drift(nr);
        for (double x = 0.0; x <= 1.0; x += 0.125)
            CHECK(pr(x) == doctest::Approx(-pf(1.0 - x)).scale(1.0).epsilon(1e-10));
    }
}

TEST_CASE("construction rejects malformed reactions") {
    CHECK_THROWS_AS(ReactionNetwork({make_reaction(1, 0, 1, Rat64(1))}),
                    std::invalid_argument);  // zeta outside [-a, b]
    Reaction r = make_reaction(1, 0, -1, Rat64(1));
    r.kappa = -2.0;
    r.kappa_exact.reset();
    CHECK_THROWS_AS(ReactionNetwork({r}), std::invalid_argument);
    Reaction z = make_reaction(1, 1, 1, Rat64(1));
    z.zeta = 0;
    CHECK_THROWS_AS(ReactionNetwork({z}), std::invalid_argument);
}

TEST_CASE("validation flags chains with no boundary escape") {
    std::vector<Reaction> rs;
    rs.push_back(make_reaction(1, 0, -1, Rat64(1)));  // only moves down
    const ReactionNetwork net(std::move(rs));
    const ValidationReport vr = validate(net, 100);
    CHECK(!vr.ok);
    CHECK(!vr.assumption_escape_0);
    CHECK(vr.assumption_escape_N);
    CHECK(!vr.issues.empty());

    const ValidationReport good = validate(testsupport::double_well_network(), 100);
    CHECK(good.ok);
    CHECK(good.drift_at_0 > 0.0);
    CHECK(good.drift_at_N < 0.0);
}
