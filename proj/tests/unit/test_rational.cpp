#include "doctest.h"

#include "bistab/rational.hpp"

using bistab::Rat64;

TEST_CASE("rational normalization and accessors") {
    Rat64 r(6, -4);
    CHECK(r.num() == -3);
    CHECK(r.den() == 2);
    CHECK(r.value() == doctest::Approx(-1.5));
    CHECK(!r.is_zero());
    CHECK(!r.is_integer());
    CHECK(Rat64(0, 7).is_zero());
    CHECK(Rat64(8, 4).is_integer());
    CHECK_THROWS_AS(Rat64(1, 0), std::invalid_argument);
}

TEST_CASE("rational arithmetic is exact") {
    const Rat64 a(16, 3), b(32, 3);
    CHECK(a + b == Rat64(16));
    CHECK(b - a == a);
    CHECK(a * Rat64(3, 16) == Rat64(1));
    CHECK(b / a == Rat64(2));
    CHECK(-a == Rat64(-16, 3));
    CHECK_THROWS_AS(a / Rat64(0), std::domain_error);

    // A balance sum that cancels exactly but would not in doubles if built
    // from truncated decimals.
    const Rat64 sum = Rat64(1, 3) + Rat64(1, 3) + Rat64(1, 3) - Rat64(1);
    CHECK(sum.is_zero());
}

TEST_CASE("rational string form") {
    CHECK(Rat64(16, 3).str() == "16/3");
    CHECK(Rat64(5).str() == "5");
    CHECK(Rat64(-1, 4).str() == "-1/4");
}

TEST_CASE("rational parsing") {
    auto p = [](const char* s) { return Rat64::parse(s); };
    CHECK(*p("16/3") == Rat64(16, 3));
    CHECK(*p(" 7 ") == Rat64(7));
    CHECK(*p("-3/9") == Rat64(-1, 3));
    CHECK(*p("0.25") == Rat64(1, 4));
    CHECK(*p("2e-4") == Rat64(1, 5000));
    CHECK(*p("1.5e2") == Rat64(150));
    CHECK(*p("+0.125") == Rat64(1, 8));
    CHECK(!p(""));
    CHECK(!p("abc"));
    CHECK(!p("1/0"));
    CHECK(!p("1.2.3"));
    CHECK(!p("1e99"));
}

TEST_CASE("rational overflow reports instead of wrapping") {
    const Rat64 big(INT64_MAX / 2, 1);
    CHECK_THROWS_AS(big * big, std::overflow_error);
}
