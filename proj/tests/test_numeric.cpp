#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include <invsum/numeric.hpp>

using namespace invsum;

TEST_CASE("unit roots land on the circle at the right angles", "[numeric]") {
    CHECK(std::abs(unit_root(4, 1) - cplx(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(unit_root(2, 1) - cplx(-1.0, 0.0)) < 1e-15);
    CHECK(std::abs(unit_root(5, 7) - unit_root(5, 2)) < 1e-15);
    CHECK(std::abs(unit_root(5, -1) - unit_root(5, 4)) < 1e-15);
    std::vector<cplx> r8 = unit_roots(8);
    REQUIRE(r8.size() == 8);
    CHECK(std::abs(r8[0] - cplx(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(r8[2] - cplx(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(r8[4] - cplx(-1.0, 0.0)) < 1e-15);
}

TEST_CASE("root_of_unity carries its parameters", "[numeric]") {
    RootOfUnity r = root_of_unity(7, 3);
    CHECK(r.p == 7);
    CHECK(r.k == 3);
    CHECK(std::abs(r.value - unit_root(7, 3)) == 0.0);
    CHECK_THROWS_AS(root_of_unity(0, 1), std::domain_error);
}

TEST_CASE("cotangent split matches the direct quotient", "[numeric]") {
    for (i64 p : {3, 7, 97}) {
        for (i64 m = 1; m < p; ++m) {
            cplx direct = 1.0 / (cplx(1.0, 0.0) - unit_root(p, m));
            CHECK(std::abs(inv_one_minus_e(p, m) - direct) < 1e-12);
        }
    }
    // the -k case goes through m = p - k
    i64 p = 11, k = 4;
    cplx direct = 1.0 / (cplx(1.0, 0.0) - unit_root(p, -k));
    CHECK(std::abs(inv_one_minus_e(p, p - k) - direct) < 1e-12);
    CHECK_THROWS_AS(inv_one_minus_e(7, 0), std::domain_error);
    CHECK_THROWS_AS(inv_one_minus_e(7, 14), std::domain_error);
}

TEST_CASE("compensated summation survives catastrophic cancellation", "[numeric]") {
    CompensatedSum s;
    s.add(1e16);
    s.add(1.0);
    s.add(-1e16);
    CHECK(s.value() == 1.0);

    ComplexSum z;
    z.add({1e16, -1e16});
    z.add({1.0, 2.0});
    z.add({-1e16, 1e16});
    CHECK(z.value() == cplx(1.0, 2.0));
}

TEST_CASE("rounding contract helpers", "[numeric]") {
    CHECK(rounding_slack == 0.4);
    CHECK(nearest_int(28.6) == 29);
    CHECK(nearest_int(-28.6) == -29);
    CHECK(nearest_int(21.4) == 21);
    CHECK(rounding_gap(28.6) == Catch::Approx(0.4).margin(1e-12));
    CHECK(rounding_gap(29.0) == 0.0);
}

TEST_CASE("checked 128-bit arithmetic refuses to wrap", "[numeric]") {
    i128 big = static_cast<i128>(1) << 126;
    CHECK_THROWS_AS(checked_add(big, big), std::overflow_error);
    CHECK_THROWS_AS(checked_mul(big, 4), std::overflow_error);
    CHECK(checked_add(big, -big) == 0);
    CHECK(checked_mul(static_cast<i128>(3), 5) == 15);
    i128 e18 = 1'000'000'000'000'000'000LL;
    CHECK(checked_mul(e18, 1000) == e18 * 1000);
}

TEST_CASE("i128 decimal rendering", "[numeric]") {
    CHECK(i128_to_string(0) == "0");
    CHECK(i128_to_string(-7) == "-7");
    CHECK(i128_to_string(13) == "13");
    i128 e18 = 1'000'000'000'000'000'000LL;
    CHECK(i128_to_string(e18 * 1000) == "1000000000000000000000");
    i128 min128 = static_cast<i128>(1) << 127;  // most negative value
    CHECK(i128_to_string(min128) == "-170141183460469231731687303715884105728");
}

TEST_CASE("budget_error reports cost and cap", "[numeric]") {
    budget_error e(1e12, 1000);
    std::string msg = e.what();
    CHECK(msg.find("1000") != std::string::npos);
    CHECK_THROWS_AS(throw budget_error(5.0, 2), std::runtime_error);
}
