#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <invsum/characters.hpp>

using namespace invsum;

TEST_CASE("character values on the group", "[characters]") {
    PrimeContext ctx = build_context(5);  // g = 2
    DirichletCharacter chi1 = make_character(ctx, 1);
    CHECK(std::abs(chi_eval(chi1, 2) - cplx(0.0, 1.0)) < 1e-14);   // omega^dlog(2)=i
    CHECK(std::abs(chi_eval(chi1, 4) - cplx(-1.0, 0.0)) < 1e-14);  // i^2
    CHECK(chi_eval(chi1, 5) == cplx(0.0, 0.0));
    CHECK(chi_eval(chi1, 0) == cplx(0.0, 0.0));
    DirichletCharacter chi0 = make_character(ctx, 0);
    CHECK(chi0.principal());
    for (i64 a = 1; a < 5; ++a) CHECK(std::abs(chi_eval(chi0, a) - cplx(1.0, 0.0)) < 1e-14);
    // index normalization: j is defined mod p-1
    DirichletCharacter wrapped = make_character(ctx, 5);
    CHECK(wrapped.j == 1);
    CHECK(make_character(ctx, -1).j == 3);
}

TEST_CASE("parity and enumeration", "[characters]") {
    PrimeContext ctx = build_context(13);
    CHECK(enumerate_characters(ctx).size() == 12);
    CHECK(enumerate_characters(ctx, Parity::odd).size() == 6);
    CHECK(enumerate_characters(ctx, Parity::even).size() == 6);
    for (const DirichletCharacter& chi : enumerate_characters(ctx, Parity::odd)) {
        CHECK(chi.odd());
        CHECK(std::abs(chi_eval(chi, 12) - cplx(-1.0, 0.0)) < 1e-13);  // chi(-1) = -1
    }
}

TEST_CASE("row orthogonality of non-principal characters", "[characters]") {
    for (i64 p : {3, 5, 7, 11, 13, 97}) {
        PrimeContext ctx = build_context(p);
        for (const DirichletCharacter& chi : enumerate_characters(ctx)) {
            cplx sum{0.0, 0.0};
            for (i64 a = 1; a < p; ++a) sum += chi_eval(chi, a);
            if (chi.principal())
                CHECK(std::abs(sum - cplx(static_cast<double>(p - 1), 0.0)) < 1e-9);
            else
                CHECK(std::abs(sum) < 1e-9);
        }
    }
}

TEST_CASE("chi_values table matches pointwise evaluation", "[characters]") {
    PrimeContext ctx = build_context(31);
    for (i64 j : {0, 1, 7, 15, 29}) {
        DirichletCharacter chi = make_character(ctx, j);
        std::vector<cplx> vals = chi_values(chi);
        REQUIRE(vals.size() == 31);
        CHECK(vals[0] == cplx(0.0, 0.0));
        for (i64 a = 1; a < 31; ++a) CHECK(std::abs(vals[a] - chi_eval(chi, a)) < 1e-13);
    }
}

TEST_CASE("gauss sum magnitude and quadratic value", "[characters]") {
    PrimeContext c13 = build_context(13);
    for (const DirichletCharacter& chi : enumerate_characters(c13)) {
        if (chi.principal()) {
            CHECK_THROWS_AS(gauss_sum(chi), std::domain_error);
            continue;
        }
        CHECK(std::abs(gauss_sum(chi)) == Catch::Approx(std::sqrt(13.0)).epsilon(1e-12));
    }
    // quadratic character mod 3: tau = e(1/3) - e(2/3) = i*sqrt(3)
    PrimeContext c3 = build_context(3);
    cplx tau = gauss_sum(make_character(c3, 1));
    CHECK(std::abs(tau - cplx(0.0, std::sqrt(3.0))) < 1e-13);
}

TEST_CASE("weighted character sums and the shared table", "[characters]") {
    PrimeContext ctx = build_context(31);
    std::vector<cplx> table = weighted_char_sum_table(ctx);
    REQUIRE(table.size() == 30);
    for (i64 j = 0; j < 30; ++j) {
        DirichletCharacter chi = make_character(ctx, j);
        CHECK(std::abs(table[j] - weighted_char_sum(chi)) < 1e-9);
    }
    // principal: sum of a over 1..p-1
    CHECK(std::abs(table[0] - cplx(31.0 * 30.0 / 2.0, 0.0)) < 1e-9);
    // even non-principal characters pair a with p-a and cancel to -p*W_even/..: the
    // weighted sum collapses onto the character sum, which vanishes
    for (i64 j = 2; j < 30; j += 2)
        CHECK(std::abs(table[j]) < 31.0 * 1e-10);
}

TEST_CASE("frozen L(0) values", "[characters]") {
    PrimeContext c5 = build_context(5);
    CHECK(std::abs(l_zero(make_character(c5, 1)) - cplx(0.6, 0.2)) < 1e-13);
    CHECK(l_zero(make_character(c5, 2)) == cplx(0.0, 0.0));  // even: exactly zero
    PrimeContext c3 = build_context(3);
    CHECK(std::abs(l_zero(make_character(c3, 1)) - cplx(1.0 / 3.0, 0.0)) < 1e-14);
    CHECK_THROWS_AS(l_zero(make_character(c5, 0)), std::domain_error);
}

TEST_CASE("L(1) closed form, series, and the quadratic class-number value", "[characters]") {
    PrimeContext c3 = build_context(3);
    DirichletCharacter chi3 = make_character(c3, 1);
    cplx fin = l_one(chi3, LOneMethod::finite);
    CHECK(std::abs(fin - cplx(pi / (3.0 * std::sqrt(3.0)), 0.0)) < 1e-13);
    cplx tr = l_one(chi3, LOneMethod::truncated);
    CHECK(std::abs(fin - tr) < 1e-6);

    PrimeContext c5 = build_context(5);
    DirichletCharacter chi5 = make_character(c5, 1);
    CHECK(std::abs(l_one(chi5, LOneMethod::finite) - l_one(chi5, LOneMethod::truncated)) < 1e-6);

    CHECK_THROWS_AS(l_one(make_character(c5, 0), LOneMethod::finite), std::domain_error);
    CHECK_THROWS_AS(l_one(make_character(c5, 2), LOneMethod::finite), std::domain_error);
}

TEST_CASE("magnitude relation between L(0) and L(1)", "[characters]") {
    for (i64 p : {7, 19}) {
        PrimeContext ctx = build_context(p);
        for (const DirichletCharacter& chi : enumerate_characters(ctx, Parity::odd)) {
            double lhs = std::abs(l_zero(chi));
            double rhs = std::sqrt(static_cast<double>(p)) / pi * std::abs(l_one(chi, LOneMethod::finite));
            CHECK(lhs == Catch::Approx(rhs).epsilon(1e-11));
        }
    }
}
