#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "qrm/cycle_solver.hpp"
#include "qrm/errors.hpp"

using namespace qrm;

TEST_CASE("periodic point counts reach 2^n + 1") {
    auto sq = RationalMap2::polynomial(1.0, 0.0, 0.0);
    for (int n = 1; n <= 8; ++n) {
        int total = 0;
        for (const auto& p : periodic_points(sq, n)) total += p.multiplicity;
        CHECK(total == (1 << n) + 1);
    }
    Rng rng(7);
    for (int trial = 0; trial < 8; ++trial) {
        auto g = random_map(rng);
        for (int n = 1; n <= 8; ++n) {
            int total = 0;
            for (const auto& p : periodic_points(g, n)) total += p.multiplicity;
            CHECK(total == (1 << n) + 1);
        }
    }
}

TEST_CASE("fixed points of z^2 under the second iterate") {
    // z^4 = z has roots 0, 1, omega, omega^2 plus the fixed point at infinity
    auto sq = RationalMap2::polynomial(1.0, 0.0, 0.0);
    auto pts = periodic_points(sq, 2);
    int total = 0;
    bool has_inf = false;
    for (const auto& p : pts) {
        total += p.multiplicity;
        if (p.point.is_inf()) has_inf = true;
    }
    CHECK(total == 5);
    CHECK(has_inf);
    for (Complex expect : {Complex(0.0), Complex(1.0), unit_root(1, 3), unit_root(2, 3)}) {
        bool found = false;
        for (const auto& p : pts)
            if (!p.point.is_inf() && std::abs(p.point.z - expect) < 1e-9) found = true;
        CHECK(found);
    }
}

TEST_CASE("exact period two cycles") {
    // z^2: one 2-cycle {omega, omega^2} with eigenvalue 4 omega^3 = 4
    auto sq = RationalMap2::polynomial(1.0, 0.0, 0.0);
    auto cyc = cycles(sq, 2);
    REQUIRE(cyc.size() == 1);
    CHECK(cyc[0].points.size() == 2);
    CHECK(std::abs(cyc[0].eigenvalue - 4.0) < 1e-9);

    // basilica: superattracting cycle {0, -1}
    auto bas = RationalMap2::polynomial(1.0, 0.0, -1.0);
    auto bc = cycles(bas, 2);
    REQUIRE(bc.size() == 1);
    CHECK(std::abs(bc[0].eigenvalue) < 1e-9);
    bool saw_zero = false, saw_minus1 = false;
    for (const auto& p : bc[0].points) {
        if (chordal(p, Complex(0.0)) < 1e-8) saw_zero = true;
        if (chordal(p, Complex(-1.0)) < 1e-8) saw_minus1 = true;
    }
    CHECK(saw_zero);
    CHECK(saw_minus1);
}

TEST_CASE("a generic F map has exactly one 2-cycle") {
    for (auto [g, d] :
         {std::pair{Complex(2.5, 0.3), Complex(-1.0, 0.2)}, {Complex(1.7, 0.4), Complex(0.3)}}) {
        auto F = RationalMap2::F_form(g, d);
        auto cyc = cycles(F, 2);
        CHECK(cyc.size() == 1);
    }
    // F_{3,-1} is parabolic at a = 2 (eigenvalue -1): the 2-cycle has
    // collided with the fixed point, so there is no exact 2-cycle
    auto parab = RationalMap2::F_form(3.0, -1.0);
    CHECK(cycles(parab, 2).empty());
}

TEST_CASE("orbit closure and single-valued multiplier along cycles") {
    Rng rng(19);
    for (int trial = 0; trial < 6; ++trial) {
        auto g = random_map(rng);
        for (int n : {2, 3, 4}) {
            for (const auto& rec : cycles(g, n)) {
                REQUIRE(int(rec.points.size()) == n);
                for (int k = 0; k < n; ++k) {
                    SpherePoint next = g.evaluate(rec.points[size_t(k)]);
                    CHECK(chordal(next, rec.points[size_t((k + 1) % n)]) < 1e-8);
                }
                // the chain-rule product is the same from every cycle point
                for (const auto& start : rec.points) {
                    std::vector<SpherePoint> orbit = {start};
                    SpherePoint cur = start;
                    for (int k = 1; k < n; ++k) {
                        cur = g.evaluate(cur);
                        orbit.push_back(cur);
                    }
                    Complex rho = cycle_eigenvalue(g, orbit);
                    CHECK(std::abs(rho - rec.eigenvalue) < 1e-7 * (1.0 + std::abs(rho)));
                }
            }
        }
    }
}

TEST_CASE("cycles are covariant under conjugation") {
    Rng rng(29);
    for (int trial = 0; trial < 5; ++trial) {
        auto g = random_map(rng);
        auto m = random_mobius(rng);
        auto h = g.conjugate(m);
        for (int n : {2, 3}) {
            auto gcyc = cycles(g, n);
            auto hcyc = cycles(h, n);
            REQUIRE(gcyc.size() == hcyc.size());
            for (const auto& rec : gcyc) {
                bool matched = false;
                for (const auto& hrec : hcyc) {
                    int hits = 0;
                    for (const auto& p : rec.points) {
                        SpherePoint ip = m.apply(p);
                        for (const auto& q : hrec.points)
                            if (chordal(ip, q) < 1e-5) {
                                ++hits;
                                break;
                            }
                    }
                    if (hits == n) {
                        matched = true;
                        CHECK(std::abs(rec.eigenvalue - hrec.eigenvalue) <
                              1e-6 * (1.0 + std::abs(rec.eigenvalue)));
                        break;
                    }
                }
                CHECK(matched);
            }
        }
    }
}

TEST_CASE("period bounds are enforced") {
    auto sq = RationalMap2::polynomial(1.0, 0.0, 0.0);
    CHECK_THROWS_AS(periodic_points(sq, 13), Error);
    CHECK_THROWS_AS(periodic_points(sq, 0), Error);
}

TEST_CASE("infinity participates in cycles") {
    // 1/z^2 swaps 0 and infinity: a superattracting 2-cycle
    RationalMap2 inv2({0.0, 0.0, 1.0, 1.0, 0.0, 0.0});
    auto cyc = cycles(inv2, 2);
    REQUIRE(cyc.size() == 1);
    bool has_inf = false, has_zero = false;
    for (const auto& p : cyc[0].points) {
        if (p.is_inf())
            has_inf = true;
        else if (std::abs(p.z) < 1e-9)
            has_zero = true;
    }
    CHECK(has_inf);
    CHECK(has_zero);
    CHECK(std::abs(cyc[0].eigenvalue) < 1e-9);
}

TEST_CASE("census: basilica has two superattracting cycles") {
    auto bas = RationalMap2::polynomial(1.0, 0.0, -1.0);
    auto census = nonrepelling_census(bas, 3);
    REQUIRE(census.size() == 2);
    for (const auto& rec : census) {
        CHECK(std::abs(rec.eigenvalue) < 1e-9);
        CHECK(rec.cls == PointClass::Superattracting);
    }
    std::vector<int> periods;
    for (const auto& rec : census) periods.push_back(rec.period);
    std::sort(periods.begin(), periods.end());
    CHECK(periods == std::vector<int>{1, 2});
}

TEST_CASE("census: parabolic fixed point of z^2 + 1/4") {
    auto g = RationalMap2::polynomial(1.0, 0.0, 0.25);
    auto census = nonrepelling_census(g, 2);
    bool found = false;
    for (const auto& rec : census)
        if (rec.period == 1 && std::abs(rec.eigenvalue - 1.0) < 1e-9) found = true;
    CHECK(found);
}

TEST_CASE("census size respects the Fatou-Shishikura bound on random maps") {
    Rng rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        auto g = random_map(rng);
        CHECK(nonrepelling_census(g, 4).size() <= 2);
    }
}

TEST_CASE("cycle record serialization") {
    auto bas = RationalMap2::polynomial(1.0, 0.0, -1.0);
    auto cyc = cycles(bas, 2);
    REQUIRE(!cyc.empty());
    std::string j = cycle_record_json(cyc[0]);
    CHECK(j.find("\"period\":2") != std::string::npos);
    CHECK(j.find("\"eigenvalue\"") != std::string::npos);
}
