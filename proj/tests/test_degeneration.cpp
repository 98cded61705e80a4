#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "qrm/degeneration.hpp"
#include "qrm/errors.hpp"

using namespace qrm;

namespace {

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    double mx = 0, my = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= double(xs.size());
    my /= double(xs.size());
    double num = 0, den = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        num += (xs[i] - mx) * (ys[i] - my);
        den += (xs[i] - mx) * (xs[i] - mx);
    }
    return num / den;
}

}  // namespace

TEST_CASE("G map data") {
    auto g2 = g_map(2.0);
    REQUIRE(g2.finite_fixed.has_value());
    CHECK(std::abs(*g2.finite_fixed - Complex(-0.5)) < 1e-12);
    CHECK(std::abs(g2.finite_eigenvalue - Complex(-3.0)) < 1e-12);
    CHECK(std::abs(g2.index_at_infinity - Complex(0.75)) < 1e-8);
    // the finite fixed point really is fixed with that multiplier
    CHECK(chordal(g2.map.evaluate(SpherePoint::finite(-0.5)), Complex(-0.5)) < 1e-12);
    CHECK(std::abs(g2.map.multiplier(SpherePoint::finite(-0.5)) - Complex(-3.0)) < 1e-12);

    auto g1 = g_map(1.0);
    CHECK(std::abs(*g1.finite_fixed - Complex(-1.0)) < 1e-12);
    CHECK(std::abs(g1.finite_eigenvalue) < 1e-12);  // superattracting

    auto g0 = g_map(0.0);
    CHECK(!g0.finite_fixed.has_value());
    auto fps = g0.map.fixed_points();
    REQUIRE(fps.size() == 1);
    CHECK(fps[0].multiplicity == 3);

    // 1 - 1/T^2 at a complex T
    Complex t(1.3, -0.4);
    auto gt = g_map(t);
    CHECK(std::abs(gt.index_at_infinity - (1.0 - 1.0 / (t * t))) < 1e-8);
}

TEST_CASE("path identities") {
    DegenerationPath path(1, 2, 1.0);
    auto pt = path.at(1e-4);
    // alpha = -1.01, beta = -0.99, gamma = 40000 for this path position
    CHECK(std::abs(pt.alpha - Complex(-1.01)) < 1e-12);
    CHECK(std::abs(pt.beta - Complex(-0.99)) < 1e-12);
    CHECK(std::abs(pt.gamma - Complex(40000.0)) < 1e-7);
    // 1 - alpha beta = eps to rounding
    CHECK(std::abs(1.0 - pt.alpha * pt.beta - Complex(1e-4)) < 1e-15);
    // gamma eps = 2 - alpha - beta to rounding
    CHECK(std::abs(pt.gamma * 1e-4 - (2.0 - pt.alpha - pt.beta)) < 1e-12);
    // eigenvalue relation
    Complex a = pt.alpha, b = pt.beta, c = pt.gamma;
    CHECK(std::abs(a * b * c - (a + b + c) + 2.0) < 1e-10);

    // alpha - omega = omega tau sqrt(eps) within the stated bound
    DegenerationPath p3(1, 3, Complex(0.7, 0.2));
    for (double eps : {1e-2, 1e-4, 1e-6}) {
        auto s = p3.at(eps);
        Complex dev = (s.alpha - p3.omega()) / std::sqrt(eps) - p3.omega() * p3.tau();
        double bound = 2.0 * (std::norm(p3.tau()) + 1.0) * std::sqrt(eps);
        CHECK(std::abs(dev) <= bound);
    }
}

TEST_CASE("path admissibility") {
    CHECK_THROWS_AS(DegenerationPath(1, 1, 1.0), Error);
    CHECK_THROWS_AS(DegenerationPath(2, 4, 1.0), Error);
    DegenerationPath path(1, 2, 1.0);
    CHECK_THROWS_AS(path.at(0.02), Error);
    CHECK_THROWS_AS(path.at(0.0), Error);
    CHECK_THROWS_AS(path.at(-1e-4), Error);
}

TEST_CASE("the f and F forms at a path position agree as maps") {
    DegenerationPath path(1, 2, 1.0);
    auto pt = path.at(1e-4);
    // F = phi^{-1} f phi was already exercised in the moduli tests; here
    // check the headline: F's gamma matches the path gamma and delta = q tau
    // exactly at tau = 1 (the (1+s)^2 - (1-eps) cancellation)
    CHECK(std::abs(pt.F.gamma - pt.gamma) < 1e-9 * std::abs(pt.gamma));
    CHECK(std::abs(pt.F.delta - Complex(2.0)) < 1e-12);
}

TEST_CASE("limit of F^q toward G_{q tau}") {
    DegenerationPath path(1, 2, 1.0);
    double e4 = limit_error(path, 1e-4, 1.0);
    double e6 = limit_error(path, 1e-6, 1.0);
    CHECK(e4 < 0.05);
    CHECK(e4 > 0.0);
    CHECK(e6 < e4);
    // tau = 1 makes delta = q tau exact, so the sqrt(eps) error term
    // cancels and the rate improves to O(eps): the ratio sits near 100
    CHECK(e4 / e6 > 50.0);
    CHECK(e4 / e6 < 200.0);

    // generic tau shows the sqrt(eps) rate
    DegenerationPath generic(1, 2, 0.5);
    double g4 = limit_error(generic, 1e-4, 1.0);
    double g6 = limit_error(generic, 1e-6, 1.0);
    CHECK(g4 / g6 > 5.0);
    CHECK(g4 / g6 < 20.0);
    std::vector<double> xs, ys;
    for (double eps : {1e-3, 1e-4, 1e-5, 1e-6}) {
        xs.push_back(std::log(eps));
        ys.push_back(std::log(limit_error(generic, eps, 1.0)));
    }
    double slope = fit_slope(xs, ys);
    CHECK(slope > 0.35);
    CHECK(slope < 0.65);

    // tau = 0: F^q -> G_0
    DegenerationPath zero(1, 2, 0.0);
    CHECK(limit_error(zero, 1e-4, 1.0) < 0.05);

    // an impossible margin removes every test point
    CHECK_THROWS_AS(limit_error(path, 1e-4, 1.0, 64, 2.5), Error);
    CHECK_THROWS_AS(limit_error(path, 1e-4, 0.1), Error);  // radius out of range
}

TEST_CASE("index sum limit") {
    DegenerationPath path(1, 2, 1.0);
    auto rep = index_limit(path, 1e-4);
    CHECK(std::abs(rep.S - Complex(0.5)) < 1e-3);
    CHECK(std::abs(rep.limit_printed - Complex(0.75)) < 1e-12);
    CHECK(std::abs(rep.limit_rederived - Complex(0.5)) < 1e-12);
    // S converges to the rederived limit, not the printed one
    auto finer = index_limit(path, 1e-6);
    CHECK(std::abs(finer.S - rep.limit_rederived) < std::abs(rep.S - rep.limit_rederived));
    CHECK(std::abs(finer.S - rep.limit_rederived) < 1e-5);
    CHECK(std::abs(finer.S - rep.limit_printed) > 0.2);

    // tau = 2: limit 1 - 2/16 = 0.875 (and not the printed 1 - 1/16)
    DegenerationPath tau2(1, 2, 2.0);
    auto rep2 = index_limit(tau2, 1e-6);
    CHECK(std::abs(rep2.S - Complex(0.875)) < 5e-4);
    CHECK(std::abs(rep2.S - rep2.limit_printed) > 5e-2);

    // the second-order path term does not move the limit
    DegenerationPath bent(1, 2, 1.0, Complex(0.7, 0.3));
    auto rep3 = index_limit(bent, 1e-5);
    CHECK(std::abs(rep3.S - Complex(0.5)) < 1e-4);
    auto rep3f = index_limit(bent, 1e-7);
    CHECK(std::abs(rep3f.S - Complex(0.5)) < std::abs(rep3.S - Complex(0.5)));
}

TEST_CASE("escape exponent of alpha toward omega") {
    DegenerationPath path(2, 3, Complex(0.8, -0.3));
    std::vector<double> xs, ys;
    for (double eps : {1e-3, 1e-4, 1e-5, 1e-6, 1e-7}) {
        auto pt = path.at(eps);
        xs.push_back(std::log(eps));
        ys.push_back(std::log(std::abs(pt.alpha - path.omega())));
    }
    CHECK(fit_slope(xs, ys) >= 0.45);
}

TEST_CASE("cycle tracking to the finite fixed point of G_1") {
    // q = 2, tau = 0.5 (T = 1): the unique 2-cycle has one point near the
    // superattracting zeta = -1 and one escaping, eigenvalue near 0
    DegenerationPath path(1, 2, 0.5);
    auto rep = track_cycles(path, {1e-6}, 2);
    REQUIRE(rep.stages.size() == 1);
    REQUIRE(rep.stages[0].cycles.size() == 1);
    const auto& cyc = rep.stages[0].cycles[0];
    bool near_zeta = false, escaping = false;
    for (const auto& p : cyc.points) {
        if (!p.is_inf() && std::abs(p.z - Complex(-1.0)) < 0.05) near_zeta = true;
        if (p.is_inf() || std::abs(p.z) > 1e3) escaping = true;
    }
    CHECK(near_zeta);
    CHECK(escaping);
    CHECK(std::abs(cyc.eigenvalue) < 0.05);
    CHECK(rep.alternative == LimitAlternative::FiniteCycleWithInfinity);
}

TEST_CASE("cycle tracking at tau = 1: repelling limits") {
    DegenerationPath path(1, 2, 1.0);
    // n = 2: eigenvalue tends to 1 - T^2 = -3
    auto rep2 = track_cycles(path, {1e-5}, 2);
    REQUIRE(rep2.stages[0].cycles.size() == 1);
    CHECK(std::abs(rep2.stages[0].cycles[0].eigenvalue - Complex(-3.0)) < 1e-2);

    // n = 4: the bounded 4-cycle converges onto the 2-cycle of G_2 plus
    // infinity; oracle for the G_2 cycle: roots of 2z^2 + 4z + 1
    auto rep4 = track_cycles(path, {1e-4}, 4);
    REQUIRE(rep4.stages[0].cycles.size() == 1);
    const auto& cyc = rep4.stages[0].cycles[0];
    Complex r1 = (-4.0 + std::sqrt(Complex(8.0))) / 4.0;
    Complex r2 = (-4.0 - std::sqrt(Complex(8.0))) / 4.0;
    bool saw1 = false, saw2 = false;
    int big = 0;
    for (const auto& p : cyc.points) {
        if (p.is_inf() || std::abs(p.z) > 1e3) {
            ++big;
            continue;
        }
        if (std::abs(p.z - r1) < 1e-3) saw1 = true;
        if (std::abs(p.z - r2) < 1e-3) saw2 = true;
    }
    CHECK(saw1);
    CHECK(saw2);
    CHECK(big == 2);
    // eigenvalue limit: the G_2 cycle multiplier
    Complex g1 = 1.0 - 1.0 / (r1 * r1), g2v = 1.0 - 1.0 / (r2 * r2);
    CHECK(std::abs(cyc.eigenvalue - g1 * g2v) < 1e-2);
    // the reference list carries the same cycle
    REQUIRE(rep4.g_cycles.size() == 1);
    CHECK(std::abs(rep4.g_cycles[0].eigenvalue - g1 * g2v) < 1e-9);

    CHECK_THROWS_AS(track_cycles(path, {1e-4}, 3), Error);  // q does not divide n
}

TEST_CASE("argument-principle count of fixed points of f^q") {
    DegenerationPath path(1, 2, 1.0);
    CHECK(q_cycle_count(path, 1e-6, 10.0) == 4);  // q + 2
    CHECK(q_cycle_count(path, 1e-5, 10.0) == 4);
    CHECK(q_cycle_count(path, 1e-6, 5.0) == 4);
    DegenerationPath bent(1, 2, Complex(1.0, 0.5));
    CHECK(q_cycle_count(bent, 1e-6, 10.0) == 4);

    // q = 3: each excluded disc holds one point of the distinguished
    // 3-cycle, and the disc at conj(omega) also captures a point of the
    // second cycle hiding by the local pole, so the count is 6 rather
    // than the q + 2 = 5 the bookkeeping in the source suggests
    DegenerationPath p3(1, 3, 1.0);
    CHECK(q_cycle_count(p3, 1e-6, 10.0) == 6);
    DegenerationPath p3b(1, 3, Complex(1.0, 0.5));
    CHECK(q_cycle_count(p3b, 1e-6, 10.0) == 6);
}

TEST_CASE("G_0 control integral") {
    CHECK(std::abs(g0_control_integral(10.0, 1) - Complex(-1.0)) < 1e-6);
    CHECK(std::abs(g0_control_integral(10.0, 2) - Complex(-1.0)) < 1e-6);
    CHECK(std::abs(g0_control_integral(5.0, 1) - Complex(-1.0)) < 1e-6);
}

TEST_CASE("single eigenvalue along a path cycle") {
    DegenerationPath path(1, 2, 1.0);
    auto pt = path.at(1e-5);
    auto cyc = cycles(pt.F.map(), 2);
    REQUIRE(cyc.size() == 1);
    for (const auto& start : cyc[0].points) {
        std::vector<SpherePoint> orbit = {start};
        SpherePoint cur = start;
        cur = pt.F.map().evaluate(cur);
        orbit.push_back(cur);
        Complex rho = cycle_eigenvalue(pt.F.map(), orbit);
        CHECK(std::abs(rho - cyc[0].eigenvalue) < 1e-7 * (1.0 + std::abs(rho)));
    }
}

TEST_CASE("extended precision pathway") {
    // eps <= 1e-8 switches the closed-form path quantities to long double
    DegenerationPath path(1, 2, 1.0);
    auto rep = index_limit(path, 1e-9);
    CHECK(std::abs(rep.S - Complex(0.5)) < 1e-4);
    double err = limit_error(path, 1e-9, 1.0);
    CHECK(err > 0.0);
    CHECK(err < 1e-4);
}

TEST_CASE("basin extent") {
    // basilica: the disk around the cycle point 0 converges comfortably
    auto bas = RationalMap2::polynomial(1.0, 0.0, -1.0);
    auto cyc = cycles(bas, 2);
    REQUIRE(cyc.size() == 1);
    double ext = basin_extent(bas, cyc[0], 0.5, 64);
    CHECK(ext > 0.2);

    // a repelling cycle is rejected
    auto sq = RationalMap2::polynomial(1.0, 0.0, 0.0);
    auto rc = cycles(sq, 2);  // eigenvalue 4
    REQUIRE(rc.size() == 1);
    CHECK_THROWS_AS((void)basin_extent(sq, rc[0], 0.5, 16), Error);

    // along the tau = 0.5 path the attracting 2-cycle point nearest 0
    // tends to zeta(G_1) = -1 rather than to 0, so its basin approaches
    // the G_1 basin instead of shrinking; the probe records that the
    // extent is nondecreasing at these positions
    DegenerationPath path(1, 2, 0.5);
    std::vector<double> exts;
    for (double eps : {1e-3, 1e-4, 1e-5}) {
        auto pt = path.at(eps);
        auto fc = cycles(pt.F.map(), 2);
        REQUIRE(fc.size() == 1);
        exts.push_back(basin_extent(pt.F.map(), fc[0], 1.0, 48));
    }
    CHECK(exts[0] > 0.0);
    CHECK(exts[0] <= exts[1]);
    CHECK(exts[1] <= exts[2]);
}
