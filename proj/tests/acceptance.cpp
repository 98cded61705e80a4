// Acceptance suite: runs every acceptance criterion at its stated
// tolerance and prints one PASS/FAIL line per criterion.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "qrm/cycle_solver.hpp"
#include "qrm/degeneration.hpp"
#include "qrm/local_invariants.hpp"
#include "qrm/moduli.hpp"
#include "qrm/per_curves.hpp"
#include "qrm/render.hpp"

using namespace qrm;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("criterion %2d: %s — %s\n", criterion, pass ? "PASS" : "FAIL", detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// independent root oracle for c^3 + 2c^2 + c + 1 (Durand-Kerner)
std::vector<Complex> cubic_oracle_roots() {
    std::vector<Complex> coeffs = {Complex(1.0), Complex(1.0), Complex(2.0), Complex(1.0)};
    auto eval = [&](Complex z) {
        Complex acc = 0.0;
        for (size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
        return acc;
    };
    std::vector<Complex> roots = {Complex(0.4, 0.9), Complex(-0.6, 0.7), Complex(0.2, -1.1)};
    for (int it = 0; it < 400; ++it)
        for (size_t k = 0; k < 3; ++k) {
            Complex denom = 1.0;
            for (size_t j = 0; j < 3; ++j)
                if (j != k) denom *= roots[k] - roots[j];
            roots[k] -= eval(roots[k]) / denom;
        }
    return roots;
}

void criteria_1_and_2() {
    auto start = std::chrono::steady_clock::now();
    Rng rng(20260808);
    double max_index_residual = 0.0, max_abc = 0.0;
    bool mult_ok = true;
    for (int trial = 0; trial < 500; ++trial) {
        auto g = random_map(rng);
        auto audit = index_sum_audit(g);
        max_index_residual = std::max(max_index_residual, audit.residual);
        if (audit.mult_sum != 3) mult_ok = false;
        max_abc = std::max(max_abc, eigen_triple(g).abc_residual());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report(1, mult_ok && max_index_residual < 1e-8 && secs < 30.0,
           "500 maps: max |sum ind - 1| = " + fmt(max_index_residual) +
               ", mult sums all 3, runtime " + fmt(secs) + " s");
    report(2, max_abc < 1e-9, "max |abc residual| = " + fmt(max_abc));
}

void criterion_3() {
    auto zz = RationalMap2::polynomial(1.0, 1.0, 0.0);  // z + z^2
    int m0 = mult_contour(zz, SpherePoint::finite(0.0));
    Complex i0 = ind_contour(zz, SpherePoint::finite(0.0));
    int mg = mult_contour(RationalMap2::g_family(0.0), SpherePoint::infinity());
    Complex ig = ind_contour(RationalMap2::g_family(2.0), SpherePoint::infinity());
    bool ok = (m0 == 2) && std::abs(i0) < 1e-8 && (mg == 3) && std::abs(ig - 0.75) < 1e-8;
    report(3, ok,
           "mult(z+z^2,0)=" + std::to_string(m0) + ", |ind|=" + fmt(std::abs(i0)) +
               ", mult(G_0,inf)=" + std::to_string(mg) + ", ind(G_2,inf)=" + fmt(ig.real()));
}

void criterion_4() {
    bool ok = true;
    std::string detail;
    const GaussianRational one{1};
    // degrees
    GaussianRational rho_probe(3, 7, 1, 5);
    for (int n = 1; n <= 3; ++n)
        if (per_curve(n, rho_probe).degree() != int(d_of_n(n))) ok = false;

    // restrictions to the line at infinity for ten exact rho
    std::vector<GaussianRational> rhos = {GaussianRational(0),
                                          one,
                                          GaussianRational(-1),
                                          GaussianRational(2),
                                          GaussianRational(-3),
                                          GaussianRational(1, 2, 0, 1),
                                          GaussianRational(-5, 7, 0, 1),
                                          GaussianRational(0, 1, 1, 1),
                                          GaussianRational(1, 1, 1, 1),
                                          GaussianRational(3, 4, -2, 5)};
    for (const auto& rho : rhos) {
        auto c2 = intersect_at_infinity(per_curve(2, rho));
        bool here = c2.points.size() == 1 && c2.points[0].exact && c2.points[0].multiplicity == 1 &&
                    c2.points[0].ideal_label == std::make_pair(1, 2);
        auto c3 = intersect_at_infinity(per_curve(3, rho));
        bool half = false, third = false;
        for (const auto& pt : c3.points) {
            if (pt.ideal_label == std::make_pair(1, 2) && pt.multiplicity == 1 && pt.exact)
                half = true;
            if (pt.ideal_label == std::make_pair(1, 3) && pt.multiplicity == 2 && pt.exact)
                third = true;
        }
        if (!(here && half && third && c3.total() == 3)) ok = false;
    }

    // Per_3(1) = -Per_2(-3) * Per_1(w) Per_1(conj w), exactly
    TriQ xy = TriQ::X() + TriQ::Y();
    TriQ cyclotomic = TriQ::W() * TriQ::W() * GaussianRational(9) -
                      TriQ::W() * xy * GaussianRational(3) + xy * xy;
    TriQ lhs = per_curve(3, one).exact_poly();
    TriQ rhs = (TriQ() - per_curve(2, GaussianRational(-3)).exact_poly()) * cyclotomic;
    if (!(lhs == rhs)) ok = false;

    // tangency: Per_2(-3) . Per_3(rho) = 3 * infinity_{1/2}
    for (const GaussianRational& rho :
         {GaussianRational(0), GaussianRational(2), GaussianRational(0, 1, 1, 1)}) {
        auto cyc = intersect(per_curve(2, GaussianRational(-3)), per_curve(3, rho));
        bool here = cyc.points.size() == 1 && cyc.points[0].multiplicity == 3 &&
                    cyc.points[0].ideal_label == std::make_pair(1, 2);
        if (!here) ok = false;
    }

    // Bezout totals across tested pairs
    for (size_t i = 0; i < rhos.size(); i += 3) {
        const auto& r1 = rhos[i];
        const auto& r2 = rhos[(i + 4) % rhos.size()];
        if (intersect(per_curve(1, r1), per_curve(2, r2)).total() != 1) ok = false;
        if (intersect(per_curve(1, r1), per_curve(3, r2)).total() != 3) ok = false;
        if (intersect(per_curve(2, r1), per_curve(3, r2)).total() != 3) ok = false;
    }
    if (intersect(per_curve(3, GaussianRational(0)), per_curve(3, GaussianRational(2))).total() !=
        9)
        ok = false;
    report(4, ok, "exact degrees, restrictions, factorization, tangency and Bezout totals");
}

void criterion_5() {
    bool ok = true;
    // the point (2,-4) of Per_1(0) . Per_2(0)
    auto res = from_moduli({Complex(2.0), Complex(-4.0)});
    double fixed_rho = 1e9;
    for (const auto& fp : res.map.fixed_points())
        fixed_rho = std::min(fixed_rho, std::abs(fp.eigenvalue));
    auto two_cycles = cycles(res.map, 2);
    double cyc_rho = 1e9;
    for (const auto& rec : two_cycles) cyc_rho = std::min(cyc_rho, std::abs(rec.eigenvalue));
    if (!(fixed_rho < 1e-8 && cyc_rho < 1e-8)) ok = false;

    // the three points of Per_1(0) . Per_3(0)
    auto cyc = intersect(per_curve(1, GaussianRational(0)), per_curve(3, GaussianRational(0)));
    auto oracle = cubic_oracle_roots();
    int matched = 0;
    double worst3 = 1e9;
    for (const auto& pt : cyc.points) {
        Complex X = pt.coords[1] / pt.coords[0];
        Complex Y = pt.coords[2] / pt.coords[0];
        bool near = false;
        for (const auto& c : oracle)
            if (std::abs(Y - 4.0 * c) < 1e-10 * (1.0 + std::abs(4.0 * c))) near = true;
        if (near && std::abs(X - 2.0) < 1e-9) ++matched;
        auto rec3 = from_moduli({X, Y});
        double rho3 = 1e9;
        for (const auto& r : cycles(rec3.map, 3)) rho3 = std::min(rho3, std::abs(r.eigenvalue));
        worst3 = std::min(worst3, rho3);
        if (rho3 > 1e-6) ok = false;
    }
    if (matched != 3) ok = false;
    report(5, ok,
           "(2,-4) superattracting both (" + fmt(fixed_rho) + ", " + fmt(cyc_rho) +
               "); 3 points of Per_1(0).Per_3(0) match the cubic oracle, 3-cycle |rho| <= " +
               fmt(worst3));
}

void criterion_6() {
    std::vector<long long> expect = {1, 1, 3, 6, 15, 27, 63, 120, 252, 495};
    bool ok = true;
    for (int n = 1; n <= 10; ++n)
        if (d_of_n(n) != expect[size_t(n - 1)]) ok = false;
    GaussianRational rho(2, 3, 1, 7);
    for (int n = 1; n <= 3; ++n)
        if (per_curve(n, rho).degree() != int(d_of_n(n))) ok = false;
    report(6, ok, "d(1..10) exact; curve degrees agree for n <= 3");
}

void criteria_7_and_8() {
    DegenerationPath path(1, 2, 1.0);
    double e4 = limit_error(path, 1e-4, 1.0);
    double e6 = limit_error(path, 1e-6, 1.0);
    double ratio = e4 / e6;
    bool sup_ok = e4 < 0.05;
    bool ratio_ok = ratio >= 5.0 && ratio <= 20.0;
    std::string note = "sup(1e-4) = " + fmt(e4) + " < 0.05 " + (sup_ok ? "ok" : "violated") +
                       "; ratio = " + fmt(ratio) + (ratio_ok ? " in [5,20]" : " outside [5,20]");
    if (!ratio_ok) {
        DegenerationPath generic(1, 2, 0.5);
        double g4 = limit_error(generic, 1e-4, 1.0), g6 = limit_error(generic, 1e-6, 1.0);
        note += " — unattainable here: tau=1 makes delta = q tau exactly, so the error is O(eps)"
                "; the generic sqrt(eps) rate shows at tau=0.5 (ratio " +
                fmt(g4 / g6) + ")";
    }
    report(7, sup_ok && ratio_ok, note);

    auto rep = index_limit(path, 1e-4);
    bool ok8 = std::abs(rep.S - Complex(0.5)) < 1e-3;
    report(8, ok8,
           "S(1e-4) = " + fmt(rep.S.real()) + ", |S - (1 - q/T^2)| = " +
               fmt(std::abs(rep.S - rep.limit_rederived)) +
               "; printed limit 1 - 1/T^2 = " + fmt(rep.limit_printed.real()) +
               " differs by " + fmt(std::abs(rep.S - rep.limit_printed)) + " (reported)");
}

void criterion_9() {
    DegenerationPath path(1, 2, 0.5);
    auto rep = track_cycles(path, {1e-6}, 2);
    bool near_zeta = false, escaping = false, rho_ok = false;
    if (!rep.stages.empty() && !rep.stages[0].cycles.empty()) {
        const auto& cyc = rep.stages[0].cycles[0];
        for (const auto& p : cyc.points) {
            if (!p.is_inf() && std::abs(p.z - Complex(-1.0)) < 0.05) near_zeta = true;
            if (p.is_inf() || std::abs(p.z) > 1e3) escaping = true;
        }
        rho_ok = std::abs(cyc.eigenvalue) < 0.05;
    }
    report(9, near_zeta && escaping && rho_ok,
           "2-cycle point near -1, partner beyond 1e3, |rho| < 0.05");
}

void criterion_10() {
    DegenerationPath path(1, 2, 1.0);
    int count = q_cycle_count(path, 1e-6, 10.0);
    report(10, count == 4, "argument-principle count = " + std::to_string(count));
}

void criterion_11() {
    Rng rng(77);
    int worst = 0;
    bool ok = true;
    for (int trial = 0; trial < 200; ++trial) {
        auto g = random_map(rng);
        auto rep = fs_audit(g, 6);
        worst = std::max(worst, rep.weighted_count);
        if (rep.violation) ok = false;
    }
    report(11, ok, "200 maps, periods <= 6: max weighted census = " + std::to_string(worst));
}

void criterion_12() {
    auto job = RenderJob::gk_default();
    job.resolution = 64;
    job.max_iter = 1500;
    auto r1 = render(job);
    auto r2 = render(job);
    bool identical = ppm_bytes(r1) == ppm_bytes(r2);

    bool symmetric = true;
    int R = job.resolution;
    auto at = [&](int i, int j) {
        size_t base = (size_t(j) * size_t(R) + size_t(i)) * 3;
        return std::array<std::uint8_t, 3>{r1.rgb[base], r1.rgb[base + 1], r1.rgb[base + 2]};
    };
    for (int j = 0; j < R && symmetric; ++j)
        for (int i = 0; i < R; ++i)
            if (at(i, j) != at(R - 1 - i, R - 1 - j) || at(i, j) != at(i, R - 1 - j)) {
                symmetric = false;
                break;
            }

    auto job2 = RenderJob::per2_default();
    job2.resolution = 64;
    job2.max_iter = 1500;
    auto slice = render(job2);
    bool hist_ok = slice.histogram.count("D(1,2)") > 0 && slice.histogram.count("D(2,3)") > 0;

    report(12, identical && symmetric && hist_ok,
           std::string("bit-identical renders ") + (identical ? "ok" : "violated") +
               "; symmetries " + (symmetric ? "ok" : "violated") + "; slice histogram D(1,2)=" +
               std::to_string(slice.histogram.count("D(1,2)") ? slice.histogram.at("D(1,2)") : 0) +
               ", D(2,3)=" +
               std::to_string(slice.histogram.count("D(2,3)") ? slice.histogram.at("D(2,3)") : 0));
}

}  // namespace

int main() {
    criteria_1_and_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criteria_7_and_8();
    criterion_9();
    criterion_10();
    criterion_11();
    criterion_12();
    std::printf("%d of 12 criteria passed\n", 12 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
