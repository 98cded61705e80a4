#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "qrm/cli.hpp"
#include "qrm/cycle_solver.hpp"
#include "qrm/moduli.hpp"
#include "qrm/per_curves.hpp"
#include "qrm/render.hpp"

using namespace qrm;

TEST_CASE("classification of the worked examples") {
    // basilica: superattracting fixed infinity and a superattracting
    // 2-cycle, distinct attractors -> D with periods (1, 2)
    auto pc = classify_parameter(RationalMap2::polynomial(1.0, 0.0, -1.0), 4000, 1e-8);
    CHECK(pc.tag == CombinedTag::D);
    CHECK(pc.periods[0] == 1);
    CHECK(pc.periods[1] == 2);

    // the two finite classes of Per_2(0) . Per_3(0) are D with periods (2, 3)
    Complex X0(-2.0, 4.0 * std::sqrt(3.0) / 3.0);
    for (Complex X : {X0, std::conj(X0)}) {
        auto res = from_moduli({X, -2.0 * X});
        auto p23 = classify_parameter(res.map, 4000, 1e-8);
        CHECK(p23.tag == CombinedTag::D);
        CHECK(p23.periods[0] == 2);
        CHECK(p23.periods[1] == 3);
    }

    // G_0: both critical orbits drift parabolically, no attracting cycle
    auto p0 = classify_parameter(RationalMap2::g_family(0.0), 4000, 1e-8);
    CHECK(p0.tag == CombinedTag::Escape);
    CHECK(p0.fates[0].kind == CritFateKind::ParabolicDrift);
    CHECK(p0.fates[1].kind == CritFateKind::ParabolicDrift);

    // G_1: the superattracting fixed point at -1 is detected
    auto p1 = classify_parameter(RationalMap2::g_family(1.0), 4000, 1e-8);
    bool super_found = false;
    for (const auto& f : p1.fates)
        if (f.kind == CritFateKind::Cycle && f.period == 1 &&
            chordal(f.cycle[0], Complex(-1.0)) < 1e-6)
            super_found = true;
    CHECK(super_found);
}

TEST_CASE("gk render is deterministic and symmetric") {
    auto job = RenderJob::gk_default();
    job.resolution = 32;
    job.max_iter = 1200;
    auto r1 = render(job);
    auto r2 = render(job);
    CHECK(ppm_bytes(r1) == ppm_bytes(r2));

    // kappa -> -kappa: pixel (i, j) matches (R-1-i, R-1-j)
    int R = job.resolution;
    auto at = [&](const RenderResult& r, int i, int j) {
        size_t base = (size_t(j) * size_t(R) + size_t(i)) * 3;
        return std::array<std::uint8_t, 3>{r.rgb[base], r.rgb[base + 1], r.rgb[base + 2]};
    };
    for (int j = 0; j < R; ++j)
        for (int i = 0; i < R; ++i) {
            CHECK(at(r1, i, j) == at(r1, R - 1 - i, R - 1 - j));
            // kappa -> conj(kappa): vertical mirror
            CHECK(at(r1, i, j) == at(r1, i, R - 1 - j));
        }
}

TEST_CASE("per2 slice render carries the expected hyperbolic classes") {
    auto job = RenderJob::per2_default();
    job.resolution = 48;
    job.max_iter = 1500;
    auto result = render(job);
    CHECK(result.histogram.count("D(1,2)"));
    CHECK(result.histogram.count("D(2,3)"));

    // empirical boundedness report: the two-attractor pixels with both
    // periods above 1 sit inside the window
    CHECK(result.d_nonfixed_pixels > 0);
    CHECK(result.d_nonfixed_max_param <= job.width * std::sqrt(0.5) + 1e-9);

    // every sampled slice map detects the superattracting 2-cycle
    for (int k = 0; k < 8; ++k) {
        int i = (k * 13) % job.resolution;
        int j = (k * 29) % job.resolution;
        Complex X = pixel_parameter(job, i, j);
        FromModuliResult res = [&] {
            try {
                return from_moduli({X, -2.0 * X});
            } catch (const Error&) {
                return from_moduli({Complex(2.0), Complex(-4.0)});
            }
        }();
        CHECK(member(res.map, 2, Complex(0.0), 1e-6));
        auto pc = classify_parameter(res.map, 2000, 1e-8);
        if (pc.tag == CombinedTag::Undecided) continue;
        bool has_period2 = false;
        for (const auto& f : pc.fates) {
            if (f.kind != CritFateKind::Cycle || f.period != 2) continue;
            Complex rho = cycle_eigenvalue(res.map, f.cycle);
            if (std::abs(rho) < 1e-6) has_period2 = true;
        }
        CHECK(has_period2);
    }
}

TEST_CASE("ppm framing") {
    auto job = RenderJob::gk_default();
    job.resolution = 8;
    job.max_iter = 300;
    auto result = render(job);
    std::string bytes = ppm_bytes(result);
    CHECK(bytes.rfind("P6\n8 8\n255\n", 0) == 0);
    CHECK(bytes.size() == std::string("P6\n8 8\n255\n").size() + 8 * 8 * 3);
    std::string sidecar = job_json(job, result);
    CHECK(sidecar.find("\"plane\":\"gk-kappa\"") != std::string::npos);
    CHECK(sidecar.find("histogram") != std::string::npos);
}

TEST_CASE("cli surface") {
    std::stringstream out;
    int rc = cli_main({"per", "intersect", "--n1", "1", "--rho1", "0", "--n2", "2", "--rho2", "0"},
                      out);
    CHECK(rc == 0);
    CHECK(out.str().find("\"X\":[\"2\",\"0\"]") != std::string::npos);
    CHECK(out.str().find("\"Y\":[\"-4\",\"0\"]") != std::string::npos);

    std::stringstream out2;
    rc = cli_main({"degen", "--p", "1", "--q", "2", "--tau", "1", "--eps", "1e-4"}, out2);
    CHECK(rc == 0);
    CHECK(out2.str().find("0.5000125") != std::string::npos);

    std::stringstream out3;
    rc = cli_main({"moduli", "--alpha", "0.5", "--beta", "0.25"}, out3);
    CHECK(rc == 0);
    CHECK(out3.str().find("\"X\"") != std::string::npos);

    // validation failures exit with 2
    std::stringstream out4;
    rc = cli_main({"per", "intersect", "--n1", "2", "--rho1", "0", "--n2", "2", "--rho2", "0"},
                  out4);
    CHECK(rc == 2);  // common component
    std::stringstream out5;
    rc = cli_main({"fix", "--alpha", "1", "--beta", "0.5"}, out5);
    CHECK(rc == 2);  // inadmissible f form
    std::stringstream out6;
    rc = cli_main({"cycles", "--poly", "1;0;0", "--n", "44"}, out6);
    CHECK(rc == 2);  // period cap

    std::stringstream out7;
    rc = cli_main({"audit", "--poly", "1;0;-1", "--nmax", "3"}, out7);
    CHECK(rc == 0);
    CHECK(out7.str().find("\"violation\":false") != std::string::npos);

    std::stringstream out8;
    rc = cli_main({"member", "--poly", "1;0;-1", "--n", "2", "--rho", "0"}, out8);
    CHECK(rc == 0);
    CHECK(out8.str().find("\"member\":true") != std::string::npos);

    std::stringstream out9;
    rc = cli_main({"convert", "--from", "f", "--alpha", "-1", "--beta", "0"}, out9);
    CHECK(rc == 0);
    CHECK(out9.str().find("\"gamma\":[3.0,") != std::string::npos);

    std::stringstream outa;
    rc = cli_main({"nonsense"}, outa);
    CHECK(rc == 2);
}

TEST_CASE("cli file outputs") {
    std::string json_path = "/tmp/qrm_test_job.json";
    std::string ppm_path = "/tmp/qrm_test_img.ppm";
    std::remove(json_path.c_str());
    std::remove(ppm_path.c_str());
    std::stringstream out;
    int rc = cli_main({"--out", json_path, "render", "--plane", "gk", "--res", "8", "--max-iter",
                       "300", "--image", ppm_path},
                      out);
    CHECK(rc == 0);
    std::ifstream jf(json_path);
    REQUIRE(jf.good());
    std::stringstream jbuf;
    jbuf << jf.rdbuf();
    CHECK(jbuf.str().find("\"histogram\"") != std::string::npos);
    std::ifstream pf(ppm_path, std::ios::binary);
    REQUIRE(pf.good());
    std::string magic(2, '\0');
    pf.read(magic.data(), 2);
    CHECK(magic == "P6");
    std::remove(json_path.c_str());
    std::remove(ppm_path.c_str());
}
