#include "qrm/render.hpp"

#include <algorithm>

#include "json.hpp"
#include "qrm/cycle_solver.hpp"
#include "qrm/errors.hpp"
#include "qrm/moduli.hpp"

namespace qrm {

const char* combined_tag_name(CombinedTag t) {
    switch (t) {
        case CombinedTag::B: return "B";
        case CombinedTag::C: return "C";
        case CombinedTag::D: return "D";
        case CombinedTag::E: return "E";
        case CombinedTag::Escape: return "escape";
        case CombinedTag::Mixed: return "mixed";
        case CombinedTag::Undecided: return "undecided";
    }
    return "undecided";
}

std::string PixelClass::histogram_key() const {
    std::string key = combined_tag_name(tag);
    if (tag == CombinedTag::D) {
        key += "(" + std::to_string(periods[0]) + "," + std::to_string(periods[1]) + ")";
    } else if (tag == CombinedTag::B || tag == CombinedTag::C || tag == CombinedTag::E) {
        key += "(" + std::to_string(periods[0]) + ")";
    }
    return key;
}

namespace {

constexpr int kMaxDetectPeriod = 16;

CritFate follow_critical_orbit(const RationalMap2& g, const SpherePoint& crit, int max_iter,
                               double tol) {
    CritFate fate;
    const Complex lambda_inf =
        (std::abs(g.coeffs()[3]) == 0.0) ? g.multiplier(SpherePoint::infinity()) : Complex(9e9);
    const bool inf_parabolic = std::abs(lambda_inf - 1.0) < 1e-6;

    std::vector<SpherePoint> hist;
    hist.reserve(2 * kMaxDetectPeriod + 2);
    SpherePoint z = crit;
    Complex prev_inc = 0.0;
    Complex prev_z = z.is_inf() ? Complex(0.0) : z.z;
    int drift_run = 0;
    int grow_run = 0;

    for (int step = 1; step <= max_iter; ++step) {
        z = g.evaluate(z);

        // parabolic escape: additive increments stabilizing while |z| grows
        if (!z.is_inf()) {
            Complex inc = z.z - prev_z;
            bool growing = std::abs(z.z) > std::abs(prev_z);
            if (growing && std::abs(inc - prev_inc) < 1e-6 * (1.0 + std::abs(inc)) &&
                std::abs(z.z) > 2.0)
                ++drift_run;
            else
                drift_run = 0;
            // T = 0 style drift (|z| ~ sqrt(n)): shrinking increments with
            // a long monotone climb toward the parabolic point at infinity
            grow_run = growing ? grow_run + 1 : 0;
            prev_inc = inc;
            prev_z = z.z;
            if (drift_run >= 50 ||
                (inf_parabolic && grow_run >= 300 && std::abs(z.z) > 10.0)) {
                fate.kind = CritFateKind::ParabolicDrift;
                return fate;
            }
        }
        if ((z.is_inf() || std::abs(z.z) > 1e4) && inf_parabolic) {
            fate.kind = CritFateKind::ParabolicDrift;
            return fate;
        }

        hist.push_back(z);
        if (int(hist.size()) > 2 * kMaxDetectPeriod + 1) hist.erase(hist.begin());

        if (step < 2 * kMaxDetectPeriod + 8) continue;
        size_t last = hist.size() - 1;
        for (int p = 1; p <= kMaxDetectPeriod && 2 * p <= int(hist.size()); ++p) {
            if (chordal(hist[last], hist[last - size_t(p)]) > tol) continue;
            if (chordal(hist[last], hist[last - size_t(2 * p)]) > 10.0 * tol) continue;

            // candidate cycle: refine and find the minimal period
            std::vector<SpherePoint> cyc;
            SpherePoint cur = hist[last];
            for (int k = 0; k < p; ++k) {
                if (!cur.is_inf()) {
                    bool ok = false;
                    SpherePoint ref = refine_periodic_point(g, cur, p, ok);
                    if (ok) cur = ref;
                }
                cyc.push_back(cur);
                cur = g.evaluate(cur);
            }
            int period = p;
            for (int d = 1; d < p; ++d) {
                if (p % d != 0) continue;
                bool repeats = true;
                for (int k = 0; k + d < p && repeats; ++k)
                    if (chordal(cyc[size_t(k)], cyc[size_t(k + d)]) > 100.0 * tol) repeats = false;
                if (repeats) {
                    period = d;
                    cyc.resize(size_t(d));
                    break;
                }
            }
            fate.kind = CritFateKind::Cycle;
            fate.period = period;
            fate.cycle = cyc;

            // entry bookkeeping for the immediate-basin heuristic
            SpherePoint replay = crit;
            for (int k = 0; k <= max_iter; ++k) {
                double best = 1e9;
                int phase = 0;
                for (size_t m = 0; m < cyc.size(); ++m) {
                    double dch = chordal(replay, cyc[m]);
                    if (dch < best) {
                        best = dch;
                        phase = int(m);
                    }
                }
                if (best < 0.05) {
                    fate.entry_step = k;
                    fate.entry_phase = phase;
                    break;
                }
                replay = g.evaluate(replay);
            }
            return fate;
        }
    }
    return fate;  // undecided
}

bool same_cycle(const CritFate& a, const CritFate& b) {
    if (a.period != b.period) return false;
    for (const auto& p : a.cycle) {
        bool found = false;
        for (const auto& q : b.cycle)
            if (chordal(p, q) < 1e-3) found = true;
        if (!found) return false;
    }
    return true;
}

}  // namespace

PixelClass classify_parameter(const RationalMap2& g, int max_iter, double tol) {
    auto crits = g.critical_points();
    PixelClass out;
    out.fates[0] = follow_critical_orbit(g, crits[0], max_iter, tol);
    out.fates[1] = follow_critical_orbit(g, crits[1], max_iter, tol);
    const CritFate &f0 = out.fates[0], &f1 = out.fates[1];

    if (f0.kind == CritFateKind::Undecided || f1.kind == CritFateKind::Undecided) {
        out.tag = CombinedTag::Undecided;
        return out;
    }
    if (f0.kind == CritFateKind::ParabolicDrift && f1.kind == CritFateKind::ParabolicDrift) {
        out.tag = CombinedTag::Escape;
        return out;
    }
    if (f0.kind != f1.kind) {
        out.tag = CombinedTag::Mixed;
        const CritFate& c = (f0.kind == CritFateKind::Cycle) ? f0 : f1;
        out.periods = {c.period, 0};
        return out;
    }

    // both captured by attracting cycles
    if (!same_cycle(f0, f1)) {
        out.tag = CombinedTag::D;
        out.periods = {std::min(f0.period, f1.period), std::max(f0.period, f1.period)};
        return out;
    }
    out.periods = {f0.period, f0.period};
    out.heuristic_bc = true;
    int lag = std::abs(f0.entry_step - f1.entry_step);
    bool both_immediate = lag < 2 * f0.period + 2;
    if (f0.period == 1)
        out.tag = both_immediate ? CombinedTag::E : CombinedTag::C;
    else
        out.tag = both_immediate ? CombinedTag::B : CombinedTag::C;
    return out;
}

RenderJob RenderJob::gk_default() {
    RenderJob job;
    job.plane = Plane::GkKappa;
    job.center = 0.0;
    job.width = 8.0;
    return job;
}

RenderJob RenderJob::per2_default() {
    RenderJob job;
    job.plane = Plane::Per2ZeroSlice;
    job.center = 0.0;
    job.width = 12.0;
    return job;
}

Complex pixel_parameter(const RenderJob& job, int i, int j) {
    double r = double(job.resolution);
    double re = job.center.real() + ((double(i) + 0.5) / r - 0.5) * job.width;
    double im = job.center.imag() + (0.5 - (double(j) + 0.5) / r) * job.width;
    return {re, im};
}

namespace {

// fixed palette; cycle tags pick a hue from the combined tag and the
// detected periods so symmetric parameters get identical bytes
const std::array<std::array<std::uint8_t, 3>, 10> kPalette = {{
    {0, 0, 0},        // undecided
    {40, 40, 60},     // escape (parabolic drift)
    {90, 60, 20},     // mixed
    {200, 60, 60},
    {60, 160, 60},
    {60, 90, 200},
    {210, 180, 40},
    {150, 60, 180},
    {40, 190, 190},
    {230, 230, 230},
}};

int palette_index(const PixelClass& pc) {
    switch (pc.tag) {
        case CombinedTag::Undecided: return 0;
        case CombinedTag::Escape: return 1;
        case CombinedTag::Mixed: return 2;
        default: break;
    }
    int tag_num = 0;
    if (pc.tag == CombinedTag::C) tag_num = 1;
    if (pc.tag == CombinedTag::D) tag_num = 2;
    if (pc.tag == CombinedTag::E) tag_num = 3;
    int period_sum = (pc.periods[0] + pc.periods[1]) % 8;
    return 3 + (tag_num * 3 + period_sum) % 7;
}

}  // namespace

RenderResult render(const RenderJob& job) {
    if (job.resolution < 1 || job.resolution > 4096)
        throw Error(ErrorCode::Validation, "resolution must be in [1, 4096]");
    if (!(job.tol > 0.0)) throw Error(ErrorCode::Validation, "tolerance must be positive");
    RenderResult result;
    result.resolution = job.resolution;
    result.rgb.assign(size_t(job.resolution) * size_t(job.resolution) * 3, 0);

    for (int j = 0; j < job.resolution; ++j) {
        for (int i = 0; i < job.resolution; ++i) {
            Complex param = pixel_parameter(job, i, j);
            PixelClass pc;
            if (job.plane == RenderJob::Plane::GkKappa) {
                pc = classify_parameter(RationalMap2::g_family(param), job.max_iter, job.tol);
            } else {
                try {
                    auto res = from_moduli({param, -2.0 * param});
                    pc = classify_parameter(res.map, job.max_iter, job.tol);
                } catch (const Error&) {
                    pc = PixelClass{};  // undecided
                }
            }
            ++result.histogram[pc.histogram_key()];
            if (pc.tag == CombinedTag::D && pc.periods[0] > 1) {
                ++result.d_nonfixed_pixels;
                result.d_nonfixed_max_param =
                    std::max(result.d_nonfixed_max_param, std::abs(param));
            }
            const auto& color = kPalette[size_t(palette_index(pc))];
            size_t base = (size_t(j) * size_t(job.resolution) + size_t(i)) * 3;
            result.rgb[base] = color[0];
            result.rgb[base + 1] = color[1];
            result.rgb[base + 2] = color[2];
        }
    }
    return result;
}

std::string ppm_bytes(const RenderResult& result) {
    std::string out = "P6\n" + std::to_string(result.resolution) + " " +
                      std::to_string(result.resolution) + "\n255\n";
    out.append(reinterpret_cast<const char*>(result.rgb.data()), result.rgb.size());
    return out;
}

std::string job_json(const RenderJob& job, const RenderResult& result) {
    nlohmann::json j;
    j["plane"] = (job.plane == RenderJob::Plane::GkKappa) ? "gk-kappa" : "per2-zero-slice";
    j["center"] = {job.center.real(), job.center.imag()};
    j["width"] = job.width;
    j["resolution"] = job.resolution;
    j["max_iter"] = job.max_iter;
    j["tol"] = job.tol;
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [key, count] : result.histogram) hist[key] = count;
    j["histogram"] = hist;
    j["d_nonfixed_pixels"] = result.d_nonfixed_pixels;
    j["d_nonfixed_max_param"] = result.d_nonfixed_max_param;
    return j.dump();
}

}  // namespace qrm
