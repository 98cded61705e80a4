#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qrm/rational_map.hpp"

namespace qrm {

enum class CritFateKind { Cycle, ParabolicDrift, Undecided };

struct CritFate {
    CritFateKind kind = CritFateKind::Undecided;
    int period = 0;
    std::vector<SpherePoint> cycle;
    int entry_step = 0;
    int entry_phase = 0;
};

enum class CombinedTag { B, C, D, E, Escape, Mixed, Undecided };

const char* combined_tag_name(CombinedTag t);

/// Critical-orbit classification of one parameter. The B/C/E split rests
/// on the first-entry-step heuristic and is marked as such.
struct PixelClass {
    std::array<CritFate, 2> fates;
    CombinedTag tag = CombinedTag::Undecided;
    std::array<int, 2> periods{0, 0};  // sorted, zero when absent
    bool heuristic_bc = false;
    std::string histogram_key() const;
};

PixelClass classify_parameter(const RationalMap2& g, int max_iter, double tol);

struct RenderJob {
    enum class Plane { GkKappa, Per2ZeroSlice };
    Plane plane = Plane::GkKappa;
    Complex center{0.0};
    double width = 8.0;  // 12.0 is the Per_2(0) slice default
    int resolution = 512;
    int max_iter = 20000;
    double tol = 1e-8;

    static RenderJob gk_default();
    static RenderJob per2_default();
};

struct RenderResult {
    int resolution = 0;
    std::vector<std::uint8_t> rgb;  // 3 bytes per pixel, row-major from the top
    std::map<std::string, long> histogram;
    // empirical boundedness report: parameters of pixels classified D with
    // both periods above 1 (the two-attractor, no-fixed-attractor maps)
    long d_nonfixed_pixels = 0;
    double d_nonfixed_max_param = 0.0;
};

RenderResult render(const RenderJob& job);

/// Parameter value of the pixel center (i across, j down).
Complex pixel_parameter(const RenderJob& job, int i, int j);

std::string ppm_bytes(const RenderResult& result);
std::string job_json(const RenderJob& job, const RenderResult& result);

}  // namespace qrm
