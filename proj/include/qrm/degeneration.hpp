#pragma once

#include <optional>
#include <vector>

#include "qrm/cycle_solver.hpp"
#include "qrm/moduli.hpp"
#include "qrm/rational_map.hpp"

namespace qrm {

/// G_T(z) = z + T + 1/z with its distinguished fixed-point data.
struct GMapInfo {
    Complex T;
    RationalMap2 map;
    std::optional<Complex> finite_fixed;  // -1/T when T != 0
    Complex finite_eigenvalue{0.0};       // 1 - T^2
    Complex index_at_infinity{0.0};       // contour value, 1 - 1/T^2
};

GMapInfo g_map(Complex t);

/// Escape path toward the ideal point at rotation number p/q:
/// alpha = w (1 + tau sqrt(eps) + c2 eps), beta = (1 - eps)/alpha, so that
/// 1 - alpha beta = eps holds exactly.
class DegenerationPath {
  public:
    DegenerationPath(int p, int q, Complex tau, Complex second_order = Complex(0.0));

    struct Point {
        double eps;
        Complex alpha, beta, gamma;
        fNormalForm f;
        FNormalForm F;
    };

    Point at(double eps) const;

    int p() const { return p_; }
    int q() const { return q_; }
    Complex tau() const { return tau_; }
    Complex T() const { return double(q_) * tau_; }
    Complex omega() const { return omega_; }

  private:
    int p_, q_;
    Complex tau_, c2_, omega_;
};

/// sup over the test circle |z| = radius of the chordal distance between
/// F^q and G_{q tau}, avoiding poles of both maps by the margin.
double limit_error(const DegenerationPath& path, double eps, double radius, int samples = 64,
                   double margin = 0.05);

struct IndexLimitReport {
    Complex S;                // 1/(1 - alpha^q) + 1/(1 - beta^q)
    Complex limit_printed;    // 1 - 1/T^2
    Complex limit_rederived;  // 1 - q/T^2 (what S converges to)
};

IndexLimitReport index_limit(const DegenerationPath& path, double eps);

enum class LimitAlternative {
    FiniteCycleWithInfinity,  // accumulation on a G_T m-cycle plus infinity
    CriticalPreorbit,         // accumulation on {0, infinity}
    InfinityOnly,             // T = 0 case
};

struct TrackedStage {
    double eps;
    std::vector<CycleRecord> cycles;  // exact-period-n cycles, bounded eigenvalue
};

struct TrackReport {
    int n = 0, m = 0;
    Complex T;
    std::vector<TrackedStage> stages;
    std::vector<CycleRecord> g_cycles;  // m-cycles of G_T (the reference)
    LimitAlternative alternative = LimitAlternative::FiniteCycleWithInfinity;
    Complex eigenvalue_limit{0.0};
};

/// Follows the exact-period-n cycles of F along the eps schedule and
/// reports which limit alternative they realize.
TrackReport track_cycles(const DegenerationPath& path, const std::vector<double>& eps_schedule,
                         int n, double eig_bound = 1e3);

/// Multiplicity count of fixed points of f^q outside the excluded discs
/// around the roots of unity, by boundary integrals corrected for the
/// poles the discs contain; the expected value is q + 2.
int q_cycle_count(const DegenerationPath& path, double eps, double r);

/// Control value: the winding integral of (1 - (G_0^m)')/(z - G_0^m) over
/// |z| = r, which equals -1 once r encloses the finite structure.
Complex g0_control_integral(double r, int m = 1);

/// Radius of the largest disk around the cycle point nearest the origin
/// whose grid samples all converge to the (attracting) cycle.
double basin_extent(const RationalMap2& map, const CycleRecord& cycle, double radius,
                    int resolution, int max_iter = 2000);

}  // namespace qrm
