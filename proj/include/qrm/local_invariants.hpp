#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qrm/fixed_point_record.hpp"
#include "qrm/rational_map.hpp"

namespace qrm {

/// A positively oriented circle for the local winding integrals. The
/// radius must exclude every other fixed point of the relevant iterate.
struct ContourSpec {
    Complex center{0.0};
    double radius = 0.5;
    int samples = 512;
};

/// Contour for zeta chosen as half the distance to the nearest other
/// fixed point or pole of g^q (after the 1/z chart swap when zeta = inf).
ContourSpec default_contour(const RationalMap2& g, const SpherePoint& zeta, int q = 1);

/// Topological multiplicity of g^q at a fixed point zeta: nearest integer
/// to the winding integral of (1 - (g^q)')/(z - g^q).
int mult_contour(const RationalMap2& g, const SpherePoint& zeta, const ContourSpec& spec,
                 int q = 1);
int mult_contour(const RationalMap2& g, const SpherePoint& zeta, int q = 1);

/// Holomorphic index of g^q at zeta: the winding integral of 1/(z - g^q);
/// equals 1/(1 - rho) when the eigenvalue differs from 1.
Complex ind_contour(const RationalMap2& g, const SpherePoint& zeta, const ContourSpec& spec,
                    int q = 1);
Complex ind_contour(const RationalMap2& g, const SpherePoint& zeta, int q = 1);

struct IndexSumAudit {
    int mult_sum = 0;        // must equal 3
    Complex index_sum{0.0};  // must equal 1
    double residual = 0.0;   // |index_sum - 1|
};

/// Checks the holomorphic index formula and the fixed-point count on one
/// map; indices of multiple points go through the contour integral.
IndexSumAudit index_sum_audit(const RationalMap2& g);

/// Classification of a fixed point record, including the parabolic
/// sub-types via the index of the q-th iterate against (l q + 1)/2.
PointClass classify(FixedPointRecord& record, const RationalMap2& g,
                    std::optional<int> q = std::nullopt);

/// Same classification applied to a cycle as a fixed point of g^n.
PointClass classify_cycle(CycleRecord& record, const RationalMap2& g);

struct CensusReport {
    std::vector<CycleRecord> cycles;
    int weighted_count = 0;
    bool violation = false;
};

/// Nonrepelling-cycle census up to period nmax with the Fatou-Shishikura
/// weighting: parabolic cycles count their degeneracy, augmented by one
/// for the parabolic-attracting and parabolic-indifferent classes.
CensusReport fs_audit(const RationalMap2& g, int nmax);

std::string census_report_json(const CensusReport& report);

}  // namespace qrm
