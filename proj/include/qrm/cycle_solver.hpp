#pragma once

#include <string>
#include <vector>

#include "qrm/fixed_point_record.hpp"
#include "qrm/poly.hpp"
#include "qrm/rational_map.hpp"

namespace qrm {

/// Numerator/denominator pair of an iterate, jointly renormalized so the
/// quotient is unchanged while coefficients stay bounded.
struct MapPair {
    Poly num;
    Poly den;
};

MapPair iterate_pair(const RationalMap2& g, int n);

/// Fixed-point polynomial of g^n: num - z * den.
Poly fixed_point_poly(const MapPair& pair);

struct PeriodicPoint {
    SpherePoint point;
    int multiplicity = 1;
    // dynamically verified position; false marks unresolved seeds from
    // cancellation zones of the composed polynomial
    bool verified = true;
};

/// All fixed points of g^n counted with multiplicity; the total is 2^n + 1.
/// 1 <= n <= 12.
std::vector<PeriodicPoint> periodic_points(const RationalMap2& g, int n);

/// Orbits of exact period n with eigenvalues. Points matching a proper
/// divisor relation to within 1e-9 (chordal) are dropped as lower-period;
/// distances between 1e-9 and 1e-7 raise AmbiguousPeriod.
std::vector<CycleRecord> cycles(const RationalMap2& g, int n);

/// All cycles of period <= nmax with |eigenvalue| <= 1 + 1e-9, classified.
std::vector<CycleRecord> nonrepelling_census(const RationalMap2& g, int nmax);

/// Newton polish of z as a fixed point of g^n driven by iterated
/// evaluation; ok reports whether the result verifies dynamically.
SpherePoint refine_periodic_point(const RationalMap2& g, SpherePoint z, int n, bool& ok);

std::string cycle_record_json(const CycleRecord& rec);

}  // namespace qrm
