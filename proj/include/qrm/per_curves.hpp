#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qrm/poly_exact.hpp"
#include "qrm/rational_map.hpp"

namespace qrm {

/// A plane curve in the compactified moduli space: a homogeneous
/// polynomial in (W, X, Y), exact over Q(i) or with numeric coefficients.
class ProjectiveCurve {
  public:
    static ProjectiveCurve exact(TriQ p);
    static ProjectiveCurve numeric(TriC p);

    bool is_exact() const { return exact_; }
    int degree() const { return exact_ ? pq_.degree() : pc_.degree(); }
    const TriQ& exact_poly() const;
    const TriC& numeric_poly() const { return pc_; }

    Complex evaluate(Complex w, Complex x, Complex y) const { return pc_.evaluate(w, x, y); }

  private:
    bool exact_ = true;
    TriQ pq_;
    TriC pc_;  // numeric mirror, always populated
};

/// The displayed defining polynomials for n = 1, 2, 3.
ProjectiveCurve per_curve(int n, const GaussianRational& rho);
ProjectiveCurve per_curve(int n, Complex rho);

/// One point of an intersection cycle with its multiplicity. Coordinates
/// are exact when they could be recognized and verified exactly.
struct CurvePoint {
    std::array<Complex, 3> coords{};  // [w : x : y]
    int multiplicity = 1;
    bool exact = false;
    std::array<GaussianRational, 3> exact_coords{};
    std::optional<std::pair<int, int>> ideal_label;  // for points on W = 0
};

struct IntersectionCycle {
    std::vector<CurvePoint> points;
    int total() const {
        int t = 0;
        for (const auto& p : points) t += p.multiplicity;
        return t;
    }
};

/// Full intersection cycle including points on the line at infinity; the
/// total multiplicity is deg C1 * deg C2 (Bezout).
IntersectionCycle intersect(const ProjectiveCurve& c1, const ProjectiveCurve& c2);

/// Intersection with the line at infinity W = 0, with points reported as
/// ideal points via s = Y/X.
IntersectionCycle intersect_at_infinity(const ProjectiveCurve& c);

/// Exact multivariate divisibility (exact curves only).
bool divides(const ProjectiveCurve& c1, const ProjectiveCurve& c2);

/// Whether the map has an n-cycle of eigenvalue rho (|difference| < tol);
/// for n <= 3 the verdict is cross-checked against the curve polynomial.
bool member(const RationalMap2& g, int n, Complex rho, double tol);

struct Decomposition {
    TriQ sharp;  // Per_n^#(1): what remains after the known lower factors
    std::vector<std::pair<std::string, TriQ>> known_factors;
};

/// Per_n(1) divided by its known lower-period factors, n in {2, 3}.
Decomposition decompose(int n);

/// The count defined by sum_{m | n} d(m) = 2^{n-1}.
long long d_of_n(int n);

std::string intersection_cycle_json(const IntersectionCycle& cycle);

}  // namespace qrm
