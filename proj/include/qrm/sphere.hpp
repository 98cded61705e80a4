#pragma once

#include "qrm/complex_util.hpp"

namespace qrm {

/// A point of the Riemann sphere: a finite complex value or the point at
/// infinity. Work near infinity uses the chart w = 1/z.
struct SpherePoint {
    Complex z{0.0, 0.0};
    bool inf = false;

    static SpherePoint finite(Complex v) { return {v, false}; }
    static SpherePoint infinity() { return {Complex{0.0, 0.0}, true}; }

    bool is_inf() const { return inf; }
    Complex value() const { return z; }
};

inline double chordal(const SpherePoint& a, const SpherePoint& b) {
    if (a.inf && b.inf) return 0.0;
    if (a.inf) return chordal_to_inf(b.z);
    if (b.inf) return chordal_to_inf(a.z);
    return chordal_finite(a.z, b.z);
}

inline double chordal(const SpherePoint& a, Complex b) { return chordal(a, SpherePoint::finite(b)); }

inline bool sphere_close(const SpherePoint& a, const SpherePoint& b, double tol) {
    return chordal(a, b) < tol;
}

}  // namespace qrm
