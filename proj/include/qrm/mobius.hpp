#pragma once

#include "qrm/errors.hpp"
#include "qrm/sphere.hpp"

namespace qrm {

/// z -> (p z + q) / (r z + s), ps - qr != 0.
struct MobiusTransform {
    Complex p{1.0}, q{0.0}, r{0.0}, s{1.0};

    MobiusTransform() = default;
    MobiusTransform(Complex p_, Complex q_, Complex r_, Complex s_) : p(p_), q(q_), r(r_), s(s_) {
        double scale = std::max({std::abs(p), std::abs(q), std::abs(r), std::abs(s)});
        if (scale == 0.0 || std::abs(det()) < 1e-14 * scale * scale)
            throw Error(ErrorCode::Validation, "Mobius transform is singular");
    }

    Complex det() const { return p * s - q * r; }

    SpherePoint apply(const SpherePoint& x) const {
        if (x.is_inf()) {
            if (std::abs(r) == 0.0) return SpherePoint::infinity();
            return SpherePoint::finite(p / r);
        }
        Complex num = p * x.z + q;
        Complex den = r * x.z + s;
        if (std::abs(den) == 0.0) return SpherePoint::infinity();
        return SpherePoint::finite(num / den);
    }

    Complex operator()(Complex z) const {
        SpherePoint y = apply(SpherePoint::finite(z));
        if (y.is_inf()) throw Error(ErrorCode::Validation, "Mobius image at infinity");
        return y.z;
    }

    MobiusTransform inverse() const { return {s, -q, -r, p}; }

    MobiusTransform compose(const MobiusTransform& o) const {
        // this after o
        return {p * o.p + q * o.r, p * o.q + q * o.s, r * o.p + s * o.r, r * o.q + s * o.s};
    }
};

}  // namespace qrm
