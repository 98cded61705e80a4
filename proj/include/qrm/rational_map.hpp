#pragma once

#include <array>
#include <string>
#include <vector>

#include "qrm/errors.hpp"
#include "qrm/fixed_point_record.hpp"
#include "qrm/mobius.hpp"
#include "qrm/sphere.hpp"

namespace qrm {

/// A quadratic rational map g = (A2 z^2 + A1 z + A0) / (B2 z^2 + B1 z + B0),
/// coefficients identified up to common scale. Construction normalizes by
/// the coefficient of largest modulus and rejects maps whose resultant
/// vanishes to rounding (degree < 2 or a common root).
class RationalMap2 {
  public:
    // order: A2, A1, A0, B2, B1, B0
    explicit RationalMap2(const std::array<Complex, 6>& coeffs);

    static RationalMap2 polynomial(Complex a2, Complex a1, Complex a0);  // a2 z^2 + a1 z + a0
    static RationalMap2 g_family(Complex t);                             // z + t + 1/z
    static RationalMap2 f_form(Complex alpha, Complex beta);
    static RationalMap2 F_form(Complex gamma, Complex delta);

    const std::array<Complex, 6>& coeffs() const { return c_; }
    Complex resultant() const { return resultant_; }

    SpherePoint evaluate(const SpherePoint& z) const;

    /// Derivative at z in the appropriate source/target charts; at a fixed
    /// point this is the eigenvalue.
    Complex multiplier(const SpherePoint& z) const;

    /// Exactly two critical points counted with multiplicity.
    std::array<SpherePoint, 2> critical_points() const;

    /// The three fixed points with multiplicity (clustered roots of
    /// N - z D, plus infinity on degree drop); multiplicities sum to 3.
    /// Multiple fixed points get eigenvalue exactly 1.
    std::vector<FixedPointRecord> fixed_points() const;

    /// Orbit [z, g(z), ..., g^n(z)].
    std::vector<SpherePoint> iterate(const SpherePoint& z, int n) const;

    /// Exact coefficient-level conjugation m o g o m^{-1}.
    RationalMap2 conjugate(const MobiusTransform& m) const;

    /// The map 1/g(1/w) used for computations at infinity.
    RationalMap2 inverted_chart() const;

    std::string to_json() const;
    static RationalMap2 from_json(const std::string& text);

  private:
    struct ExactlyValid {};
    RationalMap2(const std::array<Complex, 6>& coeffs, ExactlyValid);

    std::array<Complex, 6> c_{};
    Complex resultant_{0.0};
};

/// Eigenvalue of the cycle through z0 (chain-rule product of multipliers).
Complex cycle_eigenvalue(const RationalMap2& g, const std::vector<SpherePoint>& orbit);

RationalMap2 random_map(Rng& rng);
MobiusTransform random_mobius(Rng& rng);

}  // namespace qrm
