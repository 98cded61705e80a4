#pragma once

#include <complex>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

namespace qrm {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

inline Complex unit_root(int p, int q) {
    double t = 2.0 * kPi * double(p) / double(q);
    return {std::cos(t), std::sin(t)};
}

/// Chordal (spherical) distance between two finite points; max value 2.
inline double chordal_finite(Complex a, Complex b) {
    return 2.0 * std::abs(a - b) /
           std::sqrt((1.0 + std::norm(a)) * (1.0 + std::norm(b)));
}

inline double chordal_to_inf(Complex a) { return 2.0 / std::sqrt(1.0 + std::norm(a)); }

/// Stable roots of a*z^2 + b*z + c. Degree drops are reflected in the
/// result size (a=0 gives one root, a=b=0 gives none).
inline std::vector<Complex> solve_quadratic(Complex a, Complex b, Complex c) {
    double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
    if (scale == 0.0) return {};
    if (std::abs(a) <= 1e-14 * scale) {
        if (std::abs(b) <= 1e-14 * scale) return {};
        return {-c / b};
    }
    Complex disc = b * b - 4.0 * a * c;
    Complex sq = std::sqrt(disc);
    if (std::real(std::conj(b) * sq) < 0.0) sq = -sq;
    Complex qq = -0.5 * (b + sq);
    Complex r1 = (std::abs(qq) > 0.0) ? qq / a : Complex(0.0);
    Complex r2 = (std::abs(qq) > 0.0) ? c / qq : -b / a - r1;
    return {r1, r2};
}

/// All roots of a*z^3 + b*z^2 + c*z + d (Cardano), with multiple roots
/// snapped exactly when the discriminant vanishes to rounding.
std::vector<Complex> solve_cubic(Complex a, Complex b, Complex c, Complex d);

/// Nearest root of unity e^{2pi i p/q} with q <= qmax, if within tol.
/// Returns reduced (p, q); rho ~ 1 gives (0, 1).
std::optional<std::pair<int, int>> nearest_root_of_unity(Complex rho, int qmax, double tol);

/// Deterministic splitmix64 generator for reproducible sampling.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform01() { return double(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    Complex complex_in_box(double half_width = 1.0) {
        return {uniform(-half_width, half_width), uniform(-half_width, half_width)};
    }

  private:
    std::uint64_t state_;
};

}  // namespace qrm
