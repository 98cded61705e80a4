#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "qrm/mobius.hpp"
#include "qrm/rational_map.hpp"

namespace qrm {

/// Unordered eigenvalue triple [alpha, beta, gamma] of the fixed points;
/// always satisfies alpha beta gamma - (alpha+beta+gamma) + 2 = 0.
struct EigenTriple {
    std::array<Complex, 3> values;
    double abc_residual() const {
        const Complex &a = values[0], &b = values[1], &c = values[2];
        return std::abs(a * b * c - (a + b + c) + 2.0);
    }
};

EigenTriple eigen_triple(const RationalMap2& g);

/// Milnor coordinates X = sigma_1, Y = sigma_2 (sigma_3 = X - 2).
struct ModuliPoint {
    Complex X{0.0}, Y{0.0};
};

ModuliPoint moduli_point(const RationalMap2& g);

/// F_{gamma,delta}(z) = gamma z / (z^2 + delta z + 1): critical points
/// +-1, fixed point 0 with eigenvalue gamma.
struct FNormalForm {
    Complex gamma{1.0}, delta{0.0};
    RationalMap2 map() const { return RationalMap2::F_form(gamma, delta); }
    /// the two nonzero fixed points (-delta +- sqrt(delta^2-4(1-gamma)))/2
    std::array<Complex, 2> fixed_ab() const;
};

/// f_{alpha,beta} fixing 0, infinity, 1 with eigenvalues alpha, beta,
/// gamma; requires alpha, beta, alpha beta != 1.
struct fNormalForm {
    Complex alpha{0.0}, beta{0.0};

    fNormalForm(Complex a, Complex b);

    Complex epsilon() const { return 1.0 - alpha * beta; }
    Complex gamma() const { return (2.0 - alpha - beta) / epsilon(); }
    Complex mu() const { return (beta - 1.0) / (beta * (1.0 - alpha)); }
    Complex nu() const { return 1.0 - epsilon() / (1.0 - alpha); }
    RationalMap2 map() const { return RationalMap2::f_form(alpha, beta); }
};

enum class SqrtBranch { Plus, Minus };

/// Result of moving f_{alpha,beta} to the critically marked normal form.
/// (gamma, delta) and phi use the principal branch of sqrt(epsilon); the
/// branch argument only decides which critical point of f carries the
/// chi_plus label (a branch swap leaves (gamma, delta) unchanged).
struct FConversion {
    FNormalForm F;
    MobiusTransform phi;  // sends the F coordinates to the f coordinates
    Complex a{0.0}, b{0.0};
    SpherePoint chi_plus, chi_minus;
};

FConversion f_to_F(const fNormalForm& nf, SqrtBranch branch = SqrtBranch::Plus);

fNormalForm F_to_f(const FNormalForm& nf);

/// Point [alpha, 1/alpha, infinity] on the line at infinity, recorded by
/// s = alpha + 1/alpha; labeled infinity_{p/q} when s = 2cos(2 pi p/q).
struct IdealPoint {
    bool s_infinite = false;
    Complex s{0.0};
    std::optional<std::pair<int, int>> label;
};

IdealPoint ideal_point(Complex s);
IdealPoint ideal_point(int p, int q);
IdealPoint ideal_point_s_infinity();

/// Limit of Y/(X-2) along an escaping sequence of moduli points.
IdealPoint ideal_limit(const std::vector<ModuliPoint>& seq);

struct FromModuliResult {
    RationalMap2 map;
    bool used_f_form = true;
    std::array<Complex, 3> triple;
};

/// Representative map for a moduli point via the characteristic cubic
/// t^3 - X t^2 + Y t - (X-2); prefers the f form with the pairing of
/// largest |1 - alpha beta|, falling back to the F form.
FromModuliResult from_moduli(const ModuliPoint& pt);

struct BoundednessVerdict {
    double theta_eig = 0.0, theta_xy = 0.0;
    bool eig_bounded = false, xy_bounded = false;
    // eig <= theta implies max(|X|,|Y|) <= 3 theta^2, and that in turn
    // bounds the eigenvalues by 2(3 theta^2) + 3 (cubic root bound)
    bool agree = false;
};

struct BoundednessReport {
    double eig_sup = 0.0, xy_sup = 0.0;
    bool bounded_eig = false, bounded_xy = false;  // headline, theta = 100
    bool verdicts_agree = false;
    std::vector<BoundednessVerdict> schedule;
};

/// Checks that eigenvalue boundedness and (X, Y) boundedness agree on a
/// sequence of maps under a compatible threshold schedule.
BoundednessReport boundedness_audit(const std::vector<RationalMap2>& maps);

}  // namespace qrm
