#pragma once

#include <array>
#include <map>
#include <vector>

#include "qrm/gaussian_rational.hpp"
#include "qrm/poly.hpp"

namespace qrm {

namespace detail {
inline bool coeff_zero(const GaussianRational& c) { return c.is_zero(); }
inline bool coeff_zero(const Complex& c) { return c == Complex(0.0); }
}  // namespace detail

/// Sparse polynomial in (W, X, Y) over an exact or numeric coefficient
/// ring. Exponent triples are (i, j, k) for W^i X^j Y^k.
template <class C>
class TriPoly {
  public:
    using Exp = std::array<int, 3>;
    std::map<Exp, C> terms;

    TriPoly() = default;

    static TriPoly monomial(C c, int i, int j, int k) {
        TriPoly p;
        if (!detail::coeff_zero(c)) p.terms[{i, j, k}] = c;
        return p;
    }
    static TriPoly W() { return monomial(C(1), 1, 0, 0); }
    static TriPoly X() { return monomial(C(1), 0, 1, 0); }
    static TriPoly Y() { return monomial(C(1), 0, 0, 1); }

    bool is_zero() const { return terms.empty(); }

    int degree() const {
        int d = -1;
        for (const auto& [e, c] : terms) d = std::max(d, e[0] + e[1] + e[2]);
        return d;
    }

    bool is_homogeneous() const {
        int d = degree();
        for (const auto& [e, c] : terms)
            if (e[0] + e[1] + e[2] != d) return false;
        return true;
    }

    int degree_in(int var) const {
        int d = 0;
        for (const auto& [e, c] : terms) d = std::max(d, e[size_t(var)]);
        return d;
    }

    void add_term(const Exp& e, const C& c) {
        auto it = terms.find(e);
        if (it == terms.end()) {
            if (!detail::coeff_zero(c)) terms[e] = c;
            return;
        }
        it->second += c;
        if (detail::coeff_zero(it->second)) terms.erase(it);
    }

    friend TriPoly operator+(const TriPoly& a, const TriPoly& b) {
        TriPoly out = a;
        for (const auto& [e, c] : b.terms) out.add_term(e, c);
        return out;
    }
    friend TriPoly operator-(const TriPoly& a, const TriPoly& b) {
        TriPoly out = a;
        for (const auto& [e, c] : b.terms) out.add_term(e, C(0) - c);
        return out;
    }
    friend TriPoly operator*(const TriPoly& a, const TriPoly& b) {
        TriPoly out;
        for (const auto& [ea, ca] : a.terms)
            for (const auto& [eb, cb] : b.terms)
                out.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
        return out;
    }
    TriPoly operator*(const C& s) const {
        TriPoly out;
        if (detail::coeff_zero(s)) return out;
        for (const auto& [e, c] : terms) out.terms[e] = c * s;
        return out;
    }
    friend bool operator==(const TriPoly& a, const TriPoly& b) { return (a - b).is_zero(); }

    /// substitute (W, X, Y) -> (W + a Y, X + b Y, Y)
    TriPoly shear(const C& a, const C& b) const {
        TriPoly w_img = W() + monomial(a, 0, 0, 1);
        TriPoly x_img = X() + monomial(b, 0, 0, 1);
        TriPoly out;
        for (const auto& [e, c] : terms) {
            TriPoly t = monomial(c, 0, 0, e[2]);
            for (int m = 0; m < e[0]; ++m) t = t * w_img;
            for (int m = 0; m < e[1]; ++m) t = t * x_img;
            out = out + t;
        }
        return out;
    }

    C evaluate(const C& w, const C& x, const C& y) const {
        C acc(0);
        for (const auto& [e, c] : terms) {
            C t = c;
            for (int m = 0; m < e[0]; ++m) t *= w;
            for (int m = 0; m < e[1]; ++m) t *= x;
            for (int m = 0; m < e[2]; ++m) t *= y;
            acc += t;
        }
        return acc;
    }

    /// coefficients of the univariate polynomial in Y at (w, x)
    std::vector<C> y_slice(const C& w, const C& x) const {
        std::vector<C> out(size_t(degree_in(2)) + 1, C(0));
        for (const auto& [e, c] : terms) {
            C t = c;
            for (int m = 0; m < e[0]; ++m) t *= w;
            for (int m = 0; m < e[1]; ++m) t *= x;
            out[size_t(e[2])] += t;
        }
        return out;
    }
};

using TriQ = TriPoly<GaussianRational>;
using TriC = TriPoly<Complex>;

inline TriC to_numeric(const TriQ& p) {
    TriC out;
    for (const auto& [e, c] : p.terms) out.terms[e] = c.to_complex();
    return out;
}

/// Division in Q(i)[W,X,Y] by a single divisor under graded lex order;
/// the remainder vanishes exactly when the divisor divides the dividend.
struct TriDivision {
    TriQ quotient;
    TriQ remainder;
};
TriDivision tri_divide(const TriQ& dividend, const TriQ& divisor);

/// Dense univariate polynomial over Q(i), ascending coefficients.
using PolyQ1 = std::vector<GaussianRational>;

void polyq_trim(PolyQ1& p);
int polyq_degree(const PolyQ1& p);  // -1 for the zero polynomial
PolyQ1 polyq_mul(const PolyQ1& a, const PolyQ1& b);
PolyQ1 polyq_derivative(const PolyQ1& p);
/// quotient and remainder over the field Q(i)
std::pair<PolyQ1, PolyQ1> polyq_divmod(const PolyQ1& a, const PolyQ1& b);
/// monic gcd
PolyQ1 polyq_gcd(PolyQ1 a, PolyQ1 b);

struct SquarefreeFactor {
    PolyQ1 factor;
    int multiplicity = 1;
};
/// Yun square-free decomposition: p = c * prod factor_i^multiplicity_i.
std::vector<SquarefreeFactor> polyq_squarefree(const PolyQ1& p);

Poly polyq_to_complex(const PolyQ1& p);

/// Exact determinant over Q(i) by Gaussian elimination.
GaussianRational exact_determinant(std::vector<std::vector<GaussianRational>> m);
Complex numeric_determinant(std::vector<std::vector<Complex>> m);

/// Lagrange interpolation through (nodes[i], values[i]).
PolyQ1 polyq_interpolate(const std::vector<GaussianRational>& nodes,
                         const std::vector<GaussianRational>& values);
Poly poly_interpolate(const std::vector<Complex>& nodes, const std::vector<Complex>& values);

}  // namespace qrm
