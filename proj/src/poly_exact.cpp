#include "qrm/poly_exact.hpp"

#include <algorithm>

namespace qrm {

namespace {

// graded lex comparison of exponent triples
bool exp_less(const std::array<int, 3>& a, const std::array<int, 3>& b) {
    int da = a[0] + a[1] + a[2], db = b[0] + b[1] + b[2];
    if (da != db) return da < db;
    return a < b;
}

std::array<int, 3> leading_exp(const TriQ& p) {
    auto it = p.terms.begin();
    auto best = it;
    for (; it != p.terms.end(); ++it)
        if (exp_less(best->first, it->first)) best = it;
    return best->first;
}

}  // namespace

TriDivision tri_divide(const TriQ& dividend, const TriQ& divisor) {
    if (divisor.is_zero()) throw Error(ErrorCode::Validation, "division by the zero polynomial");
    TriDivision out;
    TriQ rest = dividend;
    auto dexp = leading_exp(divisor);
    GaussianRational dlead = divisor.terms.at(dexp);
    while (!rest.is_zero()) {
        auto rexp = leading_exp(rest);
        if (rexp[0] >= dexp[0] && rexp[1] >= dexp[1] && rexp[2] >= dexp[2]) {
            std::array<int, 3> q{rexp[0] - dexp[0], rexp[1] - dexp[1], rexp[2] - dexp[2]};
            GaussianRational c = rest.terms.at(rexp) / dlead;
            TriQ mono = TriQ::monomial(c, q[0], q[1], q[2]);
            out.quotient = out.quotient + mono;
            rest = rest - mono * divisor;
        } else {
            // the leading term is irreducible; move it to the remainder
            GaussianRational c = rest.terms.at(rexp);
            out.remainder.add_term(rexp, c);
            rest.terms.erase(rexp);
        }
    }
    return out;
}

void polyq_trim(PolyQ1& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

int polyq_degree(const PolyQ1& p) {
    for (size_t i = p.size(); i-- > 0;)
        if (!p[i].is_zero()) return int(i);
    return -1;
}

PolyQ1 polyq_mul(const PolyQ1& a, const PolyQ1& b) {
    if (a.empty() || b.empty()) return {};
    PolyQ1 out(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    polyq_trim(out);
    return out;
}

PolyQ1 polyq_derivative(const PolyQ1& p) {
    if (p.size() <= 1) return {};
    PolyQ1 d(p.size() - 1);
    for (size_t i = 1; i < p.size(); ++i) d[i - 1] = p[i] * GaussianRational(long(i));
    polyq_trim(d);
    return d;
}

std::pair<PolyQ1, PolyQ1> polyq_divmod(const PolyQ1& a, const PolyQ1& b) {
    PolyQ1 rem = a;
    polyq_trim(rem);
    PolyQ1 bb = b;
    polyq_trim(bb);
    int db = polyq_degree(bb);
    if (db < 0) throw Error(ErrorCode::Validation, "univariate division by zero");
    PolyQ1 quot;
    int dr = polyq_degree(rem);
    if (dr >= db) quot.assign(size_t(dr - db) + 1, GaussianRational());
    while ((dr = polyq_degree(rem)) >= db) {
        GaussianRational c = rem[size_t(dr)] / bb[size_t(db)];
        quot[size_t(dr - db)] = c;
        for (int i = 0; i <= db; ++i) rem[size_t(dr - db + i)] -= c * bb[size_t(i)];
        rem[size_t(dr)] = GaussianRational();  // exact cancellation
        polyq_trim(rem);
    }
    polyq_trim(quot);
    return {quot, rem};
}

PolyQ1 polyq_gcd(PolyQ1 a, PolyQ1 b) {
    polyq_trim(a);
    polyq_trim(b);
    while (polyq_degree(b) >= 0) {
        auto [q, r] = polyq_divmod(a, b);
        a = std::move(b);
        b = std::move(r);
        // keep coefficients small by monicizing the remainder
        int d = polyq_degree(b);
        if (d > 0) {
            GaussianRational lead = b[size_t(d)];
            for (auto& c : b) c /= lead;
        }
    }
    int d = polyq_degree(a);
    if (d >= 0) {
        GaussianRational lead = a[size_t(d)];
        for (auto& c : a) c /= lead;
    }
    return a;
}

std::vector<SquarefreeFactor> polyq_squarefree(const PolyQ1& p_in) {
    PolyQ1 p = p_in;
    polyq_trim(p);
    std::vector<SquarefreeFactor> out;
    if (polyq_degree(p) <= 0) return out;

    PolyQ1 dp = polyq_derivative(p);
    PolyQ1 g = polyq_gcd(p, dp);
    if (polyq_degree(g) == 0) {
        out.push_back({p, 1});
        return out;
    }
    PolyQ1 w = polyq_divmod(p, g).first;
    PolyQ1 y = polyq_divmod(dp, g).first;
    // z = y - w'
    PolyQ1 z = y;
    PolyQ1 wp = polyq_derivative(w);
    z.resize(std::max(z.size(), wp.size()));
    for (size_t i = 0; i < wp.size(); ++i) z[i] -= wp[i];
    polyq_trim(z);

    int i = 1;
    while (polyq_degree(w) > 0) {
        PolyQ1 h = polyq_gcd(w, z);
        if (polyq_degree(h) > 0) out.push_back({h, i});
        w = polyq_divmod(w, h).first;
        PolyQ1 ynext = polyq_divmod(z, h).first;
        z = ynext;
        wp = polyq_derivative(w);
        z.resize(std::max(z.size(), wp.size()));
        for (size_t k = 0; k < wp.size(); ++k) z[k] -= wp[k];
        polyq_trim(z);
        ++i;
    }
    return out;
}

Poly polyq_to_complex(const PolyQ1& p) {
    Poly out;
    out.reserve(p.size());
    for (const auto& c : p) out.push_back(c.to_complex());
    return out;
}

GaussianRational exact_determinant(std::vector<std::vector<GaussianRational>> m) {
    size_t n = m.size();
    GaussianRational det(1);
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        while (pivot < n && m[pivot][col].is_zero()) ++pivot;
        if (pivot == n) return GaussianRational();
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            det = -det;
        }
        det *= m[col][col];
        GaussianRational inv = GaussianRational(1) / m[col][col];
        for (size_t row = col + 1; row < n; ++row) {
            if (m[row][col].is_zero()) continue;
            GaussianRational f = m[row][col] * inv;
            for (size_t k = col; k < n; ++k) m[row][k] -= f * m[col][k];
        }
    }
    return det;
}

Complex numeric_determinant(std::vector<std::vector<Complex>> m) {
    size_t n = m.size();
    Complex det(1.0);
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        for (size_t row = col + 1; row < n; ++row)
            if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
        if (std::abs(m[pivot][col]) == 0.0) return Complex(0.0);
        if (pivot != col) {
            std::swap(m[pivot], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (size_t row = col + 1; row < n; ++row) {
            Complex f = m[row][col] / m[col][col];
            for (size_t k = col; k < n; ++k) m[row][k] -= f * m[col][k];
        }
    }
    return det;
}

PolyQ1 polyq_interpolate(const std::vector<GaussianRational>& nodes,
                         const std::vector<GaussianRational>& values) {
    size_t n = nodes.size();
    PolyQ1 acc;
    for (size_t t = 0; t < n; ++t) {
        // basis polynomial prod_{s != t} (x - x_s)/(x_t - x_s)
        PolyQ1 basis = {GaussianRational(1)};
        GaussianRational denom(1);
        for (size_t s = 0; s < n; ++s) {
            if (s == t) continue;
            basis = polyq_mul(basis, {-nodes[s], GaussianRational(1)});
            denom *= nodes[t] - nodes[s];
        }
        GaussianRational scale = values[t] / denom;
        acc.resize(std::max(acc.size(), basis.size()));
        for (size_t k = 0; k < basis.size(); ++k) acc[k] += basis[k] * scale;
    }
    polyq_trim(acc);
    return acc;
}

Poly poly_interpolate(const std::vector<Complex>& nodes, const std::vector<Complex>& values) {
    size_t n = nodes.size();
    Poly acc;
    for (size_t t = 0; t < n; ++t) {
        Poly basis = {Complex(1.0)};
        Complex denom(1.0);
        for (size_t s = 0; s < n; ++s) {
            if (s == t) continue;
            basis = poly_mul(basis, {-nodes[s], Complex(1.0)});
            denom *= nodes[t] - nodes[s];
        }
        Complex scale = values[t] / denom;
        acc.resize(std::max(acc.size(), basis.size()));
        for (size_t k = 0; k < basis.size(); ++k) acc[k] += basis[k] * scale;
    }
    return acc;
}

}  // namespace qrm
