#include "qrm/rational_map.hpp"

#include <algorithm>

#include "json.hpp"

namespace qrm {

namespace {

// Wronskian quadratic of numerator and denominator: numerator of g'.
std::array<Complex, 3> wronskian(const std::array<Complex, 6>& c) {
    const Complex &A2 = c[0], &A1 = c[1], &A0 = c[2], &B2 = c[3], &B1 = c[4], &B0 = c[5];
    return {A2 * B1 - A1 * B2, 2.0 * (A2 * B0 - A0 * B2), A1 * B0 - A0 * B1};
}

Complex eval_quad(Complex c2, Complex c1, Complex c0, Complex u, Complex v) {
    return c2 * u * u + c1 * u * v + c0 * v * v;
}

// Coefficients of A2 (e t + f)^2 + A1 (e t + f)(g t + h) + A0 (g t + h)^2.
std::array<Complex, 3> quad_subst(Complex a2, Complex a1, Complex a0, Complex e, Complex f,
                                  Complex g, Complex h) {
    return {a2 * e * e + a1 * e * g + a0 * g * g,
            2.0 * a2 * e * f + a1 * (e * h + f * g) + 2.0 * a0 * g * h,
            a2 * f * f + a1 * f * h + a0 * h * h};
}

}  // namespace

RationalMap2::RationalMap2(const std::array<Complex, 6>& coeffs) : c_(coeffs) {
    double scale = 0.0;
    for (const auto& v : c_) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) throw Error(ErrorCode::DegenerateMap, "all coefficients zero");
    for (auto& v : c_) v /= scale;
    const Complex &A2 = c_[0], &A1 = c_[1], &A0 = c_[2], &B2 = c_[3], &B1 = c_[4], &B0 = c_[5];
    resultant_ = (A2 * B0 - A0 * B2) * (A2 * B0 - A0 * B2) -
                 (A2 * B1 - A1 * B2) * (A1 * B0 - A0 * B1);
    if (std::abs(resultant_) < 1e-12)
        throw Error(ErrorCode::DegenerateMap, "resultant vanishes (degree < 2 or common root)");
}

// The named families validate their nondegeneracy in closed form, which
// keeps deep degeneration paths (resultant ~ eps^2) constructible.
RationalMap2::RationalMap2(const std::array<Complex, 6>& coeffs, ExactlyValid) : c_(coeffs) {
    double scale = 0.0;
    for (const auto& v : c_) scale = std::max(scale, std::abs(v));
    for (auto& v : c_) v /= scale;
    const Complex &A2 = c_[0], &A1 = c_[1], &A0 = c_[2], &B2 = c_[3], &B1 = c_[4], &B0 = c_[5];
    resultant_ = (A2 * B0 - A0 * B2) * (A2 * B0 - A0 * B2) -
                 (A2 * B1 - A1 * B2) * (A1 * B0 - A0 * B1);
    if (std::abs(resultant_) == 0.0)
        throw Error(ErrorCode::DegenerateMap, "resultant vanishes exactly");
}

RationalMap2 RationalMap2::polynomial(Complex a2, Complex a1, Complex a0) {
    if (std::abs(a2) == 0.0)
        throw Error(ErrorCode::DegenerateMap, "leading coefficient vanishes");
    return RationalMap2({a2, a1, a0, 0.0, 0.0, 1.0}, ExactlyValid{});
}

RationalMap2 RationalMap2::g_family(Complex t) {
    return RationalMap2({1.0, t, 1.0, 0.0, 1.0, 0.0}, ExactlyValid{});
}

RationalMap2 RationalMap2::f_form(Complex alpha, Complex beta) {
    // z ((1-a) z + a(1-b)) / (b(1-a) z + (1-b)), fixing 0, infinity, 1;
    // nondegenerate exactly when alpha, beta, alpha beta != 1
    if (std::abs(alpha - 1.0) == 0.0 || std::abs(beta - 1.0) == 0.0 ||
        std::abs(alpha * beta - 1.0) == 0.0)
        throw Error(ErrorCode::DegenerateMap, "f form needs alpha, beta, alpha beta != 1");
    return RationalMap2({1.0 - alpha, alpha * (1.0 - beta), 0.0, 0.0, beta * (1.0 - alpha),
                         1.0 - beta},
                        ExactlyValid{});
}

RationalMap2 RationalMap2::F_form(Complex gamma, Complex delta) {
    if (std::abs(gamma) == 0.0) throw Error(ErrorCode::DegenerateMap, "F form needs gamma != 0");
    return RationalMap2({0.0, gamma, 0.0, 1.0, delta, 1.0}, ExactlyValid{});
}

SpherePoint RationalMap2::evaluate(const SpherePoint& zp) const {
    const Complex &A2 = c_[0], &A1 = c_[1], &A0 = c_[2], &B2 = c_[3], &B1 = c_[4], &B0 = c_[5];
    if (zp.is_inf()) {
        if (std::abs(B2) == 0.0) return SpherePoint::infinity();
        return SpherePoint::finite(A2 / B2);
    }
    Complex z = zp.z;
    Complex num, den;
    if (std::abs(z) <= 1.0) {
        num = (A2 * z + A1) * z + A0;
        den = (B2 * z + B1) * z + B0;
    } else {
        Complex w = 1.0 / z;
        num = (A0 * w + A1) * w + A2;
        den = (B0 * w + B1) * w + B2;
    }
    if (std::abs(den) == 0.0) return SpherePoint::infinity();
    Complex v = num / den;
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return SpherePoint::infinity();
    return SpherePoint::finite(v);
}

Complex RationalMap2::multiplier(const SpherePoint& zp) const {
    auto w = wronskian(c_);
    SpherePoint img = evaluate(zp);
    if (zp.is_inf()) {
        // source chart w = 1/z; w(1,0) is the leading Wronskian coefficient
        if (!img.is_inf()) return -w[0] / (c_[3] * c_[3]);
        return w[0] / (c_[0] * c_[0]);
    }
    double s = std::max(1.0, std::abs(zp.z));
    Complex u = zp.z / s, v = Complex(1.0 / s, 0.0);
    Complex wv = eval_quad(w[0], w[1], w[2], u, v);
    if (!img.is_inf()) {
        Complex q = eval_quad(c_[3], c_[4], c_[5], u, v);
        return wv / (q * q) / (s * s);
    }
    // target chart 1/z at a pole: derivative of 1/g
    Complex p = eval_quad(c_[0], c_[1], c_[2], u, v);
    return -wv / (p * p) / (s * s);
}

std::array<SpherePoint, 2> RationalMap2::critical_points() const {
    auto w = wronskian(c_);
    auto roots = solve_quadratic(w[0], w[1], w[2]);
    std::array<SpherePoint, 2> out = {SpherePoint::infinity(), SpherePoint::infinity()};
    for (size_t i = 0; i < roots.size() && i < 2; ++i) out[i] = SpherePoint::finite(roots[i]);
    return out;
}

std::vector<FixedPointRecord> RationalMap2::fixed_points() const {
    const Complex &A2 = c_[0], &A1 = c_[1], &A0 = c_[2], &B2 = c_[3], &B1 = c_[4], &B0 = c_[5];
    // fixed-point cubic N(z) - z D(z)
    Complex pa = -B2, pb = A2 - B1, pc = A1 - B0, pd = A0;
    std::vector<Complex> roots = solve_cubic(pa, pb, pc, pd);

    // Newton polish on the cubic (skipped where the derivative degenerates).
    auto phi = [&](Complex z) { return ((pa * z + pb) * z + pc) * z + pd; };
    auto dphi = [&](Complex z) { return (3.0 * pa * z + 2.0 * pb) * z + pc; };
    for (auto& r : roots) {
        for (int it = 0; it < 2; ++it) {
            Complex d = dphi(r);
            if (std::abs(d) < 1e-8) break;
            Complex step = phi(r) / d;
            if (std::abs(step) > 0.1 * (1.0 + std::abs(r))) break;
            r -= step;
        }
    }

    // cluster with relative radius 1e-5
    std::vector<int> cluster(roots.size());
    for (size_t i = 0; i < roots.size(); ++i) cluster[i] = int(i);
    for (size_t i = 0; i < roots.size(); ++i)
        for (size_t j = i + 1; j < roots.size(); ++j) {
            double cut = 1e-5 * std::max({1.0, std::abs(roots[i]), std::abs(roots[j])});
            if (std::abs(roots[i] - roots[j]) < cut) {
                int a = cluster[i], b = cluster[j];
                for (auto& cc : cluster)
                    if (cc == b) cc = a;
            }
        }

    std::vector<FixedPointRecord> out;
    for (size_t i = 0; i < roots.size(); ++i) {
        if (cluster[i] != int(i)) continue;
        Complex sum = 0.0;
        int mult = 0;
        for (size_t j = 0; j < roots.size(); ++j)
            if (cluster[j] == int(i)) {
                sum += roots[j];
                ++mult;
            }
        FixedPointRecord rec;
        rec.location = SpherePoint::finite(sum / double(mult));
        rec.multiplicity = mult;
        rec.eigenvalue = (mult >= 2) ? Complex(1.0) : multiplier(rec.location);
        out.push_back(rec);
    }
    int inf_mult = 3 - int(roots.size());
    if (inf_mult > 0) {
        FixedPointRecord rec;
        rec.location = SpherePoint::infinity();
        rec.multiplicity = inf_mult;
        rec.eigenvalue = (inf_mult >= 2) ? Complex(1.0) : multiplier(rec.location);
        out.push_back(rec);
    }
    return out;
}

std::vector<SpherePoint> RationalMap2::iterate(const SpherePoint& z, int n) const {
    if (n < 0) throw Error(ErrorCode::Validation, "negative iterate count");
    std::vector<SpherePoint> orbit;
    orbit.reserve(size_t(n) + 1);
    orbit.push_back(z);
    SpherePoint cur = z;
    for (int i = 0; i < n; ++i) {
        cur = evaluate(cur);
        orbit.push_back(cur);
    }
    return orbit;
}

RationalMap2 RationalMap2::conjugate(const MobiusTransform& m) const {
    MobiusTransform mi = m.inverse();
    // g o m^{-1}: substitute z = (mi.p t + mi.q)/(mi.r t + mi.s)
    auto n1 = quad_subst(c_[0], c_[1], c_[2], mi.p, mi.q, mi.r, mi.s);
    auto d1 = quad_subst(c_[3], c_[4], c_[5], mi.p, mi.q, mi.r, mi.s);
    std::array<Complex, 6> out;
    for (int k = 0; k < 3; ++k) {
        out[size_t(k)] = m.p * n1[size_t(k)] + m.q * d1[size_t(k)];
        out[size_t(3 + k)] = m.r * n1[size_t(k)] + m.s * d1[size_t(k)];
    }
    // conjugation preserves nondegeneracy of the already validated map
    return RationalMap2(out, ExactlyValid{});
}

RationalMap2 RationalMap2::inverted_chart() const {
    return RationalMap2({c_[5], c_[4], c_[3], c_[2], c_[1], c_[0]}, ExactlyValid{});
}

std::string RationalMap2::to_json() const {
    nlohmann::json j;
    j["coeffs"] = nlohmann::json::array();
    for (const auto& v : c_) j["coeffs"].push_back({v.real(), v.imag()});
    return j.dump();
}

RationalMap2 RationalMap2::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.contains("coeffs") || !j["coeffs"].is_array() || j["coeffs"].size() != 6)
        throw Error(ErrorCode::Validation, "map json needs a 6-entry coeffs array");
    std::array<Complex, 6> c;
    for (size_t i = 0; i < 6; ++i)
        c[i] = Complex(j["coeffs"][i][0].get<double>(), j["coeffs"][i][1].get<double>());
    return RationalMap2(c);
}

Complex cycle_eigenvalue(const RationalMap2& g, const std::vector<SpherePoint>& orbit) {
    Complex prod = 1.0;
    for (const auto& z : orbit) prod *= g.multiplier(z);
    return prod;
}

RationalMap2 random_map(Rng& rng) {
    for (int tries = 0; tries < 100; ++tries) {
        std::array<Complex, 6> c;
        for (auto& v : c) v = rng.complex_in_box(1.0);
        try {
            return RationalMap2(c);
        } catch (const Error&) {
        }
    }
    throw Error(ErrorCode::Validation, "random map sampling failed");
}

MobiusTransform random_mobius(Rng& rng) {
    for (int tries = 0; tries < 100; ++tries) {
        Complex p = rng.complex_in_box(1.0), q = rng.complex_in_box(1.0);
        Complex r = rng.complex_in_box(1.0), s = rng.complex_in_box(1.0);
        if (std::abs(p * s - q * r) < 0.1) continue;
        return MobiusTransform(p, q, r, s);
    }
    throw Error(ErrorCode::Validation, "random Mobius sampling failed");
}

}  // namespace qrm
