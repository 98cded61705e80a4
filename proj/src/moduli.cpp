#include "qrm/moduli.hpp"

#include <algorithm>
#include <numeric>

#include "qrm/errors.hpp"

namespace qrm {

EigenTriple eigen_triple(const RationalMap2& g) {
    EigenTriple triple;
    size_t k = 0;
    for (const auto& fp : g.fixed_points())
        for (int m = 0; m < fp.multiplicity; ++m) {
            if (k >= 3) throw Error(ErrorCode::NonConvergent, "more than three fixed points");
            triple.values[k++] = fp.eigenvalue;
        }
    if (k != 3) throw Error(ErrorCode::NonConvergent, "fixed points do not account for three");
    if (triple.abc_residual() > 1e-9)
        throw Error(ErrorCode::NonConvergent, "eigenvalue relation residual above 1e-9");
    return triple;
}

ModuliPoint moduli_point(const RationalMap2& g) {
    EigenTriple t = eigen_triple(g);
    const Complex &a = t.values[0], &b = t.values[1], &c = t.values[2];
    ModuliPoint pt{a + b + c, a * b + a * c + b * c};
    Complex sigma3 = a * b * c;
    double scale = std::max({1.0, std::abs(pt.X), std::abs(sigma3)});
    if (std::abs(sigma3 - (pt.X - 2.0)) > 1e-8 * scale)
        throw Error(ErrorCode::NonConvergent, "sigma3 != X - 2");
    return pt;
}

std::array<Complex, 2> FNormalForm::fixed_ab() const {
    Complex disc = delta * delta - 4.0 * (1.0 - gamma);
    Complex sq = std::sqrt(disc);
    return {(-delta + sq) / 2.0, (-delta - sq) / 2.0};
}

fNormalForm::fNormalForm(Complex a, Complex b) : alpha(a), beta(b) {
    if (std::abs(alpha - 1.0) < 1e-12 || std::abs(beta - 1.0) < 1e-12 ||
        std::abs(alpha * beta - 1.0) < 1e-12)
        throw Error(ErrorCode::InadmissibleMarking, "f form needs alpha, beta, alpha beta != 1");
}

FConversion f_to_F(const fNormalForm& nf, SqrtBranch branch) {
    Complex eps = nf.epsilon();
    Complex s = std::sqrt(eps);  // principal branch
    Complex gamma = nf.gamma();
    if (std::abs(gamma) < 1e-12 || std::abs(nf.alpha + nf.beta - 2.0) < 1e-12)
        throw Error(ErrorCode::InadmissibleMarking,
                    "third fixed point is critical (gamma = 0)");

    Complex a = (nf.alpha - 1.0) / s;
    Complex b = (1.0 - nf.beta) / s;
    Complex delta = -a - b;

    FConversion out;
    out.F = FNormalForm{gamma, delta};
    out.a = a;
    out.b = b;
    out.phi = MobiusTransform(b, -a * b, a, -a * b);
    SpherePoint cp = out.phi.apply(SpherePoint::finite(1.0));
    SpherePoint cm = out.phi.apply(SpherePoint::finite(-1.0));
    for (const auto& chi : {cp, cm})
        if (!chi.is_inf() && std::abs(chi.z - 1.0) < 1e-10)
            throw Error(ErrorCode::InadmissibleMarking, "critical point collides with c = 1");
    if (branch == SqrtBranch::Plus) {
        out.chi_plus = cp;
        out.chi_minus = cm;
    } else {
        out.chi_plus = cm;
        out.chi_minus = cp;
    }
    return out;
}

fNormalForm F_to_f(const FNormalForm& nf) {
    Complex disc = nf.delta * nf.delta - 4.0 * (1.0 - nf.gamma);
    double scale = std::max({1.0, std::norm(nf.delta), std::abs(nf.gamma)});
    if (std::abs(disc) < 1e-12 * scale)
        throw Error(ErrorCode::DegenerateFixedPoints, "delta^2 = 4(1-gamma), a = b");
    if (std::abs(nf.gamma - 1.0) < 1e-12)
        throw Error(ErrorCode::DegenerateFixedPoints, "gamma = 1 puts a fixed point at 0");
    auto ab = nf.fixed_ab();
    return fNormalForm((1.0 - ab[0] * ab[0]) / nf.gamma, (1.0 - ab[1] * ab[1]) / nf.gamma);
}

namespace {

std::optional<std::pair<int, int>> label_search(Complex s, double tol) {
    if (std::abs(s.imag()) > tol) return std::nullopt;
    for (int q = 2; q <= 64; ++q)
        for (int p = 1; 2 * p <= q; ++p) {
            if (std::gcd(p, q) != 1) continue;
            if (std::abs(s - 2.0 * std::cos(2.0 * kPi * double(p) / double(q))) < tol)
                return std::make_pair(p, q);
        }
    return std::nullopt;
}

}  // namespace

IdealPoint ideal_point(Complex s) {
    IdealPoint pt;
    pt.s = s;
    pt.label = label_search(s, 1e-9);
    return pt;
}

IdealPoint ideal_point(int p, int q) {
    if (q < 2 || p < 1 || p >= q || std::gcd(p, q) != 1)
        throw Error(ErrorCode::Validation, "rotation number must be reduced p/q with q >= 2");
    if (2 * p > q) p = q - p;  // infinity_{p/q} = infinity_{(q-p)/q}
    IdealPoint pt;
    pt.s = 2.0 * std::cos(2.0 * kPi * double(p) / double(q));
    pt.label = std::make_pair(p, q);
    return pt;
}

IdealPoint ideal_point_s_infinity() {
    IdealPoint pt;
    pt.s_infinite = true;
    return pt;
}

IdealPoint ideal_limit(const std::vector<ModuliPoint>& seq) {
    if (seq.size() < 2) throw Error(ErrorCode::Validation, "need at least two moduli points");
    double x_first = std::abs(seq.front().X);
    double x_last = std::abs(seq.back().X);
    if (x_last < 1e3 || x_last <= x_first)
        throw Error(ErrorCode::NotEscaping, "|X| does not escape along the sequence");

    auto ratio = [](const ModuliPoint& p) { return p.Y / (p.X - 2.0); };
    Complex est = ratio(seq.back());
    if (seq.size() >= 3) {
        Complex s0 = ratio(seq[seq.size() - 3]);
        Complex s1 = ratio(seq[seq.size() - 2]);
        Complex s2 = est;
        Complex denom = (s2 - s1) - (s1 - s0);
        if (std::abs(denom) > 1e-14 * std::max(1.0, std::abs(s2)))
            est = s2 - (s2 - s1) * (s2 - s1) / denom;  // Aitken extrapolation
    }
    IdealPoint pt;
    pt.s = est;
    pt.label = label_search(est, 1e-6);
    if (pt.label)
        pt.s = 2.0 * std::cos(2.0 * kPi * double(pt.label->first) / double(pt.label->second));
    return pt;
}

FromModuliResult from_moduli(const ModuliPoint& pt) {
    std::vector<Complex> roots = solve_cubic(1.0, -pt.X, pt.Y, -(pt.X - 2.0));
    if (roots.size() != 3) throw Error(ErrorCode::NonConvergent, "characteristic cubic degenerated");

    std::array<int, 3> order = {0, 1, 2};
    // try pairings in decreasing |1 - alpha beta| (gamma = the excluded root)
    std::sort(order.begin(), order.end(), [&](int i, int j) {
        Complex pi = roots[size_t((i + 1) % 3)] * roots[size_t((i + 2) % 3)];
        Complex pj = roots[size_t((j + 1) % 3)] * roots[size_t((j + 2) % 3)];
        return std::abs(1.0 - pi) > std::abs(1.0 - pj);
    });
    FromModuliResult res{RationalMap2::polynomial(1.0, 0.0, 0.0), true,
                         {roots[0], roots[1], roots[2]}};
    for (int idx : order) {
        Complex alpha = roots[size_t((idx + 1) % 3)];
        Complex beta = roots[size_t((idx + 2) % 3)];
        if (std::abs(alpha - 1.0) < 1e-9 || std::abs(beta - 1.0) < 1e-9 ||
            std::abs(alpha * beta - 1.0) < 1e-9)
            continue;
        try {
            res.map = RationalMap2::f_form(alpha, beta);
            res.used_f_form = true;
            return res;
        } catch (const Error&) {
        }
    }
    // all pairings inadmissible: build the critically marked form instead
    int best = 0;
    for (int i = 1; i < 3; ++i)
        if (std::abs(roots[size_t(i)]) > std::abs(roots[size_t(best)])) best = i;
    Complex gamma = roots[size_t(best)];
    if (std::abs(gamma) < 1e-12)
        throw Error(ErrorCode::NoAdmissiblePair, "no f pairing and no usable F form");
    Complex others = roots[size_t((best + 1) % 3)] + roots[size_t((best + 2) % 3)];
    Complex delta = std::sqrt(4.0 - 2.0 * gamma - gamma * others);
    res.map = RationalMap2::F_form(gamma, delta);
    res.used_f_form = false;
    return res;
}

BoundednessReport boundedness_audit(const std::vector<RationalMap2>& maps) {
    BoundednessReport report;
    for (const auto& g : maps) {
        EigenTriple t = eigen_triple(g);
        for (const auto& v : t.values) report.eig_sup = std::max(report.eig_sup, std::abs(v));
        ModuliPoint pt = moduli_point(g);
        report.xy_sup = std::max({report.xy_sup, std::abs(pt.X), std::abs(pt.Y)});
    }
    for (double theta : {10.0, 100.0, 1000.0}) {
        BoundednessVerdict v;
        v.theta_eig = theta;
        v.theta_xy = 3.0 * theta * theta;
        v.eig_bounded = report.eig_sup <= v.theta_eig;
        v.xy_bounded = report.xy_sup <= v.theta_xy;
        bool forward = !v.eig_bounded || v.xy_bounded;
        bool backward = !v.xy_bounded || (report.eig_sup <= 2.0 * v.theta_xy + 3.0);
        v.agree = forward && backward;
        report.schedule.push_back(v);
    }
    report.bounded_eig = report.eig_sup <= 100.0;
    report.bounded_xy = report.xy_sup <= 3.0 * 100.0 * 100.0;
    report.verdicts_agree = (report.bounded_eig == report.bounded_xy);
    return report;
}

}  // namespace qrm
