#include "qrm/local_invariants.hpp"

#include <algorithm>
#include <functional>

#include "json.hpp"
#include "qrm/cycle_solver.hpp"
#include "qrm/errors.hpp"

namespace qrm {

namespace {

// Evaluation of an iterate pair and its derivatives, switching to the
// u = 1/z chart for |z| > 1 so high-degree powers stay bounded. Values
// carry a common projective scale, which cancels in the integrands.
struct PairEval {
    Poly num, den, dnum, dden;
    size_t K;  // max degree of the pair

    explicit PairEval(const MapPair& pair)
        : num(pair.num), den(pair.den), dnum(poly_derivative(pair.num)),
          dden(poly_derivative(pair.den)) {
        K = std::max(num.size(), den.size()) - 1;
    }

    static Complex eval_scaled(const Poly& p, Complex u, size_t top) {
        // sum p_i u^{top - i} via Horner on reversed, padded coefficients
        Complex acc = 0.0;
        for (size_t m = 0; m <= top; ++m) {
            acc = acc * u;
            if (m < p.size()) acc += p[m];
        }
        return acc;
    }

    // g'(z) and the pair (N, D) up to common scale
    void values(Complex z, Complex& n, Complex& d, Complex& gprime) const {
        if (std::abs(z) <= 1.0) {
            n = poly_eval(num, z);
            d = poly_eval(den, z);
            Complex np = poly_eval(dnum, z);
            Complex dp = poly_eval(dden, z);
            gprime = (np * d - n * dp) / (d * d);
        } else {
            Complex u = 1.0 / z;
            n = eval_scaled(num, u, K);
            d = eval_scaled(den, u, K);
            Complex np = eval_scaled(dnum, u, K - 1);
            Complex dp = eval_scaled(dden, u, K - 1);
            gprime = (np * d - n * dp) * u / (d * d);
        }
    }

    Complex ind_integrand(Complex z) const {
        Complex n, d, gp;
        values(z, n, d, gp);
        return d / (z * d - n);
    }

    Complex mult_integrand(Complex z) const {
        Complex n, d, gp;
        values(z, n, d, gp);
        return (1.0 - gp) * d / (z * d - n);
    }
};

Complex contour_quadrature(const std::function<Complex(Complex)>& f, Complex center,
                           double radius, int samples, bool& converged) {
    Complex prev = 0.0;
    bool have_prev = false;
    for (int m = samples; m <= (1 << 17); m *= 2) {
        Complex acc = 0.0;
        for (int j = 0; j < m; ++j) {
            double ang = 2.0 * kPi * double(j) / double(m);
            Complex offset = radius * Complex(std::cos(ang), std::sin(ang));
            acc += f(center + offset) * offset;
        }
        acc /= double(m);
        if (have_prev && std::abs(acc - prev) < 1e-10) {
            converged = true;
            return acc;
        }
        prev = acc;
        have_prev = true;
    }
    converged = false;
    return prev;
}

struct ContourContext {
    RationalMap2 map;  // chart-swapped when zeta was infinity
    Complex zeta;
    MapPair pair;
    std::vector<Complex> fixed;  // finite fixed points of the iterate
    std::vector<Complex> poles;  // finite poles of the iterate
};

ContourContext make_context(const RationalMap2& g, const SpherePoint& zeta, int q) {
    RationalMap2 work = zeta.is_inf() ? g.inverted_chart() : g;
    Complex center = zeta.is_inf() ? Complex(0.0) : zeta.z;
    MapPair pair = iterate_pair(work, q);
    Poly phi = fixed_point_poly(pair);
    RootResult fr = aberth_roots(phi);
    Poly den = pair.den;
    poly_trim(den, 1e-12);
    RootResult pr = aberth_roots(den);
    return {std::move(work), center, std::move(pair), std::move(fr.roots), std::move(pr.roots)};
}

double nearest_outside_cluster(const std::vector<Complex>& pts, Complex center,
                               double cluster_eps) {
    double best = 1e300;
    for (const auto& p : pts) {
        double d = std::abs(p - center);
        if (d > cluster_eps) best = std::min(best, d);
    }
    return best;
}

void check_explicit_contour(const ContourContext& ctx, const ContourSpec& spec,
                            bool exclude_poles) {
    double cluster_eps = 0.01 * spec.radius;
    for (const auto& p : ctx.fixed) {
        double d = std::abs(p - ctx.zeta);
        if (d > cluster_eps && d <= spec.radius)
            throw Error(ErrorCode::ContourTooLarge, "another fixed point inside the contour");
    }
    if (exclude_poles)
        for (const auto& p : ctx.poles)
            if (std::abs(p - ctx.zeta) <= spec.radius)
                throw Error(ErrorCode::ContourTooLarge, "a pole of the iterate inside the contour");
}

}  // namespace

ContourSpec default_contour(const RationalMap2& g, const SpherePoint& zeta, int q) {
    ContourContext ctx = make_context(g, zeta, q);
    double cluster_eps = 1e-4 * std::max(1.0, std::abs(ctx.zeta));
    double dist = nearest_outside_cluster(ctx.fixed, ctx.zeta, cluster_eps);
    dist = std::min(dist, nearest_outside_cluster(ctx.poles, ctx.zeta, cluster_eps));
    ContourSpec spec;
    spec.center = ctx.zeta;
    spec.radius = (dist < 1e300) ? 0.5 * dist : 1.0;
    return spec;
}

int mult_contour(const RationalMap2& g, const SpherePoint& zeta, const ContourSpec& spec, int q) {
    ContourContext ctx = make_context(g, zeta, q);
    check_explicit_contour(ctx, spec, /*exclude_poles=*/true);
    PairEval ev(ctx.pair);
    bool converged = false;
    Complex val = contour_quadrature([&](Complex z) { return ev.mult_integrand(z); }, spec.center,
                                     spec.radius, spec.samples, converged);
    if (!converged) throw Error(ErrorCode::NonConvergent, "multiplicity quadrature did not settle");
    long m = std::lround(val.real());
    if (std::abs(val - Complex(double(m))) >= 0.25)
        throw Error(ErrorCode::NonConvergent, "multiplicity residual above 0.25");
    if (m < 1) throw Error(ErrorCode::NonConvergent, "nonpositive multiplicity count");
    return int(m);
}

int mult_contour(const RationalMap2& g, const SpherePoint& zeta, int q) {
    return mult_contour(g, zeta, default_contour(g, zeta, q), q);
}

Complex ind_contour(const RationalMap2& g, const SpherePoint& zeta, const ContourSpec& spec,
                    int q) {
    ContourContext ctx = make_context(g, zeta, q);
    check_explicit_contour(ctx, spec, /*exclude_poles=*/false);
    PairEval ev(ctx.pair);
    bool converged = false;
    Complex val = contour_quadrature([&](Complex z) { return ev.ind_integrand(z); }, spec.center,
                                     spec.radius, spec.samples, converged);
    if (!converged) throw Error(ErrorCode::NonConvergent, "index quadrature did not settle");
    return val;
}

Complex ind_contour(const RationalMap2& g, const SpherePoint& zeta, int q) {
    return ind_contour(g, zeta, default_contour(g, zeta, q), q);
}

IndexSumAudit index_sum_audit(const RationalMap2& g) {
    IndexSumAudit audit;
    for (const auto& fp : g.fixed_points()) {
        audit.mult_sum += fp.multiplicity;
        Complex ind;
        if (fp.multiplicity == 1 && std::abs(1.0 - fp.eigenvalue) > 1e-6)
            ind = 1.0 / (1.0 - fp.eigenvalue);
        else
            ind = ind_contour(g, fp.location);
        audit.index_sum += ind;
    }
    audit.residual = std::abs(audit.index_sum - Complex(1.0));
    if (audit.mult_sum != 3)
        throw Error(ErrorCode::NonConvergent, "fixed-point multiplicities do not sum to 3");
    return audit;
}

namespace {

PointClass classify_impl(const RationalMap2& g, const SpherePoint& loc, Complex rho, int period,
                         std::optional<int> q_hint, std::optional<Complex>& index_out,
                         std::optional<int>& degeneracy_out) {
    if (std::abs(rho) <= 1e-9) return PointClass::Superattracting;
    if (std::abs(rho) < 1.0 - 1e-9) return PointClass::Attracting;
    if (std::abs(rho) > 1.0 + 1e-9) return PointClass::Repelling;

    auto pq = nearest_root_of_unity(rho, 64, 1e-9);
    if (q_hint && *q_hint >= 1) pq = std::make_pair(0, *q_hint);
    if (!pq) return PointClass::IndifferentIrrational;
    int q = pq->second;

    if (period * q > 12)
        throw Error(ErrorCode::NeedsHigherPrecision,
                    "parabolic subtype needs an iterate beyond the degree cap");
    int m = mult_contour(g, loc, period * q);
    if ((m - 1) % q != 0)
        throw Error(ErrorCode::NonConvergent, "parabolic multiplicity is not of the form lq+1");
    int ell = (m - 1) / q;
    Complex iota_q = ind_contour(g, loc, period * q);
    degeneracy_out = ell;
    if (!index_out) index_out = iota_q;
    double threshold = double(ell * q + 1) / 2.0;
    double diff = iota_q.real() - threshold;
    if (std::abs(diff) < 1e-10)
        throw Error(ErrorCode::NeedsHigherPrecision,
                    "parabolic index sits on the attracting/indifferent boundary");
    return diff > 0 ? PointClass::ParabolicAttracting : PointClass::ParabolicRepelling;
}

}  // namespace

PointClass classify(FixedPointRecord& record, const RationalMap2& g, std::optional<int> q) {
    if (!record.index && std::abs(1.0 - record.eigenvalue) > 1e-9)
        record.index = 1.0 / (1.0 - record.eigenvalue);
    record.cls = classify_impl(g, record.location, record.eigenvalue, 1, q, record.index,
                               record.degeneracy);
    return record.cls;
}

PointClass classify_cycle(CycleRecord& record, const RationalMap2& g) {
    if (record.points.empty()) throw Error(ErrorCode::Validation, "empty cycle record");
    if (!record.index && std::abs(1.0 - record.eigenvalue) > 1e-9)
        record.index = 1.0 / (1.0 - record.eigenvalue);
    record.cls = classify_impl(g, record.points.front(), record.eigenvalue, record.period,
                               std::nullopt, record.index, record.degeneracy);
    return record.cls;
}

CensusReport fs_audit(const RationalMap2& g, int nmax) {
    CensusReport report;
    report.cycles = nonrepelling_census(g, nmax);
    for (const auto& rec : report.cycles) {
        int ell = rec.degeneracy.value_or(1);
        switch (rec.cls) {
            case PointClass::ParabolicAttracting:
            case PointClass::ParabolicIndifferent:
                report.weighted_count += ell + 1;
                break;
            case PointClass::ParabolicRepelling:
                report.weighted_count += ell;
                break;
            default:
                report.weighted_count += 1;
                break;
        }
    }
    report.violation = report.weighted_count > 2;
    return report;
}

std::string census_report_json(const CensusReport& report) {
    nlohmann::json j;
    j["cycles"] = nlohmann::json::array();
    for (const auto& rec : report.cycles) {
        nlohmann::json c;
        c["period"] = rec.period;
        c["eigenvalue"] = {rec.eigenvalue.real(), rec.eigenvalue.imag()};
        c["class"] = point_class_name(rec.cls);
        if (rec.index)
            c["index"] = {rec.index->real(), rec.index->imag()};
        else
            c["index"] = nullptr;
        j["cycles"].push_back(c);
    }
    j["violation"] = report.violation;
    return j.dump();
}

}  // namespace qrm
