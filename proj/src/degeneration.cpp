#include "qrm/degeneration.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "qrm/local_invariants.hpp"

namespace qrm {

namespace {

// Extended precision kicks in for eps <= 1e-8, where gamma ~ 4/eps starts
// to amplify cancellation, or when requested via QRM_PRECISION.
bool want_extended(double eps) {
    if (eps <= 1e-8) return true;
    const char* env = std::getenv("QRM_PRECISION");
    return env && std::string(env) == "extended";
}

template <class Real>
struct PathScalars {
    std::complex<Real> alpha, beta, gamma, delta, sqrt_eps;
};

template <class Real>
PathScalars<Real> path_scalars(int p, int q, Complex tau, Complex c2, Real eps) {
    using C = std::complex<Real>;
    Real ang = Real(2) * std::numbers::pi_v<Real> * Real(p) / Real(q);
    C omega(std::cos(ang), std::sin(ang));
    C t(Real(tau.real()), Real(tau.imag()));
    C c(Real(c2.real()), Real(c2.imag()));
    C se = std::sqrt(C(eps));
    C alpha = omega * (C(Real(1)) + t * se + c * C(eps));
    C beta = (C(Real(1)) - C(eps)) / alpha;
    C gamma = (C(Real(2)) - alpha - beta) / C(eps);
    // a = (alpha-1)/sqrt(eps), b = (1-beta)/sqrt(eps), delta = -a-b
    C delta = (beta - alpha) / se;
    return {alpha, beta, gamma, delta, se};
}

template <class Real>
std::complex<Real> eval_F(const std::complex<Real>& gamma, const std::complex<Real>& delta,
                          std::complex<Real> z) {
    return gamma * z / (z * z + delta * z + std::complex<Real>(Real(1)));
}

template <class Real>
std::complex<Real> eval_G(const std::complex<Real>& t, std::complex<Real> z) {
    return z + t + std::complex<Real>(Real(1)) / z;
}

template <class Real>
Real chordal_real(std::complex<Real> a, std::complex<Real> b) {
    Real na = Real(1) + std::norm(a), nb = Real(1) + std::norm(b);
    if (!std::isfinite(na) || !std::isfinite(nb)) {
        // treat overflowed values as the point at infinity
        if (!std::isfinite(na) && !std::isfinite(nb)) return Real(0);
        std::complex<Real> fin = std::isfinite(na) ? a : b;
        return Real(2) / std::sqrt(Real(1) + std::norm(fin));
    }
    return Real(2) * std::abs(a - b) / std::sqrt(na * nb);
}

}  // namespace

GMapInfo g_map(Complex t) {
    GMapInfo info{t, RationalMap2::g_family(t), std::nullopt, 1.0 - t * t, Complex(0.0)};
    if (std::abs(t) > 0.0) info.finite_fixed = -1.0 / t;
    info.index_at_infinity = ind_contour(info.map, SpherePoint::infinity());
    return info;
}

DegenerationPath::DegenerationPath(int p, int q, Complex tau, Complex second_order)
    : p_(p), q_(q), tau_(tau), c2_(second_order) {
    if (q < 2 || p < 1 || p >= q || std::gcd(p, q) != 1)
        throw Error(ErrorCode::Validation, "rotation number must be reduced p/q with q >= 2");
    omega_ = unit_root(p, q);
}

DegenerationPath::Point DegenerationPath::at(double eps) const {
    if (!(eps > 0.0) || eps > 1e-2)
        throw Error(ErrorCode::InadmissiblePath, "eps must lie in (0, 1e-2]");
    auto s = path_scalars<double>(p_, q_, tau_, c2_, eps);
    if (std::abs(s.alpha - 1.0) < 1e-12 || std::abs(s.beta - 1.0) < 1e-12 ||
        std::abs(s.alpha * s.beta - 1.0) < 1e-12)
        throw Error(ErrorCode::InadmissiblePath, "path hits an inadmissible eigenvalue");
    Point pt{eps, s.alpha, s.beta, s.gamma, fNormalForm(s.alpha, s.beta),
             FNormalForm{s.gamma, s.delta}};
    return pt;
}

namespace {

// poles of F^q and G^q by backward iteration (no high-degree composition)
std::vector<Complex> iterated_poles_F(Complex gamma, Complex delta, int q) {
    std::vector<Complex> poles = solve_quadratic(1.0, delta, 1.0);
    std::vector<Complex> frontier = poles;
    for (int k = 1; k < q; ++k) {
        std::vector<Complex> next;
        for (const auto& w : frontier) {
            // F(z) = w: gamma z = w (z^2 + delta z + 1)
            for (const auto& z : solve_quadratic(w, w * delta - gamma, w)) next.push_back(z);
        }
        poles.insert(poles.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return poles;
}

std::vector<Complex> iterated_poles_G(Complex t, int q) {
    std::vector<Complex> poles = {Complex(0.0)};
    std::vector<Complex> frontier = poles;
    for (int k = 1; k < q; ++k) {
        std::vector<Complex> next;
        for (const auto& w : frontier) {
            // G(z) = w: z^2 + (t - w) z + 1 = 0
            for (const auto& z : solve_quadratic(1.0, t - w, 1.0)) next.push_back(z);
        }
        poles.insert(poles.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return poles;
}

template <class Real>
Real limit_error_impl(const DegenerationPath& path, Real eps, double radius, int samples,
                      double margin, const std::vector<Complex>& avoid) {
    auto s = path_scalars<Real>(path.p(), path.q(), path.tau(), Complex(0.0), eps);
    std::complex<Real> t(Real(path.T().real()), Real(path.T().imag()));
    Real sup(0);
    int used = 0;
    for (int j = 0; j < samples; ++j) {
        double ang = 2.0 * kPi * (double(j) + 0.31) / double(samples);
        Complex zd = radius * Complex(std::cos(ang), std::sin(ang));
        bool near_pole = false;
        for (const auto& pole : avoid)
            if (chordal_finite(zd, pole) < margin) near_pole = true;
        if (near_pole) continue;
        std::complex<Real> z(Real(zd.real()), Real(zd.imag()));
        std::complex<Real> fq = z;
        for (int k = 0; k < path.q(); ++k) fq = eval_F(s.gamma, s.delta, fq);
        std::complex<Real> gt = eval_G(t, z);
        sup = std::max(sup, chordal_real(fq, gt));
        ++used;
    }
    if (used == 0)
        throw Error(ErrorCode::PoleCollision, "every test point sits near a pole");
    return sup;
}

}  // namespace

double limit_error(const DegenerationPath& path, double eps, double radius, int samples,
                   double margin) {
    if (radius < 0.2 || radius > 5.0)
        throw Error(ErrorCode::Validation, "test radius must lie in [0.2, 5]");
    auto pt = path.at(eps);
    std::vector<Complex> avoid = iterated_poles_F(pt.F.gamma, pt.F.delta, path.q());
    for (const auto& p : iterated_poles_G(path.T(), 1)) avoid.push_back(p);
    if (want_extended(eps))
        return double(
            limit_error_impl<long double>(path, (long double)(eps), radius, samples, margin, avoid));
    return limit_error_impl<double>(path, eps, radius, samples, margin, avoid);
}

IndexLimitReport index_limit(const DegenerationPath& path, double eps) {
    (void)path.at(eps);  // validates admissibility
    Complex t = path.T();
    IndexLimitReport rep;
    rep.limit_printed = 1.0 - 1.0 / (t * t);
    rep.limit_rederived = 1.0 - double(path.q()) / (t * t);
    if (want_extended(eps)) {
        auto s = path_scalars<long double>(path.p(), path.q(), path.tau(), Complex(0.0),
                                           (long double)(eps));
        std::complex<long double> one(1.0L), aq = one, bq = one;
        for (int k = 0; k < path.q(); ++k) {
            aq *= s.alpha;
            bq *= s.beta;
        }
        std::complex<long double> S = one / (one - aq) + one / (one - bq);
        rep.S = Complex(double(S.real()), double(S.imag()));
        return rep;
    }
    auto s = path_scalars<double>(path.p(), path.q(), path.tau(), Complex(0.0), eps);
    Complex aq = 1.0, bq = 1.0;
    for (int k = 0; k < path.q(); ++k) {
        aq *= s.alpha;
        bq *= s.beta;
    }
    rep.S = 1.0 / (1.0 - aq) + 1.0 / (1.0 - bq);
    return rep;
}

TrackReport track_cycles(const DegenerationPath& path, const std::vector<double>& eps_schedule,
                         int n, double eig_bound) {
    if (n < 2 || n > 10 || n % path.q() != 0)
        throw Error(ErrorCode::Validation, "track_cycles needs n = m q with n <= 10");
    TrackReport rep;
    rep.n = n;
    rep.m = n / path.q();
    rep.T = path.T();

    RationalMap2 g = RationalMap2::g_family(rep.T);
    if (rep.m == 1) {
        for (const auto& fp : g.fixed_points()) {
            if (fp.location.is_inf()) continue;
            CycleRecord rec;
            rec.period = 1;
            rec.points = {fp.location};
            rec.eigenvalue = fp.eigenvalue;
            rep.g_cycles.push_back(rec);
        }
    } else {
        rep.g_cycles = cycles(g, rep.m);
    }

    for (double eps : eps_schedule) {
        auto pt = path.at(eps);
        TrackedStage stage;
        stage.eps = eps;
        for (auto& rec : cycles(pt.F.map(), n)) {
            if (std::abs(rec.eigenvalue) > eig_bound) continue;
            stage.cycles.push_back(std::move(rec));
        }
        rep.stages.push_back(std::move(stage));
    }

    // classify the limit alternative from the finest stage
    const double inf_threshold = 1.0 / std::sqrt(1e-6);
    if (!rep.stages.empty() && !rep.stages.back().cycles.empty()) {
        const auto& last = rep.stages.back().cycles.front();
        int at_inf = 0, at_zero = 0, finite = 0;
        for (const auto& p : last.points) {
            if (p.is_inf() || std::abs(p.z) > inf_threshold)
                ++at_inf;
            else if (std::abs(p.z) < 1.0 / inf_threshold)
                ++at_zero;
            else
                ++finite;
        }
        if (finite == 0 && at_zero == 0)
            rep.alternative = LimitAlternative::InfinityOnly;
        else if (at_zero > 0 && finite == 0)
            rep.alternative = LimitAlternative::CriticalPreorbit;
        else
            rep.alternative = LimitAlternative::FiniteCycleWithInfinity;
        rep.eigenvalue_limit = last.eigenvalue;
    }
    return rep;
}

namespace {

// winding integral of (1 - (g^q)')/(z - g^q) with g^q and its derivative
// evaluated by iteration, which stays accurate where composed-polynomial
// coefficients do not
Complex winding_quadrature_dynamic(const RationalMap2& g, int q, Complex center, double radius,
                                   bool& converged) {
    auto integrand = [&](Complex z) -> Complex {
        Complex cur = z;
        Complex der = 1.0;
        for (int k = 0; k < q; ++k) {
            SpherePoint sp = SpherePoint::finite(cur);
            SpherePoint img = g.evaluate(sp);
            der *= g.multiplier(sp);
            if (img.is_inf()) return Complex(0.0);  // 1/(z - inf) vanishes
            cur = img.z;
        }
        return (1.0 - der) / (z - cur);
    };
    Complex prev = 0.0;
    bool have_prev = false;
    for (int m = 512; m <= (1 << 16); m *= 2) {
        Complex acc = 0.0;
        for (int j = 0; j < m; ++j) {
            double ang = 2.0 * kPi * double(j) / double(m);
            Complex offset = radius * Complex(std::cos(ang), std::sin(ang));
            acc += integrand(center + offset) * offset;
        }
        acc /= double(m);
        if (have_prev && std::abs(acc - prev) < 1e-9) {
            converged = true;
            return acc;
        }
        prev = acc;
        have_prev = true;
    }
    converged = false;
    return prev;
}

// finite poles of f^q for the f normal form: the backward orbit of the
// single finite pole mu, computed through exact quadratics
std::vector<Complex> iterated_poles_f_form(Complex alpha, Complex beta, int q) {
    Complex a2 = 1.0 - alpha, a1 = alpha * (1.0 - beta);
    Complex b1 = beta * (1.0 - alpha), b0 = 1.0 - beta;
    Complex mu = -b0 / b1;
    std::vector<Complex> poles = {mu};
    std::vector<Complex> frontier = poles;
    for (int k = 1; k < q; ++k) {
        std::vector<Complex> next;
        for (const auto& w : frontier) {
            // f(z) = w: a2 z^2 + a1 z = w (b1 z + b0)
            for (const auto& z : solve_quadratic(a2, a1 - w * b1, -w * b0)) next.push_back(z);
        }
        poles.insert(poles.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return poles;
}

}  // namespace

int q_cycle_count(const DegenerationPath& path, double eps, double r) {
    auto pt = path.at(eps);
    int q = path.q();
    RationalMap2 f = pt.f.map();
    std::vector<Complex> poles = iterated_poles_f_form(pt.alpha, pt.beta, q);

    double sq = std::sqrt(eps);
    for (int attempt = 0; attempt < 6; ++attempt) {
        double radius = r * sq * std::pow(1.01, double(attempt));
        long total = (1L << q) + 1;
        bool good = true;
        for (int j = 1; j < q && good; ++j) {
            Complex wbar = std::conj(path.omega());
            Complex cj = 1.0;
            for (int k = 0; k < j; ++k) cj *= wbar;
            // poles strictly inside; a pole hugging the boundary forces a retry
            int inside = 0;
            for (const auto& p : poles) {
                double d = std::abs(p - cj);
                if (d < radius * 0.999)
                    ++inside;
                else if (d < radius * 1.001)
                    good = false;
            }
            if (!good) break;
            bool converged = false;
            Complex val = winding_quadrature_dynamic(f, q, cj, radius, converged);
            if (!converged) {
                good = false;
                break;
            }
            long w = std::lround(val.real());
            if (std::abs(val - Complex(double(w))) >= 0.25) {
                good = false;
                break;
            }
            total -= w + inside;
        }
        if (good) return int(total);
    }
    throw Error(ErrorCode::FixedPointOnBoundary,
                "a fixed point or pole stayed on the disc boundary after retries");
}

Complex g0_control_integral(double r, int m) {
    if (m < 1 || m > 3) throw Error(ErrorCode::Validation, "control integral supports m <= 3");
    RationalMap2 g0 = RationalMap2::g_family(0.0);
    bool converged = false;
    Complex val = winding_quadrature_dynamic(g0, m, Complex(0.0), r, converged);
    if (!converged) throw Error(ErrorCode::NonConvergent, "control quadrature did not settle");
    return val;
}

double basin_extent(const RationalMap2& map, const CycleRecord& cycle, double radius,
                    int resolution, int max_iter) {
    if (std::abs(cycle.eigenvalue) >= 1.0 - 1e-9)
        throw Error(ErrorCode::Validation, "basin extent needs an attracting cycle");
    std::optional<Complex> target;
    for (const auto& p : cycle.points) {
        if (p.is_inf()) continue;
        if (!target || std::abs(p.z) < std::abs(*target)) target = p.z;
    }
    if (!target) throw Error(ErrorCode::Validation, "cycle has no finite point");

    const double capture_tol = 1e-3;
    double fail_min = radius * 2.0;
    for (int iy = 0; iy < resolution; ++iy) {
        for (int ix = 0; ix < resolution; ++ix) {
            Complex offset(-radius + 2.0 * radius * (double(ix) + 0.5) / double(resolution),
                           -radius + 2.0 * radius * (double(iy) + 0.5) / double(resolution));
            double dist = std::abs(offset);
            if (dist >= fail_min) continue;  // already beyond a known failure
            SpherePoint z = SpherePoint::finite(*target + offset);
            bool captured = false;
            for (int it = 0; it < max_iter && !captured; ++it) {
                z = map.evaluate(z);
                for (const auto& p : cycle.points)
                    if (chordal(z, p) < capture_tol) {
                        captured = true;
                        break;
                    }
            }
            if (!captured) fail_min = std::min(fail_min, dist);
        }
    }
    return std::min(fail_min, radius);
}

}  // namespace qrm
