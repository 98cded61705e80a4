#include "qrm/per_curves.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"
#include "qrm/cycle_solver.hpp"
#include "qrm/moduli.hpp"

namespace qrm {

ProjectiveCurve ProjectiveCurve::exact(TriQ p) {
    if (p.is_zero()) throw Error(ErrorCode::Validation, "zero polynomial is not a curve");
    if (!p.is_homogeneous()) throw Error(ErrorCode::Validation, "curve polynomial not homogeneous");
    ProjectiveCurve c;
    c.exact_ = true;
    c.pq_ = std::move(p);
    c.pc_ = to_numeric(c.pq_);
    return c;
}

ProjectiveCurve ProjectiveCurve::numeric(TriC p) {
    if (p.is_zero()) throw Error(ErrorCode::Validation, "zero polynomial is not a curve");
    if (!p.is_homogeneous()) throw Error(ErrorCode::Validation, "curve polynomial not homogeneous");
    ProjectiveCurve c;
    c.exact_ = false;
    c.pc_ = std::move(p);
    return c;
}

const TriQ& ProjectiveCurve::exact_poly() const {
    if (!exact_) throw Error(ErrorCode::Validation, "curve has numeric coefficients");
    return pq_;
}

namespace {

template <class C>
TriPoly<C> per_poly(int n, const C& rho) {
    using P = TriPoly<C>;
    P W = P::W(), X = P::X(), Y = P::Y();
    if (n == 1) {
        // rho^3 W - rho^2 X + rho Y - X + 2 W
        return W * (rho * rho * rho + C(2)) + X * (C(0) - rho * rho - C(1)) + Y * rho;
    }
    if (n == 2) {
        // rho W - 2 X - Y
        return W * rho - X * C(2) - Y;
    }
    if (n == 3) {
        // rho^2 W^3 - rho [W X (2X + Y) + 3 W^2 X + 2 W^3]
        //   + (X+Y)^2 (2X+Y) - W X (X + 2Y) + 12 W^2 X + 28 W^3
        P W2 = W * W, W3 = W * W * W;
        P XY = X + Y;
        P twoXY = X * C(2) + Y;
        P bracket = W * X * twoXY + W2 * X * C(3) + W3 * C(2);
        return W3 * (rho * rho) - bracket * rho + XY * XY * twoXY - W * X * (X + Y * C(2)) +
               W2 * X * C(12) + W3 * C(28);
    }
    throw Error(ErrorCode::UnsupportedPeriod, "explicit curves exist for n <= 3 only");
}

}  // namespace

ProjectiveCurve per_curve(int n, const GaussianRational& rho) {
    return ProjectiveCurve::exact(per_poly<GaussianRational>(n, rho));
}

ProjectiveCurve per_curve(int n, Complex rho) {
    return ProjectiveCurve::numeric(per_poly<Complex>(n, rho));
}

long long d_of_n(int n) {
    if (n < 1 || n > 62) throw Error(ErrorCode::Validation, "d(n) supported for 1 <= n <= 62");
    static std::vector<long long> cache = {0};  // cache[0] unused
    for (int k = int(cache.size()); k <= n; ++k) {
        long long total = 1LL << (k - 1);
        for (int m = 1; m < k; ++m)
            if (k % m == 0) total -= cache[size_t(m)];
        cache.push_back(total);
    }
    return cache[size_t(n)];
}

bool divides(const ProjectiveCurve& c1, const ProjectiveCurve& c2) {
    return tri_divide(c2.exact_poly(), c1.exact_poly()).remainder.is_zero();
}

Decomposition decompose(int n) {
    GaussianRational one(1);
    if (n == 2) {
        Decomposition dec;
        dec.known_factors.emplace_back("Per_1(-1)", per_poly<GaussianRational>(1, -one));
        TriDivision div =
            tri_divide(per_poly<GaussianRational>(2, one), dec.known_factors[0].second);
        if (!div.remainder.is_zero())
            throw Error(ErrorCode::NonConvergent, "Per_2(1) does not factor as expected");
        dec.sharp = div.quotient;
        return dec;
    }
    if (n == 3) {
        // Per_1(w) Per_1(conj w) for the primitive cube roots of unity:
        // (3W + w(X+Y))(3W + conj(w)(X+Y)) = 9W^2 - 3W(X+Y) + (X+Y)^2
        TriQ W = TriQ::W(), XY = TriQ::X() + TriQ::Y();
        TriQ q = W * W * GaussianRational(9) - W * XY * GaussianRational(3) + XY * XY;
        Decomposition dec;
        dec.known_factors.emplace_back("Per_1(w) Per_1(conj w)", q);
        TriDivision div = tri_divide(per_poly<GaussianRational>(3, one), q);
        if (!div.remainder.is_zero())
            throw Error(ErrorCode::NonConvergent, "Per_3(1) does not factor as expected");
        dec.sharp = div.quotient;
        return dec;
    }
    throw Error(ErrorCode::UnsupportedPeriod, "decompose supports n in {2, 3}");
}

namespace {

struct ShearChoice {
    GaussianRational a, b;  // (W, X, Y) -> (W + a Y, X + b Y, Y)
};

const std::vector<ShearChoice>& shear_ladder() {
    static std::vector<ShearChoice> ladder = [] {
        std::vector<ShearChoice> v;
        GaussianRational i = GaussianRational::i();
        std::vector<GaussianRational> small = {GaussianRational(0), GaussianRational(1),
                                               GaussianRational(-1), GaussianRational(2),
                                               GaussianRational(-2), i, -i, GaussianRational(3)};
        for (const auto& a : {GaussianRational(0), GaussianRational(1), GaussianRational(-1),
                              GaussianRational(2)})
            for (const auto& b : small) v.push_back({a, b});
        return v;
    }();
    return ladder;
}

template <class C>
std::vector<std::vector<C>> sylvester(const std::vector<C>& a, const std::vector<C>& b) {
    int da = int(a.size()) - 1, db = int(b.size()) - 1;
    int n = da + db;
    std::vector<std::vector<C>> m(size_t(n), std::vector<C>(size_t(n), C(0)));
    for (int r = 0; r < db; ++r)
        for (int k = 0; k <= da; ++k) m[size_t(r)][size_t(r + k)] = a[size_t(da - k)];
    for (int r = 0; r < da; ++r)
        for (int k = 0; k <= db; ++k) m[size_t(db + r)][size_t(r + k)] = b[size_t(db - k)];
    return m;
}

// one projective root of the eliminated variable, with multiplicity
struct ProjRoot {
    bool at_wzero;  // the root [w':x'] = [0:1]
    Complex u;      // x'/w' for finite roots
    int multiplicity;
};

struct ElimResult {
    std::vector<ProjRoot> roots;
    bool resultant_zero = false;
};

// exact path: resultant by evaluation/interpolation, multiplicities by
// square-free decomposition
ElimResult eliminate_exact(const TriQ& h1, const TriQ& h2) {
    int d1 = h1.degree(), d2 = h2.degree();
    int m = d1 * d2;
    std::vector<GaussianRational> nodes, values;
    for (int t = 0; t <= m; ++t) {
        GaussianRational x{long(t)};
        GaussianRational one{1};
        auto a = h1.y_slice(one, x);
        auto b = h2.y_slice(one, x);
        nodes.push_back(x);
        values.push_back(exact_determinant(sylvester(a, b)));
    }
    PolyQ1 res = polyq_interpolate(nodes, values);
    ElimResult out;
    if (polyq_degree(res) < 0) {
        out.resultant_zero = true;
        return out;
    }
    int p = polyq_degree(res);
    if (m - p > 0) out.roots.push_back({true, Complex(0.0), m - p});
    for (const auto& sf : polyq_squarefree(res)) {
        RootResult rr = aberth_roots(polyq_to_complex(sf.factor));
        if (!rr.converged)
            throw Error(ErrorCode::RootFindingStalled, "resultant root finding stalled");
        for (const auto& r : rr.roots) out.roots.push_back({false, r, sf.multiplicity});
    }
    return out;
}

ElimResult eliminate_numeric(const TriC& h1, const TriC& h2) {
    int d1 = h1.degree(), d2 = h2.degree();
    int m = d1 * d2;
    std::vector<Complex> nodes, values;
    double mag1 = 0.0, mag2 = 0.0;
    for (const auto& [e, c] : h1.terms) mag1 = std::max(mag1, std::abs(c));
    for (const auto& [e, c] : h2.terms) mag2 = std::max(mag2, std::abs(c));
    for (int t = 0; t <= m; ++t) {
        Complex x = 1.37 * std::exp(Complex(0.0, 2.0 * kPi * (double(t) + 0.21) / double(m + 1)));
        auto a = h1.y_slice(Complex(1.0), x);
        auto b = h2.y_slice(Complex(1.0), x);
        nodes.push_back(x);
        values.push_back(numeric_determinant(sylvester(a, b)));
    }
    Poly res = poly_interpolate(nodes, values);
    double scale = std::pow(std::max(mag1, 1.0), d2) * std::pow(std::max(mag2, 1.0), d1);
    ElimResult out;
    double maxc = 0.0;
    for (const auto& c : res) maxc = std::max(maxc, std::abs(c));
    if (maxc < 1e-10 * scale) {
        out.resultant_zero = true;
        return out;
    }
    poly_trim(res, 1e-9);
    int p = int(res.size()) - 1;
    if (m - p > 0) out.roots.push_back({true, Complex(0.0), m - p});
    RootResult rr = aberth_roots(res);
    if (!rr.converged)
        throw Error(ErrorCode::RootFindingStalled, "resultant root finding stalled");
    // numeric coefficients cannot support a square-free split, so the
    // multiplicities come from clustering at radius 1e-7
    for (const auto& cl : cluster_roots(rr.roots, 1e-7))
        out.roots.push_back({false, cl.center, cl.multiplicity});
    return out;
}

// common roots in Y over one projective root of the resultant; genericity
// demands exactly one
std::optional<Complex> common_y(const TriC& h1, const TriC& h2, Complex w, Complex x) {
    auto a = h1.y_slice(w, x);
    auto b = h2.y_slice(w, x);
    RootResult ra = aberth_roots(a);
    if (ra.roots.empty()) return std::nullopt;
    double mag2 = 0.0;
    for (const auto& c : b) mag2 = std::max(mag2, std::abs(c));
    std::vector<Complex> hits;
    for (const auto& y : ra.roots) {
        Complex v = 0.0;
        double pw = 1.0;
        double ay = std::abs(y);
        double noise = 0.0;
        for (size_t k = 0; k < b.size(); ++k) {
            v += b[k] * std::pow(y, double(k));
            noise += std::abs(b[k]) * pw;
            pw *= ay;
        }
        if (std::abs(v) < 1e-6 * std::max(noise, mag2)) hits.push_back(y);
    }
    if (hits.empty()) return std::nullopt;
    // all hits must agree (one point above this root)
    for (const auto& h : hits)
        if (std::abs(h - hits.front()) > 1e-6 * (1.0 + std::abs(hits.front())))
            return std::nullopt;
    Complex mean = 0.0;
    for (const auto& h : hits) mean += h;
    return mean / double(hits.size());
}

// exact recognition of a coordinate value against small rationals
std::optional<GaussianRational> recognize_rational(Complex v, long max_den = 64) {
    auto near = [](double x, long num, long den) {
        return std::abs(x - double(num) / double(den)) < 1e-9;
    };
    auto snap = [&](double x) -> std::optional<mpq_class> {
        for (long den = 1; den <= max_den; ++den) {
            long num = std::lround(x * double(den));
            if (std::abs(num) > 1000 * den) return std::nullopt;
            if (near(x, num, den)) {
                mpq_class q(num, den);
                q.canonicalize();
                return q;
            }
        }
        return std::nullopt;
    };
    auto re = snap(v.real());
    if (!re) return std::nullopt;
    auto im = snap(v.imag());
    if (!im) return std::nullopt;
    return GaussianRational(*re, *im);
}

void attach_ideal_label(CurvePoint& pt) {
    if (std::abs(pt.coords[0]) > 1e-9) return;  // not on the line at infinity
    if (std::abs(pt.coords[1]) < 1e-12) return;  // [0:0:1], s = infinity
    Complex s = pt.coords[2] / pt.coords[1];
    IdealPoint ip = ideal_point(s);
    if (!ip.label) {
        // numeric slack for clustered coordinates
        for (int q = 2; q <= 64 && !ip.label; ++q)
            for (int p = 1; 2 * p <= q; ++p) {
                if (std::gcd(p, q) != 1) continue;
                if (std::abs(s - 2.0 * std::cos(2.0 * kPi * double(p) / double(q))) < 1e-7) {
                    ip.label = std::make_pair(p, q);
                    break;
                }
            }
    }
    pt.ideal_label = ip.label;
}

}  // namespace

IntersectionCycle intersect(const ProjectiveCurve& c1, const ProjectiveCurve& c2) {
    int d1 = c1.degree(), d2 = c2.degree();
    bool exact = c1.is_exact() && c2.is_exact();
    std::string last_failure = "no usable shear";

    for (const auto& shear : shear_ladder()) {
        TriQ h1q, h2q;
        TriC h1c, h2c;
        Complex ca = shear.a.to_complex(), cb = shear.b.to_complex();
        if (exact) {
            h1q = c1.exact_poly().shear(shear.a, shear.b);
            h2q = c2.exact_poly().shear(shear.a, shear.b);
            h1c = to_numeric(h1q);
            h2c = to_numeric(h2q);
            // regular shear: the Y^d coefficients must not vanish
            if (h1q.terms.find({0, 0, d1}) == h1q.terms.end()) continue;
            if (h2q.terms.find({0, 0, d2}) == h2q.terms.end()) continue;
        } else {
            h1c = c1.numeric_poly().shear(ca, cb);
            h2c = c2.numeric_poly().shear(ca, cb);
            auto lead1 = h1c.terms.find({0, 0, d1});
            auto lead2 = h2c.terms.find({0, 0, d2});
            if (lead1 == h1c.terms.end() || std::abs(lead1->second) < 1e-8) continue;
            if (lead2 == h2c.terms.end() || std::abs(lead2->second) < 1e-8) continue;
        }

        ElimResult elim = exact ? eliminate_exact(h1q, h2q) : eliminate_numeric(h1c, h2c);
        if (elim.resultant_zero) {
            if (exact)
                throw Error(ErrorCode::CommonComponent, "curves share a component");
            throw Error(ErrorCode::CommonComponent, "resultant vanishes numerically");
        }

        IntersectionCycle cycle;
        bool generic = true;
        for (const auto& root : elim.roots) {
            Complex w = root.at_wzero ? 0.0 : 1.0;
            Complex x = root.at_wzero ? 1.0 : root.u;
            auto y = common_y(h1c, h2c, w, x);
            if (!y) {
                generic = false;
                last_failure = "projection direction not generic";
                break;
            }
            CurvePoint pt;
            pt.multiplicity = root.multiplicity;
            // undo the shear: (w, x, y) = (w' + a y', x' + b y', y')
            pt.coords = {w + ca * *y, x + cb * *y, *y};
            // normalize: affine points get W = 1, infinity points X = 1
            double mag = 0.0;
            for (const auto& c : pt.coords) mag = std::max(mag, std::abs(c));
            Complex pivot;
            if (std::abs(pt.coords[0]) > 1e-9 * mag)
                pivot = pt.coords[0];
            else if (std::abs(pt.coords[1]) > 1e-9 * mag)
                pivot = pt.coords[1];
            else
                pivot = pt.coords[2];
            for (auto& c : pt.coords) c /= pivot;
            cycle.points.push_back(pt);
        }
        if (!generic) continue;

        if (cycle.total() != d1 * d2)
            throw Error(ErrorCode::NonConvergent, "intersection multiplicities missed Bezout");

        if (exact) {
            for (auto& pt : cycle.points) {
                auto rw = recognize_rational(pt.coords[0]);
                auto rx = recognize_rational(pt.coords[1]);
                auto ry = recognize_rational(pt.coords[2]);
                if (rw && rx && ry) {
                    GaussianRational vw = *rw, vx = *rx, vy = *ry;
                    if (c1.exact_poly().evaluate(vw, vx, vy).is_zero() &&
                        c2.exact_poly().evaluate(vw, vx, vy).is_zero()) {
                        pt.exact = true;
                        pt.exact_coords = {vw, vx, vy};
                        pt.coords = {vw.to_complex(), vx.to_complex(), vy.to_complex()};
                    }
                }
            }
        }
        for (auto& pt : cycle.points) attach_ideal_label(pt);
        std::sort(cycle.points.begin(), cycle.points.end(),
                  [](const CurvePoint& a, const CurvePoint& b) {
                      if (a.coords[1].real() != b.coords[1].real())
                          return a.coords[1].real() < b.coords[1].real();
                      return a.coords[2].real() < b.coords[2].real();
                  });
        return cycle;
    }
    throw Error(ErrorCode::NonConvergent, last_failure);
}

IntersectionCycle intersect_at_infinity(const ProjectiveCurve& c) {
    int d = c.degree();
    IntersectionCycle cycle;
    if (c.is_exact()) {
        const TriQ& h = c.exact_poly();
        PolyQ1 p(size_t(d) + 1);
        bool any = false;
        for (const auto& [e, coeff] : h.terms)
            if (e[0] == 0) {
                p[size_t(e[2])] += coeff;
                any = true;
            }
        polyq_trim(p);
        if (!any || polyq_degree(p) < 0)
            throw Error(ErrorCode::ContainsInfinityLine, "W divides the curve polynomial");
        int pd = polyq_degree(p);
        if (d - pd > 0) {
            CurvePoint pt;
            pt.multiplicity = d - pd;
            pt.coords = {0.0, 0.0, 1.0};
            pt.exact = true;
            pt.exact_coords = {GaussianRational(0), GaussianRational(0), GaussianRational(1)};
            cycle.points.push_back(pt);
        }
        for (const auto& sf : polyq_squarefree(p)) {
            if (polyq_degree(sf.factor) == 1) {
                GaussianRational t = -sf.factor[0] / sf.factor[1];
                CurvePoint pt;
                pt.multiplicity = sf.multiplicity;
                pt.exact = true;
                pt.exact_coords = {GaussianRational(0), GaussianRational(1), t};
                pt.coords = {Complex(0.0), Complex(1.0), t.to_complex()};
                cycle.points.push_back(pt);
                continue;
            }
            RootResult rr = aberth_roots(polyq_to_complex(sf.factor));
            if (!rr.converged)
                throw Error(ErrorCode::RootFindingStalled, "restriction root finding stalled");
            for (const auto& r : rr.roots) {
                CurvePoint pt;
                pt.multiplicity = sf.multiplicity;
                pt.coords = {Complex(0.0), Complex(1.0), r};
                cycle.points.push_back(pt);
            }
        }
    } else {
        const TriC& h = c.numeric_poly();
        Poly p(size_t(d) + 1, Complex(0.0));
        for (const auto& [e, coeff] : h.terms)
            if (e[0] == 0) p[size_t(e[2])] += coeff;
        double maxc = 0.0;
        for (const auto& v : p) maxc = std::max(maxc, std::abs(v));
        double scale = 0.0;
        for (const auto& [e, coeff] : h.terms) scale = std::max(scale, std::abs(coeff));
        if (maxc < 1e-10 * std::max(scale, 1e-300))
            throw Error(ErrorCode::ContainsInfinityLine, "W divides the curve numerically");
        poly_trim(p, 1e-9);
        int pd = int(p.size()) - 1;
        if (d - pd > 0) {
            CurvePoint pt;
            pt.multiplicity = d - pd;
            pt.coords = {0.0, 0.0, 1.0};
            cycle.points.push_back(pt);
        }
        RootResult rr = aberth_roots(p);
        for (const auto& cl : cluster_roots(rr.roots, 1e-7)) {
            CurvePoint pt;
            pt.multiplicity = cl.multiplicity;
            pt.coords = {Complex(0.0), Complex(1.0), cl.center};
            cycle.points.push_back(pt);
        }
    }
    if (cycle.total() != d)
        throw Error(ErrorCode::NonConvergent, "restriction degree bookkeeping failed");
    for (auto& pt : cycle.points) attach_ideal_label(pt);
    return cycle;
}

bool member(const RationalMap2& g, int n, Complex rho, double tol) {
    if (n < 1 || n > 12) throw Error(ErrorCode::PeriodTooLarge, "membership test needs n <= 12");
    bool cycle_verdict = false;
    if (n == 1) {
        for (const auto& fp : g.fixed_points())
            if (std::abs(fp.eigenvalue - rho) < tol) cycle_verdict = true;
    } else {
        for (const auto& rec : cycles(g, n))
            if (std::abs(rec.eigenvalue - rho) < tol) cycle_verdict = true;
    }
    if (n <= 3) {
        ModuliPoint pt = moduli_point(g);
        ProjectiveCurve c = per_curve(n, rho);
        Complex v = c.evaluate(1.0, pt.X, pt.Y);
        double scale = std::pow(std::max({1.0, std::abs(pt.X), std::abs(pt.Y)}), c.degree());
        double res = std::abs(v) / scale;
        // strong disagreement between the dynamical and algebraic verdicts
        if (cycle_verdict && res > 1e-4)
            throw Error(ErrorCode::NonConvergent, "cycle found but curve value is large");
        if (!cycle_verdict && res < 1e-10 && std::abs(rho - 1.0) > 1e-6)
            throw Error(ErrorCode::NonConvergent, "curve vanishes but no cycle was found");
    }
    return cycle_verdict;
}

std::string intersection_cycle_json(const IntersectionCycle& cycle) {
    nlohmann::json j;
    j["points"] = nlohmann::json::array();
    std::vector<std::string> labels;
    for (const auto& pt : cycle.points) {
        nlohmann::json p;
        auto coord = [&](int k) -> nlohmann::json {
            if (pt.exact) {
                const GaussianRational& v = pt.exact_coords[size_t(k)];
                return nlohmann::json::array({v.re.get_str(), v.im.get_str()});
            }
            return nlohmann::json::array(
                {pt.coords[size_t(k)].real(), pt.coords[size_t(k)].imag()});
        };
        p["W"] = coord(0);
        p["X"] = coord(1);
        p["Y"] = coord(2);
        p["mult"] = pt.multiplicity;
        j["points"].push_back(p);
        if (pt.ideal_label)
            labels.push_back(std::to_string(pt.ideal_label->first) + "/" +
                             std::to_string(pt.ideal_label->second));
    }
    j["total"] = cycle.total();
    j["ideal_labels"] = labels;
    return j.dump();
}

}  // namespace qrm
