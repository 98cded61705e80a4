#include "qrm/poly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qrm {

std::vector<Complex> solve_cubic(Complex a, Complex b, Complex c, Complex d) {
    double scale = std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    if (scale == 0.0) return {};
    if (std::abs(a) <= 1e-14 * scale) return solve_quadratic(b, c, d);

    Complex sh = b / (3.0 * a);
    Complex p = c / a - 3.0 * sh * sh;
    Complex q = 2.0 * sh * sh * sh - sh * (c / a) + d / a;

    double psc = std::sqrt(std::abs(p));
    double qsc = std::cbrt(std::abs(q));
    double tsc = std::max({psc, qsc, 1e-30});
    std::vector<Complex> troots;
    if (psc < 1e-9 * std::max(1.0, std::abs(sh)) && qsc < 1e-9 * std::max(1.0, std::abs(sh))) {
        troots = {0.0, 0.0, 0.0};  // triple root
    } else {
        Complex disc = -4.0 * p * p * p - 27.0 * q * q;
        if (std::abs(disc) < 1e-13 * tsc * tsc * tsc * tsc * tsc * tsc) {
            // double root r, simple root -2r, with p = -3 r^2, q = 2 r^3
            Complex r = -3.0 * q / (2.0 * p);
            troots = {r, r, -2.0 * r};
        } else {
            Complex s = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
            Complex u3 = -q / 2.0 + s;
            if (std::abs(u3) < std::abs(-q / 2.0 - s)) u3 = -q / 2.0 - s;
            Complex u = std::pow(u3, 1.0 / 3.0);
            Complex v = (std::abs(u) > 0.0) ? -p / (3.0 * u) : Complex(0.0);
            Complex w1 = unit_root(1, 3);
            troots = {u + v, w1 * u + std::conj(w1) * v,
                      std::conj(w1) * u + w1 * v};
        }
    }

    std::vector<Complex> roots;
    roots.reserve(3);
    for (auto t : troots) roots.push_back(t - sh);

    auto f = [&](Complex z) { return ((a * z + b) * z + c) * z + d; };
    auto df = [&](Complex z) { return (3.0 * a * z + 2.0 * b) * z + c; };
    for (auto& r : roots) {
        for (int it = 0; it < 2; ++it) {
            Complex der = df(r);
            if (std::abs(der) < 1e-10 * scale) break;
            Complex step = f(r) / der;
            if (std::abs(step) > 0.5 * (1.0 + std::abs(r))) break;
            r -= step;
        }
    }
    return roots;
}

std::optional<std::pair<int, int>> nearest_root_of_unity(Complex rho, int qmax, double tol) {
    std::optional<std::pair<int, int>> best;
    double best_d = tol;
    for (int q = 1; q <= qmax; ++q)
        for (int p = 0; p < q; ++p) {
            if (std::gcd(p, q) != 1 && !(p == 0 && q == 1)) continue;
            double d = std::abs(rho - unit_root(p, q));
            if (d < best_d) {
                best_d = d;
                best = std::make_pair(p, q);
            }
        }
    return best;
}

Complex poly_eval(const Poly& p, Complex z) {
    Complex acc = 0.0;
    for (size_t i = p.size(); i-- > 0;) acc = acc * z + p[i];
    return acc;
}

Poly poly_derivative(const Poly& p) {
    if (p.size() <= 1) return {};
    Poly d(p.size() - 1);
    for (size_t i = 1; i < p.size(); ++i) d[i - 1] = double(i) * p[i];
    return d;
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, Complex(0.0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

void poly_normalize_max(Poly& p) {
    double m = 0.0;
    for (auto& c : p) m = std::max(m, std::abs(c));
    if (m > 0.0)
        for (auto& c : p) c /= m;
}

void poly_trim(Poly& p, double rel_tol) {
    double m = 0.0;
    for (auto& c : p) m = std::max(m, std::abs(c));
    while (p.size() > 1 && std::abs(p.back()) <= rel_tol * m) p.pop_back();
    if (p.size() == 1 && std::abs(p[0]) <= rel_tol * m) p.clear();
}

double poly_backward_error(const Poly& p, Complex z) {
    // evaluate in the chart where powers stay bounded
    double az = std::abs(z);
    if (az <= 1.0) {
        Complex acc = 0.0;
        double noise = 0.0;
        for (size_t i = p.size(); i-- > 0;) {
            acc = acc * z + p[i];
            noise = noise * az + std::abs(p[i]);
        }
        return (noise > 0.0) ? std::abs(acc) / noise : 0.0;
    }
    Complex u = 1.0 / z;
    double au = std::abs(u);
    Complex acc = 0.0;
    double noise = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        acc = acc * u + p[i];
        noise = noise * au + std::abs(p[i]);
    }
    return (noise > 0.0) ? std::abs(acc) / noise : 0.0;
}

namespace {

// (p'/p)(z), evaluated through the reversed polynomial when |z| > 1.
Complex newton_ratio(const Poly& p, Complex z) {
    size_t d = p.size() - 1;
    if (std::abs(z) <= 1.0) {
        Complex val = 0.0, der = 0.0;
        for (size_t i = p.size(); i-- > 0;) {
            der = der * z + val;
            val = val * z + p[i];
        }
        if (std::abs(val) == 0.0) return Complex(1e300, 0.0);
        return der / val;
    }
    Complex u = 1.0 / z;
    Complex val = 0.0, der = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {  // reversed coefficients
        der = der * u + val;
        val = val * u + p[i];
    }
    if (std::abs(val) == 0.0) return Complex(1e300, 0.0);
    return (double(d) - u * der / val) * u;  // d/z - q'(u)/(q(u) z^2)
}

// Per-root starting radii from the upper convex hull of (i, log|c_i|).
std::vector<Complex> initial_points(const Poly& p) {
    size_t d = p.size() - 1;
    std::vector<std::pair<double, double>> pts;  // (i, log|c_i|)
    for (size_t i = 0; i <= d; ++i)
        if (std::abs(p[i]) > 0.0) pts.emplace_back(double(i), std::log(std::abs(p[i])));
    std::vector<std::pair<double, double>> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            auto& a = hull[hull.size() - 2];
            auto& b = hull[hull.size() - 1];
            double cross = (b.first - a.first) * (pt.second - a.second) -
                           (pt.first - a.first) * (b.second - a.second);
            if (cross >= 0.0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(pt);
    }
    std::vector<Complex> out;
    out.reserve(d);
    int k = 0;
    for (size_t e = 0; e + 1 < hull.size(); ++e) {
        double i1 = hull[e].first, u1 = hull[e].second;
        double i2 = hull[e + 1].first, u2 = hull[e + 1].second;
        int count = int(i2 - i1 + 0.5);
        double radius = std::exp((u1 - u2) / (i2 - i1));
        radius = std::clamp(radius, 1e-12, 1e12);
        for (int j = 0; j < count; ++j, ++k) {
            double ang = 2.0 * kPi * (double(j) + 0.318) / double(count) + 0.5772 * double(e);
            out.push_back(radius * Complex(std::cos(ang), std::sin(ang)));
        }
    }
    while (out.size() < d) out.push_back(Complex(1.0, 0.5) * double(out.size() + 1));
    return out;
}

}  // namespace

RootResult aberth_roots(const Poly& p_in, int max_iterations) {
    Poly p = p_in;
    poly_trim(p);
    RootResult res;
    if (p.size() <= 1) return res;

    // factor out exact roots at the origin
    size_t zero_roots = 0;
    while (zero_roots + 1 < p.size() && std::abs(p[zero_roots]) == 0.0) ++zero_roots;
    for (size_t i = 0; i < zero_roots; ++i) res.roots.push_back(Complex(0.0));
    if (zero_roots > 0) p.erase(p.begin(), p.begin() + long(zero_roots));
    poly_normalize_max(p);

    size_t d = p.size() - 1;
    if (d == 0) return res;
    if (d == 1) {
        res.roots.push_back(-p[0] / p[1]);
    } else if (d == 2) {
        for (auto r : solve_quadratic(p[2], p[1], p[0])) res.roots.push_back(r);
    } else {
        std::vector<Complex> x = initial_points(p);
        std::vector<bool> frozen(d, false);
        const double conv_tol = 64.0 * std::numeric_limits<double>::epsilon();
        for (int it = 0; it < max_iterations; ++it) {
            bool all_frozen = true;
            for (size_t i = 0; i < d; ++i) {
                if (frozen[i]) continue;
                if (poly_backward_error(p, x[i]) < conv_tol) {
                    frozen[i] = true;
                    continue;
                }
                all_frozen = false;
                Complex ratio = newton_ratio(p, x[i]);
                Complex rep = 0.0;
                for (size_t j = 0; j < d; ++j) {
                    if (j == i) continue;
                    Complex diff = x[i] - x[j];
                    if (std::abs(diff) < 1e-300) diff = Complex(1e-300, 0.0);
                    rep += 1.0 / diff;
                }
                Complex denom = ratio - rep;
                if (std::abs(denom) < 1e-300) {
                    x[i] *= Complex(1.0 + 1e-6, 1e-6);
                    continue;
                }
                x[i] -= 1.0 / denom;
            }
            if (all_frozen) break;
        }
        for (auto& xi : x) res.roots.push_back(xi);
    }

    // Newton polish on the input polynomial
    Poly orig = p_in;
    poly_trim(orig);
    poly_normalize_max(orig);
    for (auto& r : res.roots) {
        for (int it = 0; it < 3; ++it) {
            double before = poly_backward_error(orig, r);
            if (before < 1e-15) break;
            Complex ratio = newton_ratio(orig, r);
            if (std::abs(ratio) < 1e-300) break;
            Complex cand = r - 1.0 / ratio;
            if (poly_backward_error(orig, cand) < before)
                r = cand;
            else
                break;
        }
        res.max_residual = std::max(res.max_residual, poly_backward_error(orig, r));
    }
    res.converged = res.max_residual <= 1e-6;
    return res;
}

std::vector<RootCluster> cluster_roots(const std::vector<Complex>& roots, double rel_radius) {
    size_t n = roots.size();
    std::vector<size_t> parent(n);
    for (size_t i = 0; i < n; ++i) parent[i] = i;
    auto find = [&](size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            double cut = rel_radius * std::max({1.0, std::abs(roots[i]), std::abs(roots[j])});
            if (std::abs(roots[i] - roots[j]) < cut) parent[find(i)] = find(j);
        }
    std::vector<RootCluster> out;
    for (size_t i = 0; i < n; ++i) {
        if (find(i) != i) continue;
        Complex sum = 0.0;
        int mult = 0;
        for (size_t j = 0; j < n; ++j)
            if (find(j) == i) {
                sum += roots[j];
                ++mult;
            }
        out.push_back({sum / double(mult), mult});
    }
    return out;
}

}  // namespace qrm
