#pragma once

#include <gmpxx.h>

#include <string>

#include "qrm/complex_util.hpp"
#include "qrm/errors.hpp"

namespace qrm {

/// Exact element of Q(i): a pair of arbitrary-precision rationals.
struct GaussianRational {
    mpq_class re{0}, im{0};

    GaussianRational() = default;
    GaussianRational(long r) : re(r) {}
    GaussianRational(const mpq_class& r) : re(r) {}
    GaussianRational(const mpq_class& r, const mpq_class& i) : re(r), im(i) {}
    GaussianRational(long rn, long rd, long in_, long id) : re(rn, rd), im(in_, id) {
        re.canonicalize();
        im.canonicalize();
    }

    static GaussianRational i() { return {mpq_class(0), mpq_class(1)}; }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    GaussianRational conj() const { return {re, mpq_class(-im)}; }
    mpq_class norm() const { return re * re + im * im; }

    Complex to_complex() const { return {re.get_d(), im.get_d()}; }

    std::string str() const {
        if (im == 0) return re.get_str();
        return re.get_str() + (im > 0 ? "+" : "") + im.get_str() + "i";
    }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a) {
        return {mpq_class(-a.re), mpq_class(-a.im)};
    }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        mpq_class n = b.norm();
        if (n == 0) throw Error(ErrorCode::Validation, "division by zero in Q(i)");
        GaussianRational p = a * b.conj();
        return {p.re / n, p.im / n};
    }
    GaussianRational& operator+=(const GaussianRational& o) { return *this = *this + o; }
    GaussianRational& operator-=(const GaussianRational& o) { return *this = *this - o; }
    GaussianRational& operator*=(const GaussianRational& o) { return *this = *this * o; }
    GaussianRational& operator/=(const GaussianRational& o) { return *this = *this / o; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) {
        return !(a == b);
    }
};

/// Parses "p/q" or "p" (exact rational, decimal digits only).
inline mpq_class parse_rational(const std::string& text) {
    try {
        mpq_class q(text);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw Error(ErrorCode::Validation, "cannot parse rational: " + text);
    }
}

/// Parses "re" or "re,im" with each part a rational "p/q".
inline GaussianRational parse_gaussian(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos) return GaussianRational(parse_rational(text));
    return {parse_rational(text.substr(0, comma)), parse_rational(text.substr(comma + 1))};
}

}  // namespace qrm
