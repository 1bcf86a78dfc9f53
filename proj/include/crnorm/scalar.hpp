#ifndef CRNORM_SCALAR_HPP
#define CRNORM_SCALAR_HPP

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

namespace crnorm {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;
using Real = boost::multiprecision::mpfr_float;

// Global float precision. 256 bits ~ 77 decimal digits; never below 128 bits.
inline unsigned float_precision_bits() { return 256; }

inline void init_float_precision() {
    static bool done = [] {
        Real::default_precision(static_cast<unsigned>(float_precision_bits() * 0.30103) + 2);
        return true;
    }();
    (void)done;
}

struct ExactC {
    Rational re, im;
};

struct FloatC {
    Real re, im;
    unsigned prec_bits;
};

// Complex scalar over the exact Gaussian-rational field, or over
// arbitrary-precision floats. Exact arithmetic never silently demotes;
// mixing promotes to float at the larger operand precision.
class Scalar {
public:
    Scalar() : v_(ExactC{0, 0}) {}
    Scalar(int n) : v_(ExactC{n, 0}) {}
    Scalar(long n) : v_(ExactC{Rational(n), 0}) {}
    explicit Scalar(const Rational& re, const Rational& im = 0) : v_(ExactC{re, im}) {}

    static Scalar i() { return Scalar(Rational(0), Rational(1)); }

    static Scalar rational(long num, long den) {
        if (den == 0) throw std::domain_error("scalar: zero denominator");
        return Scalar(Rational(num, den));
    }

    static Scalar make_float(const Real& re, const Real& im,
                             unsigned prec_bits = float_precision_bits()) {
        init_float_precision();
        if (prec_bits < 128) prec_bits = 128;
        return Scalar(FloatC{re, im, prec_bits});
    }

    static Scalar float_from(const Scalar& s) {
        init_float_precision();
        if (s.is_float()) return s;
        const ExactC& e = s.exact();
        return make_float(Real(e.re), Real(e.im));
    }

    bool is_exact() const { return std::holds_alternative<ExactC>(v_); }
    bool is_float() const { return !is_exact(); }

    const ExactC& exact() const {
        if (!is_exact()) throw std::logic_error("scalar: exact value required");
        return std::get<ExactC>(v_);
    }
    const FloatC& flt() const { return std::get<FloatC>(v_); }

    unsigned precision_bits() const { return is_exact() ? 0 : flt().prec_bits; }

    Real re_approx() const { return is_exact() ? Real(exact().re) : flt().re; }
    Real im_approx() const { return is_exact() ? Real(exact().im) : flt().im; }

    bool is_exact_zero() const {
        return is_exact() && exact().re == 0 && exact().im == 0;
    }

    // Scale-relative zero test; on the exact backend the test is exact.
    bool is_zero(const Real& scale = Real(1)) const {
        if (is_exact()) return is_exact_zero();
        static const Real tol("1e-30");
        Real bound = tol * (1 + scale);
        return boost::multiprecision::abs(flt().re) < bound &&
               boost::multiprecision::abs(flt().im) < bound;
    }

    bool is_real(const Real& scale = Real(1)) const {
        if (is_exact()) return exact().im == 0;
        static const Real tol("1e-30");
        return boost::multiprecision::abs(flt().im) < tol * (1 + scale);
    }

    Scalar conj() const {
        if (is_exact()) return Scalar(exact().re, -exact().im);
        return make_float(flt().re, -flt().im, flt().prec_bits);
    }

    Scalar neg() const {
        if (is_exact()) return Scalar(-exact().re, -exact().im);
        return make_float(-flt().re, -flt().im, flt().prec_bits);
    }

    Scalar real_part() const {
        if (is_exact()) return Scalar(exact().re);
        return make_float(flt().re, Real(0), flt().prec_bits);
    }
    Scalar imag_part() const {
        if (is_exact()) return Scalar(exact().im);
        return make_float(flt().im, Real(0), flt().prec_bits);
    }

    // |x|^2, stays in the same backend.
    Scalar abs2() const {
        if (is_exact()) {
            const ExactC& e = exact();
            return Scalar(e.re * e.re + e.im * e.im);
        }
        return make_float(flt().re * flt().re + flt().im * flt().im, Real(0), flt().prec_bits);
    }

    Real abs_approx() const {
        return boost::multiprecision::sqrt(re_approx() * re_approx() + im_approx() * im_approx());
    }

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        if (a.is_exact() && b.is_exact())
            return Scalar(a.exact().re + b.exact().re, a.exact().im + b.exact().im);
        auto [x, y, p] = promote(a, b);
        return make_float(x.re + y.re, x.im + y.im, p);
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) { return a + b.neg(); }
    friend Scalar operator-(const Scalar& a) { return a.neg(); }

    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        if (a.is_exact() && b.is_exact()) {
            const ExactC& x = a.exact();
            const ExactC& y = b.exact();
            return Scalar(x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re);
        }
        auto [x, y, p] = promote(a, b);
        return make_float(x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re, p);
    }

    friend Scalar operator/(const Scalar& a, const Scalar& b) {
        if (a.is_exact() && b.is_exact()) {
            const ExactC& x = a.exact();
            const ExactC& y = b.exact();
            Rational d = y.re * y.re + y.im * y.im;
            if (d == 0) throw std::domain_error("scalar: division by zero");
            return Scalar((x.re * y.re + x.im * y.im) / d, (x.im * y.re - x.re * y.im) / d);
        }
        auto [x, y, p] = promote(a, b);
        Real d = y.re * y.re + y.im * y.im;
        if (d == 0) throw std::domain_error("scalar: division by zero");
        return make_float((x.re * y.re + x.im * y.im) / d, (x.im * y.re - x.re * y.im) / d, p);
    }

    Scalar& operator+=(const Scalar& o) { *this = *this + o; return *this; }
    Scalar& operator-=(const Scalar& o) { *this = *this - o; return *this; }
    Scalar& operator*=(const Scalar& o) { *this = *this * o; return *this; }
    Scalar& operator/=(const Scalar& o) { *this = *this / o; return *this; }

    // Structural equality; exact on the exact backend, bitwise-ish on float.
    friend bool operator==(const Scalar& a, const Scalar& b) {
        if (a.is_exact() != b.is_exact()) return false;
        if (a.is_exact())
            return a.exact().re == b.exact().re && a.exact().im == b.exact().im;
        return a.flt().re == b.flt().re && a.flt().im == b.flt().im;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    std::string str() const {
        std::ostringstream os;
        if (is_exact()) {
            const ExactC& e = exact();
            os << '(' << rat_str(e.re);
            if (e.im >= 0)
                os << '+' << rat_str(e.im);
            else
                os << '-' << rat_str(-e.im);
            os << "*i)";
        } else {
            os << '(' << flt().re.str(30) << (flt().im >= 0 ? "+" : "") << flt().im.str(30)
               << "*i)";
        }
        return os.str();
    }

    static std::string rat_str(const Rational& q) {
        std::ostringstream os;
        os << boost::multiprecision::numerator(q);
        if (boost::multiprecision::denominator(q) != 1)
            os << '/' << boost::multiprecision::denominator(q);
        return os.str();
    }

private:
    explicit Scalar(FloatC f) : v_(std::move(f)) {}

    struct Promoted {
        FloatC a, b;
        unsigned prec;
    };
    static std::tuple<FloatC, FloatC, unsigned> promote(const Scalar& a, const Scalar& b) {
        init_float_precision();
        unsigned p = std::max({a.precision_bits(), b.precision_bits(), 128u});
        auto lift = [&](const Scalar& s) -> FloatC {
            if (s.is_float()) return s.flt();
            return FloatC{Real(s.exact().re), Real(s.exact().im), p};
        };
        return {lift(a), lift(b), p};
    }

    std::variant<ExactC, FloatC> v_;
};

inline Scalar conj(const Scalar& s) { return s.conj(); }

// ---- exact root recovery -------------------------------------------------

inline std::optional<BigInt> exact_int_root(const BigInt& n, unsigned k) {
    if (n < 0) {
        if (k % 2 == 0) return std::nullopt;
        auto r = exact_int_root(-n, k);
        if (!r) return std::nullopt;
        return -*r;
    }
    if (n == 0) return BigInt(0);
    BigInt lo = 0, hi = 1;
    while (boost::multiprecision::pow(hi, k) < n) hi <<= 1;
    while (lo < hi) {
        BigInt mid = (lo + hi) / 2;
        if (boost::multiprecision::pow(mid, k) < n)
            lo = mid + 1;
        else
            hi = mid;
    }
    if (boost::multiprecision::pow(lo, k) == n) return lo;
    return std::nullopt;
}

inline std::optional<Rational> exact_rational_root(const Rational& q, unsigned k) {
    auto num = exact_int_root(boost::multiprecision::numerator(q), k);
    if (!num) return std::nullopt;
    auto den = exact_int_root(boost::multiprecision::denominator(q), k);
    if (!den) return std::nullopt;
    return Rational(*num, *den);
}

// Square root of a Gaussian rational, when one exists in Q(i).
inline std::optional<Scalar> exact_complex_sqrt(const Scalar& s) {
    if (!s.is_exact()) return std::nullopt;
    const Rational& x = s.exact().re;
    const Rational& y = s.exact().im;
    if (y == 0) {
        if (x >= 0) {
            auto r = exact_rational_root(x, 2);
            if (r) return Scalar(*r);
            return std::nullopt;
        }
        auto r = exact_rational_root(-x, 2);
        if (r) return Scalar(Rational(0), *r);
        return std::nullopt;
    }
    auto n = exact_rational_root(x * x + y * y, 2);
    if (!n) return std::nullopt;
    auto u2 = (x + *n) / 2;
    auto u = exact_rational_root(u2, 2);
    if (!u || *u == 0) return std::nullopt;
    Rational v = y / (2 * *u);
    Scalar cand(*u, v);
    if (cand * cand == s) return cand;
    return std::nullopt;
}

// Continued-fraction reconstruction of a rational from a float, verified by
// the caller. Returns nullopt when no small rational is nearby.
inline std::optional<Rational> rational_reconstruct(const Real& x,
                                                    const BigInt& max_den = BigInt(1) << 48) {
    Real target = x;
    BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    Real cur = target;
    for (int iter = 0; iter < 64; ++iter) {
        Real fl = boost::multiprecision::floor(cur);
        BigInt a = fl.convert_to<BigInt>();
        BigInt p2 = a * p1 + p0;
        BigInt q2 = a * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        Real rem = cur - fl;
        if (rem < Real("1e-60")) break;
        cur = 1 / rem;
        if (q1 > 0) {
            Real err = boost::multiprecision::abs(target - Real(Rational(p1, q1)));
            if (err < Real("1e-55")) break;
        }
    }
    if (q1 == 0) return std::nullopt;
    Rational cand(p1, q1);
    if (boost::multiprecision::abs(target - Real(cand)) < Real("1e-40"))
        return cand;
    return std::nullopt;
}

// ---- float transcendental helpers ---------------------------------------

inline Scalar float_sqrt(const Scalar& s) {
    init_float_precision();
    Real x = s.re_approx(), y = s.im_approx();
    Real r = boost::multiprecision::sqrt(x * x + y * y);
    Real u = boost::multiprecision::sqrt((r + x) / 2);
    Real v = boost::multiprecision::sqrt((r - x) / 2);
    if (y < 0) v = -v;
    return Scalar::make_float(u, v);
}

// Principal k-th root via polar form.
inline Scalar float_nth_root(const Scalar& s, unsigned k) {
    init_float_precision();
    Real x = s.re_approx(), y = s.im_approx();
    Real r = boost::multiprecision::sqrt(x * x + y * y);
    if (r == 0) return Scalar::make_float(Real(0), Real(0));
    Real th = boost::multiprecision::atan2(y, x);
    Real rr = boost::multiprecision::pow(r, Real(1) / k);
    return Scalar::make_float(rr * boost::multiprecision::cos(th / k),
                              rr * boost::multiprecision::sin(th / k));
}

// k-th root of a complex scalar: exact when a Gaussian-rational root exists,
// float otherwise. Reconstruction is verified by exact re-powering.
inline Scalar complex_root(const Scalar& s, unsigned k) {
    if (s.is_exact()) {
        if (k == 2) {
            auto r = exact_complex_sqrt(s);
            if (r) return *r;
        } else {
            Scalar approx = float_nth_root(s, k);
            auto re = rational_reconstruct(approx.re_approx());
            auto im = rational_reconstruct(approx.im_approx());
            if (re && im) {
                Scalar cand(*re, *im);
                Scalar pw = cand;
                for (unsigned j = 1; j < k; ++j) pw *= cand;
                if (pw == s) return cand;
            }
        }
    }
    return k == 2 ? float_sqrt(Scalar::float_from(s)) : float_nth_root(Scalar::float_from(s), k);
}

inline bool approx_eq(const Scalar& a, const Scalar& b, const Real& rel_tol = Real("1e-25")) {
    if (a.is_exact() && b.is_exact()) return a == b;
    Scalar d = a - b;
    Real scale = 1 + a.abs_approx() + b.abs_approx();
    return d.abs_approx() <= rel_tol * scale;
}

} // namespace crnorm

#endif
