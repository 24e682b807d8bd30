#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace carleman {

using Int  = boost::multiprecision::mpz_int;
using Rat  = boost::multiprecision::mpq_rational;
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>>;

// All inexact comparisons in the toolkit happen at this absolute tolerance.
inline const Real& real_tol() {
    static const Real tol("1e-30");
    return tol;
}

// Default working precision: 50 decimal digits (~166 bits of mantissa).
inline unsigned default_digits10() { return 50; }

inline void set_precision_digits(unsigned digits10) {
    if (digits10 < 39) digits10 = 39;  // never drop below 128 bits
    Real::default_precision(digits10);
}

namespace detail {
struct PrecisionInit {
    PrecisionInit() { Real::default_precision(default_digits10()); }
};
inline PrecisionInit precision_init{};
}  // namespace detail

enum class ErrorCode {
    io = 1,         // bad JSON / file problems
    domain = 2,     // precondition violated by the data
    resonance = 3,  // eigenvalue resonance found where none allowed
    internal = 4,   // invariant that the theory guarantees failed
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.backend().data(), base.backend().data(), e);
    return r;
}

inline Rat pow_rat(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    const unsigned long a = static_cast<unsigned long>(e < 0 ? -e : e);
    Rat r(pow_int(numerator(base), a), pow_int(denominator(base), a));
    if (e < 0) {
        if (r == 0) fail(ErrorCode::domain, "zero raised to a negative power");
        r = Rat(1) / r;
    }
    return r;
}

inline Int factorial(unsigned n) {
    Int r;
    mpz_fac_ui(r.backend().data(), n);
    return r;
}

inline Real to_real(const Rat& q) {
    Real num(numerator(q));
    Real den(denominator(q));
    return num / den;
}

inline Real to_real(const Real& x) { return x; }

// a <= b, honouring the documented tolerance in float mode.
inline bool leq(const Rat& a, const Rat& b) { return a <= b; }
inline bool leq(const Real& a, const Real& b) { return a <= b + real_tol(); }
inline bool lt_strict(const Rat& a, const Rat& b) { return a < b; }
inline bool lt_strict(const Real& a, const Real& b) { return a + real_tol() < b; }

// a^{1/p} <= lambda * b^{1/q} for positive a, b; exact via cross powers in
// rational mode.
inline bool root_leq(const Rat& a, unsigned p, const Rat& b, unsigned q, const Rat& lambda) {
    // a^q <= lambda^{pq} b^p
    return pow_rat(a, q) <= pow_rat(lambda, static_cast<long>(p) * q) * pow_rat(b, p);
}
inline bool root_leq(const Real& a, unsigned p, const Real& b, unsigned q, const Real& lambda) {
    using std::pow;
    Real lhs = pow(a, Real(1) / p);
    Real rhs = lambda * pow(b, Real(1) / q);
    return leq(lhs, rhs);
}

// n-th root as a float, defined for positive values of either scalar mode.
inline Real root_real(const Rat& a, unsigned n) {
    using std::pow;
    return pow(to_real(a), Real(1) / n);
}
inline Real root_real(const Real& a, unsigned n) {
    using std::pow;
    return pow(a, Real(1) / n);
}

template <class S>
inline S scalar_from_rat(const Rat& q) {
    if constexpr (std::is_same_v<S, Rat>)
        return q;
    else
        return to_real(q);
}

// Complex numbers over an exact or floating scalar.
template <class T>
struct Cx {
    T re{};
    T im{};

    Cx() = default;
    Cx(T r) : re(std::move(r)) {}
    Cx(T r, T i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    friend Cx operator+(const Cx& a, const Cx& b) { return {a.re + b.re, a.im + b.im}; }
    friend Cx operator-(const Cx& a, const Cx& b) { return {a.re - b.re, a.im - b.im}; }
    friend Cx operator-(const Cx& a) { return {-a.re, -a.im}; }
    friend Cx operator*(const Cx& a, const Cx& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Cx operator/(const Cx& a, const Cx& b) {
        T n = b.re * b.re + b.im * b.im;
        if (n == 0) fail(ErrorCode::domain, "complex division by zero");
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    Cx& operator+=(const Cx& b) { re += b.re; im += b.im; return *this; }
    Cx& operator-=(const Cx& b) { re -= b.re; im -= b.im; return *this; }
    Cx& operator*=(const Cx& b) { *this = *this * b; return *this; }
    friend bool operator==(const Cx& a, const Cx& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Cx& a, const Cx& b) { return !(a == b); }

    T norm_sq() const { return re * re + im * im; }
};

using CRat  = Cx<Rat>;
using CReal = Cx<Real>;

inline CReal to_creal(const CRat& z) { return {to_real(z.re), to_real(z.im)}; }

// Exact magnitude sqrt(sq).  Closed under multiplication and reciprocals,
// which is all the small-divisor bookkeeping ever needs; comparisons reduce
// to rational comparisons of the squares.
struct SqrtRat {
    Rat sq{0};

    SqrtRat() = default;
    explicit SqrtRat(Rat s) : sq(std::move(s)) {
        if (sq < 0) fail(ErrorCode::internal, "negative radicand");
    }
    static SqrtRat from_rat(const Rat& q) { return SqrtRat(q * q); }
    static SqrtRat norm_of(const CRat& z) { return SqrtRat(z.norm_sq()); }

    bool is_zero() const { return sq == 0; }
    SqrtRat reciprocal() const {
        if (sq == 0) fail(ErrorCode::domain, "reciprocal of zero magnitude");
        return SqrtRat(Rat(1) / sq);
    }
    friend SqrtRat operator*(const SqrtRat& a, const SqrtRat& b) { return SqrtRat(a.sq * b.sq); }
    SqrtRat& operator*=(const SqrtRat& b) { sq *= b.sq; return *this; }
    // scale by a nonnegative rational
    SqrtRat scaled(const Rat& q) const { return SqrtRat(q * q * sq); }

    friend bool operator<(const SqrtRat& a, const SqrtRat& b) { return a.sq < b.sq; }
    friend bool operator<=(const SqrtRat& a, const SqrtRat& b) { return a.sq <= b.sq; }
    friend bool operator==(const SqrtRat& a, const SqrtRat& b) { return a.sq == b.sq; }

    Real to_real() const {
        using std::sqrt;
        return sqrt(carleman::to_real(sq));
    }
};

// Magnitude type attached to a complex scalar mode.
template <class C>
struct mag_of;
template <>
struct mag_of<CRat> {
    using type = SqrtRat;
    static SqrtRat norm(const CRat& z) { return SqrtRat::norm_of(z); }
    static SqrtRat one() { return SqrtRat(Rat(1)); }
};
template <>
struct mag_of<CReal> {
    using type = Real;
    static Real norm(const CReal& z) {
        using std::sqrt;
        return sqrt(z.norm_sq());
    }
    static Real one() { return Real(1); }
};

inline bool mag_lt(const SqrtRat& a, const SqrtRat& b) { return a.sq < b.sq; }
inline bool mag_lt(const Real& a, const Real& b) { return lt_strict(a, b); }

inline Real mag_to_real(const SqrtRat& m) { return m.to_real(); }
inline Real mag_to_real(const Real& m) { return m; }

inline std::string rat_to_string(const Rat& q) { return q.str(); }

inline std::string real_to_string(const Real& x) {
    return x.str(0, std::ios_base::scientific);
}

template <class S>
inline std::string scalar_to_string(const S& v) {
    if constexpr (std::is_same_v<S, Rat>)
        return rat_to_string(v);
    else
        return real_to_string(v);
}

}  // namespace carleman
