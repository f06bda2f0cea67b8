#pragma once

// Arbitrary-precision real and complex scalars on top of MPFR.
//
// Every value carries its own mantissa width. Binary operations produce a
// result at the wider of the two operand precisions, so a computation seeded
// at 128 bits stays at 128 bits without a global context.

#include <mpfr.h>

#include <complex>
#include <iosfwd>
#include <string>
#include <string_view>

namespace chanspec::mp {

using Precision = mpfr_prec_t;

inline constexpr Precision kDefaultPrecision = 53;

/// The escalation ladder used by the root finders.
inline constexpr Precision kPrecisionLadder[] = {53, 128, 256, 512};

bool is_ladder_precision(Precision bits);

class Real {
public:
    Real() : Real(kDefaultPrecision) {}
    explicit Real(Precision bits);
    Real(double x, Precision bits);
    Real(long x, Precision bits);
    Real(const Real& other);
    Real(Real&& other) noexcept;
    Real(const Real& other, Precision bits); // rounds to `bits`
    ~Real();

    Real& operator=(const Real& other);
    Real& operator=(Real&& other) noexcept;
    Real& operator=(double x);

    static Real parse(std::string_view text, Precision bits);
    static Real pi(Precision bits);

    Precision precision() const { return mpfr_get_prec(v_); }
    void set_precision(Precision bits); // rounds the current value

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long exponent() const; // binary exponent, 0 for zero
    std::string to_string(int digits = 0) const;

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

    Real& operator+=(const Real& b);
    Real& operator-=(const Real& b);
    Real& operator*=(const Real& b);
    Real& operator/=(const Real& b);
    Real& operator*=(double b);

    Real operator-() const;

private:
    mpfr_t v_;
};

Real operator+(const Real& a, const Real& b);
Real operator-(const Real& a, const Real& b);
Real operator*(const Real& a, const Real& b);
Real operator/(const Real& a, const Real& b);
Real operator*(const Real& a, double b);
Real operator*(double a, const Real& b);
Real operator+(const Real& a, double b);
Real operator-(const Real& a, double b);

bool operator<(const Real& a, const Real& b);
bool operator>(const Real& a, const Real& b);
bool operator<=(const Real& a, const Real& b);
bool operator>=(const Real& a, const Real& b);
bool operator==(const Real& a, const Real& b);
bool operator<(const Real& a, double b);
bool operator>(const Real& a, double b);
bool operator<=(const Real& a, double b);

Real abs(const Real& x);
Real sqrt(const Real& x);
Real exp(const Real& x);
Real log(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real atan2(const Real& y, const Real& x);
Real hypot(const Real& x, const Real& y);
Real pow(const Real& x, long n);
Real pow(const Real& x, const Real& y);
Real ldexp(const Real& x, long e);
Real max(const Real& a, const Real& b);

std::ostream& operator<<(std::ostream& os, const Real& x);

class Complex {
public:
    Complex() : Complex(kDefaultPrecision) {}
    explicit Complex(Precision bits) : re_(bits), im_(bits) {}
    Complex(Real re, Real im);
    Complex(std::complex<double> z, Precision bits);
    Complex(double re, double im, Precision bits);
    Complex(const Complex& other, Precision bits);
    Complex(const Complex&) = default;
    Complex(Complex&&) noexcept = default;
    Complex& operator=(const Complex&) = default;
    Complex& operator=(Complex&&) noexcept = default;

    static Complex parse(std::string_view re, std::string_view im, Precision bits);
    static Complex polar(const Real& radius, const Real& angle);

    const Real& re() const { return re_; }
    const Real& im() const { return im_; }
    Real& re() { return re_; }
    Real& im() { return im_; }

    Precision precision() const;
    void set_precision(Precision bits);

    std::complex<double> to_std() const { return {re_.to_double(), im_.to_double()}; }
    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    bool is_finite() const { return re_.is_finite() && im_.is_finite(); }

    Complex& operator+=(const Complex& b);
    Complex& operator-=(const Complex& b);
    Complex& operator*=(const Complex& b);
    Complex& operator/=(const Complex& b);
    Complex& operator*=(const Real& b);

    Complex operator-() const;

private:
    Real re_;
    Real im_;
};

Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& b);
Complex operator*(const Real& a, const Complex& b);
Complex operator/(const Complex& a, const Real& b);
bool operator==(const Complex& a, const Complex& b);

Real abs(const Complex& z);
Real norm(const Complex& z); // |z|^2
Real arg(const Complex& z);
Complex conj(const Complex& z);
Complex sqrt(const Complex& z);
Complex pow(const Complex& z, long n);
Complex reciprocal(const Complex& z);

/// Max of |re|, |im|; a cheap magnitude used for pivoting.
Real abs1(const Complex& z);

/// Throws NumericError if `x` is NaN or infinite.
void require_finite(const Real& x, const char* what);
void require_finite(const Complex& z, const char* what);

std::ostream& operator<<(std::ostream& os, const Complex& z);

} // namespace chanspec::mp
