#include "chanspec/mp.hpp"

#include "chanspec/errors.hpp"

#include <algorithm>
#include <ostream>

namespace chanspec::mp {

namespace {

constexpr mpfr_rnd_t kRnd = MPFR_RNDN;

Precision wider(const Real& a, const Real& b)
{
    return std::max(a.precision(), b.precision());
}

} // namespace

bool is_ladder_precision(Precision bits)
{
    return std::find(std::begin(kPrecisionLadder), std::end(kPrecisionLadder), bits) !=
           std::end(kPrecisionLadder);
}

Real::Real(Precision bits)
{
    mpfr_init2(v_, bits);
    mpfr_set_zero(v_, 1);
}

Real::Real(double x, Precision bits)
{
    mpfr_init2(v_, bits);
    mpfr_set_d(v_, x, kRnd);
}

Real::Real(long x, Precision bits)
{
    mpfr_init2(v_, bits);
    mpfr_set_si(v_, x, kRnd);
}

Real::Real(const Real& other)
{
    mpfr_init2(v_, other.precision());
    mpfr_set(v_, other.v_, kRnd);
}

Real::Real(Real&& other) noexcept
{
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
}

Real::Real(const Real& other, Precision bits)
{
    mpfr_init2(v_, bits);
    mpfr_set(v_, other.v_, kRnd);
}

Real::~Real()
{
    mpfr_clear(v_);
}

Real& Real::operator=(const Real& other)
{
    if (this != &other) {
        if (precision() != other.precision()) {
            mpfr_set_prec(v_, other.precision());
        }
        mpfr_set(v_, other.v_, kRnd);
    }
    return *this;
}

Real& Real::operator=(Real&& other) noexcept
{
    mpfr_swap(v_, other.v_);
    return *this;
}

Real& Real::operator=(double x)
{
    mpfr_set_d(v_, x, kRnd);
    return *this;
}

Real Real::parse(std::string_view text, Precision bits)
{
    Real r(bits);
    std::string s(text);
    // mpfr_set_str accepts leading whitespace but not trailing garbage.
    if (s.empty() || mpfr_set_str(r.v_, s.c_str(), 10, kRnd) != 0) {
        throw ParseError("invalid decimal number '" + s + "'");
    }
    if (!r.is_finite()) {
        throw ParseError("non-finite number '" + s + "'");
    }
    return r;
}

Real Real::pi(Precision bits)
{
    Real r(bits);
    mpfr_const_pi(r.v_, kRnd);
    return r;
}

void Real::set_precision(Precision bits)
{
    mpfr_prec_round(v_, bits, kRnd);
}

long Real::exponent() const
{
    if (mpfr_zero_p(v_) || !mpfr_number_p(v_)) {
        return 0;
    }
    return static_cast<long>(mpfr_get_exp(v_));
}

std::string Real::to_string(int digits) const
{
    if (digits <= 0) {
        // Enough decimal digits to round-trip the binary value.
        digits = static_cast<int>(precision() * 0.30103) + 2;
    }
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", digits, v_);
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
}

Real& Real::operator+=(const Real& b)
{
    if (b.precision() > precision()) {
        mpfr_prec_round(v_, b.precision(), kRnd);
    }
    mpfr_add(v_, v_, b.v_, kRnd);
    return *this;
}

Real& Real::operator-=(const Real& b)
{
    if (b.precision() > precision()) {
        mpfr_prec_round(v_, b.precision(), kRnd);
    }
    mpfr_sub(v_, v_, b.v_, kRnd);
    return *this;
}

Real& Real::operator*=(const Real& b)
{
    if (b.precision() > precision()) {
        mpfr_prec_round(v_, b.precision(), kRnd);
    }
    mpfr_mul(v_, v_, b.v_, kRnd);
    return *this;
}

Real& Real::operator/=(const Real& b)
{
    if (b.is_zero()) {
        throw NumericError("real division by zero");
    }
    if (b.precision() > precision()) {
        mpfr_prec_round(v_, b.precision(), kRnd);
    }
    mpfr_div(v_, v_, b.v_, kRnd);
    return *this;
}

Real& Real::operator*=(double b)
{
    mpfr_mul_d(v_, v_, b, kRnd);
    return *this;
}

Real Real::operator-() const
{
    Real r(precision());
    mpfr_neg(r.v_, v_, kRnd);
    return r;
}

Real operator+(const Real& a, const Real& b)
{
    Real r(wider(a, b));
    mpfr_add(r.get(), a.get(), b.get(), kRnd);
    return r;
}

Real operator-(const Real& a, const Real& b)
{
    Real r(wider(a, b));
    mpfr_sub(r.get(), a.get(), b.get(), kRnd);
    return r;
}

Real operator*(const Real& a, const Real& b)
{
    Real r(wider(a, b));
    mpfr_mul(r.get(), a.get(), b.get(), kRnd);
    return r;
}

Real operator/(const Real& a, const Real& b)
{
    if (b.is_zero()) {
        throw NumericError("real division by zero");
    }
    Real r(wider(a, b));
    mpfr_div(r.get(), a.get(), b.get(), kRnd);
    return r;
}

Real operator*(const Real& a, double b)
{
    Real r(a.precision());
    mpfr_mul_d(r.get(), a.get(), b, kRnd);
    return r;
}

Real operator*(double a, const Real& b)
{
    return b * a;
}

Real operator+(const Real& a, double b)
{
    Real r(a.precision());
    mpfr_add_d(r.get(), a.get(), b, kRnd);
    return r;
}

Real operator-(const Real& a, double b)
{
    Real r(a.precision());
    mpfr_sub_d(r.get(), a.get(), b, kRnd);
    return r;
}

bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.get(), b.get()) != 0; }
bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.get(), b.get()) != 0; }
bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.get(), b.get()) != 0; }
bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.get(), b.get()) != 0; }
bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.get(), b.get()) != 0; }
bool operator<(const Real& a, double b) { return mpfr_cmp_d(a.get(), b) < 0; }
bool operator>(const Real& a, double b) { return mpfr_cmp_d(a.get(), b) > 0; }
bool operator<=(const Real& a, double b) { return mpfr_cmp_d(a.get(), b) <= 0; }

Real abs(const Real& x)
{
    Real r(x.precision());
    mpfr_abs(r.get(), x.get(), kRnd);
    return r;
}

Real sqrt(const Real& x)
{
    if (x.sign() < 0) {
        throw NumericError("square root of a negative real");
    }
    Real r(x.precision());
    mpfr_sqrt(r.get(), x.get(), kRnd);
    return r;
}

Real exp(const Real& x)
{
    Real r(x.precision());
    mpfr_exp(r.get(), x.get(), kRnd);
    return r;
}

Real log(const Real& x)
{
    if (x.sign() <= 0) {
        throw NumericError("logarithm of a non-positive real");
    }
    Real r(x.precision());
    mpfr_log(r.get(), x.get(), kRnd);
    return r;
}

Real sin(const Real& x)
{
    Real r(x.precision());
    mpfr_sin(r.get(), x.get(), kRnd);
    return r;
}

Real cos(const Real& x)
{
    Real r(x.precision());
    mpfr_cos(r.get(), x.get(), kRnd);
    return r;
}

Real atan2(const Real& y, const Real& x)
{
    Real r(wider(x, y));
    mpfr_atan2(r.get(), y.get(), x.get(), kRnd);
    return r;
}

Real hypot(const Real& x, const Real& y)
{
    Real r(wider(x, y));
    mpfr_hypot(r.get(), x.get(), y.get(), kRnd);
    return r;
}

Real pow(const Real& x, long n)
{
    Real r(x.precision());
    mpfr_pow_si(r.get(), x.get(), n, kRnd);
    return r;
}

Real pow(const Real& x, const Real& y)
{
    Real r(wider(x, y));
    mpfr_pow(r.get(), x.get(), y.get(), kRnd);
    return r;
}

Real ldexp(const Real& x, long e)
{
    Real r(x.precision());
    mpfr_mul_2si(r.get(), x.get(), e, kRnd);
    return r;
}

Real max(const Real& a, const Real& b)
{
    return a < b ? b : a;
}

std::ostream& operator<<(std::ostream& os, const Real& x)
{
    return os << x.to_string(17);
}

Complex::Complex(Real re, Real im) : re_(std::move(re)), im_(std::move(im))
{
    if (re_.precision() != im_.precision()) {
        Precision p = std::max(re_.precision(), im_.precision());
        re_.set_precision(p);
        im_.set_precision(p);
    }
}

Complex::Complex(std::complex<double> z, Precision bits) : re_(z.real(), bits), im_(z.imag(), bits) {}

Complex::Complex(double re, double im, Precision bits) : re_(re, bits), im_(im, bits) {}

Complex::Complex(const Complex& other, Precision bits) : re_(other.re_, bits), im_(other.im_, bits) {}

Complex Complex::parse(std::string_view re, std::string_view im, Precision bits)
{
    return Complex(Real::parse(re, bits), Real::parse(im, bits));
}

Complex Complex::polar(const Real& radius, const Real& angle)
{
    return Complex(radius * cos(angle), radius * sin(angle));
}

Precision Complex::precision() const
{
    return re_.precision();
}

void Complex::set_precision(Precision bits)
{
    re_.set_precision(bits);
    im_.set_precision(bits);
}

Complex& Complex::operator+=(const Complex& b)
{
    re_ += b.re_;
    im_ += b.im_;
    return *this;
}

Complex& Complex::operator-=(const Complex& b)
{
    re_ -= b.re_;
    im_ -= b.im_;
    return *this;
}

Complex& Complex::operator*=(const Complex& b)
{
    *this = *this * b;
    return *this;
}

Complex& Complex::operator/=(const Complex& b)
{
    *this = *this / b;
    return *this;
}

Complex& Complex::operator*=(const Real& b)
{
    re_ *= b;
    im_ *= b;
    return *this;
}

Complex Complex::operator-() const
{
    return Complex(-re_, -im_);
}

Complex operator+(const Complex& a, const Complex& b)
{
    return Complex(a.re() + b.re(), a.im() + b.im());
}

Complex operator-(const Complex& a, const Complex& b)
{
    return Complex(a.re() - b.re(), a.im() - b.im());
}

Complex operator*(const Complex& a, const Complex& b)
{
    Precision p = std::max(a.precision(), b.precision());
    Real re(p), im(p), t(p);
    mpfr_mul(re.get(), a.re().get(), b.re().get(), kRnd);
    mpfr_mul(t.get(), a.im().get(), b.im().get(), kRnd);
    mpfr_sub(re.get(), re.get(), t.get(), kRnd);
    mpfr_mul(im.get(), a.re().get(), b.im().get(), kRnd);
    mpfr_mul(t.get(), a.im().get(), b.re().get(), kRnd);
    mpfr_add(im.get(), im.get(), t.get(), kRnd);
    return Complex(std::move(re), std::move(im));
}

Complex operator/(const Complex& a, const Complex& b)
{
    if (b.is_zero()) {
        throw NumericError("complex division by zero");
    }
    Precision p = std::max(a.precision(), b.precision());
    Real den(p), t(p), re(p), im(p);
    mpfr_sqr(den.get(), b.re().get(), kRnd);
    mpfr_sqr(t.get(), b.im().get(), kRnd);
    mpfr_add(den.get(), den.get(), t.get(), kRnd);
    mpfr_mul(re.get(), a.re().get(), b.re().get(), kRnd);
    mpfr_mul(t.get(), a.im().get(), b.im().get(), kRnd);
    mpfr_add(re.get(), re.get(), t.get(), kRnd);
    mpfr_mul(im.get(), a.im().get(), b.re().get(), kRnd);
    mpfr_mul(t.get(), a.re().get(), b.im().get(), kRnd);
    mpfr_sub(im.get(), im.get(), t.get(), kRnd);
    mpfr_div(re.get(), re.get(), den.get(), kRnd);
    mpfr_div(im.get(), im.get(), den.get(), kRnd);
    Complex out(std::move(re), std::move(im));
    require_finite(out, "complex division");
    return out;
}

Complex operator*(const Complex& a, const Real& b)
{
    return Complex(a.re() * b, a.im() * b);
}

Complex operator*(const Real& a, const Complex& b)
{
    return b * a;
}

Complex operator/(const Complex& a, const Real& b)
{
    return Complex(a.re() / b, a.im() / b);
}

bool operator==(const Complex& a, const Complex& b)
{
    return a.re() == b.re() && a.im() == b.im();
}

Real abs(const Complex& z)
{
    return hypot(z.re(), z.im());
}

Real norm(const Complex& z)
{
    return z.re() * z.re() + z.im() * z.im();
}

Real arg(const Complex& z)
{
    return atan2(z.im(), z.re());
}

Complex conj(const Complex& z)
{
    return Complex(z.re(), -z.im());
}

Complex sqrt(const Complex& z)
{
    Precision p = z.precision();
    if (z.is_zero()) {
        return Complex(p);
    }
    Real r = abs(z);
    // Principal branch, computed without cancellation.
    Real t = sqrt((r + abs(z.re())) * 0.5);
    if (z.re().sign() >= 0) {
        return Complex(t, z.im() / (t * 2.0));
    }
    Real im = z.im().sign() >= 0 ? t : -t;
    return Complex(abs(z.im()) / (t * 2.0), im);
}

Complex pow(const Complex& z, long n)
{
    Precision p = z.precision();
    if (n < 0) {
        return pow(reciprocal(z), -n);
    }
    Complex result(Real(1L, p), Real(p));
    Complex base = z;
    unsigned long e = static_cast<unsigned long>(n);
    while (e != 0) {
        if (e & 1UL) {
            result = result * base;
        }
        e >>= 1;
        if (e != 0) {
            base = base * base;
        }
    }
    return result;
}

Complex reciprocal(const Complex& z)
{
    Precision p = z.precision();
    return Complex(Real(1L, p), Real(p)) / z;
}

Real abs1(const Complex& z)
{
    return max(abs(z.re()), abs(z.im()));
}

void require_finite(const Real& x, const char* what)
{
    if (!x.is_finite()) {
        throw NumericError(std::string("non-finite value in ") + what);
    }
}

void require_finite(const Complex& z, const char* what)
{
    if (!z.is_finite()) {
        throw NumericError(std::string("non-finite value in ") + what);
    }
}

std::ostream& operator<<(std::ostream& os, const Complex& z)
{
    return os << '(' << z.re() << ',' << z.im() << ')';
}

} // namespace chanspec::mp
