#pragma once

#include "chanspec/mp.hpp"
#include "chanspec/parallel.hpp"

#include <climits>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace chanspec {

using mp::Complex;
using mp::Precision;
using mp::Real;

/// Value, derivative and a magnitude scale used to turn |F(z)| into a backward error.
struct Evaluation {
    Complex value;
    Complex derivative;
    Real magnitude;
};

using EvalFn = std::function<Evaluation(const Complex&)>;

/// Builds an evaluator working at the requested precision; used when escalating.
using EvalFactory = std::function<EvalFn(Precision)>;

/// Dense univariate polynomial, coefficients lowest degree first.
class ComplexPoly {
public:
    static constexpr int kZeroDegree = INT_MIN;

    explicit ComplexPoly(Precision bits = mp::kDefaultPrecision);
    ComplexPoly(std::vector<Complex> coeffs);
    ComplexPoly(std::vector<Complex> coeffs, Precision bits);

    static ComplexPoly constant(const Complex& c);
    static ComplexPoly monomial(const Complex& c, int k);
    static ComplexPoly linear(const Complex& root); // z - root
    static ComplexPoly from_roots(const std::vector<Complex>& roots, Precision bits);
    static ComplexPoly from_std(const std::vector<std::complex<double>>& coeffs, Precision bits);

    int degree() const;
    bool is_zero() const { return c_.empty(); }
    Precision precision() const { return prec_; }
    const std::vector<Complex>& coefficients() const { return c_; }
    const Complex& operator[](std::size_t k) const { return c_[k]; }
    Complex coefficient(int k) const; // zero outside the stored range
    const Complex& leading() const;

    ComplexPoly with_precision(Precision bits) const;

    ComplexPoly operator+(const ComplexPoly& b) const;
    ComplexPoly operator-(const ComplexPoly& b) const;
    ComplexPoly operator*(const ComplexPoly& b) const;
    ComplexPoly operator-() const;
    ComplexPoly scale(const Complex& s) const;
    ComplexPoly derivative() const;
    /// p(a z + b).
    ComplexPoly compose_linear(const Complex& a, const Complex& b) const;
    ComplexPoly pow(unsigned k) const;

    Complex operator()(const Complex& z) const;
    Evaluation evaluate(const Complex& z) const;
    /// Sum of |c_k| r^k: the Horner rounding scale at |z| = r.
    Real abs_evaluate(const Real& r) const;

    std::vector<std::complex<double>> to_std() const;
    EvalFactory factory() const;

private:
    void trim();
    void require_same(const ComplexPoly& b) const;

    std::vector<Complex> c_;
    Precision prec_;
};

/// One factor (scale * (z - root)) shared across the terms of a FactoredSum.
struct LinearFactor {
    Complex root;
    Complex scale;
    long exponent = 0;
};

/// F(z) = sum_t c_t(z) * prod_{f in t} (scale_f (z - root_f))^{exponent_f}.
///
/// Powers are never expanded, so large exponents stay well conditioned.
class FactoredSum {
public:
    struct Term {
        ComplexPoly coefficient;
        std::vector<std::size_t> factors;
    };

    FactoredSum() = default;
    FactoredSum(std::vector<LinearFactor> factors, std::vector<Term> terms);

    int degree() const { return degree_; }
    Precision precision() const { return prec_; }
    const std::vector<LinearFactor>& factors() const { return factors_; }
    const std::vector<Term>& terms() const { return terms_; }

    Evaluation evaluate(const Complex& z) const;
    EvalFactory factory() const;
    FactoredSum with_precision(Precision bits) const;
    /// Fully expanded polynomial; only for small degree oracles.
    ComplexPoly expand() const;

private:
    std::vector<LinearFactor> factors_;
    std::vector<Term> terms_;
    int degree_ = 0;
    Precision prec_ = mp::kDefaultPrecision;
};

struct Root {
    Complex value;
    int multiplicity = 1;
    double residual = 0.0;
};

struct RootSet {
    std::vector<Root> roots;
    int total_count = 0;
    Precision precision = mp::kDefaultPrecision;
    int iterations = 0;
    double max_residual = 0.0;
    std::vector<std::string> notes;

    std::vector<std::complex<double>> values() const;     // one entry per cluster
    std::vector<std::complex<double>> expanded() const;   // repeated by multiplicity
};

struct AberthConfig {
    Precision precision = mp::kDefaultPrecision;
    Precision max_precision = 512;
    bool escalate = true;
    int max_iterations = 600;
    /// Relative cluster radius; a cluster forms when |z_i - z_j| < radius (1 + |z_i|).
    double cluster_radius = 0x1p-20;
    /// Backward residual tolerance; zero means 2^(-bits/2).
    double tolerance = 0.0;
    Execution execution = Execution::Parallel;
};

double default_tolerance(Precision bits);

/// One synchronized Aberth round. Exposed so the serial and OpenMP variants can
/// be compared directly; returns the number of roots still moving.
struct AberthState {
    std::vector<Complex> z;
    std::vector<double> residual;
    std::vector<char> done;
};
int aberth_round(const EvalFn& f, AberthState& state, Precision bits, Execution exec);

RootSet aberth_roots(const EvalFactory& make_eval, int degree, std::vector<Complex> seeds,
                     const AberthConfig& cfg = {});

RootSet poly_roots(const ComplexPoly& p, const AberthConfig& cfg = {});

/// `count` points on a circle, rotated off the real axis.
std::vector<Complex> ring_seeds(std::complex<double> centre, double radius, int count,
                                Precision bits);

/// Greedy nearest pairing distance between two multisets of equal size.
double max_pairing_distance(std::vector<std::complex<double>> a,
                            std::vector<std::complex<double>> b);

} // namespace chanspec
