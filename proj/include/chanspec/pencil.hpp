#pragma once

#include "chanspec/dense.hpp"
#include "chanspec/graph.hpp"
#include "chanspec/poly.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace chanspec {

using SubsetMask = std::uint32_t;

/// Entry of the reduced pencil: c0 + c1 z, plus u_r when `indeterminate` >= 0.
struct PencilEntry {
    Complex c0{kSpecPrecision};
    Complex c1{kSpecPrecision};
    int indeterminate = -1;

    bool structurally_zero() const { return indeterminate < 0 && c0.is_zero() && c1.is_zero(); }
};

/// D(z) - A~ on the collapsed graph, normalized so that det = det(zI - A(n)) / k.
///
/// Rows and columns: p_1..p_h, then junction vertices in spec order. The
/// diagonal entry of p_r is u_r = ((z - alpha_r) / beta_r)^(n e_r).
struct ReducedPencil {
    std::size_t h = 0;
    std::size_t junctions = 0;
    std::vector<ChannelSpec> channels;
    std::vector<std::vector<PencilEntry>> entries;

    std::size_t dimension() const { return h + junctions; }
    /// Numeric matrix at z with the given indeterminate values.
    DenseMatrix<Complex> evaluate(const Complex& z, const std::vector<Complex>& u, Precision bits) const;
    Complex determinant(const Complex& z, const std::vector<Complex>& u, Precision bits) const;
};

ReducedPencil reduce(const GraphSpec& spec);

inline constexpr std::size_t kDefaultSubsetCap = 20;

struct ChannelFactor {
    Complex alpha{kSpecPrecision};
    Complex beta{kSpecPrecision};
    long e = 1;
};

/// {a_s, f_s} with F_n = sum_s a_s prod_{r in s} ((z - alpha_r) / beta_r)^(n e_r).
struct SubsetFamily {
    std::size_t h = 0;
    std::size_t junctions = 0;
    std::map<SubsetMask, ComplexPoly> coefficients; // nonzero a_s only
    std::vector<ChannelFactor> channels;

    SubsetMask full() const { return h == 32 ? ~SubsetMask{0} : (SubsetMask{1} << h) - 1; }
    std::vector<SubsetMask> support() const;

    /// F_n in factored form at the given precision.
    FactoredSum at(long n, Precision bits) const;
    /// log|k| and the (beta_r, n e_r) pairs making up k = prod beta_r^(n e_r).
    std::vector<std::pair<Complex, long>> global_factor(long n) const;
    Complex k(long n, Precision bits) const;
    /// k F_n as an expanded polynomial, i.e. det(zI - A(n)).
    ComplexPoly expand(long n, Precision bits) const;
    int degree(long n) const;
};

SubsetFamily subset_coefficients(const ReducedPencil& pencil, std::size_t cap = kDefaultSubsetCap,
                                 Precision bits = 256);
SubsetFamily subset_family(const GraphSpec& spec, std::size_t cap = kDefaultSubsetCap);

DenseMatrix<Complex> dense(const AssembledMatrix& m, Precision bits);
/// zI - A(n).
DenseMatrix<Complex> shifted(const AssembledMatrix& m, const Complex& z, Precision bits);

struct IdentitySample {
    std::complex<double> z;
    double relative_deviation;
    bool resampled;
};

struct IdentityReport {
    long n = 0;
    std::size_t dimension = 0;
    Precision precision = 128;
    std::vector<IdentitySample> samples;
    double max_relative_deviation = 0.0;
    int resampled = 0;
};

inline constexpr std::size_t kOracleCap = 400;

IdentityReport identity_check(const GraphSpec& spec, long n, const std::vector<std::complex<double>>& samples,
                              Precision bits = 128, std::size_t cap = kOracleCap);
/// `count` seeded uniform samples on |z| = radius.
std::vector<std::complex<double>> circle_samples(double radius, int count, unsigned long seed);

inline constexpr std::size_t kBruteCap = 12;

ComplexPoly brute_char_poly(const DenseMatrix<Complex>& a, Precision bits = 256);
ComplexPoly brute_char_poly(const AssembledMatrix& m, Precision bits = 256);

/// Subsets s for which removing the channels in s leaves a graph coverable by
/// disjoint cycles (junction singletons allowed, surviving channels whole).
std::vector<SubsetMask> cycle_cover_support(const Decomposition& d, std::size_t cap = kDefaultSubsetCap);

/// sum_{k <= d} C(h, k).
std::uint64_t balance_bound(std::size_t h, std::size_t d);

} // namespace chanspec
