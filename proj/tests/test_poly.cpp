#include "chanspec/errors.hpp"
#include "chanspec/poly.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace chanspec;
using cplx = std::complex<double>;

namespace {

std::vector<Complex> to_mp(const std::vector<cplx>& v, Precision bits)
{
    std::vector<Complex> out;
    for (auto z : v) {
        out.emplace_back(z, bits);
    }
    return out;
}

} // namespace

TEST(ComplexPoly, ArithmeticAndEvaluation)
{
    auto p = ComplexPoly::from_std({{1, 0}, {2, 0}, {3, 0}}, 128); // 1 + 2z + 3z^2
    auto q = ComplexPoly::from_std({{0, 1}, {1, 0}}, 128);         // i + z
    Complex z(0.5, -0.25, 128);
    cplx zd(0.5, -0.25);
    cplx pd = 1.0 + 2.0 * zd + 3.0 * zd * zd, qd = cplx(0, 1) + zd;
    EXPECT_LT(std::abs((p * q)(z).to_std() - pd * qd), 1e-15);
    EXPECT_LT(std::abs((p + q)(z).to_std() - (pd + qd)), 1e-15);
    EXPECT_LT(std::abs((p - q)(z).to_std() - (pd - qd)), 1e-15);
    EXPECT_LT(std::abs(p.derivative()(z).to_std() - (2.0 + 6.0 * zd)), 1e-15);
    EXPECT_EQ((p * q).degree(), 3);
    EXPECT_EQ(p.pow(4).degree(), 8);
    Evaluation e = p.evaluate(z);
    EXPECT_LT(std::abs(e.value.to_std() - pd), 1e-15);
    EXPECT_LT(std::abs(e.derivative.to_std() - (2.0 + 6.0 * zd)), 1e-15);
}

TEST(ComplexPoly, ComposeLinear)
{
    auto p = ComplexPoly::from_std({{-1, 0}, {0, 0}, {1, 0}}, 128); // z^2 - 1
    auto r = p.compose_linear(Complex(2.0, 0.0, 128), Complex(1.0, 0.0, 128));
    // (2z + 1)^2 - 1 = 4z^2 + 4z
    auto c = r.to_std();
    ASSERT_EQ(c.size(), 3u);
    EXPECT_LT(std::abs(c[0]), 1e-30);
    EXPECT_LT(std::abs(c[1] - 4.0), 1e-30);
    EXPECT_LT(std::abs(c[2] - 4.0), 1e-30);
}

TEST(ComplexPoly, LeadingOfZeroThrows)
{
    ComplexPoly zero(128);
    EXPECT_TRUE(zero.is_zero());
    EXPECT_THROW(zero.leading(), PreconditionError);
    EXPECT_THROW(poly_roots(zero), PreconditionError);
}

TEST(PolyRoots, RecoversKnownRoots)
{
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<cplx> roots;
        for (int k = 0; k < 15; ++k) {
            roots.emplace_back(g(rng), g(rng));
        }
        auto p = ComplexPoly::from_roots(to_mp(roots, 256), 256);
        AberthConfig cfg;
        cfg.precision = 128;
        RootSet rs = poly_roots(p, cfg);
        EXPECT_EQ(rs.total_count, 15);
        EXPECT_LT(max_pairing_distance(rs.expanded(), roots), 1e-20);
    }
}

TEST(PolyRoots, RootsOfUnity)
{
    const int n = 24;
    std::vector<cplx> coeffs(n + 1, 0.0);
    coeffs[0] = -1.0;
    coeffs[n] = 1.0;
    RootSet rs = poly_roots(ComplexPoly::from_std(coeffs, 53));
    std::vector<cplx> expect;
    for (int k = 0; k < n; ++k) {
        expect.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / n));
    }
    EXPECT_LT(max_pairing_distance(rs.expanded(), expect), 1e-12);
}

TEST(PolyRoots, ClustersMultipleRoots)
{
    // (z - 1)^3 (z + 2)
    Complex one(1.0, 0.0, 256), m2(-2.0, 0.0, 256);
    auto p = ComplexPoly::from_roots({one, one, one, m2}, 256);
    RootSet rs = poly_roots(p);
    ASSERT_EQ(rs.total_count, 4);
    ASSERT_EQ(rs.roots.size(), 2u);
    int triple = 0;
    for (const auto& r : rs.roots) {
        if (r.multiplicity == 3) {
            ++triple;
            EXPECT_LT(std::abs(r.value.to_std() - 1.0), 1e-6);
        }
    }
    EXPECT_EQ(triple, 1);
}

TEST(PolyRoots, DeflatesZeroRoots)
{
    // z^3 (z - 2)
    auto p = ComplexPoly::from_std({0, 0, 0, -2.0, 1.0}, 53);
    RootSet rs = poly_roots(p);
    EXPECT_EQ(rs.total_count, 4);
    std::vector<cplx> expect = {0.0, 0.0, 0.0, 2.0};
    EXPECT_LT(max_pairing_distance(rs.expanded(), expect), 1e-12);
    auto mono = ComplexPoly::from_std({0, 0, 1.0}, 53);
    EXPECT_EQ(poly_roots(mono).total_count, 2);
}

TEST(PolyRoots, EscalatesForIllConditionedInput)
{
    // Wilkinson's polynomial loses double precision; escalation must still hit the roots.
    std::vector<Complex> roots;
    std::vector<cplx> expect;
    for (int k = 1; k <= 20; ++k) {
        roots.emplace_back(static_cast<double>(k), 0.0, 256);
        expect.emplace_back(k, 0.0);
    }
    auto p = ComplexPoly::from_roots(roots, 256);
    RootSet rs = poly_roots(p);
    EXPECT_LT(max_pairing_distance(rs.expanded(), expect), 1e-8);
    EXPECT_GT(rs.precision, 53);
}

TEST(FactoredSum, AgreesWithExpansion)
{
    // (z - 1)^7 + 2 (z + i)^3 (z - 1)^2
    const Precision bits = 128;
    std::vector<LinearFactor> factors = {
        {Complex(1.0, 0.0, bits), Complex(1.0, 0.0, bits), 7},
        {Complex(0.0, -1.0, bits), Complex(1.0, 0.0, bits), 3},
        {Complex(1.0, 0.0, bits), Complex(1.0, 0.0, bits), 2},
    };
    std::vector<FactoredSum::Term> terms = {
        {ComplexPoly::constant(Complex(1.0, 0.0, bits)), {0}},
        {ComplexPoly::constant(Complex(2.0, 0.0, bits)), {1, 2}},
    };
    FactoredSum f(factors, terms);
    EXPECT_EQ(f.degree(), 7);
    ComplexPoly e = f.expand();
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    for (int k = 0; k < 20; ++k) {
        Complex z(g(rng), g(rng), bits);
        cplx a = f.evaluate(z).value.to_std(), b = e(z).to_std();
        EXPECT_LT(std::abs(a - b), 1e-25 * (1.0 + std::abs(b)));
        cplx da = f.evaluate(z).derivative.to_std(), db = e.derivative()(z).to_std();
        EXPECT_LT(std::abs(da - db), 1e-25 * (1.0 + std::abs(db)));
    }
}

TEST(FactoredSum, RejectsInvalidInput)
{
    const Precision bits = 64;
    EXPECT_THROW(FactoredSum({}, {}), PreconditionError);
    std::vector<LinearFactor> neg = {{Complex(0.0, 0.0, bits), Complex(1.0, 0.0, bits), -1}};
    EXPECT_THROW(FactoredSum(neg, {{ComplexPoly::constant(Complex(1.0, 0.0, bits)), {0}}}), PreconditionError);
    std::vector<LinearFactor> ok = {{Complex(0.0, 0.0, bits), Complex(1.0, 0.0, bits), 1}};
    EXPECT_THROW(FactoredSum(ok, {{ComplexPoly::constant(Complex(1.0, 0.0, bits)), {3}}}), PreconditionError);
}

TEST(Aberth, SerialAndParallelRoundsAgreeBitForBit)
{
    const Precision bits = 128;
    std::vector<cplx> coeffs = {{1, 2}, {-3, 0}, {0, 1}, {2, 0}, {0, 0}, {1, -1}, {1, 0}};
    auto p = ComplexPoly::from_std(coeffs, bits);
    EvalFn f = p.factory()(bits);
    AberthState a;
    a.z = ring_seeds({0, 0}, 2.0, p.degree(), bits);
    a.residual.assign(a.z.size(), 1.0);
    a.done.assign(a.z.size(), 0);
    AberthState b = a;
    for (int round = 0; round < 30; ++round) {
        int ma = aberth_round(f, a, bits, Execution::Serial);
        int mb = aberth_round(f, b, bits, Execution::Parallel);
        ASSERT_EQ(ma, mb);
        for (std::size_t i = 0; i < a.z.size(); ++i) {
            ASSERT_TRUE(a.z[i] == b.z[i]) << "round " << round << " root " << i;
            ASSERT_EQ(a.residual[i], b.residual[i]);
        }
    }
}

TEST(Aberth, SeedIndependence)
{
    std::vector<cplx> coeffs = {{2, 0}, {0, -1}, {1, 1}, {0, 0}, {-1, 0}, {0, 0}, {0, 0}, {1, 0}};
    auto p = ComplexPoly::from_std(coeffs, 128);
    RootSet a = aberth_roots(p.factory(), p.degree(), ring_seeds({0, 0}, 3.0, p.degree(), 53));
    RootSet b = aberth_roots(p.factory(), p.degree(), ring_seeds({0.3, -0.2}, 0.7, p.degree(), 53));
    EXPECT_LT(max_pairing_distance(a.expanded(), b.expanded()), 1e-12);
}

TEST(MaxPairing, GreedyDistance)
{
    std::vector<cplx> a = {{0, 0}, {1, 0}, {0, 1}};
    std::vector<cplx> b = {{0, 1.1}, {0.05, 0}, {1, 0}};
    EXPECT_NEAR(max_pairing_distance(a, b), 0.1, 1e-15);
}
