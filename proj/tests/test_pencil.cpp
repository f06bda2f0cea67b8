#include "chanspec/errors.hpp"
#include "chanspec/pencil.hpp"
#include "chanspec/presets.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace chanspec;
using cplx = std::complex<double>;

namespace {

// Schur complement on the single junction v of a graph made of loops at v:
// det(zI - A) = prod (z - alpha_r)^L_r * (z - w - sum beta_r^(L_r + 1) / (z - alpha_r)^L_r).
Complex single_junction_det(const GraphSpec& spec, long n, const Complex& z, Precision bits)
{
    Complex w(bits);
    for (const auto& e : spec.junction_edges) {
        w += Complex(e.weight, bits);
    }
    Complex prod(1.0, 0.0, bits);
    Complex inner = z - w;
    for (const auto& c : spec.channels) {
        const long len = c.base_length * n;
        Complex a(c.alpha, bits), b(c.beta, bits);
        Complex pz = mp::pow(z - a, len);
        prod = prod * pz;
        inner -= mp::pow(b, len + 1) / pz;
    }
    return prod * inner;
}

Eigen::MatrixXcd eigen_matrix(const AssembledMatrix& m)
{
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(m.dimension),
                                                static_cast<Eigen::Index>(m.dimension));
    for (const auto& [ij, v] : m.entries) {
        a(static_cast<Eigen::Index>(ij.first), static_cast<Eigen::Index>(ij.second)) = v.to_std();
    }
    return a;
}

double rel(cplx a, cplx b)
{
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

} // namespace

TEST(SubsetFamily, SingleJunctionClosedForm)
{
    for (const auto& name : {"h2k1", "h3k1", "hk1"}) {
        GraphSpec spec = presets::graph_preset(name);
        if (spec.junctions.size() != 1) {
            continue;
        }
        SubsetFamily sf = subset_family(spec);
        for (long n : {1L, 4L, 13L}) {
            FactoredSum f = sf.at(n, 256);
            Complex k = sf.k(n, 256);
            for (cplx z : circle_samples(7.5, 8, 2)) {
                Complex zz(z, 256);
                cplx got = (k * f.evaluate(zz).value).to_std();
                cplx want = single_junction_det(spec, n, zz, 256).to_std();
                EXPECT_LT(rel(got, want), 1e-60) << name << " n=" << n;
            }
        }
    }
}

TEST(SubsetFamily, KnownCoefficients)
{
    SubsetFamily sf = subset_family(presets::h2k1());
    ASSERT_EQ(sf.support(), (std::vector<SubsetMask>{0b01, 0b10, 0b11}));
    EXPECT_EQ(sf.coefficients.at(0b01).to_std(), std::vector<cplx>{-3.0});
    EXPECT_EQ(sf.coefficients.at(0b10).to_std(), std::vector<cplx>{-2.0});
    auto full = sf.coefficients.at(0b11).to_std();
    ASSERT_EQ(full.size(), 2u);
    EXPECT_LT(std::abs(full[0] + 5.0), 1e-60);
    EXPECT_LT(std::abs(full[1] - 1.0), 1e-60);
}

TEST(SubsetFamily, FullSubsetIsMonicOfJunctionDegree)
{
    for (const auto& p : presets::catalogue()) {
        if (!p.is_graph) {
            continue;
        }
        GraphSpec spec = presets::graph_preset(p.name);
        SubsetFamily sf = subset_family(spec);
        ASSERT_TRUE(sf.coefficients.count(sf.full())) << p.name;
        const ComplexPoly& a = sf.coefficients.at(sf.full());
        EXPECT_EQ(a.degree(), static_cast<int>(spec.junctions.size())) << p.name;
        EXPECT_LT(std::abs(a.leading().to_std() - 1.0), 1e-60) << p.name;
    }
}

TEST(SubsetFamily, CycleGivesRootsOfUnityPolynomial)
{
    SubsetFamily sf = subset_family(presets::cycle());
    for (long n : {1L, 3L, 10L}) {
        auto c = sf.expand(n, 256).to_std();
        ASSERT_EQ(c.size(), static_cast<std::size_t>(n + 3));
        EXPECT_LT(std::abs(c.front() + 1.0), 1e-60);
        EXPECT_LT(std::abs(c.back() - 1.0), 1e-60);
        for (std::size_t k = 1; k + 1 < c.size(); ++k) {
            EXPECT_LT(std::abs(c[k]), 1e-60);
        }
    }
}

TEST(SubsetFamily, ExpandMatchesEigenDeterminant)
{
    std::mt19937_64 rng(21);
    std::normal_distribution<double> g;
    for (const auto& name : {"h2k2", "h2k2-weak", "three", "chords3"}) {
        GraphSpec spec = presets::graph_preset(name);
        SubsetFamily sf = subset_family(spec);
        for (long n : {1L, 2L, 5L}) {
            AssembledMatrix m = assemble(spec, n);
            ComplexPoly p = sf.expand(n, 256);
            Eigen::MatrixXcd a = eigen_matrix(m);
            for (int t = 0; t < 5; ++t) {
                cplx z(2.0 * g(rng), 2.0 * g(rng));
                Eigen::MatrixXcd s = z * Eigen::MatrixXcd::Identity(a.rows(), a.cols()) - a;
                cplx want = s.partialPivLu().determinant();
                cplx got = p(Complex(z, 256)).to_std();
                EXPECT_LT(rel(got, want), 1e-10) << name << " n=" << n;
            }
        }
    }
}

TEST(SubsetFamily, SupportWithinCycleCover)
{
    for (const auto& p : presets::catalogue()) {
        if (!p.is_graph) {
            continue;
        }
        GraphSpec spec = presets::graph_preset(p.name);
        auto support = subset_family(spec).support();
        auto cover = cycle_cover_support(decompose(spec));
        std::sort(cover.begin(), cover.end());
        EXPECT_TRUE(std::includes(cover.begin(), cover.end(), support.begin(), support.end())) << p.name;
    }
}

TEST(SubsetFamily, CapIsEnforced)
{
    EXPECT_THROW(subset_family(presets::chords(4), 3), PreconditionError);
}

TEST(BalanceBound, BinomialSums)
{
    EXPECT_EQ(balance_bound(2, 1), 3u);
    EXPECT_EQ(balance_bound(3, 1), 4u);
    EXPECT_EQ(balance_bound(4, 2), 11u);
    EXPECT_EQ(balance_bound(5, 5), 32u);
    EXPECT_EQ(balance_bound(5, 9), 32u);
}

TEST(Identity, HoldsOnPresets)
{
    for (const auto& name : {"h2k1", "h2k2", "three", "chords3"}) {
        IdentityReport rep = identity_check(presets::graph_preset(name), 4, circle_samples(2.5, 10, 1), 128);
        EXPECT_LT(rep.max_relative_deviation, 1e-30) << name;
        EXPECT_EQ(rep.samples.size(), 10u);
    }
}

TEST(Identity, RespectsTheCap)
{
    EXPECT_THROW(identity_check(presets::h2k1(), 1000, circle_samples(2.0, 2, 1), 128, 100), PreconditionError);
}

TEST(BruteCharPoly, MatchesExpandAndRejectsLargeInput)
{
    GraphSpec spec = presets::three();
    SubsetFamily sf = subset_family(spec);
    auto a = brute_char_poly(assemble(spec, 2)).to_std();
    auto b = sf.expand(2, 256).to_std();
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_LT(std::abs(a[k] - b[k]), 1e-60);
    }
    EXPECT_THROW(brute_char_poly(assemble(spec, 10)), PreconditionError);
}
