#include "chanspec/errors.hpp"
#include "chanspec/presets.hpp"
#include "chanspec/spectra.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <numbers>

using namespace chanspec;

namespace {

Eigen::MatrixXcd eigen_matrix(const AssembledMatrix& m)
{
    const auto d = static_cast<Eigen::Index>(m.dimension);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& [ij, v] : m.entries) {
        a(static_cast<Eigen::Index>(ij.first), static_cast<Eigen::Index>(ij.second)) = v.to_std();
    }
    return a;
}

std::vector<cplx> eigen_eigenvalues(const AssembledMatrix& m)
{
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(eigen_matrix(m), false);
    std::vector<cplx> out;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        out.push_back(es.eigenvalues()[i]);
    }
    return out;
}

} // namespace

TEST(Eigenvalues, MatchDenseSolverOnSmallMatrices)
{
    struct Case {
        const char* name;
        long n;
    };
    for (const auto& c : {Case{"h2k1", 5}, Case{"three", 4}, Case{"h2k2-weak", 6}, Case{"chords3", 3},
                          Case{"h3k1", 4}}) {
        GraphSpec spec = presets::graph_preset(c.name);
        AssembledMatrix m = assemble(spec, c.n);
        SpectrumResult r = eigenvalues(spec, c.n);
        ASSERT_EQ(static_cast<std::size_t>(r.count()), m.dimension) << c.name;
        EXPECT_LT(max_pairing_distance(r.values(), eigen_eigenvalues(m)), 1e-8) << c.name;
    }
}

TEST(Eigenvalues, CycleGivesRootsOfUnity)
{
    SpectrumResult r = eigenvalues(presets::cycle(), 10);
    std::vector<cplx> expect;
    for (int k = 0; k < 12; ++k) {
        expect.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / 12));
    }
    EXPECT_LT(max_pairing_distance(r.values(), expect), 1e-12);
}

TEST(Eigenvalues, ClassificationOfHTwoKOne)
{
    SpectrumResult r = eigenvalues(presets::h2k1(), 30);
    int isolated = 0, arc = 0;
    for (const auto& c : r.classes) {
        isolated += c.kind == Classification::Kind::Isolated;
        arc += c.kind == Classification::Kind::Arc;
    }
    EXPECT_EQ(isolated, 1);
    EXPECT_EQ(arc, 60);
    EXPECT_NEAR(r.arc_radius, 5.0 / 30, 1e-12);
}

TEST(Eigenvalues, SeedsDoNotChangeTheAnswer)
{
    GraphSpec spec = presets::three();
    SpectrumResult a = eigenvalues(spec, 15);
    SpectrumConfig ring;
    ring.seed_from_limit = false;
    SpectrumResult b = eigenvalues(spec, 15, ring, &a.limit);
    EXPECT_LT(max_pairing_distance(a.values(), b.values()), 1e-10);
}

TEST(Eigenvalues, SerialAndParallelAgree)
{
    GraphSpec spec = presets::h2k2();
    SpectrumConfig s, p;
    s.aberth.execution = Execution::Serial;
    s.trace.execution = Execution::Serial;
    p.aberth.execution = Execution::Parallel;
    SpectrumResult a = eigenvalues(spec, 12, s);
    SpectrumResult b = eigenvalues(spec, 12, p);
    ASSERT_EQ(a.values().size(), b.values().size());
    for (std::size_t i = 0; i < a.values().size(); ++i) {
        EXPECT_EQ(a.values()[i], b.values()[i]);
    }
}

TEST(Seeds, OnePerRootAndIsolatedFirst)
{
    AnalyticFamily fam = family_from_subsets(subset_family(presets::h2k1()));
    LimitSet ls = trace_limit_set(fam);
    auto seeds = spectrum_seeds(ls, 20, 41, {0, 0}, 8.0, 53);
    ASSERT_EQ(seeds.size(), 41u);
    EXPECT_LT(std::abs(seeds[0].to_std() - 5.0), 1e-9);
}

TEST(Sectors, CountsSyntheticRoots)
{
    std::vector<cplx> roots;
    for (int k = 0; k < 40; ++k) {
        roots.push_back(std::polar(1.0, 2.0 * std::numbers::pi * (k + 0.5) / 40));
    }
    roots.push_back(0.1);
    roots.push_back(3.0);
    SectorStatistics st = sector_statistics(roots, 0.2, quadrants());
    EXPECT_EQ(st.total, 42);
    EXPECT_EQ(st.annulus, 40);
    ASSERT_EQ(st.sectors.size(), 4u);
    for (const auto& s : st.sectors) {
        EXPECT_EQ(s.count, 10);
        EXPECT_DOUBLE_EQ(s.fraction_of_annulus, 0.25);
        EXPECT_NEAR(s.fraction_of_all, 10.0 / 42.0, 1e-15);
    }
}

TEST(Tubes, CountAndPreconditions)
{
    ArcSample arc;
    for (int k = 0; k <= 100; ++k) {
        arc.points.emplace_back(k / 100.0, 0.0);
        arc.arclength.push_back(k / 100.0);
        arc.theta.push_back(k / 100.0);
        arc.rho.push_back(1.0 / (2.0 * std::numbers::pi));
    }
    std::vector<cplx> roots = {{0.5, 0.05}, {0.5, 0.2}, {0.95, 0.0}, {-0.2, 0.0}};
    EXPECT_EQ(tube_count(roots, arc, 0.2, 0.8, 0.1), 1);
    EXPECT_EQ(tube_count(roots, arc, 0.0, 1.0, 0.1), 2);
    EXPECT_EQ(tube_count(roots, arc, 0.8, 0.2, 0.1), 0);
    EXPECT_THROW(tube_count(roots, arc, 0.0, 1.0, 0.001), PreconditionError);
}

TEST(Eigenvector, ResidualAgainstDenseMatrix)
{
    GraphSpec spec = presets::h2k1();
    const long n = 12;
    SpectrumResult r = eigenvalues(spec, n);
    Eigen::MatrixXcd a = eigen_matrix(assemble(spec, n));
    for (std::size_t i = 0; i < r.eigenvalues.roots.size(); i += 5) {
        cplx lambda = r.eigenvalues.roots[i].value.to_std();
        EigenvectorResult v = eigenvector(spec, n, lambda);
        Eigen::VectorXcd x = Eigen::Map<const Eigen::VectorXcd>(v.v.data(), static_cast<Eigen::Index>(v.v.size()));
        EXPECT_NEAR(x.norm(), 1.0, 1e-12);
        double res = (a * x - v.lambda * x).norm();
        EXPECT_LT(res, 1e-8 * (a.norm() + std::abs(v.lambda))) << lambda;
        EXPECT_LT(std::abs(v.lambda - lambda), 1e-8 * (1.0 + std::abs(lambda)));
    }
}

TEST(Eigenvector, RejectsNonEigenvalues)
{
    EXPECT_THROW(eigenvector(presets::h2k1(), 10, {0.123, 0.456}), PreconditionError);
}

TEST(Localization, IsolatedEigenvectorDecays)
{
    GraphSpec spec = presets::h2k1();
    const long n = 30;
    SpectrumResult r = eigenvalues(spec, n);
    cplx iso = 0;
    for (std::size_t i = 0; i < r.classes.size(); ++i) {
        if (r.classes[i].kind == Classification::Kind::Isolated) {
            iso = r.eigenvalues.roots[i].value.to_std();
        }
    }
    EigenvectorResult v = eigenvector(spec, n, iso);
    LocalizationReport rep = localization_report(spec, n, v.lambda, v.v);
    ASSERT_EQ(rep.channels.size(), 2u);
    // |5 - 2| / 2 = 3/2 and |5 + 1| / 3 = 2: both channels decay away from the junction.
    EXPECT_NEAR(rep.channels[0].ratio, 1.5, 1e-4);
    EXPECT_NEAR(rep.channels[1].ratio, 2.0, 1e-4);
    EXPECT_NEAR(rep.c, 2.0 / 3.0, 1e-4);
    for (const auto& ch : rep.channels) {
        EXPECT_NE(ch.direction, Decay::Flat);
        EXPECT_TRUE(ch.geometric_certificate);
        EXPECT_LT(ch.recurrence_residual, 1e-10);
    }
    EXPECT_TRUE(rep.mass_bound_holds);
    EXPECT_TRUE(rep.mass_non_increasing);
    EXPECT_TRUE(rep.dichotomy_holds);
}

TEST(Resolvent, NormMatchesSmallestSingularValue)
{
    AssembledMatrix m = assemble(presets::three(), 3);
    DenseMatrix<cplx> a = dense_double(m);
    Eigen::MatrixXcd e = eigen_matrix(m);
    for (cplx z : {cplx(0.3, 0.4), cplx(-1.0, 0.5), cplx(2.5, -1.0)}) {
        Eigen::MatrixXcd s = z * Eigen::MatrixXcd::Identity(e.rows(), e.cols()) - e;
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s);
        double want = 1.0 / svd.singularValues()(svd.singularValues().size() - 1);
        auto got = resolvent_norm(a, z, 60);
        ASSERT_TRUE(got.has_value());
        EXPECT_NEAR(*got / want, 1.0, 1e-3) << z;
    }
}

TEST(Resolvent, SingularPointIsSkipped)
{
    DenseMatrix<cplx> a = dense_double(assemble(presets::cycle(), 2));
    EXPECT_FALSE(resolvent_norm(a, 1.0, 10).has_value());
}

TEST(Resolvent, SerialAndParallelGridsAgreeBitForBit)
{
    GraphSpec spec = presets::h2k1();
    Box box{-4, 8, -5, 5};
    ResolventGrid s = resolvent_grid(spec, 6, box, 9, 7, 20, Execution::Serial);
    ResolventGrid p = resolvent_grid(spec, 6, box, 9, 7, 20, Execution::Parallel);
    ASSERT_EQ(s.points.size(), 63u);
    ASSERT_EQ(p.points.size(), 63u);
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        EXPECT_EQ(s.points[i].z, p.points[i].z);
        EXPECT_EQ(s.points[i].skipped, p.points[i].skipped);
        EXPECT_EQ(std::memcmp(&s.points[i].log10_norm, &p.points[i].log10_norm, sizeof(double)), 0);
    }
}

TEST(FamilyRoots, ClosingFamilyClosedForm)
{
    const long n = 16;
    const double c = 0.7;
    SpectrumResult r = family_roots(presets::closing(c), n);
    std::vector<cplx> expect;
    for (long k = 0; k < n; ++k) {
        cplx w = std::sqrt(1.0 + std::pow(c, 1.0 / n) * std::polar(1.0, 2.0 * std::numbers::pi * k / n));
        expect.push_back(w);
        expect.push_back(-w);
    }
    EXPECT_LT(max_pairing_distance(r.values(), expect), 1e-12);
}
