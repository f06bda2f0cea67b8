#pragma once

#include "chanspec/graph.hpp"
#include "chanspec/limitset.hpp"
#include "chanspec/parallel.hpp"
#include "chanspec/pencil.hpp"
#include "chanspec/poly.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace chanspec {

struct Classification {
    enum class Kind { Arc, Isolated, Unclassified };
    Kind kind = Kind::Unclassified;
    std::size_t index = 0; // arc or isolated point id
    double distance = 0.0; // to the nearest predicted object of either kind
};

const char* to_string(Classification::Kind k);

struct SpectrumConfig {
    AberthConfig aberth;
    TraceConfig trace;
    /// Seed from the traced limit set; otherwise a plain ring.
    bool seed_from_limit = true;
    /// "On an arc" when within arc_factor / n.
    double arc_factor = 5.0;
    /// "Isolated" when within isolated_factor (1 - margin)^n / margin.
    double isolated_factor = 10.0;
};

struct SpectrumResult {
    long n = 0;
    RootSet eigenvalues;
    std::vector<Classification> classes; // one per cluster in eigenvalues.roots
    Precision precision_used = mp::kDefaultPrecision;
    double arc_radius = 0.0;
    LimitSet limit;

    int count() const { return eigenvalues.total_count; }
    std::vector<cplx> values() const { return eigenvalues.expanded(); }
    /// Isolated-point classification radius for point i of the limit set.
    double isolated_radius(std::size_t i, double factor) const;
};

/// Roots of F_n via the pencil; limit set traced unless supplied.
SpectrumResult eigenvalues(const GraphSpec& spec, long n, const SpectrumConfig& cfg = {},
                           const LimitSet* limit = nullptr);
/// Roots of sum_r a_r f_r^n for a directly supplied family.
SpectrumResult family_roots(const AnalyticFamily& fam, long n, const SpectrumConfig& cfg = {},
                            const LimitSet* limit = nullptr);

/// Seeds: isolated points, arc samples spaced in theta and jittered by 1/n, then a ring.
std::vector<Complex> spectrum_seeds(const LimitSet& limit, long n, int degree, cplx ring_centre,
                                    double ring_radius, Precision bits);

void classify(SpectrumResult& result, const SpectrumConfig& cfg);

struct Sector {
    double lo = 0.0;
    double hi = 0.0;
};

struct SectorCount {
    Sector sector;
    int count = 0;
    double fraction_of_annulus = 0.0;
    double fraction_of_all = 0.0;
};

struct SectorStatistics {
    int total = 0;
    int annulus = 0;
    std::vector<SectorCount> sectors;
};

/// Counts roots with 1 - delta < |z| < 1 + delta and lo < arg z < hi (angles taken mod 2 pi).
SectorStatistics sector_statistics(const std::vector<cplx>& roots, double delta, const std::vector<Sector>& sectors);
std::vector<Sector> quadrants();

/// Eigenvalues within epsilon of arc(from_s .. to_s).
int tube_count(const std::vector<cplx>& roots, const ArcSample& arc, double from_s, double to_s, double epsilon);

struct EigenvectorConfig {
    double jitter = 0x1p-30;
    int iterations = 2;
    int max_iterations = 8;
    /// Accepts when ||(A - lambda) v|| <= tolerance (||A||_F + |lambda|).
    double tolerance = 1e-10;
    /// Maximum backward residual of F_n at lambda for lambda to count as an eigenvalue.
    double eigen_tolerance = 1e-8;
    std::size_t dimension_cap = kOracleCap;
};

struct EigenvectorResult {
    cplx lambda;  // Rayleigh quotient of v
    std::vector<cplx> v;
    double residual = 0.0;
    Precision precision = mp::kDefaultPrecision;
    int iterations = 0;
};

EigenvectorResult eigenvector(const GraphSpec& spec, long n, cplx lambda, const EigenvectorConfig& cfg = {});

enum class Decay { Forward, Backward, Flat, Zero };
const char* to_string(Decay d);

struct ChannelLocalization {
    std::size_t channel = 0;
    cplx alpha, beta;
    double circle_distance = 0.0; // dist(lambda, S_r)
    double ratio = 0.0;           // |(lambda - alpha) / beta|
    double c = 0.0;               // min(ratio, 1 / ratio)
    Decay direction = Decay::Flat;
    std::vector<double> profile;  // |v_i| along the channel
    double recurrence_residual = 0.0;
    bool geometric_certificate = false;
    bool ratio_certificate = false;
    double a = 0.0;          // n dist(lambda, S_r)
    double d = 0.0;          // exp(2 a e) (1 + slack)
    double max_ratio = 0.0;  // max |v_i / v_j|
};

struct JunctionMass {
    long N = 0;
    double mass = 0.0;  // ||v restricted to C_{n,N}||^2
    double bound = 0.0; // h c^{2(N-1)} / (1 - c^2), infinite when c >= 1
};

struct LocalizationConfig {
    /// Case 1 applies when dist(lambda, S_r) >= delta_factor / n.
    double delta_factor = 5.0;
    double slack = 0.1;
};

struct LocalizationReport {
    cplx lambda;
    long n = 0;
    double norm = 1.0;
    double c = 0.0; // max_r c_r
    std::vector<ChannelLocalization> channels;
    std::vector<JunctionMass> junction_mass;
    std::vector<double> per_junction_mass; // |v_j|^2 per junction vertex
    bool mass_bound_holds = true;
    bool mass_non_increasing = true;
    bool dichotomy_holds = true;
};

LocalizationReport localization_report(const GraphSpec& spec, long n, cplx lambda, const std::vector<cplx>& v,
                                       const LocalizationConfig& cfg = {});

struct ResolventPoint {
    cplx z;
    double log10_norm = 0.0;
    bool skipped = false;
};

struct ResolventGrid {
    int nx = 0, ny = 0;
    Box box;
    std::vector<ResolventPoint> points; // row-major, y outermost
};

ResolventGrid resolvent_grid(const GraphSpec& spec, long n, const Box& box, int nx, int ny, int probes = 30,
                             Execution exec = Execution::Parallel, std::size_t cap = kOracleCap);

/// ||(zI - A)^{-1}||_2 estimated by power iteration on the inverse; nullopt when singular.
std::optional<double> resolvent_norm(const DenseMatrix<cplx>& a, cplx z, int probes);

DenseMatrix<cplx> dense_double(const AssembledMatrix& m);

} // namespace chanspec
