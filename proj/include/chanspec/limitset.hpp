#pragma once

#include "chanspec/parallel.hpp"
#include "chanspec/pencil.hpp"
#include "chanspec/poly.hpp"

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace chanspec {

using cplx = std::complex<double>;

/// (z - root)^exponent; exponents may be negative after normalization.
struct FamilyFactor {
    cplx root;
    int exponent = 0;
};

/// One term a_r(z) f_r(z)^n with f_r = C_r prod (z - root)^k.
struct FamilyMember {
    std::string label;
    ComplexPoly coefficient;
    double log_scale = 0.0; // log|C_r|
    double arg_scale = 0.0; // arg C_r
    std::vector<FamilyFactor> factors;

    double log_abs_f(cplx z) const;
    cplx f(cplx z) const; // for moderate arguments only
    int total_exponent() const;
};

struct Disk {
    cplx centre;
    double radius;
};

struct AnalyticFamily {
    std::vector<FamilyMember> members;
    /// Regions known to hold the interesting geometry; seeds the tracing box.
    std::vector<Disk> hints;

    /// F_n as a factored sum; every exponent must be non-negative.
    FactoredSum at(long n, Precision bits) const;
    int degree(long n) const;
};

/// Builds a member from coefficient and factors; merges repeated roots.
FamilyMember make_member(std::string label, ComplexPoly coefficient, std::vector<FamilyFactor> factors,
                         cplx scale = 1.0);

AnalyticFamily family_from_subsets(const SubsetFamily& fam);
std::string subset_label(SubsetMask s, std::size_t h);

struct Box {
    double x0 = -1, x1 = 1, y0 = -1, y1 = 1;
    double diameter() const;
    bool contains(cplx z) const { return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1; }
};

struct TraceConfig {
    int grid = 800;
    double tie_tol = 1e-9;
    double dom_margin = 1e-6;
    double refine_rel = 1e-6; // refine_tol = box diameter * refine_rel
    int max_expansions = 6;
    double expansion = 1.5;
    std::optional<Box> box; // overrides the automatic box
    bool auto_expand = true;
    Execution execution = Execution::Parallel;
};

struct ArcSample {
    std::size_t r = 0, s = 0; // member indices
    std::vector<cplx> points;
    std::vector<double> arclength;
    std::vector<double> theta;
    std::vector<double> rho;
    bool closed = false;

    double length() const { return arclength.empty() ? 0.0 : arclength.back(); }
    double theta_span() const { return theta.empty() ? 0.0 : theta.back() - theta.front(); }
    cplx point_at(double s) const;
    double theta_at(double s) const;
    /// Arclength at which theta reaches `t` (theta is increasing).
    double s_at_theta(double t) const;
    /// Polyline restricted to [from, to] in arclength.
    std::vector<cplx> sub_polyline(double from, double to) const;
};

struct IsolatedPoint {
    cplx z;
    std::size_t member = 0;
    double margin = 0.0; // 1 - max_{t != r} |f_t| / |f_r|
    bool ambiguous = false;
};

struct LimitSet {
    std::vector<ArcSample> arcs;
    std::vector<IsolatedPoint> isolated;
    std::vector<cplx> triple_points; // endpoints where a third member ties
    Box box;
    int grid = 0;
    int expansions = 0;
    std::vector<std::string> diagnostics;

    double cell_size() const;
    /// Distance from z to the nearest arc polyline.
    double distance(cplx z, std::size_t* arc = nullptr) const;
};

/// log|f_r| at every grid node, members outermost. Serial and OpenMP variants agree bit for bit.
std::vector<double> log_table(const AnalyticFamily& fam, const Box& box, int grid, Execution exec);

Box initial_box(const AnalyticFamily& fam);

LimitSet trace_limit_set(const AnalyticFamily& fam, const TraceConfig& cfg = {});

/// Arcs for the ordered pair (r, s) on a fixed box; theta = arg(f_r / f_s).
std::vector<ArcSample> trace_pair(const AnalyticFamily& fam, std::size_t r, std::size_t s, const Box& box,
                                  const TraceConfig& cfg, std::vector<std::string>* diagnostics = nullptr,
                                  bool* touches_boundary = nullptr);

std::vector<IsolatedPoint> isolated_limits(const AnalyticFamily& fam, double ambiguous_margin = 1e-6);

struct CurveDescriptor {
    enum class Kind { Circle, Line, Other };
    std::size_t r = 0, s = 0;
    Kind kind = Kind::Other;
    cplx centre{};
    double radius = 0.0;
    cplx line_point{}, line_direction{};
    std::string description;
};

std::vector<CurveDescriptor> analytic_circles(const AnalyticFamily& fam);

struct DensityResult {
    double value = 0.0;
    bool endpoint_warning = false;
};

DensityResult density_integral(const ArcSample& arc, double from_s, double to_s);

/// Members whose f ratio is constant; such pairs have no tie curve to trace.
struct DegeneratePair {
    std::size_t r, s;
    bool everywhere_tied;
};
std::vector<DegeneratePair> degenerate_pairs(const AnalyticFamily& fam);

} // namespace chanspec
