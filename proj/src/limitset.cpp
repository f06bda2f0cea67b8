#include "chanspec/limitset.hpp"

#include "chanspec/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace chanspec {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Node offsets inside each cell keep grid nodes off exact rational points.
constexpr double kOffsetX = 0.4142135623730951;
constexpr double kOffsetY = 0.2360679774997897;

double wrap(double a)
{
    while (a > kPi) {
        a -= 2 * kPi;
    }
    while (a <= -kPi) {
        a += 2 * kPi;
    }
    return a;
}

double segment_distance(cplx p, cplx a, cplx b)
{
    cplx d = b - a;
    double len2 = std::norm(d);
    if (len2 == 0.0) {
        return std::abs(p - a);
    }
    double t = std::clamp(((p - a) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

struct Grid {
    Box box;
    int n = 0;
    double dx = 0, dy = 0;

    Grid(const Box& b, int nodes) : box(b), n(nodes)
    {
        dx = (b.x1 - b.x0) / nodes;
        dy = (b.y1 - b.y0) / nodes;
    }
    cplx node(int i, int j) const { return {box.x0 + (i + kOffsetX) * dx, box.y0 + (j + kOffsetY) * dy}; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * n + i; }
    std::size_t nodes() const { return static_cast<std::size_t>(n) * n; }
};

// Ratio f_r / f_s as root -> net exponent, plus log|C| and arg C.
struct Ratio {
    std::vector<FamilyFactor> factors;
    double log_scale = 0.0;
    double arg_scale = 0.0;
};

Ratio ratio_of(const FamilyMember& a, const FamilyMember& b)
{
    std::map<std::pair<double, double>, int> net;
    std::vector<cplx> order;
    auto add = [&](cplx root, int k) {
        auto key = std::make_pair(root.real(), root.imag());
        if (!net.count(key)) {
            order.push_back(root);
        }
        net[key] += k;
    };
    for (const auto& f : a.factors) {
        add(f.root, f.exponent);
    }
    for (const auto& f : b.factors) {
        add(f.root, -f.exponent);
    }
    Ratio r;
    for (cplx root : order) {
        int k = net[{root.real(), root.imag()}];
        if (k != 0) {
            r.factors.push_back({root, k});
        }
    }
    r.log_scale = a.log_scale - b.log_scale;
    r.arg_scale = a.arg_scale - b.arg_scale;
    return r;
}

// log|b| = c log|a| identically for some c != 0: both pairs tie on the same curve.
bool proportional(const Ratio& a, const Ratio& b)
{
    if (a.factors.empty() || a.factors.size() != b.factors.size()) {
        return false;
    }
    double c = 0.0;
    for (const auto& fa : a.factors) {
        auto it = std::find_if(b.factors.begin(), b.factors.end(), [&](const FamilyFactor& fb) { return fb.root == fa.root; });
        if (it == b.factors.end()) {
            return false;
        }
        double k = static_cast<double>(it->exponent) / fa.exponent;
        if (c == 0.0) {
            c = k;
        } else if (k != c) {
            return false;
        }
    }
    return c != 0.0 && std::abs(b.log_scale - c * a.log_scale) <= 1e-12 * (1.0 + std::abs(b.log_scale));
}

double phase(const Ratio& q, cplx z)
{
    double a = q.arg_scale;
    for (const auto& f : q.factors) {
        a += f.exponent * std::arg(z - f.root);
    }
    return a;
}

// Continuous change of arg(f_r / f_s) along the chord a -> b.
double phase_change(const Ratio& q, cplx a, cplx b, int depth = 0)
{
    double d = wrap(phase(q, b) - phase(q, a));
    if (std::abs(d) > kPi / 2 && depth < 24) {
        cplx m = 0.5 * (a + b);
        return phase_change(q, a, m, depth + 1) + phase_change(q, m, b, depth + 1);
    }
    return d;
}

struct PairTracer {
    const AnalyticFamily& fam;
    std::size_t r, s;
    Ratio ratio;
    const TraceConfig& cfg;
    double refine_tol;
    double log_keep;

    double tie(cplx z) const { return fam.members[r].log_abs_f(z) - fam.members[s].log_abs_f(z); }

    // Third-member excess over the tied pair; admissible when <= 0.
    double excess(cplx z) const
    {
        double top = std::max(fam.members[r].log_abs_f(z), fam.members[s].log_abs_f(z));
        double third = -kInf;
        for (std::size_t t = 0; t < fam.members.size(); ++t) {
            if (t != r && t != s) {
                third = std::max(third, fam.members[t].log_abs_f(z));
            }
        }
        return third - top - log_keep;
    }

    cplx refine(cplx a, double ga, cplx b) const
    {
        for (int it = 0; it < 60 && std::abs(b - a) > refine_tol; ++it) {
            cplx m = 0.5 * (a + b);
            double gm = tie(m);
            if ((gm >= 0) == (ga >= 0)) {
                a = m;
                ga = gm;
            } else {
                b = m;
            }
        }
        return 0.5 * (a + b);
    }

    // Point on the chord pass -> fail where the third member starts to dominate.
    cplx transition(cplx pass, cplx fail) const
    {
        for (int it = 0; it < 50; ++it) {
            cplx m = 0.5 * (pass + fail);
            if (excess(m) <= 0) {
                pass = m;
            } else {
                fail = m;
            }
        }
        return pass;
    }
};

ArcSample finish_arc(const PairTracer& t, std::vector<cplx> pts, bool closed)
{
    ArcSample arc;
    arc.r = t.r;
    arc.s = t.s;
    arc.closed = closed;
    auto unwrap = [&](const std::vector<cplx>& p) {
        std::vector<double> th{phase(t.ratio, p.front())};
        for (std::size_t j = 1; j < p.size(); ++j) {
            th.push_back(th.back() + phase_change(t.ratio, p[j - 1], p[j]));
        }
        return th;
    };
    std::vector<double> theta = unwrap(pts);
    if (theta.back() < theta.front()) {
        std::reverse(pts.begin(), pts.end());
        theta = unwrap(pts);
    }
    arc.points = std::move(pts);
    arc.theta = std::move(theta);
    arc.arclength.assign(arc.points.size(), 0.0);
    for (std::size_t j = 1; j < arc.points.size(); ++j) {
        arc.arclength[j] = arc.arclength[j - 1] + std::abs(arc.points[j] - arc.points[j - 1]);
    }
    const std::size_t n = arc.points.size();
    arc.rho.assign(n, 0.0);
    const double L = arc.length();
    const double span = arc.theta_span();
    for (std::size_t j = 0; j < n; ++j) {
        double th0, th1, s0, s1;
        if (j > 0 && j + 1 < n) {
            th0 = arc.theta[j - 1];
            th1 = arc.theta[j + 1];
            s0 = arc.arclength[j - 1];
            s1 = arc.arclength[j + 1];
        } else if (closed && n >= 3) {
            // Closed polylines repeat their first point at the end.
            if (j == 0) {
                th0 = arc.theta[n - 2] - span;
                s0 = arc.arclength[n - 2] - L;
                th1 = arc.theta[1];
                s1 = arc.arclength[1];
            } else {
                th0 = arc.theta[n - 2];
                s0 = arc.arclength[n - 2];
                th1 = arc.theta[1] + span;
                s1 = arc.arclength[1] + L;
            }
        } else if (j == 0) {
            th0 = arc.theta[0];
            s0 = arc.arclength[0];
            th1 = arc.theta[std::min<std::size_t>(1, n - 1)];
            s1 = arc.arclength[std::min<std::size_t>(1, n - 1)];
        } else {
            th0 = arc.theta[j - 1];
            s0 = arc.arclength[j - 1];
            th1 = arc.theta[j];
            s1 = arc.arclength[j];
        }
        arc.rho[j] = s1 > s0 ? (th1 - th0) / (2 * kPi * (s1 - s0)) : 0.0;
    }
    return arc;
}

// Splits a polyline where theta turns back, so each piece is monotone.
std::vector<std::vector<cplx>> split_monotone(const PairTracer& t, const std::vector<cplx>& pts, bool& closed)
{
    std::vector<std::vector<cplx>> out;
    if (pts.size() < 2) {
        return out;
    }
    std::vector<double> d(pts.size() - 1);
    for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
        d[j] = phase_change(t.ratio, pts[j], pts[j + 1]);
    }
    std::vector<cplx> cur{pts[0]};
    int dir = 0;
    for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
        int sj = d[j] > 1e-13 ? 1 : (d[j] < -1e-13 ? -1 : 0);
        if (sj != 0 && dir != 0 && sj != dir) {
            out.push_back(std::move(cur));
            cur = {pts[j]};
            closed = false;
        }
        if (sj != 0) {
            dir = sj;
        }
        cur.push_back(pts[j + 1]);
    }
    out.push_back(std::move(cur));
    if (out.size() > 1) {
        closed = false;
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------- family

double FamilyMember::log_abs_f(cplx z) const
{
    double v = log_scale;
    for (const auto& f : factors) {
        double d = std::abs(z - f.root);
        v += f.exponent * std::log(d);
    }
    return std::isnan(v) ? -kInf : v;
}

cplx FamilyMember::f(cplx z) const
{
    cplx v = std::polar(std::exp(log_scale), arg_scale);
    for (const auto& fac : factors) {
        v *= std::pow(z - fac.root, fac.exponent);
    }
    return v;
}

int FamilyMember::total_exponent() const
{
    int k = 0;
    for (const auto& f : factors) {
        k += f.exponent;
    }
    return k;
}

FamilyMember make_member(std::string label, ComplexPoly coefficient, std::vector<FamilyFactor> factors, cplx scale)
{
    if (coefficient.is_zero()) {
        throw PreconditionError("family member '" + label + "' has a zero coefficient");
    }
    if (scale == cplx(0.0)) {
        throw PreconditionError("family member '" + label + "' has a zero f");
    }
    FamilyMember m;
    m.label = std::move(label);
    m.coefficient = std::move(coefficient);
    m.log_scale = std::log(std::abs(scale));
    m.arg_scale = std::arg(scale);
    for (const auto& f : factors) {
        auto it = std::find_if(m.factors.begin(), m.factors.end(), [&](const FamilyFactor& g) { return g.root == f.root; });
        if (it == m.factors.end()) {
            m.factors.push_back(f);
        } else {
            it->exponent += f.exponent;
        }
    }
    m.factors.erase(std::remove_if(m.factors.begin(), m.factors.end(), [](const FamilyFactor& f) { return f.exponent == 0; }),
                    m.factors.end());
    return m;
}

std::string subset_label(SubsetMask s, std::size_t h)
{
    std::string out = "{";
    bool first = true;
    for (std::size_t r = 0; r < h; ++r) {
        if (s & (SubsetMask{1} << r)) {
            out += (first ? "" : ",") + std::to_string(r + 1);
            first = false;
        }
    }
    return out + "}";
}

AnalyticFamily family_from_subsets(const SubsetFamily& sf)
{
    if (sf.coefficients.empty()) {
        throw PreconditionError("all subset coefficients vanish");
    }
    AnalyticFamily fam;
    for (const auto& [mask, a] : sf.coefficients) {
        std::vector<FamilyFactor> factors;
        double log_scale = 0.0, arg_scale = 0.0;
        for (std::size_t r = 0; r < sf.h; ++r) {
            if (mask & (SubsetMask{1} << r)) {
                const auto& c = sf.channels[r];
                factors.push_back({c.alpha.to_std(), static_cast<int>(c.e)});
                cplx beta = c.beta.to_std();
                log_scale -= static_cast<double>(c.e) * std::log(std::abs(beta));
                arg_scale -= static_cast<double>(c.e) * std::arg(beta);
            }
        }
        FamilyMember m = make_member(subset_label(mask, sf.h), a, std::move(factors));
        m.log_scale = log_scale;
        m.arg_scale = arg_scale;
        fam.members.push_back(std::move(m));
    }
    // Divide through by the member of least total exponent.
    std::size_t base = 0;
    for (std::size_t i = 1; i < fam.members.size(); ++i) {
        if (fam.members[i].total_exponent() < fam.members[base].total_exponent()) {
            base = i;
        }
    }
    const FamilyMember pivot = fam.members[base];
    for (auto& m : fam.members) {
        std::vector<FamilyFactor> factors = m.factors;
        for (const auto& f : pivot.factors) {
            factors.push_back({f.root, -f.exponent});
        }
        FamilyMember merged = make_member(m.label, m.coefficient, std::move(factors));
        merged.log_scale = m.log_scale - pivot.log_scale;
        merged.arg_scale = m.arg_scale - pivot.arg_scale;
        m = std::move(merged);
    }
    for (const auto& c : sf.channels) {
        fam.hints.push_back({c.alpha.to_std(), 2.0 * (std::abs(c.beta.to_std()) + 1.0)});
    }
    return fam;
}

FactoredSum AnalyticFamily::at(long n, Precision bits) const
{
    std::vector<LinearFactor> factors;
    std::vector<FactoredSum::Term> terms;
    auto factor_index = [&](cplx root, long exponent) {
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (factors[i].root.to_std() == root && factors[i].exponent == exponent) {
                return i;
            }
        }
        factors.push_back({Complex(root, bits), Complex(1.0, 0.0, bits), exponent});
        return factors.size() - 1;
    };
    for (const auto& m : members) {
        FactoredSum::Term t{m.coefficient.with_precision(bits), {}};
        for (const auto& f : m.factors) {
            if (f.exponent < 0) {
                throw PreconditionError("member '" + m.label + "' has a negative exponent; no polynomial form");
            }
            t.factors.push_back(factor_index(f.root, n * f.exponent));
        }
        if (m.log_scale != 0.0 || m.arg_scale != 0.0) {
            Real lg(m.log_scale * static_cast<double>(n), bits);
            Real ph(m.arg_scale * static_cast<double>(n), bits);
            t.coefficient = t.coefficient.scale(Complex::polar(mp::exp(lg), ph));
        }
        terms.push_back(std::move(t));
    }
    return FactoredSum(std::move(factors), std::move(terms));
}

int AnalyticFamily::degree(long n) const
{
    long d = 0;
    for (const auto& m : members) {
        d = std::max(d, m.coefficient.degree() + n * m.total_exponent());
    }
    return static_cast<int>(d);
}

// ---------------------------------------------------------------- geometry helpers

double Box::diameter() const
{
    return std::hypot(x1 - x0, y1 - y0);
}

double LimitSet::cell_size() const
{
    return grid > 0 ? (box.x1 - box.x0) / grid : 0.0;
}

double LimitSet::distance(cplx z, std::size_t* which) const
{
    double best = kInf;
    for (std::size_t a = 0; a < arcs.size(); ++a) {
        const auto& p = arcs[a].points;
        for (std::size_t j = 0; j + 1 < p.size(); ++j) {
            double d = segment_distance(z, p[j], p[j + 1]);
            if (d < best) {
                best = d;
                if (which) {
                    *which = a;
                }
            }
        }
        if (p.size() == 1) {
            double d = std::abs(z - p[0]);
            if (d < best) {
                best = d;
                if (which) {
                    *which = a;
                }
            }
        }
    }
    return best;
}

namespace {

std::size_t locate(const std::vector<double>& s, double x)
{
    auto it = std::upper_bound(s.begin(), s.end(), x);
    std::size_t j = it == s.begin() ? 0 : static_cast<std::size_t>(it - s.begin()) - 1;
    return std::min(j, s.size() >= 2 ? s.size() - 2 : 0);
}

} // namespace

cplx ArcSample::point_at(double s) const
{
    if (points.size() == 1) {
        return points[0];
    }
    std::size_t j = locate(arclength, s);
    double len = arclength[j + 1] - arclength[j];
    double t = len > 0 ? std::clamp((s - arclength[j]) / len, 0.0, 1.0) : 0.0;
    return points[j] + t * (points[j + 1] - points[j]);
}

double ArcSample::theta_at(double s) const
{
    if (points.size() == 1) {
        return theta[0];
    }
    std::size_t j = locate(arclength, s);
    double len = arclength[j + 1] - arclength[j];
    double t = len > 0 ? std::clamp((s - arclength[j]) / len, 0.0, 1.0) : 0.0;
    return theta[j] + t * (theta[j + 1] - theta[j]);
}

double ArcSample::s_at_theta(double t) const
{
    if (points.size() == 1) {
        return 0.0;
    }
    std::size_t j = locate(theta, t);
    double dt = theta[j + 1] - theta[j];
    double u = dt > 0 ? std::clamp((t - theta[j]) / dt, 0.0, 1.0) : 0.0;
    return arclength[j] + u * (arclength[j + 1] - arclength[j]);
}

std::vector<cplx> ArcSample::sub_polyline(double from, double to) const
{
    std::vector<cplx> out;
    if (points.empty() || to < from) {
        return out;
    }
    out.push_back(point_at(from));
    for (std::size_t j = 0; j < points.size(); ++j) {
        if (arclength[j] > from && arclength[j] < to) {
            out.push_back(points[j]);
        }
    }
    out.push_back(point_at(to));
    return out;
}

// ---------------------------------------------------------------- tracing

std::vector<double> log_table(const AnalyticFamily& fam, const Box& box, int grid, Execution exec)
{
    Grid g(box, grid);
    const std::size_t nodes = g.nodes();
    const std::size_t m = fam.members.size();
    std::vector<double> table(m * nodes);
    const long total = static_cast<long>(nodes);
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (long k = 0; k < total; ++k) {
            cplx z = g.node(static_cast<int>(k % grid), static_cast<int>(k / grid));
            for (std::size_t r = 0; r < m; ++r) {
                table[r * nodes + static_cast<std::size_t>(k)] = fam.members[r].log_abs_f(z);
            }
        }
    } else {
        for (long k = 0; k < total; ++k) {
            cplx z = g.node(static_cast<int>(k % grid), static_cast<int>(k / grid));
            for (std::size_t r = 0; r < m; ++r) {
                table[r * nodes + static_cast<std::size_t>(k)] = fam.members[r].log_abs_f(z);
            }
        }
    }
    return table;
}

Box initial_box(const AnalyticFamily& fam)
{
    double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
    auto include = [&](cplx c, double rad) {
        x0 = std::min(x0, c.real() - rad);
        x1 = std::max(x1, c.real() + rad);
        y0 = std::min(y0, c.imag() - rad);
        y1 = std::max(y1, c.imag() + rad);
    };
    for (const auto& d : fam.hints) {
        include(d.centre, d.radius);
    }
    for (const auto& m : fam.members) {
        for (const auto& f : m.factors) {
            include(f.root, 2.0);
        }
        if (m.coefficient.degree() >= 1) {
            try {
                for (auto z : poly_roots(m.coefficient.with_precision(128), AberthConfig{128}).values()) {
                    include(z, 1.0);
                }
            } catch (const NumericError&) {
                // Zeros of a_r only pad the box; tracing proceeds without them.
            }
        }
    }
    if (!(x0 < x1)) {
        x0 = y0 = -2.0;
        x1 = y1 = 2.0;
    }
    // Square cells.
    double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
    double half = 0.5 * std::max(x1 - x0, y1 - y0);
    return {cx - half, cx + half, cy - half, cy + half};
}

std::vector<DegeneratePair> degenerate_pairs(const AnalyticFamily& fam)
{
    std::vector<DegeneratePair> out;
    for (std::size_t r = 0; r < fam.members.size(); ++r) {
        for (std::size_t s = r + 1; s < fam.members.size(); ++s) {
            Ratio q = ratio_of(fam.members[r], fam.members[s]);
            if (q.factors.empty()) {
                out.push_back({r, s, std::abs(q.log_scale) < 1e-14});
            }
        }
    }
    return out;
}

namespace {

struct TopThree {
    std::array<int, 3> idx{-1, -1, -1};
    std::array<double, 3> val{-kInf, -kInf, -kInf};
};

std::vector<TopThree> top_three(const std::vector<double>& table, std::size_t members, std::size_t nodes)
{
    std::vector<TopThree> top(nodes);
    for (std::size_t k = 0; k < nodes; ++k) {
        TopThree t;
        for (std::size_t r = 0; r < members; ++r) {
            double v = table[r * nodes + k];
            for (int p = 0; p < 3; ++p) {
                if (v > t.val[p]) {
                    for (int q = 2; q > p; --q) {
                        t.val[q] = t.val[q - 1];
                        t.idx[q] = t.idx[q - 1];
                    }
                    t.val[p] = v;
                    t.idx[p] = static_cast<int>(r);
                    break;
                }
            }
        }
        top[k] = t;
    }
    return top;
}

double third_value(const TopThree& t, std::size_t r, std::size_t s)
{
    for (int p = 0; p < 3; ++p) {
        if (t.idx[p] >= 0 && t.idx[p] != static_cast<int>(r) && t.idx[p] != static_cast<int>(s)) {
            return t.val[p];
        }
    }
    return -kInf;
}

std::vector<ArcSample> trace_pair_on_table(const AnalyticFamily& fam, std::size_t r, std::size_t s, const Grid& g,
                                           const std::vector<double>& table, const std::vector<TopThree>& top,
                                           const TraceConfig& cfg, std::vector<std::string>* diagnostics,
                                           bool* touches)
{
    const std::size_t nodes = g.nodes();
    const int n = g.n;
    PairTracer tracer{fam, r, s, ratio_of(fam.members[r], fam.members[s]), cfg,
                      g.box.diameter() * cfg.refine_rel, std::log1p(-cfg.dom_margin)};
    std::vector<ArcSample> arcs;
    if (tracer.ratio.factors.empty()) {
        if (diagnostics) {
            diagnostics->push_back("pair " + fam.members[r].label + "/" + fam.members[s].label +
                                   " has a constant ratio; not traced");
        }
        return arcs;
    }
    for (std::size_t t = 0; t < fam.members.size(); ++t) {
        if (t != r && t != s && proportional(tracer.ratio, ratio_of(fam.members[r], fam.members[t]))) {
            if (diagnostics) {
                diagnostics->push_back("pair " + fam.members[r].label + "/" + fam.members[s].label + " ties with " +
                                       fam.members[t].label + " along its whole curve; not traced");
            }
            return arcs;
        }
    }
    auto gval = [&](int i, int j) {
        std::size_t k = g.index(i, j);
        return table[r * nodes + k] - table[s * nodes + k];
    };
    auto dominated = [&](int i, int j) {
        std::size_t k = g.index(i, j);
        double top_pair = std::max(table[r * nodes + k], table[s * nodes + k]);
        return third_value(top[k], r, s) > top_pair + std::log(2.0);
    };

    std::vector<int> hpt(nodes, -1), vpt(nodes, -1);
    std::vector<cplx> pts;
    std::vector<char> on_boundary;
    std::vector<std::array<int, 2>> nbr;

    auto crossing = [&](int i0, int j0, int i1, int j1, bool horizontal) -> int {
        std::size_t key = g.index(i0, j0);
        int& slot = horizontal ? hpt[key] : vpt[key];
        if (slot >= 0) {
            return slot;
        }
        double ga = gval(i0, j0);
        cplx z = tracer.refine(g.node(i0, j0), ga, g.node(i1, j1));
        slot = static_cast<int>(pts.size());
        pts.push_back(z);
        bool edge = horizontal ? (j0 == 0 || j0 == n - 1) : (i0 == 0 || i0 == n - 1);
        on_boundary.push_back(edge);
        nbr.push_back({-1, -1});
        return slot;
    };
    auto link = [&](int a, int b) {
        auto add = [&](int p, int q) {
            if (nbr[p][0] < 0) {
                nbr[p][0] = q;
            } else if (nbr[p][1] < 0) {
                nbr[p][1] = q;
            }
        };
        add(a, b);
        add(b, a);
    };

    for (int j = 0; j + 1 < n; ++j) {
        for (int i = 0; i + 1 < n; ++i) {
            bool sa = gval(i, j) >= 0, sb = gval(i + 1, j) >= 0;
            bool sc = gval(i + 1, j + 1) >= 0, sd = gval(i, j + 1) >= 0;
            int count = (sa != sb) + (sb != sc) + (sc != sd) + (sd != sa);
            if (count == 0) {
                continue;
            }
            if (dominated(i, j) && dominated(i + 1, j) && dominated(i + 1, j + 1) && dominated(i, j + 1)) {
                continue;
            }
            int bottom = sa != sb ? crossing(i, j, i + 1, j, true) : -1;
            int right = sb != sc ? crossing(i + 1, j, i + 1, j + 1, false) : -1;
            int topp = sd != sc ? crossing(i, j + 1, i + 1, j + 1, true) : -1;
            int left = sa != sd ? crossing(i, j, i, j + 1, false) : -1;
            if (count == 2) {
                std::array<int, 4> e{bottom, right, topp, left};
                int a = -1, b = -1;
                for (int x : e) {
                    if (x >= 0) {
                        (a < 0 ? a : b) = x;
                    }
                }
                link(a, b);
            } else {
                // Saddle: the centre sign decides which corners connect.
                cplx centre = 0.5 * (g.node(i, j) + g.node(i + 1, j + 1));
                bool sc_centre = tracer.tie(centre) >= 0;
                if (sc_centre == sa) {
                    link(bottom, right);
                    link(left, topp);
                } else {
                    link(bottom, left);
                    link(right, topp);
                }
                if (diagnostics && std::abs(tracer.tie(centre)) < 1e-12) {
                    std::ostringstream os;
                    os << "ambiguous saddle for pair " << fam.members[r].label << "/" << fam.members[s].label
                       << " near " << centre << "; refine the grid";
                    diagnostics->push_back(os.str());
                }
            }
        }
    }

    const std::size_t np = pts.size();
    std::vector<char> pass(np);
    for (std::size_t p = 0; p < np; ++p) {
        pass[p] = tracer.excess(pts[p]) <= 0;
        if (pass[p] && on_boundary[p] && touches) {
            *touches = true;
        }
    }

    std::vector<char> used(np, 0);
    auto walk = [&](int start) {
        std::vector<int> chain{start};
        used[start] = 1;
        int prev = -1, cur = start;
        for (;;) {
            int a = nbr[cur][0], b = nbr[cur][1];
            int next = (a >= 0 && a != prev) ? a : ((b >= 0 && b != prev) ? b : -1);
            if (next < 0) {
                break;
            }
            if (next == start) {
                chain.push_back(start);
                break;
            }
            if (used[next]) {
                break;
            }
            used[next] = 1;
            chain.push_back(next);
            prev = cur;
            cur = next;
        }
        return chain;
    };

    auto emit = [&](std::vector<cplx> poly, bool closed) {
        // Drop repeated points.
        std::vector<cplx> clean;
        for (cplx z : poly) {
            if (clean.empty() || std::abs(z - clean.back()) > 1e-15 * g.box.diameter()) {
                clean.push_back(z);
            }
        }
        if (clean.size() < 2) {
            return;
        }
        bool c = closed;
        for (auto& piece : split_monotone(tracer, clean, c)) {
            if (piece.size() >= 2) {
                arcs.push_back(finish_arc(tracer, std::move(piece), c));
            }
        }
    };

    auto process = [&](const std::vector<int>& chain) {
        bool closed = chain.size() > 2 && chain.front() == chain.back();
        std::vector<int> seq = chain;
        if (closed) {
            seq.pop_back();
            auto fail = std::find_if(seq.begin(), seq.end(), [&](int p) { return !pass[p]; });
            if (fail == seq.end()) {
                std::vector<cplx> poly;
                for (int p : seq) {
                    poly.push_back(pts[p]);
                }
                poly.push_back(pts[seq.front()]);
                emit(std::move(poly), true);
                return;
            }
            std::rotate(seq.begin(), fail, seq.end());
            seq.push_back(seq.front());
        }
        std::size_t j = 0;
        while (j < seq.size()) {
            if (!pass[seq[j]]) {
                ++j;
                continue;
            }
            std::size_t k = j;
            while (k + 1 < seq.size() && pass[seq[k + 1]]) {
                ++k;
            }
            std::vector<cplx> poly;
            if (j > 0) {
                poly.push_back(tracer.transition(pts[seq[j]], pts[seq[j - 1]]));
            }
            for (std::size_t q = j; q <= k; ++q) {
                poly.push_back(pts[seq[q]]);
            }
            if (k + 1 < seq.size()) {
                poly.push_back(tracer.transition(pts[seq[k]], pts[seq[k + 1]]));
            }
            emit(std::move(poly), false);
            j = k + 1;
        }
    };

    for (std::size_t p = 0; p < np; ++p) {
        bool end = nbr[p][0] < 0 || nbr[p][1] < 0;
        if (!used[p] && end) {
            process(walk(static_cast<int>(p)));
        }
    }
    for (std::size_t p = 0; p < np; ++p) {
        if (!used[p]) {
            process(walk(static_cast<int>(p)));
        }
    }
    return arcs;
}

} // namespace

std::vector<ArcSample> trace_pair(const AnalyticFamily& fam, std::size_t r, std::size_t s, const Box& box,
                                  const TraceConfig& cfg, std::vector<std::string>* diagnostics, bool* touches)
{
    if (r >= fam.members.size() || s >= fam.members.size() || r == s) {
        throw PreconditionError("trace_pair needs two distinct member indices");
    }
    if (cfg.grid < 4) {
        throw PreconditionError("grid resolution must be at least 4");
    }
    Grid g(box, cfg.grid);
    auto table = log_table(fam, box, cfg.grid, cfg.execution);
    auto top = top_three(table, fam.members.size(), g.nodes());
    return trace_pair_on_table(fam, r, s, g, table, top, cfg, diagnostics, touches);
}

LimitSet trace_limit_set(const AnalyticFamily& fam, const TraceConfig& cfg)
{
    if (cfg.grid < 4) {
        throw PreconditionError("grid resolution must be at least 4");
    }
    LimitSet out;
    out.grid = cfg.grid;
    out.box = cfg.box ? *cfg.box : initial_box(fam);
    out.isolated = isolated_limits(fam);
    for (const auto& d : degenerate_pairs(fam)) {
        out.diagnostics.push_back("members " + fam.members[d.r].label + " and " + fam.members[d.s].label +
                                  (d.everywhere_tied ? " tie everywhere (constant ratio of modulus 1)"
                                                     : " have a constant ratio and never tie"));
    }
    const std::size_t m = fam.members.size();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t s = r + 1; s < m; ++s) {
            pairs.emplace_back(r, s);
        }
    }
    for (;;) {
        Grid g(out.box, cfg.grid);
        auto table = log_table(fam, out.box, cfg.grid, cfg.execution);
        auto top = top_three(table, m, g.nodes());
        std::vector<std::vector<ArcSample>> per_pair(pairs.size());
        std::vector<std::vector<std::string>> diag(pairs.size());
        std::vector<char> touch(pairs.size(), 0);
        const long np = static_cast<long>(pairs.size());
        if (cfg.execution == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
            for (long p = 0; p < np; ++p) {
                bool t = false;
                per_pair[p] = trace_pair_on_table(fam, pairs[p].first, pairs[p].second, g, table, top, cfg, &diag[p], &t);
                touch[p] = t;
            }
        } else {
            for (long p = 0; p < np; ++p) {
                bool t = false;
                per_pair[p] = trace_pair_on_table(fam, pairs[p].first, pairs[p].second, g, table, top, cfg, &diag[p], &t);
                touch[p] = t;
            }
        }
        bool touches = std::any_of(touch.begin(), touch.end(), [](char c) { return c != 0; });
        if (touches && cfg.auto_expand && out.expansions < cfg.max_expansions) {
            double cx = 0.5 * (out.box.x0 + out.box.x1), cy = 0.5 * (out.box.y0 + out.box.y1);
            double hx = 0.5 * cfg.expansion * (out.box.x1 - out.box.x0);
            double hy = 0.5 * cfg.expansion * (out.box.y1 - out.box.y0);
            out.box = {cx - hx, cx + hx, cy - hy, cy + hy};
            ++out.expansions;
            std::ostringstream os;
            os << "limit set touched the box boundary; expanded to [" << out.box.x0 << ", " << out.box.x1 << "] x ["
               << out.box.y0 << ", " << out.box.y1 << "]";
            out.diagnostics.push_back(os.str());
            continue;
        }
        if (touches) {
            out.diagnostics.push_back("limit set still touches the box boundary after expansion");
        }
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            for (auto& a : per_pair[p]) {
                if (!a.closed) {
                    for (cplx z : {a.points.front(), a.points.back()}) {
                        // Arc ends strictly inside the box are tie points with a third member.
                        double margin = 2.0 * out.cell_size();
                        bool inner = z.real() > out.box.x0 + margin && z.real() < out.box.x1 - margin &&
                                     z.imag() > out.box.y0 + margin && z.imag() < out.box.y1 - margin;
                        if (inner) {
                            out.triple_points.push_back(z);
                        }
                    }
                }
                out.arcs.push_back(std::move(a));
            }
            out.diagnostics.insert(out.diagnostics.end(), diag[p].begin(), diag[p].end());
        }
        break;
    }
    return out;
}

// ---------------------------------------------------------------- isolated points

std::vector<IsolatedPoint> isolated_limits(const AnalyticFamily& fam, double ambiguous_margin)
{
    std::vector<IsolatedPoint> out;
    for (std::size_t r = 0; r < fam.members.size(); ++r) {
        const auto& a = fam.members[r].coefficient;
        if (a.degree() < 1) {
            continue;
        }
        AberthConfig cfg;
        cfg.precision = 128;
        RootSet roots = poly_roots(a.with_precision(128), cfg);
        for (const auto& root : roots.roots) {
            cplx z = root.value.to_std();
            double lr = fam.members[r].log_abs_f(z);
            if (!std::isfinite(lr) && lr < 0) {
                continue;
            }
            double other = -kInf;
            for (std::size_t t = 0; t < fam.members.size(); ++t) {
                if (t != r) {
                    other = std::max(other, fam.members[t].log_abs_f(z));
                }
            }
            if (!(lr > other)) {
                continue;
            }
            double margin = std::isfinite(lr) ? -std::expm1(other - lr) : 1.0;
            out.push_back({z, r, margin, margin < ambiguous_margin});
        }
    }
    return out;
}

// ---------------------------------------------------------------- exact curves

std::vector<CurveDescriptor> analytic_circles(const AnalyticFamily& fam)
{
    std::vector<CurveDescriptor> out;
    for (std::size_t r = 0; r < fam.members.size(); ++r) {
        for (std::size_t s = r + 1; s < fam.members.size(); ++s) {
            Ratio q = ratio_of(fam.members[r], fam.members[s]);
            CurveDescriptor d;
            d.r = r;
            d.s = s;
            if (q.factors.empty()) {
                d.description = "constant ratio";
            } else if (q.factors.size() == 1) {
                int k = q.factors[0].exponent;
                d.kind = CurveDescriptor::Kind::Circle;
                d.centre = q.factors[0].root;
                d.radius = std::exp(-q.log_scale / k);
                d.description = "circle";
            } else if (q.factors.size() == 2 && q.factors[0].exponent == -q.factors[1].exponent) {
                // |z - p| = lambda |z - q|, an Apollonius circle or a line.
                const auto& fp = q.factors[0].exponent > 0 ? q.factors[0] : q.factors[1];
                const auto& fq = q.factors[0].exponent > 0 ? q.factors[1] : q.factors[0];
                double lambda = std::exp(-q.log_scale / fp.exponent);
                cplx p = fp.root, c = fq.root;
                if (std::abs(lambda - 1.0) < 1e-12) {
                    d.kind = CurveDescriptor::Kind::Line;
                    d.line_point = 0.5 * (p + c);
                    d.line_direction = cplx(0, 1) * (p - c) / std::abs(p - c);
                    d.description = "line";
                } else {
                    double l2 = lambda * lambda;
                    d.kind = CurveDescriptor::Kind::Circle;
                    d.centre = (p - l2 * c) / (1.0 - l2);
                    d.radius = lambda * std::abs(p - c) / std::abs(1.0 - l2);
                    d.description = "circle";
                }
            } else {
                int pos = 0, neg = 0;
                for (const auto& f : q.factors) {
                    (f.exponent > 0 ? pos : neg) += std::abs(f.exponent);
                }
                int degree = 2 * std::max(pos, neg);
                d.description = degree == 4 ? "quartic" : "degree-" + std::to_string(degree) + " curve";
            }
            out.push_back(d);
        }
    }
    return out;
}

// ---------------------------------------------------------------- densities

DensityResult density_integral(const ArcSample& arc, double from_s, double to_s)
{
    DensityResult out;
    if (arc.points.size() < 2 || to_s <= from_s) {
        return out;
    }
    const double L = arc.length();
    const double tol = 1e-9 * std::max(L, 1e-300);
    if (!arc.closed && (from_s <= tol || to_s >= L - tol)) {
        out.endpoint_warning = true;
    }
    from_s = std::clamp(from_s, 0.0, L);
    to_s = std::clamp(to_s, 0.0, L);
    auto rho_at = [&](double s) {
        std::size_t j = locate(arc.arclength, s);
        double len = arc.arclength[j + 1] - arc.arclength[j];
        double t = len > 0 ? std::clamp((s - arc.arclength[j]) / len, 0.0, 1.0) : 0.0;
        return arc.rho[j] + t * (arc.rho[j + 1] - arc.rho[j]);
    };
    std::vector<double> s{from_s};
    for (double x : arc.arclength) {
        if (x > from_s && x < to_s) {
            s.push_back(x);
        }
    }
    s.push_back(to_s);
    for (std::size_t j = 0; j + 1 < s.size(); ++j) {
        out.value += 0.5 * (rho_at(s[j]) + rho_at(s[j + 1])) * (s[j + 1] - s[j]);
    }
    return out;
}

} // namespace chanspec
