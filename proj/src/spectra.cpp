#include "chanspec/spectra.hpp"

#include "chanspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace chanspec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double segment_distance(cplx z, cplx a, cplx b)
{
    cplx ab = b - a;
    double len2 = std::norm(ab);
    if (len2 == 0.0) {
        return std::abs(z - a);
    }
    double t = std::clamp(((z - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
    return std::abs(z - (a + t * ab));
}

double polyline_distance(cplx z, const std::vector<cplx>& p)
{
    if (p.size() == 1) {
        return std::abs(z - p[0]);
    }
    double best = kInf;
    for (std::size_t j = 0; j + 1 < p.size(); ++j) {
        best = std::min(best, segment_distance(z, p[j], p[j + 1]));
    }
    return best;
}

SpectrumResult solve(const EvalFactory& factory, int degree, long n, LimitSet limit, cplx centre, double radius,
                     const SpectrumConfig& cfg)
{
    if (degree < 1) {
        throw PreconditionError("nothing to solve: degree " + std::to_string(degree));
    }
    std::vector<Complex> seeds;
    if (cfg.seed_from_limit) {
        seeds = spectrum_seeds(limit, n, degree, centre, radius, cfg.aberth.precision);
    } else {
        seeds = ring_seeds(centre, radius, degree, cfg.aberth.precision);
    }
    SpectrumResult out;
    out.n = n;
    out.eigenvalues = aberth_roots(factory, degree, std::move(seeds), cfg.aberth);
    out.precision_used = out.eigenvalues.precision;
    out.limit = std::move(limit);
    classify(out, cfg);
    return out;
}

} // namespace

const char* to_string(Classification::Kind k)
{
    switch (k) {
    case Classification::Kind::Arc:
        return "arc";
    case Classification::Kind::Isolated:
        return "isolated";
    default:
        return "unclassified";
    }
}

double SpectrumResult::isolated_radius(std::size_t i, double factor) const
{
    double m = limit.isolated.at(i).margin;
    if (!(m > 0.0)) {
        return 0.0;
    }
    return factor * std::pow(1.0 - m, static_cast<double>(n)) / m;
}

std::vector<Complex> spectrum_seeds(const LimitSet& limit, long n, int degree, cplx ring_centre, double ring_radius,
                                    Precision bits)
{
    std::vector<Complex> seeds;
    for (const auto& p : limit.isolated) {
        if (static_cast<int>(seeds.size()) < degree && !p.ambiguous) {
            seeds.emplace_back(p.z, bits);
        }
    }
    double span = 0.0;
    for (const auto& arc : limit.arcs) {
        span += std::max(arc.theta_span(), 0.0);
    }
    const int budget = degree - static_cast<int>(seeds.size());
    if (span > 0.0 && budget > 0) {
        const double jitter = 1.0 / static_cast<double>(std::max(n, 1L));
        int placed = 0;
        double carried = 0.0;
        for (std::size_t a = 0; a < limit.arcs.size(); ++a) {
            const auto& arc = limit.arcs[a];
            if (arc.points.size() < 2 || arc.theta_span() <= 0.0) {
                continue;
            }
            carried += budget * arc.theta_span() / span;
            int m = std::min(static_cast<int>(std::lround(carried)) - placed, budget - placed);
            for (int k = 0; k < m; ++k) {
                double t = arc.theta.front() + (k + 0.5) * arc.theta_span() / m;
                double s = arc.s_at_theta(t);
                double ds = std::max(arc.length() * 1e-3, 1e-9);
                cplx tangent = arc.point_at(std::min(s + ds, arc.length())) - arc.point_at(std::max(s - ds, 0.0));
                cplx normal = std::abs(tangent) > 0 ? cplx(0, 1) * tangent / std::abs(tangent) : cplx(0.0);
                double sign = (k % 2 == 0) ? 1.0 : -1.0;
                seeds.emplace_back(arc.point_at(s) + sign * jitter * normal, bits);
            }
            placed += m;
        }
    }
    const int rest = degree - static_cast<int>(seeds.size());
    if (rest > 0) {
        auto ring = ring_seeds(ring_centre, ring_radius, rest, bits);
        seeds.insert(seeds.end(), ring.begin(), ring.end());
    }
    seeds.resize(static_cast<std::size_t>(degree), Complex(bits));
    return seeds;
}

void classify(SpectrumResult& r, const SpectrumConfig& cfg)
{
    r.arc_radius = cfg.arc_factor / static_cast<double>(std::max(r.n, 1L));
    r.classes.assign(r.eigenvalues.roots.size(), Classification{});
    for (std::size_t i = 0; i < r.eigenvalues.roots.size(); ++i) {
        cplx z = r.eigenvalues.roots[i].value.to_std();
        Classification c;
        std::size_t arc = 0;
        double d_arc = r.limit.distance(z, &arc);
        double d_iso = kInf;
        std::size_t iso = 0;
        for (std::size_t k = 0; k < r.limit.isolated.size(); ++k) {
            double d = std::abs(z - r.limit.isolated[k].z);
            if (d < d_iso) {
                d_iso = d;
                iso = k;
            }
        }
        if (d_iso < kInf && d_iso <= r.isolated_radius(iso, cfg.isolated_factor)) {
            c = {Classification::Kind::Isolated, iso, d_iso};
        } else if (d_arc <= r.arc_radius) {
            c = {Classification::Kind::Arc, arc, d_arc};
        } else {
            c = {Classification::Kind::Unclassified, 0, std::min(d_arc, d_iso)};
        }
        r.classes[i] = c;
    }
}

SpectrumResult eigenvalues(const GraphSpec& spec, long n, const SpectrumConfig& cfg, const LimitSet* limit)
{
    if (n < 1) {
        throw PreconditionError("n must be positive");
    }
    SubsetFamily sf = subset_family(spec);
    LimitSet traced = limit ? *limit : trace_limit_set(family_from_subsets(sf), cfg.trace);
    double radius = 0.0;
    for (const auto& c : spec.channels) {
        radius = std::max(radius, std::abs(c.alpha.to_std()) + std::abs(c.beta.to_std()));
    }
    const long nn = n;
    EvalFactory factory = [sf, nn](Precision bits) { return sf.at(nn, bits).factory()(bits); };
    return solve(factory, sf.degree(n), n, std::move(traced), 0.0, 1.0 + radius, cfg);
}

SpectrumResult family_roots(const AnalyticFamily& fam, long n, const SpectrumConfig& cfg, const LimitSet* limit)
{
    if (n < 1) {
        throw PreconditionError("n must be positive");
    }
    LimitSet traced = limit ? *limit : trace_limit_set(fam, cfg.trace);
    cplx centre = 0.0;
    double radius = 1.0;
    if (!fam.hints.empty()) {
        centre = 0.0;
        for (const auto& h : fam.hints) {
            centre += h.centre;
        }
        centre /= static_cast<double>(fam.hints.size());
        for (const auto& h : fam.hints) {
            radius = std::max(radius, std::abs(h.centre - centre) + h.radius);
        }
    }
    const long nn = n;
    EvalFactory factory = [fam, nn](Precision bits) { return fam.at(nn, bits).factory()(bits); };
    return solve(factory, fam.degree(n), n, std::move(traced), centre, radius, cfg);
}

std::vector<Sector> quadrants()
{
    const double q = std::numbers::pi / 2.0;
    return {{0.0, q}, {q, 2 * q}, {2 * q, 3 * q}, {3 * q, 4 * q}};
}

SectorStatistics sector_statistics(const std::vector<cplx>& roots, double delta, const std::vector<Sector>& sectors)
{
    if (roots.empty()) {
        throw PreconditionError("sector statistics of an empty spectrum");
    }
    SectorStatistics st;
    st.total = static_cast<int>(roots.size());
    std::vector<double> args;
    for (const auto& z : roots) {
        double m = std::abs(z);
        if (m > 1.0 - delta && m < 1.0 + delta) {
            double a = std::arg(z);
            args.push_back(a < 0 ? a + kTwoPi : a);
        }
    }
    st.annulus = static_cast<int>(args.size());
    for (const auto& s : sectors) {
        SectorCount c{s, 0, 0.0, 0.0};
        const bool full = s.hi - s.lo >= kTwoPi;
        for (double a : args) {
            double t = std::fmod(a - s.lo, kTwoPi);
            if (t < 0) {
                t += kTwoPi;
            }
            if (full || (t > 0.0 && t < s.hi - s.lo)) {
                ++c.count;
            }
        }
        c.fraction_of_annulus = st.annulus > 0 ? static_cast<double>(c.count) / st.annulus : 0.0;
        c.fraction_of_all = static_cast<double>(c.count) / st.total;
        st.sectors.push_back(c);
    }
    return st;
}

int tube_count(const std::vector<cplx>& roots, const ArcSample& arc, double from_s, double to_s, double epsilon)
{
    if (to_s <= from_s) {
        return 0;
    }
    std::vector<cplx> line = arc.sub_polyline(from_s, to_s);
    double step = 0.0;
    for (std::size_t j = 0; j + 1 < line.size(); ++j) {
        step = std::max(step, std::abs(line[j + 1] - line[j]));
    }
    if (epsilon < step) {
        throw PreconditionError("tube radius " + std::to_string(epsilon) + " is below the polyline resolution " +
                                std::to_string(step));
    }
    int count = 0;
    for (const auto& z : roots) {
        if (polyline_distance(z, line) <= epsilon) {
            ++count;
        }
    }
    return count;
}

// ---------------------------------------------------------------- eigenvectors

DenseMatrix<cplx> dense_double(const AssembledMatrix& m)
{
    DenseMatrix<cplx> a(m.dimension, cplx(0.0));
    for (const auto& [ij, v] : m.entries) {
        a(ij.first, ij.second) = v.to_std();
    }
    return a;
}

namespace {

template <class T>
struct Ops;

template <>
struct Ops<cplx> {
    static cplx make(cplx z, Precision) { return z; }
    static cplx to_std(const cplx& z) { return z; }
    static double abs(const cplx& z) { return std::abs(z); }
    static cplx conj(const cplx& z) { return std::conj(z); }
};

template <>
struct Ops<Complex> {
    static Complex make(cplx z, Precision bits) { return Complex(z, bits); }
    static cplx to_std(const Complex& z) { return z.to_std(); }
    static double abs(const Complex& z) { return mp::abs(z).to_double(); }
    static Complex conj(const Complex& z) { return mp::conj(z); }
};

template <class T>
struct Iterate {
    std::vector<T> v;
    T lambda;
    double residual;
    int iterations;
};

template <class T>
double norm2(const std::vector<T>& x)
{
    double s = 0.0;
    for (const auto& e : x) {
        double a = Ops<T>::abs(e);
        s += a * a;
    }
    return std::sqrt(s);
}

template <class T>
std::vector<T> matvec(const DenseMatrix<T>& a, const std::vector<T>& x)
{
    std::vector<T> y(x.size(), x[0] - x[0]);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (!detail::is_zero(a(i, j))) {
                y[i] += a(i, j) * x[j];
            }
        }
    }
    return y;
}

template <class T>
Iterate<T> inverse_iteration(const DenseMatrix<T>& a, cplx lambda, const EigenvectorConfig& cfg, Precision bits,
                             double scale)
{
    const std::size_t dim = a.size();
    cplx mu = lambda == cplx(0.0) ? cplx(cfg.jitter, 0.0) : lambda * (1.0 + cfg.jitter);
    DenseMatrix<T> shifted = a;
    const T muT = Ops<T>::make(mu, bits);
    for (std::size_t i = 0; i < dim; ++i) {
        shifted(i, i) -= muT;
    }
    LU<T> lu(std::move(shifted));
    if (lu.singular()) {
        throw NumericError("inverse iteration shift is exactly singular");
    }
    std::vector<T> v(dim, Ops<T>::make(cplx(1.0 / std::sqrt(static_cast<double>(dim)), 0.0), bits));
    Iterate<T> out{v, Ops<T>::make(lambda, bits), kInf, 0};
    for (int it = 1; it <= cfg.max_iterations; ++it) {
        v = lu.solve(v);
        double nv = norm2(v);
        if (!(nv > 0.0) || !std::isfinite(nv)) {
            throw NumericError("inverse iteration produced a non-finite vector");
        }
        T inv = Ops<T>::make(cplx(1.0 / nv, 0.0), bits);
        for (auto& e : v) {
            e = e * inv;
        }
        // Rayleigh quotient minimizes ||A v - l v|| over l.
        std::vector<T> av = matvec(a, v);
        T rq = Ops<T>::make(cplx(0.0), bits);
        for (std::size_t i = 0; i < dim; ++i) {
            rq += Ops<T>::conj(v[i]) * av[i];
        }
        double res = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            double e = Ops<T>::abs(av[i] - rq * v[i]);
            res += e * e;
        }
        res = std::sqrt(res);
        out = {v, rq, res, it};
        if (it >= cfg.iterations && res <= cfg.tolerance * (scale + std::abs(lambda))) {
            break;
        }
    }
    return out;
}

} // namespace

EigenvectorResult eigenvector(const GraphSpec& spec, long n, cplx lambda, const EigenvectorConfig& cfg)
{
    AssembledMatrix m = assemble(spec, n);
    if (m.dimension > cfg.dimension_cap) {
        throw PreconditionError("dimension " + std::to_string(m.dimension) + " exceeds the dense cap " +
                                std::to_string(cfg.dimension_cap));
    }
    {
        SubsetFamily sf = subset_family(spec);
        FactoredSum f = sf.at(n, 128);
        Evaluation e = f.evaluate(Complex(lambda, 128));
        double backward = mp::abs(e.value).to_double() / std::max(e.magnitude.to_double(), 1e-300);
        if (!(backward <= cfg.eigen_tolerance)) {
            throw PreconditionError("lambda is not an eigenvalue: backward residual " + std::to_string(backward));
        }
    }
    DenseMatrix<cplx> a = dense_double(m);
    double scale = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a.size(); ++j) {
            scale += std::norm(a(i, j));
        }
    }
    scale = std::sqrt(scale);
    EigenvectorResult out;
    auto accept = [&](double res) { return res <= cfg.tolerance * (scale + std::abs(lambda)); };
    try {
        auto it = inverse_iteration(a, lambda, cfg, 53, scale);
        out = {it.lambda, it.v, it.residual, 53, it.iterations};
    } catch (const NumericError&) {
        out.residual = kInf;
    }
    for (Precision bits : {Precision(128), Precision(256)}) {
        if (accept(out.residual)) {
            break;
        }
        DenseMatrix<Complex> am = dense(m, bits);
        auto it = inverse_iteration(am, lambda, cfg, bits, scale);
        std::vector<cplx> v;
        for (const auto& e : it.v) {
            v.push_back(e.to_std());
        }
        out = {it.lambda.to_std(), std::move(v), it.residual, bits, it.iterations};
    }
    if (!accept(out.residual)) {
        throw NumericError("inverse iteration stagnated: residual " + std::to_string(out.residual) +
                           " after precision escalation");
    }
    return out;
}

// ---------------------------------------------------------------- localization

const char* to_string(Decay d)
{
    switch (d) {
    case Decay::Forward:
        return "decaying-forward";
    case Decay::Backward:
        return "decaying-backward";
    case Decay::Flat:
        return "flat";
    default:
        return "zero";
    }
}

LocalizationReport localization_report(const GraphSpec& spec, long n, cplx lambda, const std::vector<cplx>& v,
                                       const LocalizationConfig& cfg)
{
    AssembledMatrix m = assemble(spec, n);
    if (v.size() != m.dimension) {
        throw PreconditionError("vector length does not match the assembled dimension");
    }
    LocalizationReport rep;
    rep.lambda = lambda;
    rep.n = n;
    rep.norm = norm2(v);
    const double unit = rep.norm > 0 ? 1.0 / rep.norm : 0.0;
    const double delta = cfg.delta_factor / static_cast<double>(n);

    for (std::size_t r = 0; r < spec.h(); ++r) {
        const auto& ch = spec.channels[r];
        ChannelLocalization c;
        c.channel = r;
        c.alpha = ch.alpha.to_std();
        c.beta = ch.beta.to_std();
        c.circle_distance = std::abs(std::abs(lambda - c.alpha) - std::abs(c.beta));
        c.ratio = std::abs((lambda - c.alpha) / c.beta);
        c.c = std::min(c.ratio, 1.0 / c.ratio);
        const std::size_t len = m.channel_length[r];
        double peak = 0.0;
        for (std::size_t i = 0; i < len; ++i) {
            double x = std::abs(v[m.channel_row(r, i)]) * unit;
            c.profile.push_back(x);
            peak = std::max(peak, x);
        }
        for (std::size_t i = 0; i + 1 < len; ++i) {
            cplx lhs = c.beta * v[m.channel_row(r, i + 1)] - (lambda - c.alpha) * v[m.channel_row(r, i)];
            c.recurrence_residual = std::max(c.recurrence_residual, std::abs(lhs) * unit);
        }
        const bool near = c.circle_distance < delta;
        if (peak <= 1e-12) {
            c.direction = Decay::Zero;
        } else if (near) {
            c.direction = Decay::Flat;
        } else {
            c.direction = c.ratio < 1.0 ? Decay::Forward : Decay::Backward;
        }
        if (c.direction == Decay::Forward || c.direction == Decay::Backward) {
            bool ok = true;
            const double v0 = c.direction == Decay::Forward ? c.profile.front() : c.profile.back();
            for (std::size_t k = 0; k < len; ++k) {
                double x = c.direction == Decay::Forward ? c.profile[k] : c.profile[len - 1 - k];
                double bound = std::pow(c.c, static_cast<double>(k)) * v0;
                ok = ok && x <= bound * (1.0 + 1e-6) + 1e-12;
            }
            c.geometric_certificate = ok;
        }
        if (c.direction == Decay::Flat) {
            c.a = static_cast<double>(n) * c.circle_distance;
            c.d = std::exp(2.0 * c.a * static_cast<double>(ch.base_length)) * (1.0 + cfg.slack);
            double lo = kInf, hi = 0.0;
            for (double x : c.profile) {
                lo = std::min(lo, x);
                hi = std::max(hi, x);
            }
            c.max_ratio = lo > 0 ? hi / lo : kInf;
            c.ratio_certificate = c.max_ratio <= c.d;
        }
        const bool certified = c.direction == Decay::Zero || c.geometric_certificate || c.ratio_certificate;
        rep.dichotomy_holds = rep.dichotomy_holds && certified;
        rep.c = std::max(rep.c, c.c);
        rep.channels.push_back(std::move(c));
    }

    for (std::size_t j = 0; j < m.junction_count; ++j) {
        rep.per_junction_mass.push_back(std::norm(v[m.junction_row(j)] * unit));
    }

    long max_len = 0;
    for (auto l : m.channel_length) {
        max_len = std::max(max_len, static_cast<long>(l));
    }
    const double h = static_cast<double>(spec.h());
    double prev = kInf;
    for (long N = 1; 2 * N <= max_len; N *= 2) {
        JunctionMass jm;
        jm.N = N;
        for (std::size_t r = 0; r < spec.h(); ++r) {
            const long len = static_cast<long>(m.channel_length[r]);
            // 1-based positions N .. len - N
            for (long i = N; i <= len - N; ++i) {
                jm.mass += std::norm(v[m.channel_row(r, static_cast<std::size_t>(i - 1))] * unit);
            }
        }
        jm.bound = rep.c < 1.0 ? h * std::pow(rep.c, 2.0 * static_cast<double>(N - 1)) / (1.0 - rep.c * rep.c) : kInf;
        rep.mass_bound_holds = rep.mass_bound_holds && jm.mass <= jm.bound * (1.0 + 1e-9);
        rep.mass_non_increasing = rep.mass_non_increasing && jm.mass <= prev * (1.0 + 1e-12) + 1e-300;
        prev = jm.mass;
        rep.junction_mass.push_back(jm);
    }
    return rep;
}

// ---------------------------------------------------------------- resolvent

std::optional<double> resolvent_norm(const DenseMatrix<cplx>& a, cplx z, int probes)
{
    const std::size_t dim = a.size();
    DenseMatrix<cplx> b(dim, cplx(0.0));
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            b(i, j) = -a(i, j);
        }
        b(i, i) += z;
    }
    LU<cplx> lu(std::move(b));
    if (lu.singular()) {
        return std::nullopt;
    }
    std::vector<cplx> x(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        // fixed, non-symmetric start so the result is deterministic
        x[i] = cplx(1.0 + 0.1 * static_cast<double>(i % 7), 0.05 * static_cast<double>(i % 3));
    }
    double sigma = 0.0;
    for (int k = 0; k < probes; ++k) {
        double nx = norm2(x);
        for (auto& e : x) {
            e /= nx;
        }
        std::vector<cplx> y = lu.solve(x);
        sigma = norm2(y);
        x = lu.solve_adjoint(y);
        if (!std::isfinite(sigma) || !std::isfinite(norm2(x))) {
            return std::nullopt;
        }
    }
    return sigma;
}

ResolventGrid resolvent_grid(const GraphSpec& spec, long n, const Box& box, int nx, int ny, int probes,
                             Execution exec, std::size_t cap)
{
    AssembledMatrix m = assemble(spec, n);
    if (m.dimension > cap) {
        throw PreconditionError("dimension " + std::to_string(m.dimension) + " exceeds the resolvent cap " +
                                std::to_string(cap));
    }
    if (nx < 2 || ny < 2) {
        throw PreconditionError("resolvent grid needs at least 2 x 2 points");
    }
    DenseMatrix<cplx> a = dense_double(m);
    ResolventGrid g;
    g.nx = nx;
    g.ny = ny;
    g.box = box;
    g.points.resize(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
    const long total = static_cast<long>(g.points.size());
    auto body = [&](long k) {
        int ix = static_cast<int>(k % nx), iy = static_cast<int>(k / nx);
        cplx z(box.x0 + (box.x1 - box.x0) * ix / (nx - 1), box.y0 + (box.y1 - box.y0) * iy / (ny - 1));
        ResolventPoint p{z, 0.0, false};
        auto r = resolvent_norm(a, z, probes);
        if (r && *r > 0.0 && std::isfinite(*r)) {
            p.log10_norm = std::log10(*r);
        } else {
            p.skipped = true;
        }
        g.points[static_cast<std::size_t>(k)] = p;
    };
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (long k = 0; k < total; ++k) {
            body(k);
        }
    } else {
        for (long k = 0; k < total; ++k) {
            body(k);
        }
    }
    return g;
}

} // namespace chanspec
