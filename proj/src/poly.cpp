#include "chanspec/poly.hpp"

#include "chanspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

namespace chanspec {

namespace {

Complex zero(Precision bits) { return Complex(bits); }
Complex one(Precision bits) { return Complex(1.0, 0.0, bits); }

Precision common_precision(const std::vector<Complex>& c)
{
    Precision p = mp::kDefaultPrecision;
    if (!c.empty()) {
        p = c.front().precision();
        for (const auto& x : c) {
            p = std::max(p, x.precision());
        }
    }
    return p;
}

// Union-find over root indices for multiplicity clustering.
struct Clusters {
    std::vector<std::size_t> parent;
    explicit Clusters(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t i)
    {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }
    void join(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

} // namespace

// ---------------------------------------------------------------- ComplexPoly

ComplexPoly::ComplexPoly(Precision bits) : prec_(bits) {}

ComplexPoly::ComplexPoly(std::vector<Complex> coeffs) : ComplexPoly(std::move(coeffs), 0) {}

ComplexPoly::ComplexPoly(std::vector<Complex> coeffs, Precision bits) : c_(std::move(coeffs))
{
    prec_ = bits > 0 ? bits : common_precision(c_);
    for (auto& x : c_) {
        if (x.precision() != prec_) {
            x.set_precision(prec_);
        }
        mp::require_finite(x, "polynomial coefficient");
    }
    trim();
}

ComplexPoly ComplexPoly::constant(const Complex& c)
{
    return ComplexPoly(std::vector<Complex>{c}, c.precision());
}

ComplexPoly ComplexPoly::monomial(const Complex& c, int k)
{
    std::vector<Complex> v(static_cast<std::size_t>(k) + 1, zero(c.precision()));
    v.back() = c;
    return ComplexPoly(std::move(v), c.precision());
}

ComplexPoly ComplexPoly::linear(const Complex& root)
{
    Precision p = root.precision();
    return ComplexPoly(std::vector<Complex>{-root, one(p)}, p);
}

ComplexPoly ComplexPoly::from_roots(const std::vector<Complex>& roots, Precision bits)
{
    ComplexPoly p = constant(one(bits));
    for (const auto& r : roots) {
        p = p * linear(Complex(r, bits));
    }
    return p;
}

ComplexPoly ComplexPoly::from_std(const std::vector<std::complex<double>>& coeffs, Precision bits)
{
    std::vector<Complex> v;
    v.reserve(coeffs.size());
    for (auto c : coeffs) {
        v.emplace_back(c, bits);
    }
    return ComplexPoly(std::move(v), bits);
}

void ComplexPoly::trim()
{
    while (!c_.empty() && c_.back().is_zero()) {
        c_.pop_back();
    }
}

void ComplexPoly::require_same(const ComplexPoly& b) const
{
    if (prec_ != b.prec_) {
        std::ostringstream os;
        os << "polynomial precision mismatch: " << prec_ << " vs " << b.prec_ << " bits";
        throw PreconditionError(os.str());
    }
}

int ComplexPoly::degree() const
{
    return c_.empty() ? kZeroDegree : static_cast<int>(c_.size()) - 1;
}

Complex ComplexPoly::coefficient(int k) const
{
    if (k < 0 || k >= static_cast<int>(c_.size())) {
        return zero(prec_);
    }
    return c_[static_cast<std::size_t>(k)];
}

const Complex& ComplexPoly::leading() const
{
    if (c_.empty()) {
        throw PreconditionError("leading coefficient of the zero polynomial");
    }
    return c_.back();
}

ComplexPoly ComplexPoly::with_precision(Precision bits) const
{
    std::vector<Complex> v;
    v.reserve(c_.size());
    for (const auto& x : c_) {
        v.emplace_back(x, bits);
    }
    return ComplexPoly(std::move(v), bits);
}

ComplexPoly ComplexPoly::operator+(const ComplexPoly& b) const
{
    require_same(b);
    std::vector<Complex> v(std::max(c_.size(), b.c_.size()), zero(prec_));
    for (std::size_t k = 0; k < c_.size(); ++k) {
        v[k] += c_[k];
    }
    for (std::size_t k = 0; k < b.c_.size(); ++k) {
        v[k] += b.c_[k];
    }
    return ComplexPoly(std::move(v), prec_);
}

ComplexPoly ComplexPoly::operator-(const ComplexPoly& b) const
{
    return *this + (-b);
}

ComplexPoly ComplexPoly::operator-() const
{
    std::vector<Complex> v;
    v.reserve(c_.size());
    for (const auto& x : c_) {
        v.push_back(-x);
    }
    return ComplexPoly(std::move(v), prec_);
}

ComplexPoly ComplexPoly::operator*(const ComplexPoly& b) const
{
    require_same(b);
    if (c_.empty() || b.c_.empty()) {
        return ComplexPoly(prec_);
    }
    std::vector<Complex> v(c_.size() + b.c_.size() - 1, zero(prec_));
    for (std::size_t i = 0; i < c_.size(); ++i) {
        for (std::size_t j = 0; j < b.c_.size(); ++j) {
            v[i + j] += c_[i] * b.c_[j];
        }
    }
    return ComplexPoly(std::move(v), prec_);
}

ComplexPoly ComplexPoly::scale(const Complex& s) const
{
    Complex ss(s, prec_);
    std::vector<Complex> v;
    v.reserve(c_.size());
    for (const auto& x : c_) {
        v.push_back(x * ss);
    }
    return ComplexPoly(std::move(v), prec_);
}

ComplexPoly ComplexPoly::derivative() const
{
    if (c_.size() <= 1) {
        return ComplexPoly(prec_);
    }
    std::vector<Complex> v;
    v.reserve(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) {
        v.push_back(c_[k] * Real(static_cast<long>(k), prec_));
    }
    return ComplexPoly(std::move(v), prec_);
}

ComplexPoly ComplexPoly::compose_linear(const Complex& a, const Complex& b) const
{
    // Horner in the polynomial ring: p(q) with q = a z + b.
    ComplexPoly q(std::vector<Complex>{Complex(b, prec_), Complex(a, prec_)}, prec_);
    ComplexPoly acc(prec_);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        acc = acc * q + constant(*it);
    }
    return acc;
}

ComplexPoly ComplexPoly::pow(unsigned k) const
{
    ComplexPoly result = constant(one(prec_));
    ComplexPoly base = *this;
    while (k != 0) {
        if (k & 1U) {
            result = result * base;
        }
        k >>= 1;
        if (k != 0) {
            base = base * base;
        }
    }
    return result;
}

Complex ComplexPoly::operator()(const Complex& z) const
{
    Complex zz(z, prec_);
    Complex acc = zero(prec_);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        acc = acc * zz + *it;
    }
    return acc;
}

Evaluation ComplexPoly::evaluate(const Complex& z) const
{
    Complex zz(z, prec_);
    Complex p = zero(prec_);
    Complex d = zero(prec_);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        d = d * zz + p;
        p = p * zz + *it;
    }
    return {std::move(p), std::move(d), abs_evaluate(mp::abs(zz))};
}

Real ComplexPoly::abs_evaluate(const Real& r) const
{
    Real rr(r, prec_);
    Real acc(prec_);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        acc = acc * rr + mp::abs(*it);
    }
    return acc;
}

std::vector<std::complex<double>> ComplexPoly::to_std() const
{
    std::vector<std::complex<double>> v;
    v.reserve(c_.size());
    for (const auto& x : c_) {
        v.push_back(x.to_std());
    }
    return v;
}

EvalFactory ComplexPoly::factory() const
{
    auto self = std::make_shared<const ComplexPoly>(*this);
    return [self](Precision bits) -> EvalFn {
        auto p = std::make_shared<const ComplexPoly>(self->with_precision(bits));
        return [p](const Complex& z) { return p->evaluate(z); };
    };
}

// ---------------------------------------------------------------- FactoredSum

FactoredSum::FactoredSum(std::vector<LinearFactor> factors, std::vector<Term> terms)
    : factors_(std::move(factors)), terms_(std::move(terms))
{
    if (terms_.empty()) {
        throw PreconditionError("factored sum without terms");
    }
    prec_ = terms_.front().coefficient.precision();
    for (const auto& f : factors_) {
        if (f.exponent < 0) {
            throw PreconditionError("factored sum exponents must be non-negative");
        }
        if (f.scale.is_zero()) {
            throw PreconditionError("factored sum factor with zero scale");
        }
    }
    degree_ = ComplexPoly::kZeroDegree;
    for (const auto& t : terms_) {
        if (t.coefficient.is_zero()) {
            continue;
        }
        long d = t.coefficient.degree();
        for (std::size_t i : t.factors) {
            if (i >= factors_.size()) {
                throw PreconditionError("factored sum term references a missing factor");
            }
            d += factors_[i].exponent;
        }
        degree_ = std::max<long>(degree_, d);
    }
    if (degree_ == ComplexPoly::kZeroDegree) {
        throw PreconditionError("factored sum is identically zero");
    }

    // Leading coefficient of the sum; cancellation would silently drop roots.
    Complex lead = zero(prec_);
    Real scale(prec_);
    for (const auto& t : terms_) {
        if (t.coefficient.is_zero()) {
            continue;
        }
        long d = t.coefficient.degree();
        Complex c = t.coefficient.leading();
        for (std::size_t i : t.factors) {
            d += factors_[i].exponent;
            c = c * mp::pow(Complex(factors_[i].scale, prec_), factors_[i].exponent);
        }
        if (d == degree_) {
            lead += c;
            scale += mp::abs(c);
        }
    }
    if (mp::abs(lead) <= scale * std::ldexp(1.0, -static_cast<int>(prec_) / 2)) {
        throw NumericError("leading terms of the factored sum cancel");
    }
}

Evaluation FactoredSum::evaluate(const Complex& z) const
{
    Complex zz(z, prec_);
    std::vector<Complex> u(factors_.size(), zero(prec_));
    std::vector<Complex> du(factors_.size(), zero(prec_));
    std::vector<Real> au(factors_.size(), Real(prec_));
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        const auto& f = factors_[i];
        if (f.exponent == 0) {
            u[i] = one(prec_);
            au[i] = Real(1L, prec_);
            continue;
        }
        Complex w = (zz - f.root) * f.scale;
        Complex p = mp::pow(w, f.exponent - 1);
        du[i] = p * f.scale * Real(f.exponent, prec_);
        u[i] = p * w;
        au[i] = mp::abs(u[i]);
    }

    Complex value = zero(prec_);
    Complex deriv = zero(prec_);
    Real magnitude(prec_);
    Real r = mp::abs(zz);
    for (const auto& t : terms_) {
        if (t.coefficient.is_zero()) {
            continue;
        }
        Evaluation c = t.coefficient.evaluate(zz);
        Complex v = std::move(c.value);
        Complex d = std::move(c.derivative);
        Real m = t.coefficient.abs_evaluate(r);
        for (std::size_t i : t.factors) {
            d = d * u[i] + v * du[i];
            v = v * u[i];
            m *= au[i];
        }
        value += v;
        deriv += d;
        magnitude += m;
    }
    mp::require_finite(value, "factored sum evaluation");
    return {std::move(value), std::move(deriv), std::move(magnitude)};
}

FactoredSum FactoredSum::with_precision(Precision bits) const
{
    FactoredSum out;
    out.factors_.reserve(factors_.size());
    for (const auto& f : factors_) {
        out.factors_.push_back({Complex(f.root, bits), Complex(f.scale, bits), f.exponent});
    }
    for (const auto& t : terms_) {
        out.terms_.push_back({t.coefficient.with_precision(bits), t.factors});
    }
    out.degree_ = degree_;
    out.prec_ = bits;
    return out;
}

EvalFactory FactoredSum::factory() const
{
    auto self = std::make_shared<const FactoredSum>(*this);
    return [self](Precision bits) -> EvalFn {
        auto f = std::make_shared<const FactoredSum>(self->with_precision(bits));
        return [f](const Complex& z) { return f->evaluate(z); };
    };
}

ComplexPoly FactoredSum::expand() const
{
    std::vector<ComplexPoly> powers;
    powers.reserve(factors_.size());
    for (const auto& f : factors_) {
        ComplexPoly lin(std::vector<Complex>{-(f.root * f.scale), f.scale}, prec_);
        powers.push_back(lin.pow(static_cast<unsigned>(f.exponent)));
    }
    ComplexPoly sum(prec_);
    for (const auto& t : terms_) {
        ComplexPoly p = t.coefficient;
        for (std::size_t i : t.factors) {
            p = p * powers[i];
        }
        sum = sum + p;
    }
    return sum;
}

// ---------------------------------------------------------------- roots

std::vector<std::complex<double>> RootSet::values() const
{
    std::vector<std::complex<double>> v;
    v.reserve(roots.size());
    for (const auto& r : roots) {
        v.push_back(r.value.to_std());
    }
    return v;
}

std::vector<std::complex<double>> RootSet::expanded() const
{
    std::vector<std::complex<double>> v;
    v.reserve(static_cast<std::size_t>(total_count));
    for (const auto& r : roots) {
        for (int k = 0; k < r.multiplicity; ++k) {
            v.push_back(r.value.to_std());
        }
    }
    return v;
}

double default_tolerance(Precision bits)
{
    return std::ldexp(1.0, -static_cast<int>(bits) / 2);
}

namespace {

struct Correction {
    Complex z;
    double residual;
    bool done;
};

// Aberth correction for root i against the previous round's approximations.
Correction correct_one(const EvalFn& f, const std::vector<Complex>& z, std::size_t i,
                       Precision bits)
{
    const double unit = std::ldexp(1.0, -static_cast<int>(bits));
    const double stop_residual = 4.0 * static_cast<double>(std::max<std::size_t>(z.size(), 4)) * unit;
    Evaluation ev = f(z[i]);
    double residual = ev.magnitude.is_zero() ? 0.0 : (mp::abs(ev.value) / ev.magnitude).to_double();
    if (ev.value.is_zero() || residual <= stop_residual) {
        return {z[i], residual, true};
    }
    Complex s(bits);
    for (std::size_t j = 0; j < z.size(); ++j) {
        if (j == i) {
            continue;
        }
        Complex diff = z[i] - z[j];
        if (diff.is_zero()) {
            continue;
        }
        s += mp::reciprocal(diff);
    }
    Complex w(bits);
    if (ev.derivative.is_zero()) {
        // Stationary point: step off by a small multiple of the local scale.
        Real step = Real(1e-3, bits) * (mp::abs(z[i]) + 1.0);
        w = Complex(step, step);
    } else {
        Complex newton = ev.value / ev.derivative;
        Complex den = Complex(1.0, 0.0, bits) - newton * s;
        w = den.is_zero() ? newton : newton / den;
    }
    Complex next = z[i] - w;
    mp::require_finite(next, "Aberth update");
    bool small = mp::abs(w) <= (mp::abs(z[i]) + 1.0) * std::ldexp(1.0, -static_cast<int>(bits) + 6);
    return {std::move(next), residual, small};
}

} // namespace

int aberth_round(const EvalFn& f, AberthState& state, Precision bits, Execution exec)
{
    const std::size_t n = state.z.size();
    std::vector<Complex> next = state.z;
    std::vector<char> done = state.done;
    std::vector<double> residual = state.residual;
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (std::size_t i = 0; i < n; ++i) {
            if (state.done[i]) {
                continue;
            }
            Correction c = correct_one(f, state.z, i, bits);
            next[i] = std::move(c.z);
            residual[i] = c.residual;
            done[i] = c.done;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            if (state.done[i]) {
                continue;
            }
            Correction c = correct_one(f, state.z, i, bits);
            next[i] = std::move(c.z);
            residual[i] = c.residual;
            done[i] = c.done;
        }
    }
    state.z = std::move(next);
    state.done = std::move(done);
    state.residual = std::move(residual);
    return static_cast<int>(std::count(state.done.begin(), state.done.end(), 0));
}

namespace {

// Nudges exactly coincident seeds apart so the Aberth sum stays finite.
void separate_seeds(std::vector<Complex>& z, Precision bits)
{
    for (std::size_t i = 0; i < z.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if ((z[i] - z[j]).is_zero()) {
                double angle = 2.399963229728653 * static_cast<double>(i);
                double r = 1e-6 * (1.0 + std::abs(z[i].to_std()));
                z[i] += Complex(r * std::cos(angle), r * std::sin(angle), bits);
            }
        }
    }
}

// |F / F'| at z; infinite when F' vanishes.
double newton_step(const Evaluation& ev)
{
    if (ev.value.is_zero()) {
        return 0.0;
    }
    if (ev.derivative.is_zero()) {
        return std::numeric_limits<double>::infinity();
    }
    return (mp::abs(ev.value) / mp::abs(ev.derivative)).to_double();
}

// Roots join when within `radius` relative, or when their inclusion disks
// (radius degree * |F/F'|) overlap; the latter catches multiple roots whose
// approximations spread by eps^(1/m).
RootSet cluster(const std::vector<Complex>& z, const std::vector<double>& residual,
                const std::vector<double>& step, double radius, Precision bits)
{
    const std::size_t n = z.size();
    const double degree = static_cast<double>(n);
    std::vector<std::complex<double>> zd(n);
    for (std::size_t i = 0; i < n; ++i) {
        zd[i] = z[i].to_std();
    }
    Clusters uf(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double tol = radius * (1.0 + std::max(std::abs(zd[i]), std::abs(zd[j])));
            tol = std::max(tol, degree * std::min(step[i] + step[j], 1e300));
            if (std::abs(zd[i] - zd[j]) < tol) {
                uf.join(i, j);
            }
        }
    }
    RootSet out;
    out.precision = bits;
    std::vector<std::vector<std::size_t>> groups(n);
    for (std::size_t i = 0; i < n; ++i) {
        groups[uf.find(i)].push_back(i);
    }
    for (const auto& g : groups) {
        if (g.empty()) {
            continue;
        }
        Complex mean(bits);
        double res = 0.0;
        for (std::size_t i : g) {
            mean += z[i];
            res = std::max(res, residual[i]);
        }
        mean = mean / Real(static_cast<long>(g.size()), bits);
        out.roots.push_back({std::move(mean), static_cast<int>(g.size()), res});
        out.max_residual = std::max(out.max_residual, res);
        if (g.size() > 1) {
            std::ostringstream os;
            os << "cluster of " << g.size() << " roots merged near " << out.roots.back().value.to_std();
            out.notes.push_back(os.str());
        }
    }
    out.total_count = static_cast<int>(n);
    return out;
}

// A small backward residual at the working precision says nothing about
// coefficients rounded away; one Newton step at a higher precision estimates the
// forward error instead.
bool forward_accurate(const EvalFactory& make_eval, const std::vector<Complex>& z, Precision higher, double radius)
{
    EvalFn g = make_eval(higher);
    for (const auto& zi : z) {
        Complex w(zi, higher);
        double limit = 0.25 * radius * (1.0 + std::abs(zi.to_std()));
        if (newton_step(g(w)) > limit) {
            return false;
        }
    }
    return true;
}

} // namespace

RootSet aberth_roots(const EvalFactory& make_eval, int degree, std::vector<Complex> seeds,
                     const AberthConfig& cfg)
{
    if (degree < 1) {
        throw PreconditionError("Aberth iteration needs degree >= 1");
    }
    if (static_cast<int>(seeds.size()) != degree) {
        std::ostringstream os;
        os << "Aberth iteration needs " << degree << " seeds, got " << seeds.size();
        throw PreconditionError(os.str());
    }
    std::vector<Precision> ladder;
    for (Precision p : mp::kPrecisionLadder) {
        if (p >= cfg.precision && p <= cfg.max_precision) {
            ladder.push_back(p);
        }
    }
    if (ladder.empty() || ladder.front() != cfg.precision) {
        ladder.insert(ladder.begin(), cfg.precision);
    }
    if (!cfg.escalate) {
        ladder.resize(1);
    }

    std::vector<std::string> notes;
    double worst = 0.0;
    int iterations = 0;
    for (const Precision& bits : ladder) {
        EvalFn f = make_eval(bits);
        AberthState state;
        state.z.reserve(seeds.size());
        for (const auto& s : seeds) {
            state.z.emplace_back(s, bits);
        }
        separate_seeds(state.z, bits);
        state.residual.assign(seeds.size(), 1.0);
        state.done.assign(seeds.size(), 0);
        int it = 0;
        for (; it < cfg.max_iterations; ++it) {
            if (aberth_round(f, state, bits, cfg.execution) == 0) {
                break;
            }
        }
        iterations += it;
        // Final residuals at the accepted points.
        std::vector<double> residual(state.z.size()), step(state.z.size());
        for (std::size_t i = 0; i < state.z.size(); ++i) {
            Evaluation ev = f(state.z[i]);
            residual[i] = ev.magnitude.is_zero() ? 0.0 : (mp::abs(ev.value) / ev.magnitude).to_double();
            step[i] = newton_step(ev);
        }
        worst = *std::max_element(residual.begin(), residual.end());
        double tol = cfg.tolerance > 0.0 ? cfg.tolerance : default_tolerance(bits);
        const bool last = bits == ladder.back();
        if (worst <= tol && !last && !forward_accurate(make_eval, state.z, ladder[&bits - ladder.data() + 1],
                                                        cfg.cluster_radius)) {
            std::ostringstream os;
            os << "roots at " << bits << " bits move under higher-precision evaluation; escalating";
            notes.push_back(os.str());
            seeds = std::move(state.z);
            continue;
        }
        if (worst <= tol) {
            RootSet out = cluster(state.z, residual, step, cfg.cluster_radius, bits);
            out.iterations = iterations;
            notes.insert(notes.end(), out.notes.begin(), out.notes.end());
            out.notes = std::move(notes);
            return out;
        }
        std::ostringstream os;
        os << "no convergence at " << bits << " bits (worst residual " << worst << ")";
        notes.push_back(os.str());
        seeds = std::move(state.z);
    }
    std::ostringstream os;
    os << "Aberth iteration failed to converge up to " << ladder.back()
       << " bits; worst backward residual " << worst << "; try a higher --precision";
    throw NumericError(os.str());
}

std::vector<Complex> ring_seeds(std::complex<double> centre, double radius, int count,
                                Precision bits)
{
    std::vector<Complex> v;
    v.reserve(static_cast<std::size_t>(std::max(count, 0)));
    const double tau = 2.0 * std::numbers::pi;
    for (int k = 0; k < count; ++k) {
        double a = tau * k / count + 0.4;
        v.emplace_back(centre + std::polar(radius, a), bits);
    }
    return v;
}

RootSet poly_roots(const ComplexPoly& p, const AberthConfig& cfg)
{
    if (p.is_zero()) {
        throw PreconditionError("roots of the zero polynomial");
    }
    const int d = p.degree();
    if (d == 0) {
        RootSet out;
        out.precision = cfg.precision;
        return out;
    }
    // Exact zero roots are split off; the relative residual is meaningless for a monomial.
    int zeros = 0;
    while (p.coefficient(zeros).is_zero()) {
        ++zeros;
    }
    if (zeros > 0) {
        std::vector<Complex> rest(p.coefficients().begin() + zeros, p.coefficients().end());
        RootSet out = d > zeros ? poly_roots(ComplexPoly(std::move(rest), p.precision()), cfg) : RootSet{};
        if (d == zeros) {
            out.precision = cfg.precision;
        }
        out.roots.insert(out.roots.begin(), Root{Complex(cfg.precision), zeros, 0.0});
        out.total_count += zeros;
        if (zeros > 1) {
            out.notes.push_back("exact zero root of multiplicity " + std::to_string(zeros));
        }
        return out;
    }
    std::vector<std::complex<double>> c = p.to_std();
    std::complex<double> lead = c.back();
    std::complex<double> centre = -c[static_cast<std::size_t>(d - 1)] / (static_cast<double>(d) * lead);
    double radius = 0.0;
    for (int k = 0; k < d; ++k) {
        double m = std::abs(c[static_cast<std::size_t>(k)] / lead);
        if (m > 0.0) {
            radius = std::max(radius, std::pow(m, 1.0 / (d - k)));
        }
    }
    radius = std::max(radius, 1e-3);
    return aberth_roots(p.factory(), d, ring_seeds(centre, radius, d, cfg.precision), cfg);
}

double max_pairing_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b)
{
    if (a.size() != b.size()) {
        return std::numeric_limits<double>::infinity();
    }
    // Global greedy: repeatedly take the closest remaining pair.
    struct Pair {
        double d;
        std::size_t i, j;
    };
    std::vector<Pair> pairs;
    pairs.reserve(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            pairs.push_back({std::abs(a[i] - b[j]), i, j});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.d < y.d; });
    std::vector<char> ua(a.size(), 0), ub(b.size(), 0);
    double worst = 0.0;
    std::size_t matched = 0;
    for (const auto& p : pairs) {
        if (ua[p.i] || ub[p.j]) {
            continue;
        }
        ua[p.i] = ub[p.j] = 1;
        worst = std::max(worst, p.d);
        if (++matched == a.size()) {
            break;
        }
    }
    return worst;
}

} // namespace chanspec
