#include "chanspec/pencil.hpp"

#include "chanspec/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

namespace chanspec {

namespace {

Complex zero_c(Precision bits) { return Complex(bits); }


} // namespace

// ---------------------------------------------------------------- pencil

ReducedPencil reduce(const GraphSpec& spec)
{
    ReducedPencil p;
    p.h = spec.channels.size();
    p.junctions = spec.junctions.size();
    p.channels = spec.channels;
    const std::size_t dim = p.dimension();
    p.entries.assign(dim, std::vector<PencilEntry>(dim));
    const Complex minus_one(-1.0, 0.0, kSpecPrecision);
    for (std::size_t r = 0; r < p.h; ++r) {
        const auto& c = spec.channels[r];
        p.entries[r][r].indeterminate = static_cast<int>(r);
        p.entries[r][p.h + spec.junction_index(c.to)].c0 += minus_one;
        p.entries[p.h + spec.junction_index(c.from)][r].c0 -= c.beta;
    }
    for (std::size_t j = 0; j < p.junctions; ++j) {
        p.entries[p.h + j][p.h + j].c1 = Complex(1.0, 0.0, kSpecPrecision);
    }
    for (const auto& e : spec.junction_edges) {
        std::size_t a = p.h + spec.junction_index(e.from);
        std::size_t b = p.h + spec.junction_index(e.to);
        p.entries[a][b].c0 -= e.weight;
    }
    return p;
}

DenseMatrix<Complex> ReducedPencil::evaluate(const Complex& z, const std::vector<Complex>& u, Precision bits) const
{
    const std::size_t dim = dimension();
    DenseMatrix<Complex> m(dim, zero_c(bits));
    Complex zz(z, bits);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            const auto& e = entries[i][j];
            if (e.structurally_zero()) {
                continue;
            }
            Complex v(e.c0, bits);
            if (!e.c1.is_zero()) {
                v += Complex(e.c1, bits) * zz;
            }
            if (e.indeterminate >= 0) {
                v += Complex(u[static_cast<std::size_t>(e.indeterminate)], bits);
            }
            m(i, j) = std::move(v);
        }
    }
    return m;
}

Complex ReducedPencil::determinant(const Complex& z, const std::vector<Complex>& u, Precision bits) const
{
    LU<Complex> lu(evaluate(z, u, bits));
    if (lu.singular()) {
        return zero_c(bits);
    }
    return lu.determinant();
}

// ---------------------------------------------------------------- subset family

SubsetFamily subset_coefficients(const ReducedPencil& pencil, std::size_t cap, Precision bits)
{
    if (pencil.h > cap || pencil.h > 30) {
        std::ostringstream os;
        os << "refusing subset expansion for h = " << pencil.h << " channels (cap " << cap
           << "; the family has 2^h terms)";
        throw PreconditionError(os.str());
    }
    const std::size_t h = pencil.h;
    const std::size_t m = pencil.junctions + 1; // interpolation nodes, deg g_T <= #J
    const std::size_t subsets = std::size_t{1} << h;
    const Real tau = Real::pi(bits) * 2.0;

    std::vector<Complex> nodes;
    for (std::size_t k = 0; k < m; ++k) {
        nodes.push_back(Complex::polar(Real(1L, bits), tau * Real(static_cast<long>(k), bits) /
                                                          Real(static_cast<long>(m), bits)));
    }

    // g[T][j]: coefficient of z^j in det P(u = 1_T).
    std::vector<std::vector<Complex>> g(subsets, std::vector<Complex>(m, zero_c(bits)));
#pragma omp parallel for schedule(dynamic)
    for (std::size_t t = 0; t < subsets; ++t) {
        std::vector<Complex> u(h, zero_c(bits));
        for (std::size_t r = 0; r < h; ++r) {
            if (t & (std::size_t{1} << r)) {
                u[r] = Complex(1.0, 0.0, bits);
            }
        }
        std::vector<Complex> values;
        values.reserve(m);
        for (const auto& z : nodes) {
            values.push_back(pencil.determinant(z, u, bits));
        }
        // Inverse DFT on the unit circle.
        for (std::size_t j = 0; j < m; ++j) {
            Complex acc = zero_c(bits);
            for (std::size_t k = 0; k < m; ++k) {
                acc += values[k] * mp::conj(nodes[(j * k) % m]);
            }
            g[t][j] = acc / Real(static_cast<long>(m), bits);
        }
    }

    // Moebius inversion over the subset lattice.
    for (std::size_t r = 0; r < h; ++r) {
        const std::size_t bit = std::size_t{1} << r;
        for (std::size_t t = 0; t < subsets; ++t) {
            if (t & bit) {
                for (std::size_t j = 0; j < m; ++j) {
                    g[t][j] -= g[t ^ bit][j];
                }
            }
        }
    }

    Real scale(bits);
    for (const auto& row : g) {
        for (const auto& c : row) {
            scale = mp::max(scale, mp::abs(c));
        }
    }
    const Real threshold = scale * std::ldexp(1.0, -static_cast<int>(bits) / 2);

    SubsetFamily fam;
    fam.h = h;
    fam.junctions = pencil.junctions;
    for (const auto& c : pencil.channels) {
        fam.channels.push_back({c.alpha, c.beta, c.base_length});
    }
    for (std::size_t t = 0; t < subsets; ++t) {
        std::vector<Complex> coeffs;
        for (auto& c : g[t]) {
            // Parts below the noise floor are exact zeros in the true coefficient.
            Complex v = c;
            if (mp::abs(v.re()) <= threshold) {
                v.re() = Real(bits);
            }
            if (mp::abs(v.im()) <= threshold) {
                v.im() = Real(bits);
            }
            coeffs.push_back(std::move(v));
        }
        ComplexPoly a(std::move(coeffs), bits);
        if (!a.is_zero()) {
            fam.coefficients.emplace(static_cast<SubsetMask>(t), std::move(a));
        }
    }
    auto top = fam.coefficients.find(fam.full());
    if (top == fam.coefficients.end() || top->second.degree() != static_cast<int>(pencil.junctions)) {
        throw VerificationError("full-subset coefficient does not have degree #J");
    }
    return fam;
}

SubsetFamily subset_family(const GraphSpec& spec, std::size_t cap)
{
    return subset_coefficients(reduce(spec), cap);
}

std::vector<SubsetMask> SubsetFamily::support() const
{
    std::vector<SubsetMask> s;
    for (const auto& [mask, a] : coefficients) {
        s.push_back(mask);
    }
    return s;
}

FactoredSum SubsetFamily::at(long n, Precision bits) const
{
    std::vector<LinearFactor> factors;
    for (const auto& c : channels) {
        factors.push_back({Complex(c.alpha, bits), mp::reciprocal(Complex(c.beta, bits)), n * c.e});
    }
    std::vector<FactoredSum::Term> terms;
    for (const auto& [mask, a] : coefficients) {
        FactoredSum::Term t{a.with_precision(bits), {}};
        for (std::size_t r = 0; r < h; ++r) {
            if (mask & (SubsetMask{1} << r)) {
                t.factors.push_back(r);
            }
        }
        terms.push_back(std::move(t));
    }
    return FactoredSum(std::move(factors), std::move(terms));
}

std::vector<std::pair<Complex, long>> SubsetFamily::global_factor(long n) const
{
    std::vector<std::pair<Complex, long>> k;
    for (const auto& c : channels) {
        k.emplace_back(c.beta, n * c.e);
    }
    return k;
}

Complex SubsetFamily::k(long n, Precision bits) const
{
    Complex acc(1.0, 0.0, bits);
    for (const auto& [beta, e] : global_factor(n)) {
        acc = acc * mp::pow(Complex(beta, bits), e);
    }
    return acc;
}

int SubsetFamily::degree(long n) const
{
    long d = static_cast<long>(junctions);
    for (const auto& c : channels) {
        d += n * c.e;
    }
    return static_cast<int>(d);
}

ComplexPoly SubsetFamily::expand(long n, Precision bits) const
{
    std::vector<ComplexPoly> channel_power;
    std::vector<Complex> beta_power;
    for (const auto& c : channels) {
        ComplexPoly lin = ComplexPoly::linear(Complex(c.alpha, bits));
        channel_power.push_back(lin.pow(static_cast<unsigned>(n * c.e)));
        beta_power.push_back(mp::pow(Complex(c.beta, bits), n * c.e));
    }
    ComplexPoly sum(bits);
    for (const auto& [mask, a] : coefficients) {
        ComplexPoly term = a.with_precision(bits);
        for (std::size_t r = 0; r < h; ++r) {
            if (mask & (SubsetMask{1} << r)) {
                term = term * channel_power[r];
            } else {
                term = term.scale(beta_power[r]);
            }
        }
        sum = sum + term;
    }
    return sum;
}

// ---------------------------------------------------------------- oracles

DenseMatrix<Complex> dense(const AssembledMatrix& m, Precision bits)
{
    DenseMatrix<Complex> a(m.dimension, zero_c(bits));
    for (const auto& [ij, v] : m.entries) {
        a(ij.first, ij.second) = Complex(v, bits);
    }
    return a;
}

DenseMatrix<Complex> shifted(const AssembledMatrix& m, const Complex& z, Precision bits)
{
    DenseMatrix<Complex> a(m.dimension, zero_c(bits));
    for (const auto& [ij, v] : m.entries) {
        a(ij.first, ij.second) = -Complex(v, bits);
    }
    Complex zz(z, bits);
    for (std::size_t i = 0; i < m.dimension; ++i) {
        a(i, i) += zz;
    }
    return a;
}

std::vector<std::complex<double>> circle_samples(double radius, int count, unsigned long seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    std::vector<std::complex<double>> z;
    for (int k = 0; k < count; ++k) {
        z.push_back(std::polar(radius, angle(rng)));
    }
    return z;
}

IdentityReport identity_check(const GraphSpec& spec, long n, const std::vector<std::complex<double>>& samples,
                              Precision bits, std::size_t cap)
{
    AssembledMatrix m = assemble(spec, n);
    if (m.dimension > cap) {
        std::ostringstream os;
        os << "identity check limited to dimension " << cap << " (got " << m.dimension << ")";
        throw PreconditionError(os.str());
    }
    SubsetFamily fam = subset_family(spec);
    FactoredSum f = fam.at(n, bits);
    Complex k = fam.k(n, bits);

    IdentityReport report;
    report.n = n;
    report.dimension = m.dimension;
    report.precision = bits;
    for (auto z0 : samples) {
        std::complex<double> z = z0;
        bool resampled = false;
        for (int attempt = 0;; ++attempt) {
            LU<Complex> lu(shifted(m, Complex(z, bits), bits));
            Complex kf = f.evaluate(Complex(z, bits)).value * k;
            if (!lu.singular() && !kf.is_zero()) {
                Complex det = lu.determinant();
                double dev = (mp::abs(det - kf) / mp::abs(kf)).to_double();
                report.samples.push_back({z, dev, resampled});
                report.max_relative_deviation = std::max(report.max_relative_deviation, dev);
                break;
            }
            if (attempt == 8) {
                throw NumericError("identity check: sample stays singular after resampling");
            }
            // Rotate off the singular point.
            z *= std::polar(1.0, 0.1);
            if (!resampled) {
                ++report.resampled;
            }
            resampled = true;
        }
    }
    return report;
}

ComplexPoly brute_char_poly(const DenseMatrix<Complex>& a, Precision bits)
{
    const std::size_t n = a.size();
    if (n > kBruteCap) {
        std::ostringstream os;
        os << "brute-force characteristic polynomial limited to dimension " << kBruteCap;
        throw PreconditionError(os.str());
    }
    // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k) / k.
    std::vector<Complex> c(n + 1, zero_c(bits));
    c[n] = Complex(1.0, 0.0, bits);
    DenseMatrix<Complex> A(n, zero_c(bits));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            A(i, j) = Complex(a(i, j), bits);
        }
    }
    DenseMatrix<Complex> M(n, zero_c(bits));
    for (std::size_t k = 1; k <= n; ++k) {
        DenseMatrix<Complex> next(n, zero_c(bits));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                Complex acc = zero_c(bits);
                for (std::size_t l = 0; l < n; ++l) {
                    if (!A(i, l).is_zero() && !M(l, j).is_zero()) {
                        acc += A(i, l) * M(l, j);
                    }
                }
                next(i, j) = std::move(acc);
            }
            next(i, i) += c[n - k + 1];
        }
        M = std::move(next);
        Complex tr = zero_c(bits);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t l = 0; l < n; ++l) {
                if (!A(i, l).is_zero() && !M(l, i).is_zero()) {
                    tr += A(i, l) * M(l, i);
                }
            }
        }
        c[n - k] = -(tr / Real(static_cast<long>(k), bits));
    }
    return ComplexPoly(std::move(c), bits);
}

ComplexPoly brute_char_poly(const AssembledMatrix& m, Precision bits)
{
    if (m.dimension > kBruteCap) {
        std::ostringstream os;
        os << "brute-force characteristic polynomial limited to dimension " << kBruteCap;
        throw PreconditionError(os.str());
    }
    return brute_char_poly(dense(m, bits), bits);
}

// ---------------------------------------------------------------- cycle covers

std::vector<SubsetMask> cycle_cover_support(const Decomposition& d, std::size_t cap)
{
    const std::size_t h = d.channels.size();
    if (h > cap || h > 30) {
        throw PreconditionError("cycle-cover enumeration refused: too many channels");
    }
    const std::size_t nv = d.collapsed_vertices;
    std::vector<std::vector<std::size_t>> out(nv);
    for (const auto& e : d.collapsed_edges) {
        out[e.from].push_back(e.to);
    }
    // The zI term makes every junction vertex a potential singleton cycle.
    for (std::size_t v = h; v < nv; ++v) {
        out[v].push_back(v);
    }

    std::vector<SubsetMask> support;
    for (std::size_t s = 0; s < (std::size_t{1} << h); ++s) {
        auto removed = [&](std::size_t v) { return v < h && (s & (std::size_t{1} << v)); };
        // Kuhn's augmenting paths: rows are vertices, columns their successors.
        std::vector<long> match_col(nv, -1);
        std::function<bool(std::size_t, std::vector<char>&)> augment = [&](std::size_t v, std::vector<char>& seen) {
            for (std::size_t w : out[v]) {
                if (removed(w) || seen[w]) {
                    continue;
                }
                seen[w] = 1;
                if (match_col[w] < 0 || augment(static_cast<std::size_t>(match_col[w]), seen)) {
                    match_col[w] = static_cast<long>(v);
                    return true;
                }
            }
            return false;
        };
        bool perfect = true;
        for (std::size_t v = 0; v < nv && perfect; ++v) {
            if (removed(v)) {
                continue;
            }
            std::vector<char> seen(nv, 0);
            perfect = augment(v, seen);
        }
        if (perfect) {
            support.push_back(static_cast<SubsetMask>(s));
        }
    }
    return support;
}

std::uint64_t balance_bound(std::size_t h, std::size_t d)
{
    std::uint64_t total = 0;
    std::uint64_t binom = 1; // C(h, k)
    for (std::size_t k = 0; k <= std::min(h, d); ++k) {
        total += binom;
        binom = binom * (h - k) / (k + 1);
    }
    return total;
}

} // namespace chanspec
