// One [PASS]/[FAIL] line per acceptance criterion. Tolerances are pinned below.

#include "chanspec/graph.hpp"
#include "chanspec/limitset.hpp"
#include "chanspec/pencil.hpp"
#include "chanspec/presets.hpp"
#include "chanspec/spectra.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace chanspec;

namespace tol {
constexpr double kClosedForm = 1e-10;
constexpr double kClosedFormSeconds = 5.0;
constexpr double kIsolatedValue = 5.0000104;
constexpr double kIsolated = 1e-4;
constexpr double kArcDistance = 0.2;
// Arc points are refined to box diameter * refine_rel; allow twice that.
constexpr double kCurveFit = 2.0;
constexpr double kIdentity = 1e-8;
constexpr double kBrute = 1e-10;
constexpr double kEndpointCells = 2.0;
constexpr int kTubeSlack = 3;
constexpr double kTubeEpsilon = 0.1;
constexpr double kQuadrant = 0.05;
constexpr double kAnnulus = 0.2;
constexpr double kNearHalf = 0.05;
constexpr double kRecurrence = 1e-8;
constexpr double kRatioSlack = 0.1;
constexpr double kTrace = 1e-8;
constexpr double kSeedPairing = 1e-8;
constexpr double kSuiteSeconds = 600.0;
} // namespace tol

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Criterion {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " | FAILED: " << what;
        }
    }
};

int failures = 0;

void report(int id, const std::string& title, const std::function<void(Criterion&)>& body)
{
    Criterion c;
    auto t0 = Clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.pass = false;
        c.detail << " | exception: " << e.what();
    }
    if (!c.pass) {
        ++failures;
    }
    std::printf("[%s] criterion %d: %s (%.2f s)%s\n", c.pass ? "PASS" : "FAIL", id, title.c_str(), seconds_since(t0),
                c.detail.str().c_str());
    std::fflush(stdout);
}

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

double relative_poly_mismatch(const ComplexPoly& a, const ComplexPoly& b)
{
    double scale = 0.0;
    const int top = std::max(a.degree(), b.degree());
    for (int k = 0; k <= top; ++k) {
        scale = std::max({scale, mp::abs(a.coefficient(k)).to_double(), mp::abs(b.coefficient(k)).to_double()});
    }
    double worst = 0.0;
    for (int k = 0; k <= top; ++k) {
        double x = mp::abs(a.coefficient(k)).to_double(), y = mp::abs(b.coefficient(k)).to_double();
        double diff = mp::abs(a.coefficient(k) - b.coefficient(k)).to_double();
        double denom = std::max(std::max(x, y), 1e-40 * scale);
        if (denom > 0.0) {
            worst = std::max(worst, diff / denom);
        }
    }
    return worst;
}

bool all_single_point_blocks(const Decomposition& d)
{
    return std::all_of(d.blocks.begin(), d.blocks.end(), [](const auto& b) { return b.size() == 1; });
}

const std::vector<std::string> kGraphPresets = {"h2k1",  "h3k1",   "h2k2",  "h2k2-weak", "three",
                                                "cycle", "hk1",    "chords3", "chords4"};
const std::vector<std::string> kFamilyPresets = {"limset",   "limset2-a-half", "limset2-a-three-halves",
                                                 "tworings", "interlockrings", "closing"};

} // namespace

int main()
{
    const auto suite_start = Clock::now();

    report(1, "closed-form oracle (z^2-1)^n = c", [](Criterion& c) {
        const long n = 40;
        const double cc = 0.7;
        auto t0 = Clock::now();
        SpectrumConfig cfg;
        cfg.aberth.precision = 128;
        SpectrumResult r = family_roots(presets::closing(cc), n, cfg);
        double elapsed = seconds_since(t0);
        std::vector<cplx> expect;
        for (long k = 1; k <= n; ++k) {
            cplx w = std::sqrt(1.0 + std::pow(cc, 1.0 / n) * std::polar(1.0, 2.0 * std::numbers::pi * k / n));
            expect.push_back(w);
            expect.push_back(-w);
        }
        double dist = max_pairing_distance(r.values(), expect);
        c.detail << " max pairing " << fmt(dist) << ", solve " << fmt(elapsed) << " s";
        c.require(r.count() == 2 * n, "root count");
        c.require(dist <= tol::kClosedForm, "pairing distance");
        c.require(elapsed < tol::kClosedFormSeconds, "runtime");
    });

    report(2, "isolated eigenvalue of h2k1, n = 30", [](Criterion& c) {
        const long n = 30;
        GraphSpec spec = presets::h2k1();
        SpectrumResult r = eigenvalues(spec, n);
        std::vector<cplx> ev = r.values();
        auto near5 = std::min_element(ev.begin(), ev.end(), [](cplx a, cplx b) {
            return std::abs(a - tol::kIsolatedValue) < std::abs(b - tol::kIsolatedValue);
        });
        double d5 = std::abs(*near5 - tol::kIsolatedValue);
        double worst = 0.0;
        for (auto it = ev.begin(); it != ev.end(); ++it) {
            if (it != near5) {
                worst = std::max(worst, r.limit.distance(*it));
            }
        }
        // The traced arcs must lie on the three circles.
        const std::vector<std::pair<cplx, double>> circles = {{2.0, 2.0}, {-1.0, 3.0}, {4.4, 3.6}};
        double fit = 0.0;
        for (const auto& arc : r.limit.arcs) {
            for (cplx z : arc.points) {
                double best = 1e300;
                for (const auto& [ctr, rad] : circles) {
                    best = std::min(best, std::abs(std::abs(z - ctr) - rad));
                }
                fit = std::max(fit, best);
            }
        }
        c.detail << " |lambda - 5.0000104| = " << fmt(d5) << ", worst arc distance " << fmt(worst)
                 << ", arc-to-circle fit " << fmt(fit);
        c.require(static_cast<std::size_t>(r.count()) == 2 * n + 1, "eigenvalue count");
        c.require(d5 <= tol::kIsolated, "isolated eigenvalue");
        c.require(worst <= tol::kArcDistance, "other eigenvalues near the arcs");
        const double fit_tol = tol::kCurveFit * r.limit.box.diameter() * TraceConfig{}.refine_rel;
        c.require(!r.limit.arcs.empty() && fit <= fit_tol, "arcs on the three circles");
    });

    report(3, "determinant identity and brute-force characteristic polynomial", [](Criterion& c) {
        struct Case {
            const char* name;
            long n;
            double radius;
        };
        const Case cases[] = {{"h2k2", 5, 1.5}, {"three", 3, 3.0}, {"h3k1", 4, 2.0}};
        double worst = 0.0;
        for (const auto& k : cases) {
            IdentityReport rep =
                identity_check(presets::graph_preset(k.name), k.n, circle_samples(k.radius, 20, 7), 128);
            worst = std::max(worst, rep.max_relative_deviation);
            c.require(rep.samples.size() == 20, std::string(k.name) + " sample count");
        }
        c.detail << " identity deviation " << fmt(worst);
        c.require(worst <= tol::kIdentity, "identity deviation");
        double brute_worst = 0.0;
        int checked = 0;
        for (const auto& name : kGraphPresets) {
            GraphSpec spec = presets::graph_preset(name);
            SubsetFamily sf = subset_family(spec);
            for (long n = 1; n <= 12; ++n) {
                AssembledMatrix m = assemble(spec, n);
                if (m.dimension > kBruteCap) {
                    break;
                }
                double e = relative_poly_mismatch(brute_char_poly(m, 256), sf.expand(n, 256));
                brute_worst = std::max(brute_worst, e);
                ++checked;
                if (e > tol::kBrute) {
                    c.require(false, name + " n=" + std::to_string(n) + " brute mismatch " + fmt(e));
                }
            }
        }
        c.detail << ", brute-force mismatch " << fmt(brute_worst) << " over " << checked << " matrices";
        c.require(checked >= 10, "enough brute-force cases");
    });

    report(4, "subset-coefficient structure", [](Criterion& c) {
        std::size_t three = subset_family(presets::three()).support().size();
        c.detail << " three: " << three << " of 8";
        c.require(three == 3, "three has 3 nonzero coefficients");
        for (std::size_t h : {3u, 4u}) {
            std::size_t got = subset_family(presets::chords(h)).support().size();
            c.detail << ", chords h=" << h << ": " << got << " of " << (1u << h);
            c.require(got == (1u << h), "chords support is full");
        }
        int bounded = 0;
        for (const auto& name : kGraphPresets) {
            GraphSpec spec = presets::graph_preset(name);
            Decomposition d = decompose(spec);
            auto support = subset_family(spec).support();
            auto cover = cycle_cover_support(d);
            std::sort(cover.begin(), cover.end());
            for (auto s : support) {
                c.require(std::binary_search(cover.begin(), cover.end(), s), name + " support outside cycle cover");
            }
            if (all_single_point_blocks(d)) {
                ++bounded;
                auto bound = balance_bound(spec.h(), spec.junctions.size());
                c.require(support.size() <= bound, name + " exceeds the subset-count bound");
            }
        }
        c.detail << ", count bound checked on " << bounded << " fixtures";
        c.require(bounded >= 3, "enough single-point fixtures");
    });

    report(5, "limit-set geometry of the three-arc family", [](Criterion& c) {
        LimitSet half = trace_limit_set(presets::limset2(0.5));
        const double tip = std::sqrt(1.0 - 0.25);
        const double cells = tol::kEndpointCells * half.cell_size();
        double worst = 0.0;
        for (const auto& arc : half.arcs) {
            c.require(!arc.closed, "a = 1/2 arcs are open");
            for (cplx z : {arc.points.front(), arc.points.back()}) {
                worst = std::max(worst, std::min(std::abs(z - cplx(0, tip)), std::abs(z - cplx(0, -tip))));
            }
        }
        c.detail << " a=1/2: " << half.arcs.size() << " arcs, endpoint error " << fmt(worst) << " (limit "
                 << fmt(cells) << ")";
        c.require(half.arcs.size() == 3, "three arcs");
        c.require(worst <= cells, "endpoints at +-i sqrt(3)/2");

        const double a = 1.5;
        LimitSet big = trace_limit_set(presets::limset2(a));
        const double fit_tol = tol::kCurveFit * big.box.diameter() * TraceConfig{}.refine_rel;
        int circles = 0, quartics = 0;
        for (const auto& arc : big.arcs) {
            double on_circle = 0.0, on_quartic = 0.0, min_re = 1e300;
            for (cplx z : arc.points) {
                on_circle = std::max(on_circle, std::abs(std::abs(z + a) - 1.0));
                // Level-set residual divided by the gradient |2z| approximates distance.
                on_quartic = std::max(on_quartic, std::abs(std::abs((z - a) * (z + a)) - 1.0) / std::abs(2.0 * z));
                min_re = std::min(min_re, z.real());
            }
            if (arc.closed && on_circle < fit_tol) {
                ++circles;
            } else if (arc.closed && on_quartic < fit_tol && min_re > 0.0) {
                ++quartics;
            }
        }
        c.detail << "; a=3/2: " << big.arcs.size() << " arcs, " << circles << " closed circle, " << quartics
                 << " closed quartic in Re z > 0";
        c.require(big.arcs.size() == 2 && circles == 1 && quartics == 1, "circle plus quartic");
    });

    report(6, "density against tube counts on |z-1| = 1", [](Criterion& c) {
        AnalyticFamily fam = presets::limset();
        LimitSet ls = trace_limit_set(fam);
        const ArcSample* arc = nullptr;
        for (const auto& a : ls.arcs) {
            double off = 0.0;
            for (cplx z : a.points) {
                off = std::max(off, std::abs(std::abs(z - 1.0) - 1.0));
            }
            if (off < 1e-5 && (!arc || a.length() > arc->length())) {
                arc = &a;
            }
        }
        c.require(arc != nullptr, "arc on |z-1| = 1");
        if (!arc) {
            return;
        }
        const double mid = 0.5 * (arc->theta.front() + arc->theta.back());
        const double from = arc->s_at_theta(mid - std::numbers::pi / 4);
        const double to = arc->s_at_theta(mid + std::numbers::pi / 4);
        DensityResult d = density_integral(*arc, from, to);
        c.detail << " integral of rho " << fmt(d.value);
        c.require(std::abs(d.value - 0.25) < 1e-3, "density integral equals theta span / 2 pi");
        for (long n : {40L, 80L}) {
            SpectrumResult r = family_roots(fam, n, {}, &ls);
            int count = tube_count(r.values(), *arc, from, to, tol::kTubeEpsilon);
            c.detail << ", n=" << n << ": " << count << " (n/4 = " << n / 4 << ")";
            c.require(std::abs(count - n / 4.0) <= tol::kTubeSlack, "tube count within slack");
        }
    });

    report(7, "uniform distribution for the two-ring family, n = 40", [](Criterion& c) {
        SpectrumResult r = family_roots(presets::tworings(), 40);
        std::vector<cplx> roots = r.values();
        SectorStatistics st = sector_statistics(roots, tol::kAnnulus, quadrants());
        c.detail << " annulus " << st.annulus << " of " << st.total << ", quadrant fractions";
        for (const auto& s : st.sectors) {
            c.detail << " " << fmt(s.fraction_of_annulus);
            c.require(std::abs(s.fraction_of_annulus - 0.25) <= tol::kQuadrant, "quadrant fraction");
        }
        int near = static_cast<int>(
            std::count_if(roots.begin(), roots.end(), [](cplx z) { return std::abs(z - 0.5) < tol::kNearHalf; }));
        c.detail << ", roots near 1/2: " << near;
        c.require(near == 1, "exactly one root near 1/2");
    });

    report(8, "eigenvector localization for h2k1, n = 30", [](Criterion& c) {
        const long n = 30;
        GraphSpec spec = presets::h2k1();
        SpectrumResult r = eigenvalues(spec, n);
        std::vector<cplx> ev = r.values();
        cplx iso = *std::min_element(ev.begin(), ev.end(), [](cplx a, cplx b) {
            return std::abs(a - tol::kIsolatedValue) < std::abs(b - tol::kIsolatedValue);
        });
        EigenvectorResult v = eigenvector(spec, n, iso);
        LocalizationReport rep = localization_report(spec, n, v.lambda, v.v);
        double rec = 0.0;
        for (const auto& ch : rep.channels) {
            rec = std::max(rec, ch.recurrence_residual);
        }
        c.detail << " recurrence residual " << fmt(rec) << ", c = " << fmt(rep.c) << ", mass ladder";
        for (const auto& m : rep.junction_mass) {
            c.detail << " " << fmt(m.mass) << "<=" << fmt(m.bound);
        }
        c.require(rec <= tol::kRecurrence, "channel recurrence");
        c.require(rep.mass_bound_holds && !rep.junction_mass.empty(), "junction mass bound");
        c.require(rep.dichotomy_holds, "dichotomy at the isolated eigenvalue");

        // An eigenvalue within 5/n of S_1 = {|z - 2| = 2}.
        cplx pick = 0;
        double best = 1e300;
        for (cplx z : ev) {
            double dist = std::abs(std::abs(z - 2.0) - 2.0);
            if (std::abs(z - iso) > 1e-6 && dist < best) {
                best = dist;
                pick = z;
            }
        }
        c.require(best <= 5.0 / n, "an eigenvalue near S_1");
        EigenvectorResult w = eigenvector(spec, n, pick);
        LocalizationConfig lc;
        lc.slack = tol::kRatioSlack;
        LocalizationReport near = localization_report(spec, n, w.lambda, w.v, lc);
        const auto& ch = near.channels[0];
        c.detail << "; near S_1: a = " << fmt(ch.a) << ", max ratio " << fmt(ch.max_ratio) << " <= d = " << fmt(ch.d);
        c.require(ch.direction == Decay::Flat && ch.ratio_certificate, "component ratio bound");
        c.require(near.dichotomy_holds, "dichotomy near S_1");
    });

    report(9, "property suite on every preset", [&](Criterion& c) {
        const long n = 20;
        int checked = 0;
        for (const auto& name : kGraphPresets) {
            GraphSpec spec = presets::graph_preset(name);
            AssembledMatrix m = assemble(spec, n);
            SpectrumResult r = eigenvalues(spec, n);
            c.require(static_cast<std::size_t>(r.count()) == m.dimension, name + " count conservation");
            cplx sum = 0.0;
            double mag = 0.0;
            for (cplx z : r.values()) {
                sum += z;
                mag += std::abs(z);
            }
            cplx tr = m.trace().to_std();
            double rel = std::abs(sum - tr) / std::max({1.0, std::abs(tr), mag});
            c.require(rel <= tol::kTrace, name + " trace identity " + fmt(rel));

            SpectrumConfig ring;
            ring.seed_from_limit = false;
            SpectrumResult r2 = eigenvalues(spec, n, ring, &r.limit);
            double pair = max_pairing_distance(r.values(), r2.values());
            c.require(pair <= tol::kSeedPairing, name + " seed independence " + fmt(pair));
            ++checked;
        }
        for (const auto& name : kFamilyPresets) {
            AnalyticFamily fam = presets::family_preset(name);
            SpectrumResult r = family_roots(fam, n);
            c.require(r.count() == fam.degree(n), name + " count conservation");
            SpectrumConfig ring;
            ring.seed_from_limit = false;
            SpectrumResult r2 = family_roots(fam, n, ring, &r.limit);
            double pair = max_pairing_distance(r.values(), r2.values());
            c.require(pair <= tol::kSeedPairing, name + " seed independence " + fmt(pair));
            ++checked;
        }

        std::vector<std::pair<std::string, AnalyticFamily>> fams;
        for (const auto& name : kGraphPresets) {
            fams.emplace_back(name, family_from_subsets(subset_family(presets::graph_preset(name))));
        }
        for (const auto& name : kFamilyPresets) {
            fams.emplace_back(name, presets::family_preset(name));
        }
        for (const auto& [name, fam] : fams) {
            LimitSet ls = trace_limit_set(fam);
            TraceConfig cfg;
            cfg.grid = 200;
            const double tie_tol = 4.0 * ls.box.diameter() * cfg.refine_rel;
            for (std::size_t rr = 0; rr < fam.members.size(); ++rr) {
                for (std::size_t ss = rr + 1; ss < fam.members.size(); ++ss) {
                    auto ab = trace_pair(fam, rr, ss, ls.box, cfg);
                    auto ba = trace_pair(fam, ss, rr, ls.box, cfg);
                    LimitSet la, lb;
                    la.arcs = ab;
                    lb.arcs = ba;
                    double worst = 0.0;
                    for (const auto& a : ab) {
                        for (cplx z : a.points) {
                            worst = std::max(worst, lb.distance(z));
                        }
                    }
                    for (const auto& b : ba) {
                        for (cplx z : b.points) {
                            worst = std::max(worst, la.distance(z));
                        }
                    }
                    c.require(ab.empty() == ba.empty() && worst <= tie_tol, name + " tie symmetry");
                }
            }
            AnalyticFamily scaled = fam;
            for (auto& mem : scaled.members) {
                mem.coefficient = mem.coefficient.scale(Complex(3.0, -2.0, mem.coefficient.precision()));
            }
            LimitSet ls2 = trace_limit_set(scaled);
            bool same = ls.arcs.size() == ls2.arcs.size();
            for (std::size_t k = 0; same && k < ls.arcs.size(); ++k) {
                same = ls.arcs[k].points == ls2.arcs[k].points && ls.arcs[k].theta == ls2.arcs[k].theta;
            }
            c.require(same, name + " arcs change under coefficient scaling");
            bool iso = ls.isolated.size() == ls2.isolated.size();
            for (std::size_t k = 0; iso && k < ls.isolated.size(); ++k) {
                iso = std::abs(ls.isolated[k].z - ls2.isolated[k].z) <= 1e-10 * (1.0 + std::abs(ls.isolated[k].z));
            }
            c.require(iso, name + " isolated points change under coefficient scaling");
        }
        // Non-isolated eigenvalues approach the arcs as n grows.
        for (const auto& name : {"h2k1", "three", "h2k2"}) {
            GraphSpec spec = presets::graph_preset(name);
            LimitSet ls = trace_limit_set(family_from_subsets(subset_family(spec)));
            double previous = 1e300;
            c.detail << " " << name << " arc distance";
            for (long m : {10L, 20L, 40L}) {
                SpectrumResult r = eigenvalues(spec, m, {}, &ls);
                double worst = 0.0;
                for (std::size_t i = 0; i < r.eigenvalues.roots.size(); ++i) {
                    if (r.classes[i].kind != Classification::Kind::Isolated) {
                        worst = std::max(worst, ls.distance(r.eigenvalues.roots[i].value.to_std()));
                    }
                }
                c.detail << " " << fmt(worst);
                c.require(worst <= previous, std::string(name) + " arc distance grows with n");
                previous = worst;
            }
            c.detail << ";";
        }
        const double elapsed = seconds_since(suite_start);
        c.detail << " " << checked << " presets, suite so far " << fmt(elapsed) << " s";
        c.require(elapsed < tol::kSuiteSeconds, "suite runtime");
    });

    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
