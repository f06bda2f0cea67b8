#include "chanspec/errors.hpp"
#include "chanspec/graph.hpp"
#include "chanspec/io.hpp"
#include "chanspec/limitset.hpp"
#include "chanspec/pencil.hpp"
#include "chanspec/presets.hpp"
#include "chanspec/spectra.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

using namespace chanspec;
namespace fs = std::filesystem;

namespace {

struct RunConfig {
    std::string input;
    std::string preset;
    long n = 20;
    int precision = 53;
    int grid = 800;
    std::string out = ".";
    unsigned long seed = 1;
    double epsilon = 0.1;
    int sectors = 0;
    double radius = 0.0;
    std::string lambda;
};

enum Exit { kOk = 0, kOther = 1, kParse = 2, kNumeric = 3, kVerification = 4 };

struct Source {
    std::optional<GraphSpec> spec;
    AnalyticFamily family;
    std::string name;
};

Source load(const RunConfig& cfg)
{
    if (cfg.input.empty() == cfg.preset.empty()) {
        throw ParseError("exactly one of --input and --preset is required");
    }
    Source src;
    if (!cfg.input.empty()) {
        src.spec = load_spec(cfg.input);
        src.name = fs::path(cfg.input).stem().string();
    } else if (presets::is_graph_preset(cfg.preset)) {
        src.spec = presets::graph_preset(cfg.preset);
        src.name = cfg.preset;
    } else if (presets::is_family_preset(cfg.preset)) {
        src.family = presets::family_preset(cfg.preset);
        src.name = cfg.preset;
        return src;
    } else {
        throw ParseError("unknown preset '" + cfg.preset + "'");
    }
    src.family = family_from_subsets(subset_family(*src.spec));
    return src;
}

const GraphSpec& need_graph(const Source& s, const char* command)
{
    if (!s.spec) {
        throw ParseError(std::string(command) + " needs a graph input, not a direct family");
    }
    return *s.spec;
}

void check(const RunConfig& cfg)
{
    if (cfg.n < 1) {
        throw ParseError("--n must be positive");
    }
    if (!mp::is_ladder_precision(cfg.precision)) {
        throw ParseError("--precision must be one of 53, 128, 256, 512");
    }
    if (cfg.grid < 16) {
        throw ParseError("--grid must be at least 16");
    }
    fs::create_directories(cfg.out);
}

std::string path(const RunConfig& cfg, const std::string& file)
{
    return (fs::path(cfg.out) / file).string();
}

void emit(const RunConfig& cfg, const std::string& file, const std::string& text)
{
    io::write_text(path(cfg, file), text);
    std::cout << "wrote " << path(cfg, file) << "\n";
}

TraceConfig trace_config(const RunConfig& cfg)
{
    TraceConfig t;
    t.grid = cfg.grid;
    return t;
}

SpectrumConfig spectrum_config(const RunConfig& cfg)
{
    SpectrumConfig s;
    s.aberth.precision = cfg.precision;
    s.trace = trace_config(cfg);
    return s;
}

SpectrumResult spectrum(const Source& src, const RunConfig& cfg, const LimitSet* limit = nullptr)
{
    return src.spec ? eigenvalues(*src.spec, cfg.n, spectrum_config(cfg), limit)
                    : family_roots(src.family, cfg.n, spectrum_config(cfg), limit);
}

io::Json circles_json(const AnalyticFamily& fam)
{
    io::Json out = io::Json::array();
    for (const auto& c : analytic_circles(fam)) {
        io::Json j;
        j["pair"] = {fam.members[c.r].label, fam.members[c.s].label};
        j["kind"] = c.description;
        if (c.kind == CurveDescriptor::Kind::Circle) {
            j["centre"] = io::complex_json(c.centre);
            j["radius"] = c.radius;
        } else if (c.kind == CurveDescriptor::Kind::Line) {
            j["point"] = io::complex_json(c.line_point);
            j["direction"] = io::complex_json(c.line_direction);
        }
        out.push_back(std::move(j));
    }
    return out;
}

int run_decompose(const RunConfig& cfg)
{
    Source src = load(cfg);
    const GraphSpec& spec = need_graph(src, "decompose");
    Decomposition d = decompose(spec);
    io::Json j = io::decomposition_json(spec, d, subset_family(spec));
    emit(cfg, "decomposition.json", j.dump(2) + "\n");
    std::cout << "h=" << spec.h() << " junction blocks=" << d.blocks.size()
              << " collapsed vertices=" << d.collapsed_vertices << "\n";
    return kOk;
}

int run_limitset(const RunConfig& cfg)
{
    Source src = load(cfg);
    LimitSet ls = trace_limit_set(src.family, trace_config(cfg));
    io::Json j = io::limitset_json(ls, src.family);
    j["curves"] = circles_json(src.family);
    emit(cfg, "limitset.json", j.dump(2) + "\n");
    emit(cfg, "arcs.csv", io::arcs_csv(ls));
    emit(cfg, "isolated.csv", io::isolated_csv(ls));
    std::cout << ls.arcs.size() << " arcs, " << ls.isolated.size() << " isolated points\n";
    for (const auto& d : ls.diagnostics) {
        std::cout << "note: " << d << "\n";
    }
    return kOk;
}

int run_spectrum(const RunConfig& cfg)
{
    Source src = load(cfg);
    SpectrumResult r = spectrum(src, cfg);
    emit(cfg, "eigenvalues.csv", io::eigenvalues_csv(r));
    emit(cfg, "limitset.json", io::limitset_json(r.limit, src.family).dump(2) + "\n");
    int counts[3] = {0, 0, 0};
    for (std::size_t i = 0; i < r.classes.size(); ++i) {
        counts[static_cast<int>(r.classes[i].kind)] += r.eigenvalues.roots[i].multiplicity;
    }
    std::cout << r.count() << " eigenvalues at " << r.precision_used << " bits: " << counts[0] << " on arcs, "
              << counts[1] << " isolated, " << counts[2] << " unclassified\n";
    for (const auto& note : r.eigenvalues.notes) {
        std::cout << "note: " << note << "\n";
    }
    return kOk;
}

int run_density(const RunConfig& cfg)
{
    Source src = load(cfg);
    LimitSet ls = trace_limit_set(src.family, trace_config(cfg));
    SpectrumResult r = spectrum(src, cfg, &ls);
    std::vector<cplx> roots = r.values();
    io::Json out;
    out["n"] = cfg.n;
    out["epsilon"] = cfg.epsilon;
    io::Json arcs = io::Json::array();
    for (std::size_t a = 0; a < ls.arcs.size(); ++a) {
        const auto& arc = ls.arcs[a];
        io::Json j;
        j["arc"] = a;
        j["pair"] = {src.family.members[arc.r].label, src.family.members[arc.s].label};
        j["length"] = arc.length();
        double from = 0.1 * arc.length(), to = 0.9 * arc.length();
        DensityResult d = density_integral(arc, from, to);
        j["interior"] = {from, to};
        j["density_integral"] = d.value;
        j["predicted_count"] = d.value * static_cast<double>(cfg.n);
        try {
            j["tube_count"] = tube_count(roots, arc, from, to, cfg.epsilon);
        } catch (const PreconditionError& e) {
            j["tube_count"] = nullptr;
            j["note"] = e.what();
        }
        arcs.push_back(std::move(j));
    }
    out["arcs"] = arcs;
    if (cfg.sectors > 0) {
        std::vector<Sector> sectors;
        const double w = 2.0 * std::numbers::pi / cfg.sectors;
        for (int k = 0; k < cfg.sectors; ++k) {
            sectors.push_back({k * w, (k + 1) * w});
        }
        SectorStatistics st = sector_statistics(roots, cfg.epsilon, sectors);
        io::Json s;
        s["delta"] = cfg.epsilon;
        s["total"] = st.total;
        s["annulus"] = st.annulus;
        io::Json list = io::Json::array();
        for (const auto& c : st.sectors) {
            list.push_back({{"lo", c.sector.lo}, {"hi", c.sector.hi}, {"count", c.count},
                            {"fraction_of_annulus", c.fraction_of_annulus}, {"fraction_of_all", c.fraction_of_all}});
        }
        s["sectors"] = list;
        out["sectors"] = s;
    }
    emit(cfg, "density.json", out.dump(2) + "\n");
    return kOk;
}

cplx parse_lambda(const std::string& text)
{
    std::istringstream is(text);
    double re = 0, im = 0;
    char comma = 0;
    if (!(is >> re)) {
        throw ParseError("--lambda expects 're,im'");
    }
    if (is >> comma && comma == ',' && !(is >> im)) {
        throw ParseError("--lambda expects 're,im'");
    }
    return {re, im};
}

int run_localize(const RunConfig& cfg)
{
    Source src = load(cfg);
    const GraphSpec& spec = need_graph(src, "localize");
    cplx lambda;
    if (!cfg.lambda.empty()) {
        lambda = parse_lambda(cfg.lambda);
    } else {
        SpectrumResult r = spectrum(src, cfg);
        // Prefer an isolated eigenvalue; otherwise the largest in modulus.
        std::size_t pick = 0;
        bool isolated = false;
        for (std::size_t i = 0; i < r.classes.size(); ++i) {
            cplx z = r.eigenvalues.roots[i].value.to_std();
            bool iso = r.classes[i].kind == Classification::Kind::Isolated;
            cplx best = r.eigenvalues.roots[pick].value.to_std();
            if ((iso && !isolated) || (iso == isolated && std::abs(z) > std::abs(best))) {
                pick = i;
                isolated = isolated || iso;
            }
        }
        lambda = r.eigenvalues.roots.at(pick).value.to_std();
    }
    EigenvectorResult ev = eigenvector(spec, cfg.n, lambda);
    LocalizationReport rep = localization_report(spec, cfg.n, ev.lambda, ev.v);
    io::Json j = io::localization_json(rep);
    j["eigenvector_residual"] = ev.residual;
    j["eigenvector_precision"] = ev.precision;
    emit(cfg, "localization.json", j.dump(2) + "\n");
    std::cout << "lambda = " << io::num(ev.lambda.real()) << " + " << io::num(ev.lambda.imag())
              << "i, residual " << ev.residual << "\n";
    return kOk;
}

int run_resolvent(const RunConfig& cfg)
{
    Source src = load(cfg);
    const GraphSpec& spec = need_graph(src, "resolvent");
    Box box = initial_box(src.family);
    if (cfg.radius > 0) {
        box = {-cfg.radius, cfg.radius, -cfg.radius, cfg.radius};
    }
    const int pts = std::min(cfg.grid, 200);
    ResolventGrid g = resolvent_grid(spec, cfg.n, box, pts, pts);
    emit(cfg, "resolvent.csv", io::resolvent_csv(g));
    return kOk;
}

int run_verify(const RunConfig& cfg)
{
    Source src = load(cfg);
    const GraphSpec& spec = need_graph(src, "verify");
    io::Json report;
    bool ok = true;
    auto record = [&](const std::string& name, bool pass, io::Json detail) {
        detail["pass"] = pass;
        report["checks"][name] = std::move(detail);
        ok = ok && pass;
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << name << "\n";
    };

    AssembledMatrix m = assemble(spec, cfg.n);
    SubsetFamily sf = subset_family(spec);
    report["n"] = cfg.n;
    report["dimension"] = m.dimension;
    report["seed"] = cfg.seed;

    if (m.dimension <= kOracleCap) {
        double radius = cfg.radius > 0 ? cfg.radius : 1.5;
        IdentityReport id = identity_check(spec, cfg.n, circle_samples(radius, 20, cfg.seed), 128);
        record("determinant_identity", id.max_relative_deviation <= 1e-8, io::identity_json(id));
    }
    if (m.dimension <= kBruteCap) {
        ComplexPoly brute = brute_char_poly(m, 256);
        ComplexPoly pencil = sf.expand(cfg.n, 256);
        double worst = 0.0, scale = 0.0;
        for (int k = 0; k <= std::max(brute.degree(), pencil.degree()); ++k) {
            scale = std::max(scale, mp::abs(brute.coefficient(k)).to_double());
        }
        for (int k = 0; k <= std::max(brute.degree(), pencil.degree()); ++k) {
            worst = std::max(worst, mp::abs(brute.coefficient(k) - pencil.coefficient(k)).to_double() / scale);
        }
        record("brute_char_poly", brute.degree() == pencil.degree() && worst <= 1e-10, {{"max_relative", worst}});
    }
    {
        auto support = sf.support();
        auto cover = cycle_cover_support(decompose(spec));
        std::sort(support.begin(), support.end());
        std::sort(cover.begin(), cover.end());
        bool subset = std::includes(cover.begin(), cover.end(), support.begin(), support.end());
        record("support_in_cycle_cover", subset,
               {{"support", support.size()}, {"cycle_cover", cover.size()}});
    }
    {
        auto full = sf.coefficients.find(sf.full());
        bool monic = full != sf.coefficients.end() && full->second.degree() == static_cast<int>(sf.junctions);
        record("full_subset_degree", monic, io::Json::object());
    }
    {
        SpectrumResult r = eigenvalues(spec, cfg.n, spectrum_config(cfg));
        std::vector<cplx> ev = r.values();
        cplx sum = 0.0;
        for (auto z : ev) {
            sum += z;
        }
        cplx tr = m.trace().to_std();
        double rel = std::abs(sum - tr) / std::max(1.0, std::abs(tr));
        record("count_conservation", static_cast<std::size_t>(r.count()) == m.dimension,
               {{"count", r.count()}, {"dimension", m.dimension}});
        record("trace_identity", rel <= 1e-8, {{"relative", rel}});
    }
    report["pass"] = ok;
    emit(cfg, "verify.json", report.dump(2) + "\n");
    if (!ok) {
        throw VerificationError("verification failed");
    }
    return kOk;
}

int run_presets()
{
    for (const auto& p : presets::catalogue()) {
        std::cout << p.name << (p.is_graph ? "  graph   " : "  family  ") << p.summary << "\n";
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spectra of channel-lengthened graph matrices and their limit sets"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--input", cfg.input, "graph-spec JSON file");
        sub->add_option("--preset", cfg.preset, "named preset (see 'presets')");
        sub->add_option("--n", cfg.n, "channel lengthening factor");
        sub->add_option("--precision", cfg.precision, "starting mantissa bits: 53, 128, 256 or 512");
        sub->add_option("--grid", cfg.grid, "limit-set grid resolution");
        sub->add_option("--out", cfg.out, "output directory");
        sub->add_option("--seed", cfg.seed, "seed for sampled checks");
        sub->add_option("--epsilon", cfg.epsilon, "tube radius and annulus half-width");
        sub->add_option("--sectors", cfg.sectors, "number of equal sectors for sector statistics");
        sub->add_option("--radius", cfg.radius, "sample circle radius (verify) or box half-width (resolvent)");
    };

    std::map<std::string, std::function<int()>> handlers = {
        {"decompose", [&] { return run_decompose(cfg); }},
        {"spectrum", [&] { return run_spectrum(cfg); }},
        {"limitset", [&] { return run_limitset(cfg); }},
        {"density", [&] { return run_density(cfg); }},
        {"localize", [&] { return run_localize(cfg); }},
        {"verify", [&] { return run_verify(cfg); }},
        {"resolvent", [&] { return run_resolvent(cfg); }},
    };
    const std::map<std::string, std::string> help = {
        {"decompose", "channel/junction decomposition and subset coefficients"},
        {"spectrum", "eigenvalues of A(n) with classification"},
        {"limitset", "traced anti-Stokes arcs and isolated limit points"},
        {"density", "zero densities, tube counts and sector statistics"},
        {"localize", "eigenvector localization report"},
        {"verify", "determinant identity and invariant battery"},
        {"resolvent", "log10 resolvent norm grid"},
    };
    for (const auto& [name, text] : help) {
        add_common(app.add_subcommand(name, text));
    }
    app.get_subcommand("localize")->add_option("--lambda", cfg.lambda, "eigenvalue as 're,im'");
    app.add_subcommand("presets", "list named presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kParse;
    }

    try {
        for (auto* sub : app.get_subcommands()) {
            if (sub->get_name() == "presets") {
                return run_presets();
            }
            check(cfg);
            return handlers.at(sub->get_name())();
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const PreconditionError& e) {
        std::cerr << "invalid request: " << e.what() << "\n";
        return kParse;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kNumeric;
    } catch (const VerificationError& e) {
        std::cerr << "verification failed: " << e.what() << "\n";
        return kVerification;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kOther;
    }
    return kOk;
}
