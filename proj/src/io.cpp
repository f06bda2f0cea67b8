#include "chanspec/io.hpp"

#include "chanspec/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace chanspec::io {

std::string num(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Json complex_json(cplx z)
{
    return Json::array({z.real(), z.imag()});
}

namespace {

Json points_json(const std::vector<cplx>& pts)
{
    Json a = Json::array();
    for (const auto& z : pts) {
        a.push_back(complex_json(z));
    }
    return a;
}

std::string label(const AnalyticFamily& fam, std::size_t r)
{
    return r < fam.members.size() ? fam.members[r].label : std::to_string(r);
}

} // namespace

Json arcs_json(const LimitSet& ls, const AnalyticFamily& fam)
{
    Json arcs = Json::array();
    for (const auto& a : ls.arcs) {
        Json j;
        j["pair"] = Json::array({a.r, a.s});
        j["labels"] = Json::array({label(fam, a.r), label(fam, a.s)});
        j["closed"] = a.closed;
        j["points"] = points_json(a.points);
        j["arclength"] = a.arclength;
        j["theta"] = a.theta;
        j["rho"] = a.rho;
        arcs.push_back(std::move(j));
    }
    return arcs;
}

Json isolated_json(const LimitSet& ls, const AnalyticFamily& fam)
{
    Json out = Json::array();
    for (const auto& p : ls.isolated) {
        Json j;
        j["z"] = complex_json(p.z);
        j["member"] = label(fam, p.member);
        j["margin"] = p.margin;
        j["ambiguous"] = p.ambiguous;
        out.push_back(std::move(j));
    }
    return out;
}

Json limitset_json(const LimitSet& ls, const AnalyticFamily& fam)
{
    Json j;
    j["box"] = {{"x0", ls.box.x0}, {"x1", ls.box.x1}, {"y0", ls.box.y0}, {"y1", ls.box.y1}};
    j["grid"] = ls.grid;
    j["expansions"] = ls.expansions;
    Json members = Json::array();
    for (const auto& m : fam.members) {
        members.push_back(m.label);
    }
    j["members"] = members;
    j["arcs"] = arcs_json(ls, fam);
    j["isolated"] = isolated_json(ls, fam);
    j["triple_points"] = points_json(ls.triple_points);
    j["diagnostics"] = ls.diagnostics;
    return j;
}

Json decomposition_json(const GraphSpec& spec, const Decomposition& d, const SubsetFamily& sf)
{
    Json j;
    j["h"] = spec.h();
    j["junctions"] = spec.junctions;
    Json blocks = Json::array();
    for (const auto& b : d.blocks) {
        Json ids = Json::array();
        for (auto v : b) {
            ids.push_back(spec.junctions[v]);
        }
        blocks.push_back(ids);
    }
    j["blocks"] = blocks;
    j["collapsed_vertices"] = d.collapsed_vertices;
    Json edges = Json::array();
    for (const auto& e : d.collapsed_edges) {
        edges.push_back(Json::array({e.from, e.to}));
    }
    j["collapsed_edges"] = edges;
    Json coeffs = Json::array();
    for (const auto& [mask, a] : sf.coefficients) {
        Json c;
        c["subset"] = subset_label(mask, sf.h);
        c["degree"] = a.degree();
        Json cs = Json::array();
        for (const auto& z : a.to_std()) {
            cs.push_back(complex_json(z));
        }
        c["coefficients"] = cs;
        coeffs.push_back(std::move(c));
    }
    j["subset_coefficients"] = coeffs;
    Json cover = Json::array();
    for (auto s : cycle_cover_support(d)) {
        cover.push_back(subset_label(s, spec.h()));
    }
    j["cycle_cover_support"] = cover;
    return j;
}

Json identity_json(const IdentityReport& rep)
{
    Json j;
    j["n"] = rep.n;
    j["dimension"] = rep.dimension;
    j["precision"] = rep.precision;
    j["max_relative_deviation"] = rep.max_relative_deviation;
    j["resampled"] = rep.resampled;
    Json s = Json::array();
    for (const auto& x : rep.samples) {
        s.push_back({{"z", complex_json(x.z)}, {"relative_deviation", x.relative_deviation}, {"resampled", x.resampled}});
    }
    j["samples"] = s;
    return j;
}

Json localization_json(const LocalizationReport& rep)
{
    Json j;
    j["lambda"] = complex_json(rep.lambda);
    j["n"] = rep.n;
    j["normalized"] = true;
    j["c"] = rep.c;
    Json chans = Json::array();
    for (const auto& c : rep.channels) {
        Json x;
        x["channel"] = c.channel + 1;
        x["circle"] = {{"centre", complex_json(c.alpha)}, {"radius", std::abs(c.beta)}};
        x["circle_distance"] = c.circle_distance;
        x["decay_ratio"] = c.ratio;
        x["c"] = c.c;
        x["direction"] = to_string(c.direction);
        x["recurrence_residual"] = c.recurrence_residual;
        x["geometric_certificate"] = c.geometric_certificate;
        x["ratio_certificate"] = c.ratio_certificate;
        if (c.direction == Decay::Flat) {
            x["a"] = c.a;
            x["d"] = c.d;
            x["max_ratio"] = c.max_ratio;
        }
        x["profile"] = c.profile;
        chans.push_back(std::move(x));
    }
    j["channels"] = chans;
    Json mass = Json::array();
    for (const auto& m : rep.junction_mass) {
        mass.push_back({{"N", m.N}, {"mass", m.mass}, {"bound", std::isfinite(m.bound) ? Json(m.bound) : Json(nullptr)}});
    }
    j["junction_mass"] = mass;
    j["per_junction_mass"] = rep.per_junction_mass;
    j["mass_bound_holds"] = rep.mass_bound_holds;
    j["mass_non_increasing"] = rep.mass_non_increasing;
    j["dichotomy_holds"] = rep.dichotomy_holds;
    return j;
}

std::string arcs_csv(const LimitSet& ls)
{
    std::ostringstream os;
    os << "arc,r,s,re,im,arclength,theta,rho\n";
    for (std::size_t a = 0; a < ls.arcs.size(); ++a) {
        const auto& arc = ls.arcs[a];
        for (std::size_t j = 0; j < arc.points.size(); ++j) {
            os << a << ',' << arc.r << ',' << arc.s << ',' << num(arc.points[j].real()) << ','
               << num(arc.points[j].imag()) << ',' << num(arc.arclength[j]) << ',' << num(arc.theta[j]) << ','
               << num(arc.rho[j]) << '\n';
        }
    }
    return os.str();
}

std::string isolated_csv(const LimitSet& ls)
{
    std::ostringstream os;
    os << "re,im,member,margin,ambiguous\n";
    for (const auto& p : ls.isolated) {
        os << num(p.z.real()) << ',' << num(p.z.imag()) << ',' << p.member << ',' << num(p.margin) << ','
           << (p.ambiguous ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string eigenvalues_csv(const SpectrumResult& r)
{
    std::ostringstream os;
    os << "re,im,multiplicity,residual,class,class_dist\n";
    for (std::size_t i = 0; i < r.eigenvalues.roots.size(); ++i) {
        const auto& root = r.eigenvalues.roots[i];
        cplx z = root.value.to_std();
        const Classification c = i < r.classes.size() ? r.classes[i] : Classification{};
        os << num(z.real()) << ',' << num(z.imag()) << ',' << root.multiplicity << ',' << num(root.residual) << ','
           << to_string(c.kind) << ',' << num(c.distance) << '\n';
    }
    return os.str();
}

std::string resolvent_csv(const ResolventGrid& g)
{
    std::ostringstream os;
    os << "re,im,log10_norm\n";
    for (const auto& p : g.points) {
        os << num(p.z.real()) << ',' << num(p.z.imag()) << ',' << (p.skipped ? std::string("nan") : num(p.log10_norm))
           << '\n';
    }
    return os.str();
}

void write_text(const std::string& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw Error("cannot write " + path);
    }
    f << content;
    if (!f) {
        throw Error("write failed for " + path);
    }
}

} // namespace chanspec::io
