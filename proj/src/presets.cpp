#include "chanspec/presets.hpp"

#include "chanspec/errors.hpp"

#include <functional>
#include <map>

namespace chanspec::presets {

namespace {

Complex cx(const char* re, const char* im = "0")
{
    return Complex::parse(re, im, kSpecPrecision);
}

ChannelSpec channel(std::string from, std::string to, Complex alpha, Complex beta, long e = 1)
{
    ChannelSpec c;
    c.from = std::move(from);
    c.to = std::move(to);
    c.base_length = e;
    c.alpha = std::move(alpha);
    c.beta = std::move(beta);
    return c;
}

JunctionEdge edge(std::string from, std::string to, Complex w)
{
    return JunctionEdge{std::move(from), std::move(to), std::move(w)};
}

ComplexPoly constant(double re, double im = 0.0)
{
    return ComplexPoly::constant(Complex(re, im, kSpecPrecision));
}

ComplexPoly poly(std::vector<std::complex<double>> coeffs)
{
    return ComplexPoly::from_std(coeffs, kSpecPrecision);
}

} // namespace

// alpha = [2,-1], beta = [2,3], gamma = 5
GraphSpec h2k1()
{
    GraphSpec g;
    g.junctions = {"J"};
    g.junction_edges = {edge("J", "J", cx("5"))};
    g.channels = {channel("J", "J", cx("2"), cx("2")), channel("J", "J", cx("-1"), cx("3"))};
    validate(g);
    return g;
}

// alpha = [1,i,-i], beta = [1,3/2,3/2], gamma = 3
GraphSpec h3k1()
{
    GraphSpec g;
    g.junctions = {"J"};
    g.junction_edges = {edge("J", "J", cx("3"))};
    g.channels = {channel("J", "J", cx("1"), cx("1")), channel("J", "J", cx("0", "1"), cx("1.5")),
                  channel("J", "J", cx("0", "-1"), cx("1.5"))};
    validate(g);
    return g;
}

// alpha = [-1.2,1.2], beta = [1.3,1.3], gamma = [-2,2]
GraphSpec h2k2()
{
    GraphSpec g;
    g.junctions = {"v1", "v2"};
    g.junction_edges = {edge("v1", "v1", cx("-2")), edge("v2", "v2", cx("2"))};
    g.channels = {channel("v1", "v2", cx("-1.2"), cx("1.3")), channel("v2", "v1", cx("1.2"), cx("1.3"))};
    validate(g);
    return g;
}

// h2k2 with junction cross terms 1e-2
GraphSpec h2k2_weak()
{
    GraphSpec g = h2k2();
    g.junction_edges.push_back(edge("v1", "v2", cx("0.01")));
    g.junction_edges.push_back(edge("v2", "v1", cx("0.01")));
    validate(g);
    return g;
}

// diagonals i/2, -2, -i/2, 2, 3/2, 0; unit superdiagonal; A(3n+3,1) = A(n+1,3n+3) = 1
GraphSpec three()
{
    GraphSpec g;
    g.junctions = {"a", "b", "c"};
    g.junction_edges = {edge("a", "a", cx("-2")), edge("b", "b", cx("2")), edge("a", "c", cx("1"))};
    g.channels = {channel("c", "a", cx("0", "0.5"), cx("1")), channel("a", "b", cx("0", "-0.5"), cx("1")),
                  channel("b", "c", cx("1.5"), cx("1"))};
    validate(g);
    return g;
}

GraphSpec hk1(const Complex& a, const Complex& b, const Complex& c, const Complex& d, long e)
{
    GraphSpec g;
    g.junctions = {"first", "last"};
    const std::pair<const char*, const char*> ends[] = {{"first", "first"}, {"first", "last"}, {"last", "first"}, {"last", "last"}};
    const Complex* w[] = {&a, &b, &c, &d};
    for (int i = 0; i < 4; ++i) {
        if (!w[i]->is_zero()) {
            g.junction_edges.push_back(edge(ends[i].first, ends[i].second, Complex(*w[i], kSpecPrecision)));
        }
    }
    g.channels = {channel("first", "last", cx("0"), cx("1"), e)};
    validate(g);
    return g;
}

// a = b = d = 0, c = 1
GraphSpec cycle(long e)
{
    Complex zero = cx("0");
    return hk1(zero, zero, cx("1"), zero, e);
}

GraphSpec chords(std::size_t h)
{
    if (h == 0) {
        throw PreconditionError("chords needs h >= 1");
    }
    GraphSpec g;
    for (std::size_t i = 1; i <= 2 * h; ++i) {
        g.junctions.push_back("j" + std::to_string(i));
    }
    for (std::size_t i = 1; i <= 2 * h; ++i) {
        g.junction_edges.push_back(edge(g.junctions[i - 1], g.junctions[i % (2 * h)], cx("1")));
    }
    for (std::size_t i = 1; i <= h; ++i) {
        Complex alpha(0.25 * static_cast<double>(i), 0.0, kSpecPrecision);
        g.channels.push_back(channel(g.junctions[i - 1], g.junctions[i], alpha, cx("1")));
    }
    validate(g);
    return g;
}

// (z-a)^n (z-b)^n + alpha (z-a)^n + beta (z-b)^n + gamma
AnalyticFamily limset(double a, double b, double alpha, double beta, double gamma)
{
    AnalyticFamily fam;
    fam.members.push_back(make_member("ab", constant(1.0), {{a, 1}, {b, 1}}));
    fam.members.push_back(make_member("a", constant(alpha), {{a, 1}}));
    fam.members.push_back(make_member("b", constant(beta), {{b, 1}}));
    fam.members.push_back(make_member("1", constant(gamma), {}));
    fam.hints = {{a, 1.5}, {b, 1.5}};
    return fam;
}

// (z-a)^n (z+a)^n + alpha (z-a)^n + gamma
AnalyticFamily limset2(double a, double alpha, double gamma)
{
    AnalyticFamily fam;
    fam.members.push_back(make_member("ab", constant(1.0), {{a, 1}, {-a, 1}}));
    fam.members.push_back(make_member("a", constant(alpha), {{a, 1}}));
    fam.members.push_back(make_member("1", constant(gamma), {}));
    fam.hints = {{a, 1.5}, {-a, 1.5}};
    return fam;
}

// p(z,w) = w^2 + a1 w + a0, a1 = -z^2 - z + 9/2, a0 = z^3 - z^2/2 - 4z + 2
AnalyticFamily tworings()
{
    AnalyticFamily fam;
    fam.members.push_back(make_member("w2", constant(1.0), {{0.0, 2}}));
    fam.members.push_back(make_member("w1", poly({4.5, -1.0, -1.0}), {{0.0, 1}}));
    fam.members.push_back(make_member("w0", poly({2.0, -4.0, -0.5, 1.0}), {}));
    fam.hints = {{0.0, 1.5}};
    return fam;
}

// p(z,w) = w^2 - 4w - 8z + 3
AnalyticFamily interlockrings()
{
    AnalyticFamily fam;
    fam.members.push_back(make_member("w2", constant(1.0), {{0.0, 2}}));
    fam.members.push_back(make_member("w1", constant(-4.0), {{0.0, 1}}));
    fam.members.push_back(make_member("w0", poly({3.0, -8.0}), {}));
    fam.hints = {{0.0, 1.5}};
    return fam;
}

// (z^2 - 1)^n = c
AnalyticFamily closing(double c)
{
    AnalyticFamily fam;
    fam.members.push_back(make_member("f", constant(1.0), {{1.0, 1}, {-1.0, 1}}));
    fam.members.push_back(make_member("c", constant(-c), {}));
    fam.hints = {{0.0, 2.0}};
    return fam;
}

namespace {

const std::map<std::string, std::function<GraphSpec()>>& graph_table()
{
    static const std::map<std::string, std::function<GraphSpec()>> t = {
        {"h2k1", h2k1},
        {"h3k1", h3k1},
        {"h2k2", h2k2},
        {"h2k2-weak", h2k2_weak},
        {"three", three},
        {"cycle", [] { return cycle(); }},
        // a = 3, b = c = 1, d = 1
        {"hk1", [] { return hk1(cx("3"), cx("1"), cx("1"), cx("1")); }},
        {"chords3", [] { return chords(3); }},
        {"chords4", [] { return chords(4); }},
    };
    return t;
}

const std::map<std::string, std::function<AnalyticFamily()>>& family_table()
{
    static const std::map<std::string, std::function<AnalyticFamily()>> t = {
        // a = 1, b = -1, alpha = beta = gamma = 1
        {"limset", [] { return limset(); }},
        // a = 1/2, alpha = gamma = 1
        {"limset2-a-half", [] { return limset2(0.5); }},
        // a = 3/2, alpha = gamma = 1
        {"limset2-a-three-halves", [] { return limset2(1.5); }},
        {"tworings", tworings},
        {"interlockrings", interlockrings},
        // c = 0.7
        {"closing", [] { return closing(); }},
    };
    return t;
}

} // namespace

const std::vector<Preset>& catalogue()
{
    static const std::vector<Preset> list = {
        {"h2k1", true, "one junction, two loop channels"},
        {"h3k1", true, "one junction, three loop channels"},
        {"h2k2", true, "two junctions joined by two channels"},
        {"h2k2-weak", true, "h2k2 with weak junction coupling"},
        {"three", true, "three channels, three junction points in two blocks"},
        {"cycle", true, "cyclic shift"},
        {"hk1", true, "two-point junction, one channel"},
        {"chords3", true, "6-cycle junction with 3 chords"},
        {"chords4", true, "8-cycle junction with 4 chords"},
        {"limset", false, "two circles family"},
        {"limset2-a-half", false, "three arcs family"},
        {"limset2-a-three-halves", false, "circle and quartic family"},
        {"tworings", false, "p(z, z^n) with two rings"},
        {"interlockrings", false, "p(z, z^n) with interlocking rings"},
        {"closing", false, "(z^2 - 1)^n = c"},
    };
    return list;
}

bool is_graph_preset(const std::string& name)
{
    return graph_table().count(name) > 0;
}

bool is_family_preset(const std::string& name)
{
    return family_table().count(name) > 0;
}

GraphSpec graph_preset(const std::string& name)
{
    auto it = graph_table().find(name);
    if (it == graph_table().end()) {
        throw PreconditionError("unknown graph preset '" + name + "'");
    }
    return it->second();
}

AnalyticFamily family_preset(const std::string& name)
{
    auto it = family_table().find(name);
    if (it == family_table().end()) {
        throw PreconditionError("unknown family preset '" + name + "'");
    }
    return it->second();
}

} // namespace chanspec::presets
