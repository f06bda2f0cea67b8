#include "chanspec/graph.hpp"

#include "chanspec/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace chanspec {

using nlohmann::json;

namespace {

Complex parse_complex(const json& v, const std::string& where)
{
    if (!v.is_array() || v.size() != 2) {
        throw ParseError(where + ": complex value must be a [re, im] pair");
    }
    mp::Real parts[2] = {mp::Real(kSpecPrecision), mp::Real(kSpecPrecision)};
    for (int k = 0; k < 2; ++k) {
        const json& x = v[static_cast<std::size_t>(k)];
        if (x.is_string()) {
            try {
                parts[k] = mp::Real::parse(x.get<std::string>(), kSpecPrecision);
            } catch (const ParseError& e) {
                throw ParseError(where + ": " + e.what());
            }
        } else if (x.is_number()) {
            parts[k] = mp::Real(x.get<double>(), kSpecPrecision);
        } else {
            throw ParseError(where + ": complex parts must be decimal strings or numbers");
        }
    }
    return Complex(std::move(parts[0]), std::move(parts[1]));
}

json complex_json(const Complex& z)
{
    return json::array({z.re().to_string(), z.im().to_string()});
}

const json& field(const json& obj, const char* key, const std::string& where)
{
    if (!obj.is_object() || !obj.contains(key)) {
        throw ParseError(where + ": missing field '" + key + "'");
    }
    return obj.at(key);
}

std::string string_field(const json& obj, const char* key, const std::string& where)
{
    const json& v = field(obj, key, where);
    if (!v.is_string()) {
        throw ParseError(where + ": field '" + key + "' must be a string");
    }
    return v.get<std::string>();
}

Digraph spec_digraph(const GraphSpec& spec)
{
    Digraph g(spec.junctions.size());
    for (const auto& e : spec.junction_edges) {
        g[spec.junction_index(e.from)].push_back(spec.junction_index(e.to));
    }
    for (const auto& c : spec.channels) {
        g[spec.junction_index(c.from)].push_back(spec.junction_index(c.to));
    }
    return g;
}

std::vector<char> reach(const Digraph& g, std::size_t start)
{
    std::vector<char> seen(g.size(), 0);
    std::vector<std::size_t> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        for (std::size_t w : g[v]) {
            if (!seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
        }
    }
    return seen;
}

Digraph reversed(const Digraph& g)
{
    Digraph r(g.size());
    for (std::size_t v = 0; v < g.size(); ++v) {
        for (std::size_t w : g[v]) {
            r[w].push_back(v);
        }
    }
    return r;
}

} // namespace

std::size_t GraphSpec::junction_index(const std::string& id) const
{
    auto it = std::find(junctions.begin(), junctions.end(), id);
    if (it == junctions.end()) {
        throw ParseError("unknown junction vertex '" + id + "'");
    }
    return static_cast<std::size_t>(it - junctions.begin());
}

std::vector<std::size_t> unreachable_vertices(const Digraph& g)
{
    std::vector<std::size_t> bad;
    if (g.empty()) {
        return bad;
    }
    auto fwd = reach(g, 0);
    auto bwd = reach(reversed(g), 0);
    for (std::size_t v = 0; v < g.size(); ++v) {
        if (!fwd[v] || !bwd[v]) {
            bad.push_back(v);
        }
    }
    return bad;
}

bool strongly_connected(const Digraph& g)
{
    return !g.empty() && unreachable_vertices(g).empty();
}

void validate(const GraphSpec& spec)
{
    if (spec.junctions.empty()) {
        throw ParseError("graph spec has no junction vertices");
    }
    std::set<std::string> ids;
    for (const auto& id : spec.junctions) {
        if (id.empty()) {
            throw ParseError("empty junction id");
        }
        if (!ids.insert(id).second) {
            throw ParseError("duplicate junction id '" + id + "'");
        }
    }
    std::set<std::pair<std::string, std::string>> seen_edges;
    for (const auto& e : spec.junction_edges) {
        if (!ids.count(e.from) || !ids.count(e.to)) {
            throw ParseError("junction edge " + e.from + "->" + e.to + " has a dangling endpoint");
        }
        if (!seen_edges.insert({e.from, e.to}).second) {
            throw ParseError("duplicate junction edge " + e.from + "->" + e.to);
        }
        mp::require_finite(e.weight, "junction edge weight");
    }
    if (spec.channels.empty()) {
        throw ParseError("graph spec has no channels");
    }
    for (std::size_t r = 0; r < spec.channels.size(); ++r) {
        const auto& c = spec.channels[r];
        std::string name = "channel " + std::to_string(r + 1);
        if (!ids.count(c.from)) {
            throw ParseError(name + ": dangling channel endpoint '" + c.from + "'");
        }
        if (!ids.count(c.to)) {
            throw ParseError(name + ": dangling channel endpoint '" + c.to + "'");
        }
        if (c.base_length < 1) {
            throw ParseError(name + ": base length must be >= 1");
        }
        if (c.beta.is_zero()) {
            throw ParseError(name + ": zero channel weight");
        }
        mp::require_finite(c.alpha, "channel alpha");
        mp::require_finite(c.beta, "channel beta");
    }
    auto bad = unreachable_vertices(spec_digraph(spec));
    if (!bad.empty()) {
        throw ParseError("graph is not irreducible: junction '" + spec.junctions[bad.front()] +
                         "' is not strongly connected to '" + spec.junctions.front() + "'");
    }
}

GraphSpec parse_spec(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("graph spec must be a JSON object");
    }
    GraphSpec spec;
    const json& js = field(doc, "junctions", "graph spec");
    if (!js.is_array()) {
        throw ParseError("'junctions' must be an array");
    }
    for (std::size_t i = 0; i < js.size(); ++i) {
        spec.junctions.push_back(string_field(js[i], "id", "junctions[" + std::to_string(i) + "]"));
    }
    if (doc.contains("junction_edges")) {
        const json& es = doc.at("junction_edges");
        if (!es.is_array()) {
            throw ParseError("'junction_edges' must be an array");
        }
        for (std::size_t i = 0; i < es.size(); ++i) {
            std::string where = "junction_edges[" + std::to_string(i) + "]";
            JunctionEdge e;
            e.from = string_field(es[i], "from", where);
            e.to = string_field(es[i], "to", where);
            e.weight = parse_complex(field(es[i], "weight", where), where);
            if (!e.weight.is_zero()) {
                spec.junction_edges.push_back(std::move(e));
            }
        }
    }
    const json& cs = field(doc, "channels", "graph spec");
    if (!cs.is_array()) {
        throw ParseError("'channels' must be an array");
    }
    for (std::size_t i = 0; i < cs.size(); ++i) {
        std::string where = "channels[" + std::to_string(i) + "]";
        ChannelSpec c;
        c.from = string_field(cs[i], "from", where);
        c.to = string_field(cs[i], "to", where);
        const json& e = field(cs[i], "e", where);
        if (!e.is_number_integer()) {
            throw ParseError(where + ": 'e' must be an integer");
        }
        c.base_length = e.get<long>();
        c.alpha = parse_complex(field(cs[i], "alpha", where), where + ".alpha");
        c.beta = parse_complex(field(cs[i], "beta", where), where + ".beta");
        spec.channels.push_back(std::move(c));
    }
    validate(spec);
    return spec;
}

GraphSpec load_spec(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open graph spec '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str());
}

std::string to_json(const GraphSpec& spec)
{
    json doc;
    doc["junctions"] = json::array();
    for (const auto& id : spec.junctions) {
        doc["junctions"].push_back({{"id", id}});
    }
    doc["junction_edges"] = json::array();
    for (const auto& e : spec.junction_edges) {
        doc["junction_edges"].push_back({{"from", e.from}, {"to", e.to}, {"weight", complex_json(e.weight)}});
    }
    doc["channels"] = json::array();
    for (const auto& c : spec.channels) {
        doc["channels"].push_back({{"from", c.from},
                                   {"to", c.to},
                                   {"e", c.base_length},
                                   {"alpha", complex_json(c.alpha)},
                                   {"beta", complex_json(c.beta)}});
    }
    return doc.dump(2);
}

// ---------------------------------------------------------------- decomposition

Digraph Decomposition::collapsed_graph() const
{
    Digraph g(collapsed_vertices);
    for (const auto& e : collapsed_edges) {
        g[e.from].push_back(e.to);
    }
    return g;
}

Decomposition decompose(const GraphSpec& spec)
{
    Decomposition d;
    d.channels = spec.channels;
    const std::size_t nj = spec.junctions.size();
    const std::size_t h = spec.channels.size();

    // Undirected components of the junction edges.
    std::vector<std::size_t> parent(nj);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    for (const auto& e : spec.junction_edges) {
        std::size_t a = find(spec.junction_index(e.from));
        std::size_t b = find(spec.junction_index(e.to));
        if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::map<std::size_t, std::size_t> block_id;
    d.block_of.resize(nj);
    for (std::size_t v = 0; v < nj; ++v) {
        std::size_t root = find(v);
        auto it = block_id.find(root);
        if (it == block_id.end()) {
            it = block_id.emplace(root, d.blocks.size()).first;
            d.blocks.emplace_back();
        }
        d.block_of[v] = it->second;
        d.blocks[it->second].push_back(v);
    }

    d.collapsed_vertices = h + nj;
    for (std::size_t r = 0; r < h; ++r) {
        d.collapsed_edges.push_back({h + spec.junction_index(spec.channels[r].from), r});
        d.collapsed_edges.push_back({r, h + spec.junction_index(spec.channels[r].to)});
    }
    for (const auto& e : spec.junction_edges) {
        std::size_t a = spec.junction_index(e.from);
        std::size_t b = spec.junction_index(e.to);
        if (a != b) {
            d.collapsed_edges.push_back({h + a, h + b});
        }
    }
    return d;
}

// ---------------------------------------------------------------- assembly

std::size_t AssembledMatrix::channel_row(std::size_t r, std::size_t position) const
{
    if (r >= channel_offset.size() || position >= channel_length[r]) {
        throw PreconditionError("channel position out of range");
    }
    return channel_offset[r] + position;
}

AssembledMatrix::Vertex AssembledMatrix::vertex(std::size_t row) const
{
    if (row >= dimension) {
        throw PreconditionError("row out of range");
    }
    if (row >= junction_offset) {
        return {false, row - junction_offset, 0};
    }
    auto it = std::upper_bound(channel_offset.begin(), channel_offset.end(), row);
    std::size_t r = static_cast<std::size_t>(it - channel_offset.begin()) - 1;
    return {true, r, row - channel_offset[r]};
}

Complex AssembledMatrix::at(std::size_t i, std::size_t j) const
{
    auto it = entries.find({i, j});
    return it == entries.end() ? Complex(kSpecPrecision) : it->second;
}

Complex AssembledMatrix::trace() const
{
    Complex t(kSpecPrecision);
    for (const auto& [ij, v] : entries) {
        if (ij.first == ij.second) {
            t += v;
        }
    }
    return t;
}

Digraph AssembledMatrix::digraph() const
{
    Digraph g(dimension);
    for (const auto& [ij, v] : entries) {
        if (ij.first != ij.second && !v.is_zero()) {
            g[ij.first].push_back(ij.second);
        }
    }
    return g;
}

AssembledMatrix assemble(const GraphSpec& spec, long n, std::size_t dimension_cap)
{
    if (n < 1) {
        throw PreconditionError("lengthening factor n must be >= 1");
    }
    AssembledMatrix m;
    m.n = n;
    std::size_t offset = 0;
    for (const auto& c : spec.channels) {
        // Guard the product before it can overflow.
        if (static_cast<double>(c.base_length) * static_cast<double>(n) > static_cast<double>(dimension_cap)) {
            throw PreconditionError("assembled dimension exceeds the cap of " + std::to_string(dimension_cap));
        }
        std::size_t len = static_cast<std::size_t>(c.base_length * n);
        m.channel_offset.push_back(offset);
        m.channel_length.push_back(len);
        offset += len;
        if (offset > dimension_cap) {
            throw PreconditionError("assembled dimension exceeds the cap of " + std::to_string(dimension_cap));
        }
    }
    m.junction_offset = offset;
    m.junction_count = spec.junctions.size();
    m.dimension = offset + m.junction_count;
    if (m.dimension > dimension_cap) {
        throw PreconditionError("assembled dimension exceeds the cap of " + std::to_string(dimension_cap));
    }

    for (std::size_t r = 0; r < spec.channels.size(); ++r) {
        const auto& c = spec.channels[r];
        const std::size_t first = m.channel_offset[r];
        const std::size_t len = m.channel_length[r];
        for (std::size_t i = 0; i < len; ++i) {
            if (!c.alpha.is_zero()) {
                m.entries[{first + i, first + i}] = c.alpha;
            }
            std::size_t next = i + 1 < len ? first + i + 1 : m.junction_row(spec.junction_index(c.to));
            m.entries[{first + i, next}] = c.beta;
        }
        m.entries[{m.junction_row(spec.junction_index(c.from)), first}] = c.beta;
    }
    for (const auto& e : spec.junction_edges) {
        m.entries[{m.junction_row(spec.junction_index(e.from)), m.junction_row(spec.junction_index(e.to))}] =
            e.weight;
    }
    return m;
}

// ---------------------------------------------------------------- import

GraphSpec import_matrix(std::size_t dim, const std::vector<MatrixEntry>& entries,
                        const std::vector<std::size_t>& junction_hint)
{
    std::vector<std::vector<std::pair<std::size_t, Complex>>> out(dim);
    std::vector<std::size_t> indeg(dim, 0);
    std::vector<Complex> diag(dim, Complex(kSpecPrecision));
    for (const auto& e : entries) {
        if (e.row >= dim || e.col >= dim) {
            throw ParseError("matrix entry out of range");
        }
        if (e.value.is_zero()) {
            continue;
        }
        if (e.row == e.col) {
            diag[e.row] = e.value;
        } else {
            out[e.row].emplace_back(e.col, e.value);
            ++indeg[e.col];
        }
    }
    std::vector<char> is_junction(dim, 0);
    for (std::size_t v = 0; v < dim; ++v) {
        is_junction[v] = !(indeg[v] == 1 && out[v].size() == 1);
    }
    for (std::size_t v : junction_hint) {
        if (v < dim) {
            is_junction[v] = 1;
        }
    }

    GraphSpec spec;
    std::vector<std::size_t> junction_pos(dim, 0);
    for (std::size_t v = 0; v < dim; ++v) {
        if (is_junction[v]) {
            junction_pos[v] = spec.junctions.size();
            spec.junctions.push_back("v" + std::to_string(v));
        }
    }
    if (spec.junctions.empty()) {
        throw ParseError("matrix is a pure cycle; mark at least one junction vertex");
    }

    struct Found {
        std::size_t first_row;
        ChannelSpec channel;
    };
    std::vector<Found> found;
    std::vector<char> visited(dim, 0);
    for (std::size_t j = 0; j < dim; ++j) {
        if (!is_junction[j]) {
            continue;
        }
        if (!diag[j].is_zero()) {
            spec.junction_edges.push_back({spec.junctions[junction_pos[j]], spec.junctions[junction_pos[j]], diag[j]});
        }
        for (const auto& [w, weight] : out[j]) {
            if (is_junction[w]) {
                spec.junction_edges.push_back({spec.junctions[junction_pos[j]], spec.junctions[junction_pos[w]], weight});
                continue;
            }
            ChannelSpec c;
            c.from = spec.junctions[junction_pos[j]];
            c.beta = weight;
            c.alpha = diag[w];
            long length = 0;
            std::size_t v = w;
            while (!is_junction[v]) {
                if (visited[v]) {
                    throw ParseError("channel chain revisits row " + std::to_string(v));
                }
                visited[v] = 1;
                if (!(diag[v] == c.alpha)) {
                    throw ParseError("channel through row " + std::to_string(v) + " has non-uniform diagonal");
                }
                const auto& [next, wt] = out[v].front();
                if (!(wt == c.beta)) {
                    throw ParseError("channel through row " + std::to_string(v) + " has non-uniform weights");
                }
                ++length;
                v = next;
            }
            c.to = spec.junctions[junction_pos[v]];
            c.base_length = length;
            found.push_back({w, std::move(c)});
        }
    }
    for (std::size_t v = 0; v < dim; ++v) {
        if (!is_junction[v] && !visited[v]) {
            throw ParseError("row " + std::to_string(v) + " lies on a cycle without junctions");
        }
    }
    std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) { return a.first_row < b.first_row; });
    for (auto& f : found) {
        spec.channels.push_back(std::move(f.channel));
    }
    validate(spec);
    return spec;
}

GraphSpec from_dense_matrix(const std::vector<std::vector<double>>& a)
{
    std::vector<MatrixEntry> entries;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != a.size()) {
            throw ParseError("adjacency matrix must be square");
        }
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (a[i][j] != 0.0) {
                entries.push_back({i, j, Complex(a[i][j], 0.0, kSpecPrecision)});
            }
        }
    }
    return import_matrix(a.size(), entries);
}

GraphSpec recollapse(const AssembledMatrix& m)
{
    std::vector<MatrixEntry> entries;
    entries.reserve(m.entries.size());
    for (const auto& [ij, v] : m.entries) {
        entries.push_back({ij.first, ij.second, v});
    }
    std::vector<std::size_t> hint(m.junction_count);
    std::iota(hint.begin(), hint.end(), m.junction_offset);
    return import_matrix(m.dimension, entries, hint);
}

} // namespace chanspec
