#pragma once

#include "chanspec/mp.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace chanspec {

using mp::Complex;

/// Precision used to hold spec values; decimal strings are parsed at this width.
inline constexpr mp::Precision kSpecPrecision = 512;

struct ChannelSpec {
    std::string from; // b~_r
    std::string to;   // e~_r
    long base_length = 1;
    Complex alpha{kSpecPrecision};
    Complex beta{kSpecPrecision};
};

struct JunctionEdge {
    std::string from;
    std::string to;
    Complex weight{kSpecPrecision};
};

struct GraphSpec {
    std::vector<std::string> junctions;
    std::vector<JunctionEdge> junction_edges;
    std::vector<ChannelSpec> channels;

    std::size_t h() const { return channels.size(); }
    std::size_t junction_index(const std::string& id) const; // throws on unknown ids
};

/// Checks every invariant; throws ParseError naming the offending element.
void validate(const GraphSpec& spec);

GraphSpec parse_spec(const std::string& json_text);
GraphSpec load_spec(const std::string& path);
std::string to_json(const GraphSpec& spec);

/// Directed adjacency lists; used for strong-connectivity checks.
using Digraph = std::vector<std::vector<std::size_t>>;

bool strongly_connected(const Digraph& g);
/// Vertices that cannot reach, or be reached from, vertex 0.
std::vector<std::size_t> unreachable_vertices(const Digraph& g);

struct CollapsedEdge {
    std::size_t from;
    std::size_t to;
};

struct Decomposition {
    std::vector<ChannelSpec> channels;
    /// Blocks J_i as sorted lists of junction indices.
    std::vector<std::vector<std::size_t>> blocks;
    /// Block id of each junction index.
    std::vector<std::size_t> block_of;
    /// Collapsed graph on p_1..p_h followed by the junction vertices.
    std::size_t collapsed_vertices = 0;
    std::vector<CollapsedEdge> collapsed_edges;

    Digraph collapsed_graph() const;
};

Decomposition decompose(const GraphSpec& spec);

struct MatrixEntry {
    std::size_t row;
    std::size_t col;
    Complex value;
};

/// A(n) in sparse form. Rows: channel 1 positions, ..., channel h positions, junctions.
struct AssembledMatrix {
    std::size_t dimension = 0;
    long n = 1;
    std::map<std::pair<std::size_t, std::size_t>, Complex> entries;
    std::vector<std::size_t> channel_offset;
    std::vector<std::size_t> channel_length;
    std::size_t junction_offset = 0;
    std::size_t junction_count = 0;

    std::size_t channel_row(std::size_t r, std::size_t position) const; // 0-based position
    std::size_t junction_row(std::size_t j) const { return junction_offset + j; }

    struct Vertex {
        bool is_channel;
        std::size_t index;    // channel r or junction j
        std::size_t position; // 0-based, channels only
    };
    Vertex vertex(std::size_t row) const;

    Complex at(std::size_t i, std::size_t j) const;
    Complex trace() const;
    Digraph digraph() const;
};

inline constexpr std::size_t kDefaultDimensionCap = 1000000;

AssembledMatrix assemble(const GraphSpec& spec, long n,
                         std::size_t dimension_cap = kDefaultDimensionCap);

/// Recovers a GraphSpec from a square matrix by detecting degree-2 chains.
///
/// Vertices with in- and out-degree one (ignoring the diagonal) become channel
/// interiors; all others are junctions. `junction_hint` forces extra vertices to
/// be junctions. Each recovered chain must have uniform diagonal and edge weights.
GraphSpec import_matrix(std::size_t dimension, const std::vector<MatrixEntry>& entries,
                        const std::vector<std::size_t>& junction_hint = {});

/// Unweighted-adjacency convenience wrapper over import_matrix.
GraphSpec from_dense_matrix(const std::vector<std::vector<double>>& a);

/// Collapse an assembled matrix back to its channel/junction form.
GraphSpec recollapse(const AssembledMatrix& m);

} // namespace chanspec
