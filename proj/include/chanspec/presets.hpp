#pragma once

#include "chanspec/graph.hpp"
#include "chanspec/limitset.hpp"

#include <string>
#include <vector>

namespace chanspec::presets {

// Graph presets.
GraphSpec h2k1();
GraphSpec h3k1();
GraphSpec h2k2();
GraphSpec h2k2_weak();
GraphSpec three();
/// One two-point junction and one channel; A(n) has dimension n e + 2.
GraphSpec hk1(const Complex& a, const Complex& b, const Complex& c, const Complex& d, long e = 1);
/// hk1 with a = b = d = 0, c = 1: the cyclic shift of size n e + 2.
GraphSpec cycle(long e = 1);
/// Junction cycle 1 -> 2 -> ... -> 2h -> 1 with one chord channel i -> i+1 per i <= h.
GraphSpec chords(std::size_t h);

// Direct families F_n = sum_r a_r f_r^n.
AnalyticFamily limset(double a = 1.0, double b = -1.0, double alpha = 1.0, double beta = 1.0, double gamma = 1.0);
AnalyticFamily limset2(double a, double alpha = 1.0, double gamma = 1.0);
AnalyticFamily tworings();
AnalyticFamily interlockrings();
/// (z^2 - 1)^n - c.
AnalyticFamily closing(double c = 0.7);

struct Preset {
    std::string name;
    bool is_graph;
    std::string summary;
};

const std::vector<Preset>& catalogue();
bool is_graph_preset(const std::string& name);
bool is_family_preset(const std::string& name);
/// Throws PreconditionError for unknown names.
GraphSpec graph_preset(const std::string& name);
AnalyticFamily family_preset(const std::string& name);

} // namespace chanspec::presets
