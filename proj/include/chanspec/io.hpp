#pragma once

#include "chanspec/limitset.hpp"
#include "chanspec/pencil.hpp"
#include "chanspec/spectra.hpp"

#include <json.hpp>

#include <string>

namespace chanspec::io {

using Json = nlohmann::ordered_json;

/// %.17g
std::string num(double x);

Json complex_json(cplx z);
Json arcs_json(const LimitSet& ls, const AnalyticFamily& fam);
Json isolated_json(const LimitSet& ls, const AnalyticFamily& fam);
Json limitset_json(const LimitSet& ls, const AnalyticFamily& fam);
Json decomposition_json(const GraphSpec& spec, const Decomposition& d, const SubsetFamily& sf);
Json identity_json(const IdentityReport& rep);
Json localization_json(const LocalizationReport& rep);

std::string arcs_csv(const LimitSet& ls);
std::string isolated_csv(const LimitSet& ls);
std::string eigenvalues_csv(const SpectrumResult& r);
std::string resolvent_csv(const ResolventGrid& g);

void write_text(const std::string& path, const std::string& content);

} // namespace chanspec::io
