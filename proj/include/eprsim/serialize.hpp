#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "eprsim/fusion.hpp"
#include "eprsim/ghz.hpp"
#include "eprsim/sources.hpp"
#include "eprsim/threshold.hpp"

namespace eprsim {

using Json = nlohmann::ordered_json;

// States: a list of branches, each {weight, components: [{basis, re, im}]}.
// Doubles round-trip exactly through the JSON layer.
Json state_to_json(const Ensemble& ens);
Ensemble state_from_json(const Json& j);

Json element_to_json(const Element& elem);
Element element_from_json(const Json& j);

Json layout_to_json(const GhzCircuitLayout& layout);
GhzCircuitLayout layout_from_json(const Json& j);

Json source_to_json(const SourceSpec& spec);
SourceSpec source_from_json(const Json& j);

Json detector_to_json(const DetectorModel& det);
DetectorModel detector_from_json(const Json& j);

Json result_to_json(const ConditionalResult& result);
Json report_to_json(const OutputReport& report);
Json fusion_outcomes_to_json(const std::vector<FusionOutcome>& outcomes);

Json sweep_spec_to_json(const SweepSpec& spec);
SweepSpec sweep_spec_from_json(const Json& j);

std::string bell_form_name(BellForm form);
BellForm bell_form_from_name(const std::string& name);

}  // namespace eprsim
