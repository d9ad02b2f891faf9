#pragma once

#include <string>

#include <json.hpp>

#include "legmcs/enumerate.hpp"
#include "legmcs/mcs.hpp"
#include "legmcs/sheaf.hpp"

namespace legmcs {

using Json = nlohmann::ordered_json;

/// MCS file format (formatVersion 1): {prime, front, maslovBaseline,
/// intervals: [[ [j,i,value], ... ] per refined interval], extraSlides:
/// [{afterEvent, matrix}]}. Indices are 1-based; omitted entries are zero.
Json mcs_to_json(const MCSObject& s);
MCSObject mcs_from_json(const Json& j);

MCSObject load_mcs_file(const std::string& path);
FrontDiagram load_front_file(const std::string& path);

Json diagnostics_to_json(const std::vector<Diagnostic>& diags);
Json front_invariants_to_json(const ClassicalInvariants& inv);
Json barcodes_to_json(const MCSObject& s);
Json microsupport_to_json(const MicrosupportReport& rep);
Json cohomology_to_json(const std::vector<std::pair<int, int>>& table);
Json end_ring_to_json(const EndRingReport& rep);
Json enumeration_to_json(const FrontDiagram& front, const Field& F,
                         const EnumerationResult& result, const IsoClasses& classes,
                         bool include_representatives);

}  // namespace legmcs
