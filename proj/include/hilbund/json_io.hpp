#pragma once

#include <json.hpp>
#include <string>

#include "hilbund/bundle.hpp"
#include "hilbund/hyperspace.hpp"
#include "hilbund/loewner.hpp"
#include "hilbund/renorming.hpp"
#include "hilbund/seminorm.hpp"

namespace hilbund {

using Json = nlohmann::json;

// All schemas are versioned through the report envelope ("schema_version")
// and documented in docs/schemas.md.

Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j);
Json mat_to_json(const Mat& m);  // row-major nested arrays
Mat mat_from_json(const Json& j);

Json body_to_json(const SymmetricBody& body);
SymmetricBody body_from_json(const Json& j);

Json subspace_to_json(const Subspace& s);
Subspace subspace_from_json(const Json& j);

Json ellipsoid_to_json(const Ellipsoid& e);
Ellipsoid ellipsoid_from_json(const Json& j);

Json bundle_to_json(const Bundle& b);
Bundle bundle_from_json(const Json& j);

Json stratification_to_json(const Stratification& s);

Json certificate_to_json(const LoewnerCertificate& c);
Json distortion_to_json(const DistortionReport& r);

Json renorming_to_json(const Renorming& r);
Json lsc_report_to_json(const LscReport& r);
Json selection_to_json(const Selection& s);

Json metric_space_to_json(const FiniteMetricSpace& m);
FiniteMetricSpace metric_space_from_json(const Json& j);

Json hyperspace_to_json(const Hyperspace& h);
Json incidence_to_json(const IncidenceSpace& inc);

Json cover_to_json(const AnchoredCover& c);
AnchoredCover cover_from_json(const Json& j);

Json subset_map_to_json(const std::map<std::string, SubsetPoint>& g,
                        const FiniteMetricSpace& z);
std::map<std::string, SubsetPoint> subset_map_from_json(
    const Json& j, const FiniteMetricSpace& z);

Json roundtrip_to_json(const RoundtripReport& r);

Json selection_table_to_json(const ConvexSelection& sel);
ConvexSelection convex_selection_from_json(const Json& j);

Json continuity_to_json(const ContinuityReport& r);

// Report envelope shared by every subcommand. Timings sit in their own
// section so determinism checks can strip them.
Json make_report(const std::string& command, Json config, Json results);
void attach_timing(Json* report, const std::string& label, double seconds);

// Serialize with a stable layout and write atomically (temp + rename);
// "-" writes to stdout.
std::string dump_report(const Json& report);
void write_report(const std::string& path, const Json& report);

Json read_json_input(const std::string& path);  // "-" reads stdin

}  // namespace hilbund
