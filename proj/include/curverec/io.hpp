#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "curverec/densify.hpp"
#include "curverec/observe.hpp"
#include "curverec/perspective.hpp"
#include "curverec/scene.hpp"
#include "curverec/solver.hpp"

namespace curverec {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

// Serializes with every floating-point number printed as %.17g. Throws
// FormatError on non-finite numbers.
std::string dump_json(const Json& j);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
void write_json_file(const std::string& path, const Json& j);

// Each *_from_json throws FormatError on a missing field, a wrong type or a
// schema version other than kSchemaVersion.
Json scene_to_json(const Scene& scene);
Scene scene_from_json(const Json& j);

Json frames_to_json(const std::vector<FrameImage>& frames);
std::vector<FrameImage> frames_from_json(const Json& j);

Json observations_to_json(const std::vector<FrameObservation>& obs);
std::vector<FrameObservation> observations_from_json(const Json& j);

Json solution_to_json(const SolveReport& report);
SolveReport solution_from_json(const Json& j);

Json curve3d_to_json(const ReconstructedCurve& curve);
ReconstructedCurve curve3d_from_json(const Json& j);

Json pairs_to_json(const std::vector<CorrespondencePair>& pairs);
std::vector<CorrespondencePair> pairs_from_json(const Json& j);

Json view_to_json(const PlanarSceneView& view);
PlanarSceneView view_from_json(const Json& j);

// {v, views: [view, view]}
Json views_to_json(const PlanarSceneView& view1, const PlanarSceneView& view2);
std::pair<PlanarSceneView, PlanarSceneView> views_from_json(const Json& j);

}  // namespace curverec
