#pragma once

// JSON encodings of the library's records. Decoders validate as they go and
// raise ValidationError messages prefixed with the offending field path.

#include <string>

#include "json.hpp"
#include "umorse/curve.hpp"
#include "umorse/energy.hpp"
#include "umorse/flow.hpp"
#include "umorse/geodesics.hpp"
#include "umorse/space.hpp"

namespace umorse {

using Json = nlohmann::json;

SpaceSpec space_from_json(const Json& j, const std::string& path = "space");
Json to_json(const SpaceSpec& space);

Point point_from_json(const SpaceSpec& space, const Json& j, const std::string& path);
Json to_json(const Point& p);

Vec vec_from_json(const Json& j, const std::string& path, int dim = -1);
Json to_json(const Vec& v);

Configuration configuration_from_json(const SpaceSpec& space, const Json& j, const std::string& path);
Json to_json(const Configuration& x);

ConfigTangent tangent_from_json(const Configuration& x, const Json& j, const std::string& path);
Json to_json(const ConfigTangent& v);

ClosedGeodesic geodesic_from_json(const SpaceSpec& space, const Json& j, const std::string& path);
Json to_json(const ClosedGeodesic& g);

VariationSpec variation_from_json(const SpaceSpec& space, const Json& j, const std::string& path);
Json to_json(const VariationSpec& v);

FlowParams params_from_json(const Json& j, FlowParams defaults, const std::string& path = "params");
Json to_json(const FlowParams& p);

Json to_json(const MinGeodesic& g);
Json to_json(const CandidateGradient& c);
Json to_json(const HessianReport& h);
Json to_json(const MinindResult& m);
Json to_json(const CutPair& c);
Json to_json(const VariationProfile& p);
Json to_json(const FlowTrace& t);
Json to_json(const RestartReport& r);

}  // namespace umorse
