#pragma once

#include <map>
#include <string>
#include <utility>

#include <json.hpp>

#include "khb/chain_complex.hpp"
#include "khb/functor.hpp"

namespace khb {

using json = nlohmann::ordered_json;

/// Reads {"n", "shift", "vertices", "edges", "faces"}. Missing vertices and
/// edges are empty; face keys may use either orientation "top>bottom via
/// m|m'", and when both orientations are present they must be inverse.
/// Throws std::invalid_argument on malformed input.
StableFunctor functor_from_json(const json& j);
json functor_to_json(const StableFunctor& f);

/// The face named by "top>bottom via m|m'" on C(n), and whether the key
/// lists the middle vertices against the canonical orientation.
std::pair<CubeFace2, bool> face_from_key(const std::string& key, int n);

FiniteSet set_from_json(const json& j);
json set_to_json(const FiniteSet& s);
/// {"source":[...],"target":[...],"elements":[{"id","s","t"}]}.
Correspondence correspondence_from_json(const json& j);
json correspondence_to_json(const Correspondence& c);

json homology_to_json(const std::map<int, HomologyGroup>& h);

/// Parses a file; throws std::invalid_argument with the path on failure.
json read_json_file(const std::string& path);

}  // namespace khb
