#include "khb/serialization.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace khb {

namespace {

std::string edge_key(const CubeVertex& u, const CubeVertex& v) { return u.to_string() + ">" + v.to_string(); }

std::vector<SpanElement> elements_from_json(const json& arr, const FiniteSet& src, const FiniteSet& dst) {
  std::vector<SpanElement> out;
  for (const auto& e : arr) {
    auto s = src.find(e.at("s").get<std::string>());
    auto t = dst.find(e.at("t").get<std::string>());
    if (!s || !t) throw std::invalid_argument("edge element '" + e.at("id").get<std::string>() + "' has an unknown endpoint");
    out.push_back({e.at("id").get<std::string>(), *s, *t});
  }
  return out;
}

// Splits "top>bottom via m1|m2".
struct FaceKey {
  CubeVertex top, bottom, m1, m2;
};

FaceKey parse_face_key(const std::string& key) {
  auto gt = key.find('>');
  auto via = key.find(" via ");
  auto bar = key.find('|');
  if (gt == std::string::npos || via == std::string::npos || bar == std::string::npos || !(gt < via && via < bar))
    throw std::invalid_argument("malformed face key '" + key + "'");
  return {CubeVertex::parse(key.substr(0, gt)), CubeVertex::parse(key.substr(gt + 1, via - gt - 1)),
          CubeVertex::parse(key.substr(via + 5, bar - via - 5)), CubeVertex::parse(key.substr(bar + 1))};
}

}  // namespace

std::pair<CubeFace2, bool> face_from_key(const std::string& key, int n) {
  FaceKey fk = parse_face_key(key);
  if (fk.top.dim() != n || fk.bottom.dim() != n || fk.m1.dim() != n || fk.m2.dim() != n || !is_edge(fk.top, fk.m1) ||
      !is_edge(fk.top, fk.m2) || !is_edge(fk.m1, fk.bottom) || !is_edge(fk.m2, fk.bottom) || fk.m1 == fk.m2)
    throw std::invalid_argument("face key '" + key + "' is not a 2-face");
  int i = CubeEdge{fk.top, fk.m1}.coordinate();
  int k = CubeEdge{fk.top, fk.m2}.coordinate();
  return {CubeFace2::at(fk.top, std::min(i, k), std::max(i, k)), i > k};
}

StableFunctor functor_from_json(const json& j) {
  try {
    int n = j.at("n").get<int>();
    StableFunctor out{CubeFunctor(n), j.value("shift", 0)};
    CubeFunctor& f = out.functor;
    if (j.contains("vertices"))
      for (const auto& [key, ids] : j.at("vertices").items()) {
        CubeVertex v = CubeVertex::parse(key);
        if (v.dim() != n) throw std::invalid_argument("vertex '" + key + "' has the wrong length");
        f.set_set(v, make_set(ids.get<std::vector<std::string>>()));
      }
    if (j.contains("edges"))
      for (const auto& [key, arr] : j.at("edges").items()) {
        auto gt = key.find('>');
        if (gt == std::string::npos) throw std::invalid_argument("malformed edge key '" + key + "'");
        CubeVertex u = CubeVertex::parse(key.substr(0, gt));
        CubeVertex v = CubeVertex::parse(key.substr(gt + 1));
        if (u.dim() != n || v.dim() != n || !is_edge(u, v)) throw std::invalid_argument("'" + key + "' is not an edge");
        f.set_edge(u, v, elements_from_json(arr, f.set(u), f.set(v)));
      }
    if (j.contains("faces")) {
      std::map<std::string, std::map<std::string, std::string>> canonical;
      std::map<std::string, std::map<std::string, std::string>> reversed;
      for (const auto& [key, obj] : j.at("faces").items()) {
        auto [face, rev] = face_from_key(key, n);
        auto map = obj.get<std::map<std::string, std::string>>();
        (rev ? reversed : canonical)[describe_face(face)] = map;
      }
      for (const auto& face : all_faces2(n)) {
        std::string key = describe_face(face);
        auto c = canonical.find(key);
        auto r = reversed.find(key);
        if (c == canonical.end() && r == reversed.end()) continue;
        Correspondence a = f.face_composite_correspondence(face, true);
        Correspondence b = f.face_composite_correspondence(face, false);
        std::map<std::string, std::string> forward;
        if (c != canonical.end()) forward = c->second;
        if (r != reversed.end()) {
          std::map<std::string, std::string> inverted;
          for (const auto& [x, y] : r->second) inverted[y] = x;
          if (c != canonical.end() && inverted != forward)
            throw std::invalid_argument("face " + key + ": the two orientations are not inverse");
          forward = inverted;
        }
        if (forward.size() != a.size()) throw std::invalid_argument("face " + key + ": matching is not total");
        std::vector<std::size_t> map;
        for (const auto& e : a.elements()) {
          auto it = forward.find(e.id);
          if (it == forward.end()) throw std::invalid_argument("face " + key + ": no image for '" + e.id + "'");
          auto idx = b.find(it->second);
          if (!idx) throw std::invalid_argument("face " + key + ": unknown composite '" + it->second + "'");
          map.push_back(*idx);
        }
        f.set_face_matching(face, std::move(map));
      }
    }
    return out;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed functor JSON: ") + e.what());
  }
}

json functor_to_json(const StableFunctor& sf) {
  const CubeFunctor& f = sf.functor;
  json j;
  j["n"] = f.dim();
  j["shift"] = sf.shift;
  json vertices = json::object();
  auto all = all_vertices(f.dim());
  for (auto it = all.rbegin(); it != all.rend(); ++it)
    if (!f.set(*it).empty()) vertices[it->to_string()] = f.set(*it).elements();
  j["vertices"] = vertices;
  json edges = json::object();
  for (const auto& e : all_edges(f.dim())) {
    const auto& c = f.edge(e.upper, e.lower);
    if (c.size() == 0) continue;
    json arr = json::array();
    for (const auto& x : c.elements())
      arr.push_back({{"id", x.id}, {"s", c.source_set()[x.s]}, {"t", c.target_set()[x.t]}});
    edges[edge_key(e.upper, e.lower)] = arr;
  }
  j["edges"] = edges;
  json faces = json::object();
  for (const auto& face : all_faces2(f.dim())) {
    if (!f.has_face_matching(face)) continue;
    auto bij = f.face_bijection(face);
    if (bij.map.empty()) continue;
    json m = json::object();
    for (std::size_t i = 0; i < bij.map.size(); ++i) m[bij.from[i].id] = bij.to[bij.map[i]].id;
    faces[describe_face(face)] = m;
  }
  j["faces"] = faces;
  return j;
}

FiniteSet set_from_json(const json& j) { return FiniteSet(j.get<std::vector<std::string>>()); }
json set_to_json(const FiniteSet& s) { return s.elements(); }

Correspondence correspondence_from_json(const json& j) {
  try {
    SetPtr src = make_set(j.at("source").get<std::vector<std::string>>());
    SetPtr dst = make_set(j.at("target").get<std::vector<std::string>>());
    return Correspondence(src, dst, elements_from_json(j.at("elements"), *src, *dst));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed correspondence JSON: ") + e.what());
  }
}

json correspondence_to_json(const Correspondence& c) {
  json elements = json::array();
  for (const auto& x : c.elements())
    elements.push_back({{"id", x.id}, {"s", c.source_set()[x.s]}, {"t", c.target_set()[x.t]}});
  return {{"source", c.source_set().elements()}, {"target", c.target_set().elements()}, {"elements", elements}};
}

json homology_to_json(const std::map<int, HomologyGroup>& h) {
  json arr = json::array();
  for (const auto& [deg, g] : h) arr.push_back({{"degree", deg}, {"rank", g.rank}, {"torsion", g.torsion}});
  return arr;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("'" + path + "': " + e.what());
  }
}

}  // namespace khb
