#include "khb/nat_trans.hpp"

#include <map>
#include <numeric>
#include <stdexcept>

namespace khb {

namespace {

CubeVertex lift(int bit, const CubeVertex& v) {
  return CubeVertex(v.dim() + 1, (static_cast<std::uint32_t>(bit) << v.dim()) | v.bits());
}

std::string identity_id(const std::string& id) { return id; }

}  // namespace

FaceInclusion slice_inclusion(int n, int bit) {
  std::vector<int> coords(static_cast<std::size_t>(n));
  std::iota(coords.begin(), coords.end(), 2);
  return FaceInclusion(CubeVertex(n + 1, static_cast<std::uint32_t>(bit) << n), std::move(coords));
}

CubeFunctor NaturalTransformation::source() const { return pull_back(ambient, slice_inclusion(dim(), 1)); }
CubeFunctor NaturalTransformation::target() const { return pull_back(ambient, slice_inclusion(dim(), 0)); }

const Correspondence& NaturalTransformation::component(const CubeVertex& v) const {
  return ambient.edge(lift(1, v), lift(0, v));
}

NaturalTransformation build_nat_trans(const CubeFunctor& f, const CubeFunctor& g,
                                      const std::vector<std::vector<SpanElement>>& components,
                                      const MixedMatchingFn& mixed) {
  if (f.dim() != g.dim()) throw std::invalid_argument("natural transformation between functors on different cubes");
  const int n = f.dim();
  if (components.size() != (std::size_t{1} << n)) throw std::invalid_argument("one component per vertex required");
  NaturalTransformation eta{CubeFunctor(n + 1)};
  CubeFunctor& h = eta.ambient;
  for (const auto& v : all_vertices(n)) {
    h.set_set(lift(1, v), f.set_ptr(v));
    h.set_set(lift(0, v), g.set_ptr(v));
  }
  for (const auto& e : all_edges(n)) {
    h.set_edge(lift(1, e.upper), lift(1, e.lower), f.edge(e.upper, e.lower).elements());
    h.set_edge(lift(0, e.upper), lift(0, e.lower), g.edge(e.upper, e.lower).elements());
  }
  for (const auto& v : all_vertices(n)) h.set_edge(lift(1, v), lift(0, v), components[v.index()]);
  for (const auto& face : all_faces2(n)) {
    CubeFace2 up = CubeFace2::at(lift(1, face.top), face.coord_lo + 1, face.coord_hi + 1);
    CubeFace2 down = CubeFace2::at(lift(0, face.top), face.coord_lo + 1, face.coord_hi + 1);
    if (f.has_face_matching(face)) h.set_face_matching(up, f.face_matching(face));
    if (g.has_face_matching(face)) h.set_face_matching(down, g.face_matching(face));
  }
  for (const auto& v : all_vertices(n))
    for (int j = 1; j <= n; ++j) {
      if (!v.bit(j)) continue;
      CubeFace2 face = CubeFace2::at(lift(1, v), 1, j + 1);
      std::optional<std::vector<std::size_t>> map;
      if (mixed) map = mixed(h, face);
      if (!map) map = unique_matching(h, face);
      if (!map) throw std::invalid_argument("mixed face " + describe_face(face) + " has no determined matching");
      h.set_face_matching(face, std::move(*map));
    }
  ValidationReport c0 = validate_c0(h);
  if (!c0.ok) throw std::invalid_argument("natural transformation fails C-0: " + c0.violations.front());
  ValidationReport coh = validate_coherence(h);
  if (!coh.ok) throw std::invalid_argument("natural transformation is not coherent: " + coh.violations.front());
  return eta;
}

NaturalTransformation identity_transformation(const CubeFunctor& f) {
  std::vector<std::vector<std::size_t>> embed;
  for (const auto& v : all_vertices(f.dim())) {
    embed.emplace_back(f.set(v).size());
    std::iota(embed.back().begin(), embed.back().end(), 0);
  }
  return inclusion_transformation(f, f, embed);
}

NaturalTransformation inclusion_transformation(const CubeFunctor& a, const CubeFunctor& b,
                                               const std::vector<std::vector<std::size_t>>& embed,
                                               const IdMap& edge_id) {
  IdMap translate = edge_id ? edge_id : IdMap(identity_id);
  std::vector<std::vector<SpanElement>> components;
  for (const auto& v : all_vertices(a.dim())) {
    std::vector<SpanElement> c;
    for (std::size_t x = 0; x < a.set(v).size(); ++x) c.push_back({a.set(v)[x], x, embed[v.index()][x]});
    components.push_back(std::move(c));
  }
  // via_a: component then an edge of B; via_b: an edge of A then component.
  MixedMatchingFn mixed = [&](const CubeFunctor& h, const CubeFace2& face) -> std::optional<std::vector<std::size_t>> {
    const auto& b_edge = h.edge(face.mid_a, face.bottom);
    const auto& a_edge = h.edge(face.top, face.mid_b);
    return matching_by_keys(
        h, face, [&](const CompositePair& p) { return b_edge[p.first].id; },
        [&](const CompositePair& p) { return translate(a_edge[p.second].id); });
  };
  return build_nat_trans(a, b, components, mixed);
}

NaturalTransformation projection_transformation(const CubeFunctor& b, const CubeFunctor& q,
                                                const std::vector<std::vector<std::size_t>>& embed,
                                                const IdMap& edge_id) {
  IdMap translate = edge_id ? edge_id : IdMap(identity_id);
  std::vector<std::vector<SpanElement>> components;
  for (const auto& v : all_vertices(q.dim())) {
    std::vector<SpanElement> c;
    for (std::size_t y = 0; y < q.set(v).size(); ++y) c.push_back({q.set(v)[y], embed[v.index()][y], y});
    components.push_back(std::move(c));
  }
  // via_a: component then an edge of Q; via_b: an edge of B then component.
  MixedMatchingFn mixed = [&](const CubeFunctor& h, const CubeFace2& face) -> std::optional<std::vector<std::size_t>> {
    const auto& q_edge = h.edge(face.mid_a, face.bottom);
    const auto& b_edge = h.edge(face.top, face.mid_b);
    return matching_by_keys(
        h, face, [&](const CompositePair& p) { return translate(q_edge[p.first].id); },
        [&](const CompositePair& p) { return b_edge[p.second].id; });
  };
  return build_nat_trans(b, q, components, mixed);
}

namespace {

std::vector<std::vector<std::size_t>> subset_embedding(const ElementSubset& s) {
  std::vector<std::vector<std::size_t>> embed;
  for (const auto& row : s) {
    embed.emplace_back();
    for (std::size_t i = 0; i < row.size(); ++i)
      if (row[i]) embed.back().push_back(i);
  }
  return embed;
}

}  // namespace

NaturalTransformation sub_inclusion(const CubeFunctor& f, const ElementSubset& s) {
  return inclusion_transformation(sub_functor(f, s), f, subset_embedding(s));
}

QuotientResult quotient_functor(const CubeFunctor& f, const ElementSubset& s) {
  CubeFunctor q = quotient_restriction(f, s);
  NaturalTransformation p = projection_transformation(f, q, subset_embedding(s));
  return {std::move(q), std::move(p)};
}

GluedZigZag glue_along_top(const NaturalTransformation& eta, const NaturalTransformation& eta_prime) {
  if (eta.dim() != eta_prime.dim()) throw std::invalid_argument("gluing transformations on different cubes");
  const int n = eta.dim();
  CubeFunctor g = eta.source();
  if (!same_functor_data(g, eta_prime.source()))
    throw std::invalid_argument("transformations to glue have different sources");
  CubeFunctor f = eta.target();
  CubeFunctor f2 = eta_prime.target();
  CubeFunctor bottom = coproduct(f, f2);

  std::vector<std::vector<SpanElement>> components;
  for (const auto& v : all_vertices(n)) {
    std::vector<SpanElement> c;
    for (const auto& x : eta.component(v).elements()) c.push_back({"0:" + x.id, x.s, x.t});
    for (const auto& x : eta_prime.component(v).elements())
      c.push_back({"1:" + x.id, x.s, x.t + f.set(v).size()});
    components.push_back(std::move(c));
  }
  // A mixed element of H comes from η or η' (its prefix); transport it with
  // that transformation's matching and compare by ids.
  const NaturalTransformation* parts[2] = {&eta, &eta_prime};
  MixedMatchingFn mixed = [&](const CubeFunctor& h, const CubeFace2& face) -> std::optional<std::vector<std::size_t>> {
    const auto& low = h.edge(face.mid_a, face.bottom);
    const auto& comp_top = h.edge(face.top, face.mid_a);
    const auto& g_edge = h.edge(face.top, face.mid_b);
    const auto& comp_bottom = h.edge(face.mid_b, face.bottom);
    std::map<std::string, std::string> image[2];
    for (int k = 0; k < 2; ++k) {
      const CubeFunctor& amb = parts[k]->ambient;
      auto a = amb.face_composite(face, true);
      auto b = amb.face_composite(face, false);
      const auto& m = amb.face_matching(face);
      const auto& a2 = amb.edge(face.mid_a, face.bottom);
      const auto& a1 = amb.edge(face.top, face.mid_a);
      const auto& b2 = amb.edge(face.mid_b, face.bottom);
      const auto& b1 = amb.edge(face.top, face.mid_b);
      for (std::size_t i = 0; i < a.size(); ++i)
        image[k].emplace(a2[a[i].first].id + "|" + a1[a[i].second].id,
                         b2[b[m[i]].first].id + "|" + b1[b[m[i]].second].id);
    }
    return matching_by_keys(
        h, face,
        [&](const CompositePair& p) {
          const std::string& e2 = low[p.first].id;
          const std::string& e1 = comp_top[p.second].id;
          int k = e2[0] - '0';
          return std::to_string(k) + "|" + image[k].at(e2.substr(2) + "|" + e1.substr(2));
        },
        [&](const CompositePair& p) {
          const std::string& e2 = comp_bottom[p.first].id;
          const std::string& e1 = g_edge[p.second].id;
          return e2.substr(0, 1) + "|" + e2.substr(2) + "|" + e1;
        });
  };
  NaturalTransformation glued = build_nat_trans(g, bottom, components, mixed);

  FaceInclusion iota = slice_inclusion(n, 0);
  CubeFunctor f_iota = extend_along_face_inclusion(f, iota);
  CubeFunctor f2_iota = extend_along_face_inclusion(f2, iota);
  std::vector<std::vector<std::size_t>> embed(std::size_t{1} << (n + 1));
  std::vector<std::vector<std::size_t>> embed2(std::size_t{1} << (n + 1));
  for (const auto& v : all_vertices(n)) {
    auto& e = embed[lift(0, v).index()];
    auto& e2 = embed2[lift(0, v).index()];
    for (std::size_t x = 0; x < f.set(v).size(); ++x) e.push_back(x);
    for (std::size_t x = 0; x < f2.set(v).size(); ++x) e2.push_back(x + f.set(v).size());
  }
  NaturalTransformation theta =
      inclusion_transformation(f_iota, glued.ambient, embed, [](const std::string& id) { return "0:" + id; });
  NaturalTransformation theta_prime =
      inclusion_transformation(f2_iota, glued.ambient, embed2, [](const std::string& id) { return "1:" + id; });
  return {std::move(glued.ambient), std::move(theta), std::move(theta_prime)};
}

}  // namespace khb
