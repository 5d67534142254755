#include "khb/functor_ops.hpp"

#include <map>
#include <stdexcept>
#include <unordered_map>

namespace khb {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

std::uint64_t pair_key(std::size_t e2, std::size_t e1) {
  return (static_cast<std::uint64_t>(e2) << 32) | static_cast<std::uint64_t>(e1);
}

std::unordered_map<std::uint64_t, std::size_t> index_pairs(const std::vector<CompositePair>& pairs) {
  std::unordered_map<std::uint64_t, std::size_t> out;
  out.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) out.emplace(pair_key(pairs[i].first, pairs[i].second), i);
  return out;
}

std::vector<std::size_t> invert(const std::vector<std::size_t>& map) {
  std::vector<std::size_t> inv(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) inv[map[i]] = i;
  return inv;
}

// Copies the matchings of `src` on C(n) to `dst` along the vertex map `iota`.
// A face whose coordinates are listed in decreasing order swaps its mids.
void copy_faces_along(const CubeFunctor& src, CubeFunctor& dst, const FaceInclusion& iota, bool forward) {
  const CubeFunctor& small = forward ? src : dst;
  for (const auto& face : all_faces2(small.dim())) {
    int ci = iota.coords()[static_cast<std::size_t>(face.coord_lo - 1)];
    int cj = iota.coords()[static_cast<std::size_t>(face.coord_hi - 1)];
    CubeFace2 big = CubeFace2::at(iota.apply(face.top), ci, cj);
    const CubeFace2& from = forward ? face : big;
    const CubeFace2& to = forward ? big : face;
    if (!src.has_face_matching(from)) continue;
    const auto& map = src.face_matching(from);
    dst.set_face_matching(to, ci < cj ? map : invert(map));
  }
}

}  // namespace

CubeFunctor coproduct(const CubeFunctor& f, const CubeFunctor& g) {
  if (f.dim() != g.dim()) throw std::invalid_argument("coproduct of functors on different cubes");
  const int n = f.dim();
  CubeFunctor out(n);
  for (const auto& v : all_vertices(n)) {
    std::vector<std::string> names;
    for (const auto& x : f.set(v).elements()) names.push_back("0:" + x);
    for (const auto& x : g.set(v).elements()) names.push_back("1:" + x);
    out.set_set(v, make_set(std::move(names)));
  }
  for (const auto& e : all_edges(n)) {
    std::vector<SpanElement> elements;
    for (const auto& x : f.edge(e.upper, e.lower).elements()) elements.push_back({"0:" + x.id, x.s, x.t});
    std::size_t ds = f.set(e.upper).size();
    std::size_t dt = f.set(e.lower).size();
    for (const auto& x : g.edge(e.upper, e.lower).elements()) elements.push_back({"1:" + x.id, x.s + ds, x.t + dt});
    out.set_edge(e.upper, e.lower, std::move(elements));
  }
  for (const auto& face : all_faces2(n)) {
    if (!f.has_face_matching(face) || !g.has_face_matching(face)) continue;
    std::vector<std::size_t> map = f.face_matching(face);
    std::size_t offset = map.size();
    for (std::size_t x : g.face_matching(face)) map.push_back(x + offset);
    out.set_face_matching(face, std::move(map));
  }
  return out;
}

CubeFunctor product(const CubeFunctor& f1, const CubeFunctor& f2) {
  const int n1 = f1.dim();
  const int n2 = f2.dim();
  const int n = n1 + n2;
  CubeFunctor out(n);
  auto split = [&](const CubeVertex& v) {
    std::uint32_t low = n2 == 0 ? 0 : (v.bits() & ((std::uint32_t{1} << n2) - 1));
    return std::make_pair(CubeVertex(n1, v.bits() >> n2), CubeVertex(n2, low));
  };
  auto size2 = [&](const CubeVertex& v2) { return f2.set(v2).size(); };

  for (const auto& v : all_vertices(n)) {
    auto [v1, v2] = split(v);
    std::vector<std::string> names;
    for (const auto& x1 : f1.set(v1).elements())
      for (const auto& x2 : f2.set(v2).elements()) names.push_back("(" + x1 + "," + x2 + ")");
    out.set_set(v, make_set(std::move(names)));
  }
  for (const auto& e : all_edges(n)) {
    auto [u1, u2] = split(e.upper);
    auto [w1, w2] = split(e.lower);
    std::vector<SpanElement> elements;
    if (e.coordinate() <= n1) {
      std::size_t m = size2(u2);
      for (const auto& x : f1.edge(u1, w1).elements())
        for (std::size_t x2 = 0; x2 < m; ++x2)
          elements.push_back({"(" + x.id + "," + f2.set(u2)[x2] + ")", x.s * m + x2, x.t * m + x2});
    } else {
      const auto& c = f2.edge(u2, w2);
      for (std::size_t x1 = 0; x1 < f1.set(u1).size(); ++x1)
        for (const auto& x : c.elements())
          elements.push_back({"(" + f1.set(u1)[x1] + "," + x.id + ")", x1 * size2(u2) + x.s, x1 * size2(w2) + x.t});
    }
    out.set_edge(e.upper, e.lower, std::move(elements));
  }

  for (const auto& face : all_faces2(n)) {
    auto [t1, t2] = split(face.top);
    const int i = face.coord_lo;
    const int j = face.coord_hi;
    auto via_a = out.face_composite(face, true);
    auto via_b_index = index_pairs(out.face_composite(face, false));
    std::vector<std::size_t> map(via_a.size());
    auto lookup = [&](std::size_t q2, std::size_t q1) {
      auto it = via_b_index.find(pair_key(q2, q1));
      if (it == via_b_index.end()) throw std::logic_error("product face matching lost an element");
      return it->second;
    };
    if (j <= n1) {
      CubeFace2 small = CubeFace2::at(t1, i, j);
      if (!f1.has_face_matching(small)) continue;
      auto small_a = index_pairs(f1.face_composite(small, true));
      auto small_b = f1.face_composite(small, false);
      const auto& m = f1.face_matching(small);
      std::size_t k = size2(t2);
      for (std::size_t p = 0; p < via_a.size(); ++p) {
        auto [p2, p1] = via_a[p];
        std::size_t x2 = p1 % k;
        auto [b2, b1] = small_b[m[small_a.at(pair_key(p2 / k, p1 / k))]];
        map[p] = lookup(b2 * k + x2, b1 * k + x2);
      }
    } else if (i > n1) {
      CubeFace2 small = CubeFace2::at(t2, i - n1, j - n1);
      if (!f2.has_face_matching(small)) continue;
      auto small_a = index_pairs(f2.face_composite(small, true));
      auto small_b = f2.face_composite(small, false);
      const auto& m = f2.face_matching(small);
      std::size_t k1 = f2.edge(small.top, small.mid_a).size();
      std::size_t k2 = f2.edge(small.mid_a, small.bottom).size();
      std::size_t l1 = f2.edge(small.top, small.mid_b).size();
      std::size_t l2 = f2.edge(small.mid_b, small.bottom).size();
      for (std::size_t p = 0; p < via_a.size(); ++p) {
        auto [p2, p1] = via_a[p];
        std::size_t x1 = p1 / k1;
        auto [b2, b1] = small_b[m[small_a.at(pair_key(p2 % k2, p1 % k1))]];
        map[p] = lookup(x1 * l2 + b2, x1 * l1 + b1);
      }
    } else {
      // Mixed face: the canonical bijection (e1, e2) <-> (e1, e2).
      CubeVertex t2j = t2.with_bit(j - n1, 0);
      const auto& c1 = f1.edge(t1, t1.with_bit(i, 0));
      const auto& c2 = f2.edge(t2, t2j);
      std::size_t k = size2(t2);
      std::size_t kj = size2(t2j);
      std::size_t m2 = c2.size();
      for (std::size_t p = 0; p < via_a.size(); ++p) {
        auto [p2, p1] = via_a[p];
        std::size_t e1 = p1 / k;
        std::size_t e2 = p2 % m2;
        std::size_t x1 = c1[e1].s;
        std::size_t x2j = c2[e2].t;
        map[p] = lookup(e1 * kj + x2j, x1 * m2 + e2);
      }
    }
    out.set_face_matching(face, std::move(map));
  }
  return out;
}

CubeFunctor extend_along_face_inclusion(const CubeFunctor& f, const FaceInclusion& iota) {
  if (iota.source_dim() != f.dim()) throw std::invalid_argument("face inclusion source dimension mismatch");
  CubeFunctor out(iota.target_dim());
  for (const auto& v : all_vertices(f.dim())) out.set_set(iota.apply(v), f.set_ptr(v));
  for (const auto& e : all_edges(f.dim()))
    out.set_edge(iota.apply(e.upper), iota.apply(e.lower), f.edge(e.upper, e.lower).elements());
  copy_faces_along(f, out, iota, true);
  return out;
}

CubeFunctor restrict_along_face_inclusion(const CubeFunctor& f, const FaceInclusion& iota) {
  if (iota.target_dim() != f.dim()) throw std::invalid_argument("face inclusion target dimension mismatch");
  for (const auto& w : all_vertices(f.dim()))
    if (!f.set(w).empty() && !iota.preimage(w))
      throw std::invalid_argument("functor is nonempty at " + w.to_string() + " outside the face");
  return pull_back(f, iota);
}

CubeFunctor pull_back(const CubeFunctor& f, const FaceInclusion& iota) {
  if (iota.target_dim() != f.dim()) throw std::invalid_argument("face inclusion target dimension mismatch");
  CubeFunctor out(iota.source_dim());
  for (const auto& v : all_vertices(out.dim())) out.set_set(v, f.set_ptr(iota.apply(v)));
  for (const auto& e : all_edges(out.dim()))
    out.set_edge(e.upper, e.lower, f.edge(iota.apply(e.upper), iota.apply(e.lower)).elements());
  copy_faces_along(f, out, iota, false);
  return out;
}

ElementSubset make_subset(const CubeFunctor& f, const std::vector<std::pair<CubeVertex, std::string>>& elements) {
  ElementSubset s = complement(full_subset(f));
  for (const auto& [v, id] : elements) s[v.index()][f.set(v).index_of(id)] = true;
  return s;
}

ElementSubset complement(const ElementSubset& s) {
  ElementSubset out = s;
  for (auto& row : out) row.flip();
  return out;
}

ElementSubset full_subset(const CubeFunctor& f) {
  ElementSubset s;
  for (const auto& v : all_vertices(f.dim())) s.emplace_back(f.set(v).size(), true);
  return s;
}

bool spans_subcomplex(const CubeFunctor& f, const ElementSubset& s) {
  for (const auto& e : all_edges(f.dim()))
    for (const auto& x : f.edge(e.upper, e.lower).elements())
      if (s[e.upper.index()][x.s] && !s[e.lower.index()][x.t]) return false;
  return true;
}

namespace {

CubeFunctor restrict_to(const CubeFunctor& f, const ElementSubset& s) {
  const int n = f.dim();
  CubeFunctor out(n);
  std::vector<std::vector<std::size_t>> remap(std::size_t{1} << n);
  for (const auto& v : all_vertices(n)) {
    std::vector<std::string> names;
    auto& r = remap[v.index()];
    r.assign(f.set(v).size(), kNone);
    for (std::size_t i = 0; i < f.set(v).size(); ++i)
      if (s[v.index()][i]) {
        r[i] = names.size();
        names.push_back(f.set(v)[i]);
      }
    out.set_set(v, make_set(std::move(names)));
  }
  // Edge element remap, keyed by (upper index, coordinate).
  std::map<std::pair<std::size_t, int>, std::vector<std::size_t>> edge_remap;
  for (const auto& e : all_edges(n)) {
    std::vector<SpanElement> elements;
    auto& r = edge_remap[{e.upper.index(), e.coordinate()}];
    const auto& c = f.edge(e.upper, e.lower);
    r.assign(c.size(), kNone);
    for (std::size_t i = 0; i < c.size(); ++i) {
      std::size_t ns = remap[e.upper.index()][c[i].s];
      std::size_t nt = remap[e.lower.index()][c[i].t];
      if (ns == kNone || nt == kNone) continue;
      r[i] = elements.size();
      elements.push_back({c[i].id, ns, nt});
    }
    out.set_edge(e.upper, e.lower, std::move(elements));
  }
  for (const auto& face : all_faces2(n)) {
    if (!f.has_face_matching(face)) continue;
    const auto& ra1 = edge_remap[{face.top.index(), face.coord_lo}];
    const auto& ra2 = edge_remap[{face.mid_a.index(), face.coord_hi}];
    const auto& rb1 = edge_remap[{face.top.index(), face.coord_hi}];
    const auto& rb2 = edge_remap[{face.mid_b.index(), face.coord_lo}];
    auto full_a = f.face_composite(face, true);
    auto full_b = f.face_composite(face, false);
    const auto& m = f.face_matching(face);
    auto sub_a = index_pairs(out.face_composite(face, true));
    auto sub_b = index_pairs(out.face_composite(face, false));
    std::vector<std::size_t> map(sub_a.size(), kNone);
    for (std::size_t i = 0; i < full_a.size(); ++i) {
      std::size_t a2 = ra2[full_a[i].first], a1 = ra1[full_a[i].second];
      if (a2 == kNone || a1 == kNone) continue;
      std::size_t b2 = rb2[full_b[m[i]].first], b1 = rb1[full_b[m[i]].second];
      if (b2 == kNone || b1 == kNone)
        throw std::invalid_argument("face " + describe_face(face) + ": matching leaves the subset");
      map[sub_a.at(pair_key(a2, a1))] = sub_b.at(pair_key(b2, b1));
    }
    out.set_face_matching(face, std::move(map));
  }
  return out;
}

}  // namespace

CubeFunctor sub_functor(const CubeFunctor& f, const ElementSubset& s) {
  if (!spans_subcomplex(f, s)) throw std::invalid_argument("subset does not span a subcomplex");
  return restrict_to(f, s);
}

CubeFunctor quotient_restriction(const CubeFunctor& f, const ElementSubset& s) {
  if (!spans_subcomplex(f, complement(s))) throw std::invalid_argument("complement does not span a subcomplex");
  return restrict_to(f, s);
}

namespace {

std::map<std::string, std::string> matching_by_ids(const CubeFunctor& f, const CubeFace2& face) {
  auto a = f.face_composite_correspondence(face, true);
  auto b = f.face_composite_correspondence(face, false);
  const auto& m = f.face_matching(face);
  std::map<std::string, std::string> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.emplace(a[i].id, b[m[i]].id);
  return out;
}

}  // namespace

bool same_functor_data(const CubeFunctor& f, const CubeFunctor& g) {
  if (f.dim() != g.dim()) return false;
  for (const auto& v : all_vertices(f.dim()))
    if (!f.set(v).same_elements(g.set(v))) return false;
  for (const auto& e : all_edges(f.dim()))
    if (!same_correspondence(f.edge(e.upper, e.lower), g.edge(e.upper, e.lower))) return false;
  for (const auto& face : all_faces2(f.dim())) {
    bool hf = f.has_face_matching(face);
    if (hf != g.has_face_matching(face)) return false;
    if (hf && matching_by_ids(f, face) != matching_by_ids(g, face)) return false;
  }
  return true;
}

std::vector<std::size_t> matching_by_keys(const CubeFunctor& f, const CubeFace2& face,
                                          const std::function<std::string(const CompositePair&)>& key_a,
                                          const std::function<std::string(const CompositePair&)>& key_b) {
  auto via_a = f.face_composite(face, true);
  auto via_b = f.face_composite(face, false);
  if (via_a.size() != via_b.size())
    throw std::invalid_argument("face " + describe_face(face) + ": composites differ in size");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < via_b.size(); ++i)
    if (!index.emplace(key_b(via_b[i]), i).second)
      throw std::invalid_argument("face " + describe_face(face) + ": ambiguous matching key");
  std::vector<std::size_t> map;
  std::vector<bool> hit(via_b.size(), false);
  for (const auto& p : via_a) {
    auto it = index.find(key_a(p));
    if (it == index.end() || hit[it->second])
      throw std::invalid_argument("face " + describe_face(face) + ": keys do not define a bijection");
    hit[it->second] = true;
    map.push_back(it->second);
  }
  const auto& a1 = f.edge(face.top, face.mid_a);
  const auto& a2 = f.edge(face.mid_a, face.bottom);
  const auto& b1 = f.edge(face.top, face.mid_b);
  const auto& b2 = f.edge(face.mid_b, face.bottom);
  for (std::size_t i = 0; i < via_a.size(); ++i)
    if (a1[via_a[i].second].s != b1[via_b[map[i]].second].s || a2[via_a[i].first].t != b2[via_b[map[i]].first].t)
      throw std::invalid_argument("face " + describe_face(face) + ": keyed matching does not preserve endpoints");
  return map;
}

std::optional<std::vector<std::size_t>> unique_matching(const CubeFunctor& f, const CubeFace2& face) {
  auto via_a = f.face_composite(face, true);
  auto via_b = f.face_composite(face, false);
  if (via_a.size() != via_b.size()) return std::nullopt;
  const auto& a1 = f.edge(face.top, face.mid_a);
  const auto& a2 = f.edge(face.mid_a, face.bottom);
  const auto& b1 = f.edge(face.top, face.mid_b);
  const auto& b2 = f.edge(face.mid_b, face.bottom);
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> fiber_b;
  for (std::size_t i = 0; i < via_b.size(); ++i)
    if (!fiber_b.emplace(std::make_pair(b1[via_b[i].second].s, b2[via_b[i].first].t), i).second) return std::nullopt;
  std::vector<std::size_t> map;
  std::vector<bool> hit(via_b.size(), false);
  for (const auto& p : via_a) {
    auto it = fiber_b.find({a1[p.second].s, a2[p.first].t});
    if (it == fiber_b.end() || hit[it->second]) return std::nullopt;
    hit[it->second] = true;
    map.push_back(it->second);
  }
  return map;
}

}  // namespace khb
