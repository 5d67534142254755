#include "khb/isomorphism.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace khb {

namespace {

constexpr std::size_t kUnset = static_cast<std::size_t>(-1);

std::size_t edge_slot(int n, const CubeEdge& e) {
  return e.upper.index() * static_cast<std::size_t>(n) + static_cast<std::size_t>(e.coordinate() - 1);
}

// Fiber sizes of an edge keyed by (source, target).
using FiberCounts = std::map<std::pair<std::size_t, std::size_t>, std::size_t>;

FiberCounts fiber_counts(const Correspondence& c) {
  FiberCounts out;
  for (const auto& e : c.elements()) ++out[{e.s, e.t}];
  return out;
}

// Colour refinement run jointly on F and G so that colours are comparable.
struct Colouring {
  std::vector<std::vector<int>> f, g;
};

Colouring refine(const CubeFunctor& f, const CubeFunctor& g) {
  const int n = f.dim();
  auto vertices = all_vertices(n);
  auto edges = all_edges(n);
  std::vector<FiberCounts> cf, cg;
  for (const auto& e : edges) {
    cf.push_back(fiber_counts(f.edge(e.upper, e.lower)));
    cg.push_back(fiber_counts(g.edge(e.upper, e.lower)));
  }
  Colouring col;
  for (const auto& v : vertices) {
    col.f.emplace_back(f.set(v).size(), static_cast<int>(v.index()));
    col.g.emplace_back(g.set(v).size(), static_cast<int>(v.index()));
  }
  std::size_t classes = vertices.size();
  while (true) {
    // Signature: own colour, then sorted (direction, coordinate, fiber, other colour).
    using Sig = std::vector<long long>;
    auto signatures = [&](const CubeFunctor& h, const std::vector<FiberCounts>& counts,
                          const std::vector<std::vector<int>>& c) {
      std::vector<std::vector<Sig>> sig(vertices.size());
      for (const auto& v : vertices) sig[v.index()].resize(h.set(v).size());
      std::vector<std::vector<std::vector<long long>>> parts(vertices.size());
      for (const auto& v : vertices) parts[v.index()].resize(h.set(v).size());
      for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto& e = edges[k];
        long long coord = e.coordinate();
        for (const auto& [st, cnt] : counts[k]) {
          const long long size = static_cast<long long>(cnt);
          parts[e.upper.index()][st.first].push_back(((0 * 64 + coord) * 1024 + size) * 1'000'000 +
                                                      c[e.lower.index()][st.second]);
          parts[e.lower.index()][st.second].push_back(((1 * 64 + coord) * 1024 + size) * 1'000'000 +
                                                       c[e.upper.index()][st.first]);
        }
      }
      for (const auto& v : vertices)
        for (std::size_t i = 0; i < h.set(v).size(); ++i) {
          auto& p = parts[v.index()][i];
          std::sort(p.begin(), p.end());
          Sig s{c[v.index()][i]};
          s.insert(s.end(), p.begin(), p.end());
          sig[v.index()][i] = std::move(s);
        }
      return sig;
    };
    auto sf = signatures(f, cf, col.f);
    auto sg = signatures(g, cg, col.g);
    std::map<Sig, int> ids;
    for (auto* table : {&sf, &sg})
      for (const auto& row : *table)
        for (const auto& s : row) ids.emplace(s, 0);
    int next = 0;
    for (auto& [s, id] : ids) id = next++;
    for (const auto& v : vertices) {
      for (std::size_t i = 0; i < sf[v.index()].size(); ++i) col.f[v.index()][i] = ids[sf[v.index()][i]];
      for (std::size_t i = 0; i < sg[v.index()].size(); ++i) col.g[v.index()][i] = ids[sg[v.index()][i]];
    }
    if (ids.size() == classes) break;
    classes = ids.size();
  }
  return col;
}

class Search {
 public:
  Search(const CubeFunctor& f, const CubeFunctor& g, const IsoSearchOptions& options)
      : f_(f), g_(g), options_(options), n_(f.dim()), vertices_(all_vertices(n_)), edges_(all_edges(n_)),
        faces_(all_faces2(n_)) {
    for (const auto& e : edges_) {
      cf_.push_back(fiber_counts(f.edge(e.upper, e.lower)));
      cg_.push_back(fiber_counts(g.edge(e.upper, e.lower)));
    }
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      edges_at_upper_.resize(vertices_.size());
      edges_at_lower_.resize(vertices_.size());
      edges_at_upper_[edges_[k].upper.index()].push_back(k);
      edges_at_lower_[edges_[k].lower.index()].push_back(k);
    }
  }

  std::optional<NaturalIsomorphism> run() {
    for (const auto& v : vertices_)
      if (f_.set(v).size() != g_.set(v).size()) return std::nullopt;
    for (const auto& e : edges_)
      if (f_.edge(e.upper, e.lower).size() != g_.edge(e.upper, e.lower).size()) return std::nullopt;
    for (const auto& face : faces_)
      if (f_.has_face_matching(face) != g_.has_face_matching(face)) return std::nullopt;
    colours_ = refine(f_, g_);
    for (const auto& v : vertices_) {
      auto a = colours_.f[v.index()], b = colours_.g[v.index()];
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a != b) return std::nullopt;
    }
    for (const auto& v : vertices_)
      for (std::size_t i = 0; i < f_.set(v).size(); ++i) order_.push_back({v.index(), i});
    phi_.resize(vertices_.size());
    used_.resize(vertices_.size());
    for (const auto& v : vertices_) {
      phi_[v.index()].assign(f_.set(v).size(), kUnset);
      used_[v.index()].assign(g_.set(v).size(), false);
    }
    if (assign_vertex(0)) return result_;
    return std::nullopt;
  }

 private:
  void tick() {
    if (++nodes_ > options_.max_nodes) throw std::length_error("natural isomorphism search exceeded its node cap");
  }

  std::size_t count(const FiberCounts& c, std::size_t s, std::size_t t) const {
    auto it = c.find({s, t});
    return it == c.end() ? 0 : it->second;
  }

  // Fiber sizes agree between x (at vertex vi) and every assigned neighbour.
  bool consistent(std::size_t vi, std::size_t x) const {
    std::size_t y = phi_[vi][x];
    for (std::size_t k : edges_at_upper_[vi]) {
      std::size_t li = edges_[k].lower.index();
      for (std::size_t t = 0; t < phi_[li].size(); ++t)
        if (phi_[li][t] != kUnset && count(cf_[k], x, t) != count(cg_[k], y, phi_[li][t])) return false;
    }
    for (std::size_t k : edges_at_lower_[vi]) {
      std::size_t ui = edges_[k].upper.index();
      for (std::size_t s = 0; s < phi_[ui].size(); ++s)
        if (phi_[ui][s] != kUnset && count(cf_[k], s, x) != count(cg_[k], phi_[ui][s], y)) return false;
    }
    return true;
  }

  bool assign_vertex(std::size_t pos) {
    if (pos == order_.size()) return assign_edges();
    auto [vi, x] = order_[pos];
    for (std::size_t y = 0; y < used_[vi].size(); ++y) {
      if (used_[vi][y] || colours_.g[vi][y] != colours_.f[vi][x]) continue;
      tick();
      phi_[vi][x] = y;
      used_[vi][y] = true;
      if (consistent(vi, x) && assign_vertex(pos + 1)) return true;
      phi_[vi][x] = kUnset;
      used_[vi][y] = false;
    }
    return false;
  }

  // Phase two: bijections of edge fibers, checked face by face.
  bool assign_edges() {
    psi_.assign(vertices_.size() * static_cast<std::size_t>(n_), {});
    fibers_.clear();
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      const auto& e = edges_[k];
      const auto& fe = f_.edge(e.upper, e.lower);
      const auto& ge = g_.edge(e.upper, e.lower);
      std::map<std::pair<std::size_t, std::size_t>, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> fib;
      for (std::size_t i = 0; i < fe.size(); ++i)
        fib[{phi_[e.upper.index()][fe[i].s], phi_[e.lower.index()][fe[i].t]}].first.push_back(i);
      for (std::size_t i = 0; i < ge.size(); ++i) fib[{ge[i].s, ge[i].t}].second.push_back(i);
      std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> list;
      for (auto& [key, pair] : fib) {
        if (pair.first.size() != pair.second.size()) return false;
        list.push_back(std::move(pair));
      }
      fibers_.push_back(std::move(list));
    }
    // A face is checked once its last edge (in edge order) is assigned.
    std::vector<std::size_t> index_of_slot(vertices_.size() * static_cast<std::size_t>(n_));
    for (std::size_t k = 0; k < edges_.size(); ++k) index_of_slot[edge_slot(n_, edges_[k])] = k;
    faces_closing_.assign(edges_.size(), {});
    for (const auto& face : faces_) {
      std::size_t last = std::max({index_of_slot[edge_slot(n_, {face.top, face.mid_a})],
                                   index_of_slot[edge_slot(n_, {face.top, face.mid_b})],
                                   index_of_slot[edge_slot(n_, {face.mid_a, face.bottom})],
                                   index_of_slot[edge_slot(n_, {face.mid_b, face.bottom})]});
      if (f_.has_face_matching(face)) faces_closing_[last].push_back(face);
    }
    return assign_edge(0);
  }

  bool assign_edge(std::size_t k) {
    if (k == edges_.size()) {
      result_ = {phi_, psi_};
      return true;
    }
    const auto& e = edges_[k];
    auto& fib = fibers_[k];
    std::vector<std::vector<std::size_t>> perms;
    for (auto& p : fib) {
      perms.emplace_back(p.second.size());
      std::iota(perms.back().begin(), perms.back().end(), 0);
    }
    auto& map = psi_[edge_slot(n_, e)];
    map.assign(f_.edge(e.upper, e.lower).size(), kUnset);
    while (true) {
      tick();
      for (std::size_t b = 0; b < fib.size(); ++b)
        for (std::size_t i = 0; i < fib[b].first.size(); ++i) map[fib[b].first[i]] = fib[b].second[perms[b][i]];
      bool ok = true;
      for (const auto& face : faces_closing_[k])
        if (!face_ok(face)) {
          ok = false;
          break;
        }
      if (ok && assign_edge(k + 1)) return true;
      std::size_t b = 0;
      while (b < fib.size() && !std::next_permutation(perms[b].begin(), perms[b].end())) ++b;
      if (b == fib.size()) break;
    }
    map.clear();
    return false;
  }

  bool face_ok(const CubeFace2& face) const {
    const auto& pa1 = psi_[edge_slot(n_, {face.top, face.mid_a})];
    const auto& pa2 = psi_[edge_slot(n_, {face.mid_a, face.bottom})];
    const auto& pb1 = psi_[edge_slot(n_, {face.top, face.mid_b})];
    const auto& pb2 = psi_[edge_slot(n_, {face.mid_b, face.bottom})];
    auto fa = f_.face_composite(face, true), fb = f_.face_composite(face, false);
    auto ga = g_.face_composite(face, true), gb = g_.face_composite(face, false);
    std::map<CompositePair, std::size_t> ia, ib;
    for (std::size_t i = 0; i < ga.size(); ++i) ia[ga[i]] = i;
    for (std::size_t i = 0; i < gb.size(); ++i) ib[gb[i]] = i;
    const auto& mf = f_.face_matching(face);
    const auto& mg = g_.face_matching(face);
    for (std::size_t i = 0; i < fa.size(); ++i) {
      std::size_t a = ia.at({pa2[fa[i].first], pa1[fa[i].second]});
      const auto& q = fb[mf[i]];
      std::size_t b = ib.at({pb2[q.first], pb1[q.second]});
      if (mg[a] != b) return false;
    }
    return true;
  }

  const CubeFunctor& f_;
  const CubeFunctor& g_;
  IsoSearchOptions options_;
  int n_;
  std::vector<CubeVertex> vertices_;
  std::vector<CubeEdge> edges_;
  std::vector<CubeFace2> faces_;
  std::vector<FiberCounts> cf_, cg_;
  std::vector<std::vector<std::size_t>> edges_at_upper_, edges_at_lower_;
  Colouring colours_;
  std::vector<std::pair<std::size_t, std::size_t>> order_;
  std::vector<std::vector<std::size_t>> phi_;
  std::vector<std::vector<bool>> used_;
  std::vector<std::vector<std::size_t>> psi_;
  std::vector<std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>> fibers_;
  std::vector<std::vector<CubeFace2>> faces_closing_;
  NaturalIsomorphism result_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

std::optional<NaturalIsomorphism> find_natural_isomorphism(const CubeFunctor& f, const CubeFunctor& g,
                                                           const IsoSearchOptions& options) {
  if (f.dim() != g.dim()) return std::nullopt;
  return Search(f, g, options).run();
}

bool is_natural_isomorphism(const CubeFunctor& f, const CubeFunctor& g, const NaturalIsomorphism& iso) {
  if (f.dim() != g.dim()) return false;
  const int n = f.dim();
  auto bijective = [](const std::vector<std::size_t>& m, std::size_t size) {
    if (m.size() != size) return false;
    std::vector<bool> hit(size, false);
    for (std::size_t x : m) {
      if (x >= size || hit[x]) return false;
      hit[x] = true;
    }
    return true;
  };
  if (iso.vertex_maps.size() != (std::size_t{1} << n) || iso.edge_maps.size() != (std::size_t{1} << n) * n)
    return false;
  for (const auto& v : all_vertices(n))
    if (f.set(v).size() != g.set(v).size() || !bijective(iso.vertex_maps[v.index()], g.set(v).size())) return false;
  for (const auto& e : all_edges(n)) {
    const auto& fe = f.edge(e.upper, e.lower);
    const auto& ge = g.edge(e.upper, e.lower);
    const auto& m = iso.edge_maps[edge_slot(n, e)];
    if (fe.size() != ge.size() || !bijective(m, ge.size())) return false;
    for (std::size_t i = 0; i < fe.size(); ++i)
      if (ge[m[i]].s != iso.vertex_maps[e.upper.index()][fe[i].s] ||
          ge[m[i]].t != iso.vertex_maps[e.lower.index()][fe[i].t])
        return false;
  }
  for (const auto& face : all_faces2(n)) {
    if (f.has_face_matching(face) != g.has_face_matching(face)) return false;
    if (!f.has_face_matching(face)) continue;
    const auto& pa1 = iso.edge_maps[edge_slot(n, {face.top, face.mid_a})];
    const auto& pa2 = iso.edge_maps[edge_slot(n, {face.mid_a, face.bottom})];
    const auto& pb1 = iso.edge_maps[edge_slot(n, {face.top, face.mid_b})];
    const auto& pb2 = iso.edge_maps[edge_slot(n, {face.mid_b, face.bottom})];
    auto fa = f.face_composite(face, true), fb = f.face_composite(face, false);
    auto ga = g.face_composite(face, true), gb = g.face_composite(face, false);
    std::map<CompositePair, std::size_t> ia, ib;
    for (std::size_t i = 0; i < ga.size(); ++i) ia[ga[i]] = i;
    for (std::size_t i = 0; i < gb.size(); ++i) ib[gb[i]] = i;
    for (std::size_t i = 0; i < fa.size(); ++i) {
      auto a = ia.find({pa2[fa[i].first], pa1[fa[i].second]});
      const auto& q = fb[f.face_matching(face)[i]];
      auto b = ib.find({pb2[q.first], pb1[q.second]});
      if (a == ia.end() || b == ib.end() || g.face_matching(face)[a->second] != b->second) return false;
    }
  }
  return true;
}

NaturalTransformation isomorphism_transformation(const CubeFunctor& f, const CubeFunctor& g,
                                                 const NaturalIsomorphism& iso) {
  if (!is_natural_isomorphism(f, g, iso)) throw std::invalid_argument("not a natural isomorphism");
  const int n = f.dim();
  std::vector<std::vector<SpanElement>> components;
  for (const auto& v : all_vertices(n)) {
    auto& c = components.emplace_back();
    for (std::size_t x = 0; x < f.set(v).size(); ++x) c.push_back({f.set(v)[x], x, iso.vertex_maps[v.index()][x]});
  }
  // Mixed face at (1,v) along j+1: via_a is component then a G edge, via_b is
  // an F edge then component. Both are keyed by the G edge element.
  MixedMatchingFn mixed = [&](const CubeFunctor& h, const CubeFace2& face) -> std::optional<std::vector<std::size_t>> {
    const auto& g_edge = h.edge(face.mid_a, face.bottom);
    CubeVertex fu(n, face.top.bits() & ((std::uint32_t{1} << n) - 1));
    CubeVertex fv(n, face.mid_b.bits() & ((std::uint32_t{1} << n) - 1));
    const auto& m = iso.edge_maps[edge_slot(n, {fu, fv})];
    return matching_by_keys(
        h, face, [&](const CompositePair& p) { return g_edge[p.first].id; },
        [&](const CompositePair& p) { return g_edge[m[p.second]].id; });
  };
  return build_nat_trans(f, g, components, mixed);
}

}  // namespace khb
