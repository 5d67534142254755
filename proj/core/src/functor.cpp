#include "khb/functor.hpp"

#include <algorithm>
#include <bit>
#include <tuple>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace khb {

namespace {

std::uint64_t pair_key(std::size_t e2, std::size_t e1) {
  return (static_cast<std::uint64_t>(e2) << 32) | static_cast<std::uint64_t>(e1);
}

const SetPtr& empty_set() {
  static const SetPtr kEmpty = make_set({});
  return kEmpty;
}

std::vector<CompositePair> two_step(const Correspondence& first, const Correspondence& second) {
  std::vector<std::vector<std::size_t>> by_target(first.target_set().size());
  for (std::size_t i = 0; i < first.size(); ++i) by_target[first[i].t].push_back(i);
  std::vector<CompositePair> out;
  for (std::size_t e2 = 0; e2 < second.size(); ++e2)
    for (std::size_t e1 : by_target[second[e2].s]) out.emplace_back(e2, e1);
  return out;
}

}  // namespace

CubeFunctor::CubeFunctor(int n) : n_(n) {
  if (n < 0 || n > 20) throw std::invalid_argument("cube functor dimension out of range");
  sets_.assign(std::size_t{1} << n, empty_set());
  edges_.assign((std::size_t{1} << n) * static_cast<std::size_t>(n), Correspondence(empty_set(), empty_set(), {}));
}

std::size_t CubeFunctor::checked(const CubeVertex& v) const {
  if (v.dim() != n_) throw std::invalid_argument("vertex dimension does not match functor");
  return v.index();
}

std::size_t CubeFunctor::edge_slot(const CubeVertex& u, const CubeVertex& v) const {
  checked(u);
  checked(v);
  if (!is_edge(u, v)) throw std::invalid_argument("not an edge: " + u.to_string() + ">" + v.to_string());
  int k = CubeEdge{u, v}.coordinate();
  return u.index() * static_cast<std::size_t>(n_) + static_cast<std::size_t>(k - 1);
}

std::uint64_t CubeFunctor::face_key(const CubeFace2& f) const {
  auto n = static_cast<std::uint64_t>(n_);
  return static_cast<std::uint64_t>(checked(f.top)) * n * n + static_cast<std::uint64_t>(f.coord_lo - 1) * n +
         static_cast<std::uint64_t>(f.coord_hi - 1);
}

void CubeFunctor::set_set(const CubeVertex& v, SetPtr elements) {
  sets_[checked(v)] = std::move(elements);
  for (int k = 1; k <= n_; ++k) {
    CubeVertex w = v.with_bit(k, 1 - v.bit(k));
    if (v.bit(k))
      edges_[edge_slot(v, w)] = Correspondence(set_ptr(v), set_ptr(w), {});
    else
      edges_[edge_slot(w, v)] = Correspondence(set_ptr(w), set_ptr(v), {});
  }
  // Any face touching v has its top at v or above it.
  for (auto it = faces_.begin(); it != faces_.end();) {
    auto n = static_cast<std::uint64_t>(n_);
    auto top = static_cast<std::uint32_t>(it->first / (n * n));
    CubeVertex t(n_, top);
    auto lo = static_cast<int>(it->first / n % n) + 1;
    auto hi = static_cast<int>(it->first % n) + 1;
    CubeVertex floor = t.with_bit(lo, 0).with_bit(hi, 0);
    if ((top & v.bits()) == v.bits() && (v.bits() & floor.bits()) == floor.bits())
      it = faces_.erase(it);
    else
      ++it;
  }
}

const Correspondence& CubeFunctor::edge(const CubeVertex& u, const CubeVertex& v) const {
  return edges_[edge_slot(u, v)];
}

void CubeFunctor::set_edge(const CubeVertex& u, const CubeVertex& v, std::vector<SpanElement> elements) {
  std::size_t slot = edge_slot(u, v);
  edges_[slot] = Correspondence(set_ptr(u), set_ptr(v), std::move(elements));
  int k = CubeEdge{u, v}.coordinate();
  for (int j = 1; j <= n_; ++j) {
    if (j == k) continue;
    if (u.bit(j))
      faces_.erase(face_key(CubeFace2::at(u, j, k)));
    else
      faces_.erase(face_key(CubeFace2::at(u.with_bit(j, 1), j, k)));
  }
}

void CubeFunctor::set_edge(const CubeVertex& u, const CubeVertex& v, const Correspondence& c) {
  if (!c.source_set().same_elements(set(u)) || !c.target_set().same_elements(set(v)))
    throw std::invalid_argument("edge correspondence endpoints differ from the vertex sets");
  std::vector<SpanElement> elements;
  elements.reserve(c.size());
  for (const auto& e : c.elements())
    elements.push_back({e.id, set(u).index_of(c.source_set()[e.s]), set(v).index_of(c.target_set()[e.t])});
  set_edge(u, v, std::move(elements));
}

std::vector<CompositePair> CubeFunctor::face_composite(const CubeFace2& f, bool via_a) const {
  const CubeVertex& mid = via_a ? f.mid_a : f.mid_b;
  return two_step(edge(f.top, mid), edge(mid, f.bottom));
}

Correspondence CubeFunctor::face_composite_correspondence(const CubeFace2& f, bool via_a) const {
  const CubeVertex& mid = via_a ? f.mid_a : f.mid_b;
  return compose(edge(mid, f.bottom), edge(f.top, mid));
}

bool CubeFunctor::has_face_matching(const CubeFace2& f) const {
  if (faces_.count(face_key(f))) return true;
  return face_composite(f, true).empty() && face_composite(f, false).empty();
}

const std::vector<std::size_t>& CubeFunctor::face_matching(const CubeFace2& f) const {
  static const std::vector<std::size_t> kEmpty;
  auto it = faces_.find(face_key(f));
  if (it != faces_.end()) return it->second;
  if (face_composite(f, true).empty() && face_composite(f, false).empty()) return kEmpty;
  throw std::invalid_argument("no matching stored on face " + describe_face(f));
}

void CubeFunctor::set_face_matching(const CubeFace2& f, std::vector<std::size_t> map) {
  std::size_t a = face_composite(f, true).size();
  std::size_t b = face_composite(f, false).size();
  if (map.size() != a || a != b) throw std::invalid_argument("face matching size mismatch on " + describe_face(f));
  std::vector<bool> hit(b, false);
  for (std::size_t x : map) {
    if (x >= b || hit[x]) throw std::invalid_argument("face matching is not a bijection on " + describe_face(f));
    hit[x] = true;
  }
  faces_[face_key(f)] = std::move(map);
}

void CubeFunctor::clear_face_matching(const CubeFace2& f) { faces_.erase(face_key(f)); }

BijectionOver CubeFunctor::face_bijection(const CubeFace2& f) const {
  return {face_composite_correspondence(f, true), face_composite_correspondence(f, false), face_matching(f)};
}

bool CubeFunctor::complete() const {
  for (const auto& f : all_faces2(n_))
    if (!has_face_matching(f)) return false;
  return true;
}

std::size_t CubeFunctor::total_elements() const {
  std::size_t total = 0;
  for (const auto& s : sets_) total += s->size();
  return total;
}

std::string describe_face(const CubeFace2& f) {
  return f.top.to_string() + ">" + f.bottom.to_string() + " via " + f.mid_a.to_string() + "|" +
         f.mid_b.to_string();
}

ValidationReport validate_c0(const CubeFunctor& f) {
  ValidationReport r{"C-0", true, {}};
  for (const auto& face : all_faces2(f.dim())) {
    std::size_t a = f.face_composite(face, true).size();
    std::size_t b = f.face_composite(face, false).size();
    if (a != b)
      r.fail("face " + describe_face(face) + ": composites have " + std::to_string(a) + " and " +
             std::to_string(b) + " elements");
  }
  return r;
}

ValidationReport validate_c1(const CubeFunctor& f) {
  ValidationReport r{"C-1", true, {}};
  for (const auto& face : all_faces2(f.dim())) {
    if (!f.has_face_matching(face)) {
      r.fail("face " + describe_face(face) + ": no matching");
      continue;
    }
    const auto& first_a = f.edge(face.top, face.mid_a);
    const auto& second_a = f.edge(face.mid_a, face.bottom);
    const auto& first_b = f.edge(face.top, face.mid_b);
    const auto& second_b = f.edge(face.mid_b, face.bottom);
    auto via_a = f.face_composite(face, true);
    auto via_b = f.face_composite(face, false);
    const auto& map = f.face_matching(face);
    for (std::size_t i = 0; i < via_a.size(); ++i) {
      auto [a2, a1] = via_a[i];
      auto [b2, b1] = via_b[map[i]];
      if (first_a[a1].s != first_b[b1].s || second_a[a2].t != second_b[b2].t) {
        r.fail("face " + describe_face(face) + ": matching moves " + second_a[a2].id + kComposeSeparator +
               first_a[a1].id + " to a different fiber");
        break;
      }
    }
  }
  return r;
}

namespace {

std::string tuple_name(const CubeFunctor& f, const MaximalChain& c, const std::vector<std::size_t>& t) {
  std::string out;
  for (std::size_t i = t.size(); i-- > 0;) {
    out += f.edge(c.vertices[i], c.vertices[i + 1])[t[i]].id;
    if (i) out += kComposeSeparator;
  }
  return out;
}

// The two forward-only halves of the hexagon around a 3-face meet at the
// reversed chain; (C-2) holds iff they agree on every element.
bool check_hexagon(const CubeFunctor& f, const CubeFace3& face, ChainTransport& transport, std::string* witness) {
  MaximalChain start = MaximalChain::from_order(face.top, {face.coords[0], face.coords[1], face.coords[2]});
  for (const auto& tuple : transport.chain_elements(start)) {
    MaximalChain c1 = start, c2 = start, next;
    auto t1 = tuple, t2 = tuple;
    for (std::size_t pos : {1, 2, 1}) {
      t1 = transport.swap(c1, pos, t1, &next);
      c1 = next;
    }
    for (std::size_t pos : {2, 1, 2}) {
      t2 = transport.swap(c2, pos, t2, &next);
      c2 = next;
    }
    if (t1 != t2) {
      if (witness) *witness = tuple_name(f, start, tuple);
      return false;
    }
  }
  return true;
}

}  // namespace

ValidationReport validate_c2(const CubeFunctor& f) {
  ValidationReport r{"C-2", true, {}};
  if (!f.complete()) {
    r.fail("face matchings missing; cannot check 3-faces");
    return r;
  }
  ChainTransport transport(f);
  for (const auto& face : all_faces3(f.dim())) {
    std::string witness;
    if (!check_hexagon(f, face, transport, &witness))
      r.fail("3-face at " + face.top.to_string() + " coords (" + std::to_string(face.coords[0]) + "," +
             std::to_string(face.coords[1]) + "," + std::to_string(face.coords[2]) +
             "): hexagon does not commute on " + witness);
  }
  return r;
}

ValidationReport validate_coherence(const CubeFunctor& f) {
  ValidationReport c1 = validate_c1(f);
  ValidationReport r{"C-1/C-2", c1.ok, c1.violations};
  if (!c1.ok) return r;
  ValidationReport c2 = validate_c2(f);
  for (auto& v : c2.violations) r.fail(std::move(v));
  return r;
}

std::vector<std::vector<std::size_t>> ChainTransport::chain_elements(const MaximalChain& c) const {
  std::size_t k = c.length();
  std::vector<std::vector<std::size_t>> out;
  if (k == 0) return out;
  std::vector<const Correspondence*> edges;
  for (std::size_t i = 0; i < k; ++i) edges.push_back(&f_.edge(c.vertices[i], c.vertices[i + 1]));
  std::vector<std::vector<std::vector<std::size_t>>> by_source(k);
  for (std::size_t i = 0; i < k; ++i) {
    by_source[i].resize(edges[i]->source_set().size());
    for (std::size_t e = 0; e < edges[i]->size(); ++e) by_source[i][(*edges[i])[e].s].push_back(e);
  }
  std::vector<std::size_t> cur(k);
  std::function<void(std::size_t)> extend = [&](std::size_t i) {
    if (i == k) {
      out.push_back(cur);
      return;
    }
    for (std::size_t e : by_source[i][(*edges[i - 1])[cur[i - 1]].t]) {
      cur[i] = e;
      extend(i + 1);
    }
  };
  for (std::size_t e = 0; e < edges[0]->size(); ++e) {
    cur[0] = e;
    extend(1);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
  });
  return out;
}

ChainTransport::FaceTables& ChainTransport::tables(const CubeFace2& face) {
  std::uint64_t key = (static_cast<std::uint64_t>(face.top.bits()) << 16) |
                      (static_cast<std::uint64_t>(face.coord_lo) << 8) | static_cast<std::uint64_t>(face.coord_hi);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  FaceTables t;
  t.via_a = f_.face_composite(face, true);
  t.via_b = f_.face_composite(face, false);
  for (std::size_t i = 0; i < t.via_a.size(); ++i) t.index_a.emplace(pair_key(t.via_a[i].first, t.via_a[i].second), i);
  return cache_.emplace(key, std::move(t)).first->second;
}

std::vector<std::size_t> ChainTransport::swap(const MaximalChain& c, std::size_t i,
                                              const std::vector<std::size_t>& tuple, MaximalChain* out_chain) {
  if (i == 0 || i >= c.length()) throw std::invalid_argument("swap position must be an interior chain vertex");
  std::vector<int> order = c.coordinate_order();
  int p = order[i - 1];
  int q = order[i];
  CubeFace2 face = CubeFace2::at(c.vertices[i - 1], p, q);
  auto& t = tables(face);
  const auto& map = f_.face_matching(face);
  CompositePair image;
  if (p < q) {
    auto found = t.index_a.find(pair_key(tuple[i], tuple[i - 1]));
    if (found == t.index_a.end()) throw std::logic_error("tuple is not an element of the chain composite");
    image = t.via_b[map[found->second]];
  } else {
    if (t.index_b.empty() && !t.via_b.empty()) {
      for (std::size_t j = 0; j < t.via_b.size(); ++j)
        t.index_b.emplace(pair_key(t.via_b[j].first, t.via_b[j].second), j);
      t.inverse.assign(map.size(), 0);
      for (std::size_t j = 0; j < map.size(); ++j) t.inverse[map[j]] = j;
    }
    auto found = t.index_b.find(pair_key(tuple[i], tuple[i - 1]));
    if (found == t.index_b.end()) throw std::logic_error("tuple is not an element of the chain composite");
    image = t.via_a[t.inverse[found->second]];
  }
  std::vector<std::size_t> out = tuple;
  out[i] = image.first;
  out[i - 1] = image.second;
  if (out_chain) {
    std::swap(order[i - 1], order[i]);
    *out_chain = MaximalChain::from_order(c.top(), order);
  }
  return out;
}

Correspondence composite_along_chain(const CubeFunctor& f, const MaximalChain& c) {
  c.validate();
  if (c.top().dim() != f.dim()) throw std::invalid_argument("chain does not lie in the functor's cube");
  if (c.length() == 0) return identity_correspondence(f.set_ptr(c.top()));
  ChainTransport transport(f);
  std::vector<SpanElement> elements;
  const auto& first = f.edge(c.vertices[0], c.vertices[1]);
  const auto& last = f.edge(c.vertices[c.length() - 1], c.vertices[c.length()]);
  for (const auto& t : transport.chain_elements(c))
    elements.push_back({tuple_name(f, c, t), first[t.front()].s, last[t.back()].t});
  return Correspondence(f.set_ptr(c.top()), f.set_ptr(c.bottom()), std::move(elements));
}

std::pair<MaximalChain, std::vector<std::size_t>> transport_along_swaps(const CubeFunctor& f,
                                                                        const MaximalChain& c,
                                                                        const std::vector<std::size_t>& positions) {
  ChainTransport transport(f);
  auto start = transport.chain_elements(c);
  auto tuples = start;
  MaximalChain chain = c;
  for (std::size_t pos : positions) {
    MaximalChain next;
    for (auto& t : tuples) t = transport.swap(chain, pos, t, &next);
    chain = next;
  }
  std::map<std::vector<std::size_t>, std::size_t> index;
  auto target = transport.chain_elements(chain);
  for (std::size_t i = 0; i < target.size(); ++i) index.emplace(target[i], i);
  std::vector<std::size_t> map;
  map.reserve(tuples.size());
  for (const auto& t : tuples) map.push_back(index.at(t));
  return {chain, map};
}

BijectionOver reconstruct_two_morphism(const CubeFunctor& f, const MaximalChain& c1, const MaximalChain& c2,
                                       bool assume_coherent) {
  if (!assume_coherent) {
    ValidationReport r = validate_coherence(f);
    if (!r.ok) throw std::invalid_argument("functor is not coherent: " + r.violations.front());
  }
  std::vector<std::size_t> positions;
  for (const auto& step : chain_swap_path(c1, c2)) positions.push_back(step.first);
  BijectionOver out{composite_along_chain(f, c1), composite_along_chain(f, c2), {}};
  if (c1.length() == 0) {
    for (std::size_t i = 0; i < out.from.size(); ++i) out.map.push_back(i);
    return out;
  }
  out.map = transport_along_swaps(f, c1, positions).second;
  return out;
}

MaximalChain canonical_chain(const CubeVertex& u, const CubeVertex& v) {
  if (!geq(u, v)) throw std::invalid_argument("canonical chain needs u >= v");
  std::vector<int> order;
  for (int i = 1; i <= u.dim(); ++i)
    if (u.bit(i) && !v.bit(i)) order.push_back(i);
  return MaximalChain::from_order(u, order);
}

std::vector<std::size_t> lax_composition_map(const CubeFunctor& f, const CubeVertex& u, const CubeVertex& v,
                                             const CubeVertex& w) {
  MaximalChain upper = canonical_chain(u, v);
  MaximalChain lower = canonical_chain(v, w);
  MaximalChain joined = upper;
  joined.vertices.insert(joined.vertices.end(), lower.vertices.begin() + 1, lower.vertices.end());
  std::vector<std::size_t> positions;
  for (const auto& step : chain_swap_path(joined, canonical_chain(u, w))) positions.push_back(step.first);
  if (joined.length() == 0) {
    std::vector<std::size_t> id(f.set(u).size());
    for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
    return id;
  }
  return transport_along_swaps(f, joined, positions).second;
}

namespace {

// Candidate matchings of one face: a permutation per (source, target) fiber.
struct FaceCandidates {
  CubeFace2 face;
  std::vector<std::vector<std::size_t>> fiber_a;  // indices into via_a
  std::vector<std::vector<std::size_t>> fiber_b;  // indices into via_b
  std::vector<std::vector<std::size_t>> perm;     // current permutation per fiber
  std::vector<const CubeFace3*> completes;        // 3-faces whose last free face this is

  void reset() {
    for (std::size_t i = 0; i < perm.size(); ++i) {
      perm[i].resize(fiber_a[i].size());
      for (std::size_t j = 0; j < perm[i].size(); ++j) perm[i][j] = j;
    }
  }
  bool advance() {
    for (auto& p : perm)
      if (std::next_permutation(p.begin(), p.end())) return true;
    return false;
  }
  std::vector<std::size_t> matching() const {
    std::size_t total = 0;
    for (const auto& fa : fiber_a) total += fa.size();
    std::vector<std::size_t> map(total);
    for (std::size_t i = 0; i < fiber_a.size(); ++i)
      for (std::size_t j = 0; j < fiber_a[i].size(); ++j) map[fiber_a[i][j]] = fiber_b[i][perm[i][j]];
    return map;
  }
};

}  // namespace

std::vector<CubeFunctor> enumerate_matchings(const CubeFunctor& partial, const MatchingSearchOptions& options) {
  ValidationReport c0 = validate_c0(partial);
  if (!c0.ok) throw std::invalid_argument("C-0 fails: " + c0.violations.front());
  CubeFunctor work = partial;
  const int n = partial.dim();

  std::vector<FaceCandidates> free_faces;
  for (const auto& face : all_faces2(n)) {
    if (work.has_face_matching(face)) continue;
    FaceCandidates cand;
    cand.face = face;
    auto via_a = work.face_composite(face, true);
    auto via_b = work.face_composite(face, false);
    const auto& a1 = work.edge(face.top, face.mid_a);
    const auto& a2 = work.edge(face.mid_a, face.bottom);
    const auto& b1 = work.edge(face.top, face.mid_b);
    const auto& b2 = work.edge(face.mid_b, face.bottom);
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> fiber_of;
    for (std::size_t i = 0; i < via_a.size(); ++i) {
      auto key = std::make_pair(a1[via_a[i].second].s, a2[via_a[i].first].t);
      auto [it, inserted] = fiber_of.emplace(key, cand.fiber_a.size());
      if (inserted) {
        cand.fiber_a.emplace_back();
        cand.fiber_b.emplace_back();
      }
      cand.fiber_a[it->second].push_back(i);
    }
    for (std::size_t i = 0; i < via_b.size(); ++i) {
      auto key = std::make_pair(b1[via_b[i].second].s, b2[via_b[i].first].t);
      auto it = fiber_of.find(key);
      if (it == fiber_of.end()) return {};  // a fiber with no partner: no 2-morphism exists
      cand.fiber_b[it->second].push_back(i);
    }
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < cand.fiber_a.size(); ++i) {
      if (cand.fiber_a[i].size() != cand.fiber_b[i].size()) return {};
      for (std::uint64_t m = 2; m <= cand.fiber_a[i].size(); ++m) {
        count *= m;
        if (count > options.max_face_bijections)
          throw std::length_error("face " + describe_face(face) + " has more candidate bijections than the cap");
      }
    }
    cand.perm.resize(cand.fiber_a.size());
    free_faces.push_back(std::move(cand));
  }
  if (free_faces.size() > options.max_faces) throw std::length_error("too many faces to search");

  std::vector<CubeFace3> faces3 = all_faces3(n);
  std::map<std::tuple<std::uint32_t, int, int>, std::size_t> position;
  for (std::size_t i = 0; i < free_faces.size(); ++i) {
    const auto& f = free_faces[i].face;
    position[{f.top.bits(), f.coord_lo, f.coord_hi}] = i;
  }
  ChainTransport transport(work);
  for (const auto& cube : faces3) {
    const int* c = cube.coords;
    // The six faces: at the top, and at the top with one coordinate cleared.
    std::vector<CubeFace2> six = {CubeFace2::at(cube.top, c[0], c[1]), CubeFace2::at(cube.top, c[0], c[2]),
                                  CubeFace2::at(cube.top, c[1], c[2]),
                                  CubeFace2::at(cube.top.with_bit(c[2], 0), c[0], c[1]),
                                  CubeFace2::at(cube.top.with_bit(c[1], 0), c[0], c[2]),
                                  CubeFace2::at(cube.top.with_bit(c[0], 0), c[1], c[2])};
    std::ptrdiff_t last = -1;
    for (const auto& f : six) {
      auto it = position.find({f.top.bits(), f.coord_lo, f.coord_hi});
      if (it != position.end()) last = std::max(last, static_cast<std::ptrdiff_t>(it->second));
    }
    if (last < 0) {
      if (!check_hexagon(work, cube, transport, nullptr)) return {};
    } else {
      free_faces[static_cast<std::size_t>(last)].completes.push_back(&cube);
    }
  }

  std::vector<CubeFunctor> solutions;
  std::function<void(std::size_t)> search = [&](std::size_t depth) {
    if (solutions.size() >= options.max_solutions) return;
    if (depth == free_faces.size()) {
      solutions.push_back(work);
      return;
    }
    auto& cand = free_faces[depth];
    cand.reset();
    do {
      work.set_face_matching(cand.face, cand.matching());
      bool ok = std::all_of(cand.completes.begin(), cand.completes.end(),
                            [&](const CubeFace3* cube) { return check_hexagon(work, *cube, transport, nullptr); });
      if (ok) search(depth + 1);
      if (solutions.size() >= options.max_solutions) break;
    } while (cand.advance());
    work.clear_face_matching(cand.face);
  };
  search(0);
  return solutions;
}

}  // namespace khb
