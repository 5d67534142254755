#include "khb/khovanov.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "khb/functor_ops.hpp"
#include "khb/totalization.hpp"

namespace khb {

int PDCode::max_label() const {
  int m = 0;
  for (const auto& x : crossings)
    for (int l : x) m = std::max(m, l);
  return m;
}

std::vector<int> PDCode::arc_labels() const {
  std::set<int> labels;
  for (const auto& x : crossings) labels.insert(x.begin(), x.end());
  for (int k = 0; k < free_loops; ++k) labels.insert(free_loop_label(k));
  return {labels.begin(), labels.end()};
}

namespace {

// Crossing ends are numbered 4*crossing + slot.
CrossingEnd end_at(int index) { return {index / 4, index % 4}; }

// The other end of every arc, by end index.
std::vector<int> arc_partners(const PDCode& pd) {
  std::map<int, std::vector<int>> ends;
  for (int c = 0; c < pd.crossing_count(); ++c)
    for (int s = 0; s < 4; ++s) ends[pd.crossings[c][s]].push_back(4 * c + s);
  std::vector<int> partner(4 * pd.crossings.size());
  for (const auto& [label, list] : ends) {
    if (list.size() != 2)
      throw std::invalid_argument("arc label " + std::to_string(label) + " occurs " + std::to_string(list.size()) +
                                  " times (expected 2)");
    partner[list[0]] = list[1];
    partner[list[1]] = list[0];
  }
  return partner;
}

bool runs_consecutively(const std::vector<int>& seq) {
  auto [lo, hi] = std::minmax_element(seq.begin(), seq.end());
  if (*hi - *lo + 1 != static_cast<int>(seq.size())) return false;
  for (std::size_t t = 0; t < seq.size(); ++t) {
    int next = seq[(t + 1) % seq.size()];
    int expected = seq[t] == *hi ? *lo : seq[t] + 1;
    if (next != expected) return false;
  }
  return true;
}

struct Traced {
  std::vector<int> sign;
  std::vector<std::vector<int>> components;
  // For each arc label, the end it leaves from and the end it enters.
  std::map<int, std::pair<int, int>> direction;
};

// Follows every strand through the crossings. Under-strands fix the
// direction; components that only pass over are oriented along increasing
// labels when possible.
Traced trace(const PDCode& pd, bool require_consecutive) {
  const auto partner = arc_partners(pd);
  const int n = pd.crossing_count();
  // Ends already passed through, as entry or exit.
  std::vector<bool> visited(4 * n, false);
  Traced out;
  out.sign.assign(n, 0);

  auto walk = [&](int start, std::vector<int>& labels, std::vector<std::pair<int, int>>& hops) {
    int entry = start;
    do {
      int exit = (entry & ~3) | ((entry & 3) ^ 2);
      if (visited[entry] || visited[exit]) throw std::invalid_argument("inconsistent orientation: a strand is traversed twice");
      visited[entry] = visited[exit] = true;
      int label = pd.crossings[exit / 4][exit % 4];
      labels.push_back(label);
      hops.push_back({entry, exit});
      entry = partner[exit];
    } while (entry != start);
  };

  auto commit = [&](const std::vector<int>& labels, const std::vector<std::pair<int, int>>& hops) {
    for (std::size_t k = 0; k < hops.size(); ++k) {
      auto [entry, exit] = hops[k];
      int slot = entry % 4;
      if (slot == 2) throw std::invalid_argument("inconsistent orientation: under-strand entered through slot c");
      if (slot == 1) out.sign[entry / 4] = -1;
      if (slot == 3) out.sign[entry / 4] = +1;
      out.direction[labels[k]] = {exit, partner[exit]};
    }
    if (require_consecutive && !runs_consecutively(labels))
      throw std::invalid_argument("arc labels do not run consecutively along a component");
    out.components.push_back(labels);
  };

  for (int c = 0; c < n; ++c) {
    if (visited[4 * c]) continue;
    std::vector<int> labels;
    std::vector<std::pair<int, int>> hops;
    walk(4 * c, labels, hops);
    commit(labels, hops);
  }
  for (int e = 0; e < 4 * n; ++e) {
    if (visited[e]) continue;
    std::vector<int> labels;
    std::vector<std::pair<int, int>> hops;
    walk(e, labels, hops);
    if (!runs_consecutively(labels)) {
      for (const auto& h : hops) visited[h.first] = visited[h.second] = false;
      labels.clear();
      hops.clear();
      walk((e & ~3) | ((e & 3) ^ 2), labels, hops);
    }
    commit(labels, hops);
  }
  for (int k = 0; k < pd.free_loops; ++k) out.components.push_back({pd.free_loop_label(k)});
  return out;
}

int smoothing_partner(int slot, int bit) { return bit == 0 ? slot ^ 1 : 3 - slot; }

// Circle label of generator `index` at a vertex with m circles: true for x_-.
bool is_minus(std::size_t index, int m, int circle) { return (index >> (m - 1 - circle)) & 1U; }

std::string labels_of(std::size_t index, int m) {
  std::string s(static_cast<std::size_t>(m), '+');
  for (int c = 0; c < m; ++c)
    if (is_minus(index, m, c)) s[c] = '-';
  return s;
}

std::size_t index_of_labels(const std::string& labels) {
  std::size_t idx = 0;
  for (char ch : labels) idx = (idx << 1) | (ch == '-' ? 1U : 0U);
  return idx;
}

std::string gen_id(const CubeVertex& v, const std::string& labels) { return v.to_string() + ":" + labels; }

std::set<int> touched_circles(const ResolvedDiagram& r, const std::array<int, 4>& arcs) {
  std::set<int> out;
  for (int a : arcs) out.insert(r.circle_of(a));
  return out;
}

Correspondence edge_from_resolutions(const PDCode& pd, const ResolvedDiagram& ru, const ResolvedDiagram& rv,
                                     int crossing, const SetPtr& fu, const SetPtr& fv) {
  const auto& arcs = pd.crossings[crossing];
  auto tu = touched_circles(ru, arcs);
  auto tv = touched_circles(rv, arcs);
  const int mu = static_cast<int>(ru.circles.size());
  const int mv = static_cast<int>(rv.circles.size());
  const bool merge = tv.size() == 2 && tu.size() == 1;
  const bool split = tv.size() == 1 && tu.size() == 2;
  if (!merge && !split) throw std::logic_error("a resolution change neither merges nor splits");

  // Circle of v carrying each untouched circle of u.
  std::vector<int> from_v(mu, -1);
  for (int c = 0; c < mu; ++c)
    if (!tu.count(c)) from_v[c] = rv.circle_of(ru.circles[c].arcs.front());

  std::vector<SpanElement> elements;
  for (std::size_t y = 0; y < fv->size(); ++y) {
    std::string base(static_cast<std::size_t>(mu), '?');
    for (int c = 0; c < mu; ++c)
      if (from_v[c] >= 0) base[c] = is_minus(y, mv, from_v[c]) ? '-' : '+';
    std::vector<std::string> images;
    if (merge) {
      int a = *tv.begin(), b = *tv.rbegin();
      int minus = is_minus(y, mv, a) + is_minus(y, mv, b);
      if (minus < 2) {
        base[*tu.begin()] = minus ? '-' : '+';
        images.push_back(base);
      }
    } else {
      int c1 = *tu.begin(), c2 = *tu.rbegin();
      if (is_minus(y, mv, *tv.begin())) {
        base[c1] = base[c2] = '-';
        images.push_back(base);
      } else {
        base[c1] = '+', base[c2] = '-';
        images.push_back(base);
        base[c1] = '-', base[c2] = '+';
        images.push_back(base);
      }
    }
    for (const auto& x : images) {
      std::size_t xi = index_of_labels(x);
      elements.push_back({"(" + (*fv)[y] + "," + (*fu)[xi] + ")", xi, y});
    }
  }
  return Correspondence(fu, fv, std::move(elements));
}

SetPtr generator_set(const CubeVertex& v, const ResolvedDiagram& r) {
  const int m = static_cast<int>(r.circles.size());
  std::vector<std::string> ids;
  for (std::size_t k = 0; k < (std::size_t{1} << m); ++k) ids.push_back(gen_id(v, labels_of(k, m)));
  return make_set(std::move(ids));
}

struct FaceResolutions {
  const ResolvedDiagram* top;
  const ResolvedDiagram* mid_a;
  const ResolvedDiagram* mid_b;
  const ResolvedDiagram* bottom;
};

std::optional<LadybugData> ladybug_structure(const PDCode& pd, const CubeFace2& face, const FaceResolutions& r) {
  const int ci = face.coord_lo - 1, cj = face.coord_hi - 1;
  std::array<int, 8> arcs{};
  for (int s = 0; s < 4; ++s) arcs[s] = pd.crossings[ci][s], arcs[4 + s] = pd.crossings[cj][s];
  auto touched = [&](const ResolvedDiagram& res) {
    std::set<int> out;
    for (int a : arcs) out.insert(res.circle_of(a));
    return out;
  };
  auto tw = touched(*r.bottom), ta = touched(*r.mid_a), tb = touched(*r.mid_b), tu = touched(*r.top);
  if (tw.size() != 1 || ta.size() != 2 || tb.size() != 2 || tu.size() != 1) return std::nullopt;

  LadybugData data;
  data.face = face;
  data.circle_w = *tw.begin();
  data.circle_u = *tu.begin();
  const Circle& cw = r.bottom->circles[data.circle_w];
  const std::size_t len = cw.ends.size();
  std::map<int, int> segment_of_arc;
  int points = 0;
  for (std::size_t k = 0; 2 * k < len; ++k) {
    segment_of_arc[cw.arcs[k]] = points % 4;
    const CrossingEnd& p = cw.ends[2 * k + 1];
    if (p.crossing == ci || p.crossing == cj) {
      if (points >= 4) throw std::logic_error("ladybug circle meets the crossings too often");
      data.surgery_points[points++] = {p.crossing, p.slot / 2};
    }
  }
  if (points != 4) throw std::logic_error("ladybug circle does not pass all four strands");
  for (int k = 0; k < 4; ++k)
    if ((data.surgery_points[k].first == ci) == (data.surgery_points[(k + 1) % 4].first == ci))
      throw std::logic_error("surgery arcs of a ladybug do not alternate");

  // Turning right from the a–b strand leads toward a, from c–d toward c.
  data.right_pair = {pd.crossings[ci][0], pd.crossings[ci][2]};
  std::set<int> from_i{segment_of_arc.at(pd.crossings[ci][0]), segment_of_arc.at(pd.crossings[ci][2])};
  std::set<int> from_j{segment_of_arc.at(pd.crossings[cj][0]), segment_of_arc.at(pd.crossings[cj][2])};
  if (from_i != from_j || *from_i.rbegin() - *from_i.begin() != 2)
    throw std::logic_error("right pairs computed from the two surgery arcs disagree");
  for (int k = 0; k < 2; ++k) {
    data.circles_mid_a[k] = r.mid_a->circle_of(data.right_pair[k]);
    data.circles_mid_b[k] = r.mid_b->circle_of(data.right_pair[k]);
  }
  if (data.circles_mid_a[0] == data.circles_mid_a[1] || data.circles_mid_b[0] == data.circles_mid_b[1])
    throw std::logic_error("right pair does not separate the split circles");
  return data;
}

// Index maps from a composite element to its middle generator.
std::vector<std::size_t> middle_generators(const CubeFunctor& f, const CubeVertex& top, const CubeVertex& mid,
                                           const std::vector<CompositePair>& pairs) {
  const auto& first = f.edge(top, mid);
  std::vector<std::size_t> out;
  for (const auto& p : pairs) out.push_back(first[p.second].t);
  return out;
}

// Face matching of a functor whose four face edges are already set.
std::vector<std::size_t> match_face(const PDCode& pd, const CubeFunctor& f, const CubeFace2& face,
                                    const FaceResolutions& r) {
  auto pa = f.face_composite(face, true);
  auto pb = f.face_composite(face, false);
  auto a = f.face_composite_correspondence(face, true);
  auto b = f.face_composite_correspondence(face, false);
  auto ya = middle_generators(f, face.top, face.mid_a, pa);
  auto yb = middle_generators(f, face.top, face.mid_b, pb);
  std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>> fa, fb;
  for (std::size_t i = 0; i < a.size(); ++i) fa[{a[i].s, a[i].t}].push_back(i);
  for (std::size_t i = 0; i < b.size(); ++i) fb[{b[i].s, b[i].t}].push_back(i);
  std::vector<std::size_t> map(a.size());
  std::optional<std::optional<LadybugData>> structure;
  const int ma = static_cast<int>(r.mid_a->circles.size());
  const int mb = static_cast<int>(r.mid_b->circles.size());
  for (const auto& [key, ia] : fa) {
    const auto& ib = fb[key];
    if (ia.size() != ib.size()) throw std::logic_error("composite fibers differ in size on " + describe_face(face));
    if (ia.size() == 1) {
      map[ia[0]] = ib[0];
      continue;
    }
    if (!structure) structure = ladybug_structure(pd, face, r);
    const auto& lb = *structure;
    const int mu = static_cast<int>(r.top->circles.size());
    const int mw = static_cast<int>(r.bottom->circles.size());
    if (ia.size() != 2 || !lb || !is_minus(key.first, mu, lb->circle_u) || is_minus(key.second, mw, lb->circle_w))
      throw std::logic_error("fiber with several elements outside a ladybug on " + describe_face(face));
    auto pick = [](const std::vector<std::size_t>& idx, const std::vector<std::size_t>& mids, int m, int circle,
                   bool minus) {
      for (std::size_t i : idx)
        if (is_minus(mids[i], m, circle) == minus) return i;
      throw std::logic_error("ladybug fiber lacks the expected labeling");
    };
    for (bool minus : {true, false})
      map[pick(ia, ya, ma, lb->circles_mid_a[0], minus)] = pick(ib, yb, mb, lb->circles_mid_b[0], minus);
  }
  return map;
}

}  // namespace

void validate_pd(const PDCode& pd) {
  if (pd.free_loops < 0) throw std::invalid_argument("negative free loop count");
  if (pd.crossing_count() > 24) throw std::invalid_argument("too many crossings (at most 24 supported)");
  for (const auto& x : pd.crossings)
    for (int l : x)
      if (l <= 0) throw std::invalid_argument("arc labels must be positive");
  trace(pd, true);
}

PDOrientation orient(const PDCode& pd) {
  Traced t = trace(pd, false);
  PDOrientation out;
  out.sign = t.sign;
  out.components = t.components;
  for (int s : t.sign) (s > 0 ? out.n_plus : out.n_minus)++;
  return out;
}

CrossingSigns crossing_signs(const PDCode& pd) {
  auto o = orient(pd);
  return {o.n_plus, o.n_minus};
}

PDCode parse_pd(std::string_view text) {
  std::size_t start = text.find_first_not_of(" \t\r\n");
  if (start != std::string_view::npos && text[start] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument(std::string("malformed PD JSON: ") + e.what());
    }
    return pd_from_json(j);
  }
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.rfind("PD[", 0) != 0 || s.back() != ']') throw std::invalid_argument("expected PD[...]");
  PDCode pd;
  std::size_t pos = 3;
  const std::size_t end = s.size() - 1;
  auto read_int = [&](std::size_t& p) {
    std::size_t q = p;
    if (q < end && s[q] == '-') ++q;
    while (q < end && std::isdigit(static_cast<unsigned char>(s[q]))) ++q;
    if (q == p) throw std::invalid_argument("expected an integer at position " + std::to_string(p));
    int v = std::stoi(s.substr(p, q - p));
    p = q;
    return v;
  };
  while (pos < end) {
    bool loop = s.compare(pos, 4, "Loop") == 0;
    if (!loop && s[pos] != 'X') throw std::invalid_argument("expected X(...) or Loop[...] at position " + std::to_string(pos));
    pos += loop ? 4 : 1;
    if (pos >= end || (s[pos] != '(' && s[pos] != '[')) throw std::invalid_argument("expected an opening bracket");
    char close = s[pos] == '(' ? ')' : ']';
    ++pos;
    std::vector<int> values;
    while (true) {
      values.push_back(read_int(pos));
      if (pos >= end) throw std::invalid_argument("unterminated crossing");
      if (s[pos] == ',') {
        ++pos;
        continue;
      }
      if (s[pos] != close) throw std::invalid_argument("mismatched bracket");
      ++pos;
      break;
    }
    if (loop) {
      if (values.size() != 1) throw std::invalid_argument("Loop takes one label");
      ++pd.free_loops;
    } else {
      if (values.size() != 4) throw std::invalid_argument("a crossing needs four labels");
      pd.crossings.push_back({values[0], values[1], values[2], values[3]});
    }
    if (pos < end) {
      if (s[pos] != ',') throw std::invalid_argument("expected ',' between crossings");
      ++pos;
    }
  }
  validate_pd(pd);
  return pd;
}

PDCode pd_from_json(const json& j) {
  PDCode pd;
  try {
    for (const auto& x : j.at("crossings")) {
      auto v = x.get<std::vector<int>>();
      if (v.size() != 4) throw std::invalid_argument("a crossing needs four labels");
      pd.crossings.push_back({v[0], v[1], v[2], v[3]});
    }
    pd.free_loops = j.value("free_loops", 0);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed PD JSON: ") + e.what());
  }
  validate_pd(pd);
  return pd;
}

json pd_to_json(const PDCode& pd) {
  json crossings = json::array();
  for (const auto& x : pd.crossings) crossings.push_back(std::vector<int>(x.begin(), x.end()));
  return {{"crossings", crossings}, {"free_loops", pd.free_loops}};
}

std::string to_string(const PDCode& pd) {
  std::ostringstream os;
  os << "PD[";
  bool first = true;
  for (const auto& x : pd.crossings) {
    os << (first ? "" : ",") << "X(" << x[0] << "," << x[1] << "," << x[2] << "," << x[3] << ")";
    first = false;
  }
  for (int k = 0; k < pd.free_loops; ++k) {
    os << (first ? "" : ",") << "Loop[" << pd.free_loop_label(k) << "]";
    first = false;
  }
  os << "]";
  return os.str();
}

ResolvedDiagram resolve(const PDCode& pd, const CubeVertex& v) {
  if (v.dim() != pd.crossing_count()) throw std::invalid_argument("vertex dimension differs from the crossing count");
  const auto partner = arc_partners(pd);
  const int total = 4 * pd.crossing_count();
  ResolvedDiagram out;
  out.vertex = v;
  std::vector<bool> seen(total, false);
  for (int start = 0; start < total; ++start) {
    if (seen[start]) continue;
    Circle c;
    int cur = start;
    do {
      int other = partner[cur];
      seen[cur] = seen[other] = true;
      c.ends.push_back(end_at(cur));
      c.ends.push_back(end_at(other));
      c.arcs.push_back(pd.crossings[cur / 4][cur % 4]);
      cur = (other & ~3) | smoothing_partner(other % 4, v.bit(other / 4 + 1));
    } while (cur != start);
    out.circles.push_back(std::move(c));
  }
  for (int k = 0; k < pd.free_loops; ++k) {
    Circle c;
    c.arcs.push_back(pd.free_loop_label(k));
    c.free_loop = true;
    out.circles.push_back(std::move(c));
  }
  for (std::size_t i = 0; i < out.circles.size(); ++i)
    for (int a : out.circles[i].arcs) out.circle_of_arc[a] = static_cast<int>(i);
  return out;
}

std::string generator_id(const KhGenerator& g) { return gen_id(g.vertex, g.labels); }

std::vector<KhGenerator> generators(const PDCode& pd, const CubeVertex& v) {
  const int m = static_cast<int>(resolve(pd, v).circles.size());
  std::vector<KhGenerator> out;
  for (std::size_t k = 0; k < (std::size_t{1} << m); ++k) out.push_back({v, labels_of(k, m)});
  return out;
}

int quantum_grading(const PDCode& pd, const KhGenerator& g) {
  auto signs = crossing_signs(pd);
  int q = signs.n_plus - 2 * signs.n_minus + g.vertex.grading();
  for (char ch : g.labels) q += ch == '+' ? 1 : -1;
  return q;
}

Correspondence edge_correspondence(const PDCode& pd, const CubeVertex& u, const CubeVertex& v) {
  if (!is_edge(u, v)) throw std::invalid_argument("not an edge");
  auto ru = resolve(pd, u);
  auto rv = resolve(pd, v);
  int k = CubeEdge{u, v}.coordinate();
  return edge_from_resolutions(pd, ru, rv, k - 1, generator_set(u, ru), generator_set(v, rv));
}

std::optional<LadybugData> detect_ladybug(const PDCode& pd, const CubeFace2& face, const KhGenerator& x,
                                          const KhGenerator& z) {
  auto rt = resolve(pd, face.top), ra = resolve(pd, face.mid_a), rb = resolve(pd, face.mid_b),
       rw = resolve(pd, face.bottom);
  auto data = ladybug_structure(pd, face, {&rt, &ra, &rb, &rw});
  if (!data) return std::nullopt;
  if (x.labels.at(data->circle_u) != '-' || z.labels.at(data->circle_w) != '+') return std::nullopt;
  return data;
}

namespace {

// The functor restricted to the four vertices and edges of one face.
CubeFunctor face_functor(const PDCode& pd, const CubeFace2& face, std::array<ResolvedDiagram, 4>& res) {
  CubeFunctor f(pd.crossing_count());
  const CubeVertex vs[4] = {face.top, face.mid_a, face.mid_b, face.bottom};
  for (int k = 0; k < 4; ++k) {
    res[k] = resolve(pd, vs[k]);
    f.set_set(vs[k], generator_set(vs[k], res[k]));
  }
  auto put = [&](int a, int b) {
    int c = CubeEdge{vs[a], vs[b]}.coordinate() - 1;
    f.set_edge(vs[a], vs[b], edge_from_resolutions(pd, res[a], res[b], c, f.set_ptr(vs[a]), f.set_ptr(vs[b])));
  };
  put(0, 1), put(0, 2), put(1, 3), put(2, 3);
  return f;
}

}  // namespace

BijectionOver ladybug_matching(const PDCode& pd, const LadybugData& data, const Correspondence& via_a,
                               const Correspondence& via_b, bool swap_numbering) {
  if (via_a.size() != 2 || via_b.size() != 2) throw std::invalid_argument("a ladybug fiber has two elements per side");
  std::array<ResolvedDiagram, 4> res;
  CubeFunctor f = face_functor(pd, data.face, res);
  auto pa = f.face_composite(data.face, true);
  auto pb = f.face_composite(data.face, false);
  auto full_a = f.face_composite_correspondence(data.face, true);
  auto full_b = f.face_composite_correspondence(data.face, false);
  const int ma = static_cast<int>(res[1].circles.size());
  const int mb = static_cast<int>(res[2].circles.size());
  const int k = swap_numbering ? 1 : 0;
  auto middle_minus = [&](const Correspondence& full, const std::vector<CompositePair>& pairs, const CubeVertex& mid,
                          const std::string& id, int m, int circle) {
    auto idx = full.find(id);
    if (!idx) throw std::invalid_argument("element '" + id + "' is not in the face composite");
    std::size_t y = f.edge(data.face.top, mid)[pairs[*idx].second].t;
    return is_minus(y, m, circle);
  };
  std::vector<std::size_t> map(2);
  for (std::size_t i = 0; i < 2; ++i) {
    bool minus = middle_minus(full_a, pa, data.face.mid_a, via_a[i].id, ma, data.circles_mid_a[k]);
    std::size_t hit = 2;
    for (std::size_t j = 0; j < 2; ++j)
      if (middle_minus(full_b, pb, data.face.mid_b, via_b[j].id, mb, data.circles_mid_b[k]) == minus) hit = j;
    if (hit == 2) throw std::logic_error("ladybug fiber lacks the expected labeling");
    map[i] = hit;
  }
  BijectionOver out{via_a, via_b, map};
  out.validate();
  return out;
}

BijectionOver face_matching(const PDCode& pd, const CubeFace2& face) {
  std::array<ResolvedDiagram, 4> res;
  CubeFunctor f = face_functor(pd, face, res);
  auto map = match_face(pd, f, face, {&res[0], &res[1], &res[2], &res[3]});
  BijectionOver out{f.face_composite_correspondence(face, true), f.face_composite_correspondence(face, false), map};
  out.validate();
  return out;
}

namespace {

template <typename Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
  if (jobs <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int t = 0; t < jobs; ++t)
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

KhovanovFunctor build_khovanov_functor(const PDCode& pd, const KhovanovOptions& options) {
  const int n = pd.crossing_count();
  auto orientation = orient(pd);
  KhovanovFunctor out;
  out.n_plus = orientation.n_plus;
  out.n_minus = orientation.n_minus;
  out.stable = {CubeFunctor(n), -orientation.n_minus};
  CubeFunctor& f = out.stable.functor;

  auto vertices = all_vertices(n);
  std::vector<ResolvedDiagram> res(vertices.size());
  for (const auto& v : vertices) {
    res[v.index()] = resolve(pd, v);
    f.set_set(v, generator_set(v, res[v.index()]));
    const int m = static_cast<int>(res[v.index()].circles.size());
    auto& q = out.quantum.emplace_back();
    for (std::size_t k = 0; k < (std::size_t{1} << m); ++k) {
      int minus = __builtin_popcountll(k);
      q.push_back(out.n_plus - 2 * out.n_minus + v.grading() + (m - minus) - minus);
    }
  }
  auto edges = all_edges(n);
  std::vector<Correspondence> corr(edges.size());
  parallel_for(edges.size(), options.jobs, [&](std::size_t i) {
    const auto& e = edges[i];
    corr[i] = edge_from_resolutions(pd, res[e.upper.index()], res[e.lower.index()], e.coordinate() - 1,
                                    f.set_ptr(e.upper), f.set_ptr(e.lower));
  });
  for (std::size_t i = 0; i < edges.size(); ++i) f.set_edge(edges[i].upper, edges[i].lower, corr[i]);

  auto faces = all_faces2(n);
  std::vector<std::vector<std::size_t>> maps(faces.size());
  parallel_for(faces.size(), options.jobs, [&](std::size_t i) {
    const auto& face = faces[i];
    maps[i] = match_face(pd, f, face,
                         {&res[face.top.index()], &res[face.mid_a.index()], &res[face.mid_b.index()],
                          &res[face.bottom.index()]});
  });
  for (std::size_t i = 0; i < faces.size(); ++i) f.set_face_matching(faces[i], std::move(maps[i]));

  if (!options.skip_validation) {
    auto c0 = validate_c0(f);
    if (!c0.ok) throw std::logic_error("Khovanov functor fails C-0: " + c0.violations.front());
    auto coh = validate_coherence(f);
    if (!coh.ok) throw std::logic_error("Khovanov functor is not coherent: " + coh.violations.front());
  }
  return out;
}

std::map<int, StableFunctor> split_by_quantum(const KhovanovFunctor& kf) {
  const CubeFunctor& f = kf.stable.functor;
  std::set<int> grades;
  for (const auto& q : kf.quantum) grades.insert(q.begin(), q.end());
  std::map<int, StableFunctor> out;
  for (int j : grades) {
    ElementSubset s;
    for (const auto& q : kf.quantum) {
      auto& row = s.emplace_back();
      for (int g : q) row.push_back(g == j);
    }
    out[j] = {sub_functor(f, s), kf.stable.shift};
  }
  return out;
}

KhovanovFunctor reduced_functor(const PDCode& pd, int basepoint, const KhovanovOptions& options) {
  auto labels = pd.arc_labels();
  if (!std::binary_search(labels.begin(), labels.end(), basepoint))
    throw std::invalid_argument("unknown basepoint arc " + std::to_string(basepoint));
  return reduced_functor(pd, build_khovanov_functor(pd, options), basepoint);
}

KhovanovFunctor reduced_functor(const PDCode& pd, const KhovanovFunctor& full, int basepoint) {
  auto labels = pd.arc_labels();
  if (!std::binary_search(labels.begin(), labels.end(), basepoint))
    throw std::invalid_argument("unknown basepoint arc " + std::to_string(basepoint));
  const CubeFunctor& f = full.stable.functor;
  ElementSubset s;
  KhovanovFunctor out;
  out.n_plus = full.n_plus;
  out.n_minus = full.n_minus;
  for (const auto& v : all_vertices(f.dim())) {
    auto r = resolve(pd, v);
    const int m = static_cast<int>(r.circles.size());
    const int marked = r.circle_of(basepoint);
    auto& row = s.emplace_back();
    auto& q = out.quantum.emplace_back();
    for (std::size_t k = 0; k < f.set(v).size(); ++k) {
      bool keep = is_minus(k, m, marked);
      row.push_back(keep);
      if (keep) q.push_back(full.quantum[v.index()][k] + 1);
    }
  }
  out.stable = {quotient_restriction(f, s), full.stable.shift};
  return out;
}

bool preserves_quantum_grading(const KhovanovFunctor& kf) {
  const CubeFunctor& f = kf.stable.functor;
  for (const auto& e : all_edges(f.dim()))
    for (const auto& x : f.edge(e.upper, e.lower).elements())
      if (kf.quantum[e.upper.index()][x.s] != kf.quantum[e.lower.index()][x.t]) return false;
  return true;
}

std::vector<KhRow> homology_table(const std::map<int, StableFunctor>& parts, int jobs) {
  std::vector<std::pair<int, const StableFunctor*>> work;
  for (const auto& [j, part] : parts) work.push_back({j, &part});
  std::vector<std::vector<KhRow>> rows(work.size());
  parallel_for(work.size(), jobs, [&](std::size_t k) {
    auto h = homology(dualize(tot(*work[k].second)));
    for (const auto& [deg, g] : h)
      if (!g.is_zero()) rows[k].push_back({-deg, work[k].first, g.rank, g.torsion});
  });
  std::vector<KhRow> out;
  for (auto& r : rows) out.insert(out.end(), r.begin(), r.end());
  std::sort(out.begin(), out.end(), [](const KhRow& a, const KhRow& b) { return std::tie(a.j, a.i) < std::tie(b.j, b.i); });
  return out;
}

std::vector<KhRow> khovanov_homology(const KhovanovFunctor& f, int jobs) {
  return homology_table(split_by_quantum(f), jobs);
}

json kh_table_to_json(const std::vector<KhRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) arr.push_back({{"i", r.i}, {"j", r.j}, {"rank", r.rank}, {"torsion", r.torsion}});
  return arr;
}

std::vector<KhRow> kh_table_from_json(const json& j) {
  std::vector<KhRow> out;
  try {
    for (const auto& r : j)
      out.push_back({r.at("i").get<int>(), r.at("j").get<int>(), r.at("rank").get<std::size_t>(),
                     r.at("torsion").get<std::vector<std::int64_t>>()});
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed homology table: ") + e.what());
  }
  return out;
}

std::string format_kh_table(const std::vector<KhRow>& rows) {
  std::ostringstream os;
  os << "   j    i  group\n";
  for (const auto& r : rows) {
    HomologyGroup g{r.i, r.rank, r.torsion};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%4d %4d  ", r.j, r.i);
    os << buf << to_string(g) << "\n";
  }
  return os.str();
}

PDCode disjoint_union_pd(const PDCode& pd1, const PDCode& pd2) {
  PDCode out = pd1;
  const int offset = pd1.max_label();
  for (auto x : pd2.crossings) {
    for (int& l : x) l += offset;
    out.crossings.push_back(x);
  }
  out.free_loops += pd2.free_loops;
  validate_pd(out);
  return out;
}

namespace {

// Position of a free loop label, or -1.
int free_loop_index(const PDCode& pd, int label) {
  int k = label - pd.max_label() - 1;
  return k >= 0 && k < pd.free_loops ? k : -1;
}

bool is_crossing_arc(const PDCode& pd, int label) {
  for (const auto& x : pd.crossings)
    if (std::find(x.begin(), x.end(), label) != x.end()) return true;
  return false;
}

}  // namespace

ConnectSum connect_sum_pd(const PDCode& pd1, int p1, const PDCode& pd2, int p2) {
  const bool arc1 = is_crossing_arc(pd1, p1), arc2 = is_crossing_arc(pd2, p2);
  const int loop1 = free_loop_index(pd1, p1), loop2 = free_loop_index(pd2, p2);
  if (!arc1 && loop1 < 0) throw std::invalid_argument("basepoint " + std::to_string(p1) + " is not an arc of the first diagram");
  if (!arc2 && loop2 < 0) throw std::invalid_argument("basepoint " + std::to_string(p2) + " is not an arc of the second diagram");

  if (!arc1 || !arc2) {
    // Summing with an unknotted free loop leaves the other diagram unchanged.
    PDCode a = pd1, b = pd2;
    if (!arc1) {
      a.free_loops -= 1;
      PDCode out = disjoint_union_pd(a, b);
      int bp = arc2 ? p2 + a.max_label() : out.free_loop_label(a.free_loops + loop2);
      return {out, bp};
    }
    b.free_loops -= 1;
    PDCode out = disjoint_union_pd(a, b);
    return {out, p1};
  }

  const int offset = pd1.max_label();
  PDCode joined = pd1;
  for (auto x : pd2.crossings) {
    for (int& l : x) l += offset;
    joined.crossings.push_back(x);
  }
  joined.free_loops = pd1.free_loops + pd2.free_loops;
  const int q2 = p2 + offset;
  auto dir = trace(joined, false).direction;
  const auto [exit_a, entry_a] = dir.at(p1);
  const auto [exit_b, entry_b] = dir.at(q2);
  const int fresh = joined.max_label() + 1;
  // p1 now runs from the exit of arc p1 into the entry of arc q2; the fresh
  // label runs from the exit of q2 into the entry of p1.
  joined.crossings[entry_b / 4][entry_b % 4] = p1;
  joined.crossings[entry_a / 4][entry_a % 4] = fresh;
  joined.crossings[exit_b / 4][exit_b % 4] = fresh;

  Traced t = trace(joined, false);
  std::map<int, int> renumber;
  int next = 1;
  for (const auto& comp : t.components) {
    if (comp.size() == 1 && !is_crossing_arc(joined, comp[0])) continue;
    auto start = std::min_element(comp.begin(), comp.end()) - comp.begin();
    for (std::size_t k = 0; k < comp.size(); ++k) renumber[comp[(start + k) % comp.size()]] = next++;
  }
  for (auto& x : joined.crossings)
    for (int& l : x) l = renumber.at(l);
  validate_pd(joined);
  return {joined, renumber.at(p1)};
}

}  // namespace khb
