#include "khb/simplicial.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "khb/functor_ops.hpp"

namespace khb {

namespace {

std::vector<int> sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::string set_key(const std::vector<int>& verts) {
  std::string s;
  for (int v : sorted(verts)) s += (s.empty() ? "" : ",") + std::to_string(v);
  return s;
}

// Parity of the permutation taking `from` to `to` (same elements).
int permutation_parity(const std::vector<int>& from, const std::vector<int>& to) {
  std::vector<int> p;
  for (int x : from) p.push_back(static_cast<int>(std::find(to.begin(), to.end(), x) - to.begin()));
  int parity = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      if (p[i] > p[j]) parity ^= 1;
  return parity;
}

std::vector<int> without(const std::vector<int>& v, std::size_t k) {
  std::vector<int> out = v;
  out.erase(out.begin() + static_cast<std::ptrdiff_t>(k));
  return out;
}

}  // namespace

int DeltaComplex::dimension() const {
  int d = -1;
  for (const auto& s : simplices) d = std::max(d, static_cast<int>(s.verts.size()) - 1);
  return d;
}

std::size_t DeltaComplex::face(std::size_t index, std::size_t k) const {
  const Simplex& s = simplices.at(index);
  if (!s.faces.empty()) {
    for (std::size_t i = 0; i < simplices.size(); ++i)
      if (simplices[i].id == s.faces.at(k)) return i;
    throw std::invalid_argument("simplex '" + s.id + "' names an unknown face '" + s.faces[k] + "'");
  }
  const std::string key = set_key(without(s.verts, k));
  std::size_t found = simplices.size();
  for (std::size_t i = 0; i < simplices.size(); ++i)
    if (set_key(simplices[i].verts) == key) {
      if (found != simplices.size())
        throw std::invalid_argument("faces of '" + s.id + "' are ambiguous; list them explicitly");
      found = i;
    }
  if (found == simplices.size()) throw std::invalid_argument("a face of simplex '" + s.id + "' is not listed");
  return found;
}

void DeltaComplex::validate() const {
  if (n_vertices < 0 || n_vertices > 24) throw std::invalid_argument("vertex count out of range");
  std::set<std::string> ids;
  for (const auto& s : simplices) {
    if (!ids.insert(s.id).second) throw std::invalid_argument("duplicate simplex id '" + s.id + "'");
    if (s.verts.empty()) throw std::invalid_argument("simplex '" + s.id + "' has no vertices");
    std::set<int> distinct(s.verts.begin(), s.verts.end());
    if (distinct.size() != s.verts.size()) throw std::invalid_argument("simplex '" + s.id + "' repeats a vertex");
    if (*distinct.begin() < 1 || *distinct.rbegin() > n_vertices)
      throw std::invalid_argument("simplex '" + s.id + "' uses a vertex out of range");
    if (!s.faces.empty() && s.faces.size() != s.verts.size())
      throw std::invalid_argument("simplex '" + s.id + "' lists the wrong number of faces");
  }
  for (std::size_t i = 0; i < simplices.size(); ++i) {
    if (simplices[i].verts.size() < 2) continue;
    for (std::size_t k = 0; k < simplices[i].verts.size(); ++k) {
      const Simplex& f = simplices[face(i, k)];
      if (set_key(f.verts) != set_key(without(simplices[i].verts, k)))
        throw std::invalid_argument("face " + std::to_string(k) + " of '" + simplices[i].id + "' has the wrong vertices");
    }
  }
}

DeltaComplex delta_from_json(const json& j) {
  DeltaComplex x;
  try {
    x.n_vertices = j.at("n_vertices").get<int>();
    for (const auto& s : j.at("simplices")) {
      Simplex simplex{s.at("id").get<std::string>(), s.at("verts").get<std::vector<int>>(), {}};
      if (s.contains("faces")) simplex.faces = s.at("faces").get<std::vector<std::string>>();
      x.simplices.push_back(std::move(simplex));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed Δ-complex JSON: ") + e.what());
  }
  x.validate();
  return x;
}

json delta_to_json(const DeltaComplex& x) {
  json arr = json::array();
  for (const auto& s : x.simplices) {
    json o = {{"id", s.id}, {"verts", s.verts}};
    if (!s.faces.empty()) o["faces"] = s.faces;
    arr.push_back(o);
  }
  return {{"n_vertices", x.n_vertices}, {"simplices", arr}};
}

DeltaComplex simplicial_closure(int n_vertices, const std::vector<std::vector<int>>& top) {
  std::set<std::vector<int>> all;
  for (const auto& t : top) {
    auto s = sorted(t);
    const std::size_t k = s.size();
    for (std::uint32_t mask = 1; mask < (1U << k); ++mask) {
      std::vector<int> sub;
      for (std::size_t i = 0; i < k; ++i)
        if (mask & (1U << i)) sub.push_back(s[i]);
      all.insert(sub);
    }
  }
  std::vector<std::vector<int>> ordered(all.begin(), all.end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  DeltaComplex x;
  x.n_vertices = n_vertices;
  for (const auto& s : ordered) {
    std::string id;
    for (int v : s) id += std::to_string(v) + (v == s.back() ? "" : ".");
    x.simplices.push_back({id, s, {}});
  }
  x.validate();
  return x;
}

StableFunctor delta_functor(const DeltaComplex& x) {
  x.validate();
  const int n = x.n_vertices;
  CubeFunctor f(n);
  auto support = [&](const Simplex& s) {
    std::uint32_t bits = 0;
    for (int v : s.verts) bits |= std::uint32_t{1} << (n - v);
    return bits;
  };
  std::vector<std::vector<std::size_t>> members(std::size_t{1} << n);
  for (std::size_t i = 0; i < x.simplices.size(); ++i) members[support(x.simplices[i])].push_back(i);
  std::vector<std::size_t> position(x.simplices.size());
  for (const auto& v : all_vertices(n)) {
    std::vector<std::string> ids;
    for (std::size_t i : members[v.index()]) {
      position[i] = ids.size();
      ids.push_back(x.simplices[i].id);
    }
    f.set_set(v, make_set(std::move(ids)));
  }
  for (const auto& e : all_edges(n)) {
    std::vector<SpanElement> elements;
    for (std::size_t i : members[e.upper.index()]) {
      const Simplex& s = x.simplices[i];
      if (s.verts.size() < 2) continue;
      for (std::size_t k = 0; k < s.verts.size(); ++k) {
        std::size_t fi = x.face(i, k);
        if (support(x.simplices[fi]) != e.lower.bits()) continue;
        elements.push_back({"(" + x.simplices[fi].id + "," + s.id + ")", position[i], position[fi]});
      }
    }
    f.set_edge(e.upper, e.lower, std::move(elements));
  }
  for (const auto& face : all_faces2(n)) {
    auto m = unique_matching(f, face);
    if (!m) throw std::logic_error("Δ-complex face " + describe_face(face) + " has no unique matching");
    f.set_face_matching(face, std::move(*m));
  }
  return {std::move(f), -1};
}

ChainComplex simplicial_chain_complex(const DeltaComplex& x) {
  x.validate();
  std::map<int, std::vector<std::size_t>> by_dim;
  for (std::size_t i = 0; i < x.simplices.size(); ++i)
    by_dim[static_cast<int>(x.simplices[i].verts.size()) - 1].push_back(i);
  ChainComplex c;
  std::vector<std::size_t> position(x.simplices.size());
  for (const auto& [d, list] : by_dim) {
    std::vector<std::string> labels;
    for (std::size_t i : list) {
      position[i] = labels.size();
      labels.push_back(x.simplices[i].id);
    }
    c.set_basis(d, std::move(labels));
  }
  for (const auto& [d, list] : by_dim) {
    if (d == 0) continue;
    IntegerMatrix m(c.rank(d - 1), c.rank(d));
    for (std::size_t i : list) {
      const Simplex& s = x.simplices[i];
      for (std::size_t k = 0; k < s.verts.size(); ++k) {
        std::size_t fi = x.face(i, k);
        int parity = static_cast<int>(k % 2) ^ permutation_parity(without(s.verts, k), x.simplices[fi].verts);
        m(position[fi], position[i]) += parity ? -1 : 1;
      }
    }
    c.set_d(d, std::move(m));
  }
  c.check();
  return c;
}

std::map<int, HomologyGroup> simplicial_homology(const DeltaComplex& x) { return homology(simplicial_chain_complex(x)); }

}  // namespace khb
