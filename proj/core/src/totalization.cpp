#include "khb/totalization.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "khb/functor_ops.hpp"

namespace khb {

namespace {

// Position of each vertex summand inside its degree.
struct Layout {
  std::map<int, std::vector<std::string>> labels;
  std::vector<std::size_t> offset;  // by vertex index
};

Layout layout(const CubeFunctor& f, int shift) {
  Layout out;
  auto vertices = all_vertices(f.dim());
  out.offset.assign(vertices.size(), 0);
  for (auto it = vertices.rbegin(); it != vertices.rend(); ++it) {
    const auto& set = f.set(*it);
    if (set.empty()) continue;
    auto& labels = out.labels[it->grading() + shift];
    out.offset[it->index()] = labels.size();
    for (const auto& x : set.elements()) labels.push_back(it->to_string() + "/" + x);
  }
  return out;
}

}  // namespace

ChainComplex tot(const CubeFunctor& f, int shift) {
  ValidationReport c0 = validate_c0(f);
  if (!c0.ok) throw std::invalid_argument("cannot totalize: " + c0.violations.front());
  Layout lay = layout(f, shift);
  ChainComplex out;
  for (auto& [deg, labels] : lay.labels) out.set_basis(deg, std::move(labels));
  std::map<int, IntegerMatrix> d;
  for (int deg : out.degrees())
    if (out.rank(deg - 1)) d.emplace(deg, IntegerMatrix(out.rank(deg - 1), out.rank(deg)));
  for (const auto& e : all_edges(f.dim())) {
    const auto& c = f.edge(e.upper, e.lower);
    if (c.size() == 0) continue;
    int sign = sign_assignment(e.upper, e.lower) ? -1 : 1;
    auto& m = d.at(e.upper.grading() + shift);
    std::size_t r0 = lay.offset[e.lower.index()];
    std::size_t c0 = lay.offset[e.upper.index()];
    for (const auto& x : c.elements()) m(r0 + x.t, c0 + x.s) += sign;
  }
  for (auto& [deg, m] : d) out.set_d(deg, std::move(m));
  out.check();
  return out;
}

ChainComplex tot(const StableFunctor& f) { return tot(f.functor, f.shift); }

ChainMap tot_nat_trans(const NaturalTransformation& eta) {
  CubeFunctor src = eta.source();
  CubeFunctor dst = eta.target();
  ChainMap out{tot(src), tot(dst), {}};
  Layout ls = layout(src, 0);
  Layout lt = layout(dst, 0);
  for (int deg : out.source.degrees()) out.maps.emplace(deg, IntegerMatrix(out.target.rank(deg), out.source.rank(deg)));
  for (const auto& v : all_vertices(eta.dim())) {
    const auto& c = eta.component(v);
    if (c.size() == 0) continue;
    auto& m = out.maps.at(v.grading());
    for (const auto& x : c.elements()) m(lt.offset[v.index()] + x.t, ls.offset[v.index()] + x.s) += 1;
  }
  return out;
}

bool twist_satisfies_closure(const SignTwist& twist, const FaceInclusion& iota) {
  for (const auto& e : all_edges(iota.source_dim())) {
    int lhs = twist.t[e.upper.index()] + twist.t[e.lower.index()];
    int rhs = iota.weight() + sign_assignment(e.upper, e.lower) +
              sign_assignment(iota.apply(e.upper), iota.apply(e.lower));
    if ((lhs - rhs) % 2 != 0) return false;
  }
  return true;
}

FaceShiftIso face_shift_iso(const CubeFunctor& f, const FaceInclusion& iota) {
  const int n = iota.source_dim();
  if (f.dim() != n) throw std::invalid_argument("face inclusion source dimension mismatch");
  SignTwist twist{std::vector<int>(std::size_t{1} << n, 0)};
  // Vertices in increasing order: each nonzero vertex is reached from the
  // vertex with its last 1-bit cleared, which is already assigned.
  for (const auto& v : all_vertices(n)) {
    if (v.bits() == 0) continue;
    int k = 0;
    for (int i = n; i >= 1; --i)
      if (v.bit(i)) {
        k = i;
        break;
      }
    CubeVertex w = v.with_bit(k, 0);
    int rhs = iota.weight() + sign_assignment(v, w) + sign_assignment(iota.apply(v), iota.apply(w));
    twist.t[v.index()] = (twist.t[w.index()] + rhs) % 2;
  }
  if (!twist_satisfies_closure(twist, iota)) throw std::logic_error("sign twist equations are inconsistent");

  CubeFunctor big = extend_along_face_inclusion(f, iota);
  ChainMap out{tot(big), suspend(tot(f), iota.weight()), {}};
  Layout ls = layout(big, 0);
  Layout lt = layout(f, iota.weight());
  for (int deg : out.source.degrees()) out.maps.emplace(deg, IntegerMatrix(out.target.rank(deg), out.source.rank(deg)));
  for (const auto& v : all_vertices(n)) {
    std::size_t size = f.set(v).size();
    if (size == 0) continue;
    CubeVertex w = iota.apply(v);
    auto& m = out.maps.at(w.grading());
    int sign = twist.t[v.index()] ? -1 : 1;
    for (std::size_t x = 0; x < size; ++x) m(lt.offset[v.index()] + x, ls.offset[w.index()] + x) = sign;
  }
  return {std::move(twist), std::move(out)};
}

}  // namespace khb
