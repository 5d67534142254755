#include "khb/cube.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace khb {

CubeVertex::CubeVertex(int dim, std::uint32_t bits) : dim_(dim), bits_(bits) {
  if (dim < 0 || dim > kMaxDim) throw std::invalid_argument("cube dimension out of range");
  if (dim < 32 && (bits >> dim) != 0) throw std::invalid_argument("vertex bits exceed dimension");
}

CubeVertex CubeVertex::parse(std::string_view text) {
  std::uint32_t bits = 0;
  for (char c : text) {
    if (c != '0' && c != '1') throw std::invalid_argument("vertex must be a 0/1 string");
    bits = (bits << 1) | static_cast<std::uint32_t>(c - '0');
  }
  return CubeVertex(static_cast<int>(text.size()), bits);
}

CubeVertex CubeVertex::ones(int dim) {
  return CubeVertex(dim, dim == 0 ? 0 : (std::uint32_t{0xFFFFFFFF} >> (32 - dim)));
}

int CubeVertex::bit(int coord) const {
  if (coord < 1 || coord > dim_) throw std::out_of_range("cube coordinate out of range");
  return (bits_ & mask(coord)) ? 1 : 0;
}

CubeVertex CubeVertex::with_bit(int coord, int value) const {
  if (coord < 1 || coord > dim_) throw std::out_of_range("cube coordinate out of range");
  CubeVertex out = *this;
  if (value)
    out.bits_ |= mask(coord);
  else
    out.bits_ &= ~mask(coord);
  return out;
}

int CubeVertex::grading() const { return std::popcount(bits_); }

std::string CubeVertex::to_string() const {
  std::string s(static_cast<std::size_t>(dim_), '0');
  for (int i = 1; i <= dim_; ++i)
    if (bit(i)) s[static_cast<std::size_t>(i - 1)] = '1';
  return s;
}

int CubeEdge::coordinate() const {
  std::uint32_t diff = upper.bits() ^ lower.bits();
  return upper.dim() - std::countr_zero(diff);
}

CubeFace2 CubeFace2::at(const CubeVertex& top, int i, int j) {
  if (i > j) std::swap(i, j);
  if (i == j || !top.bit(i) || !top.bit(j))
    throw std::invalid_argument("face coordinates must be distinct 1-bits of the top vertex");
  CubeFace2 f;
  f.top = top;
  f.mid_a = top.with_bit(i, 0);
  f.mid_b = top.with_bit(j, 0);
  f.bottom = f.mid_a.with_bit(j, 0);
  f.coord_lo = i;
  f.coord_hi = j;
  return f;
}

CubeVertex CubeFace3::bottom() const {
  return top.with_bit(coords[0], 0).with_bit(coords[1], 0).with_bit(coords[2], 0);
}

std::vector<int> MaximalChain::coordinate_order() const {
  std::vector<int> order;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
    order.push_back(CubeEdge{vertices[i], vertices[i + 1]}.coordinate());
  return order;
}

MaximalChain MaximalChain::from_order(const CubeVertex& top, const std::vector<int>& order) {
  MaximalChain c;
  c.vertices.push_back(top);
  for (int coord : order) {
    if (!c.vertices.back().bit(coord)) throw std::invalid_argument("coordinate already cleared");
    c.vertices.push_back(c.vertices.back().with_bit(coord, 0));
  }
  return c;
}

void MaximalChain::validate() const {
  if (vertices.empty()) throw std::invalid_argument("empty chain");
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
    if (!is_edge(vertices[i], vertices[i + 1]))
      throw std::invalid_argument("consecutive chain vertices are not an edge");
}

FaceInclusion::FaceInclusion(CubeVertex bottom, std::vector<int> coords)
    : bottom_(bottom), coords_(std::move(coords)) {
  std::vector<int> sorted = coords_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("face inclusion coordinates must be distinct");
  for (int c : coords_) {
    if (c < 1 || c > bottom_.dim()) throw std::invalid_argument("face inclusion coordinate out of range");
    if (bottom_.bit(c)) throw std::invalid_argument("face inclusion bottom must vanish on listed coordinates");
  }
}

FaceInclusion FaceInclusion::identity(int n) {
  std::vector<int> coords(static_cast<std::size_t>(n));
  std::iota(coords.begin(), coords.end(), 1);
  return FaceInclusion(CubeVertex::zeros(n), std::move(coords));
}

CubeVertex FaceInclusion::apply(const CubeVertex& v) const {
  if (v.dim() != source_dim()) throw std::invalid_argument("vertex dimension does not match face inclusion");
  CubeVertex out = bottom_;
  for (int i = 1; i <= v.dim(); ++i)
    if (v.bit(i)) out = out.with_bit(coords_[static_cast<std::size_t>(i - 1)], 1);
  return out;
}

std::optional<CubeVertex> FaceInclusion::preimage(const CubeVertex& w) const {
  if (w.dim() != target_dim()) throw std::invalid_argument("vertex dimension does not match face inclusion");
  CubeVertex v = CubeVertex::zeros(source_dim());
  CubeVertex rest = w;
  for (int i = 1; i <= source_dim(); ++i) {
    int c = coords_[static_cast<std::size_t>(i - 1)];
    if (w.bit(c)) v = v.with_bit(i, 1);
    rest = rest.with_bit(c, 0);
  }
  if (rest != bottom_) return std::nullopt;
  return v;
}

int grading(const CubeVertex& v) { return v.grading(); }

bool geq(const CubeVertex& u, const CubeVertex& v) {
  if (u.dim() != v.dim()) throw std::invalid_argument("vertices of different dimension");
  return (u.bits() & v.bits()) == v.bits();
}

bool is_edge(const CubeVertex& u, const CubeVertex& v) {
  return geq(u, v) && u.grading() == v.grading() + 1;
}

int sign_assignment(const CubeVertex& u, const CubeVertex& v) {
  if (!is_edge(u, v)) throw std::invalid_argument("sign assignment requires an edge u >=_1 v");
  int k = CubeEdge{u, v}.coordinate();
  // Bits of u at coordinates 1..k-1 sit above position n-k.
  std::uint32_t above = u.bits() >> (u.dim() - k + 1);
  return std::popcount(above) & 1;
}

std::vector<MaximalChain> maximal_chains(const CubeVertex& u, const CubeVertex& v) {
  if (!geq(u, v)) throw std::invalid_argument("maximal chains need u >= v");
  std::vector<int> coords;
  for (int i = 1; i <= u.dim(); ++i)
    if (u.bit(i) && !v.bit(i)) coords.push_back(i);
  std::vector<MaximalChain> out;
  do {
    out.push_back(MaximalChain::from_order(u, coords));
  } while (std::next_permutation(coords.begin(), coords.end()));
  return out;
}

std::vector<std::pair<std::size_t, MaximalChain>> chain_swap_path(const MaximalChain& c1,
                                                                  const MaximalChain& c2) {
  c1.validate();
  c2.validate();
  if (c1.top() != c2.top() || c1.bottom() != c2.bottom())
    throw std::invalid_argument("chains do not share endpoints");
  std::vector<int> order = c1.coordinate_order();
  std::vector<int> target = c2.coordinate_order();
  std::vector<std::size_t> rank(static_cast<std::size_t>(c1.top().dim()) + 1, 0);
  for (std::size_t i = 0; i < target.size(); ++i) rank[static_cast<std::size_t>(target[i])] = i;

  std::vector<std::pair<std::size_t, MaximalChain>> path;
  for (;;) {
    std::size_t j = 0;
    while (j + 1 < order.size() &&
           rank[static_cast<std::size_t>(order[j])] < rank[static_cast<std::size_t>(order[j + 1])])
      ++j;
    if (j + 1 >= order.size()) break;
    std::swap(order[j], order[j + 1]);
    // Swapping the j-th and (j+1)-th cleared coordinates changes z_{j+1}.
    path.emplace_back(j + 1, MaximalChain::from_order(c1.top(), order));
  }
  return path;
}

CubeVertex apply_face_inclusion(const FaceInclusion& iota, const CubeVertex& v) { return iota.apply(v); }

std::vector<CubeVertex> all_vertices(int n) {
  std::vector<CubeVertex> out;
  out.reserve(std::size_t{1} << n);
  for (std::uint32_t b = 0; b < (std::uint32_t{1} << n); ++b) out.emplace_back(n, b);
  return out;
}

std::vector<CubeEdge> all_edges(int n) {
  std::vector<CubeEdge> out;
  for (const auto& u : all_vertices(n))
    for (int k = 1; k <= n; ++k)
      if (u.bit(k)) out.push_back({u, u.with_bit(k, 0)});
  return out;
}

std::vector<CubeFace2> all_faces2(int n) {
  std::vector<CubeFace2> out;
  for (const auto& u : all_vertices(n))
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        if (u.bit(i) && u.bit(j)) out.push_back(CubeFace2::at(u, i, j));
  return out;
}

std::vector<CubeFace3> all_faces3(int n) {
  std::vector<CubeFace3> out;
  for (const auto& u : all_vertices(n))
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        for (int k = j + 1; k <= n; ++k)
          if (u.bit(i) && u.bit(j) && u.bit(k)) out.push_back({u, {i, j, k}});
  return out;
}

}  // namespace khb
