#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace khb {

/// A vertex of the cube {0,1}^n.
///
/// Coordinates are 1-indexed. Internally coordinate i lives at bit position
/// n-i, so the integer value of `bits()` is the bitstring read left to right
/// (coordinate 1 most significant) and numeric order agrees with
/// lexicographic order of the displayed string.
class CubeVertex {
 public:
  static constexpr int kMaxDim = 30;

  CubeVertex() = default;
  CubeVertex(int dim, std::uint32_t bits);

  /// Parses a string of '0'/'1' characters, coordinate 1 first.
  static CubeVertex parse(std::string_view text);
  static CubeVertex zeros(int dim) { return CubeVertex(dim, 0); }
  static CubeVertex ones(int dim);

  int dim() const { return dim_; }
  std::uint32_t bits() const { return bits_; }
  /// Position of the vertex in the 2^n vertex array.
  std::size_t index() const { return bits_; }

  int bit(int coord) const;
  CubeVertex with_bit(int coord, int value) const;
  int grading() const;

  std::string to_string() const;

  friend bool operator==(const CubeVertex&, const CubeVertex&) = default;
  friend auto operator<=>(const CubeVertex&, const CubeVertex&) = default;

 private:
  std::uint32_t mask(int coord) const { return std::uint32_t{1} << (dim_ - coord); }

  int dim_ = 0;
  std::uint32_t bits_ = 0;
};

/// An edge u >=_1 v.
struct CubeEdge {
  CubeVertex upper;
  CubeVertex lower;

  /// The unique coordinate where upper and lower differ.
  int coordinate() const;

  friend bool operator==(const CubeEdge&, const CubeEdge&) = default;
};

/// A two-dimensional face top > {mid_a, mid_b} > bottom, canonically
/// oriented: mid_a clears the lower-indexed coordinate of the pair.
struct CubeFace2 {
  CubeVertex top;
  CubeVertex mid_a;
  CubeVertex mid_b;
  CubeVertex bottom;
  int coord_lo = 0;
  int coord_hi = 0;

  /// The face spanned at `top` by coordinates i < j (both 1 in top).
  static CubeFace2 at(const CubeVertex& top, int i, int j);

  friend bool operator==(const CubeFace2&, const CubeFace2&) = default;
};

/// A three-dimensional face spanned at `top` by coordinates i < j < k.
struct CubeFace3 {
  CubeVertex top;
  int coords[3] = {0, 0, 0};

  CubeVertex bottom() const;
};

/// A maximal chain z_0 > z_1 > ... > z_k with z_i >=_1 z_{i+1}.
struct MaximalChain {
  std::vector<CubeVertex> vertices;

  std::size_t length() const { return vertices.empty() ? 0 : vertices.size() - 1; }
  const CubeVertex& top() const { return vertices.front(); }
  const CubeVertex& bottom() const { return vertices.back(); }
  /// Coordinates in the order they are cleared along the chain.
  std::vector<int> coordinate_order() const;
  /// Builds the chain from `top` clearing coordinates in the given order.
  static MaximalChain from_order(const CubeVertex& top, const std::vector<int>& order);
  /// Throws std::invalid_argument if the vertices do not form a maximal chain.
  void validate() const;

  friend bool operator==(const MaximalChain&, const MaximalChain&) = default;
};

/// A face inclusion C(n) -> C(N), stored as the image of 0...0 together with
/// the ordered list of target coordinates the source coordinates map to.
class FaceInclusion {
 public:
  FaceInclusion() = default;
  FaceInclusion(CubeVertex bottom, std::vector<int> coords);

  static FaceInclusion identity(int n);

  int source_dim() const { return static_cast<int>(coords_.size()); }
  int target_dim() const { return bottom_.dim(); }
  const CubeVertex& bottom() const { return bottom_; }
  const std::vector<int>& coords() const { return coords_; }
  /// |iota|, the grading of the image of 0...0.
  int weight() const { return bottom_.grading(); }

  CubeVertex apply(const CubeVertex& v) const;
  /// The preimage of w, if w lies in the image.
  std::optional<CubeVertex> preimage(const CubeVertex& w) const;

  friend bool operator==(const FaceInclusion&, const FaceInclusion&) = default;

 private:
  CubeVertex bottom_;
  std::vector<int> coords_;
};

int grading(const CubeVertex& v);

/// u >= v coordinatewise. Throws std::invalid_argument on a length mismatch.
bool geq(const CubeVertex& u, const CubeVertex& v);

/// u >=_1 v.
bool is_edge(const CubeVertex& u, const CubeVertex& v);

/// The sign assignment s_{u,v}: the parity of the 1-bits of u strictly before
/// the changed coordinate. Throws std::invalid_argument if u, v is not an edge.
int sign_assignment(const CubeVertex& u, const CubeVertex& v);

/// All (|u|-|v|)! maximal chains from u down to v, ordered by the
/// lexicographic order of their coordinate orderings.
std::vector<MaximalChain> maximal_chains(const CubeVertex& u, const CubeVertex& v);

/// Elementary swaps carrying c1 to c2. Each entry is (i, chain) where the
/// interior vertex z_i was replaced and `chain` is the result.
std::vector<std::pair<std::size_t, MaximalChain>> chain_swap_path(const MaximalChain& c1,
                                                                  const MaximalChain& c2);

CubeVertex apply_face_inclusion(const FaceInclusion& iota, const CubeVertex& v);

std::vector<CubeVertex> all_vertices(int n);
std::vector<CubeEdge> all_edges(int n);
std::vector<CubeFace2> all_faces2(int n);
std::vector<CubeFace3> all_faces3(int n);

}  // namespace khb
