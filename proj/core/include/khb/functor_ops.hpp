#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "khb/functor.hpp"

namespace khb {

/// Elementwise union. Elements of F get the prefix "0:", those of F' "1:".
CubeFunctor coproduct(const CubeFunctor& f, const CubeFunctor& g);

/// The product functor on C(n1+n2); coordinates of F1 come first. Elements
/// are "(x1,x2)"; an edge changing a coordinate of F1 has elements "(e,x2)".
CubeFunctor product(const CubeFunctor& f1, const CubeFunctor& f2);

/// F_ι: F on the image of ι, empty elsewhere.
CubeFunctor extend_along_face_inclusion(const CubeFunctor& f, const FaceInclusion& iota);

/// F∘ι. Throws std::invalid_argument if F is nonempty somewhere off the image.
CubeFunctor restrict_along_face_inclusion(const CubeFunctor& f, const FaceInclusion& iota);
/// F∘ι without the support check.
CubeFunctor pull_back(const CubeFunctor& f, const FaceInclusion& iota);

/// Membership flags per vertex (indexed by vertex index, then element index).
using ElementSubset = std::vector<std::vector<bool>>;

/// Builds a subset from (vertex, element id) pairs. Throws on unknown ids.
ElementSubset make_subset(const CubeFunctor& f, const std::vector<std::pair<CubeVertex, std::string>>& elements);
ElementSubset complement(const ElementSubset& s);
ElementSubset full_subset(const CubeFunctor& f);

/// True iff the span of S is closed under the totalization differential,
/// i.e. every edge element with source in S has its target in S.
bool spans_subcomplex(const CubeFunctor& f, const ElementSubset& s);

/// F^S with S spanning a subcomplex. Throws std::invalid_argument otherwise.
CubeFunctor sub_functor(const CubeFunctor& f, const ElementSubset& s);

/// F^S with the complement of S spanning a subcomplex (the quotient). Throws
/// std::invalid_argument otherwise.
CubeFunctor quotient_restriction(const CubeFunctor& f, const ElementSubset& s);

/// Equal as data: same element ids at every vertex, the same edge
/// correspondences, and the same face matchings (compared through ids).
bool same_functor_data(const CubeFunctor& f, const CubeFunctor& g);

/// The index bijection between the two composites of `face` that pairs
/// elements with equal keys. Throws std::invalid_argument if keys are not a
/// bijection or the result does not preserve endpoints.
std::vector<std::size_t> matching_by_keys(const CubeFunctor& f, const CubeFace2& face,
                                          const std::function<std::string(const CompositePair&)>& key_a,
                                          const std::function<std::string(const CompositePair&)>& key_b);

/// The unique matching of a face all of whose fibers have at most one element
/// on each side, if there is one.
std::optional<std::vector<std::size_t>> unique_matching(const CubeFunctor& f, const CubeFace2& face);

}  // namespace khb
