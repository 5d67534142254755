#pragma once

#include <map>
#include <random>
#include <string>
#include <vector>

#include "khb/functor.hpp"
#include "khb/khovanov.hpp"
#include "khb/serialization.hpp"
#include "khb/simplicial.hpp"

namespace khb::test {

std::string corpus_path(const std::string& rel);
std::string golden_path(const std::string& name);

PDCode load_pd(const std::string& name);  // e.g. "trefoil_left"
StableFunctor load_functor(const std::string& name);  // e.g. "P"
DeltaComplex load_delta(const std::string& name);
std::vector<KhRow> load_golden(const std::string& name);

/// Every diagram in the corpus, by file stem, sorted.
std::vector<std::string> corpus_diagrams();
/// Abstract functor fixtures, by file stem.
std::vector<std::string> corpus_functors();

/// A random coherent functor on C(n): a coproduct of products of random
/// one-dimensional functors.
CubeFunctor random_functor(int n, std::mt19937& rng);
/// A random face inclusion C(n) -> C(big_n).
FaceInclusion random_face_inclusion(int n, int big_n, std::mt19937& rng);

/// True iff every quantum part of `whole` is naturally isomorphic to the
/// coproduct over j1 + j2 = j of the products a[j1] x b[j2], shifts included.
bool quantum_parts_isomorphic(const std::map<int, StableFunctor>& whole, const std::map<int, StableFunctor>& a,
                              const std::map<int, StableFunctor>& b);

/// Copy of `f` with the two images swapped on one fiber of size two on `face`.
CubeFunctor flip_fiber(const CubeFunctor& f, const CubeFace2& face, std::size_t fiber_element);

}  // namespace khb::test
