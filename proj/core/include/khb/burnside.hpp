#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "khb/matrix.hpp"

namespace khb {

/// A finite set of named elements. The order of elements fixes the basis used
/// by linearization; equality ignores it.
class FiniteSet {
 public:
  FiniteSet() = default;
  explicit FiniteSet(std::vector<std::string> elements);

  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  const std::string& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<std::string>& elements() const { return elements_; }

  std::optional<std::size_t> find(const std::string& id) const;
  std::size_t index_of(const std::string& id) const;
  bool contains(const std::string& id) const { return find(id).has_value(); }

  /// Same elements, regardless of order.
  bool same_elements(const FiniteSet& other) const;

 private:
  std::vector<std::string> elements_;
  std::unordered_map<std::string, std::size_t> index_;
};

using SetPtr = std::shared_ptr<const FiniteSet>;

SetPtr make_set(std::vector<std::string> elements);

/// One element of a correspondence: its name and the indices of its source
/// and target in the endpoint sets.
struct SpanElement {
  std::string id;
  std::size_t s = 0;
  std::size_t t = 0;

  friend bool operator==(const SpanElement&, const SpanElement&) = default;
};

/// A finite correspondence (X, s, t) from A to B.
class Correspondence {
 public:
  Correspondence() : source_(make_set({})), target_(make_set({})) {}
  Correspondence(SetPtr source, SetPtr target, std::vector<SpanElement> elements);

  const FiniteSet& source_set() const { return *source_; }
  const FiniteSet& target_set() const { return *target_; }
  const SetPtr& source_ptr() const { return source_; }
  const SetPtr& target_ptr() const { return target_; }

  std::size_t size() const { return elements_.size(); }
  const std::vector<SpanElement>& elements() const { return elements_; }
  const SpanElement& operator[](std::size_t i) const { return elements_[i]; }

  std::optional<std::size_t> find(const std::string& id) const;

  /// Number of elements with the given source and target.
  std::size_t fiber_size(std::size_t s, std::size_t t) const;

 private:
  SetPtr source_;
  SetPtr target_;
  std::vector<SpanElement> elements_;
};

/// Separator joining element ids of a composite, outermost morphism first.
inline constexpr const char* kComposeSeparator = "∘";

/// A 2-morphism: a bijection between correspondences with equal endpoints
/// that commutes with the source and target maps.
struct BijectionOver {
  Correspondence from;
  Correspondence to;
  /// map[i] is the index in `to` of the image of element i of `from`.
  std::vector<std::size_t> map;

  /// Throws std::invalid_argument unless the data is a genuine 2-morphism.
  void validate() const;
  BijectionOver inverse() const;
  /// Image of an element by id.
  const std::string& image(const std::string& id) const;
};

Correspondence identity_correspondence(const SetPtr& a);

/// The correspondence (A, id, f) of a set map f: A -> B given by indices.
Correspondence set_map_correspondence(const SetPtr& a, const SetPtr& b, const std::vector<std::size_t>& f);

/// Y o X as the fiber product Y x_B X. Element (y, x) gets id "y∘x"; elements
/// are ordered lexicographically by (index of y, index of x).
Correspondence compose(const Correspondence& y, const Correspondence& x);

/// True iff `f` (indices into Y) is a bijection X -> Y commuting with s and t.
bool is_two_morphism(const std::vector<std::size_t>& f, const Correspondence& x, const Correspondence& y);
/// Same, with the candidate given by element ids.
bool is_two_morphism(const std::map<std::string, std::string>& f, const Correspondence& x, const Correspondence& y);

/// The matrix of fiber cardinalities |s^-1(a) ∩ t^-1(b)|, rows indexed by the
/// target set and columns by the source set.
IntegerMatrix linearize(const Correspondence& x);

/// The same elements with source and target swapped.
Correspondence opposite(const Correspondence& x);

/// Equal as correspondences with named elements: same endpoint sets and the
/// same (id, s, t) triples, ignoring order.
bool same_correspondence(const Correspondence& a, const Correspondence& b);

}  // namespace khb
