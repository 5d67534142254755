#include "khb/burnside.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <tuple>

namespace khb {

FiniteSet::FiniteSet(std::vector<std::string> elements) : elements_(std::move(elements)) {
  index_.reserve(elements_.size());
  for (std::size_t i = 0; i < elements_.size(); ++i)
    if (!index_.emplace(elements_[i], i).second)
      throw std::invalid_argument("duplicate element '" + elements_[i] + "' in finite set");
}

std::optional<std::size_t> FiniteSet::find(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t FiniteSet::index_of(const std::string& id) const {
  auto found = find(id);
  if (!found) throw std::invalid_argument("no element '" + id + "' in finite set");
  return *found;
}

bool FiniteSet::same_elements(const FiniteSet& other) const {
  if (size() != other.size()) return false;
  return std::all_of(elements_.begin(), elements_.end(), [&](const std::string& e) { return other.contains(e); });
}

SetPtr make_set(std::vector<std::string> elements) {
  return std::make_shared<const FiniteSet>(std::move(elements));
}

Correspondence::Correspondence(SetPtr source, SetPtr target, std::vector<SpanElement> elements)
    : source_(std::move(source)), target_(std::move(target)), elements_(std::move(elements)) {
  std::set<std::string> ids;
  for (const auto& e : elements_) {
    if (e.s >= source_->size() || e.t >= target_->size())
      throw std::invalid_argument("correspondence element '" + e.id + "' has an endpoint outside its sets");
    if (!ids.insert(e.id).second) throw std::invalid_argument("duplicate correspondence element '" + e.id + "'");
  }
}

std::optional<std::size_t> Correspondence::find(const std::string& id) const {
  for (std::size_t i = 0; i < elements_.size(); ++i)
    if (elements_[i].id == id) return i;
  return std::nullopt;
}

std::size_t Correspondence::fiber_size(std::size_t s, std::size_t t) const {
  return static_cast<std::size_t>(
      std::count_if(elements_.begin(), elements_.end(), [&](const SpanElement& e) { return e.s == s && e.t == t; }));
}

namespace {

bool same_set(const SetPtr& a, const SetPtr& b) { return a == b || a->elements() == b->elements(); }

}  // namespace

void BijectionOver::validate() const {
  if (!same_set(from.source_ptr(), to.source_ptr()) || !same_set(from.target_ptr(), to.target_ptr()))
    throw std::invalid_argument("2-morphism between correspondences with different endpoints");
  if (!is_two_morphism(map, from, to)) throw std::invalid_argument("map is not a 2-morphism");
}

BijectionOver BijectionOver::inverse() const {
  std::vector<std::size_t> inv(map.size());
  for (std::size_t i = 0; i < map.size(); ++i) inv[map[i]] = i;
  return {to, from, std::move(inv)};
}

const std::string& BijectionOver::image(const std::string& id) const {
  auto i = from.find(id);
  if (!i) throw std::invalid_argument("no element '" + id + "' in 2-morphism domain");
  return to[map[*i]].id;
}

Correspondence identity_correspondence(const SetPtr& a) {
  std::vector<SpanElement> elements;
  elements.reserve(a->size());
  for (std::size_t i = 0; i < a->size(); ++i) elements.push_back({(*a)[i], i, i});
  return Correspondence(a, a, std::move(elements));
}

Correspondence set_map_correspondence(const SetPtr& a, const SetPtr& b, const std::vector<std::size_t>& f) {
  if (f.size() != a->size()) throw std::invalid_argument("set map must be defined on every element");
  std::vector<SpanElement> elements;
  for (std::size_t i = 0; i < a->size(); ++i) elements.push_back({(*a)[i], i, f[i]});
  return Correspondence(a, b, std::move(elements));
}

Correspondence compose(const Correspondence& y, const Correspondence& x) {
  if (!same_set(x.target_ptr(), y.source_ptr()))
    throw std::invalid_argument("composition of correspondences with mismatched middle set");
  std::vector<std::vector<std::size_t>> by_target(x.target_set().size());
  for (std::size_t i = 0; i < x.size(); ++i) by_target[x[i].t].push_back(i);
  std::vector<SpanElement> elements;
  for (const auto& ye : y.elements())
    for (std::size_t xi : by_target[ye.s])
      elements.push_back({ye.id + kComposeSeparator + x[xi].id, x[xi].s, ye.t});
  return Correspondence(x.source_ptr(), y.target_ptr(), std::move(elements));
}

bool is_two_morphism(const std::vector<std::size_t>& f, const Correspondence& x, const Correspondence& y) {
  if (f.size() != x.size() || x.size() != y.size()) return false;
  std::vector<bool> hit(y.size(), false);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] >= y.size() || hit[f[i]]) return false;
    hit[f[i]] = true;
    const auto& xe = x[i];
    const auto& ye = y[f[i]];
    if (x.source_set()[xe.s] != y.source_set()[ye.s]) return false;
    if (x.target_set()[xe.t] != y.target_set()[ye.t]) return false;
  }
  return true;
}

bool is_two_morphism(const std::map<std::string, std::string>& f, const Correspondence& x, const Correspondence& y) {
  if (f.size() != x.size()) return false;
  std::vector<std::size_t> indices(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    auto it = f.find(x[i].id);
    if (it == f.end()) return false;
    auto j = y.find(it->second);
    if (!j) return false;
    indices[i] = *j;
  }
  return is_two_morphism(indices, x, y);
}

IntegerMatrix linearize(const Correspondence& x) {
  IntegerMatrix m(x.target_set().size(), x.source_set().size());
  for (const auto& e : x.elements()) m(e.t, e.s) += 1;
  return m;
}

Correspondence opposite(const Correspondence& x) {
  std::vector<SpanElement> elements;
  for (const auto& e : x.elements()) elements.push_back({e.id, e.t, e.s});
  return Correspondence(x.target_ptr(), x.source_ptr(), std::move(elements));
}

bool same_correspondence(const Correspondence& a, const Correspondence& b) {
  if (!a.source_set().same_elements(b.source_set()) || !a.target_set().same_elements(b.target_set())) return false;
  if (a.size() != b.size()) return false;
  auto triples = [](const Correspondence& c) {
    std::vector<std::tuple<std::string, std::string, std::string>> out;
    for (const auto& e : c.elements()) out.emplace_back(e.id, c.source_set()[e.s], c.target_set()[e.t]);
    std::sort(out.begin(), out.end());
    return out;
  };
  return triples(a) == triples(b);
}

}  // namespace khb
