#include "support.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "khb/functor_ops.hpp"
#include "khb/isomorphism.hpp"

namespace khb::test {

namespace fs = std::filesystem;

std::string corpus_path(const std::string& rel) { return (fs::path(KHB_TEST_CORPUS_DIR) / rel).string(); }
std::string golden_path(const std::string& name) {
  return (fs::path(KHB_TEST_GOLDEN_DIR) / (name + ".json")).string();
}

PDCode load_pd(const std::string& name) {
  std::ifstream in(corpus_path("pd/" + name + ".pd"));
  if (!in) throw std::invalid_argument("missing diagram " + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_pd(ss.str());
}

StableFunctor load_functor(const std::string& name) {
  return functor_from_json(read_json_file(corpus_path("functors/" + name + ".json")));
}

DeltaComplex load_delta(const std::string& name) {
  return delta_from_json(read_json_file(corpus_path("delta/" + name + ".json")));
}

std::vector<KhRow> load_golden(const std::string& name) {
  return kh_table_from_json(read_json_file(golden_path(name)).at("homology"));
}

namespace {
std::vector<std::string> stems(const std::string& dir, const std::string& ext) {
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(corpus_path(dir)))
    if (e.path().extension() == ext) out.push_back(e.path().stem().string());
  std::sort(out.begin(), out.end());
  return out;
}
}  // namespace

std::vector<std::string> corpus_diagrams() { return stems("pd", ".pd"); }
std::vector<std::string> corpus_functors() { return stems("functors", ".json"); }

CubeFunctor random_functor(int n, std::mt19937& rng) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  auto one_dim = [&](int tag) {
    CubeFunctor f(1);
    std::vector<std::string> top, bottom;
    for (int i = 0, k = pick(1, 2); i < k; ++i) top.push_back("u" + std::to_string(tag) + "_" + std::to_string(i));
    for (int i = 0, k = pick(1, 2); i < k; ++i) bottom.push_back("d" + std::to_string(tag) + "_" + std::to_string(i));
    f.set_set(CubeVertex::parse("1"), make_set(top));
    f.set_set(CubeVertex::parse("0"), make_set(bottom));
    std::vector<SpanElement> es;
    for (int i = 0, k = pick(0, 3); i < k; ++i)
      es.push_back({"e" + std::to_string(i), static_cast<std::size_t>(pick(0, static_cast<int>(top.size()) - 1)),
                    static_cast<std::size_t>(pick(0, static_cast<int>(bottom.size()) - 1))});
    f.set_edge(CubeVertex::parse("1"), CubeVertex::parse("0"), es);
    return f;
  };
  auto product_of = [&](int tag) {
    if (n == 0) {
      CubeFunctor f(0);
      f.set_set(CubeVertex(0, 0), make_set({"pt" + std::to_string(tag)}));
      return f;
    }
    CubeFunctor f = one_dim(tag * 10);
    for (int i = 1; i < n; ++i) f = product(f, one_dim(tag * 10 + i));
    return f;
  };
  CubeFunctor f = product_of(0);
  if (pick(0, 1)) f = coproduct(f, product_of(1));
  return f;
}

FaceInclusion random_face_inclusion(int n, int big_n, std::mt19937& rng) {
  std::vector<int> coords(big_n);
  for (int i = 0; i < big_n; ++i) coords[i] = i + 1;
  std::shuffle(coords.begin(), coords.end(), rng);
  std::vector<int> used(coords.begin(), coords.begin() + n);
  std::uint32_t bits = 0;
  for (int i = n; i < big_n; ++i)
    if (std::uniform_int_distribution<int>(0, 1)(rng)) bits |= std::uint32_t{1} << (big_n - coords[i]);
  return FaceInclusion(CubeVertex(big_n, bits), used);
}

CubeFunctor flip_fiber(const CubeFunctor& f, const CubeFace2& face, std::size_t fiber_element) {
  CubeFunctor out = f;
  auto a = f.face_composite_correspondence(face, true);
  auto map = f.face_matching(face);
  for (std::size_t k = 0; k < a.size(); ++k)
    if (k != fiber_element && a[k].s == a[fiber_element].s && a[k].t == a[fiber_element].t) {
      std::swap(map[k], map[fiber_element]);
      out.set_face_matching(face, map);
      return out;
    }
  throw std::invalid_argument("fiber has a single element");
}

bool quantum_parts_isomorphic(const std::map<int, StableFunctor>& whole, const std::map<int, StableFunctor>& a,
                              const std::map<int, StableFunctor>& b) {
  if (a.empty() || b.empty()) return whole.empty();
  const int n = a.begin()->second.functor.dim() + b.begin()->second.functor.dim();
  std::map<int, std::pair<CubeFunctor, int>> expected;
  for (const auto& [j1, f1] : a)
    for (const auto& [j2, f2] : b) {
      CubeFunctor p = product(f1.functor, f2.functor);
      int sh = f1.shift + f2.shift;
      auto it = expected.find(j1 + j2);
      if (it == expected.end()) {
        expected.emplace(j1 + j2, std::make_pair(std::move(p), sh));
      } else {
        if (it->second.second != sh) return false;
        it->second.first = coproduct(it->second.first, p);
      }
    }
  for (const auto& [j, part] : whole) {
    if (part.functor.total_elements() == 0) continue;
    auto it = expected.find(j);
    if (it == expected.end() || it->second.second != part.shift) return false;
    if (!find_natural_isomorphism(part.functor, it->second.first)) return false;
  }
  for (const auto& [j, e] : expected) {
    if (e.first.dim() != n) return false;
    if (e.first.total_elements() == 0) continue;
    auto it = whole.find(j);
    if (it == whole.end() || it->second.functor.total_elements() != e.first.total_elements()) return false;
  }
  return true;
}

}  // namespace khb::test
