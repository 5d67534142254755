#include "khb/certificate.hpp"

#include <filesystem>
#include <map>
#include <set>
#include <stdexcept>

#include "khb/functor_ops.hpp"
#include "khb/isomorphism.hpp"
#include "khb/totalization.hpp"

namespace khb {

namespace fs = std::filesystem;

namespace {

const char* direction_name(StepDirection d) { return d == StepDirection::forward ? "forward" : "backward"; }

StepDirection parse_direction(const json& step) {
  std::string d = step.value("direction", "forward");
  if (d == "forward") return StepDirection::forward;
  if (d == "backward") return StepDirection::backward;
  throw std::invalid_argument("step direction must be \"forward\" or \"backward\", got \"" + d + "\"");
}

class Evaluator {
 public:
  Evaluator(const json& root, std::string base_dir) : root_(root), base_dir_(std::move(base_dir)) {}

  StableFunctor functor(const json& e) {
    if (!e.is_object()) throw std::invalid_argument("functor expression must be an object");
    if (e.contains("file")) {
      fs::path p = e.at("file").get<std::string>();
      if (p.is_relative()) p = fs::path(base_dir_) / p;
      return functor_from_json(read_json_file(p.string()));
    }
    if (e.contains("ref")) {
      std::string name = e.at("ref").get<std::string>();
      auto it = cache_.find(name);
      if (it != cache_.end()) return it->second;
      if (!root_.contains("functors") || !root_.at("functors").contains(name))
        throw std::invalid_argument("unknown functor reference \"" + name + "\"");
      if (!active_.insert(name).second) throw std::invalid_argument("cyclic functor reference \"" + name + "\"");
      StableFunctor f = functor(root_.at("functors").at(name));
      active_.erase(name);
      return cache_.emplace(name, std::move(f)).first->second;
    }
    if (e.contains("coproduct")) {
      auto [a, b] = pair(e.at("coproduct"));
      return {coproduct(a, b), 0};
    }
    if (e.contains("product")) {
      auto [a, b] = pair(e.at("product"));
      return {product(a, b), 0};
    }
    if (e.contains("extend")) return {extend_along_face_inclusion(plain(e.at("extend")), iota(e)), 0};
    if (e.contains("restrict")) return {restrict_along_face_inclusion(plain(e.at("restrict")), iota(e)), 0};
    if (e.contains("sub")) {
      CubeFunctor f = plain(e.at("sub"));
      return {sub_functor(f, subset(f, e.at("elements"))), 0};
    }
    if (e.contains("vertices") || e.contains("n")) return functor_from_json(e);
    throw std::invalid_argument("unrecognized functor expression " + e.dump());
  }

  CubeFunctor plain(const json& e) { return functor(e).functor; }

  NaturalTransformation transformation(const json& e) {
    if (!e.is_object()) throw std::invalid_argument("transformation expression must be an object");
    if (e.contains("ambient")) {
      NaturalTransformation eta{plain(e.at("ambient"))};
      if (eta.ambient.dim() < 1) throw std::invalid_argument("ambient functor must live on a cube of positive dimension");
      return eta;
    }
    if (e.contains("identity")) return identity_transformation(plain(e.at("identity")));
    if (e.contains("inclusion") || e.contains("projection")) {
      bool incl = e.contains("inclusion");
      const json& body = incl ? e.at("inclusion") : e.at("projection");
      CubeFunctor src = plain(body.at("source"));
      CubeFunctor tgt = plain(body.at("target"));
      // The embedding runs from the smaller functor into the larger one.
      const CubeFunctor& small = incl ? src : tgt;
      const CubeFunctor& large = incl ? tgt : src;
      auto embed = embedding(small, large, body.value("elements", json::object()));
      std::map<std::string, std::string> edge_ids;
      const json edges = body.value("edges", json::object());
      for (const auto& [k, v] : edges.items()) edge_ids[k] = v.get<std::string>();
      IdMap translate = [edge_ids](const std::string& id) {
        auto it = edge_ids.find(id);
        return it == edge_ids.end() ? id : it->second;
      };
      return incl ? inclusion_transformation(src, tgt, embed, translate)
                  : projection_transformation(src, tgt, embed, translate);
    }
    if (e.contains("isomorphism")) {
      const json& body = e.at("isomorphism");
      CubeFunctor src = plain(body.at("source"));
      CubeFunctor tgt = plain(body.at("target"));
      IsoSearchOptions opts;
      if (body.contains("max_nodes")) opts.max_nodes = body.at("max_nodes").get<std::uint64_t>();
      auto iso = find_natural_isomorphism(src, tgt, opts);
      if (!iso) throw std::invalid_argument("no natural isomorphism exists between the given functors");
      return isomorphism_transformation(src, tgt, *iso);
    }
    if (e.contains("zero")) {
      const json& body = e.at("zero");
      CubeFunctor src = plain(body.at("source"));
      CubeFunctor tgt = plain(body.at("target"));
      if (src.dim() != tgt.dim()) throw std::invalid_argument("zero transformation between different cubes");
      std::vector<std::vector<SpanElement>> components(std::size_t{1} << src.dim());
      return build_nat_trans(src, tgt, components);
    }
    throw std::invalid_argument("unrecognized transformation expression " + e.dump());
  }

  static FaceInclusion iota(const json& e) { return face_inclusion_from_json(e.at("iota")); }

 private:
  std::pair<CubeFunctor, CubeFunctor> pair(const json& arr) {
    if (!arr.is_array() || arr.size() != 2) throw std::invalid_argument("binary operation needs exactly two operands");
    return {plain(arr[0]), plain(arr[1])};
  }

  static ElementSubset subset(const CubeFunctor& f, const json& elements) {
    std::vector<std::pair<CubeVertex, std::string>> list;
    for (const auto& item : elements) {
      if (!item.is_array() || item.size() != 2) throw std::invalid_argument("subset entries are [vertex, id] pairs");
      CubeVertex v = CubeVertex::parse(item[0].get<std::string>());
      if (v.dim() != f.dim()) throw std::invalid_argument("subset vertex has the wrong dimension");
      list.emplace_back(v, item[1].get<std::string>());
    }
    return make_subset(f, list);
  }

  // ids of `small` map to ids of `large` at the same vertex; absent ids map
  // to themselves.
  static std::vector<std::vector<std::size_t>> embedding(const CubeFunctor& small, const CubeFunctor& large,
                                                         const json& ids) {
    if (small.dim() != large.dim()) throw std::invalid_argument("transformation between different cubes");
    std::vector<std::vector<std::size_t>> embed;
    for (const auto& v : all_vertices(small.dim())) {
      auto& row = embed.emplace_back();
      for (const auto& id : small.set(v).elements()) {
        std::string target = ids.contains(id) ? ids.at(id).get<std::string>() : id;
        auto k = large.set(v).find(target);
        if (!k) throw std::invalid_argument("element " + id + " at " + v.to_string() + " has no image " + target);
        row.push_back(*k);
      }
    }
    return embed;
  }

  const json& root_;
  std::string base_dir_;
  std::map<std::string, StableFunctor> cache_;
  std::set<std::string> active_;
};

StepVerdict check_face_step(const StableFunctor& from, const StableFunctor& to, const CertificateStep& step) {
  StepVerdict v;
  v.kind = "face";
  const StableFunctor& small = step.direction == StepDirection::forward ? from : to;
  const StableFunctor& large = step.direction == StepDirection::forward ? to : from;
  const FaceInclusion& iota = step.iota;
  if (iota.source_dim() != small.functor.dim() || iota.target_dim() != large.functor.dim()) {
    v.ok = false;
    v.messages.push_back("face inclusion C(" + std::to_string(iota.source_dim()) + ") -> C(" +
                         std::to_string(iota.target_dim()) + ") does not fit functors on C(" +
                         std::to_string(small.functor.dim()) + ") and C(" + std::to_string(large.functor.dim()) + ")");
    return v;
  }
  if (!same_functor_data(extend_along_face_inclusion(small.functor, iota), large.functor)) {
    v.ok = false;
    v.messages.push_back("the larger functor is not the extension of the smaller one along the face inclusion");
  }
  if (large.shift != small.shift - iota.weight()) {
    v.ok = false;
    v.messages.push_back("shift mismatch: expected " + std::to_string(small.shift - iota.weight()) + ", found " +
                         std::to_string(large.shift));
  }
  if (v.ok) v.messages.push_back("extension along the face inclusion matches, |iota| = " + std::to_string(iota.weight()));
  return v;
}

StepVerdict check_nat_trans_step(const StableFunctor& from, const StableFunctor& to, const CertificateStep& step) {
  StepVerdict v;
  v.kind = "nat_trans";
  const StableFunctor& src = step.direction == StepDirection::forward ? from : to;
  const StableFunctor& tgt = step.direction == StepDirection::forward ? to : from;
  if (step.eta.dim() != src.functor.dim() || step.eta.dim() != tgt.functor.dim()) {
    v.ok = false;
    v.messages.push_back("transformation lives on the wrong cube");
    return v;
  }
  if (!same_functor_data(step.eta.source(), src.functor)) {
    v.ok = false;
    v.messages.push_back("restriction to the source slice differs from the source functor");
  }
  if (!same_functor_data(step.eta.target(), tgt.functor)) {
    v.ok = false;
    v.messages.push_back("restriction to the target slice differs from the target functor");
  }
  if (src.shift != tgt.shift) {
    v.ok = false;
    v.messages.push_back("shifts differ: " + std::to_string(src.shift) + " vs " + std::to_string(tgt.shift));
  }
  if (!v.ok) return v;
  auto c0 = validate_c0(step.eta.ambient);
  auto coh = validate_coherence(step.eta.ambient);
  if (!c0.ok || !coh.ok) {
    v.ok = false;
    v.messages.push_back("ambient functor is not coherent");
    return v;
  }
  if (!is_quasi_iso(tot_nat_trans(step.eta))) {
    v.ok = false;
    v.messages.push_back("induced chain map is not a quasi-isomorphism");
  } else {
    v.messages.push_back("induced chain map is a quasi-isomorphism");
  }
  return v;
}

}  // namespace

FaceInclusion face_inclusion_from_json(const json& j) {
  if (!j.is_object() || !j.contains("bottom") || !j.contains("coords"))
    throw std::invalid_argument("face inclusion needs \"bottom\" and \"coords\"");
  return FaceInclusion(CubeVertex::parse(j.at("bottom").get<std::string>()), j.at("coords").get<std::vector<int>>());
}

json face_inclusion_to_json(const FaceInclusion& iota) {
  return {{"bottom", iota.bottom().to_string()}, {"coords", iota.coords()}};
}

CertificateReport verify_certificate(const EquivalenceCertificate& cert) {
  if (cert.sequence.empty()) throw std::invalid_argument("certificate has no functors");
  if (cert.steps.size() + 1 != cert.sequence.size())
    throw std::invalid_argument("a certificate needs exactly one step between consecutive functors");
  CertificateReport report;
  for (std::size_t i = 0; i < cert.steps.size(); ++i) {
    const auto& step = cert.steps[i];
    StepVerdict v = step.kind == CertificateStep::Kind::face
                        ? check_face_step(cert.sequence[i], cert.sequence[i + 1], step)
                        : check_nat_trans_step(cert.sequence[i], cert.sequence[i + 1], step);
    v.index = i;
    v.direction = direction_name(step.direction);
    v.label = step.label;
    report.ok = report.ok && v.ok;
    report.steps.push_back(std::move(v));
  }
  return report;
}

EquivalenceCertificate certificate_from_json(const json& j, const std::string& base_dir) {
  try {
    if (!j.is_object() || !j.contains("sequence")) throw std::invalid_argument("certificate needs a \"sequence\"");
    Evaluator eval(j, base_dir);
    EquivalenceCertificate cert;
    for (const auto& entry : j.at("sequence")) {
      if (!entry.contains("functor")) throw std::invalid_argument("sequence entries need a \"functor\"");
      StableFunctor f = eval.functor(entry.at("functor"));
      bool from_file = entry.at("functor").contains("file");
      if (entry.contains("shift"))
        f.shift = entry.at("shift").get<int>();
      else if (!from_file)
        f.shift = 0;
      cert.sequence.push_back(std::move(f));
    }
    const json steps = j.value("steps", json::array());
    for (const auto& s : steps) {
      CertificateStep step;
      step.direction = parse_direction(s);
      step.label = s.value("label", "");
      std::string kind = s.value("kind", "");
      if (kind == "face") {
        step.kind = CertificateStep::Kind::face;
        step.iota = face_inclusion_from_json(s.at("iota"));
      } else if (kind == "nat_trans") {
        step.kind = CertificateStep::Kind::nat_trans;
        step.eta = eval.transformation(s.at("transformation"));
      } else {
        throw std::invalid_argument("step kind must be \"face\" or \"nat_trans\", got \"" + kind + "\"");
      }
      cert.steps.push_back(std::move(step));
    }
    if (cert.sequence.empty()) throw std::invalid_argument("certificate has no functors");
    if (cert.steps.size() + 1 != cert.sequence.size())
      throw std::invalid_argument("a certificate needs exactly one step between consecutive functors");
    return cert;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed certificate: ") + e.what());
  }
}

EquivalenceCertificate read_certificate(const std::string& path) {
  return certificate_from_json(read_json_file(path), fs::path(path).parent_path().string());
}

json certificate_report_to_json(const CertificateReport& report) {
  json steps = json::array();
  for (const auto& s : report.steps) {
    json row = {{"index", s.index}, {"kind", s.kind}, {"direction", s.direction}, {"ok", s.ok}, {"messages", s.messages}};
    if (!s.label.empty()) row["label"] = s.label;
    steps.push_back(std::move(row));
  }
  return {{"ok", report.ok}, {"steps", std::move(steps)}};
}

}  // namespace khb
