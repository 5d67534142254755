#pragma once

#include <string>
#include <vector>

#include "khb/nat_trans.hpp"
#include "khb/serialization.hpp"

namespace khb {

enum class StepDirection { forward, backward };

/// One link of a stable-equivalence chain between consecutive entries of the
/// sequence. A forward face step asserts F_{i+1} = (F_i)_ι with
/// r_{i+1} = r_i - |ι|; a forward transformation step has η: F_i -> F_{i+1}.
/// Backward steps swap the roles of i and i+1.
struct CertificateStep {
  enum class Kind { face, nat_trans };
  Kind kind = Kind::face;
  StepDirection direction = StepDirection::forward;
  FaceInclusion iota;
  NaturalTransformation eta;
  std::string label;
};

struct EquivalenceCertificate {
  std::vector<StableFunctor> sequence;
  std::vector<CertificateStep> steps;
};

struct StepVerdict {
  std::size_t index = 0;
  std::string kind;
  std::string direction;
  std::string label;
  bool ok = true;
  std::vector<std::string> messages;
};

struct CertificateReport {
  bool ok = true;
  std::vector<StepVerdict> steps;
};

/// Checks every step. A certificate with one functor and no steps passes.
/// Throws std::invalid_argument if the step count is not one less than the
/// sequence length.
CertificateReport verify_certificate(const EquivalenceCertificate& cert);

/// Reads the certificate format:
///
///   {"functors": {name: expr, ...},            (optional)
///    "sequence": [{"functor": expr, "shift": r}, ...],
///    "steps": [{"kind": "face", "iota": {"bottom": "000", "coords": [1,2]},
///               "direction": "forward"},
///              {"kind": "nat_trans", "transformation": texpr,
///               "direction": "backward"}, ...]}
///
/// Functor expressions: {"file": path}, {"ref": name}, {"coproduct": [e, e]},
/// {"product": [e, e]}, {"extend": e, "iota": ...}, {"restrict": e, "iota": ...},
/// {"sub": e, "elements": [[vertex, id], ...]} or an inline functor object.
/// Transformation expressions: {"inclusion": {"source", "target", "elements",
/// "edges"}}, {"projection": {...}}, {"isomorphism": {"source", "target"}},
/// {"zero": {"source", "target"}}, {"identity": e}, {"ambient": e}.
/// Relative file paths resolve against `base_dir`. Throws
/// std::invalid_argument on malformed input.
EquivalenceCertificate certificate_from_json(const json& j, const std::string& base_dir = ".");
EquivalenceCertificate read_certificate(const std::string& path);

FaceInclusion face_inclusion_from_json(const json& j);
json face_inclusion_to_json(const FaceInclusion& iota);
json certificate_report_to_json(const CertificateReport& report);

}  // namespace khb
