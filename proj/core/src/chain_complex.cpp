#include "khb/chain_complex.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace khb {

const std::vector<std::string>& ChainComplex::basis(int deg) const {
  static const std::vector<std::string> kEmpty;
  auto it = basis_.find(deg);
  return it == basis_.end() ? kEmpty : it->second;
}

void ChainComplex::set_basis(int deg, std::vector<std::string> labels) {
  d_.erase(deg);
  d_.erase(deg + 1);
  if (labels.empty())
    basis_.erase(deg);
  else
    basis_[deg] = std::move(labels);
}

IntegerMatrix ChainComplex::d(int deg) const {
  auto it = d_.find(deg);
  if (it != d_.end()) return it->second;
  return IntegerMatrix(rank(deg - 1), rank(deg));
}

void ChainComplex::set_d(int deg, IntegerMatrix m) {
  if (m.rows() != rank(deg - 1) || m.cols() != rank(deg))
    throw std::invalid_argument("differential shape does not match the bases in degree " + std::to_string(deg));
  if (m.is_zero())
    d_.erase(deg);
  else
    d_[deg] = std::move(m);
}

std::vector<int> ChainComplex::degrees() const {
  std::vector<int> out;
  for (const auto& [deg, labels] : basis_) out.push_back(deg);
  return out;
}

std::size_t ChainComplex::total_rank() const {
  std::size_t total = 0;
  for (const auto& [deg, labels] : basis_) total += labels.size();
  return total;
}

bool ChainComplex::d_squared_zero() const {
  for (const auto& [deg, m] : d_) {
    auto below = d_.find(deg - 1);
    if (below != d_.end() && !(below->second * m).is_zero()) return false;
  }
  return true;
}

void ChainComplex::check() const {
  if (!d_squared_zero()) throw std::logic_error("differential does not square to zero");
}

IntegerMatrix ChainMap::at(int deg) const {
  auto it = maps.find(deg);
  if (it != maps.end()) return it->second;
  return IntegerMatrix(target.rank(deg), source.rank(deg));
}

bool ChainMap::commutes() const {
  std::set<int> degs;
  for (int d : source.degrees()) degs.insert(d);
  for (int d : target.degrees()) degs.insert(d);
  for (int d : degs)
    if (!(target.d(d) * at(d) == at(d - 1) * source.d(d))) return false;
  return true;
}

ChainMap identity_map(const ChainComplex& c) {
  ChainMap f{c, c, {}};
  for (int d : c.degrees()) f.maps[d] = IntegerMatrix::identity(c.rank(d));
  return f;
}

ChainMap compose(const ChainMap& g, const ChainMap& f) {
  ChainMap out{f.source, g.target, {}};
  for (int d : f.source.degrees()) out.maps[d] = g.at(d) * f.at(d);
  return out;
}

std::map<int, HomologyGroup> homology(const ChainComplex& c) {
  std::map<int, HomologyGroup> out;
  std::map<int, std::vector<std::int64_t>> factors;
  auto factors_of = [&](int deg) -> const std::vector<std::int64_t>& {
    auto it = factors.find(deg);
    if (it == factors.end()) it = factors.emplace(deg, invariant_factors(c.d(deg))).first;
    return it->second;
  };
  for (int deg : c.degrees()) {
    const auto& out_of = factors_of(deg);
    const auto& into = factors_of(deg + 1);
    HomologyGroup h;
    h.degree = deg;
    h.rank = c.rank(deg) - out_of.size() - into.size();
    for (std::int64_t x : into)
      if (x > 1) h.torsion.push_back(x);
    out[deg] = h;
  }
  return out;
}

std::string to_string(const HomologyGroup& h) {
  if (h.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  if (h.rank) {
    os << "Z";
    if (h.rank > 1) os << "^" << h.rank;
    first = false;
  }
  for (std::int64_t t : h.torsion) {
    os << (first ? "" : "+") << "Z/" << t;
    first = false;
  }
  return os.str();
}

namespace {

std::set<int> union_degrees(const ChainComplex& a, const ChainComplex& b) {
  std::set<int> degs;
  for (int d : a.degrees()) degs.insert(d);
  for (int d : b.degrees()) degs.insert(d);
  return degs;
}

void put(IntegerMatrix& m, const IntegerMatrix& block, std::size_t r0, std::size_t c0, int sign = 1) {
  for (std::size_t i = 0; i < block.rows(); ++i)
    for (std::size_t j = 0; j < block.cols(); ++j) m(r0 + i, c0 + j) = sign * block(i, j);
}

}  // namespace

ChainComplex cone(const ChainMap& f) {
  const ChainComplex& c = f.source;
  const ChainComplex& d = f.target;
  ChainComplex out;
  std::set<int> degs;
  for (int x : c.degrees()) degs.insert(x + 1);
  for (int x : d.degrees()) degs.insert(x);
  for (int x : degs) {
    std::vector<std::string> labels;
    for (const auto& l : c.basis(x - 1)) labels.push_back("1" + l);
    for (const auto& l : d.basis(x)) labels.push_back("0" + l);
    out.set_basis(x, std::move(labels));
  }
  for (int x : degs) {
    if (out.rank(x - 1) == 0) continue;
    IntegerMatrix m(out.rank(x - 1), out.rank(x));
    std::size_t c_lo = c.rank(x - 2);
    put(m, c.d(x - 1), 0, 0, -1);
    put(m, f.at(x - 1), c_lo, 0);
    put(m, d.d(x), c_lo, c.rank(x - 1));
    out.set_d(x, std::move(m));
  }
  return out;
}

bool is_quasi_iso(const ChainMap& f) {
  for (const auto& [deg, h] : homology(cone(f)))
    if (!h.is_zero()) return false;
  return true;
}

ChainComplex dualize(const ChainComplex& c) {
  ChainComplex out;
  for (int d : c.degrees()) out.set_basis(-d, c.basis(d));
  for (int d : c.degrees())
    if (out.rank(-d - 1) > 0) out.set_d(-d, c.d(d + 1).transpose());
  return out;
}

ChainComplex shift(const ChainComplex& c, int r) {
  ChainComplex out;
  for (int d : c.degrees()) out.set_basis(d + r, c.basis(d));
  for (int d : c.degrees()) out.set_d(d + r, c.d(d));
  return out;
}

ChainComplex suspend(const ChainComplex& c, int r) {
  ChainComplex out = shift(c, r);
  if (r % 2 != 0)
    for (int d : out.degrees()) out.set_d(d, -out.d(d));
  return out;
}

ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b) {
  ChainComplex out;
  auto degs = union_degrees(a, b);
  for (int d : degs) {
    std::vector<std::string> labels;
    for (const auto& l : a.basis(d)) labels.push_back("0:" + l);
    for (const auto& l : b.basis(d)) labels.push_back("1:" + l);
    out.set_basis(d, std::move(labels));
  }
  for (int d : degs) out.set_d(d, block_diagonal(a.d(d), b.d(d)));
  return out;
}

ChainComplex tensor(const ChainComplex& a, const ChainComplex& b) {
  ChainComplex out;
  // Offsets of the (p, q) block inside degree p+q.
  std::map<int, std::map<int, std::size_t>> offset;
  std::set<int> degs;
  for (int p : a.degrees())
    for (int q : b.degrees()) degs.insert(p + q);
  for (int n : degs) {
    std::vector<std::string> labels;
    for (int p : a.degrees()) {
      int q = n - p;
      if (b.rank(q) == 0) continue;
      offset[n][p] = labels.size();
      for (const auto& x : a.basis(p))
        for (const auto& y : b.basis(q)) labels.push_back(x + "⊗" + y);
    }
    out.set_basis(n, std::move(labels));
  }
  for (int n : degs) {
    if (out.rank(n - 1) == 0) continue;
    IntegerMatrix m(out.rank(n - 1), out.rank(n));
    for (const auto& [p, off] : offset[n]) {
      int q = n - p;
      std::size_t nb = b.rank(q);
      // ∂x ⊗ y lands in block (p-1, q).
      if (offset[n - 1].count(p - 1)) {
        IntegerMatrix da = a.d(p);
        std::size_t off2 = offset[n - 1][p - 1];
        for (std::size_t i = 0; i < da.rows(); ++i)
          for (std::size_t j = 0; j < da.cols(); ++j)
            if (da(i, j))
              for (std::size_t y = 0; y < nb; ++y) m(off2 + i * nb + y, off + j * nb + y) += da(i, j);
      }
      // (-1)^p x ⊗ ∂y lands in block (p, q-1).
      if (offset[n - 1].count(p)) {
        IntegerMatrix db = b.d(q);
        std::size_t nb2 = b.rank(q - 1);
        std::size_t off2 = offset[n - 1][p];
        int sign = (p % 2 == 0) ? 1 : -1;
        for (std::size_t x = 0; x < a.rank(p); ++x)
          for (std::size_t i = 0; i < db.rows(); ++i)
            for (std::size_t j = 0; j < db.cols(); ++j)
              if (db(i, j)) m(off2 + x * nb2 + i, off + x * nb + j) += sign * db(i, j);
      }
    }
    out.set_d(n, std::move(m));
  }
  return out;
}

bool isomorphic_by_labels(const ChainComplex& a, const ChainComplex& b,
                          const std::function<std::string(const std::string&)>& relabel) {
  if (a.degrees() != b.degrees()) return false;
  std::map<int, std::vector<std::size_t>> perm;  // index in a -> index in b
  for (int d : a.degrees()) {
    if (a.rank(d) != b.rank(d)) return false;
    std::unordered_map<std::string, std::size_t> where;
    for (std::size_t i = 0; i < b.rank(d); ++i) where.emplace(b.basis(d)[i], i);
    auto& p = perm[d];
    std::vector<bool> hit(b.rank(d), false);
    for (const auto& l : a.basis(d)) {
      auto it = where.find(relabel(l));
      if (it == where.end() || hit[it->second]) return false;
      hit[it->second] = true;
      p.push_back(it->second);
    }
  }
  for (int d : a.degrees()) {
    if (a.rank(d - 1) == 0) continue;
    IntegerMatrix da = a.d(d), db = b.d(d);
    for (std::size_t i = 0; i < da.rows(); ++i)
      for (std::size_t j = 0; j < da.cols(); ++j)
        if (da(i, j) != db(perm[d - 1][i], perm[d][j])) return false;
  }
  return true;
}

}  // namespace khb
