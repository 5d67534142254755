// Exact Smith normal form. Invariant factors are first computed with checked
// 64-bit arithmetic; on overflow the computation restarts with GMP integers.

#include <gmpxx.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "khb/chain_complex.hpp"

namespace khb {

namespace {

struct Overflow {};

// Arithmetic shims so the elimination code is shared by int64 and mpz.
inline std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow{};
  return r;
}
inline std::int64_t sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw Overflow{};
  return r;
}
inline std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
  return r;
}
inline std::int64_t quot(std::int64_t a, std::int64_t b) {
  if (a == INT64_MIN && b == -1) throw Overflow{};
  return a / b;
}
inline std::int64_t absval(std::int64_t a) {
  if (a == INT64_MIN) throw Overflow{};
  return a < 0 ? -a : a;
}
inline std::int64_t gcd_of(std::int64_t a, std::int64_t b) { return std::gcd(absval(a), absval(b)); }
inline bool is_unit(std::int64_t a) { return a == 1 || a == -1; }

inline mpz_class add(const mpz_class& a, const mpz_class& b) { return a + b; }
inline mpz_class sub(const mpz_class& a, const mpz_class& b) { return a - b; }
inline mpz_class mul(const mpz_class& a, const mpz_class& b) { return a * b; }
inline mpz_class quot(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}
inline mpz_class absval(const mpz_class& a) { return abs(a); }
inline mpz_class gcd_of(const mpz_class& a, const mpz_class& b) { return gcd(a, b); }
inline bool is_unit(const mpz_class& a) { return a == 1 || a == -1; }

std::int64_t to_int64(const mpz_class& x) {
  if (!x.fits_slong_p()) throw std::overflow_error("invariant factor exceeds 64 bits");
  return x.get_si();
}
std::int64_t to_int64(std::int64_t x) { return x; }

template <class T>
using Row = std::vector<std::pair<std::size_t, T>>;

// row_a -= q * row_b, both sorted by column.
template <class T>
Row<T> subtract_multiple(const Row<T>& a, const Row<T>& b, const T& q) {
  Row<T> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, sub(T(0), mul(q, b[j].second)));
      ++j;
    } else {
      T v = sub(a[i].second, mul(q, b[j].second));
      if (v != 0) out.emplace_back(a[i].first, v);
      ++i;
      ++j;
    }
  }
  return out;
}

// Diagonalizes a dense matrix by Euclidean row/column reduction with the
// least-absolute-value pivot. Returns the nonzero diagonal (not yet a
// divisibility chain).
template <class T>
std::vector<T> dense_diagonal(std::vector<std::vector<T>> a) {
  std::vector<T> diag;
  std::size_t m = a.size();
  std::size_t n = m ? a[0].size() : 0;
  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    std::size_t pr = m, pc = n;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (a[i][j] != 0 && (pr == m || absval(a[i][j]) < absval(a[pr][pc]))) {
          pr = i;
          pc = j;
        }
    if (pr == m) break;
    for (;;) {
      std::swap(a[t], a[pr]);
      for (auto& row : a) std::swap(row[t], row[pc]);
      bool dirty = false;
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a[i][t] == 0) continue;
        T q = quot(a[i][t], a[t][t]);
        for (std::size_t j = t; j < n; ++j)
          if (a[t][j] != 0) a[i][j] = sub(a[i][j], mul(q, a[t][j]));
        dirty = dirty || a[i][t] != 0;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a[t][j] == 0) continue;
        T q = quot(a[t][j], a[t][t]);
        for (std::size_t i = t; i < m; ++i)
          if (a[i][t] != 0) a[i][j] = sub(a[i][j], mul(q, a[i][t]));
        dirty = dirty || a[t][j] != 0;
      }
      if (!dirty) break;
      pr = t;
      pc = t;
      for (std::size_t i = t + 1; i < m; ++i)
        if (a[i][t] != 0 && absval(a[i][t]) < absval(a[pr][pc])) {
          pr = i;
          pc = t;
        }
      for (std::size_t j = t + 1; j < n; ++j)
        if (a[t][j] != 0 && absval(a[t][j]) < absval(a[pr][pc])) {
          pr = t;
          pc = j;
        }
    }
    diag.push_back(absval(a[t][t]));
  }
  return diag;
}

// Turns a diagonal into the invariant-factor chain with (gcd, lcm) exchanges.
template <class T>
std::vector<T> normalize_chain(std::vector<T> d) {
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      T g = gcd_of(d[i], d[j]);
      if (g == d[i]) continue;
      T l = mul(quot(d[i], g), d[j]);
      d[i] = g;
      d[j] = l;
    }
  std::sort(d.begin(), d.end());
  return d;
}

template <class T>
std::vector<std::int64_t> invariant_factors_impl(const IntegerMatrix& m) {
  std::size_t rows = m.rows(), cols = m.cols();
  std::vector<Row<T>> r(rows);
  std::vector<std::set<std::size_t>> col_rows(cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (m(i, j) != 0) {
        r[i].emplace_back(j, T(m(i, j)));
        col_rows[j].insert(i);
      }
  std::vector<bool> row_alive(rows, true);
  std::size_t units = 0;

  // Unit pivots: eliminate the pivot column from other rows, then drop the
  // pivot row and column (the row is cleared by column operations).
  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t i = 0; i < rows; ++i) {
      if (!row_alive[i] || r[i].empty()) continue;
      std::size_t best = r[i].size();
      for (std::size_t k = 0; k < r[i].size(); ++k)
        if (is_unit(r[i][k].second) &&
            (best == r[i].size() || col_rows[r[i][k].first].size() < col_rows[r[i][best].first].size()))
          best = k;
      if (best == r[i].size()) continue;
      std::size_t c = r[i][best].first;
      T p = r[i][best].second;
      std::vector<std::size_t> others(col_rows[c].begin(), col_rows[c].end());
      for (std::size_t o : others) {
        if (o == i) continue;
        T a = T(0);
        for (const auto& [cc, v] : r[o])
          if (cc == c) a = v;
        T q = mul(a, p);  // p = ±1, so a/p = a*p
        for (const auto& e : r[o]) col_rows[e.first].erase(o);
        r[o] = subtract_multiple(r[o], r[i], q);
        for (const auto& e : r[o]) col_rows[e.first].insert(o);
      }
      for (const auto& e : r[i]) col_rows[e.first].erase(i);
      r[i].clear();
      row_alive[i] = false;
      ++units;
      progress = true;
    }
  }

  std::vector<std::size_t> live_rows, live_cols;
  for (std::size_t i = 0; i < rows; ++i)
    if (row_alive[i] && !r[i].empty()) live_rows.push_back(i);
  for (std::size_t j = 0; j < cols; ++j)
    if (!col_rows[j].empty()) live_cols.push_back(j);
  std::vector<std::size_t> col_pos(cols, 0);
  for (std::size_t k = 0; k < live_cols.size(); ++k) col_pos[live_cols[k]] = k;
  std::vector<std::vector<T>> dense(live_rows.size(), std::vector<T>(live_cols.size(), T(0)));
  for (std::size_t k = 0; k < live_rows.size(); ++k)
    for (const auto& [c, v] : r[live_rows[k]]) dense[k][col_pos[c]] = v;

  std::vector<T> chain = normalize_chain(dense_diagonal(std::move(dense)));
  std::vector<std::int64_t> out(units, 1);
  for (const auto& x : chain) out.push_back(to_int64(x));
  return out;
}

}  // namespace

std::vector<std::int64_t> invariant_factors(const IntegerMatrix& m) {
  try {
    return invariant_factors_impl<std::int64_t>(m);
  } catch (const Overflow&) {
    return invariant_factors_impl<mpz_class>(m);
  }
}

std::vector<std::int64_t> SmithForm::invariant_factors() const {
  std::vector<std::int64_t> out;
  for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i)
    if (d(i, i) != 0) out.push_back(d(i, i));
  return out;
}

SmithForm smith_normal_form(const IntegerMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  using Mat = std::vector<std::vector<mpz_class>>;
  Mat a(rows, std::vector<mpz_class>(cols));
  Mat u(rows, std::vector<mpz_class>(rows, 0));
  Mat v(cols, std::vector<mpz_class>(cols, 0));
  for (std::size_t i = 0; i < rows; ++i) {
    u[i][i] = 1;
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = m(i, j);
  }
  for (std::size_t j = 0; j < cols; ++j) v[j][j] = 1;

  auto swap_rows = [&](std::size_t i, std::size_t k) {
    std::swap(a[i], a[k]);
    std::swap(u[i], u[k]);
  };
  auto swap_cols = [&](std::size_t j, std::size_t k) {
    for (auto& row : a) std::swap(row[j], row[k]);
    for (auto& row : v) std::swap(row[j], row[k]);
  };
  // row_i += q*row_k, applied to A and U.
  auto add_row = [&](std::size_t i, std::size_t k, const mpz_class& q) {
    for (std::size_t j = 0; j < cols; ++j) a[i][j] += q * a[k][j];
    for (std::size_t j = 0; j < rows; ++j) u[i][j] += q * u[k][j];
  };
  // col_j += q*col_k, applied to A and V.
  auto add_col = [&](std::size_t j, std::size_t k, const mpz_class& q) {
    for (std::size_t i = 0; i < rows; ++i) a[i][j] += q * a[i][k];
    for (std::size_t i = 0; i < cols; ++i) v[i][j] += q * v[i][k];
  };

  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    for (;;) {
      std::size_t pr = rows, pc = cols;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a[i][j] != 0 && (pr == rows || abs(a[i][j]) < abs(a[pr][pc]))) {
            pr = i;
            pc = j;
          }
      if (pr == rows) break;
      swap_rows(t, pr);
      swap_cols(t, pc);
      bool dirty = false;
      for (std::size_t i = t + 1; i < rows; ++i)
        if (a[i][t] != 0) {
          add_row(i, t, -quot(a[i][t], a[t][t]));
          dirty = dirty || a[i][t] != 0;
        }
      for (std::size_t j = t + 1; j < cols; ++j)
        if (a[t][j] != 0) {
          add_col(j, t, -quot(a[t][j], a[t][t]));
          dirty = dirty || a[t][j] != 0;
        }
      if (dirty) continue;
      // Enforce divisibility of the remaining block by the pivot.
      std::size_t bad = rows;
      for (std::size_t i = t + 1; i < rows && bad == rows; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            bad = i;
            break;
          }
      if (bad == rows) break;
      add_row(t, bad, 1);
    }
  }
  // Sign normalization is applied to whole rows of A and U together.
  for (std::size_t t = 0; t < std::min(rows, cols); ++t)
    if (a[t][t] < 0) {
      for (auto& x : a[t]) x = -x;
      for (auto& x : u[t]) x = -x;
    }

  auto convert = [](const Mat& x, std::size_t r, std::size_t c) {
    IntegerMatrix out(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) out(i, j) = to_int64(x[i][j]);
    return out;
  };
  return {convert(u, rows, rows), convert(a, rows, cols), convert(v, cols, cols)};
}

}  // namespace khb
