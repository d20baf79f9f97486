#include "relhyp/linalg.hpp"

#include <algorithm>
#include <cstdlib>
#include <queue>

namespace relhyp {

namespace {

std::int64_t checked(__int128 v) {
  constexpr __int128 lim = INT64_MAX;
  if (v > lim || v < -lim) throw OverflowError("integer overflow during Smith reduction");
  return static_cast<std::int64_t>(v);
}

std::int64_t iabs(std::int64_t v) { return v < 0 ? -v : v; }

// c2 <- c2 - factor * c1, keeping rows sorted.
IntColumn axpy(const IntColumn& c2, std::int64_t factor, const IntColumn& c1, bool mod2) {
  IntColumn out;
  out.reserve(c1.size() + c2.size());
  std::size_t i = 0, j = 0;
  auto emit = [&](int row, __int128 v) {
    std::int64_t x = checked(v);
    if (mod2) x &= 1;
    if (x != 0) out.emplace_back(row, x);
  };
  while (i < c2.size() || j < c1.size()) {
    if (j == c1.size() || (i < c2.size() && c2[i].first < c1[j].first)) {
      out.push_back(c2[i++]);
    } else if (i == c2.size() || c1[j].first < c2[i].first) {
      emit(c1[j].first, -static_cast<__int128>(factor) * c1[j].second);
      ++j;
    } else {
      emit(c2[i].first, c2[i].second - static_cast<__int128>(factor) * c1[j].second);
      ++i, ++j;
    }
  }
  return out;
}

}  // namespace

std::vector<std::int64_t> dense_smith(std::vector<std::vector<std::int64_t>> a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::vector<std::int64_t> diag;
  std::size_t t = 0;
  auto row_op = [&](std::size_t dst, std::size_t src, std::int64_t q) {  // row dst -= q * row src
    for (std::size_t j = t; j < cols; ++j)
      a[dst][j] = checked(a[dst][j] - static_cast<__int128>(q) * a[src][j]);
  };
  auto col_op = [&](std::size_t dst, std::size_t src, std::int64_t q) {
    for (std::size_t i = t; i < rows; ++i)
      a[i][dst] = checked(a[i][dst] - static_cast<__int128>(q) * a[i][src]);
  };
  while (t < rows && t < cols) {
    // smallest absolute value, row-major ties
    std::size_t pi = rows, pj = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (a[i][j] != 0 && (pi == rows || iabs(a[i][j]) < iabs(a[pi][pj]))) pi = i, pj = j;
    if (pi == rows) break;
    std::swap(a[t], a[pi]);
    for (auto& r : a) std::swap(r[t], r[pj]);
    bool done = false;
    while (!done) {
      done = true;
      for (std::size_t i = t + 1; i < rows; ++i)
        if (a[i][t] != 0) row_op(i, t, a[i][t] / a[t][t]);
      for (std::size_t j = t + 1; j < cols; ++j)
        if (a[t][j] != 0) col_op(j, t, a[t][j] / a[t][t]);
      // a remainder smaller than the pivot becomes the new pivot
      std::size_t bi = rows, bj = cols;
      for (std::size_t i = t + 1; i < rows; ++i)
        if (a[i][t] != 0 && (bi == rows || iabs(a[i][t]) < iabs(a[bi][t]))) bi = i, bj = t;
      for (std::size_t j = t + 1; j < cols; ++j)
        if (a[t][j] != 0 && (bi == rows || iabs(a[t][j]) < iabs(a[bi][bj]))) bi = t, bj = j;
      if (bi != rows) {
        std::swap(a[t], a[bi]);
        for (auto& r : a) std::swap(r[t], r[bj]);
        done = false;
        continue;
      }
      // divisibility of the remaining block
      for (std::size_t i = t + 1; i < rows && done; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a[i][j] % a[t][t] != 0) {
            for (std::size_t k = t; k < cols; ++k) a[t][k] = checked(static_cast<__int128>(a[t][k]) + a[i][k]);
            done = false;
            break;
          }
    }
    diag.push_back(iabs(a[t][t]));
    ++t;
  }
  return diag;
}

SmithResult smith_invariants(SparseIntMatrix m, Ring ring) {
  const bool mod2 = ring == Ring::mod2;
  const int nc = m.cols();
  if (mod2)
    for (auto& c : m.columns) {
      IntColumn kept;
      for (auto [r, v] : c)
        if (v & 1) kept.emplace_back(r, 1);
      c = std::move(kept);
    }
  for (auto& c : m.columns) std::sort(c.begin(), c.end());

  std::vector<char> alive(static_cast<std::size_t>(nc), 1);
  std::vector<std::vector<int>> row_cols(static_cast<std::size_t>(m.rows));
  for (int c = 0; c < nc; ++c)
    for (auto [r, v] : m.columns[static_cast<std::size_t>(c)]) row_cols[static_cast<std::size_t>(r)].push_back(c);

  auto has_unit = [](const IntColumn& c) {
    return std::any_of(c.begin(), c.end(), [](auto& e) { return e.second == 1 || e.second == -1; });
  };
  using Item = std::pair<std::size_t, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (int c = 0; c < nc; ++c)
    if (has_unit(m.columns[static_cast<std::size_t>(c)])) heap.emplace(m.columns[static_cast<std::size_t>(c)].size(), c);

  SmithResult res;
  while (!heap.empty()) {
    auto [sz, c] = heap.top();
    heap.pop();
    auto& col = m.columns[static_cast<std::size_t>(c)];
    if (!alive[static_cast<std::size_t>(c)] || col.size() != sz || col.empty()) continue;
    int pr = -1;
    std::int64_t pv = 0;
    std::size_t best = SIZE_MAX;
    for (auto [r, v] : col)
      if ((v == 1 || v == -1) && row_cols[static_cast<std::size_t>(r)].size() < best)
        pr = r, pv = v, best = row_cols[static_cast<std::size_t>(r)].size();
    if (pr < 0) continue;
    auto users = std::move(row_cols[static_cast<std::size_t>(pr)]);
    row_cols[static_cast<std::size_t>(pr)].clear();
    for (int c2 : users) {
      if (c2 == c || !alive[static_cast<std::size_t>(c2)]) continue;
      auto& other = m.columns[static_cast<std::size_t>(c2)];
      auto it = std::lower_bound(other.begin(), other.end(), std::make_pair(pr, INT64_MIN));
      if (it == other.end() || it->first != pr) continue;
      const std::int64_t factor = it->second * pv;
      IntColumn before = other;
      other = axpy(other, factor, col, mod2);
      // register rows newly present in c2
      std::size_t bi = 0;
      for (auto [r, v] : other) {
        while (bi < before.size() && before[bi].first < r) ++bi;
        if (bi == before.size() || before[bi].first != r) row_cols[static_cast<std::size_t>(r)].push_back(c2);
      }
      if (has_unit(other)) heap.emplace(other.size(), c2);
    }
    alive[static_cast<std::size_t>(c)] = 0;
    col.clear();
    ++res.rank;
  }

  // Dense remainder: no unit entries left.
  std::vector<int> live_cols;
  std::map<int, std::size_t> row_pos;
  for (int c = 0; c < nc; ++c)
    if (alive[static_cast<std::size_t>(c)] && !m.columns[static_cast<std::size_t>(c)].empty()) {
      live_cols.push_back(c);
      for (auto [r, v] : m.columns[static_cast<std::size_t>(c)]) row_pos.emplace(r, 0);
    }
  if (!live_cols.empty()) {
    std::size_t i = 0;
    for (auto& [r, p] : row_pos) p = i++;
    std::vector<std::vector<std::int64_t>> dense(row_pos.size(), std::vector<std::int64_t>(live_cols.size(), 0));
    for (std::size_t j = 0; j < live_cols.size(); ++j)
      for (auto [r, v] : m.columns[static_cast<std::size_t>(live_cols[j])]) dense[row_pos[r]][j] = v;
    for (auto d : dense_smith(std::move(dense))) {
      ++res.rank;
      if (d > 1 && !mod2) res.torsion.push_back(d);
    }
  }
  std::sort(res.torsion.begin(), res.torsion.end());
  return res;
}

Rational IncrementalBasis::norm(const Rational& r) const {
  if (!mod2_) return r;
  if (!r.is_integer()) throw DomainError("non-integral value in a mod-2 computation");
  return Rational(((r.num() % 2) + 2) % 2);
}

IncrementalBasis::Reduced IncrementalBasis::reduce(const RatVector& v) const {
  Reduced out;
  for (auto& [k, x] : v) {
    Rational y = norm(x);
    if (!y.is_zero()) out.residual.emplace(k, y);
  }
  while (!out.residual.empty()) {
    auto last = std::prev(out.residual.end());
    auto it = by_pivot_.find(last->first);
    if (it == by_pivot_.end()) break;
    const Entry& e = it->second;
    Rational factor = norm(last->second / e.vec.rbegin()->second);
    for (auto& [k, x] : e.vec) {
      Rational y = norm(out.residual[k] - factor * x);
      if (y.is_zero())
        out.residual.erase(k);
      else
        out.residual[k] = y;
    }
    for (auto& [i, c] : e.combo) {
      Rational y = norm(out.coefficients[i] + factor * c);
      if (y.is_zero())
        out.coefficients.erase(i);
      else
        out.coefficients[i] = y;
    }
  }
  return out;
}

std::optional<std::size_t> IncrementalBasis::insert(const RatVector& v) {
  Reduced r = reduce(v);
  if (r.residual.empty()) return std::nullopt;
  const std::size_t idx = count_++;
  Entry e;
  e.vec = std::move(r.residual);
  // e.vec = v - sum coeff_i inserted_i
  e.combo[idx] = Rational(1);
  for (auto& [i, c] : r.coefficients) e.combo[i] = norm(-c);
  by_pivot_.emplace(e.vec.rbegin()->first, std::move(e));
  return idx;
}

std::vector<RatVector> kernel_basis(const SparseIntMatrix& m, bool mod2) {
  IncrementalBasis basis(mod2);
  std::vector<int> column_of;  // inserted index -> column
  std::vector<RatVector> out;
  for (int c = 0; c < m.cols(); ++c) {
    RatVector v;
    for (auto [r, x] : m.columns[static_cast<std::size_t>(c)]) v.emplace(r, Rational(x));
    auto red = basis.reduce(v);
    if (red.residual.empty()) {
      RatVector k;
      k[c] = Rational(1);
      for (auto& [i, coef] : red.coefficients) {
        Rational y = -coef;
        if (mod2) y = Rational(((y.num() % 2) + 2) % 2);
        if (!y.is_zero()) k[column_of[i]] = y;
      }
      out.push_back(std::move(k));
    } else {
      basis.insert(v);
      column_of.push_back(c);
    }
  }
  return out;
}

}  // namespace relhyp
