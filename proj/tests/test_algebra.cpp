#include <random>

#include "doctest.h"
#include "relhyp/corpus.hpp"
#include "relhyp/homology.hpp"

using namespace relhyp;

namespace {

// Dense Gaussian elimination over Q, independent of the sparse engine.
std::size_t dense_rank_q(std::vector<std::vector<Rational>> a) {
  std::size_t rank = 0;
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && a[p][c].is_zero()) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t r = 0; r < rows; ++r)
      if (r != rank && !a[r][c].is_zero()) {
        Rational f = a[r][c] / a[rank][c];
        for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[rank][k];
      }
    ++rank;
  }
  return rank;
}

std::size_t dense_rank_2(std::vector<std::vector<int>> a) {
  std::size_t rank = 0;
  const std::size_t rows = a.size(), cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t p = rank;
    while (p < rows && !(a[p][c] & 1)) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[rank]);
    for (std::size_t r = 0; r < rows; ++r)
      if (r != rank && (a[r][c] & 1))
        for (std::size_t k = c; k < cols; ++k) a[r][k] ^= a[rank][k] & 1;
    ++rank;
  }
  return rank;
}

std::vector<std::vector<int>> dense_boundary(const SimplicialComplex& x, int k) {
  std::vector<std::vector<int>> m(x.count(k - 1), std::vector<int>(x.count(k), 0));
  const auto& simp = x.simplices(k);
  for (std::size_t j = 0; j < simp.size(); ++j)
    for (std::size_t i = 0; i < simp[j].size(); ++i) {
      Simplex f = simp[j];
      f.erase(f.begin() + static_cast<long>(i));
      m[x.index_of(f)][j] = (i % 2 == 0) ? 1 : -1;
    }
  return m;
}

int oracle_betti(const SimplicialComplex& x, int k, bool mod2) {
  auto rank = [&](int d) -> std::size_t {
    if (d < 1 || d > x.dimension()) return 0;
    auto m = dense_boundary(x, d);
    if (mod2) return dense_rank_2(m);
    std::vector<std::vector<Rational>> q(m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
      for (int v : m[i]) q[i].push_back(Rational(v));
    return dense_rank_q(q);
  };
  return static_cast<int>(x.count(k) - rank(k) - rank(k + 1));
}

Chain random_chain(const SimplicialComplex& x, int k, std::mt19937& rng) {
  Chain c(k);
  const auto& simp = x.simplices(k);
  std::uniform_int_distribution<int> coef(-5, 5), den(1, 4);
  std::uniform_int_distribution<std::size_t> pick(0, simp.size() - 1);
  for (int t = 0; t < 6; ++t) {
    Simplex s = simp[pick(rng)];
    std::shuffle(s.begin(), s.end(), rng);
    c.add(s, Rational(coef(rng), den(rng)));
  }
  return c;
}

}  // namespace

TEST_CASE("boundary and norm") {
  Chain e(1);
  e.add({0, 1}, Rational(1));
  Chain de = boundary(e);
  CHECK(de.coefficient({1}) == Rational(1));
  CHECK(de.coefficient({0}) == Rational(-1));
  Chain zero(2);
  CHECK(l1_norm(zero) == Rational(0));
  Chain c(2);
  c.add({0, 1, 2}, Rational(3, 2));
  c.add({1, 2, 3}, Rational(-1, 2));
  CHECK(l1_norm(c) == Rational(2));
  Chain single(2);
  single.add({0, 1, 2}, Rational(1));
  CHECK(l1_norm(boundary(single)) == Rational(3));
  Chain pair(2);
  pair.add({0, 1, 2}, Rational(1));
  pair.add({1, 2, 3}, Rational(-1));
  CHECK(l1_norm(boundary(pair)) == Rational(4));

  std::mt19937 rng(7);
  auto x = corpus::simplex(4);
  for (int t = 0; t < 100; ++t) {
    int k = 2 + t % 3;
    Chain a = random_chain(x, k, rng), b = random_chain(x, k, rng);
    CHECK(boundary(boundary(a)).is_zero());
    CHECK(boundary_norm_check(a));
    CHECK(l1_norm(a + b) <= l1_norm(a) + l1_norm(b));
    CHECK(l1_norm(Rational(-3, 2) * a) == Rational(3, 2) * l1_norm(a));
  }
  // orientation is folded into the sign
  Chain r(1);
  r.add({1, 0}, Rational(1));
  CHECK(r.coefficient({0, 1}) == Rational(-1));
}

TEST_CASE("homology engine") {
  auto h1 = homology(corpus::cycle(3), 1, Coefficients::integers, true);
  CHECK(h1.betti == 1);
  CHECK(h1.torsion.empty());
  REQUIRE(h1.representatives.size() == 1);
  CHECK(boundary(h1.representatives[0]).is_zero());

  auto rp1 = homology(corpus::rp2_6(), 1, Coefficients::integers);
  CHECK(rp1.betti == 0);
  CHECK(rp1.torsion == std::vector<std::int64_t>{2});
  CHECK(homology(corpus::rp2_6(), 2, Coefficients::integers).betti == 0);
  CHECK(homology(corpus::rp2_6(), 2, Coefficients::mod2).betti == 1);
  CHECK(homology(corpus::simplex_boundary(3), 2, Coefficients::integers).betti == 1);
  auto kb = homology(corpus::grid_klein(4, 4), 1, Coefficients::integers);
  CHECK(kb.betti == 1);
  CHECK(kb.torsion == std::vector<std::int64_t>{2});
  CHECK(homology(corpus::torus_7(), 1, Coefficients::rationals).betti == 2);
  CHECK(homology(corpus::torus_7(), 5, Coefficients::rationals).betti == 0);

  for (auto& s : corpus::surfaces()) {
    for (int k = 0; k <= 2; ++k) {
      auto z = homology(s.complex, k, Coefficients::integers, true);
      auto q = homology(s.complex, k, Coefficients::rationals);
      auto m = homology(s.complex, k, Coefficients::mod2, true);
      CHECK(z.betti == oracle_betti(s.complex, k, false));
      CHECK(m.betti == oracle_betti(s.complex, k, true));
      CHECK(q.betti == z.betti);
      // universal coefficients with F2
      int even = 0;
      for (auto t : z.torsion) even += t % 2 == 0;
      if (k > 0)
        for (auto t : homology(s.complex, k - 1, Coefficients::integers).torsion) even += t % 2 == 0;
      CHECK(m.betti == z.betti + even);
      for (auto t = z.torsion.begin(); t + 1 < z.torsion.end(); ++t) CHECK(*(t + 1) % *t == 0);
      CHECK(z.representatives.size() == static_cast<std::size_t>(z.betti));
      CHECK(m.representatives.size() == static_cast<std::size_t>(m.betti));
      for (auto& r : z.representatives) CHECK(boundary(r).is_zero());
    }
  }
}

TEST_CASE("smith normal form") {
  // diag(2, 6) hidden by unimodular mixing
  SparseIntMatrix m;
  m.rows = 2;
  m.columns = {{{0, 2}, {1, 4}}, {{0, 6}, {1, 18}}};
  // [[2,6],[4,18]] -> gcd 2, det 12 -> (2, 6)
  auto s = smith_invariants(m, Ring::integers);
  CHECK(s.rank == 2);
  CHECK(s.torsion == std::vector<std::int64_t>{2, 6});
  CHECK(smith_invariants(m, Ring::mod2).rank == 0);
  CHECK(dense_smith({{4, 0}, {0, 6}}) == std::vector<std::int64_t>{2, 12});
}

TEST_CASE("induced maps") {
  auto t = corpus::torus_7();
  SimplicialMap id{t, t, {}};
  for (Vertex v : t.vertices()) id.assignment[v] = v;
  auto im = induced_map(id, 1, Coefficients::integers);
  REQUIRE(im.matrix.size() == 2);
  CHECK(im.matrix[0][0] == Rational(1));
  CHECK(im.matrix[0][1] == Rational(0));
  CHECK(im.matrix[1][1] == Rational(1));
  CHECK(im.verdict.surjective);
  CHECK(im.verdict.injective);

  auto wrap = [](int from, int to) {
    SimplicialMap f{corpus::cycle(from), corpus::cycle(to), {}};
    for (int i = 0; i < from; ++i) f.assignment[i] = i % to;
    return f;
  };
  auto m2 = induced_map(wrap(6, 3), 1, Coefficients::integers);
  REQUIRE(m2.matrix.size() == 1);
  CHECK(m2.matrix[0][0].abs() == Rational(2));
  CHECK_FALSE(m2.verdict.zero);
  auto mod2 = induced_map(wrap(6, 3), 1, Coefficients::mod2);
  CHECK(mod2.matrix[0][0] == Rational(0));
  CHECK(mod2.verdict.zero);

  // composition
  auto a = induced_map(wrap(12, 6), 1, Coefficients::rationals);
  auto b = induced_map(wrap(6, 3), 1, Coefficients::rationals);
  auto ab = induced_map(wrap(12, 3), 1, Coefficients::rationals);
  CHECK(ab.matrix[0][0] == b.matrix[0][0] * a.matrix[0][0]);

  SimplicialMap inc{corpus::simplex_boundary(3), corpus::simplex(3), {}};
  for (int i = 0; i < 4; ++i) inc.assignment[i] = i;
  auto z = induced_map(inc, 2, Coefficients::integers);
  CHECK(z.matrix.empty());
  CHECK(z.verdict.zero);
  CHECK(z.verdict.surjective);

  SimplicialMap bad{corpus::cycle(3), corpus::path(2), {{0, 0}, {1, 1}, {2, 2}}};
  CHECK_THROWS_AS(induced_map(bad, 1, Coefficients::integers), DomainError);
}

TEST_CASE("point simplex parity") {
  CHECK(point_simplex_boundary(3).is_zero());
  CHECK(point_simplex_boundary(2) == Chain::point_simplex(0, 1));
  CHECK(point_simplex_boundary(4) == Chain::point_simplex(0, 3));
  CHECK(point_simplex_boundary(1).is_zero());
  CHECK_THROWS_AS(point_simplex_boundary(0), DomainError);
}

TEST_CASE("relative to absolute") {
  // fan disk with its boundary collapsed to the point S
  auto disk = corpus::fan_disk(6);
  const Vertex s_pt = 100;
  std::map<Vertex, Vertex> q{{0, 0}};
  for (int i = 1; i <= 6; ++i) q[i] = s_pt;
  auto c = push_forward(fundamental_cycle(disk, orient(disk, 2)), q, true);
  ConePairDatum pair{SimplicialComplex({{0, s_pt}}), s_pt};
  auto r = relative_to_absolute(c, pair);
  CHECK(r.is_cycle);
  CHECK(r.bound_holds);
  CHECK(r.same_relative_class);
  // every triangle collapses onto (0,S,S), whose boundary is the point simplex
  REQUIRE(c.terms().size() == 1);
  CHECK(r.scalar == c.coefficient({0, s_pt, s_pt}));
  CHECK(r.norm_output == Rational(2) * r.norm_input);
  CHECK(r.norm_output <= Rational(4) * r.norm_input);

  Chain not_rel(2);
  not_rel.add({0, 1, 2}, Rational(1));
  CHECK_THROWS_AS(relative_to_absolute(not_rel, {corpus::simplex(2), 0}), DomainError);
}
