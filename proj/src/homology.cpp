#include "relhyp/homology.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

namespace relhyp {

std::string to_string(Coefficients c) {
  switch (c) {
    case Coefficients::integers: return "Z";
    case Coefficients::rationals: return "Q";
    case Coefficients::mod2: return "Z2";
  }
  return "?";
}

SparseIntMatrix boundary_matrix(const SimplicialComplex& x, int k) {
  SparseIntMatrix m;
  m.rows = k >= 1 ? static_cast<int>(x.count(k - 1)) : 0;
  if (k < 1) {
    m.columns.assign(x.count(k), {});
    return m;
  }
  for (const Simplex& s : x.simplices(k)) {
    IntColumn col;
    for (std::size_t i = 0; i < s.size(); ++i) {
      Simplex face;
      for (std::size_t j = 0; j < s.size(); ++j)
        if (j != i) face.push_back(s[j]);
      col.emplace_back(static_cast<int>(x.index_of(face)), (i % 2 == 0) ? 1 : -1);
    }
    std::sort(col.begin(), col.end());
    m.columns.push_back(std::move(col));
  }
  return m;
}

namespace {

RatVector primitive(RatVector v) {
  std::int64_t l = 1;
  for (auto& [k, x] : v) l = std::lcm(l, x.den());
  std::int64_t g = 0;
  for (auto& [k, x] : v) {
    x = x * Rational(l);
    g = std::gcd(g, x.num());
  }
  if (g > 1)
    for (auto& [k, x] : v) x = Rational(x.num() / g);
  return v;
}

Chain to_chain(const SimplicialComplex& x, int k, const RatVector& v) {
  Chain c(k);
  const auto& simp = x.simplices(k);
  for (auto& [i, a] : v) c.add(simp[static_cast<std::size_t>(i)], a);
  return c;
}

std::size_t rank_of(const SparseIntMatrix& m, bool mod2) {
  if (m.cols() == 0 || m.rows == 0) return 0;
  return smith_invariants(m, mod2 ? Ring::mod2 : Ring::integers).rank;
}

std::vector<Chain> spanning_forest_cycles(const SimplicialComplex& x) {
  const auto verts = x.vertices();
  std::map<Vertex, std::vector<Vertex>> adj;
  for (const Simplex& e : x.simplices(1)) {
    adj[e[0]].push_back(e[1]);
    adj[e[1]].push_back(e[0]);
  }
  std::map<Vertex, Vertex> parent;
  std::map<Vertex, int> depth;
  std::set<Simplex> tree;
  for (Vertex root : verts) {
    if (parent.count(root)) continue;
    parent[root] = root;
    depth[root] = 0;
    std::deque<Vertex> q{root};
    while (!q.empty()) {
      Vertex u = q.front();
      q.pop_front();
      for (Vertex w : adj[u])
        if (!parent.count(w)) {
          parent[w] = u;
          depth[w] = depth[u] + 1;
          tree.insert(make_simplex({u, w}));
          q.push_back(w);
        }
    }
  }
  std::vector<Chain> out;
  for (const Simplex& e : x.simplices(1)) {
    if (tree.count(e)) continue;
    Chain c(1);
    c.add({e[0], e[1]}, Rational(1));
    // tree path from e[1] back to e[0]
    Vertex a = e[1], b = e[0];
    std::vector<Vertex> up_a{a}, up_b{b};
    while (a != b) {
      if (depth[a] >= depth[b]) {
        a = parent[a];
        up_a.push_back(a);
      } else {
        b = parent[b];
        up_b.push_back(b);
      }
    }
    for (std::size_t i = 0; i + 1 < up_a.size(); ++i) c.add({up_a[i], up_a[i + 1]}, Rational(1));
    for (std::size_t i = up_b.size() - 1; i > 0; --i) c.add({up_b[i], up_b[i - 1]}, Rational(1));
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

RatVector to_vector(const SimplicialComplex& x, const Chain& c) {
  RatVector v;
  for (auto& [key, a] : c.terms()) {
    if (is_degenerate(key)) throw DomainError("to_vector: degenerate simplex has no coordinate");
    v[static_cast<int>(x.index_of(key))] = a;
  }
  return v;
}

std::vector<Chain> cycle_basis(const SimplicialComplex& x, int k, bool mod2) {
  std::vector<Chain> out;
  if (k < 0 || k > x.dimension()) return out;
  if (k == 0) {
    for (Vertex v : x.vertices()) out.push_back(Chain::point_simplex(v, 0));
    return out;
  }
  if (k == 1) return spanning_forest_cycles(x);
  for (auto& v : kernel_basis(boundary_matrix(x, k), mod2)) out.push_back(to_chain(x, k, mod2 ? v : primitive(v)));
  return out;
}

HomologyResult homology(const SimplicialComplex& x, int k, Coefficients c, bool with_representatives) {
  if (k < 0) throw DomainError("homology: negative degree");
  HomologyResult r;
  r.degree = k;
  r.coefficients = c;
  if (k > x.dimension()) return r;
  const bool mod2 = c == Coefficients::mod2;
  const std::size_t nk = x.count(k);
  const std::size_t rk = rank_of(boundary_matrix(x, k), mod2);
  std::size_t rk1 = 0;
  if (k + 1 <= x.dimension()) {
    SparseIntMatrix d = boundary_matrix(x, k + 1);
    if (c == Coefficients::integers) {
      auto s = smith_invariants(std::move(d), Ring::integers);
      rk1 = s.rank;
      r.torsion = s.torsion;
    } else {
      rk1 = rank_of(d, mod2);
    }
  }
  r.betti = static_cast<int>(nk - rk - rk1);
  if (with_representatives && r.betti > 0) {
    IncrementalBasis basis(mod2);
    if (k + 1 <= x.dimension())
      for (auto& col : boundary_matrix(x, k + 1).columns) {
        RatVector v;
        for (auto [row, a] : col) v.emplace(row, Rational(a));
        basis.insert(v);
      }
    for (Chain& z : cycle_basis(x, k, mod2)) {
      if (basis.insert(to_vector(x, z))) r.representatives.push_back(std::move(z));
      if (static_cast<int>(r.representatives.size()) == r.betti) break;
    }
  }
  return r;
}

MapVerdict homology_map_verdict(const SimplicialComplex& source, const SimplicialComplex& target,
                                const std::map<Vertex, Vertex>& f, int k, bool mod2) {
  MapVerdict v;
  v.degree = k;
  const Coefficients c = mod2 ? Coefficients::mod2 : Coefficients::rationals;
  v.source_betti = homology(source, k, c).betti;
  v.target_betti = homology(target, k, c).betti;
  if (k > target.dimension() || v.source_betti == 0 || v.target_betti == 0) {
    v.image_rank = 0;
  } else {
    SparseIntMatrix m;
    m.rows = static_cast<int>(target.count(k));
    if (k + 1 <= target.dimension()) m = boundary_matrix(target, k + 1);
    const std::size_t rb = rank_of(m, mod2);
    for (const Chain& z : cycle_basis(source, k, mod2)) {
      RatVector img = to_vector(target, push_forward(z, f));
      if (!mod2) img = primitive(img);
      IntColumn col;
      for (auto& [row, a] : img) col.emplace_back(row, a.num());
      m.columns.push_back(std::move(col));
    }
    v.image_rank = static_cast<int>(rank_of(m, mod2) - rb);
  }
  v.surjective = v.image_rank == v.target_betti;
  v.injective = v.image_rank == v.source_betti;
  v.zero = v.image_rank == 0;
  return v;
}

InducedMap induced_map(const SimplicialMap& f, int k, Coefficients c) {
  f.validate();
  const bool mod2 = c == Coefficients::mod2;
  const Coefficients field = mod2 ? Coefficients::mod2 : Coefficients::rationals;
  InducedMap out;
  out.degree = k;
  out.coefficients = c;
  out.source_generators = homology(f.source, k, field, true).representatives;
  out.target_generators = homology(f.target, k, field, true).representatives;
  out.verdict = homology_map_verdict(f.source, f.target, f.assignment, k, mod2);

  IncrementalBasis basis(mod2);
  std::size_t nb = 0;
  if (k + 1 <= f.target.dimension())
    for (auto& col : boundary_matrix(f.target, k + 1).columns) {
      RatVector v;
      for (auto [row, a] : col) v.emplace(row, Rational(a));
      if (basis.insert(v)) ++nb;
    }
  for (const Chain& z : out.target_generators)
    if (!basis.insert(to_vector(f.target, z))) throw DomainError("induced_map: generators are dependent");

  const std::size_t nt = out.target_generators.size();
  out.matrix.assign(nt, std::vector<Rational>(out.source_generators.size()));
  for (std::size_t j = 0; j < out.source_generators.size(); ++j) {
    auto red = basis.reduce(to_vector(f.target, push_forward(out.source_generators[j], f.assignment)));
    if (!red.residual.empty()) throw DomainError("induced_map: image is not a cycle");
    for (auto& [idx, a] : red.coefficients)
      if (idx >= nb) out.matrix[idx - nb][j] = a;
  }
  return out;
}

}  // namespace relhyp
