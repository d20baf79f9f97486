// Acceptance suite: one PASS/FAIL line per criterion.  All checks are exact;
// the only tolerances are the wall-clock limits below.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "relhyp/corpus.hpp"
#include "relhyp/groupgeom.hpp"

using namespace relhyp;

namespace {

constexpr double kLimit1 = 1.0;
constexpr double kLimit2 = 10.0;
constexpr double kLimit3 = 5.0;
constexpr double kLimit4 = 30.0;
constexpr double kLimit5 = 30.0;
constexpr double kLimit6 = 10.0;
constexpr double kLimit7 = 30.0;
constexpr double kLimit8 = 30.0;
constexpr double kLimit9 = 60.0;
constexpr double kLimit10 = 120.0;

struct Outcome {
  bool ok = true;
  std::string detail;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

int failures = 0;

void criterion(int id, const char* name, double limit, const std::function<void(Outcome&)>& body) {
  Outcome o;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (o.ok && secs > limit) {
    o.ok = false;
    o.detail = "over the time limit";
  }
  if (!o.ok) ++failures;
  std::printf("%s %2d %s (%.2f s of %.0f s)%s%s\n", o.ok ? "PASS" : "FAIL", id, name, secs, limit,
              o.detail.empty() ? "" : ": ", o.detail.c_str());
  std::fflush(stdout);
}

SimplicialComplex random_graph(std::mt19937& rng) {
  int n = 1 + static_cast<int>(rng() % 12);
  std::vector<Simplex> gens;
  std::bernoulli_distribution coin(0.3);
  for (int v = 0; v < n; ++v) {
    gens.push_back({3 * v});
    for (int w = v + 1; w < n; ++w)
      if (coin(rng)) gens.push_back({3 * v, 3 * w});
  }
  return SimplicialComplex(gens);
}

// the boundary of the n-dimensional cross-polytope: 2n vertices, antipodes
// the only non-adjacent pairs, 2^n facets, flag
bool is_cross_polytope(const SimplicialComplex& l, int n) {
  auto verts = l.vertices();
  if (static_cast<int>(verts.size()) != 2 * n) return false;
  if (l.facets().size() != (std::size_t{1} << n)) return false;
  for (const auto& f : l.facets())
    if (static_cast<int>(f.size()) != n) return false;
  for (Vertex v : verts) {
    int missing = 0;
    for (Vertex w : verts)
      if (w != v && !l.contains(make_simplex({v, w}))) ++missing;
    if (missing != 1) return false;
  }
  return is_flag(l).flag;
}

std::vector<std::vector<int>> floyd(const MetricGraph& g) {
  const int inf = 1 << 20;
  std::size_t n = g.size();
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (auto [u, v] : g.edges()) d[g.index(u)][g.index(v)] = d[g.index(v)][g.index(u)] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

Rational brute_delta(const MetricGraph& g) {
  auto d = floyd(g);
  std::size_t n = g.size();
  int best = 0;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t z = 0; z < n; ++z)
        for (std::size_t w = 0; w < n; ++w) {
          int s[3] = {d[x][y] + d[z][w], d[x][z] + d[y][w], d[x][w] + d[y][z]};
          std::sort(s, s + 3);
          best = std::max(best, s[2] - s[1]);
        }
  return Rational(best, 2);
}

// whole-graph enumeration of embedded cycles, then counted per edge
std::map<std::pair<int, int>, std::vector<std::size_t>> brute_census(const MetricGraph& g, int lmax) {
  std::set<std::set<std::pair<int, int>>> cycles;
  std::vector<int> path;
  std::function<void(int)> dfs = [&](int cur) {
    for (auto wi : g.neighbors(g.index(cur))) {
      int w = g.vertices()[wi];
      if (w == path.front() && path.size() >= 3) {
        std::set<std::pair<int, int>> es;
        for (std::size_t i = 0; i < path.size(); ++i) {
          int a = path[i], b = path[(i + 1) % path.size()];
          es.insert({std::min(a, b), std::max(a, b)});
        }
        cycles.insert(es);
      }
      if (w <= path.front() || std::find(path.begin(), path.end(), w) != path.end()) continue;
      if (static_cast<int>(path.size()) >= lmax) continue;
      path.push_back(w);
      dfs(w);
      path.pop_back();
    }
  };
  for (int v : g.vertices()) {
    path = {v};
    dfs(v);
  }
  std::map<std::pair<int, int>, std::vector<std::size_t>> out;
  for (auto e : g.edges()) out[e].assign(static_cast<std::size_t>(lmax) + 1, 0);
  for (const auto& c : cycles)
    for (const auto& e : c) ++out[e][c.size()];
  return out;
}

MetricGraph graph_from_mask(int n, std::uint64_t mask) {
  std::vector<int> v;
  std::vector<std::pair<int, int>> e;
  int bit = 0;
  for (int i = 0; i < n; ++i) {
    v.push_back(i);
    for (int j = i + 1; j < n; ++j, ++bit)
      if (mask >> bit & 1U) e.emplace_back(i, j);
  }
  return MetricGraph(v, e);
}

std::size_t falling(std::size_t a, std::size_t k) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < k; ++i) r *= a - i;
  return r;
}

void check_volume(Outcome& o, const RelativePair& pair, const std::string& name) {
  auto v = volume_report(pair);
  o.expect(v.s == pair.s && v.blocks == pair.blocks, name + ": s and N as recorded by the pipeline");
  o.expect(v.s_le_n && v.s <= v.blocks, name + ": s <= N");
  o.expect(v.n_le_cs && v.blocks <= v.c_n * v.s, name + ": N <= C s");
  o.expect(v.facet_count == pair.r_k.facets().size(), name + ": facet count");
  o.expect(v.fundamental_norm <= Rational(static_cast<std::int64_t>(v.facet_count)), name + ": ||R, dR|| <= facets");
  o.expect(!v.lower_bound.empty(), name + ": symbolic lower bound missing");
  if (v.conversion_cycle)
    o.expect(v.absolute_norm <= Rational(v.n + 2) * v.fundamental_norm, name + ": ||Z|| <= (n+2) ||R, dR||");
}

}  // namespace

int main() {
  criterion(1, "dim <= 1 hyperbolization is barycentric subdivision", kLimit1, [](Outcome& o) {
    std::mt19937 rng(20240601);
    auto b = bundled_block(1);
    for (int t = 0; t < 20; ++t) {
      auto k = random_graph(rng);
      o.expect(hyperbolize(k, b).h.complex == barycentric_subdivide(k, 1).complex, "graph " + std::to_string(t));
    }
  });

  criterion(2, "torus cubulation is a folded NPC cube complex", kLimit2, [](Outcome& o) {
    for (int n = 2; n <= 5; ++n) {
      auto t = torus_cubulation(n);
      auto tag = "n=" + std::to_string(n);
      o.expect(t.complex.cubes_of_dim(n).size() == (std::size_t{1} << n), tag + ": top cube count");
      o.expect(validate_folding(t.complex, t.folding).ok, tag + ": folding");
      for (Vertex v : t.complex.vertices()) {
        bool dup = false;
        auto l = vertex_link(t.complex, v, &dup);
        o.expect(!dup && is_cross_polytope(l, n), tag + ": link at " + std::to_string(v));
      }
      o.expect(npc_certificate(t.complex).pass, tag + ": npc certificate");
    }
  });

  criterion(3, "strict hyperbolization of the cubulated 2-torus", kLimit3, [](Outcome& o) {
    auto t = torus_cubulation(2);
    auto b = bundled_block(2);
    auto h = strict_hyperbolize(t.complex, t.folding, b).complex;
    o.expect(check_manifold(h, 2).verdict == Verdict::yes, "not a surface");
    o.expect(boundary_subcomplex(h).empty(), "has boundary");
    o.expect(orient(h, 2).orientable, "not orientable");
    o.expect(path_components(h).size() == 1, "not connected");
    auto chi = euler_characteristic(h);
    o.expect(chi < 0, "chi >= 0");
    // open cells: block interiors, open face pieces over edges, points over vertices
    SimplicialComplex rim = boundary_subcomplex(b.complex);
    std::ptrdiff_t open_block = euler_characteristic(b.complex) - euler_characteristic(rim);
    const auto& arc = b.faces.at("1-");
    std::ptrdiff_t open_arc = euler_characteristic(arc) - static_cast<std::ptrdiff_t>(boundary_subcomplex(arc).vertices().size());
    auto sq = static_cast<std::ptrdiff_t>(t.complex.cubes_of_dim(2).size());
    auto ed = static_cast<std::ptrdiff_t>(t.complex.cubes_of_dim(1).size());
    auto vx = static_cast<std::ptrdiff_t>(t.complex.cubes_of_dim(0).size());
    o.expect(chi == sq * open_block + ed * open_arc + vx, "inclusion-exclusion count");
  });

  criterion(4, "relative pipeline on (disk, circle)", kLimit4, [](Outcome& o) {
    auto k = corpus::simplex(2);
    auto l = boundary_subcomplex(k);
    auto pair = relative_hyperbolize(k, l, {}, bundled_block(2));
    for (const auto& c : pair.provenance_checks) o.expect(c.ok, "provenance: " + c.detail);
    o.expect(pair.r_l_components.size() == 1, "R_L components");
    bool cycle = path_components(pair.r_l).size() == 1 && pair.r_l.dimension() == 1;
    for (Vertex v : pair.r_l.vertices()) cycle = cycle && link(pair.r_l, {v}).vertices().size() == 2;
    o.expect(cycle, "R_L is not a circle");
    o.expect(boundary_subcomplex(pair.r_k) == pair.r_l, "boundary of R_K differs from R_L");
    o.expect(orient(pair.r_k, 2).orientable, "R_K not orientable");
    auto chi = euler_characteristic(pair.r_k);
    o.expect(chi < 0, "chi(R_K) >= 0");
    auto ambient = presentation_from_complex(pair.r_k, pair.r_k.vertices().front());
    auto lp = presentation_from_complex(pair.r_l, pair.r_l.vertices().front());
    std::vector<Word> loops;
    for (std::size_t g = 0; g < lp.generators.size(); ++g) loops.push_back(edge_path_word(ambient, generator_loop(lp, g)));
    auto t = tietze_simplify(ambient, 1000000, loops);
    o.expect(t.presentation.relators.empty(), "not free after Tietze");
    o.expect(static_cast<std::ptrdiff_t>(t.presentation.generators.size()) == 1 - chi, "free rank != 1 - chi");
    // in a free group a nonempty reduced word has infinite order, so Z -> pi1(R_K) is injective
    bool pi1_injective = t.presentation.relators.empty() && t.tracked.size() == 1 && !free_reduce(t.tracked[0]).empty();
    std::map<Vertex, Vertex> id;
    for (Vertex v : pair.r_l.vertices()) id[v] = v;
    auto h1 = homology_map_verdict(pair.r_l, pair.r_k, id, 1, false);
    o.expect(h1.injective, "H1(R_L) -> H1(R_K) has image rank " + std::to_string(h1.image_rank) + " of " +
                               std::to_string(h1.source_betti) + " (pi1(R_L) -> pi1(R_K) " +
                               (pi1_injective ? "injective" : "not certified") + ")");
    o.expect(pi1_injective, "pi1(R_L) -> pi1(R_K) not certified injective");
  });

  criterion(5, "cone quotient matches H(K with cones)", kLimit5, [](Outcome& o) {
    auto check = [&](const ConeQuotientReport& q, const std::string& name) {
      o.expect(q.euler_quotient == q.euler_direct, name + ": chi");
      o.expect(q.homology_match, name + ": homology flag");
      o.expect(q.homology_quotient.size() == q.homology_direct.size(), name + ": degrees");
      for (std::size_t i = 0; i < q.homology_quotient.size() && i < q.homology_direct.size(); ++i)
        o.expect(q.homology_quotient[i].betti == q.homology_direct[i].betti &&
                     q.homology_quotient[i].torsion == q.homology_direct[i].torsion,
                 name + ": H_" + std::to_string(i));
    };
    auto disk = relative_hyperbolize(corpus::simplex(2), corpus::simplex_boundary(2), {}, bundled_block(2));
    check(cone_quotient(disk), "disk");
    auto ann = corpus::annulus(3);
    auto pair = relative_hyperbolize(ann, boundary_subcomplex(ann), {}, bundled_block(2));
    check(cone_quotient(pair), "annulus");
    check(cone_quotient(pair, {{0}, {1}}), "annulus, split partition");
  });

  criterion(6, "relative chain norms on cone pairs", kLimit6, [](Outcome& o) {
    std::mt19937 rng(606);
    for (int n = 1; n <= 6; ++n) {
      Chain expect = n % 2 == 0 ? Chain::point_simplex(0, n - 1) : Chain(n - 1);
      o.expect(boundary(Chain::point_simplex(0, n)) == expect, "parity rule at n=" + std::to_string(n));
    }
    for (int t = 0; t < 200; ++t) {
      const int n = 2 + t % 3;
      auto m = barycentric_subdivide(corpus::simplex(n), 1).complex;
      const Vertex s_pt = m.vertices().back() + 1;
      std::map<Vertex, Vertex> q;
      for (Vertex v : m.vertices()) q[v] = v;
      for (Vertex v : boundary_subcomplex(m).vertices()) q[v] = s_pt;
      std::vector<Simplex> images;
      for (const auto& f : m.facets()) {
        Simplex img;
        for (Vertex v : f) img.push_back(q[v]);
        std::sort(img.begin(), img.end());
        img.erase(std::unique(img.begin(), img.end()), img.end());
        images.push_back(img);
      }
      ConePairDatum pair{SimplicialComplex(images), s_pt};
      auto coeff = [&] { return Rational(static_cast<std::int64_t>(rng() % 9) - 4, 1 + rng() % 5); };
      Chain c = coeff() * push_forward(fundamental_cycle(m, orient(m, n)), q, true);
      // plus boundaries of random singular (n+1)-simplices inside Z
      for (int extra = 0; extra < 3; ++extra) {
        const auto& sim = images[rng() % images.size()];
        std::vector<Vertex> tuple;
        for (int i = 0; i < n + 2; ++i) tuple.push_back(sim[rng() % sim.size()]);
        Chain big(n + 1);
        big.add(tuple, coeff());
        c += boundary(big);
      }
      const auto tag = "sample " + std::to_string(t) + " (n=" + std::to_string(n) + ")";
      o.expect(l1_norm(boundary(c)) <= Rational(n + 1) * l1_norm(c), tag + ": ||dc|| <= (n+1)||c||");
      o.expect(boundary_norm_check(c), tag + ": boundary_norm_check");
      auto r = relative_to_absolute(c, pair);
      o.expect(boundary(r.absolute).is_zero(), tag + ": output is not a cycle");
      o.expect(r.is_cycle, tag + ": cycle flag");
      o.expect(l1_norm(r.absolute) <= Rational(n + 2) * l1_norm(c), tag + ": ||c'|| <= (n+2)||c||");
      if (n % 2 == 1) o.expect(r.absolute == c, tag + ": c' != c for odd n");
      for (const auto& [key, val] : (r.absolute - c).terms())
        o.expect(std::all_of(key.begin(), key.end(), [&](Vertex v) { return v == s_pt; }), tag + ": change off S");
    }
  });

  criterion(7, "volume bookkeeping on pipeline runs", kLimit7, [](Outcome& o) {
    auto disk = relative_hyperbolize(corpus::simplex(2), corpus::simplex_boundary(2), {}, bundled_block(2));
    check_volume(o, disk, "disk");
    auto ann = corpus::annulus(3);
    check_volume(o, relative_hyperbolize(ann, boundary_subcomplex(ann), {}, bundled_block(2)), "annulus");
    auto fan = corpus::fan_disk(5);
    check_volume(o, relative_hyperbolize(fan, boundary_subcomplex(fan), {}, bundled_block(2)), "fan");
    check_volume(o, relative_hyperbolize(corpus::path(3), SimplicialComplex({{0}, {3}}), {}, bundled_block(1)), "path");
    auto abs = volume_report(hyperbolize(corpus::torus_7(), bundled_block(2)), corpus::torus_7());
    o.expect(abs.s_le_n && abs.n_le_cs, "closed torus: s <= N <= C s");
    o.expect(abs.fundamental_norm <= Rational(static_cast<std::int64_t>(abs.facet_count)), "closed torus: norm");
  });

  criterion(8, "splitting along a hyperbolized simplex", kLimit8, [](Outcome& o) {
    auto b = bundled_block(2);
    std::vector<std::pair<std::string, SimplicialComplex>> ks{
        {"two triangles", corpus::two_triangles()}, {"fan", corpus::fan_disk(4)}, {"octahedron", corpus::octahedron()}};
    for (const auto& [name, k] : ks) {
      auto s = splitting_along_simplex(k, k.facets().front(), b);
      auto h = homology(hyperbolize(k, b).h.complex, 1, Coefficients::integers);
      o.expect(s.amalgam_h1.rank == h.betti && s.amalgam_h1.torsion == h.torsion, name + ": amalgam H1 vs SNF");
      o.expect(s.h1_match, name + ": direct presentation");
      o.expect(s.zero_map, name + ": H_1(H(boundary sigma)) -> H_1(H(sigma)) not zero");
    }
  });

  criterion(9, "graph hyperbolicity and fineness", kLimit9, [](Outcome& o) {
    std::mt19937 rng(909);
    for (int t = 0; t < 30; ++t) {
      int n = 1 + static_cast<int>(rng() % 40);
      std::vector<int> v;
      std::vector<std::pair<int, int>> e;
      for (int i = 0; i < n; ++i) {
        v.push_back(i);
        if (i) e.emplace_back(static_cast<int>(rng() % static_cast<unsigned>(i)), i);
      }
      MetricGraph tree(v, e);
      o.expect(delta_hyperbolicity(tree) == Rational(0), "tree delta");
      for (const auto& c : fineness_census(tree, 12)) o.expect(c.total == 0, "tree census");
    }
    for (int m = 3; m <= 12; ++m) {
      std::vector<int> v;
      std::vector<std::pair<int, int>> e;
      for (int i = 0; i < m; ++i) {
        v.push_back(i);
        e.emplace_back(i, (i + 1) % m);
      }
      MetricGraph cyc(v, e);
      for (const auto& c : fineness_census(cyc, std::max(3, m))) o.expect(c.total == 1, "C_m census");
      if (m > 3)
        for (const auto& c : fineness_census(cyc, m - 1)) o.expect(c.total == 0, "C_m census below m");
    }
    for (int n = 4; n <= 6; ++n) {
      auto kn = graph_from_mask(n, (std::uint64_t{1} << (n * (n - 1) / 2)) - 1);
      for (int lmax = 3; lmax <= n; ++lmax) {
        std::size_t want = 0;
        for (int len = 3; len <= lmax; ++len) want += falling(static_cast<std::size_t>(n - 2), static_cast<std::size_t>(len - 2));
        for (const auto& c : fineness_census(kn, lmax)) o.expect(c.total == want, "K_n census");
      }
    }
    // every graph on at most 5 vertices, then random graphs on 6 to 10
    auto compare = [&](const MetricGraph& g, int lmax) {
      auto oracle = brute_census(g, lmax);
      for (const auto& c : fineness_census(g, lmax)) o.expect(c.by_length == oracle.at(c.edge), "census vs oracle");
      if (g.connected()) {
        o.expect(delta_hyperbolicity(g, DeltaKernel::scalar) == brute_delta(g), "delta vs oracle");
        if (avx2_available()) o.expect(delta_hyperbolicity(g, DeltaKernel::avx2) == brute_delta(g), "avx2 delta vs oracle");
      }
    };
    for (int n = 1; n <= 5; ++n)
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n * (n - 1) / 2)); ++mask) compare(graph_from_mask(n, mask), 5);
    for (int t = 0; t < 400; ++t) {
      int n = 6 + t % 5;
      std::uint64_t mask = 0;
      std::bernoulli_distribution coin(0.15 + 0.1 * (t % 5));
      for (int bit = 0; bit < n * (n - 1) / 2; ++bit)
        if (coin(rng)) mask |= std::uint64_t{1} << bit;
      compare(graph_from_mask(n, mask), n);
    }
  });

  criterion(10, "dim-2 driver contract on the surface corpus", kLimit10, [](Outcome& o) {
    const auto& d = driver_by_name("cubical2");
    auto surfaces = corpus::surfaces();
    o.expect(surfaces.size() >= 10, "corpus smaller than 10");
    bool closed = false, bounded = false;
    for (const auto& s : surfaces) {
      (boundary_subcomplex(s.complex).empty() ? closed : bounded) = true;
      auto r = check_driver_contract(d, s.complex);
      o.expect(r.folding_valid && r.npc && r.link_provenance && r.manifold_preserved && r.shadow_surjective && r.pass(),
               s.name + (r.failures.empty() ? "" : ": " + r.failures.front()));
    }
    o.expect(closed && bounded, "corpus lacks closed or bounded surfaces");
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
