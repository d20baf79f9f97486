#include <set>

#include "doctest.h"
#include "relhyp/corpus.hpp"
#include "relhyp/hyperbolize.hpp"

using namespace relhyp;

namespace {

// Euler characteristic of the cube complex by counting cubes.
std::ptrdiff_t cube_euler(const CubicalComplex& c) {
  std::ptrdiff_t chi = 0;
  for (int k = 0; k <= c.dim(); ++k) chi += (k % 2 ? -1 : 1) * static_cast<std::ptrdiff_t>(c.cubes_of_dim(k).size());
  return chi;
}

}  // namespace

TEST_CASE("bundled blocks") {
  for (int n = 1; n <= 2; ++n) {
    auto cert = validate_block(bundled_block(n));
    CHECK_MESSAGE(cert.ok, cert.violation);
    CHECK(std::abs(cert.degree) == 1);
  }
  auto b2 = bundled_block(2);
  CHECK(euler_characteristic(b2.complex) == -1);
  auto sc = classify_surface(b2.complex);
  CHECK(sc.orientable);
  CHECK(sc.genus == 1);
  CHECK(sc.boundary_components == 1);
  for (int n = 2; n <= 3; ++n) CHECK(validate_block(flat_block(n)).ok);

  auto bad = b2;
  std::swap(bad.faces["1-"], bad.faces["2-"]);
  CHECK_FALSE(validate_block(bad).ok);
  auto bad2 = b2;
  bad2.folding[b2.corners.at("--")] = model_cube(2).vertex_of.at({1, 1});
  CHECK_FALSE(validate_block(bad2).ok);
  auto bad3 = b2;
  bad3.corners["++"] = b2.corners.at("--");
  CHECK_FALSE(validate_block(bad3).ok);
}

TEST_CASE("graphs are subdivided barycentrically") {
  auto b = bundled_block(1);
  for (auto k : {corpus::cycle(5), corpus::path(4), SimplicialComplex({{0, 1}, {1, 2}, {1, 3}, {7}})}) {
    auto h = hyperbolize(k, b);
    CHECK(h.h.complex == barycentric_subdivide(k, 1).complex);
    CHECK(check_driver_contract(driver_by_name("bary1"), k).pass());
  }
  auto pts = hyperbolize(SimplicialComplex({{2}, {5}}), b);
  CHECK(pts.h.complex.vertices().size() == 2);
}

TEST_CASE("driver contract on surfaces") {
  const auto& d = driver_by_name("cubical2");
  for (auto& s : corpus::surfaces()) {
    auto r = check_driver_contract(d, s.complex);
    CHECK_MESSAGE(r.pass(), s.name << ": " << (r.failures.empty() ? "" : r.failures[0]));
  }
  CHECK_THROWS_AS(d.gromov(SimplicialComplex({{0, 1, 2}, {2, 3}})), DomainError);
  CHECK_THROWS_AS(driver_for_dim(3), DriverMissingError);
  CHECK_THROWS_AS(hyperbolize(corpus::simplex(3), bundled_block(2)), DriverMissingError);
}

TEST_CASE("hyperbolized surfaces") {
  auto b = bundled_block(2);
  for (auto& s : corpus::surfaces()) {
    CAPTURE(s.name);
    auto hz = hyperbolize(s.complex, b);
    const auto& h = hz.h;
    const auto& c = hz.gromov.complex;
    CHECK(h.blocks.size() == c.cubes_of_dim(2).size());
    CHECK(h.blocks.size() == 6 * s.complex.count(2));
    // each block has chi -1 and meets the rest along its boundary circle
    CHECK(euler_characteristic(h.complex) == cube_euler(c) - 2 * static_cast<std::ptrdiff_t>(h.blocks.size()));
    CHECK(euler_characteristic(h.complex) == euler_characteristic(s.complex) - 14 * static_cast<std::ptrdiff_t>(s.complex.count(2)));
    CHECK(check_manifold(h.complex, 2).verdict == Verdict::yes);
    CHECK(orient(h.complex, 2).orientable == orient(s.complex, 2).orientable);
    CHECK(path_components(h.complex).size() == path_components(s.complex).size());

    // the shadow is simplicial into K' and covers a single simplex per block
    auto kp = barycentric_subdivide(s.complex, 1).complex;
    SimplicialMap sh{h.complex, kp, h.shadow};
    CHECK_NOTHROW(sh.validate());
    auto bo = orient(b.complex, 2);
    for (const auto& copy : h.blocks) {
      Chain img(2);
      for (std::size_t i = 0; i < b.complex.facets().size(); ++i) {
        std::vector<Vertex> t;
        for (Vertex x : b.complex.facets()[i]) t.push_back(h.shadow.at(copy.vertex_map.at(x)));
        if (!is_degenerate(t)) img.add(t, Rational(bo.signs[i]));
      }
      CHECK(img.terms().size() == 1);
      CHECK(l1_norm(img) == Rational(1));
    }
    SimplicialMap down{h.complex, s.complex, h.to_source};
    CHECK_NOTHROW(down.validate());
    CHECK(homology_map_verdict(h.complex, s.complex, h.to_source, 1, false).surjective);
    for (int k = 0; k <= 2; ++k) CHECK(homology_map_verdict(h.complex, s.complex, h.to_source, k, true).surjective);
  }
}

TEST_CASE("link at a cube vertex") {
  auto b = bundled_block(2);
  auto hz = hyperbolize(corpus::octahedron(), b);
  const auto& c = hz.gromov.complex;
  for (Vertex v : c.vertices()) {
    // every square at v folds v to the same corner of the model square
    const auto& corner = hz.gromov.folding.per_cube[static_cast<std::size_t>(c.vertex_cube(v))].face;
    auto corner_len = link(b.complex, {b.corners.at(corner_key(corner))}).count(1);
    auto lc = vertex_link(c, v);
    auto lh = link(hz.h.complex, {v});
    CHECK(lh.count(1) == lc.count(1) * corner_len);
    CHECK(lh.count(0) == lc.count(0) + lc.count(1) * (corner_len - 1));
    CHECK(path_components(lh).size() == path_components(lc).size());
  }
}

TEST_CASE("strict stage on the cubulated torus") {
  auto t = torus_cubulation(2);
  auto h = strict_hyperbolize(t.complex, t.folding, bundled_block(2));
  CHECK(h.blocks.size() == 4);
  CHECK(euler_characteristic(h.complex) == -8);
  auto sc = classify_surface(h.complex);
  CHECK(sc.orientable);
  CHECK(sc.genus == 5);

  auto r = block_retraction(h, 2);
  CHECK(r.left_inverse);
  CHECK(r.map.target.facets().size() == bundled_block(2).complex.facets().size());
  CHECK(homology_map_verdict(r.map.source, r.map.target, r.map.assignment, 1, false).surjective);
  CHECK(homology_map_verdict(r.map.source, r.map.target, r.map.assignment, 1, true).surjective);

  auto flat = strict_hyperbolize(t.complex, t.folding, flat_block(2));
  CHECK(euler_characteristic(flat.complex) == 0);
  CHECK(classify_surface(flat.complex).genus == 1);

  auto t1 = torus_cubulation(1);
  // two parallel edges glue to the same simplex
  CHECK_THROWS_AS(strict_hyperbolize(t1.complex, t1.folding, bundled_block(1)), DomainError);
  CHECK_THROWS_AS(strict_hyperbolize(t.complex, t.folding, bundled_block(1)), DomainError);
}

TEST_CASE("functoriality for full subcomplexes") {
  auto k = corpus::octahedron();
  auto j = closed_star(k, 0);
  REQUIRE(j == induced_subcomplex(k, j.vertices()));
  auto b = bundled_block(2);
  auto hk = hyperbolize(k, b).h;
  auto hj = hyperbolize(j, b).h;
  std::map<std::string, Vertex> by_label;
  for (auto& [y, s] : hk.label) by_label[s] = y;
  std::map<Vertex, Vertex> emb;
  std::set<Vertex> images;
  for (auto& [y, s] : hj.label) {
    REQUIRE(by_label.count(s));
    emb[y] = by_label[s];
    images.insert(emb[y]);
  }
  CHECK(images.size() == emb.size());
  for (const auto& f : hj.complex.facets()) {
    Simplex img;
    for (Vertex y : f) img.push_back(emb[y]);
    CHECK(hk.complex.contains(make_simplex(img)));
  }
}

TEST_CASE("relative pipeline on an annulus") {
  auto k = corpus::annulus(3);
  auto l = boundary_subcomplex(k);
  REQUIRE(path_components(l).size() == 2);
  auto b = bundled_block(2);
  auto pair = relative_hyperbolize(k, l, {}, b);
  CHECK(pair.r_l_components.size() == 2);
  for (auto& chk : pair.provenance_checks) CHECK_MESSAGE(chk.ok, chk.detail);
  std::set<std::size_t> src(pair.component_source.begin(), pair.component_source.end());
  CHECK(src.size() == 2);
  CHECK(check_manifold(pair.r_k, 2).verdict == Verdict::yes);
  CHECK(boundary_subcomplex(pair.r_k) == pair.r_l);

  auto q = cone_quotient(pair);
  CHECK(q.same_partition);
  CHECK(q.isomorphic);
  CHECK(q.homology_match);
  CHECK(q.euler_quotient == euler_characteristic(pair.r_k) + 2 - euler_characteristic(pair.r_l));

  auto v = volume_report(pair);
  CHECK(v.s == 6);
  CHECK(v.s_le_n);
  CHECK(v.n_le_cs);
  CHECK(v.orientable);
  CHECK(v.conversion_cycle);
  CHECK(v.conversion_bound);
  CHECK(v.absolute_norm <= Rational(4) * v.fundamental_norm);

  auto r = relative_block_retraction(pair);
  CHECK(r.left_inverse);
  CHECK(homology_map_verdict(r.map.source, r.map.target, r.map.assignment, 1, false).surjective);

  CHECK_THROWS_AS(relative_hyperbolize(k, SimplicialComplex(), {}, b), EmptySubcomplexError);
}

TEST_CASE("relative pipeline on a graph") {
  auto k = corpus::path(3);
  auto l = SimplicialComplex({{0}, {3}});
  auto pair = relative_hyperbolize(k, l, {{0, 1}}, bundled_block(1));
  CHECK(pair.cone_vertices.size() == 1);
  CHECK(pair.r_l_components.size() == 2);
  for (auto& chk : pair.provenance_checks) CHECK(chk.ok);
  auto q = cone_quotient(pair);
  CHECK(q.isomorphic);
  auto split = cone_quotient(pair, {{0}, {1}});
  CHECK_FALSE(split.same_partition);
  CHECK(split.homology_match);
  CHECK(split.euler_quotient == 1);
}
