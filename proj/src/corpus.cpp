#include "relhyp/corpus.hpp"

namespace relhyp::corpus {

SimplicialComplex simplex(int k) {
  Simplex s;
  for (int i = 0; i <= k; ++i) s.push_back(i);
  return SimplicialComplex({s});
}

SimplicialComplex simplex_boundary(int k) {
  std::vector<Simplex> fs;
  for (int skip = 0; skip <= k; ++skip) {
    Simplex s;
    for (int i = 0; i <= k; ++i)
      if (i != skip) s.push_back(i);
    fs.push_back(s);
  }
  return SimplicialComplex(fs);
}

SimplicialComplex cycle(int m) {
  std::vector<Simplex> fs;
  for (int i = 0; i < m; ++i) fs.push_back(make_simplex({i, (i + 1) % m}));
  return SimplicialComplex(fs);
}

SimplicialComplex path(int edges) {
  std::vector<Simplex> fs;
  for (int i = 0; i < edges; ++i) fs.push_back({i, i + 1});
  return SimplicialComplex(fs);
}

SimplicialComplex two_triangles() { return SimplicialComplex({{0, 1, 2}, {1, 2, 3}}); }

SimplicialComplex octahedron() {
  std::vector<Simplex> fs;
  for (int a : {0, 1})
    for (int b : {2, 3})
      for (int c : {4, 5}) fs.push_back({a, b, c});
  return SimplicialComplex(fs);
}

SimplicialComplex rp2_6() {
  return SimplicialComplex({{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 1, 5},
                            {1, 2, 4}, {2, 3, 5}, {1, 3, 4}, {2, 4, 5}, {1, 3, 5}});
}

SimplicialComplex torus_7() {
  std::vector<Simplex> fs;
  for (int i = 0; i < 7; ++i) {
    fs.push_back(make_simplex({i, (i + 1) % 7, (i + 3) % 7}));
    fs.push_back(make_simplex({i, (i + 2) % 7, (i + 3) % 7}));
  }
  return SimplicialComplex(fs);
}

namespace {

SimplicialComplex grid(int a, int b, bool flip) {
  auto id = [&](int i, int j) {
    if (j == b) {
      j = 0;
      if (flip) i = (a - i) % a;
    }
    return (i % a) * b + j;
  };
  std::vector<Simplex> fs;
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) {
      int v00 = id(i, j), v10 = id(i + 1, j), v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
      fs.push_back(make_simplex({v00, v10, v11}));
      fs.push_back(make_simplex({v00, v01, v11}));
    }
  return SimplicialComplex(fs);
}

}  // namespace

SimplicialComplex grid_torus(int a, int b) { return grid(a, b, false); }
SimplicialComplex grid_klein(int a, int b) { return grid(a, b, true); }

SimplicialComplex mobius_5() {
  std::vector<Simplex> fs;
  for (int i = 0; i < 5; ++i) fs.push_back(make_simplex({i, (i + 1) % 5, (i + 2) % 5}));
  return SimplicialComplex(fs);
}

SimplicialComplex annulus(int m) {
  std::vector<Simplex> fs;
  for (int c = 0; c < m; ++c) {
    int d = (c + 1) % m;
    fs.push_back(make_simplex({c, d, m + c}));
    fs.push_back(make_simplex({d, m + d, m + c}));
  }
  return SimplicialComplex(fs);
}

SimplicialComplex fan_disk(int m) {
  std::vector<Simplex> fs;
  for (int i = 1; i <= m; ++i) fs.push_back(make_simplex({0, i, i % m + 1}));
  return SimplicialComplex(fs);
}

std::vector<NamedComplex> surfaces() {
  return {
      {"triangle", simplex(2)},
      {"two_triangles", two_triangles()},
      {"tetrahedron_boundary", simplex_boundary(3)},
      {"octahedron", octahedron()},
      {"rp2_6", rp2_6()},
      {"torus_7", torus_7()},
      {"torus_3x3", grid_torus(3, 3)},
      {"klein_4x4", grid_klein(4, 4)},
      {"mobius_5", mobius_5()},
      {"annulus_4", annulus(4)},
      {"hexagon_disk", fan_disk(6)},
  };
}

}  // namespace relhyp::corpus
