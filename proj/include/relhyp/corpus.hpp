#pragma once

#include <string>
#include <vector>

#include "relhyp/simplicial.hpp"

// Small named triangulations used by the verification suite and tests.
namespace relhyp::corpus {

SimplicialComplex simplex(int k);
SimplicialComplex simplex_boundary(int k);
SimplicialComplex cycle(int m);
SimplicialComplex path(int edges);
SimplicialComplex two_triangles();
SimplicialComplex octahedron();
SimplicialComplex rp2_6();
SimplicialComplex torus_7();
/// a x b grid torus, each square cut along its diagonal (a, b >= 3)
SimplicialComplex grid_torus(int a, int b);
/// a x b grid with one side glued with a flip
SimplicialComplex grid_klein(int a, int b);
SimplicialComplex mobius_5();
/// cylinder over an m-cycle, one row of squares
SimplicialComplex annulus(int m);
/// cone over an m-cycle (disk with m boundary edges)
SimplicialComplex fan_disk(int m);

struct NamedComplex {
  std::string name;
  SimplicialComplex complex;
};

/// Surfaces with and without boundary.
std::vector<NamedComplex> surfaces();

}  // namespace relhyp::corpus
