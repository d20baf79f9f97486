#pragma once

#include <map>
#include <string>
#include <vector>

#include "relhyp/simplicial.hpp"

namespace relhyp {

/// One cube of a cubical complex.  `verts` lists the 2^axes corners in
/// binary-counter order (bit i of the index is the local coordinate on axis
/// i).  `faces[2*i + s]` is the id of the facet with axis i fixed to s.
struct Cube {
  int axes = 0;
  std::vector<Vertex> verts;
  std::vector<int> faces;
};

/**
 * Cubical complex with explicit face incidence.
 *
 * Every cube is embedded, every face of a cube is itself a cube, and two
 * cubes may share several faces.  Facets are stored by id rather than
 * matched geometrically, so parallel edges between the same two vertices
 * stay distinct.
 */
class CubicalComplex {
 public:
  CubicalComplex() = default;

  /// Validates and builds.  When `derive_faces` is set, missing face lists
  /// are filled in by vertex-set matching (an error if ambiguous) and missing
  /// 0-cubes are appended.
  static CubicalComplex build(int dim, std::vector<Cube> cubes, bool derive_faces);

  int dim() const { return dim_; }
  int cube_count() const { return static_cast<int>(cubes_.size()); }
  const Cube& cube(int id) const { return cubes_.at(static_cast<std::size_t>(id)); }
  const std::vector<Cube>& cubes() const { return cubes_; }

  std::vector<int> cubes_of_dim(int k) const;
  std::vector<Vertex> vertices() const;
  int vertex_cube(Vertex v) const;

  /// Cubes that are not a face of any other cube.
  std::vector<int> maximal_cubes() const;
  /// True when every maximal cube has dimension dim().  Isolated 0-cubes
  /// are tolerated when `allow_isolated_points` is set.
  bool is_pure(bool allow_isolated_points = false) const;

  /// The face of `cube` with local coordinates fixed as in `fix` (one entry
  /// per axis: -1 free, 0 or 1 fixed).
  int face(int cube, const std::vector<int>& fix) const;

 private:
  int dim_ = 0;
  std::vector<Cube> cubes_;
  std::map<Vertex, int> vertex_cube_;
  std::vector<char> is_face_;
};

/// Restriction of a folding map to one cube: the image is the face of the
/// model cube with coordinates fixed by `face` (-1 = free), local axis i goes
/// to model axis `axis_map[i]`, reversed when `flip[i]` is set.
struct CubeFold {
  std::vector<int> face;
  std::vector<int> axis_map;
  std::vector<int> flip;

  /// Model-cube coordinates of the corner with local bits `bits`.
  std::vector<int> image(unsigned bits) const;
};

struct FoldingMap {
  int n = 0;
  std::vector<CubeFold> per_cube;  ///< indexed by cube id
};

struct FoldingCertificate {
  bool ok = false;
  int cube = -1;
  std::string violation;
};

FoldingCertificate validate_folding(const CubicalComplex& c, const FoldingMap& p);

/// Simplicial link of a vertex.  Link vertices are the ids of the edges at
/// `v`; each corner of a k-cube at `v` contributes the (k-1)-simplex of its k
/// edges.  `duplicates` reports two corners giving the same simplex, which
/// means the link is not a simplicial complex.
SimplicialComplex vertex_link(const CubicalComplex& c, Vertex v, bool* duplicates = nullptr);

struct FlagReport {
  bool flag = false;
  /// minimal set of pairwise adjacent vertices spanning no simplex
  std::vector<Vertex> witness;
};

FlagReport is_flag(const SimplicialComplex& l);

struct NpcReport {
  bool pass = false;
  struct Entry {
    Vertex vertex = 0;
    bool flag = false;
    bool duplicates = false;
    std::vector<Vertex> witness;
  };
  std::vector<Entry> vertices;
  std::string first_failure;
};

NpcReport npc_certificate(const CubicalComplex& c);

struct CubulatedTorus {
  CubicalComplex complex;
  FoldingMap folding;
};

/// [-1,1]^n with opposite sides identified, cut into 2^n unit cubes, folded
/// onto [0,1]^n by absolute value.
CubulatedTorus torus_cubulation(int n);

}  // namespace relhyp
