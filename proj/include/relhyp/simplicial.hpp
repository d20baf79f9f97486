#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relhyp/errors.hpp"

namespace relhyp {

using Vertex = int;

/// A simplex is a strictly increasing list of vertex identifiers.
using Simplex = std::vector<Vertex>;

/// Sorts the vertex list and rejects repeated vertices.
Simplex make_simplex(std::vector<Vertex> verts);

/// True if every vertex of `a` occurs in `b` (both sorted).
bool is_face_of(const Simplex& a, const Simplex& b);

/// Set difference / union on sorted vertex lists.
Simplex simplex_minus(const Simplex& a, const Simplex& b);
Simplex simplex_union(const Simplex& a, const Simplex& b);

/**
 * Finite abstract simplicial complex.
 *
 * The complex is stored by its facets (maximal simplices) together with the
 * full face set, grouped by dimension and sorted lexicographically.  Values
 * are immutable once constructed.
 */
class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  /// Builds the closure of `generators`; non-maximal generators are absorbed.
  explicit SimplicialComplex(std::vector<Simplex> generators);

  /// Strict variant used for external input: duplicate facets and facets that
  /// are proper faces of other facets are rejected instead of absorbed.
  static SimplicialComplex from_facets_strict(std::vector<std::vector<Vertex>> facets);

  bool empty() const { return facets_.empty(); }
  int dimension() const { return static_cast<int>(faces_.size()) - 1; }

  const std::vector<Simplex>& facets() const { return facets_; }
  /// All k-simplices in lexicographic order; empty for k out of range.
  const std::vector<Simplex>& simplices(int k) const;
  std::size_t count(int k) const { return simplices(k).size(); }
  std::vector<Vertex> vertices() const;
  std::vector<std::size_t> f_vector() const;

  bool contains(const Simplex& s) const;
  /// Position of `s` within simplices(s.size()-1); throws if absent.
  std::size_t index_of(const Simplex& s) const;
  std::optional<std::size_t> find(const Simplex& s) const;

  bool is_pure() const;

  friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) {
    return a.facets_ == b.facets_;
  }

 private:
  std::vector<Simplex> facets_;
  std::vector<std::vector<Simplex>> faces_;
};

/// Vertex map between two complexes; the image of each simplex is a simplex.
struct SimplicialMap {
  SimplicialComplex source;
  SimplicialComplex target;
  std::map<Vertex, Vertex> assignment;

  Simplex image(const Simplex& s) const;
  /// Throws DomainError naming the first simplex whose image is not a simplex.
  void validate() const;
};

/// Result of barycentric subdivision: the complex and, per new vertex, the
/// simplex of the original complex whose barycenter it is.
struct Subdivision {
  SimplicialComplex complex;
  std::map<Vertex, Simplex> carrier;

  /// Smallest original simplex containing the new simplex `s`.
  Simplex carrier_of(const Simplex& s) const;
};

SimplicialComplex link(const SimplicialComplex& x, const Simplex& s);
SimplicialComplex closed_star(const SimplicialComplex& x, Vertex v);
SimplicialComplex induced_subcomplex(const SimplicialComplex& x, const std::vector<Vertex>& verts);

/// Subcomplex of `x` consisting of simplices not containing `v`.
SimplicialComplex remove_open_star(const SimplicialComplex& x, Vertex v);

/// Iterated barycentric subdivision.  New vertices are numbered by the
/// position of their simplex in the canonical order (dimension, then lex).
Subdivision barycentric_subdivide(const SimplicialComplex& x, int times = 1);

std::vector<SimplicialComplex> path_components(const SimplicialComplex& x);

struct ConedComplex {
  SimplicialComplex complex;
  std::vector<Vertex> cone_vertices;
  /// partition block per cone vertex, as indices into path_components(L)
  std::vector<std::vector<std::size_t>> blocks;
};

/// Attaches one cone per partition block over the union of the listed
/// components of `l`.  An empty partition means one block per component.
ConedComplex attach_cones(const SimplicialComplex& k, const SimplicialComplex& l,
                          std::vector<std::vector<std::size_t>> partition = {});

SimplicialComplex boundary_subcomplex(const SimplicialComplex& x);

std::ptrdiff_t euler_characteristic(const SimplicialComplex& x);

enum class Verdict { yes, no, undetermined };
std::string to_string(Verdict v);

struct ManifoldCertificate {
  Verdict verdict = Verdict::undetermined;
  std::string detail;
};

/// Combinatorial manifold test; exact for n <= 3.
ManifoldCertificate check_manifold(const SimplicialComplex& x, int n);

struct Orientation {
  /// sign per facet, same order as facets()
  std::vector<int> signs;
  bool orientable = false;
  /// facets around an orientation-reversing loop when not orientable
  std::vector<Simplex> obstruction;
};

/// Sign propagation over codimension-one adjacency.
Orientation orient(const SimplicialComplex& x, int n);

struct SurfaceClass {
  bool orientable = false;
  int genus = 0;  ///< orientable genus or number of cross-caps
  int boundary_components = 0;
  std::ptrdiff_t euler = 0;
};

/// Classifies a connected compact surface (possibly with boundary).
SurfaceClass classify_surface(const SimplicialComplex& x);

/// Vertex relabeling; throws if the map is not injective on the vertex set.
SimplicialComplex relabel(const SimplicialComplex& x, const std::map<Vertex, Vertex>& m);

struct SubdivisionCheck {
  bool ok = false;
  std::string detail;
};

/**
 * Checks that `fine` is a subdivision of the graph or point set `coarse`
 * under the vertex carriers: every coarse vertex carries exactly one fine
 * vertex, and every coarse edge is carried by a path joining the fine
 * vertices of its endpoints through vertices carried by the edge itself.
 * Only coarse complexes of dimension <= 1 are supported.
 */
SubdivisionCheck check_graph_subdivision(const SimplicialComplex& fine,
                                         const std::map<Vertex, Simplex>& carrier,
                                         const SimplicialComplex& coarse);

}  // namespace relhyp
