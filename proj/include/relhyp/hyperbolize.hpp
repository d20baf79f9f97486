#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "relhyp/chain.hpp"
#include "relhyp/cubical.hpp"
#include "relhyp/homology.hpp"
#include "relhyp/simplicial.hpp"

namespace relhyp {

/// Subdivision of the model cube that blocks fold onto.  For n = 1 it is the
/// unsubdivided interval; for n >= 2 the order complex of the face poset.
/// Faces of the cube are vectors over {-1 (free), 0, 1}.
struct ModelCube {
  int n = 0;
  SimplicialComplex complex;
  std::map<Vertex, std::vector<int>> face_of;
  std::map<std::vector<int>, Vertex> vertex_of;
};

const ModelCube& model_cube(int n);

/**
 * Combinatorial building block: a triangulated compact n-manifold with
 * boundary whose faces F_{i,s} mirror the facets of the n-cube, with a
 * degree-one folding onto model_cube(n).
 *
 * Face keys are "<i><s>" with i counted from 1 and s '-' or '+', e.g. "2+".
 * Corner keys are n characters of '-' or '+', coordinate 1 first.
 */
struct BlockDatum {
  int n = 0;
  SimplicialComplex complex;
  std::map<std::string, SimplicialComplex> faces;
  std::map<std::string, Vertex> corners;
  std::map<Vertex, Vertex> folding;

  /// Model face of a vertex: coordinate i fixed to s when the vertex lies in F_{i,s}.
  std::vector<int> model_face(Vertex x) const;
};

std::string face_key(int axis, int side);
std::string corner_key(const std::vector<int>& corner);

struct BlockCertificate {
  bool ok = false;
  std::string violation;
  std::ptrdiff_t euler = 0;
  int degree = 0;
};

BlockCertificate validate_block(const BlockDatum& b);

/// n = 1: a single edge.  n = 2: a genus one surface with one boundary
/// circle cut into four arcs of two edges each.
BlockDatum bundled_block(int n);

/// The model cube itself used as a block; gluing it triangulates a cube complex.
BlockDatum flat_block(int n);

struct BlockCopy {
  int cube = -1;
  std::map<Vertex, Vertex> vertex_map;  ///< block vertex -> total vertex
};

/**
 * Output of strict hyperbolization: the glued complex plus bookkeeping.
 * Total vertices over a vertex of the cube complex keep that vertex's id;
 * all other vertices are numbered after the largest cube-complex vertex.
 */
struct HyperbolizedComplex {
  int n = 0;
  SimplicialComplex complex;
  std::vector<BlockCopy> blocks;
  std::map<Vertex, int> cube_face;     ///< total vertex -> cube of C it lies over
  std::map<Vertex, Vertex> block_vertex;  ///< total vertex -> block vertex

  // Filled in by hyperbolize():
  std::map<Vertex, Simplex> carrier;   ///< total vertex -> simplex of K
  std::map<Vertex, Vertex> shadow;     ///< total vertex -> vertex of K' (first subdivision)
  std::map<Vertex, Vertex> to_source;  ///< shadow followed by the last-vertex map K' -> K
  std::map<Vertex, Vertex> vertex_of;  ///< vertex of K -> total vertex
  std::map<Vertex, std::string> label; ///< stable name of the vertex in terms of K
};

HyperbolizedComplex strict_hyperbolize(const CubicalComplex& c, const FoldingMap& p, const BlockDatum& b);

/// Result of the cubical stage.
struct GromovOutput {
  CubicalComplex complex;
  FoldingMap folding;
  std::vector<Simplex> carrier;     ///< per cube: the simplex of K it lies over
  std::vector<std::string> label;   ///< per cube: stable name in terms of K
  std::map<Vertex, Vertex> vertex_of;  ///< vertex of K -> vertex of C
};

class HyperbolizationDriver {
 public:
  virtual ~HyperbolizationDriver() = default;
  virtual std::string name() const = 0;
  virtual bool supports(int dim) const = 0;
  /// Top cubes per top simplex; bounds the block count.
  virtual int blocks_per_simplex(int dim) const = 0;
  virtual GromovOutput gromov(const SimplicialComplex& k) const = 0;
};

/// Drivers: "bary1" for dimension <= 1, "cubical2" for pure 2-complexes.
const HyperbolizationDriver& driver_by_name(const std::string& name);
const HyperbolizationDriver& driver_for_dim(int dim);
void register_driver(std::unique_ptr<HyperbolizationDriver> d);

/// Vertex id of a simplex in barycentric_subdivide(x, 1).
Vertex barycenter_id(const SimplicialComplex& x, const Simplex& s);

struct Hyperbolization {
  GromovOutput gromov;
  HyperbolizedComplex h;
};

/// H(K) = S(G(K)).  An empty driver name picks one by dimension.  For
/// dimension <= 1 the block is always the single edge.
Hyperbolization hyperbolize(const SimplicialComplex& k, const BlockDatum& b, const std::string& driver = "");

struct ContractReport {
  bool folding_valid = false;
  bool npc = false;
  bool link_provenance = false;
  bool manifold_preserved = false;
  bool shadow_surjective = false;
  std::vector<std::string> failures;
  bool pass() const { return failures.empty(); }
};

ContractReport check_driver_contract(const HyperbolizationDriver& d, const SimplicialComplex& k);

struct RelativePair {
  SimplicialComplex k, l;
  std::vector<std::vector<std::size_t>> partition;  ///< normalized blocks of components of L
  std::string driver;
  BlockDatum block;

  SimplicialComplex coned;             ///< P = K with cones attached
  std::vector<Vertex> cone_vertices;   ///< in P
  Hyperbolization hyp;                 ///< of P
  Subdivision fine;                    ///< second subdivision of H(P)
  std::vector<Vertex> fine_cones;      ///< cone vertices in the fine complex

  SimplicialComplex r_k, r_l;
  std::vector<SimplicialComplex> r_l_components;
  std::vector<std::size_t> component_source;  ///< R_L component -> component of L
  std::map<Vertex, Simplex> l_carrier;        ///< R_L vertex -> simplex of L
  std::vector<SubdivisionCheck> provenance_checks;

  std::size_t s = 0;  ///< top simplices of K
  std::size_t blocks = 0;
};

RelativePair relative_hyperbolize(const SimplicialComplex& k, const SimplicialComplex& l,
                                  std::vector<std::vector<std::size_t>> partition, const BlockDatum& b,
                                  const std::string& driver = "");

struct ConeQuotientReport {
  SimplicialComplex quotient;
  std::vector<Vertex> apexes;
  bool isomorphic = false;   ///< facet-for-facet after relabeling apexes (same partition only)
  bool same_partition = false;
  std::ptrdiff_t euler_quotient = 0;
  std::ptrdiff_t euler_direct = 0;
  bool homology_match = false;
  std::vector<HomologyResult> homology_quotient, homology_direct;
};

/// Re-cones R_L by the given partition of the components of L (empty: the
/// pair's own partition) and compares with H(K with cones) subdivided twice.
ConeQuotientReport cone_quotient(const RelativePair& pair, std::vector<std::vector<std::size_t>> partition = {});

struct Retraction {
  SimplicialMap map;  ///< onto the chosen copy, as a subcomplex
  bool left_inverse = false;
};

/// Sends every block copy to copy `index` by the block identity.
Retraction block_retraction(const HyperbolizedComplex& h, std::size_t index);

/// Retraction of R_K onto a block copy whose cube avoids every cone vertex.
Retraction relative_block_retraction(const RelativePair& pair);

struct VolumeReport {
  int n = 0;
  std::size_t s = 0;
  std::size_t blocks = 0;
  std::size_t c_n = 0;                ///< blocks_per_simplex * (n + 2)
  bool s_le_n = false;
  bool n_le_cs = false;
  bool orientable = false;
  std::size_t facet_count = 0;        ///< upper bound for the relative simplicial volume
  Rational fundamental_norm;          ///< l1 norm of the relative fundamental cycle
  Rational absolute_norm;             ///< after the relative-to-absolute conversion
  bool conversion_cycle = false;
  bool conversion_bound = false;      ///< ||c'|| <= (n+2) ||c||
  std::string lower_bound;            ///< symbolic part of the inequality chain
};

VolumeReport volume_report(const RelativePair& pair);
VolumeReport volume_report(const Hyperbolization& h, const SimplicialComplex& k, const std::string& driver = "");

}  // namespace relhyp
