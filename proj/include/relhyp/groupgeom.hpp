#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "relhyp/homology.hpp"
#include "relhyp/hyperbolize.hpp"
#include "relhyp/rational.hpp"
#include "relhyp/simplicial.hpp"

namespace relhyp {

/// Letters are +(i+1) for generator i and -(i+1) for its inverse.
using Word = std::vector<int>;

Word free_reduce(const Word& w);
Word cyclic_reduce(const Word& w);
Word inverse(const Word& w);

/**
 * Finite presentation, usually the edge-path group of a 2-skeleton.
 * Generators are the edges off a breadth-first spanning tree (oriented from
 * the smaller vertex), relators the boundaries of the triangles.
 */
struct Presentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;

  // provenance; empty for presentations not built from a complex
  Vertex basepoint = 0;
  std::map<Vertex, Vertex> parent;          ///< spanning tree, basepoint maps to itself
  std::map<Simplex, int> edge_generator;    ///< non-tree edge -> generator index
  std::vector<Simplex> generator_edge;      ///< generator index -> edge
};

/// Letter string when there are at most 26 generators ("abA"), else "x3 X1".
std::string word_to_string(const Word& w, std::size_t generator_count);

/// Throws DomainError on a disconnected complex or a basepoint outside it.
Presentation presentation_from_complex(const SimplicialComplex& x);
Presentation presentation_from_complex(const SimplicialComplex& x, Vertex basepoint);

/// Word of an edge path given as a vertex sequence.
Word edge_path_word(const Presentation& p, const std::vector<Vertex>& path);

/// Closed edge path at the basepoint read off by generator `g`.
std::vector<Vertex> generator_loop(const Presentation& p, std::size_t g);

struct TietzeResult {
  Presentation presentation;   ///< surviving generators renumbered; provenance dropped
  std::vector<Word> tracked;   ///< the caller's words rewritten in surviving generators
  std::vector<std::size_t> survivors;  ///< original index of each surviving generator
  std::size_t steps = 0;
  bool budget_exhausted = false;
};

/// Eliminates generators occurring once in some relator, shortest relator first.
TietzeResult tietze_simplify(const Presentation& p, std::size_t budget = 1000000, std::vector<Word> tracked = {});

struct AbelianInvariant {
  int rank = 0;
  std::vector<std::int64_t> torsion;

  friend bool operator==(const AbelianInvariant& a, const AbelianInvariant& b) {
    return a.rank == b.rank && a.torsion == b.torsion;
  }
};

AbelianInvariant abelianization(const Presentation& p);

struct CosetEnumeration {
  bool complete = false;
  std::size_t index = 0;       ///< number of cosets when complete
  std::size_t rows_used = 0;
};

/// Hasse-Low-Todd-Coxeter enumeration of the cosets of the subgroup
/// generated by `subgroup`, stopping after `max_rows` coset definitions.
CosetEnumeration todd_coxeter(const Presentation& p, const std::vector<Word>& subgroup, std::size_t max_rows = 100000);

enum class GroupClass { infinite, finite, undetermined };
std::string to_string(GroupClass c);

struct PeripheralSubgroup {
  std::size_t component = 0;   ///< index into pair.r_l_components
  std::size_t source = 0;      ///< component of L it subdivides
  GroupClass classification = GroupClass::undetermined;
  std::string reason;
  AbelianInvariant h1;
  std::size_t order = 0;       ///< when finite
  std::vector<Word> generators;  ///< words in the ambient presentation of R_K
};

struct PeripheralStructure {
  std::size_t ambient_generators = 0;
  std::size_t ambient_relators = 0;
  std::vector<PeripheralSubgroup> subgroups;
};

PeripheralStructure peripheral_structure(const RelativePair& pair, std::size_t coset_budget = 100000);

struct SplittingData {
  SimplicialComplex ha, hb, hc;  ///< H(sigma), H(K minus the open simplex), H(boundary of sigma)
  Presentation a, b, c;
  std::vector<Word> into_a, into_b;  ///< images of the generators of c
  Presentation amalgam;
  AbelianInvariant amalgam_h1, direct_h1;
  bool h1_match = false;
  InducedMap boundary_map;  ///< H_{n-1}(H(boundary sigma)) -> H_{n-1}(H(sigma))
  bool zero_map = false;
};

SplittingData splitting_along_simplex(const SimplicialComplex& k, const Simplex& sigma, const BlockDatum& b,
                                      const std::string& driver = "");

/// Finite simple graph with unit edge lengths.
class MetricGraph {
 public:
  MetricGraph() = default;
  /// Rejects loops, repeated edges and edges to unknown vertices.
  MetricGraph(std::vector<int> vertices, std::vector<std::pair<int, int>> edges, std::set<int> cones = {});

  const std::vector<int>& vertices() const { return vertices_; }
  /// Edges as (u, v) with u < v, sorted.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::set<int>& cones() const { return cones_; }
  std::size_t size() const { return vertices_.size(); }
  std::size_t index(int v) const;
  /// Neighbors by vertex index.
  const std::vector<std::size_t>& neighbors(std::size_t i) const { return adj_[i]; }
  bool connected() const;
  /// All-pairs hop distances by vertex index; -1 when unreachable.
  std::vector<std::vector<int>> distances() const;

 private:
  std::vector<int> vertices_;
  std::vector<std::pair<int, int>> edges_;
  std::set<int> cones_;
  std::map<int, std::size_t> index_;
  std::vector<std::vector<std::size_t>> adj_;
};

/// One new cone vertex per set, joined to each member.
MetricGraph coned_off(const MetricGraph& g, const std::vector<std::vector<int>>& sets);

enum class DeltaKernel { automatic, scalar, avx2 };
bool avx2_available();

/// Four-point delta: max over quadruples of (largest - second largest pair sum) / 2.
Rational delta_hyperbolicity(const MetricGraph& g, DeltaKernel kernel = DeltaKernel::automatic);

struct EdgeCensus {
  std::pair<int, int> edge;
  std::vector<std::size_t> by_length;  ///< by_length[L] = circuits of length exactly L
  std::size_t total = 0;
};

/// Circuits (embedded cycles) through each edge of length at most lmax.
std::vector<EdgeCensus> fineness_census(const MetricGraph& g, int lmax);

struct BassSerreSample {
  MetricGraph tree;
  int radius = 0;
  std::size_t index_a = 0;  ///< [A : C], 0 when not certified finite
  std::size_t index_b = 0;
  bool partial = false;     ///< some index was capped
  bool is_tree = false;
};

BassSerreSample bass_serre_sample(const SplittingData& s, std::size_t coset_budget = 100000, int radius = 3,
                                  std::size_t degree_cap = 3);

}  // namespace relhyp
