#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "relhyp/chain.hpp"
#include "relhyp/linalg.hpp"
#include "relhyp/simplicial.hpp"

namespace relhyp {

enum class Coefficients { integers, rationals, mod2 };

std::string to_string(Coefficients c);

struct HomologyResult {
  int degree = 0;
  Coefficients coefficients = Coefficients::integers;
  int betti = 0;
  std::vector<std::int64_t> torsion;  ///< empty unless over the integers
  std::vector<Chain> representatives;  ///< one cycle per free generator, when requested
};

/// Boundary matrix from k-simplices (columns) to (k-1)-simplices (rows), in
/// the canonical simplex order of the complex.
SparseIntMatrix boundary_matrix(const SimplicialComplex& x, int k);

/// Simplicial homology H_k(X).  Degrees above the dimension give zero.
HomologyResult homology(const SimplicialComplex& x, int k, Coefficients c,
                        bool with_representatives = false);

/// Basis of the k-cycles over Q (integral, primitive) or F2.  Degree one uses
/// fundamental cycles of a breadth-first spanning forest.
std::vector<Chain> cycle_basis(const SimplicialComplex& x, int k, bool mod2);

/// Chain of a complex as a coordinate vector in the canonical k-simplex order.
RatVector to_vector(const SimplicialComplex& x, const Chain& c);

struct MapVerdict {
  int degree = 0;
  int source_betti = 0;
  int target_betti = 0;
  int image_rank = 0;
  bool surjective = false;
  bool injective = false;
  bool zero = false;
};

/// Rank of f_* on H_k over Q (mod2=false) or F2, without building bases of
/// homology.  Scales to complexes with thousands of simplices.
MapVerdict homology_map_verdict(const SimplicialComplex& source, const SimplicialComplex& target,
                                const std::map<Vertex, Vertex>& f, int k, bool mod2);

struct InducedMap {
  int degree = 0;
  Coefficients coefficients = Coefficients::rationals;
  /// matrix[i][j]: coefficient of target generator i in the image of source generator j
  std::vector<std::vector<Rational>> matrix;
  std::vector<Chain> source_generators;
  std::vector<Chain> target_generators;
  MapVerdict verdict;
};

/// Matrix of f_* on H_k in explicit generator bases.  Integer requests are
/// answered on the free part, i.e. over Q.
InducedMap induced_map(const SimplicialMap& f, int k, Coefficients c);

}  // namespace relhyp
