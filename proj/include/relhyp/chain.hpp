#pragma once

#include <map>
#include <vector>

#include "relhyp/rational.hpp"
#include "relhyp/simplicial.hpp"

namespace relhyp {

/**
 * Formal rational combination of oriented k-simplices.
 *
 * Nondegenerate keys are strictly increasing vertex lists; the orientation
 * of an arbitrary vertex ordering is folded into the sign of the
 * coefficient.  Keys with a repeated vertex are kept as ordered tuples and
 * stand for degenerate singular simplices (the affine map collapsing onto
 * the spanned face).  The point simplex on a vertex p is the tuple (p,...,p).
 */
class Chain {
 public:
  Chain() = default;
  explicit Chain(int degree) : degree_(degree) {}

  int degree() const { return degree_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Simplex, Rational>& terms() const { return terms_; }
  Rational coefficient(const Simplex& key) const;

  /// Adds coeff * [verts] with orientation given by the vertex order.
  void add(std::vector<Vertex> verts, const Rational& coeff);

  /// coeff * (point simplex of degree k on vertex p)
  static Chain point_simplex(Vertex p, int k, const Rational& coeff = Rational(1));

  Chain& operator+=(const Chain& o);
  Chain& operator-=(const Chain& o);
  friend Chain operator+(Chain a, const Chain& b) { return a += b; }
  friend Chain operator-(Chain a, const Chain& b) { return a -= b; }
  friend Chain operator*(const Rational& s, const Chain& c);
  friend bool operator==(const Chain& a, const Chain& b) {
    return a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }

 private:
  void add_key(const Simplex& key, const Rational& coeff);
  int degree_ = 0;
  std::map<Simplex, Rational> terms_;
};

bool is_point_simplex(const Simplex& key);
bool is_degenerate(const Simplex& key);

Chain boundary(const Chain& c);
Rational l1_norm(const Chain& c);

/// Boundary of the point simplex of degree n: zero for odd n, the point
/// simplex of degree n-1 for even n.  The point is vertex 0.
Chain point_simplex_boundary(int n);

/// ||boundary(c)|| <= (deg c + 1) * ||c||.
bool boundary_norm_check(const Chain& c);

/// Image of a chain under a vertex map.  Collapsed simplices contribute zero
/// for simplicial chains; with `singular` they become degenerate tuples.
Chain push_forward(const Chain& c, const std::map<Vertex, Vertex>& f, bool singular = false);

/// Cone pair (Z, S): S is the single cone point of Z.
struct ConePairDatum {
  SimplicialComplex z;
  Vertex cone_point = 0;
};

struct AbsoluteCycleReport {
  Chain input;
  Chain absolute;                ///< c' = c - i#f
  Chain boundary_on_point;       ///< e with boundary(c) = i#e
  Chain correction;              ///< f with boundary(f) = e
  Rational scalar;               ///< coefficient s of e
  Rational norm_input;
  Rational norm_boundary;
  Rational norm_output;
  bool is_cycle = false;
  bool bound_holds = false;      ///< ||c'|| <= (n+2)||c||
  bool same_relative_class = false;  ///< c' - c is supported on S
};

/**
 * Turns a relative cycle of (Z, S) into an absolute cycle of Z with the same
 * relative class by subtracting a multiple of the point simplex.
 */
AbsoluteCycleReport relative_to_absolute(const Chain& c, const ConePairDatum& pair);

struct Orientation;

/// Sum of facets with their orientation signs (coefficients +-1).
Chain fundamental_cycle(const SimplicialComplex& x, const Orientation& o);

}  // namespace relhyp
