#include "relhyp/chain.hpp"

#include <algorithm>

namespace relhyp {

bool is_point_simplex(const Simplex& key) {
  return key.size() > 1 && std::all_of(key.begin(), key.end(), [&](Vertex v) { return v == key[0]; });
}

bool is_degenerate(const Simplex& key) {
  Simplex s = key;
  std::sort(s.begin(), s.end());
  return std::adjacent_find(s.begin(), s.end()) != s.end();
}

Rational Chain::coefficient(const Simplex& key) const {
  auto it = terms_.find(key);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Chain::add_key(const Simplex& key, const Rational& coeff) {
  if (coeff.is_zero()) return;
  auto [it, fresh] = terms_.emplace(key, coeff);
  if (!fresh) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

void Chain::add(std::vector<Vertex> verts, const Rational& coeff) {
  if (static_cast<int>(verts.size()) != degree_ + 1)
    throw DomainError("chain term has the wrong number of vertices");
  if (is_degenerate(verts)) {
    add_key(verts, coeff);
    return;
  }
  // sort with parity
  int sign = 1;
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (std::size_t j = i + 1; j < verts.size(); ++j)
      if (verts[i] > verts[j]) sign = -sign;
  std::sort(verts.begin(), verts.end());
  add_key(verts, sign > 0 ? coeff : -coeff);
}

Chain Chain::point_simplex(Vertex p, int k, const Rational& coeff) {
  Chain c(k);
  if (k == 0)
    c.add_key({p}, coeff);
  else
    c.add_key(Simplex(static_cast<std::size_t>(k + 1), p), coeff);
  return c;
}

Chain& Chain::operator+=(const Chain& o) {
  if (o.degree_ != degree_ && !o.is_zero()) throw DomainError("adding chains of different degree");
  for (auto& [k, v] : o.terms_) add_key(k, v);
  return *this;
}

Chain& Chain::operator-=(const Chain& o) {
  if (o.degree_ != degree_ && !o.is_zero()) throw DomainError("subtracting chains of different degree");
  for (auto& [k, v] : o.terms_) add_key(k, -v);
  return *this;
}

Chain operator*(const Rational& s, const Chain& c) {
  Chain out(c.degree_);
  for (auto& [k, v] : c.terms_) out.add_key(k, s * v);
  return out;
}

Chain boundary(const Chain& c) {
  Chain out(c.degree() - 1);
  if (c.degree() == 0) return out;
  for (auto& [key, coeff] : c.terms()) {
    for (std::size_t i = 0; i < key.size(); ++i) {
      std::vector<Vertex> face;
      for (std::size_t j = 0; j < key.size(); ++j)
        if (j != i) face.push_back(key[j]);
      out.add(std::move(face), (i % 2 == 0) ? coeff : -coeff);
    }
  }
  return out;
}

Rational l1_norm(const Chain& c) {
  Rational s;
  for (auto& [k, v] : c.terms()) s += v.abs();
  return s;
}

Chain point_simplex_boundary(int n) {
  if (n <= 0) throw DomainError("point_simplex_boundary: n must be positive");
  return boundary(Chain::point_simplex(0, n));
}

bool boundary_norm_check(const Chain& c) {
  return l1_norm(boundary(c)) <= Rational(c.degree() + 1) * l1_norm(c);
}

Chain push_forward(const Chain& c, const std::map<Vertex, Vertex>& f, bool singular) {
  Chain out(c.degree());
  for (auto& [key, coeff] : c.terms()) {
    std::vector<Vertex> img;
    for (Vertex v : key) img.push_back(f.at(v));
    if (!singular && is_degenerate(img)) continue;
    out.add(std::move(img), coeff);
  }
  return out;
}

AbsoluteCycleReport relative_to_absolute(const Chain& c, const ConePairDatum& pair) {
  const int n = c.degree();
  if (n < 2) throw DomainError("relative_to_absolute: degree must be at least 2");
  if (!pair.z.contains({pair.cone_point})) throw DomainError("relative_to_absolute: S is not a vertex of Z");
  for (auto& [key, v] : c.terms()) {
    Simplex span = key;
    std::sort(span.begin(), span.end());
    span.erase(std::unique(span.begin(), span.end()), span.end());
    if (!pair.z.contains(span)) throw DomainError("relative_to_absolute: chain is not supported on Z");
  }
  AbsoluteCycleReport r;
  r.input = c;
  Chain dc = boundary(c);
  const Simplex eps_key(static_cast<std::size_t>(n), pair.cone_point);
  for (auto& [key, v] : dc.terms())
    if (key != eps_key) throw DomainError("relative_to_absolute: boundary is not supported on S");
  r.scalar = dc.coefficient(eps_key);
  r.boundary_on_point = Chain::point_simplex(pair.cone_point, n - 1, r.scalar);
  r.correction = Chain(n);
  if (n % 2 == 0) r.correction = Chain::point_simplex(pair.cone_point, n, r.scalar);
  // For odd n the point simplex has zero boundary, so e = 0 and f = 0.
  r.absolute = c - r.correction;
  r.norm_input = l1_norm(c);
  r.norm_boundary = l1_norm(dc);
  r.norm_output = l1_norm(r.absolute);
  r.is_cycle = boundary(r.absolute).is_zero();
  r.bound_holds = r.norm_output <= Rational(n + 2) * r.norm_input;
  Chain diff = r.absolute - c;
  r.same_relative_class = std::all_of(diff.terms().begin(), diff.terms().end(), [&](auto& t) {
    return is_point_simplex(t.first) && t.first[0] == pair.cone_point;
  });
  return r;
}

Chain fundamental_cycle(const SimplicialComplex& x, const Orientation& o) {
  if (!o.orientable) throw DomainError("fundamental_cycle: complex is not orientable");
  Chain c(x.dimension());
  const auto& fs = x.facets();
  if (o.signs.size() != fs.size()) throw DomainError("fundamental_cycle: orientation does not match complex");
  for (std::size_t i = 0; i < fs.size(); ++i) c.add(fs[i], Rational(o.signs[i]));
  return c;
}

}  // namespace relhyp
