#include "relhyp/cubical.hpp"

#include <algorithm>
#include <set>

namespace relhyp {

namespace {

std::vector<Vertex> sorted_verts(const Cube& c) {
  std::vector<Vertex> v = c.verts;
  std::sort(v.begin(), v.end());
  return v;
}

// corners of `c` whose local bits agree with `fix`
std::vector<Vertex> sub_verts(const Cube& c, const std::vector<int>& fix) {
  std::vector<Vertex> out;
  for (unsigned idx = 0; idx < c.verts.size(); ++idx) {
    bool ok = true;
    for (int i = 0; i < c.axes && ok; ++i)
      if (fix[static_cast<std::size_t>(i)] >= 0 && static_cast<int>((idx >> i) & 1U) != fix[static_cast<std::size_t>(i)])
        ok = false;
    if (ok) out.push_back(c.verts[idx]);
  }
  return out;
}

int popcount(unsigned x) { return __builtin_popcount(x); }

}  // namespace

CubicalComplex CubicalComplex::build(int dim, std::vector<Cube> cubes, bool derive_faces) {
  if (dim < 0) throw DomainError("cubical complex: negative dimension");
  CubicalComplex cc;
  cc.dim_ = dim;
  for (std::size_t id = 0; id < cubes.size(); ++id) {
    const Cube& c = cubes[id];
    const std::string tag = "cube " + std::to_string(id);
    if (c.axes < 0 || c.axes > dim) throw DomainError(tag + ": dimension out of range");
    if (c.verts.size() != (std::size_t{1} << c.axes)) throw DomainError(tag + ": wrong number of corners");
    auto s = sorted_verts(c);
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw DomainError(tag + ": corners are not distinct");
  }
  if (derive_faces) {
    std::set<Vertex> have, all;
    for (const Cube& c : cubes) {
      if (c.axes == 0) have.insert(c.verts[0]);
      all.insert(c.verts.begin(), c.verts.end());
    }
    for (Vertex v : all)
      if (!have.count(v)) cubes.push_back(Cube{0, {v}, {}});
  }
  for (std::size_t id = 0; id < cubes.size(); ++id)
    if (cubes[id].axes == 0 && !cc.vertex_cube_.emplace(cubes[id].verts[0], static_cast<int>(id)).second)
      throw DomainError("vertex " + std::to_string(cubes[id].verts[0]) + " has two 0-cubes");

  std::map<std::pair<int, std::vector<Vertex>>, std::vector<int>> by_set;
  for (std::size_t id = 0; id < cubes.size(); ++id)
    by_set[{cubes[id].axes, sorted_verts(cubes[id])}].push_back(static_cast<int>(id));

  for (std::size_t id = 0; id < cubes.size(); ++id) {
    Cube& c = cubes[id];
    const std::string tag = "cube " + std::to_string(id);
    if (c.axes == 0) {
      if (!c.faces.empty()) throw DomainError(tag + ": a 0-cube has no faces");
      continue;
    }
    if (c.faces.empty()) {
      if (!derive_faces) throw DomainError(tag + ": missing face list");
      for (int i = 0; i < c.axes; ++i)
        for (int s = 0; s < 2; ++s) {
          std::vector<int> fix(static_cast<std::size_t>(c.axes), -1);
          fix[static_cast<std::size_t>(i)] = s;
          auto t = sub_verts(c, fix);
          std::sort(t.begin(), t.end());
          auto it = by_set.find({c.axes - 1, t});
          if (it == by_set.end()) throw DomainError(tag + ": a face is not a cube of the complex");
          if (it->second.size() > 1) throw DomainError(tag + ": face is ambiguous, give explicit faces");
          c.faces.push_back(it->second[0]);
        }
    }
    if (c.faces.size() != static_cast<std::size_t>(2 * c.axes)) throw DomainError(tag + ": wrong number of faces");
    for (int i = 0; i < c.axes; ++i)
      for (int s = 0; s < 2; ++s) {
        const int fid = c.faces[static_cast<std::size_t>(2 * i + s)];
        if (fid < 0 || fid >= static_cast<int>(cubes.size())) throw DomainError(tag + ": face id out of range");
        const Cube& f = cubes[static_cast<std::size_t>(fid)];
        if (f.axes != c.axes - 1) throw DomainError(tag + ": face has the wrong dimension");
        // the face's corners must be the sub-cube, with adjacency preserved
        std::map<Vertex, unsigned> pos;
        for (unsigned idx = 0; idx < c.verts.size(); ++idx)
          if (static_cast<int>((idx >> i) & 1U) == s) pos[c.verts[idx]] = idx;
        for (Vertex v : f.verts)
          if (!pos.count(v)) throw DomainError(tag + ": face corners do not match");
        for (unsigned a = 0; a < f.verts.size(); ++a)
          for (int b = 0; b < f.axes; ++b) {
            unsigned nb = a ^ (1U << b);
            if (popcount(pos[f.verts[a]] ^ pos[f.verts[nb]]) != 1)
              throw DomainError(tag + ": face is not identified by a cube isomorphism");
          }
      }
  }
  // faces of faces must not depend on the order of fixing
  for (std::size_t id = 0; id < cubes.size(); ++id) {
    const Cube& c = cubes[id];
    for (int i = 0; i < c.axes; ++i)
      for (int j = i + 1; j < c.axes; ++j)
        for (int s = 0; s < 2; ++s)
          for (int t = 0; t < 2; ++t) {
            std::vector<int> fix(static_cast<std::size_t>(c.axes), -1);
            fix[static_cast<std::size_t>(i)] = s;
            fix[static_cast<std::size_t>(j)] = t;
            auto target = sub_verts(c, fix);
            std::sort(target.begin(), target.end());
            auto child_with = [&](int parent) {
              for (int f : cubes[static_cast<std::size_t>(parent)].faces)
                if (sorted_verts(cubes[static_cast<std::size_t>(f)]) == target) return f;
              return -1;
            };
            int a = child_with(c.faces[static_cast<std::size_t>(2 * i + s)]);
            int b = child_with(c.faces[static_cast<std::size_t>(2 * j + t)]);
            if (a < 0 || a != b)
              throw DomainError("cube " + std::to_string(id) + ": inconsistent face incidence");
          }
  }
  cc.is_face_.assign(cubes.size(), 0);
  for (const Cube& c : cubes)
    for (int f : c.faces) cc.is_face_[static_cast<std::size_t>(f)] = 1;
  cc.cubes_ = std::move(cubes);
  return cc;
}

std::vector<int> CubicalComplex::cubes_of_dim(int k) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < cubes_.size(); ++i)
    if (cubes_[i].axes == k) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<Vertex> CubicalComplex::vertices() const {
  std::vector<Vertex> out;
  for (auto& [v, id] : vertex_cube_) out.push_back(v);
  return out;
}

int CubicalComplex::vertex_cube(Vertex v) const {
  auto it = vertex_cube_.find(v);
  if (it == vertex_cube_.end()) throw DomainError("vertex " + std::to_string(v) + " is not in the cubical complex");
  return it->second;
}

std::vector<int> CubicalComplex::maximal_cubes() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < cubes_.size(); ++i)
    if (!is_face_[i]) out.push_back(static_cast<int>(i));
  return out;
}

bool CubicalComplex::is_pure(bool allow_isolated_points) const {
  for (int id : maximal_cubes()) {
    const int a = cubes_[static_cast<std::size_t>(id)].axes;
    if (a != dim_ && !(allow_isolated_points && a == 0)) return false;
  }
  return true;
}

int CubicalComplex::face(int cube_id, const std::vector<int>& fix) const {
  const Cube& c = cube(cube_id);
  if (fix.size() != static_cast<std::size_t>(c.axes)) throw DomainError("face: fixing has the wrong length");
  // corners of the wanted face as local indices of the current cube
  std::vector<unsigned> want;
  for (unsigned idx = 0; idx < (1U << c.axes); ++idx) {
    bool in = true;
    for (int i = 0; i < c.axes && in; ++i)
      in = fix[static_cast<std::size_t>(i)] < 0 || static_cast<int>(idx >> i & 1U) == fix[static_cast<std::size_t>(i)];
    if (in) want.push_back(idx);
  }
  int cur = cube_id;
  while (want.size() < (std::size_t{1} << cube(cur).axes)) {
    const Cube& q = cube(cur);
    int axis = -1, side = 0;
    for (int i = 0; i < q.axes && axis < 0; ++i) {
      unsigned b = want[0] >> i & 1U;
      if (std::all_of(want.begin(), want.end(), [&](unsigned w) { return (w >> i & 1U) == b; })) {
        axis = i;
        side = static_cast<int>(b);
      }
    }
    if (axis < 0) throw DomainError("face: sub-cube not found");
    const Cube& f = cube(q.faces[static_cast<std::size_t>(2 * axis + side)]);
    std::vector<unsigned> moved;
    for (unsigned w : want) {
      auto it = std::find(f.verts.begin(), f.verts.end(), q.verts[w]);
      if (it == f.verts.end()) throw DomainError("face: inconsistent face incidence");
      moved.push_back(static_cast<unsigned>(it - f.verts.begin()));
    }
    want = std::move(moved);
    cur = q.faces[static_cast<std::size_t>(2 * axis + side)];
  }
  return cur;
}

std::vector<int> CubeFold::image(unsigned bits) const {
  std::vector<int> out = face;
  for (std::size_t i = 0; i < axis_map.size(); ++i)
    out[static_cast<std::size_t>(axis_map[i])] = static_cast<int>((bits >> i) & 1U) ^ flip[i];
  return out;
}

FoldingCertificate validate_folding(const CubicalComplex& c, const FoldingMap& p) {
  FoldingCertificate cert;
  auto fail = [&](int id, std::string why) {
    cert.ok = false;
    cert.cube = id;
    cert.violation = "cube " + std::to_string(id) + ": " + std::move(why);
    return cert;
  };
  if (p.n != c.dim()) return fail(-1, "folding dimension differs from the complex");
  if (p.per_cube.size() != static_cast<std::size_t>(c.cube_count())) return fail(-1, "folding does not cover every cube");
  for (int id = 0; id < c.cube_count(); ++id) {
    const CubeFold& f = p.per_cube[static_cast<std::size_t>(id)];
    const Cube& q = c.cube(id);
    if (f.face.size() != static_cast<std::size_t>(p.n)) return fail(id, "face has the wrong length");
    int free = 0;
    for (int x : f.face) {
      if (x < -1 || x > 1) return fail(id, "face entry out of range");
      free += x == -1;
    }
    if (free != q.axes) return fail(id, "image face has the wrong dimension");
    if (f.axis_map.size() != static_cast<std::size_t>(q.axes) || f.flip.size() != static_cast<std::size_t>(q.axes))
      return fail(id, "axis map has the wrong length");
    std::set<int> used;
    for (std::size_t i = 0; i < f.axis_map.size(); ++i) {
      int a = f.axis_map[i];
      if (a < 0 || a >= p.n || f.face[static_cast<std::size_t>(a)] != -1 || !used.insert(a).second)
        return fail(id, "axis map is not a bijection onto the free model axes");
      if (f.flip[i] != 0 && f.flip[i] != 1) return fail(id, "flip entry must be 0 or 1");
    }
  }
  for (int id = 0; id < c.cube_count(); ++id) {
    const Cube& q = c.cube(id);
    for (unsigned idx = 0; idx < q.verts.size(); ++idx) {
      const int vc = c.vertex_cube(q.verts[idx]);
      if (p.per_cube[static_cast<std::size_t>(id)].image(idx) != p.per_cube[static_cast<std::size_t>(vc)].face)
        return fail(id, "image of corner " + std::to_string(q.verts[idx]) + " disagrees with its vertex");
    }
  }
  cert.ok = true;
  return cert;
}

SimplicialComplex vertex_link(const CubicalComplex& c, Vertex v, bool* duplicates) {
  std::vector<Simplex> gens;
  std::set<Simplex> seen;
  bool dup = false;
  for (int id = 0; id < c.cube_count(); ++id) {
    const Cube& q = c.cube(id);
    if (q.axes == 0) continue;
    auto it = std::find(q.verts.begin(), q.verts.end(), v);
    if (it == q.verts.end()) continue;
    const unsigned idx = static_cast<unsigned>(it - q.verts.begin());
    Simplex s;
    for (int i = 0; i < q.axes; ++i) {
      std::vector<int> fix(static_cast<std::size_t>(q.axes));
      for (int j = 0; j < q.axes; ++j) fix[static_cast<std::size_t>(j)] = static_cast<int>((idx >> j) & 1U);
      fix[static_cast<std::size_t>(i)] = -1;
      s.push_back(q.axes == 1 ? id : c.face(id, fix));
    }
    std::sort(s.begin(), s.end());
    if (!seen.insert(s).second) dup = true;
    gens.push_back(std::move(s));
  }
  if (duplicates) *duplicates = dup;
  return SimplicialComplex(std::move(gens));
}

FlagReport is_flag(const SimplicialComplex& l) {
  std::map<Vertex, std::set<Vertex>> adj;
  for (const Simplex& e : l.simplices(1)) {
    adj[e[0]].insert(e[1]);
    adj[e[1]].insert(e[0]);
  }
  // Minimal non-faces of size k+2 extend a k-simplex by a larger vertex.
  for (int k = 1; k <= l.dimension(); ++k) {
    for (const Simplex& s : l.simplices(k)) {
      auto it = adj.find(s.back());
      if (it == adj.end()) continue;
      for (auto w = it->second.upper_bound(s.back()); w != it->second.end(); ++w) {
        bool clique = std::all_of(s.begin(), s.end(), [&](Vertex u) { return adj[u].count(*w) > 0; });
        if (!clique) continue;
        Simplex t = s;
        t.push_back(*w);
        if (!l.contains(t)) return {false, t};
      }
    }
  }
  return {true, {}};
}

NpcReport npc_certificate(const CubicalComplex& c) {
  NpcReport r;
  r.pass = true;
  for (Vertex v : c.vertices()) {
    NpcReport::Entry e;
    e.vertex = v;
    SimplicialComplex lk = vertex_link(c, v, &e.duplicates);
    auto f = is_flag(lk);
    e.flag = f.flag;
    e.witness = f.witness;
    if ((!e.flag || e.duplicates) && r.pass) {
      r.pass = false;
      r.first_failure = "vertex " + std::to_string(v) + (e.duplicates ? ": link is not simplicial" : ": link is not flag");
    }
    r.vertices.push_back(std::move(e));
  }
  return r;
}

CubulatedTorus torus_cubulation(int n) {
  if (n <= 0) throw DomainError("torus_cubulation: n must be positive");
  if (n > 10) throw DomainError("torus_cubulation: n too large");
  // per coordinate: 0 = the point 0, 1 = the point +-1, 2 = [0,1], 3 = [-1,0]
  const int total = 1 << (2 * n);
  auto digit = [](int id, int j) { return (id >> (2 * j)) & 3; };
  std::vector<Cube> cubes(static_cast<std::size_t>(total));
  FoldingMap fold;
  fold.n = n;
  fold.per_cube.resize(static_cast<std::size_t>(total));
  for (int id = 0; id < total; ++id) {
    Cube& q = cubes[static_cast<std::size_t>(id)];
    CubeFold& f = fold.per_cube[static_cast<std::size_t>(id)];
    std::vector<int> axes;
    Vertex base = 0;
    f.face.assign(static_cast<std::size_t>(n), -1);
    for (int j = 0; j < n; ++j) {
      const int d = digit(id, j);
      if (d >= 2) {
        axes.push_back(j);
      } else {
        f.face[static_cast<std::size_t>(j)] = d;
        if (d == 1) base |= 1 << j;
      }
    }
    q.axes = static_cast<int>(axes.size());
    for (unsigned idx = 0; idx < (1U << q.axes); ++idx) {
      Vertex v = base;
      for (int i = 0; i < q.axes; ++i)
        if ((idx >> i) & 1U) v |= 1 << axes[static_cast<std::size_t>(i)];
      q.verts.push_back(v);
    }
    for (int i = 0; i < q.axes; ++i)
      for (int s = 0; s < 2; ++s) {
        const int j = axes[static_cast<std::size_t>(i)];
        q.faces.push_back((id & ~(3 << (2 * j))) | (s << (2 * j)));
      }
    f.axis_map = axes;
    f.flip.assign(axes.size(), 0);
  }
  return {CubicalComplex::build(n, std::move(cubes), false), std::move(fold)};
}

}  // namespace relhyp
