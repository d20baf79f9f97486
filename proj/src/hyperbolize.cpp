#include "relhyp/hyperbolize.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace relhyp {

namespace {

// base-3 index of a face vector: digit 0, 1, or 2 for free
Vertex face_index(const std::vector<int>& f) {
  Vertex id = 0, w = 1;
  for (int x : f) {
    id += w * (x < 0 ? 2 : x);
    w *= 3;
  }
  return id;
}

ModelCube build_model_cube(int n) {
  ModelCube m;
  m.n = n;
  auto put = [&](const std::vector<int>& f) {
    Vertex id = face_index(f);
    m.face_of[id] = f;
    m.vertex_of[f] = id;
    return id;
  };
  if (n == 1) {
    m.complex = SimplicialComplex({{put({0}), put({1})}});
    return m;
  }
  // maximal chains: a corner, then free the axes one at a time
  std::vector<Simplex> gens;
  std::vector<int> order(static_cast<std::size_t>(n));
  for (unsigned corner = 0; corner < (1U << n); ++corner) {
    std::iota(order.begin(), order.end(), 0);
    do {
      std::vector<int> f(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) f[static_cast<std::size_t>(i)] = static_cast<int>(corner >> i & 1U);
      std::vector<Vertex> chain{put(f)};
      for (int a : order) {
        f[static_cast<std::size_t>(a)] = -1;
        chain.push_back(put(f));
      }
      gens.push_back(make_simplex(chain));
    } while (std::next_permutation(order.begin(), order.end()));
  }
  m.complex = SimplicialComplex(std::move(gens));
  return m;
}

std::vector<std::vector<int>> proper_faces(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> f(static_cast<std::size_t>(n));
  int total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  for (int code = 0; code < total; ++code) {
    int c = code;
    bool fixed = false;
    for (int i = 0; i < n; ++i) {
      int d = c % 3;
      c /= 3;
      f[static_cast<std::size_t>(i)] = d == 2 ? -1 : d;
      fixed |= d != 2;
    }
    if (fixed) out.push_back(f);
  }
  return out;
}

}  // namespace

const ModelCube& model_cube(int n) {
  if (n < 1 || n > 6) throw DomainError("model cube dimension must be in 1..6");
  static std::map<int, ModelCube> cache;
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_model_cube(n)).first;
  return it->second;
}

std::string face_key(int axis, int side) { return std::to_string(axis + 1) + (side ? "+" : "-"); }

std::string corner_key(const std::vector<int>& corner) {
  std::string s;
  for (int c : corner) s += c < 0 ? '*' : c ? '+' : '-';
  return s;
}

std::vector<int> BlockDatum::model_face(Vertex x) const {
  std::vector<int> f(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < 2; ++s) {
      auto it = faces.find(face_key(i, s));
      if (it == faces.end() || !it->second.contains({x})) continue;
      if (f[static_cast<std::size_t>(i)] >= 0) throw DomainError("block vertex lies on two opposite faces");
      f[static_cast<std::size_t>(i)] = s;
    }
  return f;
}

BlockCertificate validate_block(const BlockDatum& b) {
  BlockCertificate cert;
  auto fail = [&](std::string why) {
    cert.violation = std::move(why);
    return cert;
  };
  const int n = b.n;
  if (n < 1 || n > 6) return fail("block dimension must be in 1..6");
  const auto& x = b.complex;
  if (x.empty() || x.dimension() != n || !x.is_pure()) return fail("block is not a pure n-complex");
  if (path_components(x).size() != 1) return fail("block is not connected");
  auto man = check_manifold(x, n);
  if (man.verdict == Verdict::no) return fail("block is not a manifold: " + man.detail);
  if (n <= 3 && man.verdict != Verdict::yes) return fail("block manifold check failed: " + man.detail);
  auto ori = orient(x, n);
  if (!ori.orientable) return fail("block is not orientable");
  cert.euler = euler_characteristic(x);

  SimplicialComplex bd = boundary_subcomplex(x);
  std::vector<Simplex> union_gens;
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < 2; ++s) {
      auto it = b.faces.find(face_key(i, s));
      if (it == b.faces.end()) return fail("missing face " + face_key(i, s));
      const auto& f = it->second;
      if (f.empty() || f.dimension() != n - 1 || !f.is_pure()) return fail("face " + face_key(i, s) + " is not pure of codimension one");
      for (const auto& s2 : f.facets()) {
        if (!bd.contains(s2)) return fail("face " + face_key(i, s) + " leaves the boundary");
        union_gens.push_back(s2);
      }
    }
  if (b.faces.size() != static_cast<std::size_t>(2 * n)) return fail("unexpected face keys");
  if (!(SimplicialComplex(union_gens) == bd)) return fail("faces do not cover the boundary");

  std::map<Vertex, std::vector<int>> phi;
  try {
    for (Vertex v : x.vertices()) phi[v] = b.model_face(v);
  } catch (const DomainError& e) {
    return fail(e.what());
  }

  if (b.corners.size() != (std::size_t{1} << n)) return fail("expected one corner per vertex of the cube");
  for (const auto& f : proper_faces(n)) {
    int fixed = 0;
    for (int c : f) fixed += c >= 0;
    // simplices lying in every face named by f
    std::vector<Simplex> gens;
    const SimplicialComplex* first = nullptr;
    for (int i = 0; i < n && !first; ++i)
      if (f[static_cast<std::size_t>(i)] >= 0) first = &b.faces.at(face_key(i, f[static_cast<std::size_t>(i)]));
    for (int k = 0; k <= first->dimension(); ++k)
      for (const auto& s : first->simplices(k)) {
        bool in = true;
        for (int i = 0; i < n && in; ++i)
          if (f[static_cast<std::size_t>(i)] >= 0) in = b.faces.at(face_key(i, f[static_cast<std::size_t>(i)])).contains(s);
        if (in) gens.push_back(s);
      }
    SimplicialComplex meet(gens);
    std::string name = "intersection for face " + corner_key(f);
    if (meet.empty()) return fail(name + " is empty");
    if (meet.dimension() != n - fixed) return fail(name + " has the wrong dimension");
    if (path_components(meet).size() != 1) return fail(name + " is not connected");
    if (fixed == n) {
      auto it = b.corners.find(corner_key(f));
      if (it == b.corners.end()) return fail("missing corner " + corner_key(f));
      if (meet.vertices() != std::vector<Vertex>{it->second}) return fail("corner " + corner_key(f) + " does not match the faces");
    }
  }

  const ModelCube& mc = model_cube(n);
  SimplicialMap fold{x, mc.complex, b.folding};
  try {
    fold.validate();
  } catch (const DomainError& e) {
    return fail(std::string("folding: ") + e.what());
  }
  for (auto& [v, f] : phi) {
    auto it = mc.face_of.find(b.folding.at(v));
    if (it == mc.face_of.end()) return fail("folding leaves the model cube");
    for (int i = 0; i < n; ++i)
      if (f[static_cast<std::size_t>(i)] >= 0 && it->second[static_cast<std::size_t>(i)] != f[static_cast<std::size_t>(i)])
        return fail("folding does not respect face " + face_key(i, f[static_cast<std::size_t>(i)]));
  }
  Chain image = push_forward(fundamental_cycle(x, ori), b.folding);
  Chain model = fundamental_cycle(mc.complex, orient(mc.complex, n));
  if (image == model)
    cert.degree = 1;
  else if (image == Rational(-1) * model)
    cert.degree = -1;
  else
    return fail("folding does not have degree one");
  cert.ok = true;
  return cert;
}

BlockDatum bundled_block(int n) {
  BlockDatum b;
  b.n = n;
  if (n == 1) {
    b.complex = SimplicialComplex({{0, 1}});
    b.faces["1-"] = SimplicialComplex(std::vector<Simplex>{{0}});
    b.faces["1+"] = SimplicialComplex(std::vector<Simplex>{{1}});
    b.corners = {{"-", 0}, {"+", 1}};
    b.folding = {{0, model_cube(1).vertex_of.at({0})}, {1, model_cube(1).vertex_of.at({1})}};
    return b;
  }
  if (n != 2) throw DomainError("no bundled block in dimension " + std::to_string(n));
  // 4x4 grid torus with the 2x2 square [0,2]^2 cut out
  auto id = [](int i, int j) { return 4 * ((i % 4 + 4) % 4) + (j % 4 + 4) % 4; };
  std::vector<Simplex> tris;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i < 2 && j < 2) continue;
      tris.push_back(make_simplex({id(i, j), id(i + 1, j), id(i + 1, j + 1)}));
      tris.push_back(make_simplex({id(i, j), id(i, j + 1), id(i + 1, j + 1)}));
    }
  b.complex = SimplicialComplex(tris);
  auto arc = [&](int a0, int b0, int a1, int b1, int a2, int b2) {
    return SimplicialComplex({make_simplex({id(a0, b0), id(a1, b1)}), make_simplex({id(a1, b1), id(a2, b2)})});
  };
  b.faces["1-"] = arc(0, 0, 0, 1, 0, 2);
  b.faces["1+"] = arc(2, 0, 2, 1, 2, 2);
  b.faces["2-"] = arc(0, 0, 1, 0, 2, 0);
  b.faces["2+"] = arc(0, 2, 1, 2, 2, 2);
  b.corners = {{"--", id(0, 0)}, {"+-", id(2, 0)}, {"-+", id(0, 2)}, {"++", id(2, 2)}};
  const ModelCube& mc = model_cube(2);
  for (Vertex v : b.complex.vertices()) b.folding[v] = mc.vertex_of.at(b.model_face(v));
  return b;
}

BlockDatum flat_block(int n) {
  if (n == 1) return bundled_block(1);
  const ModelCube& mc = model_cube(n);
  BlockDatum b;
  b.n = n;
  b.complex = mc.complex;
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < 2; ++s) {
      std::vector<Vertex> verts;
      for (auto& [v, f] : mc.face_of)
        if (f[static_cast<std::size_t>(i)] == s) verts.push_back(v);
      b.faces[face_key(i, s)] = induced_subcomplex(mc.complex, verts);
    }
  for (auto& [v, f] : mc.face_of) {
    b.folding[v] = v;
    if (std::none_of(f.begin(), f.end(), [](int c) { return c < 0; })) b.corners[corner_key(f)] = v;
  }
  return b;
}

HyperbolizedComplex strict_hyperbolize(const CubicalComplex& c, const FoldingMap& p, const BlockDatum& b) {
  const int n = b.n;
  if (c.dim() != n) throw DomainError("strict hyperbolization: block and cube complex differ in dimension");
  if (!c.is_pure(true)) throw DomainError("strict hyperbolization: cube complex is not pure");
  auto fc = validate_folding(c, p);
  if (!fc.ok) throw DomainError("strict hyperbolization: invalid folding at cube " + std::to_string(fc.cube) + ": " + fc.violation);
  auto bc = validate_block(b);
  if (!bc.ok) throw DomainError("strict hyperbolization: invalid block: " + bc.violation);

  HyperbolizedComplex h;
  h.n = n;
  const auto cverts = c.vertices();
  Vertex next = cverts.empty() ? 0 : cverts.back() + 1;
  std::map<std::pair<int, Vertex>, Vertex> ids;
  std::map<Vertex, std::vector<int>> phi;
  const auto bverts = b.complex.vertices();
  for (Vertex x : bverts) phi[x] = b.model_face(x);

  std::vector<Simplex> gens;
  const auto tops = c.cubes_of_dim(n);
  for (int q : tops) {
    const CubeFold& f = p.per_cube[static_cast<std::size_t>(q)];
    BlockCopy copy;
    copy.cube = q;
    for (Vertex x : bverts) {
      const auto& m = phi[x];
      std::vector<int> fix(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        int a = m[static_cast<std::size_t>(f.axis_map[static_cast<std::size_t>(i)])];
        fix[static_cast<std::size_t>(i)] = a < 0 ? -1 : a ^ f.flip[static_cast<std::size_t>(i)];
      }
      int face = c.face(q, fix);
      auto [it, fresh] = ids.emplace(std::make_pair(face, x), 0);
      if (fresh) {
        const Cube& fcube = c.cube(face);
        it->second = fcube.axes == 0 ? fcube.verts[0] : next++;
        h.cube_face[it->second] = face;
        h.block_vertex[it->second] = x;
      }
      copy.vertex_map[x] = it->second;
    }
    for (const auto& s : b.complex.facets()) {
      std::vector<Vertex> img;
      for (Vertex x : s) img.push_back(copy.vertex_map[x]);
      gens.push_back(make_simplex(img));
    }
    h.blocks.push_back(std::move(copy));
  }
  std::size_t isolated = 0;
  for (Vertex v : cverts) {
    if (h.cube_face.count(v)) continue;
    int vc = c.vertex_cube(v);
    h.cube_face[v] = vc;
    h.block_vertex[v] = b.corners.at(corner_key(p.per_cube[static_cast<std::size_t>(vc)].face));
    gens.push_back({v});
    ++isolated;
  }
  h.complex = SimplicialComplex(std::move(gens));
  if (h.complex.facets().size() != tops.size() * b.complex.facets().size() + isolated)
    throw DomainError("strict hyperbolization: gluing is not simplicial");
  return h;
}

Vertex barycenter_id(const SimplicialComplex& x, const Simplex& s) {
  if (s.empty()) throw DomainError("barycenter of an empty simplex");
  std::size_t off = 0;
  for (int j = 0; j + 1 < static_cast<int>(s.size()); ++j) off += x.count(j);
  return static_cast<Vertex>(off + x.index_of(s));
}

namespace {

std::string show(const Simplex& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out;
}

// dimension <= 1: the cubical subdivision, which is the barycentric one
class Bary1Driver : public HyperbolizationDriver {
 public:
  std::string name() const override { return "bary1"; }
  bool supports(int dim) const override { return dim >= 0 && dim <= 1; }
  int blocks_per_simplex(int) const override { return 2; }

  GromovOutput gromov(const SimplicialComplex& k) const override {
    if (k.empty() || k.dimension() > 1) throw DomainError("bary1 driver needs a complex of dimension <= 1");
    GromovOutput g;
    std::vector<Cube> cubes;
    std::map<Vertex, int> cube_of;
    auto point = [&](const Simplex& s, int side) {
      Vertex v = barycenter_id(k, s);
      cube_of[v] = static_cast<int>(cubes.size());
      cubes.push_back({0, {v}, {}});
      g.folding.per_cube.push_back({{side}, {}, {}});
      g.carrier.push_back(s);
      g.label.push_back((side ? "m:" : "v:") + show(s));
      return v;
    };
    for (Vertex v : k.vertices()) g.vertex_of[v] = point({v}, 0);
    const int dim = k.dimension();
    if (dim == 1)
      for (const auto& e : k.simplices(1)) point(e, 1);
    if (dim == 1)
      for (const auto& e : k.simplices(1)) {
        Vertex m = barycenter_id(k, e);
        for (Vertex u : e) {
          Vertex a = g.vertex_of[u];
          cubes.push_back({1, {a, m}, {cube_of[a], cube_of[m]}});
          g.folding.per_cube.push_back({{-1}, {0}, {0}});
          g.carrier.push_back(e);
          g.label.push_back("vm:" + std::to_string(u) + "|" + show(e));
        }
      }
    g.folding.n = dim;
    g.complex = CubicalComplex::build(dim, std::move(cubes), false);
    return g;
  }
};

// pure dimension 2: per triangle a genus one surface made of six squares
class Cubical2Driver : public HyperbolizationDriver {
 public:
  std::string name() const override { return "cubical2"; }
  bool supports(int dim) const override { return dim == 2; }
  int blocks_per_simplex(int) const override { return 6; }

  GromovOutput gromov(const SimplicialComplex& k) const override {
    if (k.dimension() != 2 || !k.is_pure()) throw DomainError("cubical2 driver needs a pure 2-complex");
    GromovOutput g;
    g.folding.n = 2;
    std::vector<Cube> cubes;
    std::map<Vertex, int> cube_of;
    const Vertex bary_total = static_cast<Vertex>(k.count(0) + k.count(1) + k.count(2));
    auto point = [&](Vertex v, const Simplex& carrier, std::vector<int> img, std::string label) {
      cube_of[v] = static_cast<int>(cubes.size());
      cubes.push_back({0, {v}, {}});
      g.folding.per_cube.push_back({std::move(img), {}, {}});
      g.carrier.push_back(carrier);
      g.label.push_back(std::move(label));
    };
    auto qid = [&](const Simplex& t) { return bary_total + static_cast<Vertex>(k.index_of(t)); };
    for (Vertex v : k.vertices()) {
      g.vertex_of[v] = barycenter_id(k, {v});
      point(g.vertex_of[v], {v}, {0, 0}, "v:" + std::to_string(v));
    }
    for (const auto& e : k.simplices(1)) point(barycenter_id(k, e), e, {1, 0}, "m:" + show(e));
    for (const auto& t : k.simplices(2)) point(barycenter_id(k, t), t, {0, 1}, "p:" + show(t));
    for (const auto& t : k.simplices(2)) point(qid(t), t, {1, 1}, "q:" + show(t));

    auto edge = [&](Vertex a, Vertex b, const Simplex& carrier, CubeFold f, std::string label) {
      int id = static_cast<int>(cubes.size());
      cubes.push_back({1, {a, b}, {cube_of.at(a), cube_of.at(b)}});
      g.folding.per_cube.push_back(std::move(f));
      g.carrier.push_back(carrier);
      g.label.push_back(std::move(label));
      return id;
    };
    std::map<std::pair<Vertex, Simplex>, int> vm, vp;
    std::map<std::pair<Simplex, Simplex>, int> mq;
    std::map<std::pair<Simplex, int>, int> pq;
    for (const auto& e : k.simplices(1))
      for (Vertex u : e)
        vm[{u, e}] = edge(g.vertex_of[u], barycenter_id(k, e), e, {{-1, 0}, {0}, {0}}, "vm:" + std::to_string(u) + "|" + show(e));
    for (const auto& t : k.simplices(2)) {
      Vertex p = barycenter_id(k, t), q = qid(t);
      for (std::size_t drop = 3; drop-- > 0;) {
        Simplex e = t;
        e.erase(e.begin() + static_cast<long>(drop));
        mq[{e, t}] = edge(barycenter_id(k, e), q, t, {{1, -1}, {1}, {0}}, "mq:" + show(e) + "|" + show(t));
      }
      for (Vertex u : t) vp[{u, t}] = edge(g.vertex_of[u], p, t, {{0, -1}, {1}, {0}}, "vp:" + std::to_string(u) + "|" + show(t));
      for (int j = 0; j < 3; ++j) pq[{t, j}] = edge(p, q, t, {{-1, 1}, {0}, {0}}, "pq:" + std::to_string(j) + "|" + show(t));
    }
    for (const auto& t : k.simplices(2)) {
      const Vertex a = t[0], b = t[1], c = t[2];
      // hexagon a, m_ab, b, m_bc, c, m_ac; parallel p-q edges used in turn
      const std::vector<std::pair<Vertex, Simplex>> segs = {
          {a, {a, b}}, {b, {a, b}}, {b, {b, c}}, {c, {b, c}}, {c, {a, c}}, {a, {a, c}}};
      for (std::size_t i = 0; i < segs.size(); ++i) {
        auto [u, e] = segs[i];
        Cube sq{2,
                {g.vertex_of[u], barycenter_id(k, e), barycenter_id(k, t), qid(t)},
                {vp.at({u, t}), mq.at({e, t}), vm.at({u, e}), pq.at({t, static_cast<int>(i % 3)})}};
        cubes.push_back(std::move(sq));
        g.folding.per_cube.push_back({{-1, -1}, {0, 1}, {0, 0}});
        g.carrier.push_back(t);
        g.label.push_back("sq:" + std::to_string(u) + "|" + show(e) + "|" + show(t));
      }
    }
    g.complex = CubicalComplex::build(2, std::move(cubes), false);
    return g;
  }
};

std::vector<std::unique_ptr<HyperbolizationDriver>>& registry() {
  static std::vector<std::unique_ptr<HyperbolizationDriver>> drivers = [] {
    std::vector<std::unique_ptr<HyperbolizationDriver>> d;
    d.push_back(std::make_unique<Bary1Driver>());
    d.push_back(std::make_unique<Cubical2Driver>());
    return d;
  }();
  return drivers;
}

}  // namespace

const HyperbolizationDriver& driver_by_name(const std::string& name) {
  for (const auto& d : registry())
    if (d->name() == name) return *d;
  throw DriverMissingError("no hyperbolization driver named '" + name + "'");
}

const HyperbolizationDriver& driver_for_dim(int dim) {
  for (const auto& d : registry())
    if (d->supports(dim)) return *d;
  throw DriverMissingError("no hyperbolization driver for dimension " + std::to_string(dim));
}

void register_driver(std::unique_ptr<HyperbolizationDriver> d) {
  if (!d) throw DomainError("register_driver: null driver");
  for (const auto& e : registry())
    if (e->name() == d->name()) throw DomainError("register_driver: duplicate name " + d->name());
  registry().push_back(std::move(d));
}

Hyperbolization hyperbolize(const SimplicialComplex& k, const BlockDatum& b, const std::string& driver) {
  if (k.empty()) throw DomainError("hyperbolize: empty complex");
  const int dim = k.dimension();
  const HyperbolizationDriver& d = driver.empty() ? driver_for_dim(dim) : driver_by_name(driver);
  if (!d.supports(dim)) throw DriverMissingError("driver " + d.name() + " does not support dimension " + std::to_string(dim));
  Hyperbolization out;
  out.gromov = d.gromov(k);
  const GromovOutput& g = out.gromov;
  HyperbolizedComplex& h = out.h;
  if (dim == 0) {
    std::vector<Simplex> pts;
    for (Vertex v : g.complex.vertices()) {
      pts.push_back({v});
      h.cube_face[v] = g.complex.vertex_cube(v);
      h.block_vertex[v] = 0;
    }
    h.complex = SimplicialComplex(std::move(pts));
  } else {
    const BlockDatum& blk = dim == 1 ? bundled_block(1) : b;
    if (blk.n != dim) throw DomainError("hyperbolize: block dimension does not match the complex");
    h = strict_hyperbolize(g.complex, g.folding, blk);
  }
  for (auto& [y, face] : h.cube_face) {
    const Simplex& c = g.carrier[static_cast<std::size_t>(face)];
    h.carrier[y] = c;
    h.shadow[y] = barycenter_id(k, c);
    h.to_source[y] = c.back();
    h.label[y] = g.label[static_cast<std::size_t>(face)] + "#" + std::to_string(h.block_vertex[y]);
  }
  h.vertex_of = g.vertex_of;
  return out;
}

namespace {

// vertex map to K through cube carriers (last vertex of the carrier)
std::map<Vertex, Vertex> carrier_map(const HyperbolizedComplex& t, const GromovOutput& g) {
  std::map<Vertex, Vertex> f;
  for (auto& [y, face] : t.cube_face) f[y] = g.carrier[static_cast<std::size_t>(face)].back();
  return f;
}

}  // namespace

ContractReport check_driver_contract(const HyperbolizationDriver& d, const SimplicialComplex& k) {
  ContractReport r;
  GromovOutput g;
  try {
    g = d.gromov(k);
  } catch (const Error& e) {
    r.failures.push_back(std::string("cubical stage: ") + e.what());
    return r;
  }
  const int dim = k.dimension();
  auto fc = validate_folding(g.complex, g.folding);
  r.folding_valid = fc.ok;
  if (!fc.ok) r.failures.push_back("folding: cube " + std::to_string(fc.cube) + ": " + fc.violation);
  auto npc = npc_certificate(g.complex);
  r.npc = npc.pass;
  if (!npc.pass) r.failures.push_back("links: " + npc.first_failure);

  r.link_provenance = true;
  for (Vertex v : k.vertices()) {
    Vertex cv = g.vertex_of.at(v);
    SimplicialComplex lc = vertex_link(g.complex, cv);
    SimplicialComplex lk = link(k, {v});
    std::map<Vertex, Simplex> carrier;
    for (Vertex e : lc.vertices()) carrier[e] = simplex_minus(g.carrier[static_cast<std::size_t>(e)], {v});
    std::string why;
    if (lk.empty() || lc.empty()) {
      if (!(lk.empty() && lc.empty())) why = "link of vertex " + std::to_string(v) + " changes emptiness";
    } else if (lk.dimension() > 1) {
      why = "link of vertex " + std::to_string(v) + " has dimension above one";
    } else {
      auto chk = check_graph_subdivision(lc, carrier, lk);
      if (!chk.ok) why = "link of vertex " + std::to_string(v) + ": " + chk.detail;
    }
    if (!why.empty()) {
      r.link_provenance = false;
      r.failures.push_back(why);
      break;
    }
  }

  if (dim == 0) {
    r.manifold_preserved = r.shadow_surjective = true;
    return r;
  }
  HyperbolizedComplex t;
  try {
    t = strict_hyperbolize(g.complex, g.folding, flat_block(dim));
  } catch (const Error& e) {
    r.failures.push_back(std::string("triangulating the cube complex: ") + e.what());
    return r;
  }
  r.manifold_preserved = true;
  if (k.is_pure() && check_manifold(k, dim).verdict == Verdict::yes &&
      check_manifold(t.complex, dim).verdict != Verdict::yes) {
    r.manifold_preserved = false;
    r.failures.push_back("cube complex of a manifold is not a manifold");
  }
  auto f = carrier_map(t, g);
  r.shadow_surjective = homology_map_verdict(t.complex, k, f, 1, false).surjective;
  for (int j = 0; j <= dim; ++j) r.shadow_surjective = r.shadow_surjective && homology_map_verdict(t.complex, k, f, j, true).surjective;
  if (!r.shadow_surjective) r.failures.push_back("shadow is not surjective in homology");
  return r;
}

RelativePair relative_hyperbolize(const SimplicialComplex& k, const SimplicialComplex& l,
                                  std::vector<std::vector<std::size_t>> partition, const BlockDatum& b,
                                  const std::string& driver) {
  if (l.empty()) throw EmptySubcomplexError("relative hyperbolization: L is empty");
  if (k.dimension() < 1) throw DomainError("relative hyperbolization: K must have positive dimension");
  RelativePair r;
  r.k = k;
  r.l = l;
  r.block = b;
  auto coned = attach_cones(k, l, std::move(partition));
  r.partition = coned.blocks;
  r.coned = coned.complex;
  r.cone_vertices = coned.cone_vertices;
  r.driver = driver.empty() ? driver_for_dim(r.coned.dimension()).name() : driver;
  r.hyp = hyperbolize(r.coned, b, r.driver);
  const HyperbolizedComplex& h = r.hyp.h;
  r.fine = barycentric_subdivide(h.complex, 2);

  std::map<Simplex, Vertex> by_carrier;
  for (auto& [w, c] : r.fine.carrier)
    if (c.size() == 1) by_carrier[c] = w;
  std::vector<Simplex> rl_gens;
  r.r_k = r.fine.complex;
  for (Vertex o : r.cone_vertices) {
    auto it = h.vertex_of.find(o);
    if (it == h.vertex_of.end()) throw DomainError("relative hyperbolization: cone vertex has no image");
    Vertex w = by_carrier.at({it->second});
    r.fine_cones.push_back(w);
    r.r_k = remove_open_star(r.r_k, w);
    SimplicialComplex lw = link(r.fine.complex, {w});
    rl_gens.insert(rl_gens.end(), lw.facets().begin(), lw.facets().end());
  }
  r.r_l = SimplicialComplex(std::move(rl_gens));

  std::set<Vertex> cones(r.cone_vertices.begin(), r.cone_vertices.end());
  for (Vertex w : r.r_l.vertices()) {
    Simplex in_p;
    for (Vertex y : r.fine.carrier.at(w)) in_p = simplex_union(in_p, h.carrier.at(y));
    Simplex in_l;
    for (Vertex v : in_p)
      if (!cones.count(v)) in_l.push_back(v);
    if (in_l.empty() || !l.contains(in_l)) throw DomainError("relative hyperbolization: boundary vertex not carried by L");
    r.l_carrier[w] = in_l;
  }
  auto lcomps = path_components(l);
  r.r_l_components = path_components(r.r_l);
  for (const auto& comp : r.r_l_components) {
    const Simplex& c0 = r.l_carrier.at(comp.vertices().front());
    std::size_t src = lcomps.size();
    for (std::size_t i = 0; i < lcomps.size(); ++i)
      if (lcomps[i].contains(c0)) src = i;
    r.component_source.push_back(src);
    std::map<Vertex, Simplex> sub;
    for (Vertex w : comp.vertices()) sub[w] = r.l_carrier.at(w);
    r.provenance_checks.push_back(check_graph_subdivision(comp, sub, lcomps.at(src)));
  }
  r.s = k.count(k.dimension());
  r.blocks = h.blocks.size();
  return r;
}

namespace {

std::vector<std::vector<std::size_t>> normalized(std::vector<std::vector<std::size_t>> p) {
  for (auto& b : p) std::sort(b.begin(), b.end());
  std::sort(p.begin(), p.end());
  return p;
}

std::vector<HomologyResult> all_homology(const SimplicialComplex& x) {
  std::vector<HomologyResult> out;
  for (int j = 0; j <= x.dimension(); ++j) out.push_back(homology(x, j, Coefficients::integers));
  return out;
}

}  // namespace

ConeQuotientReport cone_quotient(const RelativePair& pair, std::vector<std::vector<std::size_t>> partition) {
  ConeQuotientReport r;
  if (partition.empty()) partition = pair.partition;
  const std::size_t ncomp = path_components(pair.l).size();
  std::vector<int> seen(ncomp, 0);
  for (const auto& blk : partition) {
    if (blk.empty()) throw DomainError("cone quotient: empty partition block");
    for (std::size_t i : blk)
      if (i >= ncomp || seen[i]++) throw DomainError("cone quotient: partition is not a partition of the components of L");
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) throw DomainError("cone quotient: partition misses a component");
  r.same_partition = normalized(partition) == normalized(pair.partition);

  std::vector<Simplex> gens = pair.r_k.facets();
  auto verts = pair.fine.complex.vertices();
  Vertex next = verts.back() + 1;
  for (const auto& blk : partition) {
    Vertex apex = next++;
    r.apexes.push_back(apex);
    for (std::size_t c = 0; c < pair.r_l_components.size(); ++c) {
      if (std::find(blk.begin(), blk.end(), pair.component_source[c]) == blk.end()) continue;
      for (const auto& f : pair.r_l_components[c].facets()) {
        Simplex s = f;
        s.push_back(apex);
        gens.push_back(std::move(s));
      }
    }
  }
  r.quotient = SimplicialComplex(std::move(gens));

  SimplicialComplex direct;
  if (r.same_partition) {
    direct = pair.fine.complex;
    // apex j stands for the cone over the same block as the pair's cone j
    std::map<Vertex, Vertex> m;
    for (Vertex v : r.quotient.vertices()) m[v] = v;
    auto np = normalized(pair.partition);
    for (std::size_t j = 0; j < partition.size(); ++j) {
      auto blk = partition[j];
      std::sort(blk.begin(), blk.end());
      for (std::size_t i = 0; i < pair.partition.size(); ++i) {
        auto pb = pair.partition[i];
        std::sort(pb.begin(), pb.end());
        if (pb == blk) m[r.apexes[j]] = pair.fine_cones[i];
      }
    }
    r.isomorphic = relabel(r.quotient, m) == direct;
  } else {
    auto coned = attach_cones(pair.k, pair.l, partition);
    direct = barycentric_subdivide(hyperbolize(coned.complex, pair.block, pair.driver).h.complex, 2).complex;
  }
  r.euler_quotient = euler_characteristic(r.quotient);
  r.euler_direct = euler_characteristic(direct);
  r.homology_quotient = all_homology(r.quotient);
  r.homology_direct = all_homology(direct);
  r.homology_match = r.homology_quotient.size() == r.homology_direct.size();
  for (std::size_t j = 0; r.homology_match && j < r.homology_quotient.size(); ++j)
    r.homology_match = r.homology_quotient[j].betti == r.homology_direct[j].betti &&
                       r.homology_quotient[j].torsion == r.homology_direct[j].torsion;
  return r;
}

Retraction block_retraction(const HyperbolizedComplex& h, std::size_t index) {
  if (index >= h.blocks.size()) throw DomainError("block retraction: no such block copy");
  const BlockCopy& copy = h.blocks[index];
  Retraction r;
  r.map.source = h.complex;
  for (Vertex y : h.complex.vertices()) r.map.assignment[y] = copy.vertex_map.at(h.block_vertex.at(y));
  std::vector<Simplex> img;
  for (const auto& f : h.complex.facets()) img.push_back(r.map.image(f));
  r.map.target = SimplicialComplex(std::move(img));
  r.map.validate();
  r.left_inverse = true;
  for (auto& [x, y] : copy.vertex_map) r.left_inverse = r.left_inverse && r.map.assignment.at(y) == y;
  return r;
}

Retraction relative_block_retraction(const RelativePair& pair) {
  const HyperbolizedComplex& h = pair.hyp.h;
  const CubicalComplex& c = pair.hyp.gromov.complex;
  std::set<Vertex> cone_c;
  for (Vertex o : pair.cone_vertices) cone_c.insert(pair.hyp.gromov.vertex_of.at(o));
  std::size_t index = h.blocks.size();
  for (std::size_t i = 0; i < h.blocks.size() && index == h.blocks.size(); ++i) {
    const auto& vs = c.cube(h.blocks[i].cube).verts;
    if (std::none_of(vs.begin(), vs.end(), [&](Vertex v) { return cone_c.count(v) > 0; })) index = i;
  }
  if (index == h.blocks.size()) throw DomainError("relative block retraction: every block meets a cone vertex");
  Retraction base = block_retraction(h, index);

  // subdivide the retraction twice, round by round
  Subdivision s1 = barycentric_subdivide(h.complex, 1);
  Subdivision s2 = barycentric_subdivide(s1.complex, 1);
  std::map<Vertex, Vertex> m1, m2;
  for (auto& [w, cw] : s1.carrier) m1[w] = barycenter_id(h.complex, base.map.image(cw));
  for (auto& [u, cu] : s2.carrier) {
    std::set<Vertex> img;
    for (Vertex w : cu) img.insert(m1.at(w));
    m2[u] = barycenter_id(s1.complex, Simplex(img.begin(), img.end()));
  }
  Retraction r;
  r.map.source = pair.r_k;
  for (Vertex u : pair.r_k.vertices()) r.map.assignment[u] = m2.at(u);
  std::vector<Simplex> img;
  for (const auto& f : pair.r_k.facets()) img.push_back(r.map.image(f));
  r.map.target = SimplicialComplex(std::move(img));
  r.map.validate();
  r.left_inverse = true;
  for (const auto& f : r.map.target.facets())
    if (!pair.r_k.contains(f)) r.left_inverse = false;
  for (Vertex u : r.map.target.vertices()) r.left_inverse = r.left_inverse && r.map.assignment.at(u) == u;
  return r;
}

VolumeReport volume_report(const Hyperbolization& hz, const SimplicialComplex& k, const std::string& driver) {
  VolumeReport v;
  v.n = k.dimension();
  const HyperbolizationDriver& d = driver.empty() ? driver_for_dim(v.n) : driver_by_name(driver);
  v.s = k.count(v.n);
  v.blocks = hz.h.blocks.size();
  v.c_n = static_cast<std::size_t>(d.blocks_per_simplex(v.n) * (v.n + 2));
  v.s_le_n = v.s <= v.blocks;
  v.n_le_cs = v.blocks <= v.c_n * v.s;
  v.facet_count = hz.h.complex.count(v.n);
  auto o = orient(hz.h.complex, v.n);
  v.orientable = o.orientable;
  if (o.orientable) v.fundamental_norm = l1_norm(fundamental_cycle(hz.h.complex, o));
  return v;
}

VolumeReport volume_report(const RelativePair& pair) {
  VolumeReport v;
  v.n = pair.k.dimension();
  const HyperbolizationDriver& d = driver_by_name(pair.driver);
  v.s = pair.s;
  v.blocks = pair.blocks;
  v.c_n = static_cast<std::size_t>(d.blocks_per_simplex(v.n) * (v.n + 2));
  v.s_le_n = v.s <= v.blocks;
  v.n_le_cs = v.blocks <= v.c_n * v.s;
  v.facet_count = pair.r_k.count(v.n);
  v.lower_bound = "||R_K, R_L|| >= ||R_K / R_L|| / (n + 2)";
  if (v.n < 2) return v;
  auto o = orient(pair.r_k, v.n);
  v.orientable = o.orientable;
  if (!o.orientable) return v;
  Chain c = fundamental_cycle(pair.r_k, o);
  v.fundamental_norm = l1_norm(c);
  auto verts = pair.r_k.vertices();
  const Vertex pt = verts.back() + 1;
  std::map<Vertex, Vertex> q;
  for (Vertex u : verts) q[u] = pair.r_l.contains({u}) ? pt : u;
  std::vector<Simplex> zgens;
  for (const auto& f : pair.r_k.facets()) {
    std::set<Vertex> img;
    for (Vertex u : f) img.insert(q[u]);
    zgens.emplace_back(img.begin(), img.end());
  }
  try {
    auto rep = relative_to_absolute(push_forward(c, q, true), {SimplicialComplex(std::move(zgens)), pt});
    v.absolute_norm = rep.norm_output;
    v.conversion_cycle = rep.is_cycle && rep.same_relative_class;
    v.conversion_bound = rep.bound_holds;
  } catch (const DomainError&) {
    // R_K has boundary outside R_L
  }
  return v;
}

}  // namespace relhyp
