#include "relhyp/simplicial.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

#include "relhyp/homology.hpp"

namespace relhyp {

namespace {

std::string show(const Simplex& s) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
  os << ']';
  return os.str();
}

// Every nonempty subset of `s`, appended to per-dimension buckets.
void push_faces(const Simplex& s, std::vector<std::vector<Simplex>>& buckets) {
  const std::size_t n = s.size();
  if (buckets.size() < n) buckets.resize(n);
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    Simplex f;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) f.push_back(s[i]);
    buckets[f.size() - 1].push_back(std::move(f));
  }
}

}  // namespace

Simplex make_simplex(std::vector<Vertex> verts) {
  std::sort(verts.begin(), verts.end());
  if (std::adjacent_find(verts.begin(), verts.end()) != verts.end())
    throw DomainError("simplex has a repeated vertex: " + show(verts));
  return verts;
}

bool is_face_of(const Simplex& a, const Simplex& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

Simplex simplex_minus(const Simplex& a, const Simplex& b) {
  Simplex out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Simplex simplex_union(const Simplex& a, const Simplex& b) {
  Simplex out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

SimplicialComplex::SimplicialComplex(std::vector<Simplex> generators) {
  std::vector<std::vector<Simplex>> buckets;
  for (auto& g : generators) {
    if (g.empty()) continue;
    g = make_simplex(std::move(g));
    if (g.size() > 20) throw DomainError("simplex dimension too large");
    push_faces(g, buckets);
  }
  for (auto& b : buckets) {
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
  }
  faces_ = std::move(buckets);
  // A simplex is a facet iff no simplex one dimension up contains it.
  for (std::size_t k = 0; k < faces_.size(); ++k) {
    std::vector<char> covered(faces_[k].size(), 0);
    if (k + 1 < faces_.size()) {
      for (const auto& up : faces_[k + 1]) {
        for (std::size_t drop = 0; drop < up.size(); ++drop) {
          Simplex f;
          f.reserve(k + 1);
          for (std::size_t i = 0; i < up.size(); ++i)
            if (i != drop) f.push_back(up[i]);
          auto it = std::lower_bound(faces_[k].begin(), faces_[k].end(), f);
          covered[static_cast<std::size_t>(it - faces_[k].begin())] = 1;
        }
      }
    }
    for (std::size_t i = 0; i < faces_[k].size(); ++i)
      if (!covered[i]) facets_.push_back(faces_[k][i]);
  }
  std::sort(facets_.begin(), facets_.end());
}

SimplicialComplex SimplicialComplex::from_facets_strict(std::vector<std::vector<Vertex>> facets) {
  std::vector<Simplex> fs;
  fs.reserve(facets.size());
  for (auto& f : facets) {
    if (f.empty()) throw DomainError("empty facet");
    for (std::size_t i = 1; i < f.size(); ++i)
      if (f[i - 1] >= f[i])
        throw DomainError("facet vertices must be strictly increasing: " + show(f));
    fs.push_back(f);
  }
  std::vector<Simplex> sorted = fs;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] == sorted[i - 1]) throw DomainError("duplicate facet " + show(sorted[i]));
  SimplicialComplex x(fs);
  if (x.facets().size() != fs.size())
    throw DomainError("a listed facet is a proper face of another facet");
  return x;
}

const std::vector<Simplex>& SimplicialComplex::simplices(int k) const {
  static const std::vector<Simplex> none;
  if (k < 0 || k >= static_cast<int>(faces_.size())) return none;
  return faces_[static_cast<std::size_t>(k)];
}

std::vector<Vertex> SimplicialComplex::vertices() const {
  std::vector<Vertex> out;
  for (const auto& s : simplices(0)) out.push_back(s[0]);
  return out;
}

std::vector<std::size_t> SimplicialComplex::f_vector() const {
  std::vector<std::size_t> out;
  for (const auto& b : faces_) out.push_back(b.size());
  return out;
}

std::optional<std::size_t> SimplicialComplex::find(const Simplex& s) const {
  if (s.empty()) return std::nullopt;
  const auto& b = simplices(static_cast<int>(s.size()) - 1);
  auto it = std::lower_bound(b.begin(), b.end(), s);
  if (it == b.end() || *it != s) return std::nullopt;
  return static_cast<std::size_t>(it - b.begin());
}

bool SimplicialComplex::contains(const Simplex& s) const { return s.empty() || find(s).has_value(); }

std::size_t SimplicialComplex::index_of(const Simplex& s) const {
  auto i = find(s);
  if (!i) throw DomainError("simplex " + show(s) + " is not a face of the complex");
  return *i;
}

bool SimplicialComplex::is_pure() const {
  return std::all_of(facets_.begin(), facets_.end(),
                     [&](const Simplex& f) { return static_cast<int>(f.size()) - 1 == dimension(); });
}

Simplex SimplicialMap::image(const Simplex& s) const {
  std::vector<Vertex> img;
  for (Vertex v : s) {
    auto it = assignment.find(v);
    if (it == assignment.end()) throw DomainError("vertex " + std::to_string(v) + " has no image");
    img.push_back(it->second);
  }
  std::sort(img.begin(), img.end());
  img.erase(std::unique(img.begin(), img.end()), img.end());
  return img;
}

void SimplicialMap::validate() const {
  for (Vertex v : source.vertices())
    if (!assignment.count(v)) throw DomainError("vertex " + std::to_string(v) + " has no image");
  for (const auto& f : source.facets())
    if (!target.contains(image(f)))
      throw DomainError("image of " + show(f) + " is not a simplex of the target");
}

Simplex Subdivision::carrier_of(const Simplex& s) const {
  Simplex out;
  for (Vertex v : s) out = simplex_union(out, carrier.at(v));
  return out;
}

SimplicialComplex link(const SimplicialComplex& x, const Simplex& s) {
  if (s.empty()) return x;
  if (!x.contains(s)) throw DomainError("link: " + show(s) + " is not a face");
  std::vector<Simplex> gens;
  for (const auto& f : x.facets())
    if (is_face_of(s, f)) {
      Simplex rest = simplex_minus(f, s);
      if (!rest.empty()) gens.push_back(std::move(rest));
    }
  return SimplicialComplex(std::move(gens));
}

SimplicialComplex closed_star(const SimplicialComplex& x, Vertex v) {
  std::vector<Simplex> gens;
  for (const auto& f : x.facets())
    if (std::binary_search(f.begin(), f.end(), v)) gens.push_back(f);
  return SimplicialComplex(std::move(gens));
}

SimplicialComplex induced_subcomplex(const SimplicialComplex& x, const std::vector<Vertex>& verts) {
  std::vector<Vertex> vs = verts;
  std::sort(vs.begin(), vs.end());
  std::vector<Simplex> gens;
  for (int k = 0; k <= x.dimension(); ++k)
    for (const auto& s : x.simplices(k))
      if (std::includes(vs.begin(), vs.end(), s.begin(), s.end())) gens.push_back(s);
  return SimplicialComplex(std::move(gens));
}

SimplicialComplex remove_open_star(const SimplicialComplex& x, Vertex v) {
  std::vector<Simplex> gens;
  for (int k = 0; k <= x.dimension(); ++k)
    for (const auto& s : x.simplices(k))
      if (!std::binary_search(s.begin(), s.end(), v)) gens.push_back(s);
  return SimplicialComplex(std::move(gens));
}

namespace {

Subdivision subdivide_once(const SimplicialComplex& x) {
  Subdivision out;
  std::map<Simplex, Vertex> id;
  Vertex next = 0;
  for (int k = 0; k <= x.dimension(); ++k)
    for (const auto& s : x.simplices(k)) {
      id.emplace(s, next);
      out.carrier.emplace(next, s);
      ++next;
    }
  // Facets of the subdivision are maximal chains below each facet.
  std::vector<Simplex> gens;
  for (const auto& f : x.facets()) {
    std::vector<std::size_t> perm(f.size());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      Simplex chain;
      Simplex cur;
      for (std::size_t i : perm) {
        cur.push_back(f[i]);
        std::sort(cur.begin(), cur.end());
        chain.push_back(id.at(cur));
      }
      gens.push_back(std::move(chain));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  out.complex = SimplicialComplex(std::move(gens));
  return out;
}

}  // namespace

Subdivision barycentric_subdivide(const SimplicialComplex& x, int times) {
  if (times < 0) throw DomainError("subdivision rounds must be nonnegative");
  Subdivision acc;
  acc.complex = x;
  for (Vertex v : x.vertices()) acc.carrier.emplace(v, Simplex{v});
  for (int r = 0; r < times; ++r) {
    Subdivision step = subdivide_once(acc.complex);
    std::map<Vertex, Simplex> composed;
    for (const auto& [v, c] : step.carrier) composed.emplace(v, acc.carrier_of(c));
    acc.complex = std::move(step.complex);
    acc.carrier = std::move(composed);
  }
  return acc;
}

std::vector<SimplicialComplex> path_components(const SimplicialComplex& x) {
  std::vector<Vertex> verts = x.vertices();
  if (verts.empty()) return {};
  std::map<Vertex, Vertex> parent;
  for (Vertex v : verts) parent[v] = v;
  auto find = [&](Vertex v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const auto& e : x.simplices(1)) {
    Vertex a = find(e[0]), b = find(e[1]);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<Vertex, std::vector<Simplex>> groups;
  for (const auto& f : x.facets()) groups[find(f[0])].push_back(f);
  std::vector<SimplicialComplex> out;
  for (auto& [root, fs] : groups) out.emplace_back(std::move(fs));
  return out;
}

ConedComplex attach_cones(const SimplicialComplex& k, const SimplicialComplex& l,
                          std::vector<std::vector<std::size_t>> partition) {
  for (const auto& f : l.facets())
    if (!k.contains(f)) throw DomainError("attach_cones: L is not a subcomplex of K");
  auto comps = path_components(l);
  if (partition.empty())
    for (std::size_t i = 0; i < comps.size(); ++i) partition.push_back({i});
  std::vector<int> seen(comps.size(), 0);
  for (const auto& block : partition) {
    if (block.empty()) throw DomainError("attach_cones: empty partition block");
    for (std::size_t i : block) {
      if (i >= comps.size()) throw DomainError("attach_cones: partition names a missing component");
      if (seen[i]++) throw DomainError("attach_cones: partition blocks overlap");
    }
  }
  for (std::size_t i = 0; i < comps.size(); ++i)
    if (!seen[i]) throw DomainError("attach_cones: partition does not cover every component");

  std::vector<Simplex> gens = k.facets();
  Vertex next = 0;
  for (Vertex v : k.vertices()) next = std::max(next, v + 1);
  ConedComplex out;
  for (const auto& block : partition) {
    Vertex apex = next++;
    out.cone_vertices.push_back(apex);
    for (std::size_t i : block)
      for (const auto& f : comps[i].facets()) {
        Simplex s = f;
        s.push_back(apex);
        gens.push_back(std::move(s));
      }
  }
  out.blocks = std::move(partition);
  out.complex = SimplicialComplex(std::move(gens));
  return out;
}

SimplicialComplex boundary_subcomplex(const SimplicialComplex& x) {
  if (x.empty()) return {};
  if (!x.is_pure()) throw DomainError("boundary_subcomplex: complex is not pure");
  const int n = x.dimension();
  if (n == 0) return {};
  std::map<Simplex, int> cofaces;
  for (const auto& f : x.facets())
    for (std::size_t drop = 0; drop < f.size(); ++drop) {
      Simplex t;
      for (std::size_t i = 0; i < f.size(); ++i)
        if (i != drop) t.push_back(f[i]);
      ++cofaces[t];
    }
  std::vector<Simplex> gens;
  for (auto& [t, c] : cofaces)
    if (c == 1) gens.push_back(t);
  return SimplicialComplex(std::move(gens));
}

std::ptrdiff_t euler_characteristic(const SimplicialComplex& x) {
  std::ptrdiff_t chi = 0;
  for (int k = 0; k <= x.dimension(); ++k)
    chi += (k % 2 == 0 ? 1 : -1) * static_cast<std::ptrdiff_t>(x.count(k));
  return chi;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    default: return "undetermined";
  }
}

namespace {

enum class BallKind { sphere, ball, neither, unknown };

BallKind recognize_sphere_or_ball(const SimplicialComplex& lk, int d) {
  if (lk.empty()) return d == -1 ? BallKind::sphere : BallKind::neither;
  if (lk.dimension() != d || !lk.is_pure()) return BallKind::neither;
  if (d == 0) {
    const auto n = lk.count(0);
    return n == 1 ? BallKind::ball : n == 2 ? BallKind::sphere : BallKind::neither;
  }
  if (path_components(lk).size() != 1) return BallKind::neither;
  if (d == 1) {
    std::map<Vertex, int> deg;
    for (const auto& e : lk.simplices(1)) ++deg[e[0]], ++deg[e[1]];
    int ones = 0;
    for (auto& [v, c] : deg) {
      if (c > 2) return BallKind::neither;
      if (c == 1) ++ones;
    }
    if (ones == 0) return BallKind::sphere;
    return ones == 2 ? BallKind::ball : BallKind::neither;
  }
  if (d == 2) {
    for (Vertex v : lk.vertices()) {
      auto k = recognize_sphere_or_ball(link(lk, {v}), 1);
      if (k != BallKind::sphere && k != BallKind::ball) return BallKind::neither;
    }
    auto bd = boundary_subcomplex(lk);
    auto chi = euler_characteristic(lk);
    if (bd.empty()) return chi == 2 ? BallKind::sphere : BallKind::neither;
    return (chi == 1 && path_components(bd).size() == 1) ? BallKind::ball : BallKind::neither;
  }
  // Homology-level test only in higher dimensions.
  auto bd = boundary_subcomplex(lk);
  for (int k = 1; k <= d; ++k) {
    auto h = homology(lk, k, Coefficients::integers);
    int expect = (bd.empty() && k == d) ? 1 : 0;
    if (h.betti != expect || !h.torsion.empty()) return BallKind::neither;
  }
  return BallKind::unknown;
}

}  // namespace

ManifoldCertificate check_manifold(const SimplicialComplex& x, int n) {
  if (x.empty()) return {Verdict::yes, "empty complex"};
  if (!x.is_pure()) throw DomainError("check_manifold: complex is not pure");
  if (x.dimension() != n)
    return {Verdict::no, "dimension " + std::to_string(x.dimension()) + " differs from n"};
  if (n == 0) return {Verdict::yes, "0-dimensional"};
  bool unknown = false;
  std::map<Vertex, std::vector<Simplex>> star;
  for (const auto& f : x.facets())
    for (Vertex v : f) star[v].push_back(simplex_minus(f, {v}));
  for (auto& [v, gens] : star) {
    auto kind = recognize_sphere_or_ball(SimplicialComplex(std::move(gens)), n - 1);
    if (kind == BallKind::neither)
      return {Verdict::no, "link of vertex " + std::to_string(v) + " is not a sphere or ball"};
    if (kind == BallKind::unknown) unknown = true;
  }
  if (unknown) return {Verdict::undetermined, "vertex links are homology spheres or balls"};
  return {Verdict::yes, "all vertex links are spheres or balls"};
}

Orientation orient(const SimplicialComplex& x, int n) {
  Orientation out;
  if (x.empty()) {
    out.orientable = true;
    return out;
  }
  if (!x.is_pure() || x.dimension() != n) throw DomainError("orient: not a pure n-complex");
  const auto& facets = x.facets();
  // (face, facet index, position of the dropped vertex)
  std::map<Simplex, std::vector<std::pair<std::size_t, std::size_t>>> adj;
  for (std::size_t fi = 0; fi < facets.size(); ++fi)
    for (std::size_t drop = 0; drop < facets[fi].size(); ++drop) {
      Simplex t;
      for (std::size_t i = 0; i < facets[fi].size(); ++i)
        if (i != drop) t.push_back(facets[fi][i]);
      adj[t].emplace_back(fi, drop);
    }
  for (auto& [t, users] : adj)
    if (users.size() > 2) throw DomainError("orient: not a pseudomanifold (a codimension-one face lies in >2 facets)");

  std::vector<int> sign(facets.size(), 0);
  std::vector<std::ptrdiff_t> parent(facets.size(), -1);
  auto path_to_root = [&](std::size_t f) {
    std::vector<std::size_t> p{f};
    while (parent[p.back()] >= 0) p.push_back(static_cast<std::size_t>(parent[p.back()]));
    return p;
  };
  // neighbors per facet
  std::vector<std::vector<std::tuple<std::size_t, std::size_t, std::size_t>>> nb(facets.size());
  for (auto& [t, users] : adj)
    if (users.size() == 2) {
      nb[users[0].first].emplace_back(users[1].first, users[0].second, users[1].second);
      nb[users[1].first].emplace_back(users[0].first, users[1].second, users[0].second);
    }
  out.orientable = true;
  for (std::size_t root = 0; root < facets.size(); ++root) {
    if (sign[root]) continue;
    sign[root] = 1;
    std::deque<std::size_t> queue{root};
    while (!queue.empty()) {
      std::size_t f = queue.front();
      queue.pop_front();
      for (auto [g, pos_f, pos_g] : nb[f]) {
        // induced signs (-1)^pos * sign must cancel
        int want = -sign[f] * ((pos_f % 2) ? -1 : 1) * ((pos_g % 2) ? -1 : 1);
        if (!sign[g]) {
          sign[g] = want;
          parent[g] = static_cast<std::ptrdiff_t>(f);
          queue.push_back(g);
        } else if (sign[g] != want && out.orientable) {
          out.orientable = false;
          auto a = path_to_root(f);
          auto b = path_to_root(g);
          while (a.size() > 1 && b.size() > 1 && a[a.size() - 2] == b[b.size() - 2]) {
            a.pop_back();
            b.pop_back();
          }
          for (auto i : a) out.obstruction.push_back(facets[i]);
          for (auto it = b.rbegin() + 1; it != b.rend(); ++it) out.obstruction.push_back(facets[*it]);
        }
      }
    }
  }
  if (out.orientable) out.signs = std::move(sign);
  return out;
}

SurfaceClass classify_surface(const SimplicialComplex& x) {
  auto cert = check_manifold(x, 2);
  if (cert.verdict != Verdict::yes) throw DomainError("classify_surface: not a surface: " + cert.detail);
  if (path_components(x).size() != 1) throw DomainError("classify_surface: surface is not connected");
  SurfaceClass c;
  c.euler = euler_characteristic(x);
  c.boundary_components = static_cast<int>(path_components(boundary_subcomplex(x)).size());
  c.orientable = orient(x, 2).orientable;
  const auto rest = 2 - c.euler - c.boundary_components;
  c.genus = static_cast<int>(c.orientable ? rest / 2 : rest);
  return c;
}

SimplicialComplex relabel(const SimplicialComplex& x, const std::map<Vertex, Vertex>& m) {
  std::set<Vertex> images;
  for (Vertex v : x.vertices()) {
    auto it = m.find(v);
    if (it == m.end()) throw DomainError("relabel: vertex " + std::to_string(v) + " unmapped");
    if (!images.insert(it->second).second) throw DomainError("relabel: map is not injective");
  }
  std::vector<Simplex> gens;
  for (const auto& f : x.facets()) {
    Simplex s;
    for (Vertex v : f) s.push_back(m.at(v));
    gens.push_back(make_simplex(std::move(s)));
  }
  return SimplicialComplex(std::move(gens));
}

SubdivisionCheck check_graph_subdivision(const SimplicialComplex& fine,
                                         const std::map<Vertex, Simplex>& carrier,
                                         const SimplicialComplex& coarse) {
  if (coarse.dimension() > 1) return {false, "only coarse complexes of dimension <= 1 are supported"};
  if (fine.dimension() > 1) return {false, "fine complex has dimension > 1"};
  std::map<Vertex, Vertex> at_vertex;  // coarse vertex -> fine vertex
  for (Vertex v : fine.vertices()) {
    auto it = carrier.find(v);
    if (it == carrier.end()) return {false, "fine vertex " + std::to_string(v) + " has no carrier"};
    if (!coarse.contains(it->second))
      return {false, "carrier of fine vertex " + std::to_string(v) + " is not a coarse simplex"};
    if (it->second.size() == 1 && !at_vertex.emplace(it->second[0], v).second)
      return {false, "coarse vertex " + std::to_string(it->second[0]) + " carries two fine vertices"};
  }
  for (Vertex u : coarse.vertices())
    if (!at_vertex.count(u)) return {false, "coarse vertex " + std::to_string(u) + " carries no fine vertex"};

  std::map<Simplex, std::vector<Simplex>> groups;
  for (const auto& e : fine.simplices(1)) {
    Simplex u = simplex_union(carrier.at(e[0]), carrier.at(e[1]));
    if (u.size() != 2 || !coarse.contains(u))
      return {false, "fine edge " + show(e) + " is not carried by a coarse edge"};
    groups[u].push_back(e);
  }
  std::map<Simplex, std::vector<Vertex>> interior;
  for (Vertex v : fine.vertices())
    if (carrier.at(v).size() == 2) interior[carrier.at(v)].push_back(v);

  for (const auto& ce : coarse.simplices(1)) {
    auto git = groups.find(ce);
    if (git == groups.end()) return {false, "coarse edge " + show(ce) + " is not subdivided"};
    const auto& edges = git->second;
    const auto& inner = interior[ce];
    if (edges.size() != inner.size() + 1) return {false, "coarse edge " + show(ce) + " is not carried by a path"};
    std::map<Vertex, std::vector<Vertex>> adj;
    for (const auto& e : edges) adj[e[0]].push_back(e[1]), adj[e[1]].push_back(e[0]);
    const Vertex a = at_vertex.at(ce[0]), b = at_vertex.at(ce[1]);
    if (adj[a].size() != 1 || adj[b].size() != 1)
      return {false, "coarse edge " + show(ce) + ": path endpoints are wrong"};
    for (Vertex v : inner)
      if (adj[v].size() != 2) return {false, "coarse edge " + show(ce) + ": interior vertex is not on a path"};
    // walk from a
    Vertex prev = a, cur = adj[a][0];
    std::size_t steps = 1;
    while (cur != b && steps <= edges.size()) {
      Vertex nxt = adj[cur][0] == prev ? adj[cur][1] : adj[cur][0];
      prev = cur;
      cur = nxt;
      ++steps;
    }
    if (cur != b || steps != edges.size()) return {false, "coarse edge " + show(ce) + ": carried edges are not one path"};
  }
  return {true, "subdivision verified"};
}

}  // namespace relhyp
