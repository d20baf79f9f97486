#include "relhyp/groupgeom.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <thread>

#if defined(__x86_64__)
#include <immintrin.h>
#endif

namespace relhyp {

Word free_reduce(const Word& w) {
  Word out;
  for (int x : w) {
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

Word cyclic_reduce(const Word& w) {
  Word r = free_reduce(w);
  std::size_t i = 0, j = r.size();
  while (j - i >= 2 && r[i] == -r[j - 1]) {
    ++i;
    --j;
  }
  return Word(r.begin() + static_cast<long>(i), r.begin() + static_cast<long>(j));
}

Word inverse(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (int& x : out) x = -x;
  return out;
}

std::string word_to_string(const Word& w, std::size_t generator_count) {
  std::string s;
  if (generator_count <= 26) {
    for (int x : w) s += static_cast<char>((x > 0 ? 'a' : 'A') + std::abs(x) - 1);
    return s;
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += (w[i] > 0 ? "x" : "X") + std::to_string(std::abs(w[i]));
  }
  return s;
}

namespace {

std::string generator_name(std::size_t i, std::size_t count) {
  if (count <= 26) return std::string(1, static_cast<char>('a' + i));
  return "x" + std::to_string(i + 1);
}

}  // namespace

Presentation presentation_from_complex(const SimplicialComplex& x) {
  if (x.empty()) throw DomainError("presentation: empty complex");
  return presentation_from_complex(x, x.vertices().front());
}

Presentation presentation_from_complex(const SimplicialComplex& x, Vertex basepoint) {
  if (!x.contains({basepoint})) throw DomainError("presentation: basepoint is not a vertex");
  std::map<Vertex, std::vector<Vertex>> adj;
  for (Vertex v : x.vertices()) adj[v];
  for (const auto& e : x.simplices(1)) {
    adj[e[0]].push_back(e[1]);
    adj[e[1]].push_back(e[0]);
  }
  Presentation p;
  p.basepoint = basepoint;
  p.parent[basepoint] = basepoint;
  std::deque<Vertex> queue{basepoint};
  while (!queue.empty()) {
    Vertex u = queue.front();
    queue.pop_front();
    auto& nb = adj[u];
    std::sort(nb.begin(), nb.end());
    for (Vertex w : nb)
      if (p.parent.emplace(w, u).second) queue.push_back(w);
  }
  if (p.parent.size() != adj.size()) throw DomainError("presentation: complex is not connected");
  std::vector<Simplex> off_tree;
  for (const auto& e : x.simplices(1)) {
    bool tree = p.parent.at(e[1]) == e[0] || p.parent.at(e[0]) == e[1];
    if (!tree) off_tree.push_back(e);
  }
  for (std::size_t i = 0; i < off_tree.size(); ++i) {
    p.edge_generator[off_tree[i]] = static_cast<int>(i);
    p.generator_edge.push_back(off_tree[i]);
    p.generators.push_back(generator_name(i, off_tree.size()));
  }
  for (const auto& t : x.simplices(2)) {
    Word r = cyclic_reduce(edge_path_word(p, {t[0], t[1], t[2], t[0]}));
    if (!r.empty()) p.relators.push_back(std::move(r));
  }
  return p;
}

Word edge_path_word(const Presentation& p, const std::vector<Vertex>& path) {
  Word w;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    Vertex u = path[i], v = path[i + 1];
    if (u == v) continue;
    auto it = p.edge_generator.find({std::min(u, v), std::max(u, v)});
    if (it != p.edge_generator.end()) {
      w.push_back(u < v ? it->second + 1 : -(it->second + 1));
      continue;
    }
    auto pu = p.parent.find(u), pv = p.parent.find(v);
    if (pu == p.parent.end() || pv == p.parent.end() || (pu->second != v && pv->second != u))
      throw DomainError("edge path leaves the complex at " + std::to_string(u) + "-" + std::to_string(v));
  }
  return free_reduce(w);
}

std::vector<Vertex> generator_loop(const Presentation& p, std::size_t g) {
  const Simplex& e = p.generator_edge.at(g);
  auto to_root = [&](Vertex v) {
    std::vector<Vertex> path{v};
    while (path.back() != p.basepoint) path.push_back(p.parent.at(path.back()));
    return path;
  };
  std::vector<Vertex> loop = to_root(e[0]);
  std::reverse(loop.begin(), loop.end());
  auto back = to_root(e[1]);
  loop.insert(loop.end(), back.begin(), back.end());
  return loop;
}

TietzeResult tietze_simplify(const Presentation& p, std::size_t budget, std::vector<Word> tracked) {
  const std::size_t ngen = p.generators.size();
  std::vector<Word> rels;
  for (const auto& r : p.relators) {
    Word c = cyclic_reduce(r);
    if (!c.empty()) rels.push_back(std::move(c));
  }
  std::vector<char> rel_alive(rels.size(), 1), gen_alive(ngen, 1);
  std::vector<std::set<std::size_t>> occ(ngen);
  auto index_rel = [&](std::size_t id, bool add) {
    for (int x : rels[id]) {
      auto g = static_cast<std::size_t>(std::abs(x) - 1);
      if (add)
        occ[g].insert(id);
      else
        occ[g].erase(id);
    }
  };
  using Item = std::pair<std::size_t, std::size_t>;  // (length, relator)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  for (std::size_t i = 0; i < rels.size(); ++i) {
    index_rel(i, true);
    queue.push({rels[i].size(), i});
  }
  auto substitute = [](const Word& w, int g, const Word& value) {
    Word out;
    const Word inv = inverse(value);
    for (int x : w) {
      if (x == g)
        out.insert(out.end(), value.begin(), value.end());
      else if (x == -g)
        out.insert(out.end(), inv.begin(), inv.end());
      else
        out.push_back(x);
    }
    return out;
  };

  TietzeResult res;
  while (!queue.empty()) {
    auto [len, id] = queue.top();
    queue.pop();
    if (!rel_alive[id] || rels[id].size() != len) continue;
    if (res.steps >= budget) {
      res.budget_exhausted = true;
      break;
    }
    // generator occurring exactly once, in the fewest other relators
    std::map<int, int> count;
    for (int x : rels[id]) ++count[std::abs(x)];
    int best = 0;
    for (auto& [g, c] : count)
      if (c == 1 && (best == 0 || occ[static_cast<std::size_t>(g - 1)].size() < occ[static_cast<std::size_t>(best - 1)].size()))
        best = g;
    if (best == 0) continue;
    // rotate so the letter comes first: r = g^e w, hence g = w^-1 (e = 1) or g = w (e = -1)
    const Word& r = rels[id];
    std::size_t pos = 0;
    while (std::abs(r[pos]) != best) ++pos;
    Word rest;
    for (std::size_t k = 1; k < r.size(); ++k) rest.push_back(r[(pos + k) % r.size()]);
    Word value = r[pos] > 0 ? inverse(rest) : rest;

    index_rel(id, false);
    rel_alive[id] = 0;
    gen_alive[static_cast<std::size_t>(best - 1)] = 0;
    std::vector<std::size_t> users(occ[static_cast<std::size_t>(best - 1)].begin(), occ[static_cast<std::size_t>(best - 1)].end());
    for (std::size_t u : users) {
      index_rel(u, false);
      rels[u] = cyclic_reduce(substitute(rels[u], best, value));
      if (rels[u].empty()) {
        rel_alive[u] = 0;
        continue;
      }
      index_rel(u, true);
      queue.push({rels[u].size(), u});
    }
    for (auto& w : tracked) w = free_reduce(substitute(w, best, value));
    ++res.steps;
  }

  std::vector<int> renum(ngen + 1, 0);
  for (std::size_t g = 0; g < ngen; ++g)
    if (gen_alive[g]) {
      res.survivors.push_back(g);
      renum[g + 1] = static_cast<int>(res.survivors.size());
    }
  auto rename = [&](const Word& w) {
    Word out;
    for (int x : w) out.push_back(x > 0 ? renum[static_cast<std::size_t>(x)] : -renum[static_cast<std::size_t>(-x)]);
    return out;
  };
  for (std::size_t i = 0; i < res.survivors.size(); ++i)
    res.presentation.generators.push_back(generator_name(i, res.survivors.size()));
  std::set<Word> seen;
  for (std::size_t i = 0; i < rels.size(); ++i)
    if (rel_alive[i] && seen.insert(rels[i]).second) res.presentation.relators.push_back(rename(rels[i]));
  for (const auto& w : tracked) res.tracked.push_back(rename(w));
  return res;
}

AbelianInvariant abelianization(const Presentation& p) {
  SparseIntMatrix m;
  m.rows = static_cast<int>(p.generators.size());
  for (const auto& r : p.relators) {
    std::map<int, std::int64_t> sums;
    for (int x : r) sums[std::abs(x) - 1] += x > 0 ? 1 : -1;
    IntColumn col;
    for (auto& [g, c] : sums)
      if (c != 0) col.emplace_back(g, c);
    if (!col.empty()) m.columns.push_back(std::move(col));
  }
  auto s = smith_invariants(m, Ring::integers);
  AbelianInvariant a;
  a.rank = m.rows - static_cast<int>(s.rank);
  a.torsion = s.torsion;
  return a;
}

namespace {

// Coset table with coincidence handling; columns 2g and 2g+1 are g and g^-1.
class CosetTable {
 public:
  CosetTable(std::size_t gens, std::size_t max_rows) : cols_(2 * gens), max_rows_(max_rows) { add_row(); }

  bool overflow() const { return overflow_; }
  std::size_t rows() const { return parent_.size(); }
  bool live(std::size_t c) const { return parent_[c] == c; }
  std::size_t live_count() const {
    std::size_t n = 0;
    for (std::size_t c = 0; c < rows(); ++c) n += live(c);
    return n;
  }

  static std::size_t column(int letter) {
    auto g = static_cast<std::size_t>(std::abs(letter) - 1);
    return 2 * g + (letter < 0 ? 1 : 0);
  }
  static std::size_t inv(std::size_t col) { return col ^ 1U; }

  long get(std::size_t c, std::size_t col) const { return table_[c * cols_ + col]; }
  void set(std::size_t c, std::size_t col, long v) { table_[c * cols_ + col] = v; }

  bool define(std::size_t c, std::size_t col) {
    if (rows() >= max_rows_) {
      overflow_ = true;
      return false;
    }
    std::size_t d = add_row();
    set(c, col, static_cast<long>(d));
    set(d, inv(col), static_cast<long>(c));
    return true;
  }

  void scan_and_fill(std::size_t c, const Word& w) {
    if (w.empty()) return;
    std::size_t f = c, b = c;
    long i = 0, j = static_cast<long>(w.size()) - 1;
    auto letter = [&](long k) { return w[static_cast<std::size_t>(k)]; };
    while (true) {
      while (i <= j && get(f, column(letter(i))) >= 0) {
        f = static_cast<std::size_t>(get(f, column(letter(i))));
        ++i;
      }
      if (i > j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j >= i && get(b, inv(column(letter(j)))) >= 0) {
        b = static_cast<std::size_t>(get(b, inv(column(letter(j)))));
        --j;
      }
      if (j < i) {
        coincidence(f, b);
        return;
      }
      if (i == j) {
        set(f, column(letter(i)), static_cast<long>(b));
        set(b, inv(column(letter(i))), static_cast<long>(f));
        return;
      }
      if (!define(f, column(letter(i)))) return;
    }
  }

 private:
  std::size_t add_row() {
    std::size_t id = parent_.size();
    parent_.push_back(id);
    table_.resize(table_.size() + cols_, -1);
    return id;
  }

  std::size_t rep(std::size_t c) {
    std::size_t r = c;
    while (parent_[r] != r) r = parent_[r];
    while (parent_[c] != r) {
      std::size_t n = parent_[c];
      parent_[c] = r;
      c = n;
    }
    return r;
  }

  void merge(std::size_t a, std::size_t b, std::vector<std::size_t>& queue) {
    a = rep(a);
    b = rep(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
    queue.push_back(b);
  }

  void coincidence(std::size_t a, std::size_t b) {
    std::vector<std::size_t> queue;
    merge(a, b, queue);
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      std::size_t e = queue[qi];
      for (std::size_t col = 0; col < cols_; ++col) {
        long fv = get(e, col);
        if (fv < 0) continue;
        auto f = static_cast<std::size_t>(fv);
        if (get(f, inv(col)) == static_cast<long>(e)) set(f, inv(col), -1);
        std::size_t e1 = rep(e), f1 = rep(f);
        if (get(e1, col) >= 0)
          merge(f1, static_cast<std::size_t>(get(e1, col)), queue);
        else if (get(f1, inv(col)) >= 0)
          merge(e1, static_cast<std::size_t>(get(f1, inv(col))), queue);
        else {
          set(e1, col, static_cast<long>(f1));
          set(f1, inv(col), static_cast<long>(e1));
        }
      }
    }
  }

  std::size_t cols_;
  std::size_t max_rows_;
  bool overflow_ = false;
  std::vector<std::size_t> parent_;
  std::vector<long> table_;
};

}  // namespace

CosetEnumeration todd_coxeter(const Presentation& p, const std::vector<Word>& subgroup, std::size_t max_rows) {
  CosetEnumeration out;
  const std::size_t ngen = p.generators.size();
  if (ngen == 0) {
    out.complete = true;
    out.index = 1;
    out.rows_used = 1;
    return out;
  }
  CosetTable t(ngen, max_rows);
  std::vector<Word> rels;
  for (const auto& r : p.relators) {
    Word c = cyclic_reduce(r);
    if (!c.empty()) rels.push_back(std::move(c));
  }
  for (const auto& w : subgroup) {
    t.scan_and_fill(0, free_reduce(w));
    if (t.overflow()) break;
  }
  for (std::size_t c = 0; c < t.rows() && !t.overflow(); ++c) {
    for (const auto& r : rels) {
      if (!t.live(c) || t.overflow()) break;
      t.scan_and_fill(c, r);
    }
    if (!t.live(c)) continue;
    for (std::size_t col = 0; col < 2 * ngen && !t.overflow(); ++col)
      if (t.live(c) && t.get(c, col) < 0) t.define(c, col);
  }
  out.rows_used = t.rows();
  out.complete = !t.overflow();
  if (out.complete) out.index = t.live_count();
  return out;
}

std::string to_string(GroupClass c) {
  switch (c) {
    case GroupClass::infinite:
      return "infinite";
    case GroupClass::finite:
      return "finite";
    default:
      return "undetermined";
  }
}

namespace {

Vertex min_vertex(const SimplicialComplex& x) { return x.vertices().front(); }

}  // namespace

PeripheralStructure peripheral_structure(const RelativePair& pair, std::size_t coset_budget) {
  PeripheralStructure out;
  auto rk_parts = path_components(pair.r_k);
  std::vector<Presentation> ambient;
  for (const auto& part : rk_parts) ambient.push_back(presentation_from_complex(part, min_vertex(part)));
  if (!ambient.empty()) {
    out.ambient_generators = ambient.front().generators.size();
    out.ambient_relators = ambient.front().relators.size();
  }
  for (std::size_t i = 0; i < pair.r_l_components.size(); ++i) {
    const auto& li = pair.r_l_components[i];
    PeripheralSubgroup sub;
    sub.component = i;
    sub.source = i < pair.component_source.size() ? pair.component_source[i] : i;
    Presentation lp = presentation_from_complex(li, min_vertex(li));

    // words in the presentation of the R_K component containing L_i; the tree
    // path from its basepoint reads as the empty word
    const Vertex v0 = min_vertex(li);
    for (std::size_t c = 0; c < rk_parts.size(); ++c) {
      if (!rk_parts[c].contains({v0})) continue;
      for (std::size_t g = 0; g < lp.generators.size(); ++g)
        sub.generators.push_back(edge_path_word(ambient[c], generator_loop(lp, g)));
    }

    sub.h1 = abelianization(lp);
    if (sub.h1.rank > 0) {
      sub.classification = GroupClass::infinite;
      sub.reason = "H1 has rank " + std::to_string(sub.h1.rank);
    } else {
      auto simple = tietze_simplify(lp).presentation;
      if (simple.generators.empty()) {
        sub.classification = GroupClass::finite;
        sub.order = 1;
        sub.reason = "trivial after Tietze moves";
      } else {
        auto ce = todd_coxeter(simple, {}, coset_budget);
        if (ce.complete) {
          sub.classification = GroupClass::finite;
          sub.order = ce.index;
          sub.reason = "coset enumeration closed with " + std::to_string(ce.index) + " cosets";
        } else {
          sub.classification = GroupClass::undetermined;
          sub.reason = "coset enumeration exceeded " + std::to_string(coset_budget) + " rows";
        }
      }
    }
    out.subgroups.push_back(std::move(sub));
  }
  return out;
}

SplittingData splitting_along_simplex(const SimplicialComplex& k, const Simplex& sigma, const BlockDatum& b,
                                      const std::string& driver) {
  const Simplex s = make_simplex(sigma);
  const int n = static_cast<int>(s.size()) - 1;
  bool top = false;
  for (const auto& f : k.facets()) top = top || f == s;
  if (!top || n != k.dimension()) throw DomainError("splitting: sigma is not a top simplex of K");
  bool outside = false;
  for (const auto& t : k.simplices(2)) outside = outside || !std::includes(s.begin(), s.end(), t.begin(), t.end());
  if (!outside) throw DomainError("splitting: every 2-simplex of K is a face of sigma");

  auto hz = hyperbolize(k, b, driver);
  const auto& h = hz.h;
  auto in_sigma = [&](const Simplex& c) { return std::includes(s.begin(), s.end(), c.begin(), c.end()); };

  std::vector<Simplex> fa, fb;
  std::set<Vertex> c_verts;
  for (const auto& copy : h.blocks) {
    bool mine = hz.gromov.carrier[static_cast<std::size_t>(copy.cube)] == s;
    for (const auto& f : b.complex.facets()) {
      Simplex img;
      for (Vertex x : f) img.push_back(copy.vertex_map.at(x));
      (mine ? fa : fb).push_back(make_simplex(img));
    }
    if (!mine) continue;
    for (auto& [x, y] : copy.vertex_map) {
      const auto& car = h.carrier.at(y);
      if (in_sigma(car) && car.size() < s.size()) c_verts.insert(y);
    }
  }
  SplittingData out;
  out.ha = SimplicialComplex(fa);
  out.hc = induced_subcomplex(out.ha, std::vector<Vertex>(c_verts.begin(), c_verts.end()));
  std::vector<Simplex> fbc = fb;
  for (const auto& f : out.hc.facets()) fbc.push_back(f);
  out.hb = SimplicialComplex(fbc);
  for (const auto* part : {&out.ha, &out.hb, &out.hc})
    if (path_components(*part).size() != 1) throw DomainError("splitting: a piece of the decomposition is disconnected");

  const Vertex base = min_vertex(out.hc);
  out.a = presentation_from_complex(out.ha, base);
  out.b = presentation_from_complex(out.hb, base);
  out.c = presentation_from_complex(out.hc, base);
  for (std::size_t g = 0; g < out.c.generators.size(); ++g) {
    auto loop = generator_loop(out.c, g);
    out.into_a.push_back(edge_path_word(out.a, loop));
    out.into_b.push_back(edge_path_word(out.b, loop));
  }

  const int shift = static_cast<int>(out.a.generators.size());
  auto shifted = [&](const Word& w) {
    Word r;
    for (int x : w) r.push_back(x > 0 ? x + shift : x - shift);
    return r;
  };
  const std::size_t total = out.a.generators.size() + out.b.generators.size();
  for (std::size_t i = 0; i < total; ++i) out.amalgam.generators.push_back(generator_name(i, total));
  for (const auto& r : out.a.relators) out.amalgam.relators.push_back(r);
  for (const auto& r : out.b.relators) out.amalgam.relators.push_back(shifted(r));
  for (std::size_t g = 0; g < out.into_a.size(); ++g) {
    Word r = out.into_a[g];
    Word rb = inverse(shifted(out.into_b[g]));
    r.insert(r.end(), rb.begin(), rb.end());
    r = cyclic_reduce(r);
    if (!r.empty()) out.amalgam.relators.push_back(std::move(r));
  }
  out.amalgam_h1 = abelianization(out.amalgam);
  out.direct_h1 = abelianization(presentation_from_complex(h.complex));
  out.h1_match = out.amalgam_h1 == out.direct_h1;

  std::map<Vertex, Vertex> id;
  for (Vertex v : out.hc.vertices()) id[v] = v;
  out.boundary_map = induced_map(SimplicialMap{out.hc, out.ha, id}, n - 1, Coefficients::integers);
  out.zero_map = true;
  for (const auto& row : out.boundary_map.matrix)
    for (const auto& e : row) out.zero_map = out.zero_map && e == Rational(0);
  return out;
}

MetricGraph::MetricGraph(std::vector<int> vertices, std::vector<std::pair<int, int>> edges, std::set<int> cones)
    : cones_(std::move(cones)) {
  std::sort(vertices.begin(), vertices.end());
  vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
  vertices_ = std::move(vertices);
  for (std::size_t i = 0; i < vertices_.size(); ++i) index_[vertices_[i]] = i;
  adj_.resize(vertices_.size());
  for (int c : cones_)
    if (!index_.count(c)) throw DomainError("graph: cone " + std::to_string(c) + " is not a vertex");
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : edges) {
    if (u == v) throw DomainError("graph: loop at " + std::to_string(u));
    if (!index_.count(u) || !index_.count(v))
      throw DomainError("graph: edge " + std::to_string(u) + "-" + std::to_string(v) + " has an unknown endpoint");
    if (u > v) std::swap(u, v);
    if (!seen.insert({u, v}).second)
      throw DomainError("graph: repeated edge " + std::to_string(u) + "-" + std::to_string(v));
  }
  edges_.assign(seen.begin(), seen.end());
  for (auto [u, v] : edges_) {
    adj_[index_[u]].push_back(index_[v]);
    adj_[index_[v]].push_back(index_[u]);
  }
  for (auto& a : adj_) std::sort(a.begin(), a.end());
}

std::size_t MetricGraph::index(int v) const {
  auto it = index_.find(v);
  if (it == index_.end()) throw DomainError("graph: unknown vertex " + std::to_string(v));
  return it->second;
}

namespace {

std::vector<int> bfs(const MetricGraph& g, std::size_t src) {
  std::vector<int> d(g.size(), -1);
  std::deque<std::size_t> queue{src};
  d[src] = 0;
  while (!queue.empty()) {
    auto u = queue.front();
    queue.pop_front();
    for (auto w : g.neighbors(u))
      if (d[w] < 0) {
        d[w] = d[u] + 1;
        queue.push_back(w);
      }
  }
  return d;
}

unsigned worker_count(std::size_t jobs) {
  unsigned hw = std::max(1U, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(std::min(hw, 16U), std::max<std::size_t>(jobs, 1)));
}

// Runs body(i) for i in [0, jobs) on strided worker threads.
template <class F>
void parallel_for(std::size_t jobs, F body) {
  unsigned t = worker_count(jobs);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < t; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < jobs; i += t) body(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

bool MetricGraph::connected() const {
  if (vertices_.empty()) return true;
  auto d = bfs(*this, 0);
  return std::none_of(d.begin(), d.end(), [](int x) { return x < 0; });
}

std::vector<std::vector<int>> MetricGraph::distances() const {
  std::vector<std::vector<int>> d(size());
  parallel_for(size(), [&](std::size_t i) { d[i] = bfs(*this, i); });
  return d;
}

MetricGraph coned_off(const MetricGraph& g, const std::vector<std::vector<int>>& sets) {
  std::vector<int> verts = g.vertices();
  auto edges = g.edges();
  std::set<int> cones = g.cones();
  int next = verts.empty() ? 0 : verts.back() + 1;
  for (const auto& s : sets) {
    if (s.empty()) throw DomainError("coned_off: empty vertex set");
    std::set<int> members(s.begin(), s.end());
    for (int v : members) {
      g.index(v);
      if (g.cones().count(v)) throw DomainError("coned_off: " + std::to_string(v) + " is already a cone vertex");
      edges.emplace_back(v, next);
    }
    verts.push_back(next);
    cones.insert(next);
    ++next;
  }
  return MetricGraph(std::move(verts), std::move(edges), std::move(cones));
}

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

// Twice delta restricted to quadruples x < y < z < w for one x.
int delta_row_scalar(const std::vector<int>& d, std::size_t n, std::size_t x) {
  int best = 0;
  const int* dx = &d[x * n];
  for (std::size_t y = x + 1; y < n; ++y) {
    const int* dy = &d[y * n];
    for (std::size_t z = y + 1; z < n; ++z) {
      const int* dz = &d[z * n];
      const int a = dx[y], b = dx[z], c = dy[z];
      for (std::size_t w = z + 1; w < n; ++w) {
        int s1 = a + dz[w], s2 = b + dy[w], s3 = c + dx[w];
        int hi = std::max({s1, s2, s3}), lo = std::min({s1, s2, s3});
        best = std::max(best, hi - (s1 + s2 + s3 - hi - lo));
      }
    }
  }
  return best;
}

#if defined(__x86_64__)
__attribute__((target("avx2"))) int delta_row_avx2(const std::vector<int>& d, std::size_t n, std::size_t x) {
  int best = 0;
  const int* dx = &d[x * n];
  for (std::size_t y = x + 1; y < n; ++y) {
    const int* dy = &d[y * n];
    for (std::size_t z = y + 1; z < n; ++z) {
      const int* dz = &d[z * n];
      const int a = dx[y], b = dx[z], c = dy[z];
      const __m256i va = _mm256_set1_epi32(a), vb = _mm256_set1_epi32(b), vc = _mm256_set1_epi32(c);
      __m256i vbest = _mm256_setzero_si256();
      std::size_t w = z + 1;
      for (; w + 8 <= n; w += 8) {
        __m256i s1 = _mm256_add_epi32(va, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dz + w)));
        __m256i s2 = _mm256_add_epi32(vb, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dy + w)));
        __m256i s3 = _mm256_add_epi32(vc, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dx + w)));
        __m256i hi = _mm256_max_epi32(_mm256_max_epi32(s1, s2), s3);
        __m256i lo = _mm256_min_epi32(_mm256_min_epi32(s1, s2), s3);
        __m256i mid = _mm256_sub_epi32(_mm256_sub_epi32(_mm256_add_epi32(_mm256_add_epi32(s1, s2), s3), hi), lo);
        vbest = _mm256_max_epi32(vbest, _mm256_sub_epi32(hi, mid));
      }
      alignas(32) int lanes[8];
      _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), vbest);
      for (int l : lanes) best = std::max(best, l);
      for (; w < n; ++w) {
        int s1 = a + dz[w], s2 = b + dy[w], s3 = c + dx[w];
        int hi = std::max({s1, s2, s3}), lo = std::min({s1, s2, s3});
        best = std::max(best, hi - (s1 + s2 + s3 - hi - lo));
      }
    }
  }
  return best;
}
#endif

}  // namespace

Rational delta_hyperbolicity(const MetricGraph& g, DeltaKernel kernel) {
  if (!g.connected()) throw DomainError("delta: graph is not connected");
  const std::size_t n = g.size();
  if (n < 4) return Rational(0);
  bool vec = kernel == DeltaKernel::avx2 || (kernel == DeltaKernel::automatic && avx2_available());
  if (kernel == DeltaKernel::avx2 && !avx2_available()) throw DomainError("delta: AVX2 not available on this CPU");
  auto rows = g.distances();
  std::vector<int> d(n * n);
  for (std::size_t i = 0; i < n; ++i) std::copy(rows[i].begin(), rows[i].end(), d.begin() + static_cast<long>(i * n));
  std::vector<int> best(n, 0);
  parallel_for(n, [&](std::size_t x) {
#if defined(__x86_64__)
    best[x] = vec ? delta_row_avx2(d, n, x) : delta_row_scalar(d, n, x);
#else
    (void)vec;
    best[x] = delta_row_scalar(d, n, x);
#endif
  });
  return Rational(*std::max_element(best.begin(), best.end()), 2);
}

namespace {

void count_paths(const MetricGraph& g, std::size_t cur, std::size_t target, int len, int lmax,
                 const std::vector<int>& dist, std::vector<char>& used, std::vector<std::size_t>& by_length) {
  for (auto w : g.neighbors(cur)) {
    if (w == target) {
      // closing edge; the path back must have at least two edges
      if (len + 1 >= 2) ++by_length[static_cast<std::size_t>(len + 2)];
      continue;
    }
    if (used[w] || dist[w] < 0 || len + 1 + dist[w] + 1 > lmax) continue;
    used[w] = 1;
    count_paths(g, w, target, len + 1, lmax, dist, used, by_length);
    used[w] = 0;
  }
}

}  // namespace

std::vector<EdgeCensus> fineness_census(const MetricGraph& g, int lmax) {
  if (lmax < 3) throw DomainError("census: Lmax must be at least 3");
  std::vector<EdgeCensus> out(g.edges().size());
  parallel_for(out.size(), [&](std::size_t e) {
    auto [u, v] = g.edges()[e];
    std::size_t iu = g.index(u), iv = g.index(v);
    EdgeCensus& c = out[e];
    c.edge = {u, v};
    c.by_length.assign(static_cast<std::size_t>(lmax) + 1, 0);
    auto dist = bfs(g, iu);
    std::vector<char> used(g.size(), 0);
    used[iv] = 1;
    used[iu] = 1;
    // walk v -> ... -> u; len counts edges walked from v
    for (auto w : g.neighbors(iv)) {
      if (w == iu || 1 + dist[w] + 1 > lmax) continue;
      used[w] = 1;
      count_paths(g, w, iu, 1, lmax, dist, used, c.by_length);
      used[w] = 0;
    }
    for (auto x : c.by_length) c.total += x;
  });
  return out;
}

BassSerreSample bass_serre_sample(const SplittingData& s, std::size_t coset_budget, int radius, std::size_t degree_cap) {
  BassSerreSample out;
  out.radius = radius;
  auto ea = todd_coxeter(s.a, s.into_a, coset_budget);
  auto eb = todd_coxeter(s.b, s.into_b, coset_budget);
  out.index_a = ea.complete ? ea.index : 0;
  out.index_b = eb.complete ? eb.index : 0;
  auto degree = [&](std::size_t idx) {
    if (idx == 0 || idx > degree_cap) {
      out.partial = true;
      return degree_cap;
    }
    return idx;
  };
  const std::size_t deg_a = degree(out.index_a), deg_b = degree(out.index_b);

  // vertex 0 is the coset A; types alternate along every edge
  std::vector<int> verts{0};
  std::vector<std::pair<int, int>> edges;
  std::vector<char> is_a{1};
  std::vector<int> depth{0};
  for (std::size_t i = 0; i < verts.size(); ++i) {
    if (depth[i] >= radius) continue;
    std::size_t children = is_a[i] ? deg_a : deg_b;
    if (i != 0) --children;
    for (std::size_t c = 0; c < children; ++c) {
      int id = static_cast<int>(verts.size());
      verts.push_back(id);
      is_a.push_back(!is_a[i]);
      depth.push_back(depth[i] + 1);
      edges.emplace_back(static_cast<int>(i), id);
    }
  }
  out.tree = MetricGraph(verts, edges);
  out.is_tree = out.tree.connected() && edges.size() + 1 == verts.size();
  if (!out.is_tree) throw DomainError("Bass-Serre sample is not a tree");
  return out;
}

}  // namespace relhyp
