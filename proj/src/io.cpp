#include "relhyp/io.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace relhyp::io {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ParseError(what);
}

const json& field(const json& j, const char* key) {
  require(j.is_object() && j.contains(key), std::string("missing field \"") + key + "\"");
  return j.at(key);
}

int as_int(const json& j, const std::string& what) {
  require(j.is_number_integer(), what + ": expected an integer");
  return j.get<int>();
}

Vertex as_vertex(const json& j) {
  int v = as_int(j, "vertex");
  require(v >= 0, "vertex ids must be nonnegative");
  return v;
}

std::vector<int> int_list(const json& j, const std::string& what) {
  require(j.is_array(), what + ": expected a list");
  std::vector<int> out;
  for (const auto& x : j) out.push_back(as_int(x, what));
  return out;
}

Simplex simplex_from(const json& j) {
  require(j.is_array() && !j.empty(), "simplex: expected a nonempty vertex list");
  Simplex s;
  for (const auto& v : j) s.push_back(as_vertex(v));
  std::sort(s.begin(), s.end());
  require(std::adjacent_find(s.begin(), s.end()) == s.end(), "simplex: repeated vertex");
  return s;
}

json facets_json(const SimplicialComplex& x) {
  auto f = x.facets();
  std::sort(f.begin(), f.end());
  return json(f);
}

template <class F>
auto guarded(F f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(e.what());
  }
}

}  // namespace

json complex_to_json(const SimplicialComplex& x) { return {{"dim", x.dimension()}, {"facets", facets_json(x)}}; }

SimplicialComplex complex_from_json(const json& j) {
  return guarded([&] {
    const auto& f = field(j, "facets");
    require(f.is_array(), "facets: expected a list");
    std::vector<Simplex> facets;
    for (const auto& s : f) facets.push_back(simplex_from(s));
    SimplicialComplex x(facets);
    if (j.contains("dim"))
      require(as_int(j.at("dim"), "dim") == x.dimension(), "dim does not match the facets");
    return x;
  });
}

json chain_to_json(const Chain& c) {
  json out = json::array();
  for (const auto& [key, coeff] : c.terms()) out.push_back(json::array({key, coeff.num(), coeff.den()}));
  return out;
}

Chain chain_from_json(const json& j, int degree) {
  return guarded([&] {
    require(j.is_array(), "chain: expected a list of [simplex, numerator, denominator]");
    int deg = degree;
    if (deg < 0 && !j.empty() && j[0].is_array() && !j[0].empty() && j[0][0].is_array())
      deg = static_cast<int>(j[0][0].size()) - 1;
    require(deg >= 0, "chain: empty chain needs an explicit degree");
    Chain c(deg);
    for (const auto& t : j) {
      require(t.is_array() && t.size() == 3 && t[0].is_array(), "chain term: expected [simplex, num, den]");
      std::vector<Vertex> verts;
      for (const auto& v : t[0]) verts.push_back(as_vertex(v));
      require(static_cast<int>(verts.size()) == deg + 1, "chain term: wrong number of vertices");
      require(t[1].is_number_integer() && t[2].is_number_integer(), "chain term: coefficient must be integers");
      auto den = t[2].get<std::int64_t>();
      require(den != 0, "chain term: zero denominator");
      c.add(verts, Rational(t[1].get<std::int64_t>(), den));
    }
    return c;
  });
}

json homology_to_json(const HomologyResult& h) {
  return {{"degree", h.degree}, {"coefficients", to_string(h.coefficients)}, {"betti", h.betti}, {"torsion", h.torsion}};
}

json cubical_to_json(const CubicalComplex& c) {
  json cubes = json::array();
  for (const auto& q : c.cubes()) cubes.push_back({{"axes", q.axes}, {"verts", q.verts}, {"faces", q.faces}});
  return {{"dim", c.dim()}, {"cubes", cubes}};
}

CubicalComplex cubical_from_json(const json& j) {
  return guarded([&] {
    int dim = as_int(field(j, "dim"), "dim");
    const auto& cs = field(j, "cubes");
    require(cs.is_array(), "cubes: expected a list");
    std::vector<Cube> cubes;
    bool derive = false;
    for (const auto& q : cs) {
      Cube c;
      c.axes = as_int(field(q, "axes"), "axes");
      require(c.axes >= 0 && c.axes <= 16, "axes out of range");
      for (const auto& v : field(q, "verts")) c.verts.push_back(as_vertex(v));
      require(c.verts.size() == (std::size_t{1} << c.axes), "cube needs 2^axes vertices");
      if (q.contains("faces"))
        c.faces = int_list(q.at("faces"), "faces");
      else
        derive = true;
      cubes.push_back(std::move(c));
    }
    try {
      return CubicalComplex::build(dim, std::move(cubes), derive);
    } catch (const DomainError& e) {
      throw ParseError(std::string("cube complex: ") + e.what());
    }
  });
}

json folding_to_json(const FoldingMap& p) {
  json out = json::array();
  for (const auto& f : p.per_cube) out.push_back({{"face", f.face}, {"axis_map", f.axis_map}, {"flip", f.flip}});
  return out;
}

FoldingMap folding_from_json(const json& j, int n) {
  return guarded([&] {
    require(j.is_array(), "folding: expected a list of per-cube entries");
    FoldingMap p;
    p.n = n;
    for (const auto& e : j) {
      CubeFold f;
      f.face = int_list(field(e, "face"), "face");
      f.axis_map = int_list(field(e, "axis_map"), "axis_map");
      f.flip = int_list(field(e, "flip"), "flip");
      p.per_cube.push_back(std::move(f));
    }
    return p;
  });
}

json block_to_json(const BlockDatum& b) {
  json faces = json::object(), corners = json::object(), folding = json::array();
  for (const auto& [k, f] : b.faces) faces[k] = facets_json(f);
  for (const auto& [k, v] : b.corners) corners[k] = v;
  for (const auto& [x, y] : b.folding) folding.push_back({x, y});
  return {{"dim", b.n}, {"complex", complex_to_json(b.complex)}, {"faces", faces}, {"corners", corners}, {"folding", folding}};
}

BlockDatum block_from_json(const json& j) {
  return guarded([&] {
    BlockDatum b;
    b.n = as_int(field(j, "dim"), "dim");
    require(b.n >= 1, "block dim must be positive");
    b.complex = complex_from_json(field(j, "complex"));
    const auto& faces = field(j, "faces");
    require(faces.is_object(), "faces: expected an object");
    for (auto it = faces.begin(); it != faces.end(); ++it) {
      std::vector<Simplex> fs;
      for (const auto& s : it.value()) fs.push_back(simplex_from(s));
      b.faces[it.key()] = SimplicialComplex(fs);
    }
    const auto& corners = field(j, "corners");
    require(corners.is_object(), "corners: expected an object");
    for (auto it = corners.begin(); it != corners.end(); ++it) b.corners[it.key()] = as_vertex(it.value());
    const auto& fold = field(j, "folding");
    if (fold.is_object()) {
      for (auto it = fold.begin(); it != fold.end(); ++it) {
        try {
          b.folding[std::stoi(it.key())] = as_vertex(it.value());
        } catch (const std::logic_error&) {
          throw ParseError("folding: keys must be vertex ids");
        }
      }
    } else {
      require(fold.is_array(), "folding: expected pairs or an object");
      for (const auto& pr : fold) {
        require(pr.is_array() && pr.size() == 2, "folding: expected [x, y] pairs");
        b.folding[as_vertex(pr[0])] = as_vertex(pr[1]);
      }
    }
    return b;
  });
}

json graph_to_json(const MetricGraph& g) {
  json edges = json::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  return {{"vertices", g.vertices()}, {"edges", edges}, {"cones", g.cones()}};
}

MetricGraph graph_from_json(const json& j) {
  return guarded([&] {
    auto verts = int_list(field(j, "vertices"), "vertices");
    std::vector<std::pair<int, int>> edges;
    const auto& es = field(j, "edges");
    require(es.is_array(), "edges: expected a list");
    for (const auto& e : es) {
      require(e.is_array() && e.size() == 2, "edge: expected [u, v]");
      edges.emplace_back(as_int(e[0], "edge"), as_int(e[1], "edge"));
    }
    std::set<int> cones;
    if (j.contains("cones"))
      for (int c : int_list(j.at("cones"), "cones")) cones.insert(c);
    return MetricGraph(verts, edges, cones);
  });
}

json presentation_to_json(const Presentation& p) {
  json rels = json::array();
  for (const auto& r : p.relators) rels.push_back(word_to_string(r, p.generators.size()));
  return {{"gens", p.generators}, {"rels", rels}};
}

Presentation presentation_from_json(const json& j) {
  return guarded([&] {
    Presentation p;
    const auto& gens = field(j, "gens");
    require(gens.is_array(), "gens: expected a list");
    for (const auto& g : gens) {
      require(g.is_string(), "gens: expected strings");
      p.generators.push_back(g.get<std::string>());
    }
    const int ng = static_cast<int>(p.generators.size());
    const auto& rels = field(j, "rels");
    require(rels.is_array(), "rels: expected a list");
    for (const auto& r : rels) {
      require(r.is_string(), "rels: expected strings");
      const auto s = r.get<std::string>();
      Word w;
      if (ng <= 26) {
        for (char ch : s) {
          bool lower = ch >= 'a' && ch <= 'z', upper = ch >= 'A' && ch <= 'Z';
          require(lower || upper, "relator \"" + s + "\": letters only");
          int g = (lower ? ch - 'a' : ch - 'A') + 1;
          require(g <= ng, "relator \"" + s + "\" uses an unknown generator");
          w.push_back(lower ? g : -g);
        }
      } else {
        std::istringstream in(s);
        std::string tok;
        while (in >> tok) {
          require(tok.size() >= 2 && (tok[0] == 'x' || tok[0] == 'X'), "relator token \"" + tok + "\"");
          int g = 0;
          try {
            g = std::stoi(tok.substr(1));
          } catch (const std::logic_error&) {
            throw ParseError("relator token \"" + tok + "\"");
          }
          require(g >= 1 && g <= ng, "relator token \"" + tok + "\" uses an unknown generator");
          w.push_back(tok[0] == 'x' ? g : -g);
        }
      }
      w = free_reduce(w);
      if (!w.empty()) p.relators.push_back(std::move(w));
    }
    return p;
  });
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp" + std::to_string(static_cast<long>(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, target);
}

}  // namespace relhyp::io
