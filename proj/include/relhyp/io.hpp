#pragma once

#include <string>

#include "json.hpp"
#include "relhyp/chain.hpp"
#include "relhyp/cubical.hpp"
#include "relhyp/groupgeom.hpp"
#include "relhyp/homology.hpp"
#include "relhyp/hyperbolize.hpp"
#include "relhyp/simplicial.hpp"

// JSON readers and writers.  Readers throw ParseError on malformed documents.
namespace relhyp::io {

using nlohmann::json;

/// {"dim": n, "facets": [[v, ...], ...]}, facets sorted.
json complex_to_json(const SimplicialComplex& x);
SimplicialComplex complex_from_json(const json& j);

/// [[[v, ...], numerator, denominator], ...].  `degree` is used for an empty list.
json chain_to_json(const Chain& c);
Chain chain_from_json(const json& j, int degree = -1);

json homology_to_json(const HomologyResult& h);

/// {"dim": n, "cubes": [{"axes": k, "verts": [...], "faces": [...]}]}; faces optional on input.
json cubical_to_json(const CubicalComplex& c);
CubicalComplex cubical_from_json(const json& j);

/// [{"face": [...], "axis_map": [...], "flip": [...]}, ...] by cube id.
json folding_to_json(const FoldingMap& p);
FoldingMap folding_from_json(const json& j, int n);

/// {dim, complex, faces: {"1+": facets}, corners: {"-+": v}, folding: [[x, y], ...]}
json block_to_json(const BlockDatum& b);
BlockDatum block_from_json(const json& j);

/// {vertices, edges: [[u, v], ...], cones: [...]}
json graph_to_json(const MetricGraph& g);
MetricGraph graph_from_json(const json& j);

/// {gens: [...], rels: ["abA", ...]}; capital letter = inverse.  Above 26
/// generators relators are space-separated tokens "x12 X3".
json presentation_to_json(const Presentation& p);
Presentation presentation_from_json(const json& j);

json read_json_file(const std::string& path);
/// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace relhyp::io
