#include "kgkms/graph_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kgkms/errors.hpp"

namespace kgkms {

using nlohmann::json;

namespace {

json require(const json& j, const char* field) {
  if (!j.contains(field)) fail(Errc::parse_error, std::string("missing field '") + field + "'");
  return j.at(field);
}

std::string require_string(const json& j, const char* field) {
  json v = require(j, field);
  if (!v.is_string()) fail(Errc::parse_error, std::string("field '") + field + "' must be a string");
  return v.get<std::string>();
}

int require_int(const json& j, const char* field) {
  json v = require(j, field);
  if (!v.is_number_integer()) fail(Errc::parse_error, std::string("field '") + field + "' must be an integer");
  return v.get<int>();
}

}  // namespace

GraphSpec read_graph_spec(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(Errc::parse_error, e.what());
  }
  if (!j.is_object()) fail(Errc::parse_error, "top level must be an object");

  try {
    GraphSpec spec;
    spec.skeleton.rank = require_int(j, "rank");
    for (const json& v : require(j, "vertices")) {
      if (!v.is_string()) fail(Errc::parse_error, "vertices[] entries must be strings");
      spec.skeleton.vertices.push_back(v.get<std::string>());
    }
    for (const json& e : require(j, "edges")) {
      SkeletonEdge edge;
      edge.id = require_string(e, "id");
      edge.color = require_int(e, "color");
      edge.range = require_string(e, "range");
      edge.source = require_string(e, "source");
      spec.skeleton.edges.push_back(std::move(edge));
    }
    if (j.contains("squares")) {
      for (const json& s : j.at("squares")) {
        Square sq;
        sq.i = require_int(s, "i");
        sq.j = require_int(s, "j");
        json ef = require(s, "ef");
        json fe = require(s, "fe");
        if (!ef.is_array() || ef.size() != 2 || !fe.is_array() || fe.size() != 2 ||
            !ef[0].is_string() || !ef[1].is_string() || !fe[0].is_string() || !fe[1].is_string())
          fail(Errc::parse_error, "square 'ef'/'fe' must be 2-element arrays of edge ids");
        sq.ef = {ef[0].get<std::string>(), ef[1].get<std::string>()};
        sq.fe = {fe[0].get<std::string>(), fe[1].get<std::string>()};
        spec.rules.squares.push_back(std::move(sq));
      }
    }
    return spec;
  } catch (const json::exception& e) {
    fail(Errc::parse_error, e.what());
  }
}

GraphSpec read_graph_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse_error, "cannot open '" + path + "'");
  return read_graph_spec(in);
}

std::string write_graph_spec(const GraphSpec& spec) {
  json j;
  j["rank"] = spec.skeleton.rank;
  j["vertices"] = spec.skeleton.vertices;
  j["edges"] = json::array();
  for (const SkeletonEdge& e : spec.skeleton.edges)
    j["edges"].push_back(
        {{"id", e.id}, {"color", e.color}, {"range", e.range}, {"source", e.source}});
  j["squares"] = json::array();
  for (const Square& s : spec.rules.squares)
    j["squares"].push_back({{"i", s.i},
                            {"j", s.j},
                            {"ef", {s.ef.first, s.ef.second}},
                            {"fe", {s.fe.first, s.fe.second}}});
  return j.dump(2) + "\n";
}

void write_graph_spec_file(const GraphSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::parse_error, "cannot open '" + path + "' for writing");
  out << write_graph_spec(spec);
}

namespace {

std::string loop_id(int color, int index) {
  return "c" + std::to_string(color) + "e" + std::to_string(index + 1);
}

GraphSpec single_vertex_base(const std::vector<int>& counts) {
  if (counts.empty()) fail(Errc::bad_params, "need at least one color");
  for (int n : counts)
    if (n < 1) fail(Errc::bad_params, "every color needs at least one loop");
  GraphSpec spec;
  spec.skeleton.rank = static_cast<int>(counts.size());
  spec.skeleton.vertices = {"v"};
  for (int c = 1; c <= spec.skeleton.rank; ++c)
    for (int t = 0; t < counts[static_cast<size_t>(c - 1)]; ++t)
      spec.skeleton.edges.push_back({loop_id(c, t), c, "v", "v"});
  return spec;
}

}  // namespace

GraphSpec make_single_vertex(const std::vector<int>& counts) {
  GraphSpec spec = single_vertex_base(counts);
  int k = spec.skeleton.rank;
  for (int i = 1; i <= k; ++i)
    for (int j = i + 1; j <= k; ++j)
      for (int a = 0; a < counts[static_cast<size_t>(i - 1)]; ++a)
        for (int b = 0; b < counts[static_cast<size_t>(j - 1)]; ++b)
          spec.rules.squares.push_back(
              {i, j, {loop_id(i, a), loop_id(j, b)}, {loop_id(j, b), loop_id(i, a)}});
  return spec;
}

GraphSpec make_single_vertex_flip(const std::vector<int>& counts, int flip_i, int flip_j) {
  if (flip_i >= flip_j || flip_i < 1 || flip_j > static_cast<int>(counts.size()))
    fail(Errc::bad_params, "flip pair must satisfy 1 <= i < j <= k");
  if (counts[static_cast<size_t>(flip_i - 1)] != counts[static_cast<size_t>(flip_j - 1)])
    fail(Errc::bad_params, "flip squares need equal counts on the flipped colors");
  GraphSpec spec = single_vertex_base(counts);
  int k = spec.skeleton.rank;
  for (int i = 1; i <= k; ++i)
    for (int j = i + 1; j <= k; ++j)
      for (int a = 0; a < counts[static_cast<size_t>(i - 1)]; ++a)
        for (int b = 0; b < counts[static_cast<size_t>(j - 1)]; ++b) {
          if (i == flip_i && j == flip_j)
            // e_a f_b = f_a e_b: the index rides with the slot, which forces
            // the (i,j)-tails of any two equal-index loops to agree.
            spec.rules.squares.push_back(
                {i, j, {loop_id(i, a), loop_id(j, b)}, {loop_id(j, a), loop_id(i, b)}});
          else
            spec.rules.squares.push_back(
                {i, j, {loop_id(i, a), loop_id(j, b)}, {loop_id(j, b), loop_id(i, a)}});
        }
  return spec;
}

GraphSpec make_product_of_cycles(int rank, int length) {
  if (rank < 1) fail(Errc::bad_params, "rank must be >= 1");
  if (length < 1) fail(Errc::bad_params, "cycle length must be >= 1");

  // Every color walks the same n-cycle, so each vertex matrix is the same
  // cyclic permutation: coordinatewise irreducible with rho = (1, ..., 1).
  GraphSpec spec;
  spec.skeleton.rank = rank;
  auto vname = [](int v) { return "v" + std::to_string(v); };
  auto ename = [](int c, int src) { return "c" + std::to_string(c) + "_" + std::to_string(src); };
  auto step = [&](int v) { return (v + 1) % length; };
  for (int v = 0; v < length; ++v) spec.skeleton.vertices.push_back(vname(v));
  // Color-c edge out of v: source v, range v+1.
  for (int v = 0; v < length; ++v)
    for (int c = 1; c <= rank; ++c)
      spec.skeleton.edges.push_back({ename(c, v), c, vname(step(v)), vname(v)});

  // One edge per color and vertex, so the bijections are forced:
  // E_i(v+1).E_j(v) = E_j(v+1).E_i(v).
  for (int v = 0; v < length; ++v)
    for (int i = 1; i <= rank; ++i)
      for (int j = i + 1; j <= rank; ++j)
        spec.rules.squares.push_back({i,
                                      j,
                                      {ename(i, step(v)), ename(j, v)},
                                      {ename(j, step(v)), ename(i, v)}});
  return spec;
}

}  // namespace kgkms
