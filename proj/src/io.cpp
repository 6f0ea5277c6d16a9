#include "nullcode/io.hpp"

#include <fstream>
#include <sstream>

#include "nullcode/error.hpp"

namespace nullcode {

namespace {

template <typename T>
T get(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(Errc::ParseError, std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(Errc::ParseError, std::string("field \"") + key + "\" has the wrong type");
  }
}

Vec vec_from(const Json& j, const char* what) {
  if (!j.is_array()) throw Error(Errc::ParseError, std::string(what) + " must be an array");
  Vec v;
  for (const auto& x : j) {
    if (!x.is_number_unsigned()) throw Error(Errc::ParseError, std::string(what) + " holds a non-integer");
    v.push_back(x.get<Elem>());
  }
  return v;
}

}  // namespace

Json field_to_json(const FieldCtx& f) { return Json{{"s", f.degree()}, {"modulus", f.modulus()}}; }

FieldCtx field_from_json(const Json& j) {
  return FieldCtx(get<unsigned>(j, "s"), get<std::uint32_t>(j, "modulus"));
}

Json code_to_json(const CodeSpec& spec) {
  Json j;
  if (spec.kind() == CodeKind::GrsFolded) {
    j["kind"] = "grs_folded";
    j["field"] = field_to_json(spec.field());
    j["gamma"] = spec.gamma();
    j["k"] = spec.degree();
    j["m"] = spec.folding();
    j["v"] = spec.multipliers();
  } else {
    j["kind"] = "generic_linear";
    j["field"] = field_to_json(spec.field());
    j["m"] = spec.folding();
    j["N"] = spec.length();
    j["genmat"] = spec.generator_matrix();
  }
  return j;
}

CodeSpec code_from_json(const Json& j) {
  const auto kind = get<std::string>(j, "kind");
  const FieldCtx f = field_from_json(get<Json>(j, "field"));
  if (kind == "grs_folded") {
    Vec v = j.contains("v") ? vec_from(j.at("v"), "v") : Vec{};
    return CodeSpec::grs_folded(f, get<Elem>(j, "gamma"), get<int>(j, "k"), get<unsigned>(j, "m"), std::move(v));
  }
  if (kind == "generic_linear") {
    Mat g;
    const Json rows = get<Json>(j, "genmat");
    if (!rows.is_array()) throw Error(Errc::ParseError, "genmat must be an array of rows");
    for (const auto& row : rows) g.push_back(vec_from(row, "genmat row"));
    return CodeSpec::generic_linear(f, std::move(g), get<std::size_t>(j, "N"), get<unsigned>(j, "m"));
  }
  throw Error(Errc::ParseError, "unknown code kind \"" + kind + "\"");
}

Json instance_to_json(const OracleInstance& inst) {
  Json j;
  j["spec"] = code_to_json(inst.spec);
  j["p"] = inst.p.to_string();
  j["seed"] = inst.seed;
  if (inst.n() % 2 == 0) j["split"] = Json{{"n", inst.n()}, {"alice", inst.n() / 2}};
  Json tables = Json::array();
  for (const auto& t : inst.tables) tables.push_back(t.to_hex());
  j["tables"] = tables;
  if (inst.unfolded) j["unfolded"] = Json{{"block", inst.unfolded->block}, {"blocks", inst.unfolded->blocks}};
  return j;
}

OracleInstance instance_from_json(const Json& j) {
  OracleInstance inst{code_from_json(get<Json>(j, "spec")), Bias::parse(get<std::string>(j, "p")),
                      get<std::uint64_t>(j, "seed"), {}, std::nullopt};
  const auto sigma = static_cast<std::size_t>(inst.spec.alphabet_size());
  const auto tables = get<std::vector<std::string>>(j, "tables");
  if (tables.size() != inst.spec.folded_length()) throw Error(Errc::ParseError, "table count differs from n");
  for (const auto& hex : tables) inst.tables.push_back(BitTable::from_hex(hex, sigma));
  if (j.contains("unfolded")) {
    const Json& u = j.at("unfolded");
    UnfoldedTables blocks{get<unsigned>(u, "block"), get<std::vector<std::vector<std::uint16_t>>>(u, "blocks")};
    if (blocks.blocks.size() != inst.n()) throw Error(Errc::ParseError, "block table count differs from n");
    for (std::size_t i = 0; i < inst.n(); ++i) {
      if (blocks.blocks[i].size() != sigma) throw Error(Errc::ParseError, "block table has the wrong size");
      for (std::size_t e = 0; e < sigma; ++e)
        if (inst.tables[i].get(e) != (blocks.blocks[i][e] == blocks.all_ones()))
          throw Error(Errc::ParseError, "AND blocks disagree with the bias tables");
    }
    inst.unfolded = std::move(blocks);
  }
  return inst;
}

Json family_to_json(const HashFamily& family) {
  return Json{{"r", family.r()}, {"lambda", family.lambda()}, {"alphabet", family.alphabet()}, {"n", family.n()}};
}

HashFamily family_from_json(const Json& j) {
  return HashFamily(get<unsigned>(j, "r"), get<std::size_t>(j, "lambda"), get<std::uint64_t>(j, "alphabet"),
                    get<std::size_t>(j, "n"));
}

Json key_to_json(const HashKey& key) { return Json(key.coeffs); }

HashKey key_from_json(const Json& j, const HashFamily& family) {
  HashKey k{vec_from(j, "key")};
  if (k.coeffs.size() != family.lambda()) throw Error(Errc::ParseError, "key length differs from lambda");
  for (auto c : k.coeffs)
    if (!family.field().contains(c)) throw Error(Errc::ParseError, "key coefficient outside F_{2^r}");
  return k;
}

Json tbnc_to_json(const TbncInstance& tb) {
  Json copies = Json::array();
  for (const auto& c : tb.copies) copies.push_back(instance_to_json(c));
  return Json{{"t", tb.t()}, {"family", family_to_json(tb.family)}, {"spec", code_to_json(tb.spec)}, {"copies", copies}};
}

TbncInstance tbnc_from_json(const Json& j) {
  TbncInstance tb{code_from_json(get<Json>(j, "spec")), family_from_json(get<Json>(j, "family")), {}};
  for (const auto& c : get<Json>(j, "copies")) tb.copies.push_back(instance_from_json(c));
  if (tb.copies.size() != get<std::size_t>(j, "t") || tb.copies.empty())
    throw Error(Errc::ParseError, "copy count differs from t");
  for (const auto& c : tb.copies)
    if (!same_code(c.spec, tb.spec)) throw Error(Errc::ParseError, "copies use different codes");
  return tb;
}

Json tree_to_json(const ProtocolTree& tree) {
  Json nodes = Json::array();
  for (std::size_t v = 0; v < tree.size(); ++v) {
    const auto& node = tree.node(v);
    Json j;
    if (tree.is_leaf(v)) {
      j["label"] = node.label ? Json(*node.label) : Json(nullptr);
    } else {
      j["owner"] = party_name(node.owner);
      j["children"] = node.children;
      std::vector<InputSet> parts(node.children.size());
      for (Input x : node.owner == Party::Alice ? tree.alice_set(v) : tree.bob_set(v))
        parts[node.message[x]].push_back(x);
      j["parts"] = parts;
    }
    nodes.push_back(j);
  }
  return Json{{"input_bits", tree.input_bits()}, {"nodes", nodes}};
}

ProtocolTree tree_from_json(const Json& j) {
  const auto n = get<unsigned>(j, "input_bits");
  if (n == 0 || n > kMaxInputBits) throw Error(Errc::ParseError, "input_bits must lie in [1, 20]");
  const Json nodes_json = get<Json>(j, "nodes");
  if (!nodes_json.is_array()) throw Error(Errc::ParseError, "nodes must be an array");
  constexpr std::uint16_t kUnset = 0xffff;
  std::vector<ProtocolTree::Node> nodes;
  std::vector<std::size_t> listed;
  for (const auto& nj : nodes_json) {
    ProtocolTree::Node node;
    if (nj.contains("label")) {
      if (!nj.at("label").is_null()) node.label = get<std::uint64_t>(nj, "label");
      listed.push_back(0);
    } else {
      const auto owner = get<std::string>(nj, "owner");
      if (owner != "alice" && owner != "bob") throw Error(Errc::ParseError, "owner must be alice or bob");
      node.owner = owner == "alice" ? Party::Alice : Party::Bob;
      node.children = get<std::vector<std::size_t>>(nj, "children");
      const auto parts = get<std::vector<InputSet>>(nj, "parts");
      if (parts.size() != node.children.size()) throw Error(Errc::ParseError, "one part per child is required");
      node.message.assign(std::size_t{1} << n, kUnset);
      std::size_t count = 0;
      for (std::size_t c = 0; c < parts.size(); ++c)
        for (Input x : parts[c]) {
          if (x >= node.message.size() || node.message[x] != kUnset)
            throw Error(Errc::ParseError, "message parts overlap or leave the input space");
          node.message[x] = static_cast<std::uint16_t>(c);
          ++count;
        }
      listed.push_back(count);
    }
    nodes.push_back(std::move(node));
  }
  ProtocolTree tree = [&] {
    try {
      return ProtocolTree(n, nodes);
    } catch (const Error& e) {
      throw Error(Errc::ParseError, e.what());
    }
  }();
  for (std::size_t v = 0; v < tree.size(); ++v) {
    if (tree.is_leaf(v)) continue;
    const auto& owned = tree.node(v).owner == Party::Alice ? tree.alice_set(v) : tree.bob_set(v);
    if (owned.size() != listed[v]) throw Error(Errc::ParseError, "parts do not partition the owner's set");
  }
  // Inputs outside the owner's set never reach the node; give them child 0.
  for (auto& node : nodes)
    for (auto& m : node.message)
      if (m == kUnset) m = 0;
  return ProtocolTree(n, std::move(nodes));
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::ParseError, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::InvalidArgument, "cannot write " + path);
  out << text;
}

}  // namespace nullcode
