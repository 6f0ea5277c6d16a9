#pragma once

#include <string>

#include <json.hpp>

#include "nullcode/codes.hpp"
#include "nullcode/hashing.hpp"
#include "nullcode/instances.hpp"
#include "nullcode/proto.hpp"
#include "nullcode/tbnc.hpp"

namespace nullcode {

using Json = nlohmann::ordered_json;

// Malformed documents raise Error(ParseError) naming the offending field.
Json field_to_json(const FieldCtx& f);
FieldCtx field_from_json(const Json& j);

// {"kind", "field", "gamma", "k", "m", "v"} or {"kind", "field", "m", "N", "genmat"}.
Json code_to_json(const CodeSpec& spec);
CodeSpec code_from_json(const Json& j);

// Header (spec, p, seed, split) and hex tables, least-significant bit first.
Json instance_to_json(const OracleInstance& inst);
OracleInstance instance_from_json(const Json& j);

Json family_to_json(const HashFamily& family);
HashFamily family_from_json(const Json& j);
Json key_to_json(const HashKey& key);
HashKey key_from_json(const Json& j, const HashFamily& family);

Json tbnc_to_json(const TbncInstance& tb);
TbncInstance tbnc_from_json(const Json& j);

// Nodes list the owner, the children and, per child, the owner's inputs
// that lead to it; leaves carry a label (null is the abort symbol).
Json tree_to_json(const ProtocolTree& tree);
ProtocolTree tree_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace nullcode
