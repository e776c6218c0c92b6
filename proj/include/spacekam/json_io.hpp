#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "spacekam/derivation.hpp"
#include "spacekam/kam.hpp"
#include "spacekam/space_kam.hpp"

namespace spacekam {

using json = nlohmann::json;

// Machine structures. Terms are stored as printed text; closures as
// {"code", "env"}, environments as [{"var", "code", "env"}, ...] and
// states as {"code", "env", "stack"}. Readers throw FormatError.
json env_to_json(const Env& e);
json closure_to_json(const Closure& c);
json state_to_json(const MachState& s);
Env env_from_json(const json& j);
ClosurePtr closure_from_json(const json& j);
MachState state_from_json(const json& j);

// Types: "*" or {"arg": {"elems": [...], "k": n}, "res": ...}. Unindexed
// multisets omit "k".
json type_to_json(const LinearType& a);
json multi_to_json(const ClosureMulti& m);
json context_to_json(const TypeContext& g);
json type_to_json(const PlainType& a);
json multi_to_json(const MultiType& m);
json context_to_json(const PlainContext& g);
LinearPtr type_from_json(const json& j);
ClosureMulti multi_from_json(const json& j);
TypeContext context_from_json(const json& j);
PlainPtr plain_type_from_json(const json& j);
MultiType plain_multi_from_json(const json& j);
PlainContext plain_context_from_json(const json& j);

/// {"rule", "judgment": {"subject_kind", "subject", "context", "type",
/// "weight"}, "premises": [...]}
json derivation_to_json(const DerivPtr& pi);
DerivPtr derivation_from_json(const json& j);

/// One JSON object per line, step 0 being the initial state (label "init").
std::string trace_jsonl(const Run& run);
std::string trace_jsonl(const SpaceRun& run);

json run_summary(const Run& run);
/// {"transitions": {label: n}, "space": n, "time": n, "complete": b}
json run_summary(const SpaceRun& run);

}  // namespace spacekam
