#pragma once

// JSON forms of the library types. Every top-level document carries a
// "schema" field; the id changes whenever a field is renamed or removed.

#include "json.hpp"

#include "bellman_lab/bellman_forms.hpp"
#include "bellman_lab/partition.hpp"
#include "bellman_lab/rearrange.hpp"
#include "bellman_lab/search.hpp"
#include "bellman_lab/tree_maximal.hpp"
#include "bellman_lab/weak_norms.hpp"

namespace bellman_lab {

inline constexpr const char* kSchemaId = "bellman-lab/1";

using json = nlohmann::ordered_json;

/// {arity, depth, values}, values in left-to-right leaf order.
json to_json(const StepFunction& phi);
/// Inverse of to_json(StepFunction); DomainError on malformed input.
StepFunction step_function_from_json(const json& doc);

json to_json(const NodeId& node, const TreePartition& tree);
json to_json(const SubsetCertificate& certificate, const TreePartition& tree);
json to_json(const NormResult& result);
json to_json(const BellmanQuery& query);
json to_json(const ClosedForm& closed);
json to_json(const AchievedMetrics& metrics);
/// Recipe without the leaf values (use to_json(recipe.discretized) for those).
json to_json(const ExtremalRecipe& recipe);
json to_json(const SearchConfig& config);
json to_json(const TrialStats& stats);
/// Report; the certificates are included when `with_certificates` is set.
json to_json(const SearchReport& report, bool with_certificates = false);

}  // namespace bellman_lab
