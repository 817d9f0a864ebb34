#include "bellman_lab/serialize.hpp"

#include "bellman_lab/errors.hpp"

namespace bellman_lab {

json to_json(const StepFunction& phi) {
  json doc;
  doc["schema"] = kSchemaId;
  doc["arity"] = phi.partition().arity();
  doc["depth"] = phi.partition().depth();
  doc["values"] = std::vector<double>(phi.values().begin(), phi.values().end());
  return doc;
}

StepFunction step_function_from_json(const json& doc) {
  try {
    const int arity = doc.at("arity").get<int>();
    const int depth = doc.at("depth").get<int>();
    auto values = doc.at("values").get<std::vector<double>>();
    return StepFunction(TreePartition::build(arity, depth), std::move(values));
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed step function document: ") + e.what());
  }
}

json to_json(const NodeId& node, const TreePartition& tree) {
  const GridInterval run = tree.interval(node);
  return json{{"level", node.level},
              {"index", node.index},
              {"begin", run.begin},
              {"end", run.end},
              {"denominator", tree.denominator()},
              {"measure", tree.measure(node)}};
}

json to_json(const SubsetCertificate& certificate, const TreePartition& tree) {
  json fractions = json::array();
  for (const auto& lf : certificate.fractions) {
    fractions.push_back(json{{"leaf", lf.leaf}, {"fraction", lf.fraction}});
  }
  return json{{"source", to_json(certificate.source, tree)},
              {"beta", certificate.beta},
              {"offset", certificate.offset},
              {"target_average", certificate.target_average},
              {"average", certificate.average},
              {"measure", certificate.measure(tree)},
              {"fractions", std::move(fractions)}};
}

json to_json(const NormResult& result) {
  return json{{"value", result.value}, {"witness", result.witness}};
}

json to_json(const BellmanQuery& query) {
  return json{{"functional", to_string(query.functional)},
              {"p", query.p},
              {"f", query.f},
              {"F", query.F},
              {"lambda", query.lambda},
              {"k", query.k()}};
}

json to_json(const ClosedForm& closed) {
  return json{{"value", closed.value},
              {"branch", to_string(closed.branch)},
              {"thresholds", json::array({closed.threshold_low, closed.threshold_high})}};
}

json to_json(const AchievedMetrics& metrics) {
  return json{{"integral", metrics.integral},
              {"quasi_norm", metrics.quasi_norm},
              {"equiv_norm", metrics.equiv_norm},
              {"distribution", metrics.distribution}};
}

json to_json(const ExtremalRecipe& recipe) {
  const TreePartition& tree = recipe.discretized.partition();
  json segments = json::array();
  for (const auto& s : recipe.continuous.segments()) {
    const char* kind = s.kind == ContinuousProfile::Kind::constant ? "constant"
                       : s.kind == ContinuousProfile::Kind::power  ? "power"
                                                                   : "linear";
    json seg{{"kind", kind}, {"lo", s.lo}, {"hi", s.hi}, {"a", s.a}};
    if (s.kind == ContinuousProfile::Kind::linear) seg["b"] = s.b;
    segments.push_back(std::move(seg));
  }
  json nodes = json::array();
  for (const NodeId& n : recipe.flat_nodes) nodes.push_back(to_json(n, tree));
  json pieces = json::array();
  for (const auto& piece : recipe.pieces) {
    json intervals = json::array();
    for (const auto& iv : piece.pieces) intervals.push_back(json::array({iv.lo, iv.hi}));
    pieces.push_back(json{{"mass", piece.mass},
                          {"integral", piece.integral},
                          {"average", piece.average()},
                          {"intervals", std::move(intervals)}});
  }
  json doc;
  doc["schema"] = kSchemaId;
  doc["query"] = to_json(recipe.query);
  doc["closed_form"] = to_json(closed_form(recipe.query));
  doc["profile"] = json{{"tag", recipe.profile_tag},
                        {"normalized_f", recipe.normalized_f},
                        {"normalized_lambda", recipe.normalized_lambda},
                        {"effective_lambda", recipe.effective_lambda},
                        {recipe.parameter_name, recipe.parameter},
                        {"floor_slope", recipe.floor_slope},
                        {"segments", std::move(segments)}};
  doc["flat_set"] = json{{"target", recipe.flat_target},
                         {"measure", recipe.flat_measure},
                         {"snap_deficit", recipe.snap_deficit},
                         {"nodes", std::move(nodes)}};
  doc["pieces"] = std::move(pieces);
  doc["discretization"] = json{{"arity", tree.arity()},
                               {"depth", tree.depth()},
                               {"epsilon_d", recipe.epsilon_d},
                               {"scale", recipe.scale}};
  doc["achieved"] = json{{"continuous", to_json(recipe.continuous_metrics)},
                         {"discrete", to_json(recipe.discrete_metrics)}};
  return doc;
}

json to_json(const SearchConfig& config) {
  return json{{"query", to_json(config.query)},
              {"arity", config.arity},
              {"depth", config.depth},
              {"trials", config.trials},
              {"seed", config.seed},
              {"optimizer", to_string(config.optimizer)},
              {"constraint", to_string(config.constraint())},
              {"moves", config.moves}};
}

json to_json(const TrialStats& stats) {
  return json{{"attempted", stats.attempted},
              {"feasible", stats.feasible},
              {"sampling_failures", stats.sampling_failures},
              {"mean_objective", stats.mean_objective},
              {"min_objective", stats.min_objective},
              {"max_objective", stats.max_objective},
              {"max_maximal_norm", stats.max_maximal_norm},
              {"maximal_norm_bound", stats.maximal_norm_bound},
              {"maximal_norm_violations", stats.maximal_norm_violations},
              {"weak_type_checks", stats.weak_type_checks},
              {"weak_type_violations", stats.weak_type_violations},
              {"moves", stats.moves},
              {"accepted_moves", stats.accepted_moves}};
}

json to_json(const SearchReport& report, bool with_certificates) {
  json doc;
  doc["schema"] = kSchemaId;
  doc["config"] = to_json(report.config);
  doc["best"] = report.best;
  doc["target"] = report.target;
  doc["gap"] = report.gap;
  doc["violations"] = report.violations;
  doc["seed_source"] = report.seed_source;
  doc["trace"] = report.trace;
  doc["stats"] = to_json(report.stats);
  if (with_certificates) {
    doc["best_certificate"] = to_json(report.best_certificate);
    if (report.violation_certificate) {
      doc["violation_certificate"] = to_json(*report.violation_certificate);
    }
  }
  return doc;
}

}  // namespace bellman_lab
