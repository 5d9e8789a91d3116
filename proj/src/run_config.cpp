#include "qosrec/run_config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace qosrec {

namespace {

using nlohmann::json;

Preference parse_attribute(const std::string& v) {
  if (v == "smaller-is-better") return Preference::kSmallerIsBetter;
  if (v == "larger-is-better") return Preference::kLargerIsBetter;
  throw std::invalid_argument("qosAttribute must be 'smaller-is-better' or 'larger-is-better'");
}

Selection parse_selection(const std::string& v) {
  if (v == "first-N") return Selection::kFirstN;
  if (v == "random") return Selection::kRandom;
  throw std::invalid_argument("selection must be 'first-N' or 'random'");
}

KrccVariant parse_variant(const std::string& v) {
  if (v == "as-written") return KrccVariant::kAsWritten;
  if (v == "column-kendall") return KrccVariant::kColumnKendall;
  throw std::invalid_argument("krccVariant must be 'as-written' or 'column-kendall'");
}

RelevanceTransform parse_relevance(const std::string& v) {
  if (v == "linear") return RelevanceTransform::kLinearInverse;
  if (v == "reciprocal") return RelevanceTransform::kReciprocal;
  if (v == "global-max-minus") return RelevanceTransform::kGlobalMaxMinus;
  throw std::invalid_argument(
      "relevanceTransform must be 'linear', 'reciprocal' or 'global-max-minus'");
}

template <typename T>
void read(const json& doc, const char* key, T& into) {
  if (doc.contains(key)) into = doc.at(key).get<T>();
}

}  // namespace

RunConfig parse_run_config(std::istream& in, const std::string& name) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument(name + ": " + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument(name + ": config root must be an object");

  static const std::set<std::string> known = {
      "dataset",      "userNum",       "serviceNum",    "density",       "densities",
      "repetitions",  "qosAttribute",  "selection",     "seed",          "ndcgKs",
      "methods",      "lambda",        "alpha",         "beta",          "F",
      "topkNeighbors", "topKList",     "maxEpochs",     "decay",         "tol",
      "krccVariant",  "predictionFloor", "wsrecLambdaMix", "methodTopk", "jobs",
      "relevanceTransform", "relevanceEpsilon"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw std::invalid_argument(name + ": unknown config key '" + key + "'");
  }

  RunConfig rc;
  ExperimentConfig& cfg = rc.cfg;
  Hyperparams& hp = cfg.method.hp;
  try {
    read(doc, "dataset", rc.dataset);
    read(doc, "userNum", cfg.user_num);
    read(doc, "serviceNum", cfg.service_num);
    read(doc, "density", cfg.density);
    read(doc, "repetitions", cfg.repetitions);
    read(doc, "seed", cfg.base_seed);
    read(doc, "ndcgKs", cfg.ndcg_ks);
    read(doc, "jobs", cfg.jobs);
    if (doc.contains("qosAttribute")) {
      cfg.attribute = parse_attribute(doc.at("qosAttribute").get<std::string>());
    }
    if (doc.contains("selection")) {
      cfg.selection = parse_selection(doc.at("selection").get<std::string>());
    }
    read(doc, "lambda", hp.lambda);
    read(doc, "alpha", hp.alpha0);
    read(doc, "beta", hp.beta);
    read(doc, "F", hp.factors);
    read(doc, "topkNeighbors", hp.topk_neighbors);
    read(doc, "topKList", hp.topk_list);
    read(doc, "maxEpochs", hp.max_epochs);
    read(doc, "decay", hp.decay);
    read(doc, "tol", hp.tol);
    read(doc, "predictionFloor", hp.prediction_floor);
    if (doc.contains("krccVariant")) {
      cfg.method.krcc_variant = parse_variant(doc.at("krccVariant").get<std::string>());
    }
    if (doc.contains("relevanceTransform")) {
      cfg.relevance.transform = parse_relevance(doc.at("relevanceTransform").get<std::string>());
    }
    read(doc, "relevanceEpsilon", cfg.relevance.epsilon);
    read(doc, "wsrecLambdaMix", cfg.method.wsrec_lambda_mix);
    if (doc.contains("methodTopk")) {
      for (const auto& [method, k] : doc.at("methodTopk").items()) {
        cfg.method.method_topk[method] = k.get<std::size_t>();
      }
    }
    read(doc, "densities", rc.densities);
    read(doc, "methods", rc.methods);
  } catch (const json::exception& e) {
    throw std::invalid_argument(name + ": " + e.what());
  }
  hp.seed = cfg.base_seed;

  if (rc.methods.empty()) rc.methods = registered_methods();

  cfg.validate();
  for (double d : rc.densities) {
    if (!(d > 0.0) || d > 1.0) {
      throw std::invalid_argument(name + ": densities entries must be in (0, 1]");
    }
  }
  if (cfg.method.wsrec_lambda_mix < 0.0 || cfg.method.wsrec_lambda_mix > 1.0) {
    throw std::invalid_argument(name + ": wsrecLambdaMix must be in [0, 1]");
  }
  if (!(cfg.relevance.epsilon > 0.0)) {
    throw std::invalid_argument(name + ": relevanceEpsilon must be > 0");
  }
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_run_config(in, path);
}

}  // namespace qosrec
