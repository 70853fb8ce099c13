#include "bicog/config.hpp"

#include <fstream>

#include <json.hpp>

namespace bicog {

using nlohmann::json;

namespace {

json learner_to_json(const LearnerSpec& s) {
  json j;
  j["family"] = s.family;
  j["replicate"] = s.replicate;
  if (s.family == "logistic") {
    j["l2"] = s.l2;
    j["pretrain_epochs"] = s.pretrain_epochs;
    j["pretrain_lr"] = s.pretrain_lr;
  } else if (s.family == "knn") {
    j["k"] = s.knn_k;
  } else if (s.family == "noisy_oracle") {
    j["accuracy"] = s.oracle_accuracy;
    if (!s.oracle_schedule.empty()) j["schedule"] = s.oracle_schedule;
    if (!s.oracle_confusion_row.empty())
      j["confusion_row"] = s.oracle_confusion_row;
    j["vary_with_round"] = s.oracle_vary_with_round;
  }
  return j;
}

LearnerSpec learner_from_json(const json& j) {
  LearnerSpec s;
  s.family = j.at("family").get<std::string>();
  s.replicate = j.value("replicate", 1);
  s.l2 = j.value("l2", s.l2);
  s.pretrain_epochs = j.value("pretrain_epochs", s.pretrain_epochs);
  s.pretrain_lr = j.value("pretrain_lr", s.pretrain_lr);
  s.knn_k = j.value("k", s.knn_k);
  if (j.contains("accuracy"))
    s.oracle_accuracy = j["accuracy"].get<std::vector<double>>();
  if (j.contains("schedule"))
    s.oracle_schedule = j["schedule"].get<std::vector<double>>();
  if (j.contains("confusion_row"))
    s.oracle_confusion_row = j["confusion_row"].get<std::vector<double>>();
  s.oracle_vary_with_round = j.value("vary_with_round", true);
  return s;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (generator.has_value() == csv.has_value())
    throw InvalidParams("config: exactly one of generator/csv required");
  if (seeds.empty()) throw InvalidParams("config: seeds list must be non-empty");
  if (learners.empty()) throw InvalidParams("config: no learner specs");
  run.validate();
  int slots = 0;
  for (const LearnerSpec& s : learners) {
    if (s.replicate < 1) throw InvalidParams("config: replicate must be >= 1");
    slots += s.replicate;
  }
  if (slots != run.k)
    throw InvalidParams("config: learner slot count must equal K");
  if (split.base_fraction <= 0.0 || split.base_fraction > 1.0)
    throw InvalidParams("config: base_fraction must be in (0,1]");
  if (split.shots_per_class < 1)
    throw InvalidParams("config: shots_per_class must be >= 1");
}

std::string ExperimentConfig::to_json() const {
  json j;
  if (generator) {
    json g;
    g["name"] = generator->name;
    g["num_classes"] = generator->num_classes;
    g["dim"] = generator->dim;
    g["train_per_class"] = generator->train_per_class;
    g["test_per_class"] = generator->test_per_class;
    g["pretrain_per_class"] = generator->pretrain_per_class;
    g["separation"] = generator->separation;
    g["noise"] = generator->noise;
    g["bias_skew"] = generator->bias_skew;
    j["dataset"]["generator"] = g;
  }
  if (csv) {
    json c;
    c["path"] = csv->path;
    c["feature_columns"] = csv->feature_columns;
    c["label_column"] = csv->label_column;
    if (!csv->split_column.empty()) c["split_column"] = csv->split_column;
    j["dataset"]["csv"] = c;
  }
  j["split"]["base_fraction"] = split.base_fraction;
  j["split"]["shots_per_class"] = split.shots_per_class;
  j["learners"] = json::array();
  for (const LearnerSpec& s : learners) j["learners"].push_back(learner_to_json(s));
  j["augment"]["weak_scale"] = augment.weak_scale;
  j["augment"]["strong_scale"] = augment.strong_scale;
  j["augment"]["dropout"] = augment.dropout;
  json r;
  r["K"] = run.k;
  r["alpha"] = run.alpha;
  r["warmup_epochs"] = run.warmup_epochs;
  r["selftrain_epochs"] = run.selftrain_epochs;
  r["learning_rate"] = run.learning_rate;
  r["max_rounds"] = run.max_rounds;
  r["round_mode"] = run.round_mode == RoundMode::sequential ? "sequential" : "snapshot";
  r["vote_mode"] = run.vote_mode == VoteMode::paper ? "paper" : "strict";
  r["budget_mode"] = run.budget_mode == BudgetMode::theorem ? "theorem" : "algorithm1";
  r["stratified_subsample"] = run.stratified_subsample;
  r["count_no_consensus_as_error"] = run.count_no_consensus_as_error;
  j["run"] = r;
  j["output_dir"] = output_dir;
  j["seeds"] = seeds;
  return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig cfg;
  try {
    const json& ds = j.at("dataset");
    if (ds.contains("generator")) {
      const json& g = ds["generator"];
      GeneratorParams p;
      p.name = g.value("name", p.name);
      p.num_classes = g.value("num_classes", p.num_classes);
      p.dim = g.value("dim", p.dim);
      p.train_per_class = g.value("train_per_class", p.train_per_class);
      p.test_per_class = g.value("test_per_class", p.test_per_class);
      p.pretrain_per_class = g.value("pretrain_per_class", p.pretrain_per_class);
      p.separation = g.value("separation", p.separation);
      p.noise = g.value("noise", p.noise);
      p.bias_skew = g.value("bias_skew", p.bias_skew);
      cfg.generator = p;
    }
    if (ds.contains("csv")) {
      const json& c = ds["csv"];
      CsvSpec s;
      s.path = c.at("path").get<std::string>();
      s.feature_columns = c.at("feature_columns").get<std::vector<std::string>>();
      s.label_column = c.at("label_column").get<std::string>();
      s.split_column = c.value("split_column", "");
      cfg.csv = s;
    }
    if (j.contains("split")) {
      cfg.split.base_fraction = j["split"].value("base_fraction", 1.0);
      cfg.split.shots_per_class = j["split"].value("shots_per_class", 4);
    }
    cfg.learners.clear();
    for (const json& l : j.at("learners")) cfg.learners.push_back(learner_from_json(l));
    if (j.contains("augment")) {
      cfg.augment.weak_scale = j["augment"].value("weak_scale", cfg.augment.weak_scale);
      cfg.augment.strong_scale = j["augment"].value("strong_scale", cfg.augment.strong_scale);
      cfg.augment.dropout = j["augment"].value("dropout", cfg.augment.dropout);
    }
    const json& r = j.at("run");
    cfg.run.k = r.value("K", 3);
    cfg.run.alpha = r.value("alpha", 1.0);
    cfg.run.warmup_epochs = r.value("warmup_epochs", 10);
    cfg.run.selftrain_epochs = r.value("selftrain_epochs", 5);
    cfg.run.learning_rate = r.value("learning_rate", 0.5);
    cfg.run.max_rounds = r.value("max_rounds", 50);
    const std::string rm = r.value("round_mode", "sequential");
    if (rm == "sequential") cfg.run.round_mode = RoundMode::sequential;
    else if (rm == "snapshot") cfg.run.round_mode = RoundMode::snapshot;
    else throw ParseError("config: unknown round_mode '" + rm + "'");
    const std::string vm = r.value("vote_mode", "paper");
    if (vm == "paper") cfg.run.vote_mode = VoteMode::paper;
    else if (vm == "strict") cfg.run.vote_mode = VoteMode::strict;
    else throw ParseError("config: unknown vote_mode '" + vm + "'");
    const std::string bm = r.value("budget_mode", "theorem");
    if (bm == "theorem") cfg.run.budget_mode = BudgetMode::theorem;
    else if (bm == "algorithm1") cfg.run.budget_mode = BudgetMode::algorithm1;
    else throw ParseError("config: unknown budget_mode '" + bm + "'");
    cfg.run.stratified_subsample = r.value("stratified_subsample", false);
    cfg.run.count_no_consensus_as_error =
        r.value("count_no_consensus_as_error", false);
    cfg.output_dir = j.value("output_dir", "out");
    cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("config field error: ") + e.what());
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config " + path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return from_json(text);
}

std::vector<LearnerSpec> expand_learner_slots(const ExperimentConfig& cfg) {
  std::vector<LearnerSpec> slots;
  for (const LearnerSpec& s : cfg.learners)
    for (int i = 0; i < s.replicate; ++i) slots.push_back(s);
  return slots;
}

}  // namespace bicog
