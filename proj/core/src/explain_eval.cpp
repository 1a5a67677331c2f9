/*
 * Copyright 2026 The GraphIX Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "graphix/explain_eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "graphix/attribution.hpp"
#include "json.hpp"

namespace graphix {

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Records may name genes bare ("KIT") or namespaced ("gene::KIT").
std::optional<NodeId> resolve_kind(const KnowledgeGraph& graph, const std::string& label, NodeKind kind) {
  const auto id = resolve_label(graph, label);
  if (id && graph.kind(*id) == kind) return id;
  if (label.find("::") == std::string::npos) {
    const auto alt = resolve_label(graph, make_label(kind, label));
    if (alt && graph.kind(*alt) == kind) return alt;
  }
  return std::nullopt;
}

}  // namespace

std::vector<ExplainRecord> parse_explain_records(const std::string& text, const std::string& source) {
  std::vector<ExplainRecord> out;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto fields = split(line, '\t');
    if (fields.size() != 3) {
      throw ParseError(source, number, "expected 3 tab-separated fields, got " + std::to_string(fields.size()));
    }
    if (out.empty() && trim(fields[0]) == "disease") continue;  // header
    ExplainRecord r;
    r.disease = trim(fields[0]);
    r.drug = trim(fields[1]);
    r.line = number;
    for (const auto& g : split(fields[2], ',')) {
      auto name = trim(g);
      if (!name.empty()) r.targets.push_back(std::move(name));
    }
    if (r.disease.empty() || r.drug.empty() || r.targets.empty()) {
      throw ParseError(source, number, "empty disease, drug or target field");
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ExplainRecord> read_explain_records(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open record file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_explain_records(buf.str(), path);
}

std::size_t ExplainSummary::hits() const {
  return static_cast<std::size_t>(std::count_if(records.begin(), records.end(), [](const auto& r) { return r.hit_at_1(); }));
}

double ExplainSummary::accuracy() const {
  return records.empty() ? 0.0 : static_cast<double>(hits()) / static_cast<double>(records.size());
}

std::string ExplainSummary::to_json(const KnowledgeGraph& graph) const {
  nlohmann::ordered_json j;
  j["steps"] = steps;
  if (std::isfinite(threshold)) j["threshold"] = threshold;
  else j["threshold"] = nullptr;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json row;
    row["disease"] = graph.labels.label(r.disease);
    row["drug"] = graph.labels.label(r.drug);
    auto targets = nlohmann::ordered_json::array();
    for (auto t : r.known_targets) targets.push_back(graph.labels.label(t));
    row["targets"] = std::move(targets);
    row["score"] = r.score;
    row["n_candidates"] = r.n_candidates;
    row["target_ranks"] = r.target_ranks;
    row["top_gene"] = r.top_gene ? nlohmann::ordered_json(graph.labels.label(*r.top_gene)) : nlohmann::ordered_json();
    row["hit_at_1"] = r.hit_at_1();
    rows.push_back(std::move(row));
  }
  j["records"] = std::move(rows);
  auto skipped_rows = nlohmann::ordered_json::array();
  for (const auto& s : skipped) {
    skipped_rows.push_back({{"line", s.source.line}, {"disease", s.source.disease},
                            {"drug", s.source.drug}, {"reason", s.reason}});
  }
  j["skipped"] = std::move(skipped_rows);
  j["hits"] = hits();
  j["total"] = records.size();
  j["accuracy"] = accuracy();
  return j.dump(2) + "\n";
}

std::string ExplainSummary::to_tsv() const {
  std::string out = "disease\tdrug\ttarget\tn_candidates\trank\n";
  for (const auto& r : records) {
    std::string targets, ranks;
    for (const auto& t : r.source.targets) targets += (targets.empty() ? "" : ",") + t;
    for (auto k : r.target_ranks) ranks += (ranks.empty() ? "" : ",") + std::to_string(k);
    if (ranks.empty()) ranks = "-";
    out += r.source.disease + "\t" + r.source.drug + "\t" + targets + "\t" + std::to_string(r.n_candidates) +
           "\t" + ranks + "\n";
  }
  char buf[96];
  const double pct = std::round(accuracy() * 100.0);
  std::snprintf(buf, sizeof(buf), "total accuracy = %zu/%zu (%.0f%%)\n", hits(), records.size(), pct);
  return out + buf;
}

ExplainSummary explainability_eval(const KnowledgeGraph& graph, const Checkpoint& checkpoint,
                                   const std::vector<ExplainRecord>& records, const ExplainOptions& options) {
  if (checkpoint.model != ModelKind::GraphIX) {
    throw InputError("explainability evaluation needs a graphix checkpoint, got " +
                     std::string(to_string(checkpoint.model)));
  }
  if (options.steps < 1) throw InputError("steps must be >= 1");
  const auto [left_kind, right_kind] = relation_endpoints(graph.target);
  const Rgcn model(graph, checkpoint.config);
  const PairScorer scorer(graph, checkpoint);

  ExplainSummary summary;
  summary.steps = options.steps;
  switch (options.threshold_mode) {
    case ThresholdMode::None:
      summary.threshold = -std::numeric_limits<double>::infinity();
      break;
    case ThresholdMode::Value:
      summary.threshold = options.threshold;
      break;
    case ThresholdMode::Median:
      if (graph.positives.empty()) throw InputError("graph has no training positives for the median threshold");
      summary.threshold = median(scorer.score(graph.positives));
      break;
  }
  const int hops = checkpoint.config.n_layers;

  for (const auto& rec : records) {
    auto skip = [&](std::string reason) { summary.skipped.push_back({rec, std::move(reason)}); };
    const auto disease = resolve_kind(graph, rec.disease, left_kind);
    if (!disease) { skip("unknown " + std::string(to_string(left_kind)) + " '" + rec.disease + "'"); continue; }
    const auto drug = resolve_kind(graph, rec.drug, right_kind);
    if (!drug) { skip("unknown " + std::string(to_string(right_kind)) + " '" + rec.drug + "'"); continue; }
    if (*disease == *drug) { skip("edge endpoints coincide"); continue; }

    std::vector<NodeId> targets;
    for (const auto& t : rec.targets) {
      if (const auto g = resolve_kind(graph, t, NodeKind::Gene)) targets.push_back(*g);
    }
    if (targets.empty()) { skip("no known target present in the graph"); continue; }

    const NodePair edge{*disease, *drug};
    const auto hood = neighborhood(graph, edge, hops);
    const bool reachable = std::any_of(targets.begin(), targets.end(), [&](NodeId t) {
      return std::binary_search(hood.begin(), hood.end(), t);
    });
    if (!reachable) { skip("no known target within " + std::to_string(hops) + " hop(s)"); continue; }

    const double s = scorer(*disease, *drug);
    if (!(s > summary.threshold)) { skip("not predicted positive (score " + std::to_string(s) + ")"); continue; }

    AttributionRequest req;
    req.edge = edge;
    req.steps = options.steps;
    const auto report = integrated_gradients(model, checkpoint.params, req);
    const auto ranked = rank_proteins(report);

    EvalRecord out;
    out.source = rec;
    out.disease = *disease;
    out.drug = *drug;
    out.known_targets = targets;
    out.score = s;
    out.n_candidates = ranked.size();
    out.top_gene = report.top_gene();
    const std::set<NodeId> target_set(targets.begin(), targets.end());
    for (std::size_t k = 0; k < ranked.size(); ++k) {
      if (target_set.count(ranked[k].first)) out.target_ranks.push_back(k + 1);
    }
    summary.records.push_back(std::move(out));
  }
  return summary;
}

}  // namespace graphix
