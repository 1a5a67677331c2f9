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

#include "graphix/attribution.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace graphix {

namespace {

void check_edge(const KnowledgeGraph& graph, NodePair edge) {
  if (edge.first >= graph.n_nodes() || edge.second >= graph.n_nodes()) {
    throw InputError("edge endpoint not in graph");
  }
  if (edge.first == edge.second) throw InputError("edge endpoints must differ");
}

Matrix score_output_grad(const Matrix& h, NodePair edge) {
  Matrix g = Matrix::Zero(h.rows(), h.cols());
  g.row(edge.first) += h.row(edge.second);
  g.row(edge.second) += h.row(edge.first);
  return g;
}

// One-layer shortcut: the score depends only on the endpoint pre-activations
//   z_e = sum_r sum_u A_r[e, u] x_u W_r,
// and scaling x_i by alpha shifts z_e by (alpha - 1) x_i M_e with
// M_e = sum_r A_r[e, i] W_r. Nothing else in the graph changes.
class LocalEdgeModel {
 public:
  LocalEdgeModel(const Rgcn& model, const ModelParams& params, NodePair edge)
      : model_(model), params_(params), edge_(edge) {
    za_ = preactivation(edge.first);
    zb_ = preactivation(edge.second);
  }

  RowVector average_gradient(NodeId node, int steps, PathRule rule) const {
    const Matrix ma = mixing(edge_.first, node);
    const Matrix mb = mixing(edge_.second, node);
    const RowVector x = params_.embeddings.row(node);
    const RowVector da = x * ma;
    const RowVector db = x * mb;
    RowVector sum_ga = RowVector::Zero(za_.size());
    RowVector sum_gb = RowVector::Zero(zb_.size());
    for (int k = 1; k <= steps; ++k) {
      const double shift = path_alpha(rule, k, steps) - 1.0;
      const RowVector ha = (za_ + shift * da).array().tanh().matrix();
      const RowVector hb = (zb_ + shift * db).array().tanh().matrix();
      sum_ga += ((1.0 - ha.array().square()) * hb.array()).matrix();
      sum_gb += ((1.0 - hb.array().square()) * ha.array()).matrix();
    }
    return (sum_ga * ma.transpose() + sum_gb * mb.transpose()) / static_cast<double>(steps);
  }

 private:
  RowVector preactivation(NodeId e) const {
    const auto& g = model_.graph();
    RowVector z = RowVector::Zero(model_.config().out_dim);
    for (std::size_t r = 0; r < g.relations.size(); ++r) {
      const auto& w = params_.weights[0][r];
      if (g.relations[r].kind == RelationKind::SelfLoop) {
        z += params_.embeddings.row(e) * w;
        continue;
      }
      const auto& a = g.relations[r].adjacency;
      RowVector agg = RowVector::Zero(params_.embeddings.cols());
      const auto idx = a.row_indices(e);
      const auto val = a.row_values(e);
      for (std::size_t k = 0; k < idx.size(); ++k) agg += val[k] * params_.embeddings.row(idx[k]);
      z += agg * w;
    }
    return z;
  }

  Matrix mixing(NodeId e, NodeId node) const {
    const auto& g = model_.graph();
    Matrix m = Matrix::Zero(model_.config().embed_dim, model_.config().out_dim);
    for (std::size_t r = 0; r < g.relations.size(); ++r) {
      const double coef = g.relations[r].kind == RelationKind::SelfLoop
                              ? (e == node ? 1.0 : 0.0)
                              : g.relations[r].adjacency.at(e, node);
      if (coef != 0.0) m += coef * params_.weights[0][r];
    }
    return m;
  }

  const Rgcn& model_;
  const ModelParams& params_;
  NodePair edge_;
  RowVector za_;
  RowVector zb_;
};

std::string number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

struct SubgraphEdge {
  NodeId a;
  NodeId b;
  RelationKind relation;
  bool predicted;
};

struct Subgraph {
  std::vector<NodeContribution> nodes;  // by ascending node id
  std::vector<double> size;
  std::optional<NodeId> top_gene;
  std::vector<SubgraphEdge> edges;
};

Subgraph build_subgraph(const KnowledgeGraph& graph, const AttributionReport& report) {
  Subgraph s;
  s.nodes = report.contributions;
  std::sort(s.nodes.begin(), s.nodes.end(),
            [](const NodeContribution& a, const NodeContribution& b) { return a.node < b.node; });
  double max_ig = 0.0;
  for (const auto& c : s.nodes) max_ig = std::max(max_ig, c.ig);
  for (const auto& c : s.nodes) s.size.push_back(max_ig > 0.0 ? c.ig / max_ig : 0.0);
  s.top_gene = report.top_gene();

  std::set<NodeId> members;
  for (const auto& c : s.nodes) members.insert(c.node);
  for (const auto& rel : graph.relations) {
    if (rel.kind == RelationKind::SelfLoop) continue;
    for (NodeId u : members) {
      for (NodeId v : rel.adjacency.row_indices(u)) {
        if (u < v && members.contains(v)) s.edges.push_back({u, v, rel.kind, false});
      }
    }
  }
  s.edges.push_back({report.edge.first, report.edge.second, graph.target, true});
  return s;
}

}  // namespace

std::optional<NodeId> AttributionReport::top_gene() const {
  const auto ranked = rank_proteins(*this);
  if (ranked.empty()) return std::nullopt;
  return ranked.front().first;
}

std::vector<NodeId> neighborhood(const KnowledgeGraph& graph, NodePair edge, int hops) {
  if (hops < 1) throw InputError("hop count must be at least 1");
  check_edge(graph, edge);
  std::vector<int> dist(graph.n_nodes(), -1);
  std::deque<NodeId> queue;
  for (NodeId e : {edge.first, edge.second}) {
    if (dist[e] < 0) {
      dist[e] = 0;
      queue.push_back(e);
    }
  }
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    if (dist[u] == hops) continue;
    for (const auto& rel : graph.relations) {
      if (rel.kind == RelationKind::SelfLoop) continue;
      for (NodeId v : rel.adjacency.row_indices(u)) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push_back(v);
        }
      }
    }
  }
  std::vector<NodeId> out;
  for (NodeId i = 0; i < graph.n_nodes(); ++i) {
    if (dist[i] >= 0) out.push_back(i);
  }
  return out;
}

Matrix score_input_gradient(const Rgcn& model, const ModelParams& params, NodePair edge) {
  check_edge(model.graph(), edge);
  const auto cache = model.forward(params);
  return model.backward(params, cache, score_output_grad(cache.output(), edge)).embeddings;
}

RowVector average_path_gradient(const Rgcn& model, const ModelParams& params, NodePair edge, NodeId node,
                                int steps, bool full_graph, PathRule rule) {
  if (steps < 1) throw InputError("IG needs at least one step");
  check_edge(model.graph(), edge);
  if (node >= model.graph().n_nodes()) throw InputError("node not in graph");
  if (model.config().n_layers == 1 && !full_graph) {
    return LocalEdgeModel(model, params, edge).average_gradient(node, steps, rule);
  }
  ModelParams scaled = params;
  RowVector sum = RowVector::Zero(params.embeddings.cols());
  for (int k = 1; k <= steps; ++k) {
    scaled.embeddings.row(node) = path_alpha(rule, k, steps) * params.embeddings.row(node);
    const auto cache = model.forward(scaled);
    const auto grads = model.backward(scaled, cache, score_output_grad(cache.output(), edge));
    sum += grads.embeddings.row(node);
  }
  return sum / static_cast<double>(steps);
}

AttributionReport integrated_gradients(const Rgcn& model, const ModelParams& params,
                                       const AttributionRequest& request) {
  const auto& graph = model.graph();
  check_edge(graph, request.edge);
  if (request.steps < 1) throw InputError("IG needs at least one step");
  const int layers = model.config().n_layers;
  if (request.hop_limit != 0 && request.hop_limit != layers) {
    throw InputError("hop_limit must equal the model's layer count (" + std::to_string(layers) + ")");
  }

  AttributionReport report;
  report.edge = request.edge;
  report.steps = request.steps;
  report.hop_limit = layers;
  report.rule = request.rule;
  const auto h = model.forward(params).output();
  report.score = score(h, request.edge.first, request.edge.second);

  const auto nodes = neighborhood(graph, request.edge, layers);
  std::vector<double> ig(nodes.size(), 0.0);
  std::optional<LocalEdgeModel> local;
  if (layers == 1 && !request.full_graph) local.emplace(model, params, request.edge);
  parallel_for(nodes.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const NodeId node = nodes[k];
      const RowVector avg = local ? local->average_gradient(node, request.steps, request.rule)
                                  : average_path_gradient(model, params, request.edge, node,
                                                          request.steps, true, request.rule);
      ig[k] = params.embeddings.row(node).cwiseProduct(avg).norm();
    }
  });
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    report.contributions.push_back({nodes[k], graph.kind(nodes[k]), ig[k]});
  }
  std::stable_sort(report.contributions.begin(), report.contributions.end(),
                   [](const NodeContribution& a, const NodeContribution& b) { return a.ig > b.ig; });
  return report;
}

std::vector<std::pair<NodeId, double>> rank_proteins(const AttributionReport& report) {
  std::vector<std::pair<NodeId, double>> out;
  for (const auto& c : report.contributions) {
    if (c.kind == NodeKind::Gene) out.emplace_back(c.node, c.ig);
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second > b.second || (a.second == b.second && a.first < b.first);
  });
  return out;
}

std::string_view to_string(PathRule rule) { return rule == PathRule::Right ? "right" : "midpoint"; }

PathRule parse_path_rule(std::string_view s) {
  if (s == "right") return PathRule::Right;
  if (s == "midpoint") return PathRule::Midpoint;
  throw InputError("unknown path rule '" + std::string(s) + "' (expected right or midpoint)");
}

ExportFormat parse_export_format(std::string_view s) {
  if (s == "dot") return ExportFormat::Dot;
  if (s == "graphml") return ExportFormat::GraphML;
  if (s == "json") return ExportFormat::Json;
  throw InputError("unknown export format '" + std::string(s) + "' (expected dot, graphml or json)");
}

std::string attribution_report_json(const KnowledgeGraph& graph, const AttributionReport& report) {
  nlohmann::ordered_json j;
  j["edge"] = {graph.labels.label(report.edge.first), graph.labels.label(report.edge.second)};
  j["score"] = report.score;
  j["steps"] = report.steps;
  j["rule"] = std::string(to_string(report.rule));
  j["hop_limit"] = report.hop_limit;
  auto contributions = nlohmann::ordered_json::array();
  for (const auto& c : report.contributions) {
    nlohmann::ordered_json item;
    item["label"] = graph.labels.label(c.node);
    item["kind"] = std::string(to_string(c.kind));
    item["ig"] = c.ig;
    contributions.push_back(std::move(item));
  }
  j["contributions"] = std::move(contributions);
  if (const auto top = report.top_gene()) {
    j["top_gene"] = graph.labels.label(*top);
  } else {
    j["top_gene"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::string render_subgraph(const KnowledgeGraph& graph, const AttributionReport& report, ExportFormat format) {
  const auto s = build_subgraph(graph, report);
  const auto& labels = graph.labels;
  std::ostringstream out;
  switch (format) {
    case ExportFormat::Dot: {
      out << "graph attribution {\n";
      for (std::size_t k = 0; k < s.nodes.size(); ++k) {
        const auto& c = s.nodes[k];
        out << "  " << dot_quote(labels.label(c.node)) << " [kind=" << dot_quote(to_string(c.kind))
            << ", label=" << dot_quote(labels.label(c.node)) << ", ig=" << number(c.ig)
            << ", size=" << number(s.size[k])
            << ", top_gene=" << (s.top_gene == c.node ? "true" : "false") << "];\n";
      }
      for (const auto& e : s.edges) {
        out << "  " << dot_quote(labels.label(e.a)) << " -- " << dot_quote(labels.label(e.b))
            << " [relation=" << dot_quote(to_string(e.relation));
        if (e.predicted) out << ", style=dashed, predicted=true";
        out << "];\n";
      }
      out << "}\n";
      break;
    }
    case ExportFormat::GraphML: {
      out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
          << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
          << "  <key id=\"kind\" for=\"node\" attr.name=\"kind\" attr.type=\"string\"/>\n"
          << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
          << "  <key id=\"ig\" for=\"node\" attr.name=\"ig\" attr.type=\"double\"/>\n"
          << "  <key id=\"size\" for=\"node\" attr.name=\"size\" attr.type=\"double\"/>\n"
          << "  <key id=\"top_gene\" for=\"node\" attr.name=\"top_gene\" attr.type=\"boolean\"/>\n"
          << "  <key id=\"relation\" for=\"edge\" attr.name=\"relation\" attr.type=\"string\"/>\n"
          << "  <key id=\"predicted\" for=\"edge\" attr.name=\"predicted\" attr.type=\"boolean\"/>\n"
          << "  <graph id=\"attribution\" edgedefault=\"undirected\">\n";
      for (std::size_t k = 0; k < s.nodes.size(); ++k) {
        const auto& c = s.nodes[k];
        out << "    <node id=\"n" << c.node << "\">"
            << "<data key=\"kind\">" << to_string(c.kind) << "</data>"
            << "<data key=\"label\">" << xml_escape(labels.label(c.node)) << "</data>"
            << "<data key=\"ig\">" << number(c.ig) << "</data>"
            << "<data key=\"size\">" << number(s.size[k]) << "</data>"
            << "<data key=\"top_gene\">" << (s.top_gene == c.node ? "true" : "false") << "</data>"
            << "</node>\n";
      }
      for (const auto& e : s.edges) {
        out << "    <edge source=\"n" << e.a << "\" target=\"n" << e.b << "\">"
            << "<data key=\"relation\">" << to_string(e.relation) << "</data>"
            << "<data key=\"predicted\">" << (e.predicted ? "true" : "false") << "</data>"
            << "</edge>\n";
      }
      out << "  </graph>\n</graphml>\n";
      break;
    }
    case ExportFormat::Json: {
      nlohmann::ordered_json j;
      auto nodes = nlohmann::ordered_json::array();
      for (std::size_t k = 0; k < s.nodes.size(); ++k) {
        const auto& c = s.nodes[k];
        nlohmann::ordered_json n;
        n["id"] = labels.label(c.node);
        n["kind"] = std::string(to_string(c.kind));
        n["ig"] = c.ig;
        n["size"] = s.size[k];
        n["top_gene"] = s.top_gene == c.node;
        nodes.push_back(std::move(n));
      }
      auto edges = nlohmann::ordered_json::array();
      for (const auto& e : s.edges) {
        nlohmann::ordered_json ej;
        ej["source"] = labels.label(e.a);
        ej["target"] = labels.label(e.b);
        ej["relation"] = std::string(to_string(e.relation));
        ej["predicted"] = e.predicted;
        edges.push_back(std::move(ej));
      }
      j["nodes"] = std::move(nodes);
      j["edges"] = std::move(edges);
      out << j.dump(2) << "\n";
      break;
    }
  }
  return out.str();
}

void export_subgraph(const KnowledgeGraph& graph, const AttributionReport& report, ExportFormat format,
                     const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << render_subgraph(graph, report, format);
  if (!out) throw Error("write failed: " + path);
}

}  // namespace graphix
