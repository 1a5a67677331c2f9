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

#include <doctest.h>

#include <map>
#include <numeric>
#include <random>
#include <set>

#include "graphix/binary_io.hpp"
#include "graphix/digest.hpp"
#include "graphix/kgraph.hpp"
#include "graphix/mesh.hpp"
#include "support.hpp"

using namespace graphix;
using graphix::testing::TempDir;

namespace {

std::vector<std::string> segments(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto dot = s.find('.', start);
    out.push_back(s.substr(start, dot - start));
    if (dot == std::string::npos) return out;
    start = dot + 1;
  }
}

// a is a strict ancestor of b iff a's segments are a proper prefix of b's.
bool ancestor_by_segments(const std::string& a, const std::string& b) {
  const auto sa = segments(a), sb = segments(b);
  return sa.size() < sb.size() && std::equal(sa.begin(), sa.end(), sb.begin());
}

std::set<MeshCode> random_codes(std::mt19937_64& rng, std::size_t n) {
  std::set<MeshCode> out;
  std::uniform_int_distribution<int> depth(1, 4), seg(0, 2), top(0, 2);
  while (out.size() < n) {
    std::string code = "C0" + std::to_string(top(rng));
    const int d = depth(rng);
    for (int k = 1; k < d; ++k) code += "." + std::to_string(100 + seg(rng));
    out.insert(MeshCode(code));
  }
  return out;
}

}  // namespace

TEST_CASE("binary io round trip and truncation") {
  BinaryWriter w;
  w.u8(7);
  w.u32(0xdeadbeef);
  w.i64(-5);
  w.f64(-0.125);
  w.str("hello");
  Matrix m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  w.matrix(m);
  BinaryReader r(w.buffer(), "mem");
  CHECK(r.u8() == 7);
  CHECK(r.u32() == 0xdeadbeefu);
  CHECK(r.i64() == -5);
  CHECK(r.f64() == -0.125);
  CHECK(r.str() == "hello");
  CHECK(r.matrix() == m);
  CHECK(r.at_end());
  BinaryReader cut(w.buffer().substr(0, 6), "mem");
  cut.u8();
  CHECK_THROWS_AS(cut.u64(), InputError);
}

TEST_CASE("sha256 known vectors") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("mesh code basics") {
  const MeshCode c("C04.557.337");
  CHECK(c.depth() == 3);
  CHECK(c.parent().str() == "C04.557");
  CHECK(c.first_level() == "C04");
  CHECK(MeshCode("C04").is_ancestor_of(c));
  CHECK_FALSE(MeshCode("C04.55").is_ancestor_of(c));
  CHECK_FALSE(c.is_ancestor_of(c));
  CHECK_FALSE(MeshCode("C04").has_parent());
  CHECK_THROWS_AS(MeshCode(""), InputError);
  CHECK_THROWS_AS(MeshCode("C04..1"), InputError);
}

TEST_CASE("mesh expand and mapping file") {
  TempDir dir;
  const auto path = dir.write("m.tsv", "# comment\nLung Neoplasms\tC04.588.894\nLung Neoplasms\tC08.381.540\nAsthma\tC08.127\n");
  const auto mapping = load_mesh_mapping(path);
  CHECK(mesh_expand("Lung Neoplasms", mapping).size() == 2);
  CHECK(mesh_expand("Asthma", mapping) == std::set<MeshCode>{MeshCode("C08.127")});
  std::vector<SkipRecord> skipped;
  CHECK(mesh_expand("Unknown", mapping, &skipped).empty());
  REQUIRE(skipped.size() == 1);
  CHECK(skipped[0].entity == "Unknown");
  const auto bad = dir.write("bad.tsv", "Asthma\tC08.127\nno tab here\n");
  try {
    load_mesh_mapping(bad);
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("mesh tree edges fixtures") {
  using E = std::pair<MeshCode, MeshCode>;
  CHECK(mesh_tree_edges({MeshCode("C04.557"), MeshCode("C04.557.337")}) ==
        std::vector<E>{{MeshCode("C04.557.337"), MeshCode("C04.557")}});
  CHECK(mesh_tree_edges({MeshCode("C04.557.337")}).empty());
  const auto three = mesh_tree_edges({MeshCode("C04"), MeshCode("C04.557"), MeshCode("C04.557.337")});
  CHECK(three.size() == 2);
  for (const auto& [child, parent] : three) CHECK_FALSE((child.str() == "C04.557.337" && parent.str() == "C04"));
}

TEST_CASE("mesh tree edges match ancestor-scan oracle on random code sets") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const auto codes = random_codes(rng, 1 + trial % 25);
    std::set<std::pair<std::string, std::string>> expect;
    for (const auto& a : codes)
      for (const auto& b : codes)
        if (ancestor_by_segments(b.str(), a.str()) && segments(b.str()).size() + 1 == segments(a.str()).size())
          expect.insert({a.str(), b.str()});
    std::set<std::pair<std::string, std::string>> got;
    for (const auto& [c, p] : mesh_tree_edges(codes)) got.insert({c.str(), p.str()});
    REQUIRE(got == expect);
  }
}

TEST_CASE("prune upward fixtures") {
  using D = DiseaseGeneEdge;
  CHECK(prune_upward_disease_gene({{MeshCode("C04.557"), "g1"}, {MeshCode("C04.557.337"), "g1"}}) ==
        std::vector<D>{{MeshCode("C04.557.337"), "g1"}});
  CHECK(prune_upward_disease_gene({{MeshCode("C04.557"), "g1"}, {MeshCode("C10.228"), "g1"}}).size() == 2);
  CHECK(prune_upward_disease_gene(
            {{MeshCode("C04"), "g1"}, {MeshCode("C04.557"), "g1"}, {MeshCode("C04.557.337"), "g1"}}) ==
        std::vector<D>{{MeshCode("C04.557.337"), "g1"}});
  // different genes never interact
  CHECK(prune_upward_disease_gene({{MeshCode("C04"), "g1"}, {MeshCode("C04.557"), "g2"}}).size() == 2);
}

TEST_CASE("prune upward matches brute-force ancestor scan") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 200; ++trial) {
    const auto codes = random_codes(rng, 2 + trial % 20);
    std::vector<MeshCode> pool(codes.begin(), codes.end());
    std::vector<DiseaseGeneEdge> edges;
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1), gene(0, 3);
    for (int k = 0; k < 30; ++k) edges.push_back({pool[pick(rng)], "g" + std::to_string(gene(rng))});
    std::set<DiseaseGeneEdge> expect;
    for (const auto& e : edges) {
      bool redundant = false;
      for (const auto& f : edges)
        if (f.gene == e.gene && ancestor_by_segments(e.disease.str(), f.disease.str())) redundant = true;
      if (!redundant) expect.insert(e);
    }
    const auto got = prune_upward_disease_gene(edges);
    REQUIRE(std::set<DiseaseGeneEdge>(got.begin(), got.end()) == expect);
    REQUIRE(got.size() == expect.size());
  }
}

TEST_CASE("edge file parsing") {
  TempDir dir;
  LabelTable labels;
  const auto undirected = parse_edge_file(dir.write("gg.tsv", "a\tb\nb\ta\n"), RelationKind::GeneGene, labels);
  CHECK(undirected.pairs.size() == 1);
  CHECK(undirected.duplicates == 1);

  LabelTable l2;
  const auto self = parse_edge_file(dir.write("self.tsv", "a\ta\n"), RelationKind::GeneGene, l2);
  CHECK(self.pairs.empty());
  CHECK(self.warnings.size() == 1);

  LabelTable l3;
  const auto dg = parse_edge_file(dir.write("dg.tsv", "# header\nd1\tg1\r\n\nd1\tg2\nd2\tg1\n"),
                                  RelationKind::DiseaseGene, l3);
  CHECK(dg.pairs.size() == 3);
  CHECK(l3.size() == 4);
  CHECK(l3.find("disease::d1").has_value());
  CHECK(l3.find("gene::g2").has_value());

  LabelTable l4;
  try {
    parse_edge_file(dir.write("bad.tsv", "a\tb\nx\ty\tz\n"), RelationKind::GeneGene, l4);
    FAIL("expected parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_edge_file(dir.write("empty.tsv", "# nothing\n"), RelationKind::GeneGene, l4), InputError);
  CHECK_THROWS_AS(parse_edge_file(dir.file("missing.tsv"), RelationKind::GeneGene, l4), InputError);
}

TEST_CASE("label table rejects kind clashes") {
  LabelTable t;
  const auto a = t.intern(NodeKind::Gene, "gene::x");
  CHECK(t.intern(NodeKind::Gene, "gene::x") == a);
  CHECK_THROWS_AS(t.intern(NodeKind::Drug, "gene::x"), InputError);
}

TEST_CASE("csr fixtures and dense oracle") {
  // path 0-1-2
  const std::vector<NodePair> path{{0, 1}, {1, 2}};
  const auto a = CsrMatrix::from_undirected(3, path);
  Matrix x(3, 1);
  x << 1, 2, 3;
  Matrix expect(3, 1);
  expect << 2, 4, 2;
  CHECK(a.multiply(x) == expect);
  CHECK(CsrMatrix::identity(3).multiply(x) == x);
  CHECK(a.at(0, 1) == 1.0);
  CHECK(a.at(0, 2) == 0.0);
  CHECK_THROWS_AS(a.multiply(Matrix::Zero(4, 1)), Error);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<NodePair> pairs;
    std::bernoulli_distribution coin(0.3);
    for (NodeId i = 0; i < 10; ++i)
      for (NodeId j = i + 1; j < 10; ++j)
        if (coin(rng)) pairs.push_back({i, j});
    const auto m = CsrMatrix::from_undirected(10, pairs);
    const Matrix dense = graphix::testing::dense_adjacency(10, pairs);
    CHECK(m.to_dense() == dense);
    const Matrix xs = Matrix::Random(10, 4);
    CHECK(graphix::testing::max_rel_diff(m.multiply(xs), dense * xs) < 1e-14);
  }
}

namespace {

// Connected components of the merged non-target relations, by all-pairs
// reachability (boolean Floyd-Warshall).
std::set<std::string> largest_component_oracle(std::size_t n, const std::vector<EdgeList>& lists,
                                               RelationKind target, const LabelTable& labels) {
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) reach[i][i] = 1;
  for (const auto& l : lists) {
    if (l.relation == target) continue;
    for (const auto& p : l.pairs) reach[p.first][p.second] = reach[p.second][p.first] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = 1;
  // only nodes touched by a message-passing relation take part
  std::vector<char> present(n, 0);
  for (const auto& l : lists) {
    if (l.relation == target) continue;
    for (const auto& p : l.pairs) present[p.first] = present[p.second] = 1;
  }
  std::size_t best = n, best_size = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!present[i]) continue;
    const auto size = static_cast<std::size_t>(std::count(reach[i].begin(), reach[i].end(), 1));
    if (size > best_size) best = i, best_size = size;  // first (smallest id) wins ties
  }
  std::set<std::string> out;
  for (std::size_t j = 0; j < n; ++j)
    if (best < n && reach[best][j]) out.insert(labels.label(static_cast<NodeId>(j)));
  return out;
}

}  // namespace

TEST_CASE("assemble keeps the larger of two triangles") {
  LabelTable labels;
  std::vector<NodeId> g;
  for (int i = 0; i < 7; ++i) g.push_back(labels.intern(NodeKind::Gene, "gene::g" + std::to_string(i)));
  const auto d = labels.intern(NodeKind::Disease, "disease::d");
  const auto c = labels.intern(NodeKind::Drug, "drug::c");
  // triangle g0 g1 g2 plus square g3..g6 (larger), disease and drug attached to the square
  std::vector<EdgeList> lists;
  lists.push_back(make_edge_list(RelationKind::GeneGene,
                                 {{g[0], g[1]}, {g[1], g[2]}, {g[0], g[2]}, {g[3], g[4]}, {g[4], g[5]}, {g[5], g[6]}, {g[3], g[6]}}));
  lists.push_back(make_edge_list(RelationKind::DiseaseGene, {{d, g[3]}}));
  lists.push_back(make_edge_list(RelationKind::GeneDrug, {{g[4], c}}));
  lists.push_back(make_edge_list(RelationKind::DiseaseDrug, {{d, c}}));
  const auto r = assemble(lists, RelationKind::DiseaseDrug, labels);
  CHECK(r.graph.n_nodes() == 6);
  CHECK_FALSE(r.graph.labels.find("gene::g0").has_value());
  CHECK(r.graph.positives.size() == 1);
  CHECK(r.report.dropped_nodes == 3);
  CHECK(r.report.components == 2);
  CHECK(r.graph.relations.back().kind == RelationKind::SelfLoop);
}

TEST_CASE("assemble on a connected graph keeps every node") {
  LabelTable labels;
  const auto d = labels.intern(NodeKind::Disease, "disease::d");
  const auto g = labels.intern(NodeKind::Gene, "gene::g");
  const auto c = labels.intern(NodeKind::Drug, "drug::c");
  std::vector<EdgeList> lists{make_edge_list(RelationKind::DiseaseGene, {{d, g}}),
                              make_edge_list(RelationKind::GeneDrug, {{g, c}}),
                              make_edge_list(RelationKind::DiseaseDrug, {{d, c}})};
  const auto r = assemble(lists, RelationKind::DiseaseDrug, labels);
  CHECK(r.graph.n_nodes() == 3);
  CHECK(r.report.dropped_nodes == 0);
}

TEST_CASE("assemble errors") {
  LabelTable labels;
  const auto d = labels.intern(NodeKind::Disease, "disease::d");
  const auto g = labels.intern(NodeKind::Gene, "gene::g");
  const auto c = labels.intern(NodeKind::Drug, "drug::c");
  const auto c2 = labels.intern(NodeKind::Drug, "drug::c2");
  const auto g2 = labels.intern(NodeKind::Gene, "gene::g2");
  // positive whose drug sits in a dropped component
  std::vector<EdgeList> lists{make_edge_list(RelationKind::DiseaseGene, {{d, g}}),
                              make_edge_list(RelationKind::GeneDrug, {{g2, c2}}),
                              make_edge_list(RelationKind::GeneGene, {{g, labels.intern(NodeKind::Gene, "gene::g3")}}),
                              make_edge_list(RelationKind::DiseaseDrug, {{d, c2}})};
  CHECK_THROWS_AS(assemble(lists, RelationKind::DiseaseDrug, labels), InputError);
  std::vector<EdgeList> no_target{make_edge_list(RelationKind::DiseaseGene, {{d, g}})};
  CHECK_THROWS_AS(assemble(no_target, RelationKind::DiseaseDrug, labels), InputError);
  (void)c;
}

TEST_CASE("largest component matches all-pairs reachability oracle") {
  std::mt19937_64 rng(303);
  int checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    LabelTable labels;
    std::vector<NodeId> dis, drug, gene;
    for (int i = 0; i < 6; ++i) dis.push_back(labels.intern(NodeKind::Disease, "disease::d" + std::to_string(i)));
    for (int i = 0; i < 6; ++i) drug.push_back(labels.intern(NodeKind::Drug, "drug::c" + std::to_string(i)));
    for (int i = 0; i < 10; ++i) gene.push_back(labels.intern(NodeKind::Gene, "gene::g" + std::to_string(i)));
    std::bernoulli_distribution coin(0.04 + 0.002 * (trial % 40));
    auto draw = [&](RelationKind rel, const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
      std::vector<NodePair> pairs;
      for (auto x : a)
        for (auto y : b)
          if (x != y && coin(rng)) pairs.push_back({x, y});
      return make_edge_list(rel, pairs);
    };
    std::vector<EdgeList> lists{draw(RelationKind::DiseaseDisease, dis, dis), draw(RelationKind::DiseaseGene, dis, gene),
                                draw(RelationKind::GeneGene, gene, gene), draw(RelationKind::GeneDrug, gene, drug)};
    std::vector<NodePair> pos;
    for (auto x : dis)
      for (auto y : drug) pos.push_back({x, y});
    lists.push_back(make_edge_list(RelationKind::DiseaseDrug, pos));
    const auto expect = largest_component_oracle(labels.size(), lists, RelationKind::DiseaseDrug, labels);
    AssembleResult r;
    try {
      r = assemble(lists, RelationKind::DiseaseDrug, labels);
    } catch (const InputError&) {
      // all positives dropped or empty graph; oracle component then holds no disease-drug pair
      bool has_d = false, has_c = false;
      for (const auto& l : expect) has_d |= l.rfind("disease::", 0) == 0, has_c |= l.rfind("drug::", 0) == 0;
      CHECK_FALSE((has_d && has_c));
      continue;
    }
    const auto& kept = r.graph.labels.labels();
    REQUIRE(std::set<std::string>(kept.begin(), kept.end()) == expect);
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("bundle round trip and hash stability") {
  std::mt19937_64 rng(9);
  auto rg = graphix::testing::random_graph({}, rng);
  rg.graph.disease_groups["x"] = {"disease::d0"};
  TempDir dir;
  save_graph_bundle(rg.graph, dir.file("g.bin"));
  const auto back = load_graph_bundle(dir.file("g.bin"));
  CHECK(back.serialize() == rg.graph.serialize());
  CHECK(back.content_hash() == rg.graph.content_hash());
  CHECK(back.disease_groups == rg.graph.disease_groups);
  CHECK(back.positives == rg.graph.positives);
  CHECK_THROWS_AS(KnowledgeGraph::deserialize("GRAPHIXX", "mem"), InputError);
}

TEST_CASE("label resolution") {
  std::mt19937_64 rng(9);
  const auto rg = graphix::testing::random_graph({}, rng);
  CHECK(resolve_label(rg.graph, "gene::g1") == rg.graph.labels.find("gene::g1"));
  CHECK(resolve_label(rg.graph, "g1") == rg.graph.labels.find("gene::g1"));
  CHECK_FALSE(resolve_label(rg.graph, "nope").has_value());
}

TEST_CASE("manifest build with mesh expansion") {
  TempDir dir;
  dir.write("mesh.tsv", "Lung Neoplasms\tC04.588.894\nLung Neoplasms\tC08.381.540\nNeoplasms\tC04\nNeoplasms By Site\tC04.588\nGhost\tC99\n");
  dir.write("dg.tsv", "Lung Neoplasms\tEGFR\nNeoplasms\tEGFR\nNeoplasms By Site\tKRAS\nUnmapped\tKRAS\n");
  dir.write("gg.tsv", "EGFR\tKRAS\n");
  dir.write("gd.tsv", "EGFR\tgefitinib\nKRAS\tsotorasib\n");
  dir.write("dd.tsv", "Lung Neoplasms\tgefitinib\n");
  const auto manifest = dir.write("m.json", R"({"target": "disease_drug",
    "relations": {"disease_gene": "dg.tsv", "gene_gene": "gg.tsv", "gene_drug": "gd.tsv", "disease_drug": "dd.tsv"},
    "mesh_mapping": "mesh.tsv", "mesh_tree_edges": true, "prune_upward": true})");
  const auto r = build_from_manifest(manifest);
  const auto& g = r.graph;
  // both tree numbers of the lung disease are target endpoints
  CHECK(g.positives.size() == 2);
  REQUIRE(g.disease_groups.count("Lung Neoplasms") == 1);
  CHECK(g.disease_groups.at("Lung Neoplasms").size() == 2);
  // C04 - EGFR is pruned since C04.588.894 also links EGFR
  const auto c04 = g.labels.find("mesh::C04");
  const auto egfr = g.labels.find("gene::EGFR");
  REQUIRE(c04.has_value());
  REQUIRE(egfr.has_value());
  CHECK(g.adjacency(RelationKind::DiseaseGene).at(*c04, *egfr) == 0.0);
  // tree edge C04.588 - C04 present
  const auto c04588 = g.labels.find("mesh::C04.588");
  REQUIRE(c04588.has_value());
  CHECK(g.adjacency(RelationKind::DiseaseDisease).at(*c04588, *c04) == 1.0);
  bool skipped_unmapped = false;
  for (const auto& s : r.report.skipped) skipped_unmapped |= s.entity == "Unmapped";
  CHECK(skipped_unmapped);
  CHECK(r.report.graph_hash == g.content_hash());
  // report counts agree with the graph
  std::size_t nodes = 0;
  for (const auto& [k, v] : r.report.node_kinds) nodes += v;
  CHECK(nodes == g.n_nodes());
}

TEST_CASE("manifest errors name the file") {
  TempDir dir;
  const auto manifest = dir.write("m.json", R"({"target": "disease_drug", "relations": {"gene_gene": "nope.tsv"}})");
  try {
    build_from_manifest(manifest);
    FAIL("expected error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("nope.tsv") != std::string::npos);
  }
}
