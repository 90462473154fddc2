//
//   Copyright 2026 The kes Authors
//
//   Licensed under the Apache License, Version 2.0 (the "License");
//   you may not use this file except in compliance with the License.
//   You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
//   Unless required by applicable law or agreed to in writing, software
//   distributed under the License is distributed on an "AS IS" BASIS,
//   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//   See the License for the specific language governing permissions and
//   limitations under the License.
//

#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "kes/hashing.hpp"

namespace kes {

struct ConceptId {
  std::int32_t value = -1;
  friend auto operator<=>(const ConceptId&, const ConceptId&) = default;
};

struct RelationId {
  std::int32_t value = -1;
  friend auto operator<=>(const RelationId&, const RelationId&) = default;
};

struct Triple {
  ConceptId head;
  RelationId relation;
  ConceptId tail;
  friend auto operator<=>(const Triple&, const Triple&) = default;
};

enum class EdgeDir { out = 0, in = 1 };

struct NeighborEdge {
  RelationId relation;
  ConceptId neighbor;
  EdgeDir direction;
  friend auto operator<=>(const NeighborEdge&, const NeighborEdge&) = default;
};

// Lowercases ASCII letters and maps spaces to underscores; ConceptNet-style
// labels use underscores while text uses spaces.
inline std::string normalize_label(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    if (c == ' ')
      out.push_back('_');
    else if (c >= 'A' && c <= 'Z')
      out.push_back(static_cast<char>(c - 'A' + 'a'));
    else
      out.push_back(c);
  }
  return out;
}

// Immutable multi-relational directed graph: interned concepts and
// relations, a deduplicated triple set, and mutually consistent out/in
// adjacency indices. Safe for concurrent reads once built.
class KnowledgeGraph {
 public:
  using RawTriple = std::tuple<std::string, std::string, std::string>;

  static KnowledgeGraph from_triples(const std::vector<RawTriple>& raw) {
    KnowledgeGraph g;
    std::vector<Triple> triples;
    triples.reserve(raw.size());
    for (const auto& [h, r, t] : raw) {
      triples.push_back(Triple{g.intern_concept(normalize_label(h)),
                               g.intern_relation(normalize_label(r)),
                               g.intern_concept(normalize_label(t))});
    }
    g.finish(std::move(triples));
    return g;
  }

  std::size_t num_concepts() const { return concept_labels_.size(); }
  std::size_t num_relations() const { return relation_labels_.size(); }
  std::size_t num_triples() const { return triples_.size(); }

  bool valid(ConceptId c) const {
    return c.value >= 0 &&
           static_cast<std::size_t>(c.value) < concept_labels_.size();
  }

  std::optional<ConceptId> find_concept(std::string_view normalized) const {
    auto it = concept_ids_.find(std::string(normalized));
    if (it == concept_ids_.end()) return std::nullopt;
    return ConceptId{it->second};
  }

  std::optional<RelationId> find_relation(std::string_view normalized) const {
    auto it = relation_ids_.find(std::string(normalized));
    if (it == relation_ids_.end()) return std::nullopt;
    return RelationId{it->second};
  }

  const std::string& concept_label(ConceptId c) const {
    check(c);
    return concept_labels_[static_cast<std::size_t>(c.value)];
  }

  const std::string& relation_label(RelationId r) const {
    if (r.value < 0 || static_cast<std::size_t>(r.value) >= relation_labels_.size())
      throw std::invalid_argument("unknown relation id");
    return relation_labels_[static_cast<std::size_t>(r.value)];
  }

  const std::vector<Triple>& triples() const { return triples_; }

  // (relation, tail) pairs, sorted.
  const std::vector<std::pair<RelationId, ConceptId>>& out_edges(ConceptId c) const {
    check(c);
    return out_index_[static_cast<std::size_t>(c.value)];
  }

  // (relation, head) pairs, sorted.
  const std::vector<std::pair<RelationId, ConceptId>>& in_edges(ConceptId c) const {
    check(c);
    return in_index_[static_cast<std::size_t>(c.value)];
  }

  // Union of out- and in-edges of c, sorted by (relation, neighbor,
  // direction) with out before in.
  std::vector<NeighborEdge> neighbors(ConceptId c) const {
    check(c);
    std::vector<NeighborEdge> result;
    const auto& outs = out_index_[static_cast<std::size_t>(c.value)];
    const auto& ins = in_index_[static_cast<std::size_t>(c.value)];
    result.reserve(outs.size() + ins.size());
    for (const auto& [r, t] : outs)
      result.push_back(NeighborEdge{r, t, EdgeDir::out});
    for (const auto& [r, h] : ins)
      result.push_back(NeighborEdge{r, h, EdgeDir::in});
    std::sort(result.begin(), result.end(),
              [](const NeighborEdge& a, const NeighborEdge& b) {
                return std::tie(a.relation, a.neighbor, a.direction) <
                       std::tie(b.relation, b.neighbor, b.direction);
              });
    return result;
  }

  // Content hash over labels and triples; cache keys depend on it.
  std::uint64_t fingerprint() const { return fingerprint_; }

 private:
  friend KnowledgeGraph load_graph(const std::string& path);

  ConceptId intern_concept(const std::string& label) {
    auto it = concept_ids_.find(label);
    if (it != concept_ids_.end()) return ConceptId{it->second};
    auto id = static_cast<std::int32_t>(concept_labels_.size());
    concept_ids_.emplace(label, id);
    concept_labels_.push_back(label);
    return ConceptId{id};
  }

  RelationId intern_relation(const std::string& label) {
    auto it = relation_ids_.find(label);
    if (it != relation_ids_.end()) return RelationId{it->second};
    auto id = static_cast<std::int32_t>(relation_labels_.size());
    relation_ids_.emplace(label, id);
    relation_labels_.push_back(label);
    return RelationId{id};
  }

  void finish(std::vector<Triple> triples) {
    std::sort(triples.begin(), triples.end());
    triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
    triples_ = std::move(triples);

    out_index_.assign(concept_labels_.size(), {});
    in_index_.assign(concept_labels_.size(), {});
    for (const Triple& t : triples_) {
      out_index_[static_cast<std::size_t>(t.head.value)].emplace_back(t.relation, t.tail);
      in_index_[static_cast<std::size_t>(t.tail.value)].emplace_back(t.relation, t.head);
    }
    for (auto& v : out_index_) std::sort(v.begin(), v.end());
    for (auto& v : in_index_) std::sort(v.begin(), v.end());

    std::uint64_t h = fnv1a64("kes-graph");
    for (const auto& label : concept_labels_) h = fnv1a64(label, h + 1);
    for (const auto& label : relation_labels_) h = fnv1a64(label, h + 2);
    for (const Triple& t : triples_) {
      h = fnv1a64_u64(static_cast<std::uint64_t>(t.head.value), h);
      h = fnv1a64_u64(static_cast<std::uint64_t>(t.relation.value), h);
      h = fnv1a64_u64(static_cast<std::uint64_t>(t.tail.value), h);
    }
    fingerprint_ = h;
  }

  void check(ConceptId c) const {
    if (!valid(c)) throw std::invalid_argument("unknown concept id");
  }

  std::unordered_map<std::string, std::int32_t> concept_ids_;
  std::vector<std::string> concept_labels_;
  std::unordered_map<std::string, std::int32_t> relation_ids_;
  std::vector<std::string> relation_labels_;
  std::vector<Triple> triples_;
  std::vector<std::vector<std::pair<RelationId, ConceptId>>> out_index_;
  std::vector<std::vector<std::pair<RelationId, ConceptId>>> in_index_;
  std::uint64_t fingerprint_ = 0;
};

namespace detail {

inline std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace detail

// Triple file: UTF-8, one triple per line, exactly two TAB separators,
// '#' lines ignored. Duplicate triples are collapsed so that transition
// probabilities and convolution sums never double-count an edge.
inline KnowledgeGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open triple file: " + path);

  KnowledgeGraph g;
  std::vector<Triple> triples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::strip_cr(std::move(line));
    if (line.empty() || line[0] == '#') continue;

    std::size_t tab1 = line.find('\t');
    std::size_t tab2 = tab1 == std::string::npos ? std::string::npos
                                                 : line.find('\t', tab1 + 1);
    std::size_t tab3 = tab2 == std::string::npos ? std::string::npos
                                                 : line.find('\t', tab2 + 1);
    if (tab1 == std::string::npos || tab2 == std::string::npos ||
        tab3 != std::string::npos)
      throw std::runtime_error(path + ": parse error at line " +
                               std::to_string(line_no) +
                               ": expected 3 tab-separated fields");
    std::string head = line.substr(0, tab1);
    std::string rel = line.substr(tab1 + 1, tab2 - tab1 - 1);
    std::string tail = line.substr(tab2 + 1);
    if (head.empty() || rel.empty() || tail.empty())
      throw std::runtime_error(path + ": parse error at line " +
                               std::to_string(line_no) + ": empty field");
    triples.push_back(Triple{g.intern_concept(normalize_label(head)),
                             g.intern_relation(normalize_label(rel)),
                             g.intern_concept(normalize_label(tail))});
  }
  g.finish(std::move(triples));
  return g;
}

// Node embedding table. Concepts present in the file get file vectors;
// everything else gets a deterministic fallback that depends only on
// (seed, label), never on load order.
class EmbeddingTable {
 public:
  static constexpr double kFallbackHalfWidth = 0.5;

  EmbeddingTable(int dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
    if (dim <= 0) throw std::invalid_argument("embedding dim must be positive");
  }

  static EmbeddingTable all_fallback(const KnowledgeGraph& graph, int dim,
                                     std::uint64_t seed) {
    EmbeddingTable t(dim, seed);
    t.materialize(graph);
    return t;
  }

  int dim() const { return dim_; }
  std::uint64_t seed() const { return seed_; }

  bool covered(ConceptId c) const {
    return static_cast<std::size_t>(c.value) < from_file_.size() &&
           from_file_[static_cast<std::size_t>(c.value)];
  }

  // Fraction of concepts with file-provided vectors; 1.0 for an empty graph.
  double coverage() const {
    if (vectors_.empty()) return 1.0;
    std::size_t n = 0;
    for (bool b : from_file_) n += b ? 1 : 0;
    return static_cast<double>(n) / static_cast<double>(vectors_.size());
  }

  const Vec& vector(ConceptId c) const {
    if (static_cast<std::size_t>(c.value) >= vectors_.size())
      throw std::invalid_argument("embedding lookup: unknown concept id");
    return vectors_[static_cast<std::size_t>(c.value)];
  }

  // Entries uniform in [-0.5/dim, +0.5/dim), seeded by hashing (seed, label).
  Vec fallback_vector(std::string_view label) const {
    DetRng rng(label_seed(seed_, label));
    Vec v(static_cast<std::size_t>(dim_));
    const double scale = 1.0 / static_cast<double>(dim_);
    for (double& x : v) x = (rng.next_double() - kFallbackHalfWidth) * scale;
    return v;
  }

 private:
  friend EmbeddingTable load_embeddings(const std::string& path,
                                        const KnowledgeGraph& graph, int dim,
                                        std::uint64_t seed);

  void materialize(const KnowledgeGraph& graph) {
    vectors_.resize(graph.num_concepts());
    from_file_.resize(graph.num_concepts(), false);
    for (std::size_t i = 0; i < graph.num_concepts(); ++i) {
      if (!from_file_[i])
        vectors_[i] =
            fallback_vector(graph.concept_label(ConceptId{static_cast<std::int32_t>(i)}));
    }
  }

  int dim_;
  std::uint64_t seed_;
  std::vector<Vec> vectors_;
  std::vector<bool> from_file_;
};

using Vec = std::vector<double>;

// Embedding file: one entry per line, label followed by dim reals.
// Labels not present in the graph are ignored; every line is still
// validated against the declared dimension.
inline EmbeddingTable load_embeddings(const std::string& path,
                                      const KnowledgeGraph& graph, int dim,
                                      std::uint64_t seed) {
  if (dim <= 0) throw std::invalid_argument("embedding dim must be positive");
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embedding file: " + path);

  EmbeddingTable t(dim, seed);
  t.vectors_.resize(graph.num_concepts());
  t.from_file_.resize(graph.num_concepts(), false);

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = detail::strip_cr(std::move(line));
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string label;
    ss >> label;
    Vec v;
    v.reserve(static_cast<std::size_t>(dim));
    double x;
    while (ss >> x) v.push_back(x);
    if (!ss.eof() || v.size() != static_cast<std::size_t>(dim))
      throw std::runtime_error(path + ": dimension mismatch at line " +
                               std::to_string(line_no) + ": expected " +
                               std::to_string(dim) + " values, got " +
                               std::to_string(v.size()));
    auto id = graph.find_concept(normalize_label(label));
    if (!id) continue;
    t.vectors_[static_cast<std::size_t>(id->value)] = std::move(v);
    t.from_file_[static_cast<std::size_t>(id->value)] = true;
  }
  t.materialize(graph);
  return t;
}

}  // namespace kes
