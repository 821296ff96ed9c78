#include "lineage_forge/graph_model.hpp"

#include <algorithm>
#include <deque>

#include <nlohmann/json.hpp>

namespace lineage_forge {

using nlohmann::json;

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Base: return "base";
    case NodeKind::View: return "view";
    case NodeKind::Query: return "query";
  }
  return "?";
}

namespace {

NodeKind node_kind_from_string(const std::string& text) {
  if (text == "base") return NodeKind::Base;
  if (text == "view") return NodeKind::View;
  if (text == "query") return NodeKind::Query;
  throw std::invalid_argument("unknown node kind '" + text + "'");
}

const std::vector<ColumnRef>& empty_columns() {
  static const std::vector<ColumnRef> empty;
  return empty;
}

}  // namespace

void LineageGraph::add_node(const std::string& relation, NodeKind kind, const std::vector<std::string>& columns) {
  auto [it, inserted] = nodes_.try_emplace(relation);
  if (inserted) it->second.kind = kind;
  auto& cols = it->second.columns;
  for (const auto& c : columns) {
    if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(c);
  }
}

void LineageGraph::ensure_slot(const ColumnRef& column) {
  auto it = nodes_.find(column.relation);
  if (it == nodes_.end()) {
    add_node(column.relation, NodeKind::Base, {column.column});
    return;
  }
  auto& cols = it->second.columns;
  if (std::find(cols.begin(), cols.end(), column.column) == cols.end()) cols.push_back(column.column);
}

void LineageGraph::add_edge(const ColumnRef& src, const ColumnRef& dst, EdgeKind kind) {
  ensure_slot(src);
  ensure_slot(dst);
  auto [it, inserted] = edges_.try_emplace({src, dst}, kind);
  if (!inserted) {
    it->second = merge_kinds(it->second, kind);
    return;
  }
  out_[src].push_back(dst);
  in_[dst].push_back(src);
}

std::vector<Edge> LineageGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edges_.size());
  for (const auto& [key, kind] : edges_) out.push_back({key.first, key.second, kind});
  return out;
}

bool LineageGraph::has_column(const ColumnRef& column) const {
  auto it = nodes_.find(column.relation);
  if (it == nodes_.end()) return false;
  const auto& cols = it->second.columns;
  return std::find(cols.begin(), cols.end(), column.column) != cols.end();
}

std::vector<ColumnRef> LineageGraph::all_columns() const {
  std::vector<ColumnRef> out;
  for (const auto& [relation, node] : nodes_) {
    for (const auto& c : node.columns) out.push_back({relation, c});
  }
  return out;
}

const std::vector<ColumnRef>& LineageGraph::successors(const ColumnRef& column) const {
  auto it = out_.find(column);
  return it == out_.end() ? empty_columns() : it->second;
}

const std::vector<ColumnRef>& LineageGraph::predecessors(const ColumnRef& column) const {
  auto it = in_.find(column);
  return it == in_.end() ? empty_columns() : it->second;
}

LineageGraph merge(const std::map<std::string, QueryLineage>& lineages, const QueryDictionary& qd,
                   const SchemaCatalog& catalog, const Diagnostics& diagnostics) {
  LineageGraph graph;
  for (const auto& [id, lineage] : lineages) {
    const QueryEntry* entry = qd.find(id);
    const bool is_view = !entry || entry->origin == QueryOrigin::CreateView ||
                         entry->origin == QueryOrigin::CreateTableAs;
    std::vector<std::string> columns;
    for (const auto& o : lineage.outputs) columns.push_back(o.name);
    graph.add_node(id, is_view ? NodeKind::View : NodeKind::Query, columns);
  }
  for (const auto& [id, lineage] : lineages) {
    for (const auto& relation : lineage.tables) {
      if (graph.has_relation(relation)) continue;
      std::vector<std::string> columns;
      if (const CatalogEntry* e = catalog.entry(relation)) columns = e->columns;
      graph.add_node(relation, qd.find(relation) ? NodeKind::View : NodeKind::Base, columns);
    }
  }
  for (const auto& [id, lineage] : lineages) {
    for (const auto& o : lineage.outputs) {
      const ColumnRef dst{id, o.name};
      for (const auto& edge : classify(o, lineage.referenced)) graph.add_edge(edge.source, dst, edge.kind);
    }
  }
  graph.diagnostics().append(diagnostics);
  return graph;
}

namespace {

std::set<ColumnRef> closure(const LineageGraph& graph, const ColumnRef& seed, bool downstream) {
  if (!graph.has_column(seed)) throw UnknownColumn(seed.str());
  std::set<ColumnRef> seen;
  std::deque<ColumnRef> queue{seed};
  while (!queue.empty()) {
    const ColumnRef current = queue.front();
    queue.pop_front();
    for (const auto& next : downstream ? graph.successors(current) : graph.predecessors(current)) {
      if (next != seed && seen.insert(next).second) queue.push_back(next);
    }
  }
  return seen;
}

}  // namespace

std::set<ColumnRef> downstream_closure(const LineageGraph& graph, const ColumnRef& seed) {
  return closure(graph, seed, true);
}

std::set<ColumnRef> upstream_closure(const LineageGraph& graph, const ColumnRef& seed) {
  return closure(graph, seed, false);
}

std::set<std::string> neighbors(const LineageGraph& graph, const std::string& relation, Direction direction) {
  if (!graph.has_relation(relation)) throw UnknownRelation(relation);
  std::set<std::string> out;
  for (const auto& [key, kind] : graph.edge_map()) {
    const auto& [src, dst] = key;
    if (direction == Direction::Downstream && src.relation == relation && dst.relation != relation) {
      out.insert(dst.relation);
    } else if (direction == Direction::Upstream && dst.relation == relation && src.relation != relation) {
      out.insert(src.relation);
    }
  }
  return out;
}

std::string to_json(const LineageGraph& graph) {
  json doc;
  doc["version"] = 1;
  doc["nodes"] = json::object();
  for (const auto& [relation, node] : graph.nodes()) {
    doc["nodes"][relation] = {{"kind", to_string(node.kind)}, {"columns", node.columns}};
  }
  doc["edges"] = json::array();
  for (const auto& edge : graph.edges()) {
    doc["edges"].push_back({{"src", edge.src.str()}, {"dst", edge.dst.str()}, {"kind", to_string(edge.kind)}});
  }
  doc["diagnostics"] = json::array();
  for (const auto& d : graph.diagnostics()) {
    doc["diagnostics"].push_back(
        {{"severity", to_string(d.severity)}, {"code", d.code}, {"message", d.message}, {"query", d.query}});
  }
  return doc.dump(2) + "\n";
}

LineageGraph from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed lineage document: ") + e.what());
  }
  try {
    if (doc.at("version").get<int>() != 1) throw std::invalid_argument("unsupported lineage document version");
    LineageGraph graph;
    for (const auto& [relation, node] : doc.at("nodes").items()) {
      graph.add_node(relation, node_kind_from_string(node.at("kind").get<std::string>()),
                     node.at("columns").get<std::vector<std::string>>());
    }
    for (const auto& e : doc.at("edges")) {
      auto kind = edge_kind_from_string(e.at("kind").get<std::string>());
      if (!kind) throw std::invalid_argument("unknown edge kind");
      graph.add_edge(ColumnRef::parse(e.at("src").get<std::string>()), ColumnRef::parse(e.at("dst").get<std::string>()),
                     *kind);
    }
    for (const auto& d : doc.at("diagnostics")) {
      const std::string severity = d.at("severity").get<std::string>();
      if (severity != "warning" && severity != "error") throw std::invalid_argument("unknown severity");
      graph.diagnostics().add({severity == "error" ? Severity::Error : Severity::Warning, d.at("code").get<std::string>(),
                               d.at("message").get<std::string>(), d.at("query").get<std::string>()});
    }
    return graph;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed lineage document: ") + e.what());
  }
}

}  // namespace lineage_forge
