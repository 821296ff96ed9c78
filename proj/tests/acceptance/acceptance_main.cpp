// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "corpus.hpp"
#include "differential.hpp"
#include "fixtures.hpp"
#include "lineage_forge/graph_model.hpp"
#include "lineage_forge/lineage_engine.hpp"
#include "lineage_forge/pipeline.hpp"
#include "lineage_forge/sql_frontend.hpp"

namespace lf = lineage_forge;

namespace {

// Tolerances.
constexpr double kGoldenSeconds = 1.0;
constexpr double kDifferentialSeconds = 300.0;
constexpr double kScaleSeconds = 10.0;
constexpr std::size_t kDifferentialQueries = 200;
constexpr int kDifferentialMaxRows = 50;
constexpr int kScaleViews = 70;
constexpr int kScaleBases = 26;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool condition, const std::string& what) {
    if (!condition) {
      pass = false;
      detail << " [" << what << "]";
    }
  }
};

lf::ColumnRef cr(const std::string& s) { return lf::ColumnRef::parse(s); }

std::set<lf::ColumnRef> refs(std::initializer_list<const char*> names) {
  std::set<lf::ColumnRef> out;
  for (const char* n : names) out.insert(cr(n));
  return out;
}

void golden(Outcome& o) {
  const auto start = Clock::now();
  const auto result = lf::run_pipeline(lf::testing::example1_script());
  const std::string json = lf::to_json(result.graph);
  const double elapsed = seconds_since(start);

  const auto& lineages = result.schedule.lineages;
  o.require(lineages.count("webinfo") && lineages.count("webact") && lineages.count("info"), "all three extracted");
  if (!o.pass) return;
  const auto& webinfo = lineages.at("webinfo");
  const std::vector<lf::OutputColumn> webinfo_outputs{{"wcid", refs({"customers.cid"})},
                                                      {"wdate", refs({"web.date"})},
                                                      {"wpage", refs({"web.page"})},
                                                      {"wreg", refs({"web.reg"})}};
  o.require(webinfo.outputs == webinfo_outputs, "webinfo outputs");
  o.require(webinfo.referenced == refs({"customers.cid", "web.cid", "web.date"}), "webinfo referenced");

  const auto& webact = lineages.at("webact");
  o.require(webact.outputs.size() == 4, "webact has 4 outputs");
  for (const auto& out : webact.outputs) {
    o.require(out.name != "page" && out.name != "*", "no page column or placeholder in webact");
    for (const auto& c : out.contributors) o.require(c.column != "*", "no star contributor in webact");
  }
  const auto upstream = lf::upstream_closure(result.graph, cr("webact.wpage"));
  o.require(upstream.count(cr("web.page")) && upstream.count(cr("customers.cid")), "webact traces to web and customers");

  const auto& info_node = result.graph.nodes().at("info");
  o.require(info_node.columns.size() == 7, "info has 7 columns");
  for (const char* c : {"wcid", "wdate", "wpage", "wreg"}) {
    const auto it = result.graph.edge_map().find({lf::ColumnRef{"webact", c}, lf::ColumnRef{"info", c}});
    o.require(it != result.graph.edge_map().end() &&
                  (it->second == lf::EdgeKind::Contributes || it->second == lf::EdgeKind::Both),
              std::string("webact.") + c + " contributes to info");
  }
  o.require(json == lf::testing::read_fixture("customer_lineage.json"), "byte-exact vs fixture");
  o.require(elapsed < kGoldenSeconds, "runtime");
  o.detail << " edges=" << result.graph.edge_count() << " time=" << elapsed << "s";
}

void impact(Outcome& o) {
  const auto graph = lf::run_pipeline(lf::testing::example1_script()).graph;
  std::set<lf::ColumnRef> expected{cr("webinfo.wpage")};
  for (const char* c : {"wcid", "wdate", "wpage", "wreg"}) expected.insert(lf::ColumnRef{"webact", c});
  for (const char* c : {"name", "age", "oid", "wcid", "wdate", "wpage", "wreg"}) expected.insert(lf::ColumnRef{"info", c});
  const auto closure = lf::downstream_closure(graph, cr("web.page"));
  o.require(closure == expected, "exact set");
  o.detail << " size=" << closure.size();
}

void trace(Outcome& o) {
  lf::Trace events;
  lf::ExtractOptions options;
  options.trace = &events;
  const auto statements = lf::split_script(lf::testing::example1_script());
  lf::extract(lf::parse_statement(statements.at(2)), lf::SchemaCatalog{}, lf::QueryDictionary{}, options);
  const lf::Trace expected{
      {lf::Rule::ScanTable, "customers", {}},
      {lf::Rule::ScanTable, "web", {}},
      {lf::Rule::Join, "INNER", {cr("customers.cid"), cr("web.cid")}},
      {lf::Rule::Filter, "", {cr("web.date")}},
      {lf::Rule::Project, "wcid,wdate,wpage,wreg", {cr("customers.cid"), cr("web.date"), cr("web.page"), cr("web.reg")}},
  };
  o.require(events == expected, "sequence");
  for (const auto& e : events) o.detail << " " << lf::to_string(e.rule) << "(" << e.subject << ")";
}

void scheduler(Outcome& o) {
  const auto result = lf::run_pipeline(lf::testing::example1_script());
  o.require(result.schedule.order == std::vector<std::string>{"webinfo", "webact", "info"}, "order");
  o.require(result.schedule.deferrals == 2, "2 deferrals");

  const auto cyclic = lf::run_pipeline(lf::testing::read_fixture("cyclic.sql"));
  o.require(cyclic.graph.diagnostics().has_code(lf::codes::kCyclicDependency), "CyclicDependency reported");
  o.require(cyclic.schedule.lineages.count("report") == 1, "acyclic query resolved");
  o.require(cyclic.schedule.excluded == std::set<std::string>{"v1", "v2"}, "cycle members excluded");
  o.detail << " deferrals=" << result.schedule.deferrals;
}

void differential(Outcome& o) {
  const auto start = Clock::now();
  lf::testing::DifferentialOptions options;
  options.seed = 2024;
  options.queries = kDifferentialQueries;
  options.max_rows = kDifferentialMaxRows;
  const auto declared = lf::testing::run_differential(options);
  options.seed = 2025;
  options.declared_schema = false;
  const auto observed = lf::testing::run_differential(options);
  const double elapsed = seconds_since(start);

  // The oracle must be able to fail: without referenced sets it has to flag
  // violations on the same query stream.
  options.seed = 2024;
  options.declared_schema = true;
  options.drop_referenced = true;
  const auto blind = lf::testing::run_differential(options);

  for (const auto* report : {&declared, &observed}) {
    o.require(report->failures.empty(), "zero violations");
    o.require(report->queries >= kDifferentialQueries, "query count");
    for (std::size_t i = 0; i < report->failures.size() && i < 3; ++i) o.detail << "\n    " << report->failures[i];
  }
  o.require(declared.checked >= kDifferentialQueries, "all declared-schema queries checked");
  o.require(!blind.failures.empty(), "self-check detects dropped referenced sets");
  o.require(elapsed < kDifferentialSeconds, "runtime");
  o.detail << " checked=" << declared.checked << "+" << observed.checked << " changed_outputs="
           << declared.changed_outputs + observed.changed_outputs << " self_check_violations=" << blind.failures.size()
           << " time=" << elapsed << "s";
}

void determinism(Outcome& o) {
  for (const char* fixture : {"customer.sql", "cyclic.sql", "diamond.sql"}) {
    const std::string text = lf::testing::read_fixture(fixture);
    const std::string a = lf::to_json(lf::run_pipeline(text).graph);
    const std::string b = lf::to_json(lf::run_pipeline(text).graph);
    o.require(a == b, std::string(fixture) + " byte-identical");
    o.require(lf::to_json(lf::from_json(a)) == a && lf::from_json(a) == lf::run_pipeline(text).graph,
              std::string(fixture) + " round-trip");
  }
  const std::string golden = lf::testing::read_fixture("customer_lineage.json");
  o.require(lf::to_json(lf::from_json(golden)) == golden, "customer_lineage.json round-trip");
}

void scale(Outcome& o) {
  const auto corpus = lf::testing::synthetic_corpus(70, kScaleViews, kScaleBases);
  const auto start = Clock::now();
  const auto result = lf::run_pipeline(corpus.script);
  const std::string json = lf::to_json(result.graph);
  const double elapsed = seconds_since(start);

  std::set<std::string> bases;
  for (const auto& [rel, node] : result.graph.nodes()) {
    if (node.kind == lf::NodeKind::Base) bases.insert(rel);
  }
  o.require(!result.graph.diagnostics().has_errors(), "zero error diagnostics");
  o.require(result.schedule.order.size() == static_cast<std::size_t>(kScaleViews), "every view resolved");
  o.require(bases.size() <= static_cast<std::size_t>(kScaleBases), "base tables");
  std::map<std::string, std::size_t> position;
  for (std::size_t i = 0; i < result.schedule.order.size(); ++i) position[result.schedule.order[i]] = i;
  bool topological = position.size() == corpus.view_deps.size();
  for (const auto& [view, deps] : corpus.view_deps) {
    for (const auto& d : deps) topological = topological && position.count(view) && position.count(d) && position[d] < position[view];
  }
  o.require(topological, "topological order");
  o.require(elapsed < kScaleSeconds, "runtime");
  o.detail << " views=" << result.schedule.order.size() << " bases=" << bases.size() << " edges="
           << result.graph.edge_count() << " deferrals=" << result.schedule.deferrals << " time=" << elapsed << "s";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"golden-example-1", golden},
      {"impact-closure", impact},
      {"traversal-trace", trace},
      {"scheduler-lifo", scheduler},
      {"differential-oracle", differential},
      {"determinism-round-trip", determinism},
      {"scale-smoke", scale},
  };
  bool all = true;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      check(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << o.detail.str() << std::endl;
  }
  return all ? 0 : 1;
}
