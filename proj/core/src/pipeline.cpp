#include "lineage_forge/pipeline.hpp"

#include "lineage_forge/sql_frontend.hpp"

namespace lineage_forge {

namespace {

std::string excerpt(const std::string& sql) {
  constexpr std::size_t kMax = 60;
  std::string out;
  for (char c : sql.substr(0, kMax)) out += (c == '\n' || c == '\r' || c == '\t') ? ' ' : c;
  if (sql.size() > kMax) out += "...";
  return out;
}

}  // namespace

PipelineResult run_pipeline(const std::vector<SourceText>& sources, SchemaCatalog catalog,
                            const PipelineOptions& options) {
  PipelineResult result;
  Diagnostics front;
  std::vector<LabeledStatement> statements;

  for (const auto& source : sources) {
    const std::string where = source.label ? *source.label : std::string{};
    std::vector<std::string> texts;
    try {
      texts = split_script(source.text);
    } catch (const ScriptError& e) {
      front.warn(e.code(), e.what(), where);
      ++result.parse_failures;
      continue;
    }
    for (const auto& text : texts) {
      try {
        statements.push_back({parse_statement(text), source.label});
      } catch (const UnsupportedStatement& e) {
        front.warn(codes::kUnsupportedStatement, std::string(e.what()) + ": skipped `" + excerpt(text) + "`", where);
        ++result.parse_failures;
      } catch (const ParseError& e) {
        front.warn(codes::kParseError,
                   "at offset " + std::to_string(e.position()) + ": " + e.what() + " in `" + excerpt(text) + "`",
                   where);
        ++result.parse_failures;
      }
    }
  }

  result.qd = register_statements(statements, front, options.registry);
  result.catalog = std::move(catalog);
  result.schedule = run_all(result.qd, result.catalog);

  Diagnostics all = front;
  all.append(result.schedule.diagnostics);
  result.graph = merge(result.schedule.lineages, result.qd, result.catalog, all);
  return result;
}

}  // namespace lineage_forge
