#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace lineage_forge;

int main(int argc, char** argv) {
  CLI::App app{"lineage-forge: static column-level lineage for SQL query logs"};
  app.require_subcommand(1);

  cli::RunConfig config;
  std::vector<std::string> inputs;
  std::string schema;
  std::string output_dir = ".";
  bool random_ids = false;

  auto* extract = app.add_subcommand("extract", "extract lineage into lineage.json and index.html");
  extract->add_option("inputs", inputs, "SQL files or directories ('-' for stdin)")->required();
  extract->add_option("-o,--output", output_dir, "output directory");
  extract->add_option("--schema", schema, "schema file with `table(col, ...)` lines")->check(CLI::ExistingFile);
  extract->add_flag("--strict", config.strict, "exit 2 when any statement fails to parse");
  extract->add_flag("--random-ids", random_ids, "random suffixes for unnamed query identifiers");

  std::string column;
  bool upstream = false;
  auto* impact = app.add_subcommand("impact", "print the transitive downstream (or upstream) closure of a column");
  impact->add_option("column", column, "column as rel.col")->required();
  impact->add_flag("--up", upstream, "follow edges upstream instead");
  impact->add_option("-o,--output", output_dir, "directory holding lineage.json");
  impact->add_option("-i,--input", inputs, "extract these inputs instead of reading lineage.json");
  impact->add_option("--schema", schema, "schema file")->check(CLI::ExistingFile);

  int port = 0;
  auto* serve = app.add_subcommand("serve", "serve the lineage viewer over HTTP");
  serve->add_option("-o,--output", output_dir, "directory holding lineage.json");
  serve->add_option("-i,--input", inputs, "extract these inputs instead of reading lineage.json");
  serve->add_option("--schema", schema, "schema file")->check(CLI::ExistingFile);
  auto* port_opt = serve->add_option("--port", port, "port (default 8275 or $LINEAGE_FORGE_PORT)")
                       ->check(CLI::Range(1, 65535));

  CLI11_PARSE(app, argc, argv);

  for (const auto& i : inputs) config.inputs.emplace_back(i);
  if (!schema.empty()) config.schema_file = schema;
  config.output_dir = output_dir;
  config.deterministic_ids = !random_ids;
  if (port_opt->count()) config.serve_port = port;

  if (extract->parsed()) return cli::cmd_extract(config, std::cout, std::cerr, std::cin);
  if (impact->parsed()) {
    return cli::cmd_impact(config, column, upstream ? Direction::Upstream : Direction::Downstream, std::cout,
                           std::cerr, std::cin);
  }
  return cli::cmd_serve(config, std::cout, std::cerr, std::cin);
}
