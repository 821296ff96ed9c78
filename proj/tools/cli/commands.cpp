#include "commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <httplib.h>

#include "lineage_forge/sql_frontend.hpp"

namespace lineage_forge::cli {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
}

bool is_sql_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".sql";
}

// Document served by `impact` and `serve`: inline extraction when inputs are
// given, otherwise the lineage.json of a previous run.
std::string load_document(const RunConfig& config, std::istream& in) {
  if (!config.inputs.empty()) return to_json(extract_from_config(config, in).graph);
  return read_file(config.output_dir / "lineage.json");
}

}  // namespace

std::vector<SourceText> read_inputs(const std::vector<fs::path>& inputs, std::istream& stdin_stream) {
  std::vector<SourceText> sources;
  for (const auto& input : inputs) {
    if (input == "-") {
      std::ostringstream buf;
      buf << stdin_stream.rdbuf();
      sources.push_back({buf.str(), std::nullopt});
      continue;
    }
    std::error_code ec;
    if (fs::is_directory(input, ec)) {
      std::vector<fs::path> files;
      for (const auto& entry : fs::recursive_directory_iterator(input)) {
        if (entry.is_regular_file() && is_sql_file(entry.path())) files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) sources.push_back({read_file(f), f.stem().string()});
    } else if (fs::is_regular_file(input, ec)) {
      sources.push_back({read_file(input), input.stem().string()});
    } else {
      throw std::runtime_error("input '" + input.string() + "' does not exist");
    }
  }
  return sources;
}

PipelineResult extract_from_config(const RunConfig& config, std::istream& stdin_stream) {
  SchemaCatalog catalog;
  Diagnostics schema_diagnostics;
  if (config.schema_file) load_schema_text(read_file(*config.schema_file), catalog, schema_diagnostics);

  PipelineOptions options;
  options.registry.random_ids = !config.deterministic_ids;
  PipelineResult result = run_pipeline(read_inputs(config.inputs, stdin_stream), std::move(catalog), options);
  if (!schema_diagnostics.empty()) {
    Diagnostics merged = schema_diagnostics;
    merged.append(result.graph.diagnostics());
    result.graph.diagnostics() = std::move(merged);
  }
  return result;
}

int cmd_extract(const RunConfig& config, std::ostream& out, std::ostream& err, std::istream& in) {
  try {
    if (config.inputs.empty()) {
      err << "error: at least one input is required\n";
      return kExitFailure;
    }
    PipelineResult result = extract_from_config(config, in);
    const std::string json = to_json(result.graph);
    fs::create_directories(config.output_dir);
    write_file(config.output_dir / "lineage.json", json);
    write_file(config.output_dir / "index.html", render_viewer_html(json));

    const auto& diags = result.graph.diagnostics();
    for (const auto& d : diags) {
      err << to_string(d.severity) << ": [" << d.code << "] " << (d.query.empty() ? "" : d.query + ": ")
          << d.message << "\n";
    }
    out << "Extracted " << result.schedule.lineages.size() << " queries, " << result.graph.nodes().size()
        << " nodes, " << result.graph.edge_count() << " edges -> " << (config.output_dir / "lineage.json").string()
        << "\n";
    if (diags.has_errors()) return kExitDiagnostics;
    if (config.strict && result.parse_failures > 0) return kExitDiagnostics;
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int cmd_impact(const RunConfig& config, const std::string& column, Direction direction, std::ostream& out,
               std::ostream& err, std::istream& in) {
  LineageGraph graph;
  try {
    graph = from_json(load_document(config, in));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }

  ColumnRef seed;
  try {
    seed = ColumnRef::parse(column);
    seed.relation = normalize_identifier(seed.relation);
    seed.column = normalize_identifier(seed.column);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }

  if (!graph.has_column(seed)) {
    err << "error: unknown column '" << seed.str() << "'\n";
    const auto suggestions = suggest_columns(graph, seed.str());
    if (!suggestions.empty()) {
      err << "did you mean:\n";
      for (const auto& s : suggestions) err << "  " << s << "\n";
    }
    return kExitFailure;
  }

  const auto closure =
      direction == Direction::Downstream ? downstream_closure(graph, seed) : upstream_closure(graph, seed);
  std::vector<std::string> names;
  for (const auto& c : closure) names.push_back(c.str());
  std::sort(names.begin(), names.end());
  for (const auto& n : names) out << n << "\n";
  return kExitOk;
}

int resolve_port(const std::optional<int>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("LINEAGE_FORGE_PORT")) {
    try {
      const int port = std::stoi(env);
      if (port > 0 && port < 65536) return port;
    } catch (const std::logic_error&) {
    }
  }
  return kDefaultPort;
}

int cmd_serve(const RunConfig& config, std::ostream& out, std::ostream& err, std::istream& in) {
  std::string json;
  try {
    json = load_document(config, in);
    (void)from_json(json);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  const int port = resolve_port(config.serve_port);
  ViewerServer server(json, render_viewer_html(json));
  if (!server.bind("127.0.0.1", port)) {
    err << "error: cannot bind 127.0.0.1:" << port << " (port busy?)\n";
    return kExitFailure;
  }
  out << "Serving lineage viewer at http://127.0.0.1:" << server.port() << std::endl;
  server.listen();
  return kExitOk;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t subst = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

std::vector<std::string> suggest_columns(const LineageGraph& graph, const std::string& wanted, std::size_t limit) {
  std::vector<std::pair<std::size_t, std::string>> scored;
  for (const auto& c : graph.all_columns()) {
    const std::string name = c.str();
    const std::size_t d = edit_distance(name, wanted);
    if (d <= 2) scored.emplace_back(d, name);
  }
  std::sort(scored.begin(), scored.end());
  std::vector<std::string> out;
  for (std::size_t i = 0; i < scored.size() && i < limit; ++i) out.push_back(scored[i].second);
  return out;
}

ViewerServer::ViewerServer(std::string lineage_json, std::string html)
    : server_(std::make_unique<httplib::Server>()), json_(std::move(lineage_json)), html_(std::move(html)) {
  auto page = [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(html_, "text/html; charset=utf-8");
  };
  server_->Get("/", page);
  server_->Get("/index.html", page);
  server_->Get("/api/lineage", [this](const httplib::Request&, httplib::Response& res) {
    res.set_content(json_, "application/json");
  });
}

ViewerServer::~ViewerServer() { stop(); }

bool ViewerServer::bind(const std::string& host, int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port(host);
    return port_ > 0;
  }
  if (!server_->bind_to_port(host, port)) return false;
  port_ = port;
  return true;
}

void ViewerServer::listen() { server_->listen_after_bind(); }

void ViewerServer::stop() {
  if (server_) server_->stop();
}

}  // namespace lineage_forge::cli
