#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lineage_forge/graph_model.hpp"
#include "lineage_forge/pipeline.hpp"

namespace httplib {
class Server;
}

namespace lineage_forge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitDiagnostics = 2;
inline constexpr int kDefaultPort = 8275;

struct RunConfig {
  std::vector<std::filesystem::path> inputs;  // "-" reads standard input
  std::optional<std::filesystem::path> schema_file;
  std::filesystem::path output_dir = ".";
  bool deterministic_ids = true;
  bool strict = false;
  std::optional<int> serve_port;
};

// Expands directories (recursively, lexicographic, `.sql` only) and reads
// each file with its stem as the source label. Throws std::runtime_error.
std::vector<SourceText> read_inputs(const std::vector<std::filesystem::path>& inputs, std::istream& stdin_stream);

PipelineResult extract_from_config(const RunConfig& config, std::istream& stdin_stream);

int cmd_extract(const RunConfig& config, std::ostream& out, std::ostream& err, std::istream& in);

int cmd_impact(const RunConfig& config, const std::string& column, Direction direction, std::ostream& out,
               std::ostream& err, std::istream& in);

int cmd_serve(const RunConfig& config, std::ostream& out, std::ostream& err, std::istream& in);

// Port precedence: explicit flag, then LINEAGE_FORGE_PORT, then 8275.
int resolve_port(const std::optional<int>& flag);

// Nearest "rel.col" names within edit distance 2, closest first.
std::vector<std::string> suggest_columns(const LineageGraph& graph, const std::string& wanted,
                                         std::size_t limit = 5);

std::size_t edit_distance(std::string_view a, std::string_view b);

// Self-contained viewer page with the lineage document inlined.
std::string render_viewer_html(const std::string& lineage_json);

// HTTP front end for the viewer: `/` and `/index.html` serve the page,
// `/api/lineage` the canonical document, anything else 404.
class ViewerServer {
 public:
  ViewerServer(std::string lineage_json, std::string html);
  ~ViewerServer();
  ViewerServer(const ViewerServer&) = delete;
  ViewerServer& operator=(const ViewerServer&) = delete;

  // port 0 binds an ephemeral port. Returns false when the port is busy.
  bool bind(const std::string& host, int port);
  int port() const { return port_; }
  void listen();  // blocks until stop()
  void stop();

 private:
  std::unique_ptr<httplib::Server> server_;
  std::string json_;
  std::string html_;
  int port_ = -1;
};

}  // namespace lineage_forge::cli
