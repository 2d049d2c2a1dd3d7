#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "json.hpp"

#include "repscape/analysis.hpp"
#include "repscape/dataset.hpp"
#include "repscape/error.hpp"

namespace httplib {
class Server;
}

namespace repscape {

struct DatasetHandle {
  std::string id;
  std::size_t rows = 0;
  std::size_t variables = 0;
  std::vector<std::string> variable_names;
  std::string loaded_at;  // ISO-8601 UTC
};

nlohmann::json to_json(const DatasetHandle& h);

struct ServiceOptions {
  unsigned threads = 1;  // per-request internal parallelism
  std::size_t max_upload_bytes = std::size_t{1} << 30;
};

/// In-memory analysis service over immutable dataset snapshots.
///
/// The JSON-level methods are what the HTTP routes call; they throw
/// repscape::Error subclasses which the routes map to status codes.
class Service {
 public:
  explicit Service(ServiceOptions options = {});
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  DatasetHandle add_dataset(std::string_view csv);
  bool remove_dataset(const std::string& id);
  DatasetHandle handle(const std::string& id) const;

  nlohmann::json representativeness(const std::string& id, const nlohmann::json& body);
  nlohmann::json ideal_sites(const std::string& id, const nlohmann::json& body);
  nlohmann::json baseline(const std::string& id, const nlohmann::json& body);
  nlohmann::json histogram(const std::string& id, const std::map<std::string, std::string>& query);

  /// Binds to an ephemeral port on `host` and returns it.
  int bind_any_port(const std::string& host = "127.0.0.1");
  bool bind(const std::string& host, int port);
  /// Serves on the bound socket until stop() is called.
  bool listen();
  void stop();
  bool wait_until_ready() const;

  std::size_t cached_analyses() const;

 private:
  struct Entry {
    DatasetHandle handle;
    std::shared_ptr<const Dataset> data;
  };

  std::shared_ptr<const Dataset> dataset(const std::string& id) const;
  std::shared_ptr<const Analysis> analysis(const std::string& id, const AnalysisRequest& request);
  void install_routes();

  ServiceOptions options_;
  mutable std::mutex mutex_;
  std::map<std::string, Entry> datasets_;
  std::map<std::string, std::shared_ptr<const Analysis>> cache_;
  std::uint64_t next_id_ = 1;
  std::unique_ptr<httplib::Server> server_;
};

/// HTTP status for an engine error.
int http_status(const Error& e);

/// Resolves the listening port: explicit flag (>= 0), else REPSCAPE_PORT,
/// else the default. Port 0 asks for an ephemeral port.
int resolve_port(int flag_port, int default_port = 8080);

}  // namespace repscape
