#include "repscape/service.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <sstream>

#include "httplib.h"

#include "repscape/histogram.hpp"

namespace repscape {

namespace {

using nlohmann::json;

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

template <typename T>
T field(const json& body, const char* key, T fallback) {
  if (!body.contains(key) || body.at(key).is_null()) return fallback;
  try {
    return body.at(key).get<T>();
  } catch (const json::exception&) {
    throw UsageError(std::string("field '") + key + "' has the wrong type");
  }
}

AnalysisRequest analysis_request(const json& body) {
  AnalysisRequest r;
  r.variables = field<std::vector<std::string>>(body, "variables", {});
  if (body.contains("filters")) {
    const auto& fs = body.at("filters");
    if (!fs.is_array()) throw UsageError("field 'filters' must be an array");
    for (const auto& f : fs) {
      if (f.is_string()) {
        r.filters.push_back(parse_filter(f.get<std::string>()));
      } else {
        FilterPredicate p{field<std::string>(f, "variable", ""), field<double>(f, "lo", 0.0),
                          field<double>(f, "hi", 0.0)};
        if (p.variable.empty()) throw UsageError("filter object needs a 'variable'");
        if (p.lo > p.hi) throw UsageError("filter on '" + p.variable + "' has lo > hi");
        r.filters.push_back(std::move(p));
      }
    }
  }
  return r;
}

ScoringConfig scoring_config(const json& body, ScoreMode default_mode) {
  const json& src = body.contains("scoring") && body.at("scoring").is_object() ? body.at("scoring") : body;
  ScoringConfig s;
  s.mode = src.contains("mode") ? parse_score_mode(field<std::string>(src, "mode", "")) : default_mode;
  if (src.contains("scale")) {
    s.scale = color_scale_from_json(src.at("scale"));
  } else if (src.contains("colors")) {
    s.scale = ColorScale(field<std::size_t>(src, "colors", 10));
  }
  s.coverage.bins = field<std::size_t>(src, "bins", 0);
  s.coverage.window = field<std::size_t>(src, "window", 1);
  if (src.contains("kind")) s.coverage.kind = parse_histogram_kind(field<std::string>(src, "kind", ""));
  return s;
}

std::string cache_key(const std::string& id, const AnalysisRequest& r) {
  std::string key = id + "|";
  for (const auto& v : r.variables) key += v + ",";
  key += "|";
  for (const auto& f : r.filters) key += format_filter(f) + ",";
  return key;
}

json error_body(const std::string& code, const std::string& message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

bool is_json(const httplib::Request& req) {
  const auto ct = req.get_header_value("Content-Type");
  return ct.rfind("application/json", 0) == 0;
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    send_json(res, http_status(e), error_body(e.code(), e.what()));
  } catch (const json::exception& e) {
    send_json(res, 400, error_body("invalid_json", e.what()));
  } catch (const std::exception& e) {
    send_json(res, 500, error_body("internal_error", e.what()));
  }
}

}  // namespace

nlohmann::json to_json(const DatasetHandle& h) {
  return {{"id", h.id},
          {"rows", h.rows},
          {"variables", h.variables},
          {"variable_names", h.variable_names},
          {"loaded_at", h.loaded_at}};
}

int http_status(const Error& e) {
  const auto& code = e.code();
  if (code == "not_found") return 404;
  if (code == "ingest_error" || code == "invalid_argument" || code == "invalid_json") return 400;
  if (e.kind() == ErrorKind::usage) return 400;
  return 422;
}

int resolve_port(int flag_port, int default_port) {
  if (flag_port >= 0) return flag_port;
  if (const char* env = std::getenv("REPSCAPE_PORT")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 0 && v < 65536) return static_cast<int>(v);
    throw UsageError(std::string("REPSCAPE_PORT is not a valid port: '") + env + "'");
  }
  return default_port;
}

Service::Service(ServiceOptions options) : options_(options), server_(std::make_unique<httplib::Server>()) {
  server_->set_payload_max_length(options_.max_upload_bytes);
  install_routes();
}

Service::~Service() { stop(); }

DatasetHandle Service::add_dataset(std::string_view csv) {
  auto data = std::make_shared<const Dataset>(ingest_csv_text(csv));
  std::lock_guard lock(mutex_);
  DatasetHandle h{"ds-" + std::to_string(next_id_++), data->rows(), data->cols(), data->variable_names(), utc_now()};
  datasets_.emplace(h.id, Entry{h, std::move(data)});
  return h;
}

bool Service::remove_dataset(const std::string& id) {
  std::lock_guard lock(mutex_);
  if (datasets_.erase(id) == 0) return false;
  for (auto it = cache_.begin(); it != cache_.end();) {
    if (it->first.rfind(id + "|", 0) == 0)
      it = cache_.erase(it);
    else
      ++it;
  }
  return true;
}

DatasetHandle Service::handle(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = datasets_.find(id);
  if (it == datasets_.end()) throw DataError("not_found", "unknown dataset '" + id + "'");
  return it->second.handle;
}

std::shared_ptr<const Dataset> Service::dataset(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = datasets_.find(id);
  if (it == datasets_.end()) throw DataError("not_found", "unknown dataset '" + id + "'");
  return it->second.data;
}

std::shared_ptr<const Analysis> Service::analysis(const std::string& id, const AnalysisRequest& request) {
  const auto data = dataset(id);
  const auto key = cache_key(id, request);
  {
    std::lock_guard lock(mutex_);
    if (const auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  auto fitted = prepare_analysis(*data, request, options_.threads);
  std::lock_guard lock(mutex_);
  cache_[key] = fitted;
  return fitted;
}

std::size_t Service::cached_analyses() const {
  std::lock_guard lock(mutex_);
  return cache_.size();
}

json Service::representativeness(const std::string& id, const json& body) {
  const auto a = analysis(id, analysis_request(body));
  if (!body.contains("samples")) throw UsageError("field 'samples' is required");
  const auto samples = resolve_samples(*a, samples_from_json(body.at("samples"), a->analyzed.variable_names()));
  return to_json(*a, run_representativeness(a, samples, scoring_config(body, ScoreMode::heat_scale)));
}

json Service::ideal_sites(const std::string& id, const json& body) {
  const auto a = analysis(id, analysis_request(body));
  SelectionConfig cfg;
  cfg.n_sites = field<std::size_t>(body, "n_sites", 0);
  if (cfg.n_sites == 0) throw UsageError("field 'n_sites' must be a positive integer");
  cfg.bins = field<std::size_t>(body, "bins", 0);
  cfg.window = field<std::size_t>(body, "window", 1);
  cfg.seed = field<std::uint64_t>(body, "seed", 0);
  if (body.contains("kind")) cfg.kind = parse_histogram_kind(field<std::string>(body, "kind", ""));
  const auto draw = field<std::string>(body, "draw", "uniform");
  if (draw != "uniform" && draw != "median") throw UsageError("field 'draw' must be uniform or median");
  cfg.draw = draw == "median" ? MemberDraw::median : MemberDraw::uniform;

  return to_json(*a, run_ideal(a, cfg, scoring_config(body, ScoreMode::window_coverage)), cfg);
}

json Service::baseline(const std::string& id, const json& body) {
  const auto a = analysis(id, analysis_request(body));
  BaselineConfig cfg;
  cfg.n_sites = field<std::size_t>(body, "n_sites", 0);
  if (cfg.n_sites == 0) throw UsageError("field 'n_sites' must be a positive integer");
  cfg.trials = field<std::size_t>(body, "trials", 1000);
  cfg.seed = field<std::uint64_t>(body, "seed", 0);
  cfg.threads = options_.threads;
  const auto result = run_baseline(a, cfg, scoring_config(body, ScoreMode::heat_scale));
  return baseline_json(result, field<std::vector<double>>(body, "r", {}));
}

json Service::histogram(const std::string& id, const std::map<std::string, std::string>& query) {
  AnalysisRequest request;
  std::size_t bins = 10;
  HistogramKind kind = HistogramKind::equal_width;
  for (const auto& [k, v] : query) {
    if (k == "variables") {
      request.variables = split_list(v);
    } else if (k == "filters") {
      request.filters = parse_filters(v);
    } else if (k == "bins") {
      try {
        bins = std::stoul(v);
      } catch (const std::exception&) {
        throw UsageError("query parameter 'bins' must be a positive integer");
      }
    } else if (k == "kind") {
      kind = parse_histogram_kind(v);
    }
  }
  const auto a = analysis(id, request);
  auto j = to_json(build_histogram(a->projection, bins, kind));
  j["total"] = a->analyzed.rows();
  return j;
}

void Service::install_routes() {
  auto& s = *server_;
  s.Post("/v1/datasets", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const auto ct = req.get_header_value("Content-Type");
      if (ct.rfind("text/csv", 0) != 0 && ct.rfind("text/plain", 0) != 0) {
        send_json(res, 415, error_body("unsupported_media_type", "upload CSV with Content-Type: text/csv"));
        return;
      }
      send_json(res, 201, to_json(add_dataset(req.body)));
    });
  });
  s.Get(R"(/v1/datasets/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] { send_json(res, 200, to_json(handle(req.matches[1]))); });
  });
  s.Delete(R"(/v1/datasets/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      if (!remove_dataset(req.matches[1])) throw DataError("not_found", "unknown dataset '" + std::string(req.matches[1]) + "'");
      res.status = 204;
    });
  });

  const auto json_route = [this, &s](const std::string& suffix,
                                     json (Service::*method)(const std::string&, const json&)) {
    s.Post(R"(/v1/datasets/([^/]+)/)" + suffix, [this, method](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        if (!is_json(req)) {
          send_json(res, 415, error_body("unsupported_media_type", "send JSON with Content-Type: application/json"));
          return;
        }
        const std::string id = req.matches[1];
        handle(id);
        json body;
        try {
          body = req.body.empty() ? json::object() : json::parse(req.body);
        } catch (const json::parse_error& e) {
          throw Error(ErrorKind::usage, "invalid_json", e.what());
        }
        if (!body.is_object()) throw Error(ErrorKind::usage, "invalid_json", "request body must be a JSON object");
        send_json(res, 200, (this->*method)(id, body));
      });
    });
  };
  json_route("representativeness", &Service::representativeness);
  json_route("ideal-sites", &Service::ideal_sites);
  json_route("baseline", &Service::baseline);

  s.Get(R"(/v1/datasets/([^/]+)/histogram)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      std::map<std::string, std::string> query(req.params.begin(), req.params.end());
      send_json(res, 200, histogram(req.matches[1], query));
    });
  });
}

int Service::bind_any_port(const std::string& host) { return server_->bind_to_any_port(host); }

bool Service::bind(const std::string& host, int port) { return server_->bind_to_port(host, port); }

bool Service::listen() { return server_->listen_after_bind(); }

void Service::stop() {
  if (server_) server_->stop();
}

bool Service::wait_until_ready() const {
  for (int i = 0; i < 500 && !server_->is_running(); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));
  return server_->is_running();
}

}  // namespace repscape
