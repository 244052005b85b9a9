#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "adgpt/engines/engines.hpp"
#include "adgpt/knowledge/knowledge_base.hpp"
#include "adgpt/router/router.hpp"

namespace adgpt::service {

inline constexpr std::string_view kApiVersion = "1";
inline constexpr std::string_view kServiceVersion = "0.1.0";

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path kb_path;
  std::filesystem::path router_path;
  std::string backend{engines::kDefaultBackendName};
  std::optional<double> alpha_override;
  std::filesystem::path request_log;   // empty: no log
  std::filesystem::path report_path;   // served by GET /report/latest
  std::filesystem::path corpus_dir;    // output of POST /corpus/build
  std::filesystem::path template_dir;  // <id>.toml template sets
};

// "host:port" or ":port". Throws ConfigError.
void parse_bind(std::string_view bind, ServiceConfig& cfg);

// TOML file with a [service] table; relative paths resolve against the
// file's directory. Throws ConfigError.
ServiceConfig load_service_config(const std::filesystem::path& path);

using EnvLookup = std::function<std::optional<std::string>(const char*)>;
// ADGPT_BIND, ADGPT_KB, ADGPT_ROUTER.
void apply_env_overrides(ServiceConfig& cfg, const EnvLookup& env);
void apply_env_overrides(ServiceConfig& cfg);

// Checks that the snapshot paths exist; throws ConfigError naming the first
// missing one.
void validate_config(const ServiceConfig& cfg);

// Immutable bundle the handlers read; replaced wholesale on reload.
struct Snapshot {
  std::shared_ptr<const KnowledgeBase> kb;
  std::shared_ptr<const router::RouterModel> router;
  std::shared_ptr<const engines::GenerativeBackend> backend;
  std::unique_ptr<engines::Dispatcher> dispatcher;
  std::string kb_hash;
  std::string router_hash;

  static std::shared_ptr<const Snapshot> make(std::shared_ptr<const KnowledgeBase> kb,
                                              std::shared_ptr<const router::RouterModel> router,
                                              std::shared_ptr<const engines::GenerativeBackend> backend);
};

struct Response {
  int status = 200;
  std::string body;
  std::map<std::string, std::string> headers;
};

class Service {
 public:
  // Loads the snapshots named by the config. Throws on failure.
  explicit Service(ServiceConfig cfg);
  // No snapshot until install() or reload(); requests get 503 meanwhile.
  Service(ServiceConfig cfg, std::nullptr_t);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Transport-free request handling; the HTTP server forwards here.
  Response handle(std::string_view method, std::string_view path, std::string_view body);

  void install(std::shared_ptr<const Snapshot> snap);
  // Loads fresh snapshots from the configured paths and swaps them in.
  // The previous snapshot stays live if loading fails.
  std::shared_ptr<const Snapshot> reload();
  std::shared_ptr<const Snapshot> current() const;

  // Blocks serving HTTP until stop(). Returns false if binding failed.
  bool listen();
  // Binds to an ephemeral port on the configured host and serves on a
  // background thread. Returns the port, or -1.
  int start_background();
  void stop();

  // Waits for every corpus job to finish.
  void wait_for_jobs();

  const ServiceConfig& config() const noexcept { return cfg_; }

 private:
  struct Job;
  struct Impl;

  Response route(std::string_view method, std::string_view path, std::string_view body,
                 const std::shared_ptr<const Snapshot>& snap);
  Response post_query(std::string_view body, const Snapshot& snap, double& latency_ms);
  Response get_gene(std::string_view symbol, const Snapshot& snap);
  Response post_corpus_build(std::string_view body, const std::shared_ptr<const Snapshot>& snap);
  Response get_job(std::string_view id);
  Response get_report();
  Response post_reload();
  void log_request(std::string_view method, std::string_view path, int status, double latency_ms,
                   const std::string& kb_hash);

  ServiceConfig cfg_;
  mutable std::mutex snap_mu_;
  std::shared_ptr<const Snapshot> snap_;

  std::mutex jobs_mu_;
  std::map<std::string, std::shared_ptr<Job>> jobs_;
  std::map<int, std::string> running_by_task_;
  std::vector<std::thread> workers_;
  std::uint64_t next_job_ = 1;

  std::mutex log_mu_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace adgpt::service
