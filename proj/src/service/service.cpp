#include "adgpt/service/service.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <httplib.h>
#include <toml.hpp>

#include "adgpt/corpora/corpus.hpp"
#include "adgpt/corpora/templates.hpp"
#include "adgpt/error.hpp"

namespace adgpt::service {

using nlohmann::json;

// ---- configuration ---------------------------------------------------------

void parse_bind(std::string_view bind, ServiceConfig& cfg) {
  const auto colon = bind.rfind(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::kConfigError, "bind address must look like host:port, got '" +
                                             std::string(bind) + "'");
  }
  const auto port_text = bind.substr(colon + 1);
  int port = 0;
  auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || port < 0 || port > 65535) {
    throw Error(ErrorCode::kConfigError, "invalid port in bind address '" + std::string(bind) + "'");
  }
  const auto host = bind.substr(0, colon);
  cfg.host = host.empty() ? "127.0.0.1" : std::string(host);
  cfg.port = port;
}

ServiceConfig load_service_config(const std::filesystem::path& path) {
  toml::table doc;
  try {
    doc = toml::parse_file(path.string());
  } catch (const toml::parse_error& e) {
    throw Error(ErrorCode::kConfigError, path.string() + ": " + std::string(e.description()));
  }
  const auto* svc = doc["service"].as_table();
  if (!svc) throw Error(ErrorCode::kConfigError, path.string() + ": missing [service] table");
  const auto base = path.parent_path();
  auto resolve = [&](const std::string& p) -> std::filesystem::path {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp : base / fp;
  };
  auto str = [&](const char* key) -> std::optional<std::string> {
    const auto* node = svc->get(key);
    if (!node) return std::nullopt;
    auto v = node->value<std::string>();
    if (!v) throw Error(ErrorCode::kConfigError, path.string() + ": '" + key + "' must be a string");
    return v;
  };

  ServiceConfig cfg;
  if (auto b = str("bind")) parse_bind(*b, cfg);
  if (auto v = str("kb")) cfg.kb_path = resolve(*v);
  if (auto v = str("router")) cfg.router_path = resolve(*v);
  if (auto v = str("backend")) cfg.backend = *v;
  if (auto v = str("request_log")) cfg.request_log = resolve(*v);
  if (auto v = str("report")) cfg.report_path = resolve(*v);
  if (auto v = str("corpus_dir")) cfg.corpus_dir = resolve(*v);
  if (auto v = str("template_dir")) cfg.template_dir = resolve(*v);
  if (const auto* node = svc->get("significance_alpha")) {
    auto a = node->value<double>();
    if (!a) throw Error(ErrorCode::kConfigError, path.string() + ": 'significance_alpha' must be a number");
    cfg.alpha_override = *a;
  }
  return cfg;
}

void apply_env_overrides(ServiceConfig& cfg, const EnvLookup& env) {
  if (auto v = env("ADGPT_BIND")) parse_bind(*v, cfg);
  if (auto v = env("ADGPT_KB")) cfg.kb_path = *v;
  if (auto v = env("ADGPT_ROUTER")) cfg.router_path = *v;
}

void apply_env_overrides(ServiceConfig& cfg) {
  apply_env_overrides(cfg, [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (!v) return std::nullopt;
    return std::string(v);
  });
}

void validate_config(const ServiceConfig& cfg) {
  if (cfg.kb_path.empty()) throw Error(ErrorCode::kConfigError, "no knowledge base snapshot configured");
  if (cfg.router_path.empty()) throw Error(ErrorCode::kConfigError, "no router model configured");
  if (!std::filesystem::exists(cfg.kb_path)) {
    throw Error(ErrorCode::kConfigError, "knowledge base snapshot not found: " + cfg.kb_path.string());
  }
  if (!std::filesystem::exists(cfg.router_path)) {
    throw Error(ErrorCode::kConfigError, "router model not found: " + cfg.router_path.string());
  }
  if (cfg.alpha_override && !(*cfg.alpha_override > 0 && *cfg.alpha_override < 1)) {
    throw Error(ErrorCode::kConfigError, "significance_alpha must lie in (0,1)");
  }
}

std::shared_ptr<const Snapshot> Snapshot::make(std::shared_ptr<const KnowledgeBase> kb,
                                               std::shared_ptr<const router::RouterModel> router,
                                               std::shared_ptr<const engines::GenerativeBackend> backend) {
  auto s = std::make_shared<Snapshot>();
  s->kb_hash = kb->hash();
  s->router_hash = router->hash();
  s->dispatcher = std::make_unique<engines::Dispatcher>(*kb, *router, *backend);
  s->kb = std::move(kb);
  s->router = std::move(router);
  s->backend = std::move(backend);
  return s;
}

// ---- service ---------------------------------------------------------------

struct Service::Job {
  std::string id;
  int task = 0;
  std::string status = "queued";  // queued, running, done, failed
  json request;
  json descriptor;
  json error;
};

struct Service::Impl {
  httplib::Server server;
  std::thread thread;
};

namespace {

Response json_response(int status, json body, const std::string& kb_hash = "") {
  body["api_version"] = kApiVersion;
  if (!kb_hash.empty()) body["kb_hash"] = kb_hash;
  Response r;
  r.status = status;
  r.body = body.dump();
  r.headers["Content-Type"] = "application/json";
  if (!kb_hash.empty()) r.headers["X-KB-Hash"] = kb_hash;
  return r;
}

Response error_response(int status, std::string_view code, const std::string& message,
                        const std::string& kb_hash = "") {
  return json_response(status, {{"error", {{"code", code}, {"message", message}}}}, kb_hash);
}

int status_for(const engines::Answer& a) {
  if (!a.error) return 200;
  if (a.error->code == "UnknownGene") return 404;
  return 422;
}

std::vector<std::string_view> segments(std::string_view path) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < path.size()) {
    while (pos < path.size() && path[pos] == '/') ++pos;
    const auto next = path.find('/', pos);
    const auto end = next == std::string_view::npos ? path.size() : next;
    if (end > pos) out.push_back(path.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

std::optional<TaskLabel> task_from_json(const json& v) {
  if (v.is_number_integer()) return task_from_number(v.get<int>());
  if (v.is_string()) return parse_task(v.get<std::string>());
  return std::nullopt;
}

}  // namespace

Service::Service(ServiceConfig cfg) : Service(std::move(cfg), nullptr) {
  validate_config(cfg_);
  reload();
}

Service::Service(ServiceConfig cfg, std::nullptr_t) : cfg_(std::move(cfg)), impl_(std::make_unique<Impl>()) {}

Service::~Service() {
  stop();
  wait_for_jobs();
}

void Service::install(std::shared_ptr<const Snapshot> snap) {
  std::lock_guard lock(snap_mu_);
  snap_ = std::move(snap);
}

std::shared_ptr<const Snapshot> Service::current() const {
  std::lock_guard lock(snap_mu_);
  return snap_;
}

std::shared_ptr<const Snapshot> Service::reload() {
  validate_config(cfg_);
  auto kb = std::make_shared<KnowledgeBase>(KnowledgeBase::load(cfg_.kb_path));
  if (cfg_.alpha_override) *kb = kb->with_alpha(*cfg_.alpha_override);
  auto router = std::make_shared<const router::RouterModel>(router::RouterModel::load(cfg_.router_path));
  auto snap = Snapshot::make(std::move(kb), std::move(router), engines::make_backend(cfg_.backend));
  install(snap);
  return snap;
}

Response Service::handle(std::string_view method, std::string_view path, std::string_view body) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto snap = current();
  Response r;
  try {
    r = route(method, path, body, snap);
  } catch (const Error& e) {
    r = error_response(500, e.code_name(), e.what(), snap ? snap->kb_hash : "");
  } catch (const std::exception& e) {
    r = error_response(500, "Internal", e.what(), snap ? snap->kb_hash : "");
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  r.headers["X-Latency-Ms"] = std::to_string(ms);
  log_request(method, path, r.status, ms, snap ? snap->kb_hash : "");
  return r;
}

Response Service::route(std::string_view method, std::string_view path, std::string_view body,
                        const std::shared_ptr<const Snapshot>& snap) {
  if (const auto q = path.find('?'); q != std::string_view::npos) path = path.substr(0, q);
  const auto seg = segments(path);
  const bool get = method == "GET", post = method == "POST";
  auto unavailable = [] {
    return error_response(503, "Unavailable", "no knowledge base snapshot is loaded");
  };
  auto wrong_method = [&] {
    return error_response(405, "MethodNotAllowed", std::string(method) + " not allowed on " + std::string(path));
  };

  if (seg.size() == 1 && seg[0] == "health") {
    if (!get) return wrong_method();
    if (!snap) return unavailable();
    return json_response(200,
                         {{"status", "ok"},
                          {"version", kServiceVersion},
                          {"router_hash", snap->router_hash},
                          {"backend", snap->backend->name()}},
                         snap->kb_hash);
  }
  if (seg.size() == 1 && seg[0] == "query") {
    if (!post) return wrong_method();
    if (!snap) return unavailable();
    double ms = 0;
    return post_query(body, *snap, ms);
  }
  if (!seg.empty() && seg[0] == "genes" && seg.size() <= 2) {
    if (!get) return wrong_method();
    if (!snap) return unavailable();
    if (seg.size() == 2) return get_gene(seg[1], *snap);
    return json_response(200, {{"genes", snap->kb->seed().symbols}, {"count", snap->kb->seed().symbols.size()}},
                         snap->kb_hash);
  }
  if (seg.size() == 1 && seg[0] == "regions") {
    if (!get) return wrong_method();
    json regions = json::array();
    for (auto region : all_regions()) {
      regions.push_back({{"id", region_id(region)}, {"label", region_label(region)}});
    }
    return json_response(200, {{"regions", regions}, {"count", regions.size()}}, snap ? snap->kb_hash : "");
  }
  if (seg.size() == 2 && seg[0] == "corpus" && seg[1] == "build") {
    if (!post) return wrong_method();
    if (!snap) return unavailable();
    return post_corpus_build(body, snap);
  }
  if (seg.size() == 3 && seg[0] == "corpus" && seg[1] == "jobs") {
    if (!get) return wrong_method();
    return get_job(seg[2]);
  }
  if (seg.size() == 2 && seg[0] == "report" && seg[1] == "latest") {
    if (!get) return wrong_method();
    return get_report();
  }
  if (seg.size() == 2 && seg[0] == "admin" && seg[1] == "reload") {
    if (!post) return wrong_method();
    return post_reload();
  }
  return error_response(404, "NotFound", "no such endpoint: " + std::string(path),
                        snap ? snap->kb_hash : "");
}

Response Service::post_query(std::string_view body, const Snapshot& snap, double& latency_ms) {
  const auto t0 = std::chrono::steady_clock::now();
  json req = json::parse(body, nullptr, false);
  if (req.is_discarded() || !req.is_object()) {
    return error_response(400, "BadRequest", "request body must be a JSON object", snap.kb_hash);
  }
  if (!req.contains("text") || !req["text"].is_string()) {
    return error_response(400, "BadRequest", "field 'text' (string) is required", snap.kb_hash);
  }
  const auto text = req["text"].get<std::string>();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    return error_response(400, "BadRequest", "field 'text' must not be empty", snap.kb_hash);
  }
  std::optional<TaskLabel> forced;
  if (req.contains("task") && !req["task"].is_null()) {
    forced = task_from_json(req["task"]);
    if (!forced) return error_response(422, "InvalidArgument", "field 'task' must be 1-4 or Task1-Task4", snap.kb_hash);
  }
  const bool timing = req.contains("timing") && req["timing"].is_boolean() && req["timing"].get<bool>();

  const auto answer = forced ? snap.dispatcher->answer_as(*forced, text) : snap.dispatcher->dispatch(text);
  auto out = engines::to_json(answer);
  latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  if (timing) out["latency_ms"] = latency_ms;
  return json_response(status_for(answer), std::move(out), snap.kb_hash);
}

Response Service::get_gene(std::string_view symbol, const Snapshot& snap) {
  const auto& kb = *snap.kb;
  const std::string gene(symbol);
  if (!kb.has_gene(gene)) {
    return error_response(404, "UnknownGene", "unknown gene '" + gene + "'", snap.kb_hash);
  }
  const auto& a = kb.annotation(gene);
  json assoc = json::object();
  for (auto region : all_regions()) {
    json row = json::object();
    for (auto kind : kAllQtlKinds) {
      row[std::string(qtl_kind_name(kind))] = kb.significant_association(gene, region, kind);
    }
    assoc[std::string(region_id(region))] = row;
  }
  json mg{{"present", false}};
  if (const auto* rec = kb.omim(gene)) {
    mg = {{"present", true},
          {"ad_related", rec->ad_related},
          {"summary_text", rec->summary_text},
          {"curated_reasoning", rec->curated_reasoning},
          {"citations", rec->citations}};
  }
  return json_response(200,
                       {{"symbol", gene},
                        {"annotation",
                         {{"chromosome", a.chromosome},
                          {"start", a.start},
                          {"end", a.end},
                          {"strand", strand_symbol(a.strand)},
                          {"location", kb.gene_attribute(gene, GeneAttribute::kLocationSummary)}}},
                        {"associations", assoc},
                        {"molecular_genetics", mg},
                        {"significance_alpha", kb.significance_alpha()}},
                       snap.kb_hash);
}

Response Service::post_corpus_build(std::string_view body, const std::shared_ptr<const Snapshot>& snap) {
  json req = json::parse(body, nullptr, false);
  if (req.is_discarded() || !req.is_object()) {
    return error_response(400, "BadRequest", "request body must be a JSON object", snap->kb_hash);
  }
  const auto task = req.contains("task") ? task_from_json(req["task"]) : std::nullopt;
  if (!task) return error_response(422, "InvalidArgument", "field 'task' must be 1-4 or Task1-Task4", snap->kb_hash);
  std::string template_set = "default";
  if (req.contains("template_set_id")) {
    if (!req["template_set_id"].is_string()) {
      return error_response(422, "InvalidArgument", "field 'template_set_id' must be a string", snap->kb_hash);
    }
    template_set = req["template_set_id"].get<std::string>();
  }
  std::uint64_t seed = 0;
  if (req.contains("seed")) {
    if (!req["seed"].is_number_unsigned()) {
      return error_response(422, "InvalidArgument", "field 'seed' must be a non-negative integer", snap->kb_hash);
    }
    seed = req["seed"].get<std::uint64_t>();
  }
  std::filesystem::path template_file;
  if (template_set != "default") {
    const bool safe = !template_set.empty() &&
                      template_set.find_first_not_of("abcdefghijklmnopqrstuvwxyz0123456789_-") == std::string::npos;
    template_file = cfg_.template_dir / (template_set + ".toml");
    if (!safe || cfg_.template_dir.empty() || !std::filesystem::exists(template_file)) {
      return error_response(422, "InvalidArgument", "unknown template set '" + template_set + "'", snap->kb_hash);
    }
  }
  if (cfg_.corpus_dir.empty()) {
    return error_response(422, "InvalidArgument", "service has no corpus_dir configured", snap->kb_hash);
  }

  std::lock_guard lock(jobs_mu_);
  const int n = task_number(*task);
  if (auto it = running_by_task_.find(n); it != running_by_task_.end()) {
    const auto& job = jobs_.at(it->second);
    return json_response(202, {{"job_id", job->id}, {"status", job->status}, {"deduplicated", true}},
                         snap->kb_hash);
  }
  auto job = std::make_shared<Job>();
  job->id = "job-" + std::to_string(next_job_++);
  job->task = n;
  job->request = {{"task", task_name(*task)}, {"template_set_id", template_set}, {"seed", seed}};
  jobs_[job->id] = job;
  running_by_task_[n] = job->id;

  workers_.emplace_back([this, job, snap, task = *task, template_file, seed] {
    {
      std::lock_guard l(jobs_mu_);
      job->status = "running";
    }
    json descriptor, error;
    try {
      const auto templates = template_file.empty() ? corpora::TemplateSet::defaults()
                                                   : corpora::TemplateSet::load(template_file);
      const auto corpus = corpora::generate(*snap->kb, templates, task, seed);
      std::filesystem::create_directories(cfg_.corpus_dir);
      const auto out = cfg_.corpus_dir / (std::string(task_name(task)) + "-" + job->id + ".jsonl");
      corpora::export_jsonl(corpus, out);
      descriptor = corpora::describe(corpus, *snap->kb, templates);
      descriptor["path"] = out.string();
      descriptor["template_set_id"] = job->request["template_set_id"];
    } catch (const Error& e) {
      error = {{"code", e.code_name()}, {"message", e.what()}};
    } catch (const std::exception& e) {
      error = {{"code", "Internal"}, {"message", e.what()}};
    }
    std::lock_guard l(jobs_mu_);
    job->descriptor = std::move(descriptor);
    job->error = std::move(error);
    job->status = job->error.is_null() ? "done" : "failed";
    running_by_task_.erase(job->task);
  });
  return json_response(202, {{"job_id", job->id}, {"status", job->status}, {"deduplicated", false}},
                       snap->kb_hash);
}

Response Service::get_job(std::string_view id) {
  std::lock_guard lock(jobs_mu_);
  auto it = jobs_.find(std::string(id));
  if (it == jobs_.end()) return error_response(404, "NotFound", "no such job '" + std::string(id) + "'");
  const auto& job = *it->second;
  return json_response(200, {{"job_id", job.id},
                             {"status", job.status},
                             {"request", job.request},
                             {"descriptor", job.descriptor},
                             {"error", job.error}});
}

Response Service::get_report() {
  if (cfg_.report_path.empty() || !std::filesystem::exists(cfg_.report_path)) {
    return error_response(404, "NotFound", "no evaluation report has been written yet");
  }
  std::ifstream in(cfg_.report_path);
  json report = json::parse(in, nullptr, false);
  if (report.is_discarded()) return error_response(500, "IoError", "evaluation report is not valid JSON");
  return json_response(200, {{"report", report}});
}

Response Service::post_reload() {
  try {
    auto snap = reload();
    return json_response(200, {{"status", "reloaded"}, {"router_hash", snap->router_hash}}, snap->kb_hash);
  } catch (const Error& e) {
    const auto snap = current();
    return error_response(500, e.code_name(), std::string("reload failed, previous snapshot kept: ") + e.what(),
                          snap ? snap->kb_hash : "");
  }
}

void Service::log_request(std::string_view method, std::string_view path, int status, double latency_ms,
                          const std::string& kb_hash) {
  if (cfg_.request_log.empty()) return;
  const auto now = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count();
  const json line{{"ts_ms", now},         {"method", method}, {"path", path},
                  {"status", status},     {"latency_ms", latency_ms}, {"kb_hash", kb_hash}};
  std::lock_guard lock(log_mu_);
  std::ofstream out(cfg_.request_log, std::ios::app);
  out << line.dump() << '\n';
}

void Service::wait_for_jobs() {
  std::vector<std::thread> workers;
  {
    std::lock_guard lock(jobs_mu_);
    workers.swap(workers_);
  }
  for (auto& w : workers) w.join();
}

namespace {

void install_routes(httplib::Server& server, Service& service) {
  auto forward = [&service](const httplib::Request& req, httplib::Response& res) {
    const auto r = service.handle(req.method, req.path, req.body);
    res.status = r.status;
    for (const auto& [k, v] : r.headers) {
      if (k != "Content-Type") res.set_header(k, v);
    }
    res.set_content(r.body, "application/json");
  };
  server.Get(".*", forward);
  server.Post(".*", forward);
  server.Put(".*", forward);
  server.Delete(".*", forward);
}

}  // namespace

bool Service::listen() {
  install_routes(impl_->server, *this);
  return impl_->server.listen(cfg_.host, cfg_.port);
}

int Service::start_background() {
  install_routes(impl_->server, *this);
  const int port = impl_->server.bind_to_any_port(cfg_.host);
  if (port < 0) return -1;
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

void Service::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace adgpt::service
