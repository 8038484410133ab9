#pragma once

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>

#include "frozenlake/core.hpp"
#include "frozenlake/hash.hpp"
#include "frozenlake/parallel.hpp"

namespace frozenlake {

/// Batch client for a chat-completion style HTTP endpoint.
struct GatewayConfig {
  std::string base_url;                 // e.g. "http://127.0.0.1:8080"
  std::string model;
  std::string completions_path = "/v1/chat/completions";
  int max_concurrency = 4;
  double timeout_s = 60.0;
  int max_retries = 3;
  double temperature = 0.0;             // 0 for reproducible evaluation runs
  std::filesystem::path cache_dir;      // empty disables caching
  std::string api_key_env = "FROZENLAKE_API_KEY";
  int backoff_base_ms = 250;
};

struct BatchStats {
  std::size_t total = 0;
  std::size_t from_cache = 0;
  std::size_t network = 0;
  std::size_t errors = 0;
};

namespace detail {

struct BatchItem {
  std::string id;
  std::string prompt;
  std::string image_b64;  // empty for text-only prompts
};

inline std::string temperature_key(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", t);
  return buf;
}

/// Content-addressed cache key: any change to prompt, model, temperature
/// or attached image changes the key.
inline std::string cache_key(const GatewayConfig& cfg, const BatchItem& item) {
  std::string material = cfg.model;
  material += '\x1f';
  material += temperature_key(cfg.temperature);
  material += '\x1f';
  material += item.prompt;
  material += '\x1f';
  material += item.image_b64;
  return sha256_hex(material);
}

inline json request_body(const GatewayConfig& cfg, const BatchItem& item) {
  json body;
  body["model"] = cfg.model;
  body["temperature"] = cfg.temperature;
  json message;
  message["role"] = "user";
  if (item.image_b64.empty()) {
    message["content"] = item.prompt;
  } else {
    json parts = json::array();
    parts.push_back({{"type", "text"}, {"text", item.prompt}});
    parts.push_back(
        {{"type", "image_url"},
         {"image_url",
          {{"url", "data:image/x-portable-pixmap;base64," + item.image_b64}}}});
    message["content"] = std::move(parts);
  }
  body["messages"] = json::array({std::move(message)});
  return body;
}

inline std::optional<std::string> content_of(const std::string& raw) {
  const auto parsed = json::parse(raw, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded()) return std::nullopt;
  if (!parsed.contains("choices") || !parsed["choices"].is_array() ||
      parsed["choices"].empty()) {
    return std::nullopt;
  }
  const auto& first = parsed["choices"][0];
  if (!first.contains("message") || !first["message"].contains("content") ||
      !first["message"]["content"].is_string()) {
    return std::nullopt;
  }
  return first["message"]["content"].get<std::string>();
}

inline void write_cache_atomic(const std::filesystem::path& path,
                               const std::string& content) {
  static std::atomic<unsigned> counter{0};
  const auto tmp = path.string() + ".tmp" +
                   std::to_string(counter.fetch_add(1, std::memory_order_relaxed));
  write_file(tmp, content);
  std::filesystem::rename(tmp, path);
}

}  // namespace detail

/// Reads an eval JSONL ({"id", "prompt", optional "image" path relative to
/// the eval file}) and writes one response line per input id, in input
/// order. Cached completions are reused without a network call; transient
/// failures (connect errors, 429, 5xx) retry with exponential backoff and
/// exhaustion yields a per-sample error record instead of aborting.
inline BatchStats run_batch(const std::filesystem::path& eval_jsonl,
                            const GatewayConfig& cfg,
                            const std::filesystem::path& out_jsonl) {
  if (cfg.base_url.empty()) throw std::invalid_argument("base_url is required");
  if (cfg.model.empty()) throw std::invalid_argument("model is required");
  if (cfg.max_concurrency < 1) {
    throw std::invalid_argument("max_concurrency must be at least 1");
  }
  if (cfg.temperature < 0) {
    throw std::invalid_argument("temperature must be non-negative");
  }

  std::vector<detail::BatchItem> items;
  {
    std::ifstream in(eval_jsonl);
    if (!in) throw std::runtime_error("cannot read " + eval_jsonl.string());
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      detail::BatchItem item;
      item.id = j.at("id").get<std::string>();
      item.prompt = j.at("prompt").get<std::string>();
      if (j.contains("image")) {
        const auto image_path =
            eval_jsonl.parent_path() / j.at("image").get<std::string>();
        item.image_b64 = base64_encode(read_file(image_path));
      }
      items.push_back(std::move(item));
    }
  }

  if (!cfg.cache_dir.empty()) std::filesystem::create_directories(cfg.cache_dir);
  const char* api_key = std::getenv(cfg.api_key_env.c_str());

  struct Outcome {
    std::optional<std::string> response;
    std::optional<std::string> error;
    bool cached = false;
    bool network = false;
  };
  std::vector<Outcome> outcomes(items.size());

  parallel_for(
      items.size(),
      [&](std::size_t i) {
        const auto& item = items[i];
        Outcome& out = outcomes[i];
        std::filesystem::path cache_path;
        if (!cfg.cache_dir.empty()) {
          cache_path = cfg.cache_dir / (detail::cache_key(cfg, item) + ".json");
          if (std::filesystem::exists(cache_path)) {
            if (auto content = detail::content_of(read_file(cache_path))) {
              out.response = std::move(*content);
              out.cached = true;
              return;
            }
          }
        }

        httplib::Client client(cfg.base_url);
        client.set_connection_timeout(std::chrono::milliseconds(
            static_cast<int>(cfg.timeout_s * 1000)));
        client.set_read_timeout(
            std::chrono::milliseconds(static_cast<int>(cfg.timeout_s * 1000)));
        httplib::Headers headers;
        if (api_key) headers.emplace("Authorization", std::string("Bearer ") + api_key);

        const std::string body = detail::request_body(cfg, item).dump();
        out.network = true;
        std::string last_error;
        for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
          if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(
                cfg.backoff_base_ms * (1 << (attempt - 1))));
          }
          auto res = client.Post(cfg.completions_path, headers, body,
                                 "application/json");
          if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;  // transient
          }
          if (res->status == 429 || res->status >= 500) {
            last_error = "status " + std::to_string(res->status);
            continue;  // transient
          }
          if (res->status != 200) {
            out.error = "status " + std::to_string(res->status);
            return;  // permanent
          }
          if (auto content = detail::content_of(res->body)) {
            out.response = std::move(*content);
            if (!cache_path.empty()) {
              detail::write_cache_atomic(cache_path, res->body);
            }
          } else {
            out.error = "malformed endpoint response";
          }
          return;
        }
        out.error = "retries exhausted: " + last_error;
      },
      static_cast<unsigned>(cfg.max_concurrency));

  std::ofstream out(out_jsonl);
  if (!out) throw std::runtime_error("cannot write " + out_jsonl.string());
  BatchStats stats;
  stats.total = items.size();
  for (std::size_t i = 0; i < items.size(); ++i) {
    json line;
    line["id"] = items[i].id;
    if (outcomes[i].response) {
      line["response"] = *outcomes[i].response;
    } else {
      line["error"] = outcomes[i].error.value_or("unknown error");
      ++stats.errors;
    }
    if (outcomes[i].cached) ++stats.from_cache;
    if (outcomes[i].network) ++stats.network;
    out << line.dump() << '\n';
  }
  return stats;
}

}  // namespace frozenlake
