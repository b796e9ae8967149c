#include "promptsparse/remote.hpp"

#include <regex>
#include <thread>

#include "httplib.h"

namespace promptsparse {

void validate_base_url(const std::string& url) {
  static const std::regex kUrl(R"(^http://([A-Za-z0-9.\-]+|\[[0-9A-Fa-f:]+\])(:[0-9]{1,5})?/?$)");
  if (!std::regex_match(url, kUrl)) {
    throw Error(ErrorCode::InvalidArgument,
                "base url must look like http://host[:port], got \"" + url + "\"");
  }
}

namespace {

std::string trim_slash(std::string url) {
  if (!url.empty() && url.back() == '/') url.pop_back();
  return url;
}

struct SlotGuard {
  std::counting_semaphore<>& sem;
  explicit SlotGuard(std::counting_semaphore<>& s) : sem(s) { sem.acquire(); }
  ~SlotGuard() { sem.release(); }
};

}  // namespace

RemoteBackend::RemoteBackend(RemoteOptions options) : options_(std::move(options)) {
  validate_base_url(options_.base_url);
  options_.base_url = trim_slash(options_.base_url);
  if (options_.segmenter.max_in_flight < 1) options_.segmenter.max_in_flight = 1;
  slots_ = std::make_unique<std::counting_semaphore<>>(options_.segmenter.max_in_flight);
}

RemoteBackend::~RemoteBackend() = default;

std::string RemoteBackend::request(const char* method, const std::string& path,
                                   const std::string& body) const {
  SlotGuard slot(*slots_);
  std::string last_error;
  for (int attempt = 0; attempt <= options_.retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(options_.backoff * attempt);

    httplib::Client cli(options_.base_url);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - secs);
    cli.set_connection_timeout(secs.count(), usecs.count());
    cli.set_read_timeout(secs.count(), usecs.count());
    cli.set_write_timeout(secs.count(), usecs.count());

    const auto res = std::string_view(method) == "GET"
                         ? cli.Get(path)
                         : cli.Post(path, body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 503) {
      last_error = "service unavailable: " + wire::error_message(res->body);
      continue;
    }
    if (res->status != 200) {
      throw Error(ErrorCode::Backend, std::string(method) + " " + path + " -> HTTP " +
                                          std::to_string(res->status) + ": " +
                                          wire::error_message(res->body));
    }
    return res->body;
  }
  throw Error(ErrorCode::Transport, std::string(method) + " " + options_.base_url + path +
                                        " failed after " + std::to_string(options_.retries + 1) +
                                        " attempt(s): " + last_error);
}

wire::Health RemoteBackend::health() const {
  const auto body = request("GET", "/v1/health", {});
  wire::Health h;
  try {
    h = wire::parse_health(body);
  } catch (const Error& e) {
    throw Error(ErrorCode::Backend, std::string("health: ") + e.what());
  }
  if (h.status != "ok") {
    throw Error(ErrorCode::Backend, "health: service reports status \"" + h.status + "\"");
  }
  return h;
}

void RemoteBackend::adopt(const wire::Health& health) {
  if (health.grid_h) options_.encoder.grid_h = *health.grid_h;
  if (health.grid_w) options_.encoder.grid_w = *health.grid_w;
  if (health.dim) options_.encoder.dim = *health.dim;
  if (health.max_in_flight && *health.max_in_flight >= 1) {
    options_.segmenter.max_in_flight = *health.max_in_flight;
    slots_ = std::make_unique<std::counting_semaphore<>>(options_.segmenter.max_in_flight);
  }
}

FeatureMap RemoteBackend::encode(const Image& image) const {
  const auto body = request("POST", "/v1/encode", wire::encode_request(image));
  FeatureMap fm;
  try {
    fm = wire::parse_encode_response(body);
  } catch (const Error& e) {
    throw e.with_context("encode response");
  }
  check_feature_map(options_.encoder, fm);
  return fm;
}

BinaryMask RemoteBackend::segment(const Image& image, const PointSet& prompts) const {
  check_segment_request(image, prompts);
  const auto body = request("POST", "/v1/segment", wire::segment_request(image, prompts));
  wire::SegmentReply reply;
  try {
    reply = wire::parse_segment_response(body);
  } catch (const Error& e) {
    throw e.with_context("segment response");
  }
  if (reply.mask.width() != image.width() || reply.mask.height() != image.height()) {
    throw Error(ErrorCode::DimensionMismatch, "segment response mask is " +
                                                  std::to_string(reply.mask.width()) + "x" +
                                                  std::to_string(reply.mask.height()) +
                                                  ", image is " + std::to_string(image.width()) +
                                                  "x" + std::to_string(image.height()));
  }
  return std::move(reply.mask);
}

}  // namespace promptsparse
