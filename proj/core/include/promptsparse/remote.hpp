#pragma once

#include <chrono>
#include <memory>
#include <semaphore>
#include <string>

#include "promptsparse/backend.hpp"
#include "promptsparse/wire.hpp"

namespace promptsparse {

struct RemoteOptions {
  // http://host[:port], no path.
  std::string base_url;
  // Extra attempts after a transport failure or HTTP 503.
  int retries = 3;
  std::chrono::milliseconds backoff{200};
  std::chrono::milliseconds timeout{60000};
  EncoderCapabilities encoder;
  SegmenterCapabilities segmenter;
};

// Throws Error(InvalidArgument) unless `url` is http://host[:port][/].
void validate_base_url(const std::string& url);

// Client for a model service speaking the /v1 protocol. Requests are
// idempotent, so failed attempts are simply retried. At most
// segmenter.max_in_flight requests are outstanding at once.
class RemoteBackend final : public EncoderBackend, public SegmenterBackend {
 public:
  explicit RemoteBackend(RemoteOptions options);
  ~RemoteBackend() override;

  // GET /v1/health. Error(Transport) when unreachable, Error(Backend) when
  // the service answers but is not ready.
  wire::Health health() const;

  // Adopts capability fields advertised by the health endpoint. Not safe to
  // call while requests are in flight.
  void adopt(const wire::Health& health);

  EncoderCapabilities encoder_capabilities() const override { return options_.encoder; }
  FeatureMap encode(const Image& image) const override;

  SegmenterCapabilities segmenter_capabilities() const override { return options_.segmenter; }
  BinaryMask segment(const Image& image, const PointSet& prompts) const override;

 private:
  std::string request(const char* method, const std::string& path,
                      const std::string& body) const;

  RemoteOptions options_;
  std::unique_ptr<std::counting_semaphore<>> slots_;
};

}  // namespace promptsparse
