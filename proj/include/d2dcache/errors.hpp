#pragma once

#include <stdexcept>
#include <string>

namespace d2dcache {

class InvalidArgument : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Parameters outside the family an evaluator was written for.
class Unsupported : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// Coverage of a content nobody caches is undefined.
class NoProvider : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

class ProviderTooRare : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class QueueId { D2D, BS };

class UnstableQueue : public std::runtime_error {
  public:
    UnstableQueue(QueueId queue, double intensity);

    QueueId queue() const noexcept { return queue_; }
    double intensity() const noexcept { return intensity_; }

  private:
    QueueId queue_;
    double intensity_;
};

// No bandwidth split keeps both queues stable. `deficit` is the bandwidth
// shortfall in Hz: what both queues need at the stability limit minus W.
class Infeasible : public std::runtime_error {
  public:
    Infeasible(const std::string& what, double deficit);

    double deficit() const noexcept { return deficit_; }

  private:
    double deficit_;
};

class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string& what, int line = 0, std::string field = {});

    int line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

  private:
    int line_;
    std::string field_;
};

const char* to_string(QueueId q) noexcept;

}  // namespace d2dcache
