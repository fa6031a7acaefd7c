#include "d2dcache/errors.hpp"

#include <sstream>
#include <utility>

namespace d2dcache {

namespace {
std::string unstable_message(QueueId q, double rho)
{
    std::ostringstream os;
    os << to_string(q) << " queue unstable: traffic intensity " << rho << " >= 1";
    return os.str();
}
}  // namespace

const char* to_string(QueueId q) noexcept
{
    return q == QueueId::D2D ? "D2D" : "BS";
}

UnstableQueue::UnstableQueue(QueueId queue, double intensity)
    : std::runtime_error(unstable_message(queue, intensity)), queue_(queue), intensity_(intensity)
{
}

Infeasible::Infeasible(const std::string& what, double deficit)
    : std::runtime_error(what), deficit_(deficit)
{
}

ConfigError::ConfigError(const std::string& what, int line, std::string field)
    : std::runtime_error(what), line_(line), field_(std::move(field))
{
}

}  // namespace d2dcache
