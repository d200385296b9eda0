#pragma once

#include <string_view>

#include <spdlog/logger.h>

namespace drt {

/// Library logger; writes to stderr.
spdlog::logger& log();

/// "trace", "debug", "info", "warn", "error", "critical" or "off".
void set_log_level(std::string_view level);

}  // namespace drt
