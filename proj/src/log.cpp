#include "drt/log.hpp"

#include <memory>
#include <string>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "drt/error.hpp"

namespace drt {

spdlog::logger& log() {
    static const std::shared_ptr<spdlog::logger> logger = [] {
        auto l = std::make_shared<spdlog::logger>("drt", std::make_shared<spdlog::sinks::stderr_sink_mt>());
        l->set_pattern("[%H:%M:%S.%e] [%l] %v");
        l->set_level(spdlog::level::info);
        return l;
    }();
    return *logger;
}

void set_log_level(std::string_view level) {
    const auto lvl = spdlog::level::from_str(std::string(level));
    if (lvl == spdlog::level::off && level != "off") {
        throw InvalidArgument("unknown log level '" + std::string(level) + "'");
    }
    log().set_level(lvl);
}

}  // namespace drt
