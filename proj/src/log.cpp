#include "liftrom/log.hpp"

#include "liftrom/errors.hpp"

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>

namespace liftrom {

void set_log_level(const std::string& level) {
  static const auto logger = [] {
    auto l = spdlog::stderr_color_mt("liftrom");
    l->set_pattern("[%l] %v");
    spdlog::set_default_logger(l);
    return l;
  }();
  if (level == "error") {
    logger->set_level(spdlog::level::err);
  } else if (level == "info") {
    logger->set_level(spdlog::level::info);
  } else if (level == "debug") {
    logger->set_level(spdlog::level::debug);
  } else {
    throw ConfigError("LIFTROM_LOG must be one of error, info, debug (got '" + level + "')");
  }
}

void init_logging_from_env() {
  const char* env = std::getenv("LIFTROM_LOG");
  set_log_level(env && *env ? env : "info");
}

}  // namespace liftrom
