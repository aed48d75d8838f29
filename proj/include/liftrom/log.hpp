#pragma once

#include <string>

namespace liftrom {

/// Sets the library log level from LIFTROM_LOG (error | info | debug);
/// unset means info. Unknown values raise ConfigError.
void init_logging_from_env();
/// Same, from an explicit level name.
void set_log_level(const std::string& level);

}  // namespace liftrom
