#pragma once

#include <memory>

#include <spdlog/spdlog.h>

namespace hrgraph {

// Shared stderr logger. Level comes from the EG_LOG environment variable
// (trace, debug, info, warn, error, off); defaults to warn.
std::shared_ptr<spdlog::logger> logger();

}  // namespace hrgraph
