#pragma once

#include <functional>
#include <string_view>

namespace zero {

using LogSink = std::function<void(std::string_view)>;

/// Warnings go to stderr unless a sink is installed. Thread-safe.
void log_warning(std::string_view message);

/// Installs `sink` and returns the previous one. An empty sink restores stderr.
LogSink set_log_sink(LogSink sink);

}  // namespace zero
