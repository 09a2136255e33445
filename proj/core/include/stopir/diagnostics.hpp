#pragma once

#include <functional>
#include <string_view>

namespace stopir {

using WarningSink = std::function<void(std::string_view)>;

/// Installs the process-wide warning sink and returns the previous one.
/// The default sink discards warnings.
auto set_warning_sink(WarningSink sink) -> WarningSink;

/// Emits a warning through the current sink. Thread-safe.
void warn(std::string_view message);

}  // namespace stopir
