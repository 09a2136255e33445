#include "stopir/diagnostics.hpp"

#include <mutex>
#include <utility>

namespace stopir {

namespace {
std::mutex g_sink_mutex;
WarningSink g_sink;
}  // namespace

auto set_warning_sink(WarningSink sink) -> WarningSink {
    std::lock_guard lock(g_sink_mutex);
    return std::exchange(g_sink, std::move(sink));
}

void warn(std::string_view message) {
    std::lock_guard lock(g_sink_mutex);
    if (g_sink) {
        g_sink(message);
    }
}

}  // namespace stopir
