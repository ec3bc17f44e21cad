#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace wrcast {

using WarningSink = std::function<void(std::string_view)>;

// Non-fatal diagnostics (skipped series, fallbacks). Default sink prints to stderr.
void warn(std::string_view message);

// Returns the previous sink. Passing an empty function silences warnings.
WarningSink set_warning_sink(WarningSink sink);

}  // namespace wrcast
