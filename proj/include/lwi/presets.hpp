#ifndef LWI_PRESETS_HPP
#define LWI_PRESETS_HPP

#include <lwi/config.hpp>

#include <string>

namespace lwi {

/// Commented YAML defaults for a scenario. Every value is set, so the
/// preset alone resolves to a complete RunConfig.
std::string preset_text(Scenario scenario);

/// One-line description for `presets list`.
std::string preset_summary(Scenario scenario);

} // namespace lwi

#endif
