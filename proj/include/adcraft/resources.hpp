#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace adcraft {

/// Text resources (prompt templates, rubrics, the Figma template) are compiled
/// into the library. A file with the same relative name under the override
/// directory wins; the override directory comes from set_resource_override_dir
/// or the ADCRAFT_RESOURCE_DIR environment variable.
void set_resource_override_dir(std::optional<std::filesystem::path> dir);

std::optional<std::string> find_resource(std::string_view name);
/// Throws ConfigError when the resource does not exist.
std::string load_resource(std::string_view name);
std::vector<std::string> resource_names();

/// Replaces every "{{key}}" in `text`. Unknown placeholders are left alone.
std::string fill_template(std::string_view text, const std::vector<std::pair<std::string, std::string>>& values);

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& embedded_resources();
}

} // namespace adcraft
