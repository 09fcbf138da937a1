#include "adcraft/resources.hpp"

#include <cstdlib>
#include <mutex>

#include "adcraft/errors.hpp"
#include "adcraft/image.hpp"

namespace adcraft {

namespace {

std::mutex override_mutex;
std::optional<std::filesystem::path> override_dir;
bool override_set = false;

std::optional<std::filesystem::path> current_override()
{
    std::lock_guard lock(override_mutex);
    if (override_set)
        return override_dir;
    if (const char* env = std::getenv("ADCRAFT_RESOURCE_DIR"); env && *env)
        return std::filesystem::path(env);
    return std::nullopt;
}

} // namespace

void set_resource_override_dir(std::optional<std::filesystem::path> dir)
{
    std::lock_guard lock(override_mutex);
    override_dir = std::move(dir);
    override_set = true;
}

std::optional<std::string> find_resource(std::string_view name)
{
    if (auto dir = current_override()) {
        auto p = *dir / std::string(name);
        std::error_code ec;
        if (std::filesystem::is_regular_file(p, ec))
            return read_text_file(p);
    }
    for (const auto& [key, value] : detail::embedded_resources())
        if (key == name)
            return std::string(value);
    return std::nullopt;
}

std::string load_resource(std::string_view name)
{
    if (auto r = find_resource(name))
        return *r;
    throw ConfigError("resource \"" + std::string(name) + "\" not found");
}

std::vector<std::string> resource_names()
{
    std::vector<std::string> out;
    for (const auto& [key, value] : detail::embedded_resources())
        out.emplace_back(key);
    return out;
}

std::string fill_template(std::string_view text, const std::vector<std::pair<std::string, std::string>>& values)
{
    std::string out(text);
    for (const auto& [key, value] : values) {
        const std::string needle = "{{" + key + "}}";
        std::size_t pos = 0;
        while ((pos = out.find(needle, pos)) != std::string::npos) {
            out.replace(pos, needle.size(), value);
            pos += value.size();
        }
    }
    return out;
}

} // namespace adcraft
