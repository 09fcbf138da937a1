#include "adcraft/errors.hpp"

namespace adcraft {

namespace {

std::string join_ids(const std::vector<std::string>& ids)
{
    std::string out;
    for (const auto& id : ids)
        out += (out.empty() ? "" : ", ") + id;
    return out;
}

} // namespace

CyclicReference::CyclicReference(std::vector<std::string> ids)
    : Error("CyclicReference", "cyclic reference among [" + join_ids(ids) + "]"), ids_(std::move(ids))
{
}

FormatError::FormatError(std::size_t line, const std::string& reason)
    : Error("FormatError", "line " + std::to_string(line) + ": " + reason), line_(line)
{
}

} // namespace adcraft
