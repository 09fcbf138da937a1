#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "adcraft/blueprint.hpp"
#include "adcraft/errors.hpp"

namespace adcraft {

/// One schema problem, addressed by a JSON-pointer-like path.
struct Violation {
    std::string code; // missing_field, wrong_type, unknown_kind, dangling_reference, ...
    std::string path;
    std::string message;

    std::string to_string() const { return path + ": " + message; }
    bool operator==(const Violation&) const = default;
};

/// Violation list rendered one per line, suitable for a repair prompt.
std::string format_violations(const std::vector<Violation>& violations);

class SchemaViolation : public Error {
public:
    explicit SchemaViolation(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    std::vector<Violation> violations_;
};

struct ValidationOptions {
    /// When set, logo elements must reference one of these asset ids.
    std::optional<std::set<std::string>> known_assets;
};

/// Exactly one of `blueprint` / non-empty `violations` is meaningful.
struct ParseResult {
    std::optional<Blueprint> blueprint;
    std::vector<Violation> violations;

    bool ok() const { return blueprint.has_value(); }
};

/// Total: never throws, whatever the input text.
ParseResult parse_blueprint(std::string_view text, const ValidationOptions& options = {});
ParseResult parse_blueprint(const nlohmann::json& doc, const ValidationOptions& options = {});
inline ParseResult parse_blueprint(const std::string& text, const ValidationOptions& options = {})
{
    return parse_blueprint(std::string_view(text), options);
}
inline ParseResult parse_blueprint(const char* text, const ValidationOptions& options = {})
{
    return parse_blueprint(std::string_view(text), options);
}

/// Throwing form of parse_blueprint.
Blueprint validate_blueprint(std::string_view text, const ValidationOptions& options = {});

/// Checks an in-memory blueprint against the same invariants the parser enforces.
std::vector<Violation> check_blueprint(const Blueprint& bp, const ValidationOptions& options = {});

nlohmann::ordered_json to_json(const Blueprint& bp);
nlohmann::ordered_json to_json(const Element& e);

/// Canonical, deterministic, pretty-printed UTF-8 JSON.
std::string serialize_blueprint(const Blueprint& bp);

/// Pulls the JSON document out of a model reply: a fenced ```json block if
/// present, otherwise the span from the first '{' to the last '}'.
std::string extract_json_document(std::string_view reply);

} // namespace adcraft
