#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "adcraft/blueprint.hpp"
#include "adcraft/layout/resolve.hpp"
#include "adcraft/render/assets.hpp"

namespace adcraft::render {

inline constexpr std::string_view figma_image_list_placeholder = "{{IMAGE_LIST}}";
inline constexpr std::string_view figma_elements_placeholder = "{{ELEMENTS}}";

/// Helper functions every template must define and the emitted calls use.
const std::vector<std::string>& figma_required_functions();

/// Template shipped with the library.
std::string default_figma_template();

struct FigmaPlugin {
    std::string code;
    nlohmann::json manifest;
    std::vector<std::string> image_list;
};

struct FigmaOptions {
    std::string plugin_name = "Banner Import";
    std::string frame_name = "Banner";
};

/// Fills the template: the image list, then a background call followed by one
/// creation call per element in z-order. Throws BadTemplate, MissingAsset.
FigmaPlugin emit_figma_plugin(const layout::ResolvedLayout& layout, const Blueprint& bp, const AssetStore& assets,
                              std::string_view template_text, const FigmaOptions& options = {});

struct FigmaStructure {
    bool has_required_functions = false;
    std::vector<std::string> missing_functions;
    int background_calls = 0;
    int element_calls = 0;
    /// Element ids in call order.
    std::vector<std::string> ids;
};

/// Static check of emitted code: helper definitions present and creation
/// call sites counted. The code is not executed.
FigmaStructure validate_figma_code(std::string_view code);

} // namespace adcraft::render
