#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "adcraft/image.hpp"

namespace adcraft::render {

class RasterizerInterface {
public:
    virtual ~RasterizerInterface() = default;
    /// Raster at the SVG's declared width/height.
    virtual Image rasterize(std::string_view svg) = 0;
};

/// Paints the background image, element boxes as flat fills and text lines as
/// filled bars. Understands the subset of SVG that emit_svg writes.
class BoxCompositor : public RasterizerInterface {
public:
    /// `base_dir` resolves relative image hrefs.
    explicit BoxCompositor(std::filesystem::path base_dir = {}) : base_dir_(std::move(base_dir)) {}
    Image rasterize(std::string_view svg) override;

    /// Width of a text bar per character, in font sizes.
    double glyph_advance = 0.55;

private:
    std::filesystem::path base_dir_;
};

/// Runs a configured command such as "rsvg-convert -o {out} {in}". `{in}` and
/// `{out}` are replaced by quoted temporary paths. Launches are serialized.
class ExternalCommandRasterizer : public RasterizerInterface {
public:
    explicit ExternalCommandRasterizer(std::string command);
    Image rasterize(std::string_view svg) override;

private:
    std::string command_;
    std::mutex mutex_;
};

/// External command when configured, the box compositor otherwise.
std::unique_ptr<RasterizerInterface> make_rasterizer(const std::optional<std::string>& command,
                                                     std::filesystem::path base_dir = {});

} // namespace adcraft::render
