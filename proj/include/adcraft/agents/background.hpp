#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "adcraft/backends/chat.hpp"
#include "adcraft/backends/t2i.hpp"
#include "adcraft/image.hpp"
#include "adcraft/request.hpp"
#include "adcraft/run_record.hpp"

namespace adcraft::agents {

struct TrimResult {
    Image image;
    PixelRect crop;
};

/// Crops to the tight box of pixels whose alpha exceeds threshold * 255.
/// Throws EmptyLogo when no pixel qualifies.
TrimResult trim_logo(const Image& logo, double alpha_threshold = 0.0);

inline constexpr std::string_view image_extensions[] = {".png", ".jpg", ".jpeg", ".webp", ".bmp", ".gif"};

/// First path-like token in `text` with an image extension that exists on
/// disk and is not the logo. Relative tokens resolve against `base_dir`.
std::optional<std::filesystem::path> find_image_path(std::string_view text, const std::filesystem::path& logo,
                                                     const std::filesystem::path& base_dir = {});

/// Among sizes covering the target, the one closest in log aspect ratio
/// (ties: smaller area); when none covers it, the closest aspect overall.
CanvasSize select_t2i_size(CanvasSize target, const backends::SizeTable& sizes);

/// Center crop to the target aspect, then resize to exactly (w, h).
Image fit_image(const Image& img, int w, int h);

/// Pixel rectangle fit_image crops from a (src_w x src_h) image.
PixelRect aspect_crop(int src_w, int src_h, int w, int h);

struct BackgroundOptions {
    int max_attempts = 5;
    std::string negative_prompt{backends::default_negative_prompt};
    std::uint64_t seed = 0;
    /// Directory that relative paths in the requirement text resolve against.
    std::filesystem::path base_dir;
};

struct BackgroundResult {
    /// Fitted to the banner size.
    Image image;
    BackgroundProvenance provenance;
};

/// Existing image named in the requirements, else up to `max_attempts`
/// rounds of describe, generate, check for text; on text the next round
/// revises the description. The last image is returned even when it still
/// has text (flagged in the provenance).
BackgroundResult prepare_background(const BannerRequest& req, const BannerObjectives& objectives, const Image& logo,
                                    backends::ChatClient& chat, backends::ImageClient& images,
                                    const BackgroundOptions& options = {});

/// True when the checker reply starts with "yes" (case-insensitive, after
/// whitespace and markup).
bool checker_says_text(const std::string& reply);

} // namespace adcraft::agents
