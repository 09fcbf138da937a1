#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "adcraft/backends/chat.hpp"
#include "adcraft/backends/cost.hpp"
#include "adcraft/backends/t2i.hpp"
#include "adcraft/layout/text_metrics.hpp"

namespace adcraft::backends {

struct ChatConfig {
    std::string provider = "scripted"; // scripted | openai | anthropic
    std::string base_url;
    std::string model;
    std::string api_key_env;
    double temperature = 0.3;
    int max_tokens = 4096;
    int timeout_seconds = 120;
    RetryPolicy retry;
    /// scripted only: replies served before the built-in demo responders.
    std::vector<std::string> replies;
};

struct T2IConfig {
    std::string provider = "stub"; // stub | http
    std::string base_url;
    std::string model;
    std::string api_key_env;
    int timeout_seconds = 300;
    SizeTable sizes = default_t2i_sizes();
    std::string negative_prompt{default_negative_prompt};
    /// stub only: the first n images carry glyph marks.
    int force_text_first_n = 0;
    RetryPolicy retry;
};

struct PipelineConfig {
    int refine_iters = 0; // refinement rounds after the initial design
    int variations = 0;
    bool figma = false;
    bool clamp = false;
    double clamp_margin = 0.0;
    bool embed_assets = true;
    int workers = 4;
    int max_blueprint_repairs = 2;
    int max_background_attempts = 5;
    double logo_alpha_threshold = 0.0;
    layout::TextMetricsTable metrics;
};

struct AppConfig {
    ChatConfig chat;
    /// Judge for evaluation; defaults to the chat config at temperature 0.
    ChatConfig judge;
    T2IConfig t2i;
    Rates rates;
    std::optional<std::string> rasterizer_command;
    PipelineConfig pipeline;
    std::uint64_t seed = 0;
    std::optional<std::filesystem::path> resource_dir;
};

/// All-offline defaults: scripted chat, stub T2I, built-in compositor.
AppConfig default_config();

/// Missing keys keep their defaults. Credentials are never read from the
/// file: any key named like "api_key" is rejected. Throws ConfigError.
AppConfig config_from_json(const nlohmann::json& j);
AppConfig load_config(const std::filesystem::path& path);

std::shared_ptr<ChatProvider> make_chat_provider(const ChatConfig& cfg, std::uint64_t seed);
std::shared_ptr<T2IProvider> make_t2i_provider(const T2IConfig& cfg);

} // namespace adcraft::backends
