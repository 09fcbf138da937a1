#include "adcraft/request.hpp"

#include <charconv>
#include <filesystem>

#include "adcraft/errors.hpp"
#include "adcraft/image.hpp"

namespace adcraft {

void check_request(const BannerRequest& req)
{
    if (req.width < 1 || req.height < 1)
        throw InvalidArgument("request " + req.id + ": width and height must be >= 1");
    if (!std::filesystem::exists(req.logo))
        throw InvalidArgument("request " + req.id + ": logo not found: " + req.logo);
    try {
        (void)load_png(req.logo);
    } catch (const Error& e) {
        throw InvalidArgument("request " + req.id + ": logo does not decode: " + e.what());
    }
}

std::optional<CanvasSize> parse_size(std::string_view text)
{
    std::size_t sep = std::string_view::npos;
    std::size_t sep_len = 1;
    if (auto p = text.find("×"); p != std::string_view::npos) {
        sep = p;
        sep_len = std::string_view("×").size();
    } else {
        sep = text.find_first_of("xX");
    }
    if (sep == std::string_view::npos)
        return std::nullopt;
    auto parse_int = [](std::string_view s) -> std::optional<int> {
        while (!s.empty() && s.front() == ' ')
            s.remove_prefix(1);
        while (!s.empty() && s.back() == ' ')
            s.remove_suffix(1);
        int v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size() || v < 1)
            return std::nullopt;
        return v;
    };
    auto w = parse_int(text.substr(0, sep));
    auto h = parse_int(text.substr(sep + sep_len));
    if (!w || !h)
        return std::nullopt;
    return CanvasSize{*w, *h};
}

std::string format_size(CanvasSize size)
{
    return std::to_string(size.width) + "x" + std::to_string(size.height);
}

std::vector<CanvasSize> parse_size_list(std::string_view text)
{
    std::vector<CanvasSize> out;
    while (!text.empty()) {
        auto comma = text.find(',');
        auto item = text.substr(0, comma);
        auto size = parse_size(item);
        if (!size)
            throw InvalidArgument("invalid size '" + std::string(item) + "' (expected WxH)");
        out.push_back(*size);
        if (comma == std::string_view::npos)
            break;
        text.remove_prefix(comma + 1);
    }
    return out;
}

} // namespace adcraft
