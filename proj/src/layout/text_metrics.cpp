#include "adcraft/layout/text_metrics.hpp"

#include <algorithm>

#include "adcraft/errors.hpp"

namespace adcraft::layout {

double TextMetricsTable::advance_ratio(FontWeight w) const
{
    switch (w) {
    case FontWeight::normal: return advance_normal;
    case FontWeight::bold: return advance_bold;
    case FontWeight::black: return advance_black;
    }
    return advance_normal;
}

void TextMetricsTable::check() const
{
    for (double a : {advance_normal, advance_bold, advance_black})
        if (!(a > 0.0 && a <= 2.0))
            throw InvalidArgument("text advance ratio must be in (0, 2]");
    if (!(line_height >= 1.0 && line_height <= 2.0))
        throw InvalidArgument("line height ratio must be in [1, 2]");
}

namespace {

std::size_t utf8_seq_len(unsigned char lead)
{
    if (lead < 0x80)
        return 1;
    if ((lead >> 5) == 0x6)
        return 2;
    if ((lead >> 4) == 0xE)
        return 3;
    if ((lead >> 3) == 0x1E)
        return 4;
    return 1;
}

std::vector<std::string_view> split_code_points(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        std::size_t n = std::min(utf8_seq_len(static_cast<unsigned char>(s[i])), s.size() - i);
        out.push_back(s.substr(i, n));
        i += n;
    }
    return out;
}

} // namespace

std::size_t utf8_length(std::string_view s)
{
    return split_code_points(s).size();
}

TextMeasure measure_text(std::string_view content, const Style& style, const TextMetricsTable& metrics,
                         std::optional<double> max_width)
{
    const double advance = metrics.advance_ratio(style.font_weight) * style.font_size + style.letter_spacing;
    const double line_h = metrics.line_height * style.font_size;
    auto width_of = [&](std::size_t chars) { return static_cast<double>(chars) * advance; };

    TextMeasure m;
    if (content.empty()) {
        m.height = line_h;
        m.lines = {""};
        return m;
    }

    std::vector<std::string> lines;
    auto emit_paragraph = [&](std::string_view para) {
        if (!max_width) {
            lines.emplace_back(para);
            return;
        }
        std::string current;
        std::size_t current_len = 0;
        auto flush = [&] {
            lines.push_back(current);
            current.clear();
            current_len = 0;
        };
        std::size_t pos = 0;
        bool any_word = false;
        while (pos <= para.size()) {
            auto space = para.find(' ', pos);
            auto word = para.substr(pos, space == std::string_view::npos ? std::string_view::npos : space - pos);
            pos = space == std::string_view::npos ? para.size() + 1 : space + 1;
            if (word.empty())
                continue;
            any_word = true;
            auto cps = split_code_points(word);
            std::size_t needed = current_len == 0 ? cps.size() : current_len + 1 + cps.size();
            if (width_of(needed) <= *max_width) {
                if (current_len > 0) {
                    current += ' ';
                    ++current_len;
                }
                current.append(word);
                current_len += cps.size();
                continue;
            }
            if (current_len > 0)
                flush();
            if (width_of(cps.size()) <= *max_width) {
                current.assign(word);
                current_len = cps.size();
                continue;
            }
            // Break an over-long word between code points; each line holds at least one.
            for (auto cp : cps) {
                if (current_len > 0 && width_of(current_len + 1) > *max_width)
                    flush();
                current.append(cp);
                ++current_len;
            }
        }
        if (current_len > 0 || !any_word)
            lines.push_back(current);
    };

    std::size_t start = 0;
    while (true) {
        auto nl = content.find('\n', start);
        emit_paragraph(content.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start));
        if (nl == std::string_view::npos)
            break;
        start = nl + 1;
    }

    for (const auto& line : lines)
        m.width = std::max(m.width, width_of(utf8_length(line)));
    m.line_count = static_cast<int>(lines.size());
    m.height = m.line_count * line_h;
    m.lines = std::move(lines);
    return m;
}

} // namespace adcraft::layout
