#pragma once

// Internal helpers for the line-oriented text formats.

#include <charconv>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "xorcode/error.hpp"

namespace xorcode::detail {

struct Line {
    std::string_view text;
    std::size_t offset;  // byte offset of the line start in the whole input
};

// Splits on '\n', strips '\r' and '#' comments, drops lines that are blank
// after stripping.
inline std::vector<Line> content_lines(std::string_view input) {
    std::vector<Line> out;
    std::size_t pos = 0;
    while (pos <= input.size()) {
        std::size_t end = input.find('\n', pos);
        if (end == std::string_view::npos) end = input.size();
        std::string_view line = input.substr(pos, end - pos);
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.remove_suffix(1);
        std::size_t lead = 0;
        while (lead < line.size() && (line[lead] == ' ' || line[lead] == '\t')) ++lead;
        if (lead < line.size()) out.push_back({line.substr(lead), pos + lead});
        if (end == input.size()) break;
        pos = end + 1;
    }
    return out;
}

struct Token {
    std::string_view text;
    std::size_t offset;
};

inline std::vector<Token> tokens(const Line& line) {
    std::vector<Token> out;
    std::size_t i = 0;
    const auto s = line.text;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
        if (i > start) out.push_back({s.substr(start, i - start), line.offset + start});
    }
    return out;
}

inline std::size_t to_count(const Token& t) {
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size())
        throw ParseError("expected a non-negative integer, got '" + std::string(t.text) + "'", t.offset);
    return value;
}

}  // namespace xorcode::detail
