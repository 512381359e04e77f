#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace l2t {

// Plain-text `key = value` files. Blank lines and lines starting with '#'
// are ignored; keys and values are trimmed. A later duplicate key wins.
using KeyValues = std::map<std::string, std::string, std::less<>>;

KeyValues parse_key_values(std::string_view text);
KeyValues load_key_values(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

}  // namespace l2t
