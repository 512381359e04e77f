#include "l2t/kv_config.hpp"

#include <fstream>
#include <sstream>

#include "l2t/error.hpp"
#include "l2t/text_util.hpp"

namespace l2t {

KeyValues parse_key_values(std::string_view text) {
  KeyValues out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string line = text::trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::InvalidConfig,
                  "line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = text::trim(std::string_view(line).substr(0, eq));
    if (key.empty()) {
      throw Error(ErrorCode::InvalidConfig,
                  "line " + std::to_string(line_no) + ": empty key");
    }
    out[key] = text::trim(std::string_view(line).substr(eq + 1));
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

KeyValues load_key_values(const std::filesystem::path& path) {
  return parse_key_values(read_file(path));
}

}  // namespace l2t
