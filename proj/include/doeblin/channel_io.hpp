#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "doeblin/channel.hpp"

namespace doeblin {

/// {"rows": [[...]], "input_labels": [...]?, "output_labels": [...]?}
Channel channel_from_json(const nlohmann::json& j);
/// One row per line, comma separated. A first line that does not parse as
/// numbers is a header and is dropped. Blank lines are skipped.
Channel channel_from_csv(const std::string& text);
/// Dispatches on content: a leading '{' or '[' means JSON.
Channel read_channel_file(const std::string& path);

/// PMFs for fusion: a JSON array, an array of arrays, a channel object,
/// or CSV lines. Several files concatenate.
std::vector<Pmf> read_pmf_files(const std::vector<std::string>& paths);

std::string read_text_file(const std::string& path);
nlohmann::json parse_json_text(const std::string& text, const std::string& what);

}  // namespace doeblin
