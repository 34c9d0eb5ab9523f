#include "doeblin/channel_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "doeblin/error.hpp"

namespace doeblin {

namespace {

std::vector<double> numeric_row(const nlohmann::json& r, const char* what) {
  if (!r.is_array()) throw ValidationError(std::string(what) + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(r.size());
  for (const auto& x : r) {
    if (!x.is_number()) throw ValidationError(std::string(what) + ": non-numeric entry");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<std::string> label_list(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) return {};
  const auto& a = j.at(key);
  if (!a.is_array()) throw ValidationError(std::string(key) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& s : a) {
    if (!s.is_string()) throw ValidationError(std::string(key) + " must be an array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_csv_line(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cell = trim(cell);
    if (cell.empty()) return false;
    double v = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (*first == '+') ++first;
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || p != last) return false;
    out.push_back(v);
  }
  return !out.empty();
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(text);
  std::string line;
  bool first = true;
  std::size_t lineno = 0;
  std::vector<double> row;
  while (std::getline(ss, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (!parse_csv_line(line, row)) {
      if (first) {
        first = false;
        continue;
      }
      throw ValidationError("csv line " + std::to_string(lineno) + ": not a list of decimals");
    }
    first = false;
    rows.push_back(row);
  }
  if (rows.empty()) throw ValidationError("csv: no numeric rows");
  return rows;
}

bool looks_like_json(const std::string& text) {
  const auto b = text.find_first_not_of(" \t\r\n");
  return b != std::string::npos && (text[b] == '{' || text[b] == '[');
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

nlohmann::json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(what + ": malformed JSON (" + e.what() + ")");
  }
}

Channel channel_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("rows")) throw ValidationError("channel JSON needs a \"rows\" array");
  const auto& r = j.at("rows");
  if (!r.is_array()) throw ValidationError("channel JSON: \"rows\" must be an array");
  std::vector<std::vector<double>> rows;
  for (const auto& row : r) rows.push_back(numeric_row(row, "channel row"));
  return Channel(rows, label_list(j, "input_labels"), label_list(j, "output_labels"));
}

Channel channel_from_csv(const std::string& text) { return Channel(csv_rows(text)); }

Channel read_channel_file(const std::string& path) {
  const std::string text = read_text_file(path);
  if (looks_like_json(text)) return channel_from_json(parse_json_text(text, path));
  return channel_from_csv(text);
}

std::vector<Pmf> read_pmf_files(const std::vector<std::string>& paths) {
  std::vector<Pmf> out;
  for (const auto& path : paths) {
    const std::string text = read_text_file(path);
    if (!looks_like_json(text)) {
      for (auto& r : csv_rows(text)) out.emplace_back(std::move(r));
      continue;
    }
    const auto j = parse_json_text(text, path);
    if (j.is_object()) {
      for (auto& p : channel_from_json(j).rows()) out.push_back(std::move(p));
    } else if (!j.empty() && j.front().is_array()) {
      for (const auto& r : j) out.emplace_back(numeric_row(r, "pmf"));
    } else {
      out.emplace_back(numeric_row(j, "pmf"));
    }
  }
  return out;
}

}  // namespace doeblin
