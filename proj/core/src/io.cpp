#include "fockdelay/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "fockdelay/errors.hpp"
#include "fockdelay/format.hpp"

namespace fockdelay {

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw ValidationError("output", "cannot create " + path.parent_path().string());
  }
  std::filesystem::path temp = path;
  temp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("output", "cannot write " + temp.string());
    out << content;
    out.flush();
    if (!out) throw ValidationError("output", "write failed for " + temp.string());
  }
  std::filesystem::rename(temp, path, ec);
  if (ec) {
    std::filesystem::remove(temp, ec);
    throw ValidationError("output", "cannot move output into place at " + path.string());
  }
}

std::optional<std::filesystem::path> resolve_output_dir(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return std::filesystem::path(*flag);
  if (const char* env = std::getenv(kOutputDirEnv); env && *env) return std::filesystem::path(env);
  return std::nullopt;
}

std::string with_si_prefix(double value, const std::string& unit, int digits) {
  if (!std::isfinite(value)) return shortest(value) + (unit.empty() ? "" : " " + unit);
  struct Prefix {
    double scale;
    const char* name;
  };
  static const Prefix prefixes[] = {{1e9, "G"},  {1e6, "M"},  {1e3, "k"},   {1.0, ""},
                                    {1e-3, "m"}, {1e-6, "u"}, {1e-9, "n"}, {1e-12, "p"},
                                    {1e-15, "f"}};
  const double mag = std::abs(value);
  Prefix chosen{1.0, ""};
  if (mag > 0.0 && !unit.empty()) {
    chosen = prefixes[std::size(prefixes) - 1];
    for (const auto& p : prefixes) {
      if (mag >= p.scale * 0.9999999) {
        chosen = p;
        break;
      }
    }
  }
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*g", digits, value / chosen.scale);
  std::string text = buffer;
  if (!unit.empty()) text += std::string(" ") + chosen.name + unit;
  return text;
}

void TextTable::add(std::string label, std::string value) {
  rows_.emplace_back(std::move(label), std::move(value));
}

void TextTable::add_rule() { rows_.emplace_back("\x01", ""); }

void TextTable::render(std::ostream& out) const {
  std::size_t width = 0;
  for (const auto& [label, value] : rows_) width = std::max(width, label.size());
  if (!title_.empty()) out << title_ << '\n';
  for (const auto& [label, value] : rows_) {
    if (label == "\x01") {
      out << std::string(width + 2, '-') << '\n';
      continue;
    }
    out << "  " << label << std::string(width - label.size() + 2, ' ') << value << '\n';
  }
}

}  // namespace fockdelay
