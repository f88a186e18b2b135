#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fockdelay {

// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "FOCKDELAY_OUT";

// Writes to a temporary sibling and renames it over `path`, so readers never
// see a partial file. Creates missing parent directories.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Explicit flag first, then $FOCKDELAY_OUT; nullopt when neither is set.
std::optional<std::filesystem::path> resolve_output_dir(const std::optional<std::string>& flag);

// Human-readable value with an SI prefix, e.g. 1.5e-6 s -> "1.5 us".
std::string with_si_prefix(double value, const std::string& unit, int digits = 6);

// Two-column terminal table with an optional title.
class TextTable {
 public:
  explicit TextTable(std::string title = {}) : title_(std::move(title)) {}
  void add(std::string label, std::string value);
  void add_rule();
  void render(std::ostream& out) const;

 private:
  std::string title_;
  std::vector<std::pair<std::string, std::string>> rows_;
};

}  // namespace fockdelay
