#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace padyn::cli {

using Json = nlohmann::ordered_json;

/// Shortest round-trip decimal form.
std::string num(double x);

/// Write to a temporary sibling, then rename over path.
void write_atomic(const std::filesystem::path& path, const std::string& content);
void write_json(const std::filesystem::path& path, const Json& j);

class Csv {
 public:
  explicit Csv(std::vector<std::string> header);
  Csv& row(const std::vector<std::string>& cells);
  std::string str() const { return text_; }

 private:
  size_t cols_;
  std::string text_;
};

/// Self-contained SVG: histogram of xs with an optional N(0, sigma2) density overlay.
std::string histogram_svg(const std::vector<double>& xs, int bins, double sigma2, const std::string& title);

}  // namespace padyn::cli
