#include "output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <unistd.h>

namespace padyn::cli {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_json(const std::filesystem::path& path, const Json& j) { write_atomic(path, j.dump(2) + "\n"); }

Csv::Csv(std::vector<std::string> header) : cols_(header.size()) { row(header); }

Csv& Csv::row(const std::vector<std::string>& cells) {
  if (cells.size() != cols_) throw std::logic_error("csv row width");
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    const auto& c = cells[i];
    if (c.find_first_of(",\"\n") != std::string::npos) {
      text_ += '"';
      for (char ch : c) {
        if (ch == '"') text_ += '"';
        text_ += ch;
      }
      text_ += '"';
    } else {
      text_ += c;
    }
  }
  text_ += '\n';
  return *this;
}

std::string histogram_svg(const std::vector<double>& xs, int bins, double sigma2, const std::string& title) {
  const double W = 640, H = 400, L = 50, R = 20, T = 40, B = 40;
  double lo = -1, hi = 1;
  if (!xs.empty()) {
    auto [a, b] = std::minmax_element(xs.begin(), xs.end());
    lo = *a;
    hi = *b;
  }
  if (sigma2 > 0) {
    const double s = std::sqrt(sigma2);
    lo = std::min(lo, -4 * s);
    hi = std::max(hi, 4 * s);
  }
  if (hi <= lo) hi = lo + 1;
  const double w = (hi - lo) / bins;
  std::vector<double> dens(bins, 0.0);
  for (double x : xs) dens[std::min(bins - 1, static_cast<int>((x - lo) / w))] += 1;
  for (auto& c : dens) c /= xs.empty() ? 1.0 : xs.size() * w;
  auto pdf = [&](double x) { return std::exp(-x * x / (2 * sigma2)) / std::sqrt(2 * M_PI * sigma2); };
  double top = *std::max_element(dens.begin(), dens.end());
  if (sigma2 > 0) top = std::max(top, pdf(0));
  if (top <= 0) top = 1;
  auto X = [&](double x) { return L + (x - lo) / (hi - lo) * (W - L - R); };
  auto Y = [&](double y) { return H - B - y / top * (H - T - B); };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(W) + "\" height=\"" + num(H) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(W / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" +
       title + "</text>\n";
  for (int i = 0; i < bins; ++i) {
    const double x0 = X(lo + i * w), x1 = X(lo + (i + 1) * w), y = Y(dens[i]);
    s += "<rect x=\"" + num(std::round(x0 * 100) / 100) + "\" y=\"" + num(std::round(y * 100) / 100) +
         "\" width=\"" + num(std::round((x1 - x0) * 100) / 100) + "\" height=\"" +
         num(std::round((H - B - y) * 100) / 100) + "\" fill=\"#9ab\" stroke=\"#567\"/>\n";
  }
  if (sigma2 > 0) {
    s += "<polyline fill=\"none\" stroke=\"#c33\" stroke-width=\"2\" points=\"";
    for (int i = 0; i <= 200; ++i) {
      const double x = lo + (hi - lo) * i / 200;
      if (i) s += ' ';
      s += num(std::round(X(x) * 100) / 100) + "," + num(std::round(Y(pdf(x)) * 100) / 100);
    }
    s += "\"/>\n";
  }
  s += "<line x1=\"" + num(L) + "\" y1=\"" + num(H - B) + "\" x2=\"" + num(W - R) + "\" y2=\"" + num(H - B) +
       "\" stroke=\"black\"/>\n";
  s += "<text x=\"" + num(L) + "\" y=\"" + num(H - 12) + "\" font-family=\"sans-serif\" font-size=\"11\">" +
       num(std::round(lo * 1000) / 1000) + "</text>\n";
  s += "<text x=\"" + num(W - R) + "\" y=\"" + num(H - 12) +
       "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + num(std::round(hi * 1000) / 1000) +
       "</text>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace padyn::cli
