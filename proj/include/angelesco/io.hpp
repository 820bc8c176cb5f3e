#pragma once

// Output plumbing: atomic file writes, CSV rows at precision-matched digit
// counts, JSON export of contour paths.

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "path.hpp"

namespace angelesco {

// write to a sibling temp file, then rename over the target
inline void atomic_write(const std::string &path, const std::string &content) {
  std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error("cannot open " + tmp + " for writing");
    out << content;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw Error("write to " + tmp + " failed");
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error("cannot rename " + tmp + " to " + path);
  }
}

inline std::string format_real(const Real &x, int digits) { return x.str(digits); }

class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header) : width_(header.size()) { row(header); }

  void row(const std::vector<std::string> &cells) {
    if (cells.size() != width_)
      throw Error("csv row has " + std::to_string(cells.size()) + " cells, expected " + std::to_string(width_));
    for (std::size_t i = 0; i < cells.size(); ++i)
      text_ << (i ? "," : "") << cells[i];
    text_ << '\n';
  }
  std::string str() const { return text_.str(); }

private:
  std::size_t width_;
  std::ostringstream text_;
};

inline nlohmann::json complex_json(const Complex &z) { return {z.re.to_double(), z.im.to_double()}; }

// segment list with endpoints plus a few interior samples per segment
inline nlohmann::json path_to_json(const ContourPath &p, int samples = 8) {
  nlohmann::json segs = nlohmann::json::array();
  for (const auto &s : p.segments) {
    nlohmann::json pts = nlohmann::json::array();
    for (int i = 0; i <= samples; ++i)
      pts.push_back(complex_json(s.at(Real(i) / samples).z));
    segs.push_back({{"kind", s.kind()},
                    {"start", complex_json(s.start())},
                    {"end", complex_json(s.end())},
                    {"truncated_tail", s.truncated_tail},
                    {"samples", pts}});
  }
  const char *cut = p.branch_cut == BranchCut::NegativeReal   ? "negative_real"
                    : p.branch_cut == BranchCut::PositiveReal ? "positive_real"
                                                              : "none";
  return {{"name", p.name}, {"branch_cut", cut}, {"segments", segs}};
}

} // namespace angelesco
