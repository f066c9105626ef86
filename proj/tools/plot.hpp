#pragma once

// Minimal line-plot renderer writing 8-bit RGB PNG files (zlib deflate).
// Good enough for overlaid curves with a legend; no text beyond a small
// built-in 5x7 digit/letter font for axis labels.

#include <cstdint>
#include <string>
#include <vector>

namespace spcli {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::uint32_t color = 0x1f77b4;  // 0xRRGGBB
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
  int width = 900;
  int height = 600;
};

void write_plot_png(const std::string& path, const PlotSpec& spec);

}  // namespace spcli
