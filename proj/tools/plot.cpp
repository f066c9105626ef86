#include "plot.hpp"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace spcli {
namespace {

// 5x7 bitmap glyphs for the characters used in labels.
struct Glyph {
  char c;
  std::uint8_t rows[7];  // 5 low bits per row, MSB left
};

constexpr Glyph kGlyphs[] = {
    {'0', {0x0e, 0x11, 0x13, 0x15, 0x19, 0x11, 0x0e}},
    {'1', {0x04, 0x0c, 0x04, 0x04, 0x04, 0x04, 0x0e}},
    {'2', {0x0e, 0x11, 0x01, 0x02, 0x04, 0x08, 0x1f}},
    {'3', {0x1f, 0x02, 0x04, 0x02, 0x01, 0x11, 0x0e}},
    {'4', {0x02, 0x06, 0x0a, 0x12, 0x1f, 0x02, 0x02}},
    {'5', {0x1f, 0x10, 0x1e, 0x01, 0x01, 0x11, 0x0e}},
    {'6', {0x06, 0x08, 0x10, 0x1e, 0x11, 0x11, 0x0e}},
    {'7', {0x1f, 0x01, 0x02, 0x04, 0x08, 0x08, 0x08}},
    {'8', {0x0e, 0x11, 0x11, 0x0e, 0x11, 0x11, 0x0e}},
    {'9', {0x0e, 0x11, 0x11, 0x0f, 0x01, 0x02, 0x0c}},
    {'.', {0x00, 0x00, 0x00, 0x00, 0x00, 0x0c, 0x0c}},
    {'-', {0x00, 0x00, 0x00, 0x1f, 0x00, 0x00, 0x00}},
    {'+', {0x00, 0x04, 0x04, 0x1f, 0x04, 0x04, 0x00}},
    {'=', {0x00, 0x00, 0x1f, 0x00, 0x1f, 0x00, 0x00}},
    {'/', {0x01, 0x01, 0x02, 0x04, 0x08, 0x10, 0x10}},
    {'(', {0x02, 0x04, 0x08, 0x08, 0x08, 0x04, 0x02}},
    {')', {0x08, 0x04, 0x02, 0x02, 0x02, 0x04, 0x08}},
    {',', {0x00, 0x00, 0x00, 0x00, 0x0c, 0x04, 0x08}},
    {' ', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00}},
    {'a', {0x00, 0x00, 0x0e, 0x01, 0x0f, 0x11, 0x0f}},
    {'b', {0x10, 0x10, 0x1e, 0x11, 0x11, 0x11, 0x1e}},
    {'c', {0x00, 0x00, 0x0e, 0x11, 0x10, 0x11, 0x0e}},
    {'d', {0x01, 0x01, 0x0f, 0x11, 0x11, 0x11, 0x0f}},
    {'e', {0x00, 0x00, 0x0e, 0x11, 0x1f, 0x10, 0x0e}},
    {'f', {0x06, 0x08, 0x1c, 0x08, 0x08, 0x08, 0x08}},
    {'g', {0x00, 0x0f, 0x11, 0x11, 0x0f, 0x01, 0x0e}},
    {'h', {0x10, 0x10, 0x1e, 0x11, 0x11, 0x11, 0x11}},
    {'i', {0x04, 0x00, 0x0c, 0x04, 0x04, 0x04, 0x0e}},
    {'l', {0x0c, 0x04, 0x04, 0x04, 0x04, 0x04, 0x0e}},
    {'m', {0x00, 0x00, 0x1a, 0x15, 0x15, 0x15, 0x15}},
    {'n', {0x00, 0x00, 0x1e, 0x11, 0x11, 0x11, 0x11}},
    {'o', {0x00, 0x00, 0x0e, 0x11, 0x11, 0x11, 0x0e}},
    {'p', {0x00, 0x1e, 0x11, 0x11, 0x1e, 0x10, 0x10}},
    {'q', {0x00, 0x0f, 0x11, 0x11, 0x0f, 0x01, 0x01}},
    {'r', {0x00, 0x00, 0x16, 0x19, 0x10, 0x10, 0x10}},
    {'s', {0x00, 0x00, 0x0f, 0x10, 0x0e, 0x01, 0x1e}},
    {'t', {0x08, 0x08, 0x1c, 0x08, 0x08, 0x09, 0x06}},
    {'u', {0x00, 0x00, 0x11, 0x11, 0x11, 0x13, 0x0d}},
    {'v', {0x00, 0x00, 0x11, 0x11, 0x11, 0x0a, 0x04}},
    {'w', {0x00, 0x00, 0x15, 0x15, 0x15, 0x15, 0x0a}},
    {'x', {0x00, 0x00, 0x11, 0x0a, 0x04, 0x0a, 0x11}},
    {'y', {0x00, 0x11, 0x11, 0x0f, 0x01, 0x11, 0x0e}},
    {'z', {0x00, 0x00, 0x1f, 0x02, 0x04, 0x08, 0x1f}},
    {'_', {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x1f}},
};

class Canvas {
 public:
  Canvas(int width, int height)
      : width_(width), height_(height),
        pixels_(std::size_t(width) * height * 3, 0xff) {}

  void set(int x, int y, std::uint32_t rgb) {
    if (x < 0 || y < 0 || x >= width_ || y >= height_) return;
    auto* p = &pixels_[(std::size_t(y) * width_ + x) * 3];
    p[0] = std::uint8_t(rgb >> 16);
    p[1] = std::uint8_t(rgb >> 8);
    p[2] = std::uint8_t(rgb);
  }

  void line(double x0, double y0, double x1, double y1, std::uint32_t rgb) {
    const double dx = x1 - x0, dy = y1 - y0;
    const int steps = std::max(2, int(std::ceil(std::hypot(dx, dy) * 1.5)));
    for (int s = 0; s <= steps; ++s) {
      const double t = double(s) / steps;
      const int x = int(std::lround(x0 + t * dx));
      const int y = int(std::lround(y0 + t * dy));
      set(x, y, rgb);
      set(x + 1, y, rgb);  // 2px stroke for visibility
    }
  }

  void text(int x, int y, const std::string& s, std::uint32_t rgb) {
    for (char raw : s) {
      const char c = char(std::tolower(static_cast<unsigned char>(raw)));
      for (const auto& glyph : kGlyphs) {
        if (glyph.c != c) continue;
        for (int row = 0; row < 7; ++row) {
          for (int col = 0; col < 5; ++col) {
            if (glyph.rows[row] & (0x10 >> col)) set(x + col, y + row, rgb);
          }
        }
        break;
      }
      x += 6;
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<std::uint8_t>& pixels() const { return pixels_; }

 private:
  int width_, height_;
  std::vector<std::uint8_t> pixels_;
};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(std::uint8_t(v >> 24));
  out.push_back(std::uint8_t(v >> 16));
  out.push_back(std::uint8_t(v >> 8));
  out.push_back(std::uint8_t(v));
}

void put_chunk(std::vector<std::uint8_t>& out, const char type[5],
               const std::vector<std::uint8_t>& data) {
  put_u32(out, std::uint32_t(data.size()));
  const std::size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), data.begin(), data.end());
  const auto crc =
      crc32(0, out.data() + start, uInt(out.size() - start));
  put_u32(out, std::uint32_t(crc));
}

void write_png(const std::string& path, const Canvas& canvas) {
  // Raw scanlines with filter byte 0.
  std::vector<std::uint8_t> raw;
  raw.reserve(std::size_t(canvas.height()) * (canvas.width() * 3 + 1));
  for (int y = 0; y < canvas.height(); ++y) {
    raw.push_back(0);
    const auto* row = &canvas.pixels()[std::size_t(y) * canvas.width() * 3];
    raw.insert(raw.end(), row, row + canvas.width() * 3);
  }
  uLongf bound = compressBound(uLong(raw.size()));
  std::vector<std::uint8_t> deflated(bound);
  if (compress2(deflated.data(), &bound, raw.data(), uLong(raw.size()), 6) !=
      Z_OK) {
    throw std::runtime_error("png deflate failed");
  }
  deflated.resize(bound);

  std::vector<std::uint8_t> png = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  std::vector<std::uint8_t> ihdr;
  put_u32(ihdr, std::uint32_t(canvas.width()));
  put_u32(ihdr, std::uint32_t(canvas.height()));
  ihdr.push_back(8);  // bit depth
  ihdr.push_back(2);  // truecolor
  ihdr.push_back(0);
  ihdr.push_back(0);
  ihdr.push_back(0);
  put_chunk(png, "IHDR", ihdr);
  put_chunk(png, "IDAT", deflated);
  put_chunk(png, "IEND", {});

  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path temp = target.string() + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + temp.string());
    out.write(reinterpret_cast<const char*>(png.data()),
              std::streamsize(png.size()));
  }
  fs::rename(temp, target);
}

std::string format_tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

}  // namespace

void write_plot_png(const std::string& path, const PlotSpec& spec) {
  Canvas canvas(spec.width, spec.height);
  const int margin_left = 70, margin_right = 20, margin_top = 30,
            margin_bottom = 50;
  const int x0 = margin_left, x1 = spec.width - margin_right;
  const int y0 = spec.height - margin_bottom, y1 = margin_top;

  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : spec.series) {
    for (double v : s.x) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
    for (double v : s.y) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
  }
  if (!(xmax > xmin)) { xmax = xmin + 1.0; }
  if (!(ymax > ymin)) { ymax = ymin + 1.0; }
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  auto px = [&](double x) {
    return x0 + (x - xmin) / (xmax - xmin) * (x1 - x0);
  };
  auto py = [&](double y) {
    return y0 + (y - ymin) / (ymax - ymin) * (y1 - y0);
  };

  // Axes and ticks.
  canvas.line(x0, y0, x1, y0, 0x000000);
  canvas.line(x0, y0, x0, y1, 0x000000);
  for (int t = 0; t <= 5; ++t) {
    const double xv = xmin + (xmax - xmin) * t / 5.0;
    const double yv = ymin + (ymax - ymin) * t / 5.0;
    canvas.line(px(xv), y0, px(xv), y0 + 4, 0x000000);
    canvas.text(int(px(xv)) - 12, y0 + 8, format_tick(xv), 0x000000);
    canvas.line(x0 - 4, py(yv), x0, py(yv), 0x000000);
    canvas.text(8, int(py(yv)) - 3, format_tick(yv), 0x000000);
  }
  canvas.text((x0 + x1) / 2 - 3 * int(spec.x_label.size()), spec.height - 14,
              spec.x_label, 0x000000);
  canvas.text(8, 8, spec.y_label, 0x000000);
  canvas.text((x0 + x1) / 2 - 3 * int(spec.title.size()), 8, spec.title,
              0x000000);

  // Series and legend.
  int legend_y = y1 + 8;
  for (const auto& s : spec.series) {
    for (std::size_t i = 1; i < s.x.size(); ++i) {
      canvas.line(px(s.x[i - 1]), py(s.y[i - 1]), px(s.x[i]), py(s.y[i]),
                  s.color);
    }
    canvas.line(x1 - 120, legend_y + 3, x1 - 100, legend_y + 3, s.color);
    canvas.text(x1 - 94, legend_y, s.label, 0x000000);
    legend_y += 12;
  }
  write_png(path, canvas);
}

}  // namespace spcli
