#include "courtprior/draw.hpp"

#include <cmath>

#include "courtprior/scanline.hpp"

namespace courtprior {

namespace {

void put(Raster& img, int x, int y, Color c) {
  if (x < 0 || x >= img.width() || y < 0 || y >= img.height()) return;
  uint8_t* p = img.row(y) + static_cast<size_t>(x) * img.channels();
  if (img.channels() == 1) {
    p[0] = c.r;
  } else {
    p[0] = c.r;
    p[1] = c.g;
    p[2] = c.b;
  }
}

} // namespace

void fill(Raster& img, Color c) {
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) put(img, x, y, c);
}

void fill_ring(Raster& img, const std::vector<Vec2>& ring, Color c) {
  const std::vector<std::vector<Vec2>> rings = {ring};
  scan_rings(std::span(rings), img.width(), img.height(), [&](int y, int x0, int x1) {
    for (int x = x0; x <= x1; ++x) put(img, x, y, c);
  });
}

void stroke_line(Raster& img, Vec2 a, Vec2 b, double width, Color c) {
  const Vec2 d = b - a;
  const double len = std::sqrt(dot(d, d));
  if (len == 0.0) return;
  const Vec2 n{-d.y / len * width / 2.0, d.x / len * width / 2.0};
  const Vec2 cap{d.x / len * width / 2.0, d.y / len * width / 2.0};
  const Vec2 a2 = a - cap;
  const Vec2 b2 = b + cap;
  fill_ring(img, {a2 + n, b2 + n, b2 - n, a2 - n}, c);
}

void draw_line(Raster& img, Vec2 a, Vec2 b, Color c, int dash_on, int dash_off) {
  int x0 = static_cast<int>(std::lround(a.x));
  int y0 = static_cast<int>(std::lround(a.y));
  const int x1 = static_cast<int>(std::lround(b.x));
  const int y1 = static_cast<int>(std::lround(b.y));
  const int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
  const int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
  int err = dx + dy;
  const int period = dash_on + dash_off;
  int step = 0;
  while (true) {
    if (period == 0 || step % period < dash_on) put(img, x0, y0, c);
    if (x0 == x1 && y0 == y1) break;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      x0 += sx;
    }
    if (e2 <= dx) {
      err += dx;
      y0 += sy;
    }
    ++step;
  }
}

void draw_rect(Raster& img, const Rect& r, Color c) {
  if (r.empty()) return;
  const Vec2 tl{static_cast<double>(r.x), static_cast<double>(r.y)};
  const Vec2 tr{static_cast<double>(r.right() - 1), static_cast<double>(r.y)};
  const Vec2 br{static_cast<double>(r.right() - 1), static_cast<double>(r.bottom() - 1)};
  const Vec2 bl{static_cast<double>(r.x), static_cast<double>(r.bottom() - 1)};
  draw_line(img, tl, tr, c);
  draw_line(img, tr, br, c);
  draw_line(img, br, bl, c);
  draw_line(img, bl, tl, c);
}

void draw_ring(Raster& img, const std::vector<Vec2>& ring, Color c, int dash_on, int dash_off) {
  for (size_t i = 0; i < ring.size(); ++i)
    draw_line(img, ring[i], ring[(i + 1) % ring.size()], c, dash_on, dash_off);
}

} // namespace courtprior
