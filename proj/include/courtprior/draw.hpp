#ifndef COURTPRIOR_DRAW_HPP
#define COURTPRIOR_DRAW_HPP

#include <array>
#include <vector>

#include "courtprior/geometry.hpp"
#include "courtprior/raster.hpp"

namespace courtprior {

struct Color {
  uint8_t r = 0, g = 0, b = 0;
};

void fill(Raster& img, Color c);

/// Even-odd scanline fill at pixel centers.
void fill_ring(Raster& img, const std::vector<Vec2>& ring, Color c);

/// Solid stroke of the given width, drawn as a filled quad with square caps.
void stroke_line(Raster& img, Vec2 a, Vec2 b, double width, Color c);

/// 1-pixel Bresenham line; dash_on/dash_off of 0 draws solid.
void draw_line(Raster& img, Vec2 a, Vec2 b, Color c, int dash_on = 0, int dash_off = 0);

void draw_rect(Raster& img, const Rect& r, Color c);

void draw_ring(Raster& img, const std::vector<Vec2>& ring, Color c,
               int dash_on = 0, int dash_off = 0);

} // namespace courtprior

#endif
