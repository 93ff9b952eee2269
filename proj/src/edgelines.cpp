#include "courtprior/edgelines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "courtprior/rng.hpp"

namespace courtprior {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<float> gaussian_blur(const Raster& img, double sigma, int radius) {
  const int w = img.width();
  const int h = img.height();
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
    sum += kernel[i + radius];
  }
  for (double& k : kernel) k /= sum;

  const auto clampi = [](int v, int hi) { return std::clamp(v, 0, hi); };

  // Horizontal pass, replicated borders.
  std::vector<float> tmp(static_cast<size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    const uint8_t* src = img.row(y);
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i)
        acc += kernel[i + radius] * src[clampi(x + i, w - 1)];
      tmp[static_cast<size_t>(y) * w + x] = static_cast<float>(acc);
    }
  }
  // Vertical pass.
  std::vector<float> out(static_cast<size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int i = -radius; i <= radius; ++i)
        acc += kernel[i + radius] * tmp[static_cast<size_t>(clampi(y + i, h - 1)) * w + x];
      out[static_cast<size_t>(y) * w + x] = static_cast<float>(acc);
    }
  }
  return out;
}

} // namespace

size_t EdgeMap::count() const {
  return static_cast<size_t>(std::count(edges.begin(), edges.end(), uint8_t{1}));
}

double LineSegment::length() const {
  const double dx = x1 - x0;
  const double dy = y1 - y0;
  return std::sqrt(dx * dx + dy * dy);
}

EdgeMap canny(const Raster& img, double low_threshold, double high_threshold, double sigma) {
  if (img.channels() != 1) throw DimensionMismatch("canny expects a 1-channel raster");
  if (!(low_threshold > 0.0) || low_threshold > high_threshold || !(sigma > 0.0))
    throw Error("canny requires 0 < low <= high and sigma > 0");
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  const int w = img.width();
  const int h = img.height();
  if (std::min(w, h) < 2 * radius + 1)
    throw ImageTooSmall("image smaller than the Gaussian kernel support");

  const std::vector<float> blurred = gaussian_blur(img, sigma, radius);

  // 3x3 Sobel with replicated borders.
  std::vector<float> gx(static_cast<size_t>(w) * h), gy(gx.size()), mag(gx.size());
  const auto pix = [&](int x, int y) {
    return blurred[static_cast<size_t>(std::clamp(y, 0, h - 1)) * w + std::clamp(x, 0, w - 1)];
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const float sx = (pix(x + 1, y - 1) + 2.0f * pix(x + 1, y) + pix(x + 1, y + 1)) -
                       (pix(x - 1, y - 1) + 2.0f * pix(x - 1, y) + pix(x - 1, y + 1));
      const float sy = (pix(x - 1, y + 1) + 2.0f * pix(x, y + 1) + pix(x + 1, y + 1)) -
                       (pix(x - 1, y - 1) + 2.0f * pix(x, y - 1) + pix(x + 1, y - 1));
      const size_t i = static_cast<size_t>(y) * w + x;
      gx[i] = sx;
      gy[i] = sy;
      mag[i] = std::sqrt(sx * sx + sy * sy);
    }
  }

  // Non-maximum suppression along the gradient, quantized to 4 sectors.
  static const int offsets[4][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}};
  std::vector<uint8_t> survivor(mag.size(), 0);
  const auto mag_at = [&](int x, int y) -> float {
    if (x < 0 || x >= w || y < 0 || y >= h) return 0.0f;
    return mag[static_cast<size_t>(y) * w + x];
  };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const size_t i = static_cast<size_t>(y) * w + x;
      if (mag[i] <= 0.0f) continue;
      double angle = std::atan2(gy[i], gx[i]);
      if (angle < 0.0) angle += kPi;
      const int sector = static_cast<int>((angle + kPi / 8.0) / (kPi / 4.0)) % 4;
      const int dx = offsets[sector][0];
      const int dy = offsets[sector][1];
      if (mag[i] >= mag_at(x + dx, y + dy) && mag[i] >= mag_at(x - dx, y - dy))
        survivor[i] = 1;
    }
  }

  // Double-threshold hysteresis, 8-connected.
  EdgeMap out(w, h);
  std::vector<size_t> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const size_t i = static_cast<size_t>(y) * w + x;
      if (!survivor[i] || mag[i] < high_threshold || out.edges[i]) continue;
      out.edges[i] = 1;
      stack.push_back(i);
      while (!stack.empty()) {
        const size_t cur = stack.back();
        stack.pop_back();
        const int cx = static_cast<int>(cur % w);
        const int cy = static_cast<int>(cur / w);
        for (int ny = cy - 1; ny <= cy + 1; ++ny) {
          for (int nx = cx - 1; nx <= cx + 1; ++nx) {
            if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
            const size_t ni = static_cast<size_t>(ny) * w + nx;
            if (out.edges[ni] || !survivor[ni] || mag[ni] < low_threshold) continue;
            out.edges[ni] = 1;
            stack.push_back(ni);
          }
        }
      }
    }
  }
  return out;
}

HoughAccumulator::Peak HoughAccumulator::best() const {
  Peak p;
  for (int t = 0; t < n_theta; ++t) {
    for (int r = 0; r < n_rho; ++r) {
      const int v = at(t, r);
      if (v > p.votes) p = Peak{t, r, v};
    }
  }
  return p;
}

HoughAccumulator hough_accumulate(const EdgeMap& edges, const HoughParams& params) {
  if (!(params.rho_resolution > 0.0) || !(params.theta_resolution > 0.0) ||
      params.vote_threshold <= 0 || params.max_line_gap < 0.0)
    throw Error("invalid Hough parameters");

  HoughAccumulator acc;
  acc.rho_resolution = params.rho_resolution;
  acc.theta_resolution = params.theta_resolution;
  acc.n_theta = std::max(1, static_cast<int>(std::round(kPi / params.theta_resolution)));
  const double max_rho = std::hypot(edges.width, edges.height);
  const int half = static_cast<int>(std::ceil(max_rho / params.rho_resolution));
  acc.n_rho = 2 * half + 1;
  acc.rho_offset = -half * params.rho_resolution;
  acc.votes.assign(static_cast<size_t>(acc.n_theta) * acc.n_rho, 0);

  std::vector<double> cos_t(acc.n_theta), sin_t(acc.n_theta);
  for (int t = 0; t < acc.n_theta; ++t) {
    cos_t[t] = std::cos(acc.theta_of(t));
    sin_t[t] = std::sin(acc.theta_of(t));
  }

  RngStream rng = RngStream(params.sample_seed).child("hough-sampling");
  const bool subsample = params.sample_fraction < 1.0;
  for (int y = 0; y < edges.height; ++y) {
    for (int x = 0; x < edges.width; ++x) {
      if (!edges.at(x, y)) continue;
      if (subsample && !rng.bernoulli(params.sample_fraction)) continue;
      for (int t = 0; t < acc.n_theta; ++t) {
        const double rho = x * cos_t[t] + y * sin_t[t];
        const int r = static_cast<int>(std::lround((rho - acc.rho_offset) / params.rho_resolution));
        if (r >= 0 && r < acc.n_rho)
          ++acc.votes[static_cast<size_t>(t) * acc.n_rho + r];
      }
    }
  }
  return acc;
}

std::vector<LineSegment> hough_segments(const EdgeMap& edges, const HoughParams& params) {
  const HoughAccumulator acc = hough_accumulate(edges, params);

  // Local-maximum peaks over a 3x3 (theta, rho) window; a plateau keeps
  // only its lowest-index cell.
  struct PeakCell { int votes; int t; int r; };
  std::vector<PeakCell> peaks;
  for (int t = 0; t < acc.n_theta; ++t) {
    for (int r = 0; r < acc.n_rho; ++r) {
      const int v = acc.at(t, r);
      if (v < params.vote_threshold) continue;
      bool is_peak = true;
      for (int dt = -1; dt <= 1 && is_peak; ++dt) {
        for (int dr = -1; dr <= 1 && is_peak; ++dr) {
          if (dt == 0 && dr == 0) continue;
          const int nt = t + dt;
          const int nr = r + dr;
          if (nt < 0 || nt >= acc.n_theta || nr < 0 || nr >= acc.n_rho) continue;
          const int nv = acc.at(nt, nr);
          if (nv > v || (nv == v && (nt < t || (nt == t && nr < r)))) is_peak = false;
        }
      }
      if (is_peak) peaks.push_back({v, t, r});
    }
  }
  std::sort(peaks.begin(), peaks.end(), [](const PeakCell& a, const PeakCell& b) {
    if (a.votes != b.votes) return a.votes > b.votes;
    if (a.t != b.t) return a.t < b.t;
    return a.r < b.r;
  });

  EdgeMap work = edges;
  std::vector<LineSegment> segments;

  for (const PeakCell& peak : peaks) {
    const double theta = acc.theta_of(peak.t);
    const double rho = acc.rho_of(peak.r);
    const double ct = std::cos(theta);
    const double st = std::sin(theta);

    // Walk along the dominant axis of the line direction (-sin, cos),
    // probing the rounded pixel and its two minor-axis neighbors.
    const bool x_major = std::abs(st) >= std::abs(ct);
    const int extent = x_major ? edges.width : edges.height;

    struct Support { int x; int y; };
    std::vector<Support> run;
    std::vector<LineSegment> line_segments;
    int gap = 0;
    bool in_run = false;

    const auto flush = [&]() {
      if (in_run && !run.empty()) {
        const LineSegment seg{run.front().x, run.front().y, run.back().x, run.back().y};
        if (seg.length() >= params.min_line_length) {
          line_segments.push_back(seg);
          for (const Support& s : run) work.set(s.x, s.y, false);
        }
      }
      run.clear();
      in_run = false;
      gap = 0;
    };

    for (int major = 0; major < extent; ++major) {
      int px, py;
      if (x_major) {
        px = major;
        py = static_cast<int>(std::lround((rho - px * ct) / st));
      } else {
        py = major;
        px = static_cast<int>(std::lround((rho - py * st) / ct));
      }
      bool found = false;
      int fx = 0, fy = 0;
      for (int d = 0; d <= 2 && !found; ++d) {
        const int off = (d == 0) ? 0 : (d == 1 ? -1 : 1);
        const int cx = x_major ? px : px + off;
        const int cy = x_major ? py + off : py;
        if (cx < 0 || cx >= edges.width || cy < 0 || cy >= edges.height) continue;
        if (work.at(cx, cy)) {
          found = true;
          fx = cx;
          fy = cy;
        }
      }
      if (found) {
        run.push_back({fx, fy});
        in_run = true;
        gap = 0;
      } else if (in_run) {
        if (++gap > static_cast<int>(params.max_line_gap)) {
          // Trim: the run already ends at its last support.
          flush();
        }
      }
    }
    flush();

    segments.insert(segments.end(), line_segments.begin(), line_segments.end());
  }
  return segments;
}

} // namespace courtprior
