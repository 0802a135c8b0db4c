#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "mvhull/errors.hpp"

namespace mvhull {

/// Dense C x H x W planar map (channel-major, rows contiguous). Used for
/// per-view feature maps, silhouettes, and BEV maps alike.
template <typename Scalar>
class PlanarMapT {
 public:
  using RowMatrix =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  PlanarMapT() = default;
  PlanarMapT(int channels, int height, int width, Scalar fill = Scalar(0))
      : channels_(channels), height_(height), width_(width),
        data_(std::size_t(channels) * height * width, fill) {
    if (channels < 1 || height < 1 || width < 1)
      throw DimensionMismatch("planar map dimensions must be >= 1");
  }

  int channels() const { return channels_; }
  int height() const { return height_; }
  int width() const { return width_; }

  Scalar& at(int c, int y, int x) { return data_[offset(c, y, x)]; }
  Scalar at(int c, int y, int x) const { return data_[offset(c, y, x)]; }

  Scalar* data() { return data_.data(); }
  const Scalar* data() const { return data_.data(); }
  std::size_t size() const { return data_.size(); }

  /// Eigen view of one channel as an H x W row-major matrix.
  Eigen::Map<RowMatrix> channel(int c) {
    return {data_.data() + std::size_t(c) * height_ * width_, height_, width_};
  }
  Eigen::Map<const RowMatrix> channel(int c) const {
    return {data_.data() + std::size_t(c) * height_ * width_, height_, width_};
  }

  bool same_shape(const PlanarMapT& o) const {
    return channels_ == o.channels_ && height_ == o.height_ && width_ == o.width_;
  }

 private:
  std::size_t offset(int c, int y, int x) const {
    return (std::size_t(c) * height_ + y) * width_ + x;
  }

  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<Scalar> data_;
};

using PlanarMap = PlanarMapT<float>;

/// Top-down map over the ground plane: channels x ny x nx.
using BevMap = PlanarMap;

/// Bilinear interpolation over the four neighboring pixel centers, which sit
/// at integer coordinates. Coordinates outside [0, W-1] x [0, H-1] clamp to
/// the edge. Arithmetic is carried out in double regardless of Scalar.
template <typename Scalar>
double bilinear_sample(const PlanarMapT<Scalar>& map, double u, double v,
                       int channel = 0) {
  const int w = map.width();
  const int h = map.height();
  u = std::clamp(u, 0.0, double(w - 1));
  v = std::clamp(v, 0.0, double(h - 1));
  const int x0 = std::min(int(std::floor(u)), w - 1);
  const int y0 = std::min(int(std::floor(v)), h - 1);
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double fu = u - x0;
  const double fv = v - y0;
  const double v00 = map.at(channel, y0, x0);
  const double v01 = map.at(channel, y0, x1);
  const double v10 = map.at(channel, y1, x0);
  const double v11 = map.at(channel, y1, x1);
  return (1.0 - fv) * ((1.0 - fu) * v00 + fu * v01) +
         fv * ((1.0 - fu) * v10 + fu * v11);
}

/// Gaussian blur with kernel truncated at 3*sigma and renormalized per pixel
/// at the borders, so constants pass through exactly. sigma <= 0 is identity.
template <typename Scalar>
PlanarMapT<Scalar> gaussian_blur(const PlanarMapT<Scalar>& map, double sigma) {
  const int radius = sigma > 0.0 ? int(std::floor(3.0 * sigma)) : 0;
  if (radius < 1) return map;
  std::vector<double> kernel(2 * radius + 1);
  for (int k = -radius; k <= radius; ++k)
    kernel[k + radius] = std::exp(-0.5 * k * k / (sigma * sigma));

  const int h = map.height();
  const int w = map.width();
  PlanarMapT<Scalar> tmp(map.channels(), h, w);
  PlanarMapT<Scalar> out(map.channels(), h, w);
  for (int c = 0; c < map.channels(); ++c) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double num = 0.0, den = 0.0;
        const int klo = std::max(-radius, -x);
        const int khi = std::min(radius, w - 1 - x);
        for (int k = klo; k <= khi; ++k) {
          num += kernel[k + radius] * map.at(c, y, x + k);
          den += kernel[k + radius];
        }
        tmp.at(c, y, x) = Scalar(num / den);
      }
    }
    for (int y = 0; y < h; ++y) {
      const int klo = std::max(-radius, -y);
      const int khi = std::min(radius, h - 1 - y);
      for (int x = 0; x < w; ++x) {
        double num = 0.0, den = 0.0;
        for (int k = klo; k <= khi; ++k) {
          num += kernel[k + radius] * tmp.at(c, y + k, x);
          den += kernel[k + radius];
        }
        out.at(c, y, x) = Scalar(num / den);
      }
    }
  }
  return out;
}

/// Downsample by an integer factor: output node (xo, yo) bilinearly samples
/// the input at (xo*factor, yo*factor), matching the coordinate map of
/// adjust_intrinsics with scale 1/factor. Output dims are
/// floor((N-1)/factor) + 1.
template <typename Scalar>
PlanarMapT<Scalar> resize_by_factor(const PlanarMapT<Scalar>& map, int factor) {
  if (factor < 1) throw InvalidFactor("resize factor must be >= 1");
  if (factor == 1) return map;
  const int out_h = (map.height() - 1) / factor + 1;
  const int out_w = (map.width() - 1) / factor + 1;
  PlanarMapT<Scalar> out(map.channels(), out_h, out_w);
  for (int c = 0; c < map.channels(); ++c)
    for (int y = 0; y < out_h; ++y)
      for (int x = 0; x < out_w; ++x)
        out.at(c, y, x) = Scalar(
            bilinear_sample(map, double(x) * factor, double(y) * factor, c));
  return out;
}

}  // namespace mvhull
