#include "craq/ops.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "craq/parallel.hpp"

namespace craq {

ScalarField to_grayscale(const ColorField &image) {
  ScalarField out(image.height, image.width);
  const int w = image.width;
#pragma omp parallel for schedule(static) if (image.height * w >= kParallelCutoff)
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < w; ++x) {
      out.at(y, x) = 0.299 * image.at(y, x, 0) + 0.587 * image.at(y, x, 1) +
                     0.114 * image.at(y, x, 2);
    }
  }
  return out;
}

GradientPair grad_forward(const ScalarField &f) {
  GradientPair g{ScalarField(f.height, f.width), ScalarField(f.height, f.width)};
  const int h = f.height, w = f.width;
#pragma omp parallel for schedule(static) if (h * w >= kParallelCutoff)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      g.dx.at(y, x) = (x < w - 1) ? f.at(y, x + 1) - f.at(y, x) : 0.0;
      g.dy.at(y, x) = (y < h - 1) ? f.at(y + 1, x) - f.at(y, x) : 0.0;
    }
  }
  return g;
}

ScalarField grad_adjoint(const GradientPair &pair) {
  require_same_shape(pair.dx, pair.dy, "grad_adjoint");
  const int h = pair.dx.height, w = pair.dx.width;
  ScalarField out(h, w);
  // Transpose of the forward-difference stencil: each output pixel gathers
  // the difference coefficients that referenced it.
#pragma omp parallel for schedule(static) if (h * w >= kParallelCutoff)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double v = 0.0;
      if (x >= 1)
        v += pair.dx.at(y, x - 1);
      if (x < w - 1)
        v -= pair.dx.at(y, x);
      if (y >= 1)
        v += pair.dy.at(y - 1, x);
      if (y < h - 1)
        v -= pair.dy.at(y, x);
      out.at(y, x) = v;
    }
  }
  return out;
}

namespace {

constexpr int kOtsuBins = 256;

int bin_of(double x) {
  int b = static_cast<int>(x * kOtsuBins);
  return std::clamp(b, 0, kOtsuBins - 1);
}

} // namespace

double otsu_threshold(const ScalarField &field) {
  std::array<long long, kOtsuBins> hist{};
  for (double x : field.data)
    ++hist[bin_of(x)];

  int occupied = 0, last_occupied = 0;
  for (int b = 0; b < kOtsuBins; ++b)
    if (hist[b] > 0) {
      ++occupied;
      last_occupied = b;
    }
  if (occupied <= 1)
    return std::min(1.0, (last_occupied + 1) / static_cast<double>(kOtsuBins));

  // Cumulative count and first moment up to each bin.
  const long long total = field.size();
  double total_moment = 0.0;
  for (int b = 0; b < kOtsuBins; ++b)
    total_moment += static_cast<double>(hist[b]) * b;

  long long count_below = 0;
  double moment_below = 0.0;
  double best_var = -1.0;
  int best_bin = 0;
  for (int t = 0; t < kOtsuBins; ++t) {
    count_below += hist[t];
    moment_below += static_cast<double>(hist[t]) * t;
    const long long count_above = total - count_below;
    if (count_below == 0 || count_above == 0)
      continue;
    const double mean_below = moment_below / static_cast<double>(count_below);
    const double mean_above =
        (total_moment - moment_below) / static_cast<double>(count_above);
    const double diff = mean_below - mean_above;
    const double var = static_cast<double>(count_below) *
                       static_cast<double>(count_above) * diff * diff;
    if (var > best_var) {
      best_var = var;
      best_bin = t;
    }
  }
  return (best_bin + 0.5) / kOtsuBins;
}

ScalarField binarize(const ScalarField &field, double threshold) {
  ScalarField out(field.height, field.width);
#pragma omp parallel for schedule(static) if (field.size() >= kParallelCutoff)
  for (int y = 0; y < field.height; ++y)
    for (int x = 0; x < field.width; ++x)
      out.at(y, x) = field.at(y, x) > threshold ? 1.0 : 0.0;
  return out;
}

ScalarField correlate_rows(const ScalarField &f, const std::vector<double> &k) {
  const int h = f.height, w = f.width;
  const int r = static_cast<int>(k.size()) / 2;
  ScalarField out(h, w);
#pragma omp parallel for schedule(static) if (h * w >= kParallelCutoff)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int s = -r; s <= r; ++s) {
        int xi = std::clamp(x + s, 0, w - 1);
        acc += k[s + r] * f.at(y, xi);
      }
      out.at(y, x) = acc;
    }
  }
  return out;
}

ScalarField correlate_cols(const ScalarField &f, const std::vector<double> &k) {
  const int h = f.height, w = f.width;
  const int r = static_cast<int>(k.size()) / 2;
  ScalarField out(h, w);
#pragma omp parallel for schedule(static) if (h * w >= kParallelCutoff)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int s = -r; s <= r; ++s) {
        int yi = std::clamp(y + s, 0, h - 1);
        acc += k[s + r] * f.at(yi, x);
      }
      out.at(y, x) = acc;
    }
  }
  return out;
}

// Adjoints of the 1-D clamp-padded correlations, computed as
// (valid-corr . pad)^T = pad^T . valid-corr^T: the transposed valid
// correlation spreads the cotangent over an extended axis, then the fold
// (pad^T) accumulates the replicated border back onto the edge samples.

ScalarField correlate_rows_adjoint(const ScalarField &ct,
                                   const std::vector<double> &k) {
  const int h = ct.height, w = ct.width;
  const int r = static_cast<int>(k.size()) / 2;
  const int ext = w + 2 * r;
  ScalarField out(h, w);
#pragma omp parallel for schedule(static) if (h * w >= kParallelCutoff)
  for (int y = 0; y < h; ++y) {
    std::vector<double> line(static_cast<size_t>(ext), 0.0);
    for (int q = 0; q < ext; ++q) {
      double acc = 0.0;
      const int s_lo = std::max(0, q - (w - 1));
      const int s_hi = std::min(2 * r, q);
      for (int s = s_lo; s <= s_hi; ++s)
        acc += k[s] * ct.at(y, q - s);
      line[q] = acc;
    }
    for (int x = 0; x < w; ++x)
      out.at(y, x) = line[x + r];
    for (int q = 0; q < r; ++q) {
      out.at(y, 0) += line[q];
      out.at(y, w - 1) += line[w + r + q];
    }
  }
  return out;
}

ScalarField correlate_cols_adjoint(const ScalarField &ct,
                                   const std::vector<double> &k) {
  const int h = ct.height, w = ct.width;
  const int r = static_cast<int>(k.size()) / 2;
  const int ext = h + 2 * r;
  ScalarField out(h, w);
#pragma omp parallel for schedule(static) if (h * w >= kParallelCutoff)
  for (int x = 0; x < w; ++x) {
    std::vector<double> line(static_cast<size_t>(ext), 0.0);
    for (int q = 0; q < ext; ++q) {
      double acc = 0.0;
      const int s_lo = std::max(0, q - (h - 1));
      const int s_hi = std::min(2 * r, q);
      for (int s = s_lo; s <= s_hi; ++s)
        acc += k[s] * ct.at(q - s, x);
      line[q] = acc;
    }
    for (int y = 0; y < h; ++y)
      out.at(y, x) = line[y + r];
    for (int q = 0; q < r; ++q) {
      out.at(0, x) += line[q];
      out.at(h - 1, x) += line[h + r + q];
    }
  }
  return out;
}

} // namespace craq
