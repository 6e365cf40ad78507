#ifndef CRAQ_FIELD_HPP
#define CRAQ_FIELD_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace craq {

struct shape_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Single-channel 2-D field, row-major doubles.
/// Carries v, prior maps, masks and crack maps; unit-range where documented.
struct ScalarField {
  int height = 0;
  int width = 0;
  std::vector<double> data;

  ScalarField() = default;
  ScalarField(int h, int w, double fill = 0.0) : height(h), width(w) {
    if (h < 1 || w < 1)
      throw shape_error("ScalarField: dimensions must be >= 1, got " +
                        std::to_string(h) + "x" + std::to_string(w));
    data.assign(static_cast<size_t>(h) * w, fill);
  }

  int size() const { return height * width; }
  double &at(int y, int x) { return data[static_cast<size_t>(y) * width + x]; }
  double at(int y, int x) const { return data[static_cast<size_t>(y) * width + x]; }
};

/// Three-channel 2-D field, row-major, RGB interleaved.
/// Carries U, U', B; samples in [0,1].
struct ColorField {
  int height = 0;
  int width = 0;
  std::vector<double> data;

  static constexpr int channels = 3;

  ColorField() = default;
  ColorField(int h, int w, double fill = 0.0) : height(h), width(w) {
    if (h < 1 || w < 1)
      throw shape_error("ColorField: dimensions must be >= 1, got " +
                        std::to_string(h) + "x" + std::to_string(w));
    data.assign(static_cast<size_t>(h) * w * channels, fill);
  }

  int pixels() const { return height * width; }
  int samples() const { return height * width * channels; }
  double &at(int y, int x, int c) {
    return data[(static_cast<size_t>(y) * width + x) * channels + c];
  }
  double at(int y, int x, int c) const {
    return data[(static_cast<size_t>(y) * width + x) * channels + c];
  }
};

/// Forward differences of a scalar field; dx last column and dy last row are
/// zero (Neumann convention).
struct GradientPair {
  ScalarField dx;
  ScalarField dy;
};

inline void require_same_shape(const ScalarField &a, const ScalarField &b,
                               const char *where) {
  if (a.height != b.height || a.width != b.width)
    throw shape_error(std::string(where) + ": shape mismatch " +
                      std::to_string(a.height) + "x" + std::to_string(a.width) +
                      " vs " + std::to_string(b.height) + "x" +
                      std::to_string(b.width));
}

inline void require_same_shape(const ColorField &a, const ColorField &b,
                               const char *where) {
  if (a.height != b.height || a.width != b.width)
    throw shape_error(std::string(where) + ": shape mismatch " +
                      std::to_string(a.height) + "x" + std::to_string(a.width) +
                      " vs " + std::to_string(b.height) + "x" +
                      std::to_string(b.width));
}

inline void require_same_shape(const ColorField &a, const ScalarField &b,
                               const char *where) {
  if (a.height != b.height || a.width != b.width)
    throw shape_error(std::string(where) + ": shape mismatch " +
                      std::to_string(a.height) + "x" + std::to_string(a.width) +
                      " vs " + std::to_string(b.height) + "x" +
                      std::to_string(b.width));
}

} // namespace craq

#endif
