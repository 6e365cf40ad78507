#ifndef CRAQ_IMAGE_IO_HPP
#define CRAQ_IMAGE_IO_HPP

#include <cstdint>
#include <string>

#include "craq/field.hpp"

namespace craq {

/// Load an 8-bit PNG (RGB or grayscale) or binary PPM/PGM, scaled by 1/255.
/// Grayscale inputs are replicated across the 3 channels.
/// Throws io_error naming the path on unreadable or unsupported files.
ColorField load_image(const std::string &path);

/// Grayscale view of load_image (Rec.601 after replication is the identity
/// for gray sources).
ScalarField load_image_gray(const std::string &path);

/// Save to PNG (".png"), PPM (".ppm") or PGM (".pgm") depending on the
/// extension; samples must be in [0,1]. Quantization rounds half away from
/// zero so save/load round-trips are bit-reproducible.
void save_image(const ColorField &field, const std::string &path);
void save_image(const ScalarField &field, const std::string &path);

/// sample in [0,1] -> byte, rounding half away from zero.
uint8_t quantize_sample(double x);

} // namespace craq

#endif
