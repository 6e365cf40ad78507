#include "craq/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <vector>

#include <png.h>

#include "craq/ops.hpp"

namespace craq {

uint8_t quantize_sample(double x) {
  long v = std::lround(x * 255.0);
  return static_cast<uint8_t>(std::clamp(v, 0L, 255L));
}

namespace {

struct FileCloser {
  void operator()(std::FILE *f) const {
    if (f)
      std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

bool has_suffix(const std::string &s, const char *suffix) {
  const size_t n = std::strlen(suffix);
  if (s.size() < n)
    return false;
  std::string tail = s.substr(s.size() - n);
  std::transform(tail.begin(), tail.end(), tail.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return tail == suffix;
}

ColorField load_png(const std::string &path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp)
    throw io_error("cannot open image: " + path);

  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw io_error("png decoder init failed: " + path);
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw io_error("png decode error: " + path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  const png_uint_32 w = png_get_image_width(png, info);
  const png_uint_32 h = png_get_image_height(png, info);
  const int depth = png_get_bit_depth(png, info);
  const int color = png_get_color_type(png, info);
  if (depth == 16) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw io_error("unsupported bit depth (16) in " + path);
  }
  if (color == PNG_COLOR_TYPE_PALETTE)
    png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS))
    png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
    png_set_gray_to_rgb(png);
  png_read_update_info(png, info);

  const size_t stride = png_get_rowbytes(png, info);
  std::vector<uint8_t> raw(static_cast<size_t>(h) * stride);
  std::vector<png_bytep> rows(h);
  for (png_uint_32 y = 0; y < h; ++y)
    rows[y] = raw.data() + y * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  if (stride < static_cast<size_t>(w) * 3)
    throw io_error("png decode produced unexpected layout: " + path);

  ColorField out(static_cast<int>(h), static_cast<int>(w));
  for (png_uint_32 y = 0; y < h; ++y)
    for (png_uint_32 x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c)
        out.at(y, x, c) = raw[y * stride + 3 * x + c] / 255.0;
  return out;
}

// Binary PPM (P6) / PGM (P5), maxval 255.
ColorField load_pnm(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw io_error("cannot open image: " + path);
  std::string magic;
  in >> magic;
  if (magic != "P6" && magic != "P5")
    throw io_error("unsupported PNM magic '" + magic + "' in " + path);
  auto next_int = [&](int &value) {
    // skip whitespace and '#' comments
    int ch = in.get();
    while (ch != EOF && (std::isspace(ch) || ch == '#')) {
      if (ch == '#')
        while (ch != EOF && ch != '\n')
          ch = in.get();
      ch = in.get();
    }
    if (ch == EOF)
      throw io_error("truncated PNM header: " + path);
    in.unget();
    in >> value;
  };
  int w = 0, h = 0, maxval = 0;
  next_int(w);
  next_int(h);
  next_int(maxval);
  if (maxval != 255)
    throw io_error("unsupported bit depth (maxval " + std::to_string(maxval) +
                   ") in " + path);
  in.get(); // single whitespace after maxval
  const int ch_in = magic == "P6" ? 3 : 1;
  std::vector<uint8_t> raw(static_cast<size_t>(w) * h * ch_in);
  in.read(reinterpret_cast<char *>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in.gcount() != static_cast<std::streamsize>(raw.size()))
    throw io_error("truncated PNM payload: " + path);

  ColorField out(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) {
        const size_t idx = (static_cast<size_t>(y) * w + x) * ch_in +
                           (ch_in == 3 ? c : 0);
        out.at(y, x, c) = raw[idx] / 255.0;
      }
  return out;
}

void save_png_bytes(const std::string &path, int h, int w, int channels,
                    const std::vector<uint8_t> &bytes) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp)
    throw io_error("cannot write image: " + path);
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw io_error("png encoder init failed: " + path);
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw io_error("png encode error: " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, w, h, 8,
               channels == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y)
    rows[y] = const_cast<png_bytep>(bytes.data() +
                                    static_cast<size_t>(y) * w * channels);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void save_pnm_bytes(const std::string &path, int h, int w, int channels,
                    const std::vector<uint8_t> &bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw io_error("cannot write image: " + path);
  out << (channels == 3 ? "P6" : "P5") << "\n"
      << w << " " << h << "\n255\n";
  out.write(reinterpret_cast<const char *>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out)
    throw io_error("short write: " + path);
}

void save_bytes(const std::string &path, int h, int w, int channels,
                const std::vector<uint8_t> &bytes) {
  if (has_suffix(path, ".png"))
    save_png_bytes(path, h, w, channels, bytes);
  else if (has_suffix(path, ".ppm") || has_suffix(path, ".pgm"))
    save_pnm_bytes(path, h, w, channels, bytes);
  else
    throw io_error("unknown image extension: " + path);
}

} // namespace

ColorField load_image(const std::string &path) {
  if (has_suffix(path, ".ppm") || has_suffix(path, ".pgm"))
    return load_pnm(path);
  return load_png(path);
}

ScalarField load_image_gray(const std::string &path) {
  return to_grayscale(load_image(path));
}

void save_image(const ColorField &field, const std::string &path) {
  std::vector<uint8_t> bytes(static_cast<size_t>(field.samples()));
  for (size_t i = 0; i < bytes.size(); ++i)
    bytes[i] = quantize_sample(field.data[i]);
  save_bytes(path, field.height, field.width, 3, bytes);
}

void save_image(const ScalarField &field, const std::string &path) {
  std::vector<uint8_t> bytes(static_cast<size_t>(field.size()));
  for (size_t i = 0; i < bytes.size(); ++i)
    bytes[i] = quantize_sample(field.data[i]);
  save_bytes(path, field.height, field.width, 1, bytes);
}

} // namespace craq
