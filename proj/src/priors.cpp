#include "craq/priors.hpp"

#include <algorithm>
#include <cmath>

#include "craq/image_io.hpp"
#include "craq/ops.hpp"
#include "craq/parallel.hpp"

namespace craq {

void GeneratorPrior::require_latent(const LatentCode &z) const {
  if (z.dim() != latent_dim())
    throw shape_error("generator '" + name() + "': latent has " +
                      std::to_string(z.dim()) + " entries, expected " +
                      std::to_string(latent_dim()));
}

// ---------------------------------------------------------------------------
// IdentityGenerator

IdentityGenerator::IdentityGenerator(int h, int w) : h_(h), w_(w) {
  if (h < 1 || w < 1)
    throw shape_error("IdentityGenerator: invalid shape");
}

ColorField IdentityGenerator::generate(const LatentCode &z) const {
  require_latent(z);
  ColorField out(h_, w_);
#pragma omp parallel for schedule(static) if (out.data.size() >= kParallelCutoff)
  for (int i = 0; i < static_cast<int>(out.data.size()); ++i)
    out.data[i] = std::clamp(z.data[i], 0.0, 1.0);
  return out;
}

LatentCode IdentityGenerator::vjp(const LatentCode &z,
                                  const ColorField &ct) const {
  require_latent(z);
  if (ct.height != h_ || ct.width != w_)
    throw shape_error("IdentityGenerator::vjp: cotangent shape mismatch");
  LatentCode g;
  g.height = h_;
  g.width = w_;
  g.channels = 3;
  g.data.assign(z.data.size(), 0.0);
#pragma omp parallel for schedule(static) if (z.data.size() >= kParallelCutoff)
  for (int i = 0; i < static_cast<int>(z.data.size()); ++i)
    g.data[i] = (z.data[i] > 0.0 && z.data[i] < 1.0) ? ct.data[i] : 0.0;
  return g;
}

LatentCode IdentityGenerator::initial_latent(const ColorField &u) const {
  if (u.height != h_ || u.width != w_)
    throw shape_error("IdentityGenerator::initial_latent: shape mismatch");
  LatentCode z;
  z.height = h_;
  z.width = w_;
  z.channels = 3;
  z.data = u.data;
  return z;
}

// ---------------------------------------------------------------------------
// BilinearGenerator

BilinearGenerator::BilinearGenerator(int h, int w, int factor)
    : h_(h), w_(w), factor_(factor) {
  if (factor != 2 && factor != 4 && factor != 8)
    throw shape_error("BilinearGenerator: factor must be 2, 4 or 8");
  if (h < factor || w < factor || h % factor != 0 || w % factor != 0)
    throw shape_error("BilinearGenerator: " + std::to_string(h) + "x" +
                      std::to_string(w) + " not divisible by factor " +
                      std::to_string(factor));
  lh_ = h / factor;
  lw_ = w / factor;

  // Half-pixel-center sampling with clamped neighbors; reproduces constants
  // and keeps every output a convex combination of latent samples.
  auto build = [this](int out_len, int lat_len, std::vector<int> &i0,
                      std::vector<double> &frac) {
    i0.resize(out_len);
    frac.resize(out_len);
    for (int i = 0; i < out_len; ++i) {
      double src = (i + 0.5) / factor_ - 0.5;
      double fl = std::floor(src);
      int base = static_cast<int>(fl);
      double f = src - fl;
      if (base < 0) {
        base = 0;
        f = 0.0;
      }
      if (base >= lat_len - 1) {
        base = lat_len - 1;
        f = 0.0;
      }
      i0[i] = base;
      frac[i] = f;
    }
  };
  build(h_, lh_, y0_, wy_);
  build(w_, lw_, x0_, wx_);
}

ColorField BilinearGenerator::generate(const LatentCode &z) const {
  require_latent(z);
  ColorField out(h_, w_);
  auto lat = [&](int y, int x, int c) {
    return z.data[(static_cast<size_t>(y) * lw_ + x) * 3 + c];
  };
#pragma omp parallel for schedule(static) if (h_ * w_ >= kParallelCutoff)
  for (int y = 0; y < h_; ++y) {
    const int y0 = y0_[y];
    const int y1 = std::min(y0 + 1, lh_ - 1);
    const double fy = wy_[y];
    for (int x = 0; x < w_; ++x) {
      const int x0 = x0_[x];
      const int x1 = std::min(x0 + 1, lw_ - 1);
      const double fx = wx_[x];
      for (int c = 0; c < 3; ++c) {
        const double top = (1.0 - fx) * lat(y0, x0, c) + fx * lat(y0, x1, c);
        const double bot = (1.0 - fx) * lat(y1, x0, c) + fx * lat(y1, x1, c);
        out.at(y, x, c) = (1.0 - fy) * top + fy * bot;
      }
    }
  }
  return out;
}

LatentCode BilinearGenerator::vjp(const LatentCode &z,
                                  const ColorField &ct) const {
  require_latent(z);
  if (ct.height != h_ || ct.width != w_)
    throw shape_error("BilinearGenerator::vjp: cotangent shape mismatch");
  LatentCode g;
  g.height = lh_;
  g.width = lw_;
  g.channels = 3;
  g.data.assign(z.data.size(), 0.0);
  // Transpose scatter; serial, the latent is small and the order is fixed.
  for (int y = 0; y < h_; ++y) {
    const int y0 = y0_[y];
    const int y1 = std::min(y0 + 1, lh_ - 1);
    const double fy = wy_[y];
    for (int x = 0; x < w_; ++x) {
      const int x0 = x0_[x];
      const int x1 = std::min(x0 + 1, lw_ - 1);
      const double fx = wx_[x];
      for (int c = 0; c < 3; ++c) {
        const double v = ct.at(y, x, c);
        g.data[(static_cast<size_t>(y0) * lw_ + x0) * 3 + c] += (1.0 - fy) * (1.0 - fx) * v;
        g.data[(static_cast<size_t>(y0) * lw_ + x1) * 3 + c] += (1.0 - fy) * fx * v;
        g.data[(static_cast<size_t>(y1) * lw_ + x0) * 3 + c] += fy * (1.0 - fx) * v;
        g.data[(static_cast<size_t>(y1) * lw_ + x1) * 3 + c] += fy * fx * v;
      }
    }
  }
  return g;
}

LatentCode BilinearGenerator::initial_latent(const ColorField &u) const {
  if (u.height != h_ || u.width != w_)
    throw shape_error("BilinearGenerator::initial_latent: shape mismatch");
  LatentCode z;
  z.height = lh_;
  z.width = lw_;
  z.channels = 3;
  z.data.assign(static_cast<size_t>(lh_) * lw_ * 3, 0.0);
  const double inv = 1.0 / (factor_ * factor_);
  for (int ly = 0; ly < lh_; ++ly)
    for (int lx = 0; lx < lw_; ++lx)
      for (int c = 0; c < 3; ++c) {
        double acc = 0.0;
        for (int dy = 0; dy < factor_; ++dy)
          for (int dx = 0; dx < factor_; ++dx)
            acc += u.at(ly * factor_ + dy, lx * factor_ + dx, c);
        z.data[(static_cast<size_t>(ly) * lw_ + lx) * 3 + c] = acc * inv;
      }
  return z;
}

// ---------------------------------------------------------------------------
// LineFilterPrior

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kR = 0.299, kG = 0.587, kB = 0.114;

std::vector<double> gaussian_1d(double sigma) {
  const int r = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> k(2 * r + 1);
  double sum = 0.0;
  for (int i = -r; i <= r; ++i) {
    k[i + r] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += k[i + r];
  }
  for (double &v : k)
    v /= sum;
  return k;
}

void subtract_mean(std::vector<double> &k) {
  double mean = 0.0;
  for (double v : k)
    mean += v;
  mean /= static_cast<double>(k.size());
  for (double &v : k)
    v -= mean;
}

} // namespace

LineFilterPrior::LineFilterPrior(int h, int w, LineFilterConfig config)
    : h_(h), w_(w), config_(std::move(config)) {
  if (h < 1 || w < 1)
    throw shape_error("LineFilterPrior: invalid shape");
  if (config_.n_orientations < 2)
    throw shape_error("LineFilterPrior: need at least 2 orientations");
  for (double s : config_.scales)
    if (!(s > 0.0))
      throw shape_error("LineFilterPrior: scales must be positive");

  for (double sigma : config_.scales) {
    ScaleBank bank;
    bank.smooth = gaussian_1d(sigma);
    const int r = static_cast<int>(bank.smooth.size()) / 2;
    const double s2 = sigma * sigma;
    bank.d1.resize(bank.smooth.size());
    bank.d2.resize(bank.smooth.size());
    for (int i = -r; i <= r; ++i) {
      bank.d1[i + r] = sigma * (i / s2) * bank.smooth[i + r];
      bank.d2[i + r] = s2 * ((i * i - s2) / (s2 * s2)) * bank.smooth[i + r];
    }
    // Exact zero mean so constant inputs produce exactly zero response;
    // the separable products inherit it.
    subtract_mean(bank.d1);
    subtract_mean(bank.d2);
    banks_.push_back(std::move(bank));
  }

  for (int j = 0; j < config_.n_orientations; ++j) {
    const double theta = kPi * j / config_.n_orientations;
    const double c = std::cos(theta), s = std::sin(theta);
    cos2_.push_back(c * c);
    sincos_.push_back(2.0 * c * s);
    sin2_.push_back(s * s);
  }
}

std::vector<ScalarField> LineFilterPrior::responses(const ScalarField &gray) const {
  std::vector<ScalarField> out;
  out.reserve(banks_.size() * cos2_.size());
  for (const auto &bank : banks_) {
    // Steerable basis: Rxx = d2_x * g_y, Ryy = g_x * d2_y, Rxy = d1_x * d1_y.
    const ScalarField rxx = correlate_cols(correlate_rows(gray, bank.d2), bank.smooth);
    const ScalarField ryy = correlate_cols(correlate_rows(gray, bank.smooth), bank.d2);
    const ScalarField rxy = correlate_cols(correlate_rows(gray, bank.d1), bank.d1);
    for (size_t j = 0; j < cos2_.size(); ++j) {
      ScalarField r(h_, w_);
#pragma omp parallel for schedule(static) if (r.size() >= kParallelCutoff)
      for (int i = 0; i < r.size(); ++i)
        r.data[i] = cos2_[j] * rxx.data[i] + sincos_[j] * rxy.data[i] +
                    sin2_[j] * ryy.data[i];
      out.push_back(std::move(r));
    }
  }
  return out;
}

ScalarField LineFilterPrior::predict(const ColorField &uprime) const {
  if (uprime.height != h_ || uprime.width != w_)
    throw shape_error("LineFilterPrior::predict: input shape mismatch");
  const ScalarField gray = to_grayscale(uprime);
  const std::vector<ScalarField> resp = responses(gray);
  const int m = static_cast<int>(resp.size());
  const double g = config_.gain;

  // Soft maximum of the positive responses of the sign-complete bank
  // {+r, -r}: approaches max |r| as the gain grows and is exactly zero for
  // zero responses, so both dark and bright lines register.
  ScalarField out(h_, w_);
#pragma omp parallel for schedule(static) if (out.size() >= kParallelCutoff)
  for (int i = 0; i < out.size(); ++i) {
    double peak = 0.0;
    for (int j = 0; j < m; ++j)
      peak = std::max(peak, std::abs(resp[j].data[i]));
    double acc = 0.0;
    for (int j = 0; j < m; ++j) {
      const double r = resp[j].data[i];
      acc += std::exp(g * (r - peak)) + std::exp(g * (-r - peak));
    }
    const double soft_max = peak + std::log(acc / (2.0 * m)) / g;
    const double t = g * soft_max + config_.squash_offset;
    out.data[i] = 1.0 - 1.0 / (1.0 + std::exp(-t));
  }
  return out;
}

ColorField LineFilterPrior::vjp(const ColorField &uprime,
                                const ScalarField &ct) const {
  if (uprime.height != h_ || uprime.width != w_)
    throw shape_error("LineFilterPrior::vjp: input shape mismatch");
  if (ct.height != h_ || ct.width != w_)
    throw shape_error("LineFilterPrior::vjp: cotangent shape mismatch");

  const ScalarField gray = to_grayscale(uprime);
  const std::vector<ScalarField> resp = responses(gray);
  const int m = static_cast<int>(resp.size());
  const int n_orient = static_cast<int>(cos2_.size());
  const double g = config_.gain;

  // d(out)/d(r_j): out = 1 - sigma(g*S + b),
  // dS/dr_j = (e^{g(r_j - peak)} - e^{-g(r_j + peak)}) / pool.
  std::vector<ScalarField> dresp(m, ScalarField(h_, w_));
#pragma omp parallel for schedule(static) if (h_ * w_ >= kParallelCutoff)
  for (int i = 0; i < h_ * w_; ++i) {
    double peak = 0.0;
    for (int j = 0; j < m; ++j)
      peak = std::max(peak, std::abs(resp[j].data[i]));
    double pool = 0.0;
    for (int j = 0; j < m; ++j) {
      const double r = resp[j].data[i];
      pool += std::exp(g * (r - peak)) + std::exp(g * (-r - peak));
    }
    const double soft_max = peak + std::log(pool / (2.0 * m)) / g;
    const double t = g * soft_max + config_.squash_offset;
    const double sig = 1.0 / (1.0 + std::exp(-t));
    const double dt = -sig * (1.0 - sig) * ct.data[i]; // d(out)/dt * ct
    for (int j = 0; j < m; ++j) {
      const double r = resp[j].data[i];
      const double w_j =
          (std::exp(g * (r - peak)) - std::exp(g * (-r - peak))) / pool;
      dresp[j].data[i] = dt * g * w_j;
    }
  }

  // Pull back through the orientation combinations and the separable basis.
  ScalarField dgray(h_, w_);
  for (size_t b = 0; b < banks_.size(); ++b) {
    ScalarField dxx(h_, w_), dyy(h_, w_), dxy(h_, w_);
#pragma omp parallel for schedule(static) if (h_ * w_ >= kParallelCutoff)
    for (int i = 0; i < h_ * w_; ++i) {
      double axx = 0.0, axy = 0.0, ayy = 0.0;
      for (int j = 0; j < n_orient; ++j) {
        const double d = dresp[b * n_orient + j].data[i];
        axx += cos2_[j] * d;
        axy += sincos_[j] * d;
        ayy += sin2_[j] * d;
      }
      dxx.data[i] = axx;
      dxy.data[i] = axy;
      dyy.data[i] = ayy;
    }
    const auto &bank = banks_[b];
    const ScalarField gxx =
        correlate_rows_adjoint(correlate_cols_adjoint(dxx, bank.smooth), bank.d2);
    const ScalarField gyy =
        correlate_rows_adjoint(correlate_cols_adjoint(dyy, bank.d2), bank.smooth);
    const ScalarField gxy =
        correlate_rows_adjoint(correlate_cols_adjoint(dxy, bank.d1), bank.d1);
#pragma omp parallel for schedule(static) if (h_ * w_ >= kParallelCutoff)
    for (int i = 0; i < h_ * w_; ++i)
      dgray.data[i] += gxx.data[i] + gyy.data[i] + gxy.data[i];
  }

  ColorField out(h_, w_);
#pragma omp parallel for schedule(static) if (h_ * w_ >= kParallelCutoff)
  for (int i = 0; i < h_ * w_; ++i) {
    out.data[3 * i + 0] = kR * dgray.data[i];
    out.data[3 * i + 1] = kG * dgray.data[i];
    out.data[3 * i + 2] = kB * dgray.data[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// FixedMapPrior

FixedMapPrior::FixedMapPrior(ScalarField map) : map_(std::move(map)) {
  for (double v : map_.data)
    if (!(v >= 0.0 && v <= 1.0))
      throw shape_error("FixedMapPrior: map values must lie in [0,1]");
}

ScalarField FixedMapPrior::predict(const ColorField &uprime) const {
  if (uprime.height != map_.height || uprime.width != map_.width)
    throw shape_error("FixedMapPrior: map is " + std::to_string(map_.height) +
                      "x" + std::to_string(map_.width) + " but instance is " +
                      std::to_string(uprime.height) + "x" +
                      std::to_string(uprime.width));
  return map_;
}

ColorField FixedMapPrior::vjp(const ColorField &uprime,
                              const ScalarField &ct) const {
  require_same_shape(uprime, ct, "FixedMapPrior::vjp");
  return ColorField(uprime.height, uprime.width, 0.0);
}

std::unique_ptr<CrackPrior> load_fixed_map_prior(const std::string &path) {
  return std::make_unique<FixedMapPrior>(load_image_gray(path));
}

} // namespace craq
