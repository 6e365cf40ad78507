#ifndef CRAQ_PRIORS_HPP
#define CRAQ_PRIORS_HPP

#include <memory>
#include <string>
#include <vector>

#include "craq/field.hpp"

namespace craq {

/// Latent code z. Image-shaped latents carry height/width/channels metadata;
/// data is the flat vector the optimizer owns.
struct LatentCode {
  int height = 0;
  int width = 0;
  int channels = 1;
  std::vector<double> data;

  int dim() const { return static_cast<int>(data.size()); }
};

/// Background prior G: z -> crack-free painting. Implementations supply the
/// forward map and the exact vector-Jacobian product of it.
class GeneratorPrior {
public:
  virtual ~GeneratorPrior() = default;

  virtual int latent_dim() const = 0;
  virtual int height() const = 0;
  virtual int width() const = 0;

  virtual ColorField generate(const LatentCode &z) const = 0;
  virtual LatentCode vjp(const LatentCode &z, const ColorField &cotangent) const = 0;

  /// Latent the solver starts from for a given observed image.
  virtual LatentCode initial_latent(const ColorField &u) const = 0;

  virtual std::string name() const = 0;

protected:
  void require_latent(const LatentCode &z) const;
};

/// Crack estimator P: image -> per-pixel crack-freeness in [0,1], values
/// near 0 at cracks. vjp is the exact adjoint where differentiable and
/// identically zero for frozen priors.
class CrackPrior {
public:
  virtual ~CrackPrior() = default;

  virtual int height() const = 0;
  virtual int width() const = 0;

  virtual ScalarField predict(const ColorField &uprime) const = 0;
  virtual ColorField vjp(const ColorField &uprime, const ScalarField &cotangent) const = 0;

  virtual bool frozen() const { return false; }
  virtual std::string name() const = 0;
};

/// Degenerate generator: B = clamp(z) with z image-shaped. Reduces the model
/// to classical Ambrosio-Tortorelli where the painting-regularity term
/// supplies all background smoothness.
class IdentityGenerator final : public GeneratorPrior {
public:
  IdentityGenerator(int h, int w);

  int latent_dim() const override { return h_ * w_ * 3; }
  int height() const override { return h_; }
  int width() const override { return w_; }

  ColorField generate(const LatentCode &z) const override;
  /// Subgradient convention at the clamp: identity where 0 < z < 1, zero
  /// where clamped.
  LatentCode vjp(const LatentCode &z, const ColorField &cotangent) const override;
  LatentCode initial_latent(const ColorField &u) const override;
  std::string name() const override { return "identity"; }

private:
  int h_, w_;
};

/// Linear low-dimensional background manifold: bilinear upsampling of a
/// coarse latent image by an integer factor. vjp is the exact transpose.
class BilinearGenerator final : public GeneratorPrior {
public:
  BilinearGenerator(int h, int w, int factor);

  int latent_dim() const override { return lh_ * lw_ * 3; }
  int height() const override { return h_; }
  int width() const override { return w_; }
  int factor() const { return factor_; }

  ColorField generate(const LatentCode &z) const override;
  LatentCode vjp(const LatentCode &z, const ColorField &cotangent) const override;
  /// Block-averaged observed image.
  LatentCode initial_latent(const ColorField &u) const override;
  std::string name() const override { return "bilinear:" + std::to_string(factor_); }

private:
  int h_, w_, factor_, lh_, lw_;
  // Per-axis interpolation tables: source index and fractional weight for
  // each output coordinate (half-pixel-center convention).
  std::vector<int> y0_;
  std::vector<double> wy_;
  std::vector<int> x0_;
  std::vector<double> wx_;
};

struct LineFilterConfig {
  std::vector<double> scales = {1.0, 2.0};
  int n_orientations = 4;
  double gain = 10.0;
  /// Logistic squash offset; default maps zero filter response to output 0.9
  /// (weakly crack-free).
  double squash_offset = -2.1972245773362196; // logit(0.1)
};

/// Differentiable stand-in for a learned crack estimator: oriented
/// second-derivative-of-Gaussian responses over (scale, orientation),
/// soft-maximized by a log-sum-exp pool and squashed through a logistic.
/// Oriented responses are assembled from the three separable basis filters
/// Gxx, Gxy, Gyy, so a predict costs six 1-D passes per scale.
class LineFilterPrior final : public CrackPrior {
public:
  LineFilterPrior(int h, int w, LineFilterConfig config = {});

  int height() const override { return h_; }
  int width() const override { return w_; }
  const LineFilterConfig &config() const { return config_; }

  ScalarField predict(const ColorField &uprime) const override;
  ColorField vjp(const ColorField &uprime, const ScalarField &cotangent) const override;
  std::string name() const override { return "line-filter"; }

private:
  struct ScaleBank {
    std::vector<double> smooth; // 1-D Gaussian, unit sum
    std::vector<double> d1;     // 1-D first derivative, zero mean, sigma-scaled
    std::vector<double> d2;     // 1-D second derivative, zero mean, sigma^2-scaled
  };

  // Per-pixel oriented responses for all (scale, orientation) pairs.
  std::vector<ScalarField> responses(const ScalarField &gray) const;

  int h_, w_;
  LineFilterConfig config_;
  std::vector<ScaleBank> banks_;
  std::vector<double> cos2_, sincos_, sin2_; // orientation combination weights
};

/// Frozen prior returning a fixed map regardless of the input; lets
/// externally computed probability maps plug into the objective. vjp is
/// identically zero, so U' receives no gradient through it.
class FixedMapPrior final : public CrackPrior {
public:
  explicit FixedMapPrior(ScalarField map);

  int height() const override { return map_.height; }
  int width() const override { return map_.width; }

  ScalarField predict(const ColorField &uprime) const override;
  ColorField vjp(const ColorField &uprime, const ScalarField &cotangent) const override;
  bool frozen() const override { return true; }
  std::string name() const override { return "file"; }

private:
  ScalarField map_;
};

/// Load an 8-bit grayscale map (0 = crack, 255 = crack-free) as a frozen prior.
std::unique_ptr<CrackPrior> load_fixed_map_prior(const std::string &path);

} // namespace craq

#endif
