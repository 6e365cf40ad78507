#include "craq/reference.hpp"

#include <algorithm>
#include <cmath>

namespace craq::reference {

ScalarField sigmoid(const ScalarField &s) {
  ScalarField v(s.height, s.width);
  for (int i = 0; i < s.size(); ++i) {
    const double a = s.data[i];
    if (a >= 0.0)
      v.data[i] = 1.0 / (1.0 + std::exp(-a));
    else {
      const double e = std::exp(a);
      v.data[i] = e / (1.0 + e);
    }
  }
  return v;
}

double data_fidelity(const ColorField &u, const ColorField &b,
                     const ScalarField &v) {
  double acc = 0.0;
  for (int y = 0; y < u.height; ++y)
    for (int x = 0; x < u.width; ++x)
      for (int c = 0; c < 3; ++c) {
        const double r = u.at(y, x, c) - b.at(y, x, c);
        acc += v.at(y, x) * v.at(y, x) * r * r;
      }
  return acc;
}

double preg_energy(const ColorField &b, const ScalarField &v) {
  double acc = 0.0;
  for (int y = 0; y < b.height; ++y)
    for (int x = 0; x < b.width; ++x) {
      double grad2 = 0.0;
      for (int c = 0; c < 3; ++c) {
        const double dx = (x < b.width - 1) ? b.at(y, x + 1, c) - b.at(y, x, c) : 0.0;
        const double dy = (y < b.height - 1) ? b.at(y + 1, x, c) - b.at(y, x, c) : 0.0;
        grad2 += dx * dx + dy * dy;
      }
      acc += v.at(y, x) * v.at(y, x) * grad2;
    }
  return acc;
}

double creg_energy(const ScalarField &v, double epsilon) {
  double acc = 0.0;
  for (int y = 0; y < v.height; ++y)
    for (int x = 0; x < v.width; ++x) {
      const double dx = (x < v.width - 1) ? v.at(y, x + 1) - v.at(y, x) : 0.0;
      const double dy = (y < v.height - 1) ? v.at(y + 1, x) - v.at(y, x) : 0.0;
      const double vm1 = v.at(y, x) - 1.0;
      acc += epsilon * (dx * dx + dy * dy) + vm1 * vm1 / (4.0 * epsilon);
    }
  return acc;
}

double cp_energy(const ScalarField &v, const ScalarField &p_map) {
  double acc = 0.0;
  for (int i = 0; i < v.size(); ++i) {
    const double d = v.data[i] - p_map.data[i];
    acc += d * d;
  }
  return acc;
}

ScalarField correlate_rows(const ScalarField &f, const std::vector<double> &k) {
  const int h = f.height, w = f.width;
  const int r = static_cast<int>(k.size()) / 2;
  ScalarField out(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int s = -r; s <= r; ++s)
        acc += k[s + r] * f.at(y, std::clamp(x + s, 0, w - 1));
      out.at(y, x) = acc;
    }
  return out;
}

ScalarField correlate_cols(const ScalarField &f, const std::vector<double> &k) {
  const int h = f.height, w = f.width;
  const int r = static_cast<int>(k.size()) / 2;
  ScalarField out(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int s = -r; s <= r; ++s)
        acc += k[s + r] * f.at(std::clamp(y + s, 0, h - 1), x);
      out.at(y, x) = acc;
    }
  return out;
}

void adam_update(std::vector<double> &x, const std::vector<double> &g,
                 std::vector<double> &m, std::vector<double> &w, long k,
                 double gamma, double beta1, double beta2, double margin) {
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(k));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(k));
  for (size_t i = 0; i < x.size(); ++i) {
    m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
    w[i] = beta2 * w[i] + (1.0 - beta2) * g[i] * g[i];
    x[i] -= gamma * (m[i] / bc1) / (std::sqrt(w[i] / bc2) + margin);
  }
}

} // namespace craq::reference
