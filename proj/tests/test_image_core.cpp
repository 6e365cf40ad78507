#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "craq/field.hpp"
#include "craq/image_io.hpp"
#include "craq/ops.hpp"
#include "craq/rng.hpp"
#include "test_oracles.hpp"

using namespace craq;
namespace fs = std::filesystem;

namespace {
fs::path temp_file(const char *name) {
  const fs::path dir = fs::temp_directory_path() / "craq_test_io";
  fs::create_directories(dir);
  return dir / name;
}
} // namespace

TEST_CASE("field constructors enforce shape invariants") {
  CHECK_THROWS_AS(ScalarField(0, 4), shape_error);
  CHECK_THROWS_AS(ColorField(4, 0), shape_error);
  const ColorField c(2, 3);
  CHECK(c.samples() == 18);
}

TEST_CASE("png round trip: scaling by 1/255") {
  ColorField red(1, 1);
  red.at(0, 0, 0) = 1.0;
  const auto path = temp_file("red.png");
  save_image(red, path.string());
  const ColorField back = load_image(path.string());
  CHECK(back.at(0, 0, 0) == 1.0);
  CHECK(back.at(0, 0, 1) == 0.0);
  CHECK(back.at(0, 0, 2) == 0.0);

  const ColorField black(2, 2, 0.0);
  save_image(black, temp_file("black.png").string());
  const ColorField black_back = load_image(temp_file("black.png").string());
  for (double v : black_back.data)
    CHECK(v == 0.0);

  // 8-bit value 128 -> exactly 128/255
  save_image(ColorField(1, 1, 128.0 / 255.0), temp_file("mid.png").string());
  const ColorField mid = load_image(temp_file("mid.png").string());
  CHECK(mid.at(0, 0, 0) == 128.0 / 255.0);
}

TEST_CASE("quantization: round half away from zero") {
  CHECK(quantize_sample(1.0) == 255);
  CHECK(quantize_sample(0.5) == 128); // 127.5 rounds up
  CHECK(quantize_sample(0.0) == 0);
}

TEST_CASE("save/load round trip error bounded by 1/510") {
  Rng rng(3);
  ColorField f(9, 7);
  for (double &x : f.data)
    x = rng.u01();
  for (const char *name : {"rt.png", "rt.ppm"}) {
    const auto path = temp_file(name);
    save_image(f, path.string());
    const ColorField back = load_image(path.string());
    for (int i = 0; i < f.samples(); ++i)
      CHECK(std::abs(back.data[i] - f.data[i]) <= 1.0 / 510.0 + 1e-15);
  }
}

TEST_CASE("grayscale files replicate channels") {
  ScalarField g(2, 2);
  g.data = {0.0, 1.0, 0.25, 0.75};
  for (const char *name : {"gray.png", "gray.pgm"}) {
    const auto path = temp_file(name);
    save_image(g, path.string());
    const ColorField back = load_image(path.string());
    for (int y = 0; y < 2; ++y)
      for (int x = 0; x < 2; ++x) {
        CHECK(back.at(y, x, 0) == back.at(y, x, 1));
        CHECK(back.at(y, x, 1) == back.at(y, x, 2));
      }
    const ScalarField gray = load_image_gray(path.string());
    CHECK(gray.at(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gray.at(0, 0) == 0.0);
  }
}

TEST_CASE("load errors name the path") {
  CHECK_THROWS_WITH_AS(load_image("/nonexistent/foo.png"),
                       doctest::Contains("/nonexistent/foo.png"), io_error);
}

TEST_CASE("to_grayscale uses Rec.601 weights") {
  ColorField f(1, 3);
  f.at(0, 0, 0) = f.at(0, 0, 1) = f.at(0, 0, 2) = 1.0; // white
  f.at(0, 1, 0) = 1.0;                                 // pure red
  const ScalarField g = to_grayscale(f);
  CHECK(g.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.at(0, 1) == doctest::Approx(0.299).epsilon(1e-12));
  CHECK(g.at(0, 2) == 0.0);
}

TEST_CASE("grad_forward: differencing and boundary convention") {
  ScalarField f(1, 3);
  f.data = {0.0, 0.5, 1.0};
  const GradientPair g = grad_forward(f);
  CHECK(g.dx.data[0] == 0.5);
  CHECK(g.dx.data[1] == 0.5);
  CHECK(g.dx.data[2] == 0.0);
  CHECK(g.dy.data[0] == 0.0);

  const ScalarField constant(5, 4, 0.7);
  const GradientPair gc = grad_forward(constant);
  for (double v : gc.dx.data)
    CHECK(v == 0.0);
  for (double v : gc.dy.data)
    CHECK(v == 0.0);

  const ScalarField single(1, 1, 0.3);
  const GradientPair gs = grad_forward(single);
  CHECK(gs.dx.data[0] == 0.0);
  CHECK(gs.dy.data[0] == 0.0);
}

TEST_CASE("grad_forward is linear") {
  Rng rng(17);
  ScalarField a(6, 5), b(6, 5);
  for (double &x : a.data)
    x = rng.u01();
  for (double &x : b.data)
    x = rng.u01();
  ScalarField combo(6, 5);
  for (int i = 0; i < combo.size(); ++i)
    combo.data[i] = 2.0 * a.data[i] - 3.0 * b.data[i];
  const GradientPair ga = grad_forward(a), gb = grad_forward(b),
                     gc = grad_forward(combo);
  for (int i = 0; i < combo.size(); ++i) {
    CHECK(gc.dx.data[i] ==
          doctest::Approx(2.0 * ga.dx.data[i] - 3.0 * gb.dx.data[i]).epsilon(1e-12));
    CHECK(gc.dy.data[i] ==
          doctest::Approx(2.0 * ga.dy.data[i] - 3.0 * gb.dy.data[i]).epsilon(1e-12));
  }
}

TEST_CASE("grad_adjoint: exact adjoint identity") {
  Rng rng(29);
  for (int trial = 0; trial < 25; ++trial) {
    const int h = rng.randint(1, 16), w = rng.randint(1, 16);
    ScalarField f(h, w);
    GradientPair g{ScalarField(h, w), ScalarField(h, w)};
    for (double &x : f.data)
      x = rng.uniform(-1.0, 1.0);
    for (double &x : g.dx.data)
      x = rng.uniform(-1.0, 1.0);
    for (double &x : g.dy.data)
      x = rng.uniform(-1.0, 1.0);
    const GradientPair df = grad_forward(f);
    const ScalarField adj = grad_adjoint(g);
    const double lhs = craq_test::dot(df.dx.data, g.dx.data) +
                       craq_test::dot(df.dy.data, g.dy.data);
    const double rhs = craq_test::dot(f.data, adj.data);
    CHECK(std::abs(lhs - rhs) <= 1e-10);
  }
}

TEST_CASE("grad_adjoint: zero case and 1x2 transpose") {
  const GradientPair zero{ScalarField(3, 3, 0.0), ScalarField(3, 3, 0.0)};
  for (double v : grad_adjoint(zero).data)
    CHECK(v == 0.0);

  const double a = 0.37;
  GradientPair g{ScalarField(1, 2, 0.0), ScalarField(1, 2, 0.0)};
  g.dx.data = {a, 0.0};
  const ScalarField adj = grad_adjoint(g);
  CHECK(adj.data[0] == -a);
  CHECK(adj.data[1] == a);
}

TEST_CASE("otsu: bimodal, constant and two-pixel cases") {
  ScalarField bimodal(1, 10);
  for (int i = 0; i < 6; ++i)
    bimodal.data[i] = 0.2;
  for (int i = 6; i < 10; ++i)
    bimodal.data[i] = 0.8;
  const double t = otsu_threshold(bimodal);
  CHECK(t > 0.2);
  CHECK(t < 0.8);
  CHECK(t == craq_test::otsu_brute_force(bimodal));

  for (double c : {0.0, 0.31, 0.9, 0.999, 1.0}) {
    const ScalarField constant(4, 4, c);
    const ScalarField bin = binarize(constant, otsu_threshold(constant));
    for (double v : bin.data)
      CHECK(v == 0.0);
  }

  ScalarField two(1, 2);
  two.data = {0.0, 1.0};
  const double t2 = otsu_threshold(two);
  const ScalarField bin2 = binarize(two, t2);
  CHECK(bin2.data[0] == 0.0);
  CHECK(bin2.data[1] == 1.0);
}

TEST_CASE("otsu matches the brute-force oracle on random fields") {
  Rng rng(41);
  for (int trial = 0; trial < 120; ++trial) {
    const int h = rng.randint(3, 20), w = rng.randint(3, 20);
    ScalarField f(h, w);
    const double c0 = rng.u01(), c1 = rng.u01();
    for (double &x : f.data) {
      const double pick = rng.u01();
      if (pick < 0.5)
        x = std::clamp(c0 + 0.1 * rng.normal(), 0.0, 1.0);
      else
        x = std::clamp(c1 + 0.1 * rng.normal(), 0.0, 1.0);
    }
    CHECK(otsu_threshold(f) == craq_test::otsu_brute_force(f));
  }
}

TEST_CASE("binarize: strict comparison") {
  ScalarField f(1, 2);
  f.data = {0.2, 0.8};
  const ScalarField b = binarize(f, 0.5);
  CHECK(b.data[0] == 0.0);
  CHECK(b.data[1] == 1.0);

  const ScalarField all_below = binarize(f, 0.9);
  for (double v : all_below.data)
    CHECK(v == 0.0);

  ScalarField ones(2, 2, 1.0);
  for (double v : binarize(ones, 1.0).data)
    CHECK(v == 0.0); // threshold 1.0 -> all zero under strict >
}

TEST_CASE("1-D correlations match their adjoints") {
  Rng rng(53);
  const std::vector<double> k = {0.1, -0.4, 0.6, -0.4, 0.1};
  for (int trial = 0; trial < 10; ++trial) {
    const int h = rng.randint(1, 12), w = rng.randint(1, 12);
    ScalarField f(h, w), c(h, w);
    for (double &x : f.data)
      x = rng.uniform(-1.0, 1.0);
    for (double &x : c.data)
      x = rng.uniform(-1.0, 1.0);
    const double lhs_r = craq_test::dot(correlate_rows(f, k).data, c.data);
    const double rhs_r = craq_test::dot(f.data, correlate_rows_adjoint(c, k).data);
    CHECK(std::abs(lhs_r - rhs_r) <= 1e-11);
    const double lhs_c = craq_test::dot(correlate_cols(f, k).data, c.data);
    const double rhs_c = craq_test::dot(f.data, correlate_cols_adjoint(c, k).data);
    CHECK(std::abs(lhs_c - rhs_c) <= 1e-11);
  }
}
