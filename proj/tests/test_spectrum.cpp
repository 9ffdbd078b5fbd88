#include "doctest.h"
#include "rsfft/spectrum.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "rsfft/rng.hpp"

using namespace rsfft;

namespace {

// Direct per-frequency averages, independent of the butterfly path.
std::vector<double> direct_boolean_dft(const std::vector<double>& values, int n) {
  const std::size_t size = values.size();
  std::vector<double> out(size, 0.0);
  for (std::size_t xi = 0; xi < size; ++xi) {
    double acc = 0.0;
    for (std::size_t x = 0; x < size; ++x) {
      const int parity = std::popcount(xi & x) & 1;
      acc += parity ? -values[x] : values[x];
    }
    out[xi] = acc / static_cast<double>(size);
  }
  return out;
}

std::vector<cplx> direct_cyclic_dft(const std::vector<cplx>& z) {
  const auto b = z.size();
  std::vector<cplx> out(b);
  for (std::size_t l = 0; l < b; ++l) {
    cplx acc = 0.0;
    for (std::size_t x = 0; x < b; ++x) {
      const double ang = -2.0 * M_PI * static_cast<double>(l) * static_cast<double>(x) /
                         static_cast<double>(b);
      acc += z[x] * cplx{std::cos(ang), std::sin(ang)};
    }
    out[l] = acc / static_cast<double>(b);
  }
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("spectrum");

TEST_CASE("constant function transforms to the zero frequency") {
  const std::vector<double> values(4, 1.0);
  const auto spec = boolean_dft(values);
  CHECK(spec.sparsity() == 1);
  CHECK(spec.coeff(0) == doctest::Approx(1.0));
}

TEST_CASE("single character transforms to a single coefficient") {
  // f(x) = (-1)^{x_1} on n = 2; frequency bits 01.
  std::vector<double> values(4);
  for (std::size_t x = 0; x < 4; ++x) values[x] = (x & 1) ? -1.0 : 1.0;
  const auto spec = boolean_dft(values);
  CHECK(spec.sparsity() == 1);
  CHECK(spec.coeff(0b01) == doctest::Approx(1.0));
}

TEST_CASE("random table matches the direct summation oracle") {
  Rng rng(8);
  std::vector<double> values(8);
  for (double& v : values) v = rng.uniform(-2.0, 2.0);
  const auto spec = boolean_dft(values);
  const auto direct = direct_boolean_dft(values, 3);
  for (std::size_t xi = 0; xi < 8; ++xi)
    CHECK(spec.coeff(xi) == doctest::Approx(direct[xi]).epsilon(1e-12));
}

TEST_CASE("boolean_eval basics") {
  BooleanSpectrum empty(2);
  CHECK(boolean_eval(empty, FreqVec(0b11, 2)) == 0.0);

  BooleanSpectrum one(2);
  one.set(0b01, 2.0);  // character (1, 0)
  CHECK(boolean_eval(one, FreqVec(0b01, 2)) == doctest::Approx(-2.0));
  CHECK_THROWS(boolean_eval(one, FreqVec(0, 3)));
}

TEST_CASE("evaluation round trip reproduces the table") {
  Rng rng(9);
  BooleanSpectrum spec(3);
  for (std::uint64_t xi : {0ull, 3ull, 5ull, 7ull}) spec.set(xi, rng.uniform(-1.0, 1.0));
  const auto table = boolean_table(spec);
  for (std::uint64_t x = 0; x < 8; ++x)
    CHECK(table[x] == doctest::Approx(boolean_eval(spec, FreqVec(x, 3))).epsilon(1e-12));
  const auto again = boolean_dft(table);
  for (std::uint64_t xi = 0; xi < 8; ++xi)
    CHECK(again.coeff(xi) == doctest::Approx(spec.coeff(xi)).epsilon(1e-9));
}

TEST_CASE("cyclic transform basics") {
  const std::vector<cplx> ones(6, cplx{1.0, 0.0});
  const auto spec = cyclic_dft(ones);
  CHECK(spec.sparsity() == 1);
  CHECK(spec.coeff(0).real() == doctest::Approx(1.0));

  std::vector<cplx> character(5);
  for (std::size_t x = 0; x < 5; ++x) {
    const double ang = 2.0 * M_PI * 2.0 * static_cast<double>(x) / 5.0;
    character[x] = {std::cos(ang), std::sin(ang)};
  }
  const auto spec2 = cyclic_dft(character);
  CHECK(spec2.sparsity() == 1);
  CHECK(std::abs(spec2.coeff(2) - cplx{1.0, 0.0}) < 1e-9);
}

TEST_CASE("cyclic transform matches direct summation and inverts") {
  Rng rng(10);
  std::vector<cplx> z(7);
  for (auto& v : z) v = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  const auto spec = cyclic_dft(z);
  const auto direct = direct_cyclic_dft(z);
  for (std::int64_t l = 0; l < 7; ++l)
    CHECK(std::abs(spec.coeff(l) - direct[static_cast<std::size_t>(l)]) < 1e-12);
  const auto back = cyclic_inverse(spec);
  for (std::size_t x = 0; x < 7; ++x) CHECK(std::abs(back[x] - z[x]) < 1e-9);
}

TEST_CASE("torus evaluation") {
  TorusSpectrum one(8);
  one.set(5, cplx{1.0, 0.0});
  CHECK(std::abs(torus_eval(one, 0.0) - cplx{1.0, 0.0}) < 1e-15);

  TorusSpectrum pair(2);
  pair.set(1, cplx{1.0, 0.0});
  pair.set(-1, cplx{1.0, 0.0});
  CHECK(std::abs(torus_eval(pair, 0.25)) < 1e-12);  // 2 cos(pi/2)

  Rng rng(11);
  TorusSpectrum random3(32);
  for (std::uint64_t off : rng.distinct(3, 65))
    random3.set(static_cast<std::int64_t>(off) - 32,
                cplx{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)});
  const double bound = random3.norm1();
  for (int t = 0; t < 1000; ++t)
    CHECK(std::abs(torus_eval(random3, rng.uniform01())) <= bound + 1e-12);
}

TEST_CASE("Parseval holds for boolean and cyclic spectra") {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> values(16);
    for (double& v : values) v = rng.uniform(-1.0, 1.0);
    const auto spec = boolean_dft(values);
    double lhs = 0.0;
    for (double v : values) lhs += v * v;
    lhs /= static_cast<double>(values.size());
    double rhs = 0.0;
    for (const auto& [_, c] : spec.entries()) rhs += c * c;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));

    std::vector<cplx> z(9);
    for (auto& v : z) v = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    const auto cs = cyclic_dft(z);
    double lhs2 = 0.0;
    for (const auto& v : z) lhs2 += std::norm(v);
    lhs2 /= static_cast<double>(z.size());
    double rhs2 = 0.0;
    for (const auto& [_, c] : cs.entries()) rhs2 += std::norm(c);
    CHECK(lhs2 == doctest::Approx(rhs2).epsilon(1e-9));
  }
}

TEST_CASE("affine pullback: identity and sign flip") {
  BooleanSpectrum g(2);
  g.set(0b01, 1.0);  // (-1)^{x_1}
  const auto id = F2Matrix::identity(2);
  const auto same = affine_pullback_spectrum(g, id, FreqVec(0, 2));
  CHECK(same == g);
  const auto flipped = affine_pullback_spectrum(g, id, FreqVec(0b01, 2));
  CHECK(flipped.coeff(0b01) == doctest::Approx(-1.0));
}

TEST_CASE("affine pullback matches the composed-function transform") {
  Rng rng(13);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = 4;
    BooleanSpectrum g(n);
    for (std::uint64_t xi : rng.distinct(3, 16)) g.set(xi, rng.uniform(-1.0, 1.0));
    const auto a = random_invertible_f2(n, rng);
    REQUIRE(a.has_value());
    const FreqVec b(rng.below(16), n);

    // Oracle: transform of x -> g(Ax + b) computed point by point.
    std::vector<double> composed(16);
    for (std::uint64_t x = 0; x < 16; ++x)
      composed[x] = boolean_eval(g, add_f2(a->apply(FreqVec(x, n)), b));
    const auto expected = boolean_dft(composed);
    const auto closed = affine_pullback_spectrum(g, *a, b);
    for (std::uint64_t xi = 0; xi < 16; ++xi)
      CHECK(closed.coeff(xi) == doctest::Approx(expected.coeff(xi)).epsilon(1e-9));
  }
}

TEST_CASE("spectra serialize to the documented JSON shape and back") {
  BooleanSpectrum b(3);
  b.set(0b101, -0.5);
  const auto bt = spectrum_to_json(b);
  CHECK(bt.find("\"domain\":\"boolean\"") != std::string::npos);
  CHECK(boolean_spectrum_from_json(bt) == b);

  TorusSpectrum t(16);
  t.set(-7, cplx{0.25, -1.0});
  const auto tt = spectrum_to_json(t);
  const auto t2 = torus_spectrum_from_json(tt);
  CHECK(std::abs(t2.coeff(-7) - t.coeff(-7)) < 1e-15);

  CyclicSpectrum c(5);
  c.set(3, cplx{0.0, 2.0});
  const auto ct = spectrum_to_json(c);
  const auto c2 = cyclic_spectrum_from_json(ct);
  CHECK(std::abs(c2.coeff(3) - c.coeff(3)) < 1e-15);
}

TEST_CASE("near-zero coefficients are dropped") {
  BooleanSpectrum b(2);
  b.set(0b01, 1e-13);
  CHECK(b.sparsity() == 0);
}

TEST_SUITE_END();
