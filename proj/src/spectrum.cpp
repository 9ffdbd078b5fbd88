#include "rsfft/spectrum.hpp"

#include <cmath>
#include <stdexcept>

#include "rsfft/kernels.hpp"
#include "json.hpp"

namespace rsfft {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

int log2_exact(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("table length must be a power of two");
  int l = 0;
  while ((std::size_t{1} << l) < n) ++l;
  return l;
}
}  // namespace

void BooleanSpectrum::set(FreqVec xi, double coeff) {
  if (xi.n != n_) throw std::invalid_argument("BooleanSpectrum::set: frequency length mismatch");
  set(xi.bits, coeff);
}

void BooleanSpectrum::set(std::uint64_t bits, double coeff) {
  if (n_ < 64 && (bits >> n_) != 0)
    throw std::invalid_argument("BooleanSpectrum::set: frequency out of range");
  if (std::abs(coeff) < kCoeffDropTol)
    entries_.erase(bits);
  else
    entries_[bits] = coeff;
}

double BooleanSpectrum::coeff(std::uint64_t bits) const {
  auto it = entries_.find(bits);
  return it == entries_.end() ? 0.0 : it->second;
}

double BooleanSpectrum::norm1() const {
  double s = 0.0;
  for (const auto& [_, c] : entries_) s += std::abs(c);
  return s;
}

double BooleanSpectrum::norm2() const {
  double s = 0.0;
  for (const auto& [_, c] : entries_) s += c * c;
  return std::sqrt(s);
}

void TorusSpectrum::set(std::int64_t xi, cplx coeff) {
  if (xi < -bandlimit_ || xi > bandlimit_)
    throw std::invalid_argument("TorusSpectrum::set: frequency outside bandlimit");
  if (std::abs(coeff) < kCoeffDropTol)
    entries_.erase(xi);
  else
    entries_[xi] = coeff;
}

cplx TorusSpectrum::coeff(std::int64_t xi) const {
  auto it = entries_.find(xi);
  return it == entries_.end() ? cplx{0.0, 0.0} : it->second;
}

double TorusSpectrum::norm1() const {
  double s = 0.0;
  for (const auto& [_, c] : entries_) s += std::abs(c);
  return s;
}

double TorusSpectrum::norm2() const {
  double s = 0.0;
  for (const auto& [_, c] : entries_) s += std::norm(c);
  return std::sqrt(s);
}

void CyclicSpectrum::set(std::int64_t residue, cplx coeff) {
  if (residue < 0 || residue >= modulus_)
    throw std::invalid_argument("CyclicSpectrum::set: residue out of range");
  if (std::abs(coeff) < kCoeffDropTol)
    entries_.erase(residue);
  else
    entries_[residue] = coeff;
}

cplx CyclicSpectrum::coeff(std::int64_t residue) const {
  auto it = entries_.find(residue);
  return it == entries_.end() ? cplx{0.0, 0.0} : it->second;
}

double CyclicSpectrum::norm1() const {
  double s = 0.0;
  for (const auto& [_, c] : entries_) s += std::abs(c);
  return s;
}

double CyclicSpectrum::norm2() const {
  double s = 0.0;
  for (const auto& [_, c] : entries_) s += std::norm(c);
  return std::sqrt(s);
}

BooleanSpectrum boolean_dft(const std::vector<double>& values) {
  const int n = log2_exact(values.size());
  std::vector<double> work = values;
  wht_parallel(work);
  const double scale = 1.0 / static_cast<double>(values.size());
  BooleanSpectrum spec(n);
  for (std::size_t xi = 0; xi < work.size(); ++xi) spec.set(xi, work[xi] * scale);
  return spec;
}

double boolean_eval(const BooleanSpectrum& spec, const FreqVec& x) {
  if (x.n != spec.n()) throw std::invalid_argument("boolean_eval: point length mismatch");
  double acc = 0.0;
  for (const auto& [bits, c] : spec.entries()) {
    const int parity = std::popcount(bits & x.bits) & 1;
    acc += parity ? -c : c;
  }
  return acc;
}

std::vector<double> boolean_table(const BooleanSpectrum& spec) {
  const std::size_t size = std::size_t{1} << spec.n();
  std::vector<double> work(size, 0.0);
  for (const auto& [bits, c] : spec.entries()) work[bits] = c;
  wht_parallel(work);
  return work;
}

CyclicSpectrum cyclic_dft(const std::vector<cplx>& values) {
  if (values.empty()) throw std::invalid_argument("cyclic_dft: empty table");
  const std::int64_t b = static_cast<std::int64_t>(values.size());
  const auto bins = cyclic_dft_parallel(values, -1, 1.0 / static_cast<double>(b));
  CyclicSpectrum spec(b);
  for (std::int64_t l = 0; l < b; ++l) spec.set(l, bins[static_cast<std::size_t>(l)]);
  return spec;
}

std::vector<cplx> cyclic_inverse(const CyclicSpectrum& spec) {
  const std::int64_t b = spec.modulus();
  std::vector<cplx> bins(static_cast<std::size_t>(b), cplx{0.0, 0.0});
  for (const auto& [l, c] : spec.entries()) bins[static_cast<std::size_t>(l)] = c;
  return cyclic_dft_parallel(bins, +1, 1.0);
}

cplx torus_eval(const TorusSpectrum& spec, double t) {
  cplx acc{0.0, 0.0};
  for (const auto& [xi, c] : spec.entries()) {
    const double ang = kTwoPi * static_cast<double>(xi) * t;
    acc += c * cplx{std::cos(ang), std::sin(ang)};
  }
  return acc;
}

BooleanSpectrum affine_pullback_spectrum(const BooleanSpectrum& g, const F2Matrix& a,
                                         const FreqVec& b) {
  const int n = g.n();
  if (a.rows() != n || a.cols() != n)
    throw std::invalid_argument("affine_pullback_spectrum: matrix shape mismatch");
  if (!a.invertible()) throw std::domain_error("affine_pullback_spectrum: singular matrix");
  const F2Matrix at = a.transpose();
  BooleanSpectrum out(n);
  for (const auto& [bits, c] : g.entries()) {
    // g(Ax+b) has coefficient (-1)^{<b, zeta>} g_hat(zeta) at xi = A^T zeta,
    // i.e. zeta = (A^T)^{-1} xi; iterating source frequencies avoids the inverse.
    const FreqVec zeta(bits, n);
    const FreqVec xi = at.apply(zeta);
    const double sign = dot_f2(b, zeta) ? -1.0 : 1.0;
    out.set(xi, sign * c);
  }
  return out;
}

namespace {

nlohmann::json entries_json_complex(const std::map<std::int64_t, cplx>& entries) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [f, c] : entries) {
    arr.push_back({{"freq", f}, {"re", c.real()}, {"im", c.imag()}});
  }
  return arr;
}

}  // namespace

std::string spectrum_to_json(const BooleanSpectrum& s) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [bits, c] : s.entries()) {
    arr.push_back({{"freq", to_bitstring(FreqVec(bits, s.n()))}, {"re", c}, {"im", 0.0}});
  }
  nlohmann::json j{{"domain", "boolean"}, {"n", s.n()}, {"entries", arr}};
  return j.dump();
}

std::string spectrum_to_json(const TorusSpectrum& s) {
  nlohmann::json j{{"domain", "torus"},
                   {"F", s.bandlimit()},
                   {"entries", entries_json_complex(s.entries())}};
  return j.dump();
}

std::string spectrum_to_json(const CyclicSpectrum& s) {
  nlohmann::json j{{"domain", "cyclic"},
                   {"B", s.modulus()},
                   {"entries", entries_json_complex(s.entries())}};
  return j.dump();
}

BooleanSpectrum boolean_spectrum_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.at("domain") != "boolean") throw std::invalid_argument("expected boolean spectrum");
  BooleanSpectrum s(j.at("n").get<int>());
  for (const auto& e : j.at("entries")) {
    s.set(from_bitstring(e.at("freq").get<std::string>()), e.at("re").get<double>());
  }
  return s;
}

TorusSpectrum torus_spectrum_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.at("domain") != "torus") throw std::invalid_argument("expected torus spectrum");
  TorusSpectrum s(j.at("F").get<std::int64_t>());
  for (const auto& e : j.at("entries")) {
    s.set(e.at("freq").get<std::int64_t>(),
          cplx{e.at("re").get<double>(), e.at("im").get<double>()});
  }
  return s;
}

CyclicSpectrum cyclic_spectrum_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.at("domain") != "cyclic") throw std::invalid_argument("expected cyclic spectrum");
  CyclicSpectrum s(j.at("B").get<std::int64_t>());
  for (const auto& e : j.at("entries")) {
    s.set(e.at("freq").get<std::int64_t>(),
          cplx{e.at("re").get<double>(), e.at("im").get<double>()});
  }
  return s;
}

}  // namespace rsfft
