#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace rsfft {

// Data-parallel inner loops, each with a serial reference implementation.
// The parallel variants partition work so that per-element arithmetic is
// identical to the serial order; outputs match bit for bit.

// In-place Walsh-Hadamard butterfly over a table of length 2^n.
void wht_serial(std::vector<double>& a);
void wht_parallel(std::vector<double>& a);

// Direct O(B^2) cyclic DFT: out[l] = scale * sum_x in[x] * exp(sign*2*pi*i*l*x/B).
std::vector<std::complex<double>> cyclic_dft_serial(
    const std::vector<std::complex<double>>& in, int sign, double scale);
std::vector<std::complex<double>> cyclic_dft_parallel(
    const std::vector<std::complex<double>>& in, int sign, double scale);

// Number of uniform grid points t = g/grid_size with |sum_j c_j e^{2 pi i f_j t}| <= tau.
std::size_t grid_count_below_serial(const std::vector<long long>& freqs,
                                    const std::vector<std::complex<double>>& coeffs,
                                    double tau, std::size_t grid_size);
std::size_t grid_count_below_parallel(const std::vector<long long>& freqs,
                                      const std::vector<std::complex<double>>& coeffs,
                                      double tau, std::size_t grid_size);

}  // namespace rsfft
