// Copyright 2026 The spkseg Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Thin RAII wrappers over FFTW real transforms. Internal to the library.

#ifndef SPKSEG_SRC_FFT_HPP_
#define SPKSEG_SRC_FFT_HPP_

#include <complex>
#include <cstddef>
#include <span>

namespace spkseg::internal {

std::size_t next_pow2(std::size_t n);

// Forward real-to-complex DFT of size n; input shorter than n is
// zero-padded. Output holds n/2 + 1 bins.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  std::span<const std::complex<double>> forward(std::span<const double> input);

 private:
  std::size_t n_;
  double* in_;
  std::complex<double>* out_;
  void* plan_;
};

// Inverse DFT of a real, even spectrum given by its first n/2 + 1 bins.
// Normalized by 1/n so that it inverts RealFft on even sequences.
class RealEvenInverseFft {
 public:
  explicit RealEvenInverseFft(std::size_t n);
  ~RealEvenInverseFft();
  RealEvenInverseFft(const RealEvenInverseFft&) = delete;
  RealEvenInverseFft& operator=(const RealEvenInverseFft&) = delete;

  std::size_t size() const { return n_; }
  std::span<const double> inverse(std::span<const double> half_spectrum);

 private:
  std::size_t n_;
  std::complex<double>* in_;
  double* out_;
  void* plan_;
};

}  // namespace spkseg::internal

#endif  // SPKSEG_SRC_FFT_HPP_
