#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

// Arithmetic inner loops used by the training engine. Every kernel has a
// scalar reference implementation and, on x86-64, an AVX2 variant selected
// at runtime. Elementwise kernels are bit-identical across backends (no FMA
// contraction anywhere); gemm_nt reassociates its dot products and is
// equivalence-tested under a small relative tolerance instead.
namespace sdsnn::kernels {

enum class Backend { scalar, avx2 };

// Backend picked at startup from CPUID; the SDSNN_KERNEL_BACKEND environment
// variable ("scalar"/"avx2") or set_backend() overrides it.
Backend active_backend();
void set_backend(Backend b);
bool backend_available(Backend b);
std::string backend_name(Backend b);

// c (m x n) += a (m x k) * b (k x n), all row-major. Per-element accumulation
// runs in ascending k order on every backend.
void gemm_nn(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c);

// c (m x n) += a^T * b with a stored (k x m), b (k x n).
void gemm_tn(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c);

// c (m x n) += a * b^T with a (m x k), b stored (n x k).
void gemm_nt(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c);

// u = tau * u_prev * (1 - x_prev) + current;  x = 1 where u >= v_th else 0.
void lif_step(const double* u_prev, const double* x_prev, const double* current,
              double tau, double v_th, double* u, double* x, std::size_t n);

// Non-firing accumulator used by the readout layer: u = tau * u_prev + current.
void lif_accumulate(const double* u_prev, const double* current, double tau,
                    double* u, std::size_t n);

// g = (1/width) where |u - v_th| < width/2, else 0. Strict inequality.
void surrogate(const double* u, double v_th, double width, double* g, std::size_t n);

// Adam update over alive entries; dead entries are pinned to exactly zero
// (weight and both moments). corr1/corr2 are the bias-correction divisors.
void adam_step(double* w, const double* g, double* m, double* v,
               const std::uint8_t* alive, std::size_t n,
               double lr, double beta1, double beta2, double eps,
               double corr1, double corr2);

// acc += |g|
void abs_accumulate(double* acc, const double* g, std::size_t n);

// dst = src where alive, else 0
void masked_copy(double* dst, const double* src, const std::uint8_t* alive, std::size_t n);

// out = a - b
void sub(double* out, const double* a, const double* b, std::size_t n);

} // namespace sdsnn::kernels
