#pragma once

#include <cstddef>
#include <cstdint>

// Per-backend kernel entry points. Signatures mirror the public API in
// include/sdsnn/kernels.hpp one-to-one.

#define SDSNN_KERNEL_DECLS                                                          \
    void gemm_nn(std::size_t m, std::size_t n, std::size_t k,                       \
                 const double* a, const double* b, double* c);                      \
    void gemm_tn(std::size_t m, std::size_t n, std::size_t k,                       \
                 const double* a, const double* b, double* c);                      \
    void gemm_nt(std::size_t m, std::size_t n, std::size_t k,                       \
                 const double* a, const double* b, double* c);                      \
    void lif_step(const double* u_prev, const double* x_prev,                       \
                  const double* current, double tau, double v_th,                   \
                  double* u, double* x, std::size_t n);                             \
    void lif_accumulate(const double* u_prev, const double* current, double tau,    \
                        double* u, std::size_t n);                                  \
    void surrogate(const double* u, double v_th, double width, double* g,           \
                   std::size_t n);                                                  \
    void adam_step(double* w, const double* g, double* m, double* v,               \
                   const std::uint8_t* alive, std::size_t n,                        \
                   double lr, double beta1, double beta2, double eps,               \
                   double corr1, double corr2);                                     \
    void abs_accumulate(double* acc, const double* g, std::size_t n);               \
    void masked_copy(double* dst, const double* src, const std::uint8_t* alive,     \
                     std::size_t n);                                                \
    void sub(double* out, const double* a, const double* b, std::size_t n);

namespace sdsnn::kernels::detail {

namespace scalar {
SDSNN_KERNEL_DECLS
}

#ifdef SDSNN_WITH_AVX2
namespace avx2 {
SDSNN_KERNEL_DECLS
}
#endif

} // namespace sdsnn::kernels::detail
