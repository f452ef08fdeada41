#include "sdsnn/kernels.hpp"

#include "kernels_impl.hpp"
#include "sdsnn/errors.hpp"

#include <cstdlib>
#include <string>

namespace sdsnn::kernels {

namespace {

bool avx2_supported() {
#if defined(SDSNN_WITH_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

Backend detect_backend() {
    if (const char* env = std::getenv("SDSNN_KERNEL_BACKEND")) {
        const std::string name(env);
        if (name == "scalar") {
            return Backend::scalar;
        }
        if (name == "avx2") {
            if (!avx2_supported()) {
                throw ContractError(
                    "SDSNN_KERNEL_BACKEND=avx2 requested but AVX2 is not available");
            }
            return Backend::avx2;
        }
        throw ParseError("unknown SDSNN_KERNEL_BACKEND value '" + name +
                         "' (expected 'scalar' or 'avx2')");
    }
    return avx2_supported() ? Backend::avx2 : Backend::scalar;
}

Backend& backend_slot() {
    static Backend backend = detect_backend();
    return backend;
}

} // namespace

Backend active_backend() { return backend_slot(); }

void set_backend(Backend backend) {
    if (!backend_available(backend)) {
        throw ContractError("kernel backend '" + backend_name(backend) +
                            "' is not available on this machine");
    }
    backend_slot() = backend;
}

bool backend_available(Backend backend) {
    switch (backend) {
    case Backend::scalar:
        return true;
    case Backend::avx2:
        return avx2_supported();
    }
    return false;
}

std::string backend_name(Backend backend) {
    switch (backend) {
    case Backend::scalar:
        return "scalar";
    case Backend::avx2:
        return "avx2";
    }
    return "unknown";
}

#ifdef SDSNN_WITH_AVX2
#define SDSNN_DISPATCH(fn, ...)                      \
    do {                                             \
        if (backend_slot() == Backend::avx2) {       \
            detail::avx2::fn(__VA_ARGS__);           \
            return;                                  \
        }                                            \
        detail::scalar::fn(__VA_ARGS__);             \
    } while (0)
#else
#define SDSNN_DISPATCH(fn, ...) detail::scalar::fn(__VA_ARGS__)
#endif

void gemm_nn(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c) {
    SDSNN_DISPATCH(gemm_nn, m, n, k, a, b, c);
}

void gemm_tn(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c) {
    SDSNN_DISPATCH(gemm_tn, m, n, k, a, b, c);
}

void gemm_nt(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c) {
    SDSNN_DISPATCH(gemm_nt, m, n, k, a, b, c);
}

void lif_step(const double* u_prev, const double* x_prev,
              const double* current, double tau, double v_th,
              double* u, double* x, std::size_t n) {
    SDSNN_DISPATCH(lif_step, u_prev, x_prev, current, tau, v_th, u, x, n);
}

void lif_accumulate(const double* u_prev, const double* current, double tau,
                    double* u, std::size_t n) {
    SDSNN_DISPATCH(lif_accumulate, u_prev, current, tau, u, n);
}

void surrogate(const double* u, double v_th, double width, double* g,
               std::size_t n) {
    SDSNN_DISPATCH(surrogate, u, v_th, width, g, n);
}

void adam_step(double* w, const double* g, double* m, double* v,
               const std::uint8_t* alive, std::size_t n,
               double lr, double beta1, double beta2, double eps,
               double corr1, double corr2) {
    SDSNN_DISPATCH(adam_step, w, g, m, v, alive, n, lr, beta1, beta2, eps,
                   corr1, corr2);
}

void abs_accumulate(double* acc, const double* g, std::size_t n) {
    SDSNN_DISPATCH(abs_accumulate, acc, g, n);
}

void masked_copy(double* dst, const double* src, const std::uint8_t* alive,
                 std::size_t n) {
    SDSNN_DISPATCH(masked_copy, dst, src, alive, n);
}

void sub(double* out, const double* a, const double* b, std::size_t n) {
    SDSNN_DISPATCH(sub, out, a, b, n);
}

#undef SDSNN_DISPATCH

} // namespace sdsnn::kernels
