#include "kernels_impl.hpp"

#include <cmath>

// Reference kernels. These loops define the numeric contract: every other
// backend must reproduce bit-identical results for the exact-family kernels
// (everything except gemm_nt, whose reduction order is backend-private).

namespace sdsnn::kernels::detail::scalar {

void gemm_nn(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* ai = a + i * k;
        double* ci = c + i * n;
        for (std::size_t p = 0; p < k; ++p) {
            const double aip = ai[p];
            const double* bp = b + p * n;
            for (std::size_t j = 0; j < n; ++j) {
                ci[j] += aip * bp[j];
            }
        }
    }
}

void gemm_tn(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c) {
    for (std::size_t p = 0; p < k; ++p) {
        const double* ap = a + p * m;
        const double* bp = b + p * n;
        for (std::size_t i = 0; i < m; ++i) {
            const double api = ap[i];
            double* ci = c + i * n;
            for (std::size_t j = 0; j < n; ++j) {
                ci[j] += api * bp[j];
            }
        }
    }
}

void gemm_nt(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c) {
    for (std::size_t i = 0; i < m; ++i) {
        const double* ai = a + i * k;
        for (std::size_t j = 0; j < n; ++j) {
            const double* bj = b + j * k;
            double acc = 0.0;
            for (std::size_t p = 0; p < k; ++p) {
                acc += ai[p] * bj[p];
            }
            c[i * n + j] += acc;
        }
    }
}

void lif_step(const double* u_prev, const double* x_prev,
              const double* current, double tau, double v_th,
              double* u, double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double ui = tau * u_prev[i] * (1.0 - x_prev[i]) + current[i];
        u[i] = ui;
        x[i] = (ui >= v_th) ? 1.0 : 0.0;
    }
}

void lif_accumulate(const double* u_prev, const double* current, double tau,
                    double* u, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = tau * u_prev[i] + current[i];
    }
}

void surrogate(const double* u, double v_th, double width, double* g,
               std::size_t n) {
    const double half = 0.5 * width;
    const double inv = 1.0 / width;
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = (std::fabs(u[i] - v_th) < half) ? inv : 0.0;
    }
}

void adam_step(double* w, const double* g, double* m, double* v,
               const std::uint8_t* alive, std::size_t n,
               double lr, double beta1, double beta2, double eps,
               double corr1, double corr2) {
    for (std::size_t i = 0; i < n; ++i) {
        if (alive != nullptr && alive[i] == 0) {
            w[i] = 0.0;
            m[i] = 0.0;
            v[i] = 0.0;
            continue;
        }
        const double gi = g[i];
        const double mi = beta1 * m[i] + (1.0 - beta1) * gi;
        const double vi = beta2 * v[i] + (1.0 - beta2) * (gi * gi);
        m[i] = mi;
        v[i] = vi;
        const double mhat = mi / corr1;
        const double vhat = vi / corr2;
        w[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

void abs_accumulate(double* acc, const double* g, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        acc[i] += std::fabs(g[i]);
    }
}

void masked_copy(double* dst, const double* src, const std::uint8_t* alive,
                 std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        dst[i] = (alive[i] != 0) ? src[i] : 0.0;
    }
}

void sub(double* out, const double* a, const double* b, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = a[i] - b[i];
    }
}

} // namespace sdsnn::kernels::detail::scalar
