#ifdef SDSNN_WITH_AVX2

#include "kernels_impl.hpp"

#include <immintrin.h>

#include <cstring>

// AVX2 backend. Every kernel except gemm_nt performs the same per-element
// operation sequence as the scalar reference (separate mul/add, no FMA), so
// results are bit-identical lane by lane. gemm_nt reassociates its reduction
// (vector partial sums + horizontal add) and is covered by tolerance tests.

namespace sdsnn::kernels::detail::avx2 {

namespace {

// Expands 4 alive bytes into a lane mask (all-ones where alive != 0).
inline __m256d alive_mask(const std::uint8_t* alive) {
    std::uint32_t packed;
    std::memcpy(&packed, alive, 4);
    const __m128i bytes = _mm_cvtsi32_si128(static_cast<int>(packed));
    const __m256i lanes = _mm256_cvtepu8_epi64(bytes);
    const __m256i nz = _mm256_cmpgt_epi64(lanes, _mm256_setzero_si256());
    return _mm256_castsi256_pd(nz);
}

inline __m256d abs_pd(__m256d x) {
    const __m256d sign = _mm256_set1_pd(-0.0);
    return _mm256_andnot_pd(sign, x);
}

inline double hsum_pd(__m256d x) {
    const __m128d lo = _mm256_castpd256_pd128(x);
    const __m128d hi = _mm256_extractf128_pd(x, 1);
    const __m128d s2 = _mm_add_pd(lo, hi);
    const __m128d s1 = _mm_add_sd(s2, _mm_unpackhi_pd(s2, s2));
    return _mm_cvtsd_f64(s1);
}

} // namespace

void gemm_nn(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c) {
    const std::size_t n4 = n - n % 4;
    for (std::size_t i = 0; i < m; ++i) {
        const double* ai = a + i * k;
        double* ci = c + i * n;
        for (std::size_t p = 0; p < k; ++p) {
            const double aip = ai[p];
            const double* bp = b + p * n;
            const __m256d av = _mm256_set1_pd(aip);
            std::size_t j = 0;
            for (; j < n4; j += 4) {
                const __m256d bv = _mm256_loadu_pd(bp + j);
                const __m256d cv = _mm256_loadu_pd(ci + j);
                _mm256_storeu_pd(ci + j, _mm256_add_pd(cv, _mm256_mul_pd(av, bv)));
            }
            for (; j < n; ++j) {
                ci[j] += aip * bp[j];
            }
        }
    }
}

void gemm_tn(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c) {
    const std::size_t n4 = n - n % 4;
    for (std::size_t p = 0; p < k; ++p) {
        const double* ap = a + p * m;
        const double* bp = b + p * n;
        for (std::size_t i = 0; i < m; ++i) {
            const double api = ap[i];
            double* ci = c + i * n;
            const __m256d av = _mm256_set1_pd(api);
            std::size_t j = 0;
            for (; j < n4; j += 4) {
                const __m256d bv = _mm256_loadu_pd(bp + j);
                const __m256d cv = _mm256_loadu_pd(ci + j);
                _mm256_storeu_pd(ci + j, _mm256_add_pd(cv, _mm256_mul_pd(av, bv)));
            }
            for (; j < n; ++j) {
                ci[j] += api * bp[j];
            }
        }
    }
}

void gemm_nt(std::size_t m, std::size_t n, std::size_t k,
             const double* a, const double* b, double* c) {
    const std::size_t k4 = k - k % 4;
    for (std::size_t i = 0; i < m; ++i) {
        const double* ai = a + i * k;
        for (std::size_t j = 0; j < n; ++j) {
            const double* bj = b + j * k;
            __m256d accv = _mm256_setzero_pd();
            std::size_t p = 0;
            for (; p < k4; p += 4) {
                const __m256d av = _mm256_loadu_pd(ai + p);
                const __m256d bv = _mm256_loadu_pd(bj + p);
                accv = _mm256_add_pd(accv, _mm256_mul_pd(av, bv));
            }
            double acc = hsum_pd(accv);
            for (; p < k; ++p) {
                acc += ai[p] * bj[p];
            }
            c[i * n + j] += acc;
        }
    }
}

void lif_step(const double* u_prev, const double* x_prev,
              const double* current, double tau, double v_th,
              double* u, double* x, std::size_t n) {
    const std::size_t n4 = n - n % 4;
    const __m256d tauv = _mm256_set1_pd(tau);
    const __m256d vthv = _mm256_set1_pd(v_th);
    const __m256d onev = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i < n4; i += 4) {
        const __m256d up = _mm256_loadu_pd(u_prev + i);
        const __m256d xp = _mm256_loadu_pd(x_prev + i);
        const __m256d cur = _mm256_loadu_pd(current + i);
        const __m256d decayed = _mm256_mul_pd(_mm256_mul_pd(tauv, up),
                                              _mm256_sub_pd(onev, xp));
        const __m256d uv = _mm256_add_pd(decayed, cur);
        const __m256d fired = _mm256_cmp_pd(uv, vthv, _CMP_GE_OQ);
        _mm256_storeu_pd(u + i, uv);
        _mm256_storeu_pd(x + i, _mm256_and_pd(fired, onev));
    }
    if (i < n) {
        scalar::lif_step(u_prev + i, x_prev + i, current + i, tau, v_th,
                         u + i, x + i, n - i);
    }
}

void lif_accumulate(const double* u_prev, const double* current, double tau,
                    double* u, std::size_t n) {
    const std::size_t n4 = n - n % 4;
    const __m256d tauv = _mm256_set1_pd(tau);
    std::size_t i = 0;
    for (; i < n4; i += 4) {
        const __m256d up = _mm256_loadu_pd(u_prev + i);
        const __m256d cur = _mm256_loadu_pd(current + i);
        _mm256_storeu_pd(u + i, _mm256_add_pd(_mm256_mul_pd(tauv, up), cur));
    }
    if (i < n) {
        scalar::lif_accumulate(u_prev + i, current + i, tau, u + i, n - i);
    }
}

void surrogate(const double* u, double v_th, double width, double* g,
               std::size_t n) {
    const std::size_t n4 = n - n % 4;
    const __m256d vthv = _mm256_set1_pd(v_th);
    const __m256d halfv = _mm256_set1_pd(0.5 * width);
    const __m256d invv = _mm256_set1_pd(1.0 / width);
    std::size_t i = 0;
    for (; i < n4; i += 4) {
        const __m256d uv = _mm256_loadu_pd(u + i);
        const __m256d dist = abs_pd(_mm256_sub_pd(uv, vthv));
        const __m256d inside = _mm256_cmp_pd(dist, halfv, _CMP_LT_OQ);
        _mm256_storeu_pd(g + i, _mm256_and_pd(inside, invv));
    }
    if (i < n) {
        scalar::surrogate(u + i, v_th, width, g + i, n - i);
    }
}

void adam_step(double* w, const double* g, double* m, double* v,
               const std::uint8_t* alive, std::size_t n,
               double lr, double beta1, double beta2, double eps,
               double corr1, double corr2) {
    const std::size_t n4 = n - n % 4;
    const __m256d b1 = _mm256_set1_pd(beta1);
    const __m256d b2 = _mm256_set1_pd(beta2);
    const __m256d ob1 = _mm256_set1_pd(1.0 - beta1);
    const __m256d ob2 = _mm256_set1_pd(1.0 - beta2);
    const __m256d c1 = _mm256_set1_pd(corr1);
    const __m256d c2 = _mm256_set1_pd(corr2);
    const __m256d lrv = _mm256_set1_pd(lr);
    const __m256d epsv = _mm256_set1_pd(eps);
    std::size_t i = 0;
    for (; i < n4; i += 4) {
        const __m256d gv = _mm256_loadu_pd(g + i);
        const __m256d mv = _mm256_add_pd(_mm256_mul_pd(b1, _mm256_loadu_pd(m + i)),
                                         _mm256_mul_pd(ob1, gv));
        const __m256d vv = _mm256_add_pd(_mm256_mul_pd(b2, _mm256_loadu_pd(v + i)),
                                         _mm256_mul_pd(ob2, _mm256_mul_pd(gv, gv)));
        const __m256d mhat = _mm256_div_pd(mv, c1);
        const __m256d vhat = _mm256_div_pd(vv, c2);
        const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(vhat), epsv);
        const __m256d step = _mm256_div_pd(_mm256_mul_pd(lrv, mhat), denom);
        const __m256d wv = _mm256_sub_pd(_mm256_loadu_pd(w + i), step);
        if (alive != nullptr) {
            const __m256d mask = alive_mask(alive + i);
            _mm256_storeu_pd(w + i, _mm256_and_pd(mask, wv));
            _mm256_storeu_pd(m + i, _mm256_and_pd(mask, mv));
            _mm256_storeu_pd(v + i, _mm256_and_pd(mask, vv));
        } else {
            _mm256_storeu_pd(w + i, wv);
            _mm256_storeu_pd(m + i, mv);
            _mm256_storeu_pd(v + i, vv);
        }
    }
    if (i < n) {
        scalar::adam_step(w + i, g + i, m + i, v + i,
                          alive != nullptr ? alive + i : nullptr, n - i,
                          lr, beta1, beta2, eps, corr1, corr2);
    }
}

void abs_accumulate(double* acc, const double* g, std::size_t n) {
    const std::size_t n4 = n - n % 4;
    std::size_t i = 0;
    for (; i < n4; i += 4) {
        const __m256d av = _mm256_loadu_pd(acc + i);
        const __m256d gv = abs_pd(_mm256_loadu_pd(g + i));
        _mm256_storeu_pd(acc + i, _mm256_add_pd(av, gv));
    }
    if (i < n) {
        scalar::abs_accumulate(acc + i, g + i, n - i);
    }
}

void masked_copy(double* dst, const double* src, const std::uint8_t* alive,
                 std::size_t n) {
    const std::size_t n4 = n - n % 4;
    std::size_t i = 0;
    for (; i < n4; i += 4) {
        const __m256d mask = alive_mask(alive + i);
        const __m256d sv = _mm256_loadu_pd(src + i);
        _mm256_storeu_pd(dst + i, _mm256_and_pd(mask, sv));
    }
    if (i < n) {
        scalar::masked_copy(dst + i, src + i, alive + i, n - i);
    }
}

void sub(double* out, const double* a, const double* b, std::size_t n) {
    const std::size_t n4 = n - n % 4;
    std::size_t i = 0;
    for (; i < n4; i += 4) {
        const __m256d av = _mm256_loadu_pd(a + i);
        const __m256d bv = _mm256_loadu_pd(b + i);
        _mm256_storeu_pd(out + i, _mm256_sub_pd(av, bv));
    }
    if (i < n) {
        scalar::sub(out + i, a + i, b + i, n - i);
    }
}

} // namespace sdsnn::kernels::detail::avx2

#endif // SDSNN_WITH_AVX2
