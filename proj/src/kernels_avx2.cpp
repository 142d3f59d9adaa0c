// AVX2 kernels. Built with -mavx2 -mfma -ffp-contract=off: FMA is used only
// through explicit intrinsics (matmuls), never by contraction of the plain
// tail loops, so the per-element kernels stay bit-identical to the scalar
// reference. Matmul accumulates over k in the scalar order and differs from
// the reference only by FMA rounding.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <cstring>

#include "liferec/kernels.hpp"

namespace liferec::kernels {
namespace {

void mm_nn_avx2(const double* a, const double* b, double* c, int m, int k, int n) {
    int i = 0;
    for (; i + 2 <= m; i += 2) {
        const double* a0 = a + static_cast<std::size_t>(i) * k;
        const double* a1 = a0 + k;
        double* c0 = c + static_cast<std::size_t>(i) * n;
        double* c1 = c0 + n;
        int j = 0;
        for (; j + 4 <= n; j += 4) {
            __m256d acc0 = _mm256_setzero_pd();
            __m256d acc1 = _mm256_setzero_pd();
            for (int l = 0; l < k; ++l) {
                const __m256d bv = _mm256_loadu_pd(b + static_cast<std::size_t>(l) * n + j);
                acc0 = _mm256_fmadd_pd(_mm256_set1_pd(a0[l]), bv, acc0);
                acc1 = _mm256_fmadd_pd(_mm256_set1_pd(a1[l]), bv, acc1);
            }
            _mm256_storeu_pd(c0 + j, acc0);
            _mm256_storeu_pd(c1 + j, acc1);
        }
        for (; j < n; ++j) {
            double s0 = 0.0, s1 = 0.0;
            for (int l = 0; l < k; ++l) {
                const double bv = b[static_cast<std::size_t>(l) * n + j];
                s0 += a0[l] * bv;
                s1 += a1[l] * bv;
            }
            c0[j] = s0;
            c1[j] = s1;
        }
    }
    for (; i < m; ++i) {
        const double* a0 = a + static_cast<std::size_t>(i) * k;
        double* c0 = c + static_cast<std::size_t>(i) * n;
        int j = 0;
        for (; j + 4 <= n; j += 4) {
            __m256d acc = _mm256_setzero_pd();
            for (int l = 0; l < k; ++l)
                acc = _mm256_fmadd_pd(_mm256_set1_pd(a0[l]),
                                      _mm256_loadu_pd(b + static_cast<std::size_t>(l) * n + j), acc);
            _mm256_storeu_pd(c0 + j, acc);
        }
        for (; j < n; ++j) {
            double s = 0.0;
            for (int l = 0; l < k; ++l) s += a0[l] * b[static_cast<std::size_t>(l) * n + j];
            c0[j] = s;
        }
    }
}

double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

void mm_nt_avx2(const double* a, const double* b, double* c, int m, int k, int n) {
    for (int i = 0; i < m; ++i) {
        const double* arow = a + static_cast<std::size_t>(i) * k;
        double* crow = c + static_cast<std::size_t>(i) * n;
        for (int j = 0; j < n; ++j) {
            const double* brow = b + static_cast<std::size_t>(j) * k;
            __m256d acc = _mm256_setzero_pd();
            int l = 0;
            for (; l + 4 <= k; l += 4)
                acc = _mm256_fmadd_pd(_mm256_loadu_pd(arow + l), _mm256_loadu_pd(brow + l), acc);
            double s = hsum(acc);
            for (; l < k; ++l) s += arow[l] * brow[l];
            crow[j] = s;
        }
    }
}

void mm_tn_avx2(const double* a, const double* b, double* c, int m, int k, int n) {
    std::memset(c, 0, sizeof(double) * static_cast<std::size_t>(m) * n);
    for (int l = 0; l < k; ++l) {
        const double* arow = a + static_cast<std::size_t>(l) * m;
        const double* brow = b + static_cast<std::size_t>(l) * n;
        for (int i = 0; i < m; ++i) {
            const __m256d av = _mm256_set1_pd(arow[i]);
            double* crow = c + static_cast<std::size_t>(i) * n;
            int j = 0;
            for (; j + 4 <= n; j += 4)
                _mm256_storeu_pd(crow + j,
                                 _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + j), _mm256_loadu_pd(crow + j)));
            for (; j < n; ++j) crow[j] += arow[i] * brow[j];
        }
    }
}

void add_avx2(const double* a, const double* b, double* c, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(c + i, _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) c[i] = a[i] + b[i];
}
void sub_avx2(const double* a, const double* b, double* c, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(c + i, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) c[i] = a[i] - b[i];
}
void mul_avx2(const double* a, const double* b, double* c, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(c + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) c[i] = a[i] * b[i];
}
void scale_avx2(const double* a, double s, double* c, std::size_t n) {
    const __m256d sv = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(c + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), sv));
    for (; i < n; ++i) c[i] = a[i] * s;
}
void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d av = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i),
                                              _mm256_mul_pd(av, _mm256_loadu_pd(x + i))));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}
double sum_avx2(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i];
    return s;
}

void adam_avx2(double* p, const double* g, double* m, double* v, std::size_t n, double lr, double beta1,
               double beta2, double eps, double bc1, double bc2) {
    const __m256d b1 = _mm256_set1_pd(beta1);
    const __m256d omb1 = _mm256_set1_pd(1.0 - beta1);
    const __m256d b2 = _mm256_set1_pd(beta2);
    const __m256d omb2 = _mm256_set1_pd(1.0 - beta2);
    const __m256d bc1v = _mm256_set1_pd(bc1);
    const __m256d bc2v = _mm256_set1_pd(bc2);
    const __m256d lrv = _mm256_set1_pd(lr);
    const __m256d epsv = _mm256_set1_pd(eps);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d gv = _mm256_loadu_pd(g + i);
        __m256d mv = _mm256_loadu_pd(m + i);
        __m256d vv = _mm256_loadu_pd(v + i);
        mv = _mm256_add_pd(_mm256_mul_pd(b1, mv), _mm256_mul_pd(omb1, gv));
        vv = _mm256_add_pd(_mm256_mul_pd(b2, vv), _mm256_mul_pd(omb2, _mm256_mul_pd(gv, gv)));
        _mm256_storeu_pd(m + i, mv);
        _mm256_storeu_pd(v + i, vv);
        const __m256d mhat = _mm256_div_pd(mv, bc1v);
        const __m256d vhat = _mm256_div_pd(vv, bc2v);
        const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(vhat), epsv);
        const __m256d step = _mm256_div_pd(_mm256_mul_pd(lrv, mhat), denom);
        _mm256_storeu_pd(p + i, _mm256_sub_pd(_mm256_loadu_pd(p + i), step));
    }
    for (; i < n; ++i) {
        const double gi = g[i];
        m[i] = beta1 * m[i] + (1.0 - beta1) * gi;
        v[i] = beta2 * v[i] + (1.0 - beta2) * (gi * gi);
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

}  // namespace

const Table& avx2_table() {
    static const Table t = {
        "avx2",   mm_nn_avx2, mm_nt_avx2, mm_tn_avx2, add_avx2, sub_avx2,
        mul_avx2, scale_avx2, axpy_avx2,  dot_avx2,   sum_avx2, adam_avx2,
    };
    return t;
}

bool avx2_supported() { return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"); }

}  // namespace liferec::kernels

#else

#include "liferec/kernels.hpp"

namespace liferec::kernels {
const Table& avx2_table() { return scalar_table(); }
bool avx2_supported() { return false; }
}  // namespace liferec::kernels

#endif
