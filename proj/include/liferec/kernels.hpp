#pragma once

#include <cstddef>
#include <string>

namespace liferec::kernels {

// Arithmetic inner loops behind Matrix/Tape/Adam. Two implementations: a
// scalar reference and an AVX2 variant, selected once at startup. The scalar
// table is the semantic definition; the AVX2 table is equivalence-tested
// against it (bit-exact for the per-element kernels, small relative tolerance
// for the reductions, whose accumulation order differs).
struct Table {
    const char* name;

    // c[m x n] = a[m x k] * b[k x n]
    void (*mm_nn)(const double* a, const double* b, double* c, int m, int k, int n);
    // c[m x n] = a[m x k] * b[n x k]^T
    void (*mm_nt)(const double* a, const double* b, double* c, int m, int k, int n);
    // c[m x n] = a[k x m]^T * b[k x n]
    void (*mm_tn)(const double* a, const double* b, double* c, int m, int k, int n);

    void (*add)(const double* a, const double* b, double* c, std::size_t n);
    void (*sub)(const double* a, const double* b, double* c, std::size_t n);
    void (*mul)(const double* a, const double* b, double* c, std::size_t n);
    void (*scale)(const double* a, double s, double* c, std::size_t n);
    // y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);

    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*sum)(const double* a, std::size_t n);

    // In-place Adam update with bias correction factors bc1 = 1-beta1^t,
    // bc2 = 1-beta2^t precomputed by the caller.
    void (*adam)(double* p, const double* g, double* m, double* v, std::size_t n, double lr, double beta1,
                 double beta2, double eps, double bc1, double bc2);
};

const Table& scalar_table();
bool avx2_supported();
// Valid only when avx2_supported(); dispatch never hands it out otherwise.
const Table& avx2_table();

// Active table: AVX2 when the CPU has it, scalar otherwise. The environment
// variable LIFEREC_KERNELS (scalar|avx2|auto) overrides at startup.
const Table& active();

// Test hook: force a table by name ("scalar", "avx2", "auto").
void force(const std::string& name);

}  // namespace liferec::kernels
