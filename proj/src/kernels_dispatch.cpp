#include <cstdlib>

#include "liferec/errors.hpp"
#include "liferec/kernels.hpp"

namespace liferec::kernels {
namespace {

const Table* resolve(const std::string& name) {
    if (name == "scalar") return &scalar_table();
    if (name == "avx2") {
        if (!avx2_supported()) throw ContractError("LIFEREC_KERNELS=avx2 requested but CPU lacks AVX2/FMA");
        return &avx2_table();
    }
    if (name == "auto" || name.empty()) return avx2_supported() ? &avx2_table() : &scalar_table();
    throw ContractError("unknown kernel table '" + name + "' (expected scalar|avx2|auto)");
}

const Table*& active_ptr() {
    static const Table* p = [] {
        const char* env = std::getenv("LIFEREC_KERNELS");
        return resolve(env ? env : "auto");
    }();
    return p;
}

}  // namespace

const Table& active() { return *active_ptr(); }

void force(const std::string& name) { active_ptr() = resolve(name); }

}  // namespace liferec::kernels
