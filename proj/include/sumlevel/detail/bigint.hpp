#pragma once

#include <gmpxx.h>

#include <cstdint>

namespace sumlevel::detail {

/// mpz from a full 64-bit unsigned value (unsigned long may be narrower elsewhere).
inline mpz_class to_big(std::uint64_t v) {
    mpz_class r;
    mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return r;
}

} // namespace sumlevel::detail
