#pragma once

#include <gmpxx.h>

#include <string>

namespace capkit {

/// Exact integer used by every matrix and presentation in the library.
using Int = mpz_class;

inline int cmpabs(const Int& a, const Int& b) { return mpz_cmpabs(a.get_mpz_t(), b.get_mpz_t()); }
inline int cmpabs(const Int& a, unsigned long b) { return mpz_cmpabs_ui(a.get_mpz_t(), b); }

inline std::string to_string(const Int& v) { return v.get_str(); }

}  // namespace capkit
