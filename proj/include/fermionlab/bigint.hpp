#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace fermionlab {

using BigInt = mpz_class;
using BigRational = mpq_class;

inline std::string to_string(const BigInt& v) { return v.get_str(10); }

inline BigInt big_from_string(const std::string& s) { return BigInt(s, 10); }

inline bool is_unit(const BigInt& v) { return v == 1 || v == -1; }

inline int sign_of_parity(long long k) { return (k % 2 == 0) ? 1 : -1; }

} // namespace fermionlab
