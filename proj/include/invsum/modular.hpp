#pragma once

// Modular arithmetic core: deterministic primality, prime enumeration,
// inverses, and the per-prime context (inverse and discrete-log tables)
// everything else builds on.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "invsum/numeric.hpp"

namespace invsum {

// Odd primes only; p = 2 is rejected everywhere because the character group
// mod 2 is trivial and the sums degenerate.
class unsupported_modulus : public std::domain_error {
public:
    explicit unsupported_modulus(i64 p)
        : std::domain_error("modulus " + std::to_string(p) + " unsupported: odd prime required") {}
};

inline u64 mulmod_u64(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

inline u64 powmod_u64(u64 base, u64 exp, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) r = mulmod_u64(r, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin; the first 12 prime bases decide correctly for
// all n < 3.3e24, far beyond any 64-bit input.
inline bool is_prime(u64 n) {
    if (n < 2) throw std::domain_error("is_prime: argument must be at least 2");
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

// Ascending primes in [lo, hi]. lo > hi yields an empty list; lo < 2 is a
// precondition violation.
inline std::vector<i64> primes_in_range(i64 lo, i64 hi) {
    if (lo < 2) throw std::domain_error("primes_in_range: lower bound must be at least 2");
    std::vector<i64> out;
    if (lo > hi) return out;
    for (i64 n = lo; n <= hi; ++n)
        if (is_prime(static_cast<u64>(n))) out.push_back(n);
    return out;
}

inline i64 mod_pow(i64 base, i64 exp, i64 m) {
    if (m <= 0) throw std::domain_error("mod_pow: modulus must be positive");
    if (exp < 0) throw std::domain_error("mod_pow: exponent must be nonnegative");
    i64 b = base % m;
    if (b < 0) b += m;
    return static_cast<i64>(powmod_u64(static_cast<u64>(b), static_cast<u64>(exp), static_cast<u64>(m)));
}

// Inverse of a mod p (p prime), normalized to [1, p-1]. p | a is an error.
inline i64 mod_inverse(i64 a, i64 p) {
    if (p <= 1) throw std::domain_error("mod_inverse: modulus must exceed 1");
    i64 r = a % p;
    if (r < 0) r += p;
    if (r == 0) throw std::domain_error("mod_inverse: argument divisible by modulus");
    // Extended Euclid on (r, p).
    i64 old_r = r, cur_r = p, old_s = 1, cur_s = 0;
    while (cur_r != 0) {
        i64 q = old_r / cur_r;
        i64 t = old_r - q * cur_r; old_r = cur_r; cur_r = t;
        t = old_s - q * cur_s; old_s = cur_s; cur_s = t;
    }
    if (old_r != 1) throw std::domain_error("mod_inverse: argument not invertible");
    i64 inv = old_s % p;
    if (inv < 0) inv += p;
    return inv;
}

// Dense per-prime tables: inv[a] and dlog[a] for 1 <= a <= p-1, g the least
// primitive root. Index 0 of each table is unused padding so a indexes directly.
struct PrimeContext {
    i64 p = 0;
    i64 g = 0;
    std::vector<std::uint32_t> inv;
    std::vector<std::uint32_t> dlog;

    i64 inv_of(i64 a) const { return inv[static_cast<size_t>(a)]; }
    i64 dlog_of(i64 a) const { return dlog[static_cast<size_t>(a)]; }
};

namespace detail {

inline std::vector<i64> distinct_prime_factors(i64 n) {
    std::vector<i64> f;
    for (i64 q = 2; q * q <= n; ++q) {
        if (n % q == 0) {
            f.push_back(q);
            while (n % q == 0) n /= q;
        }
    }
    if (n > 1) f.push_back(n);
    return f;
}

inline i64 least_primitive_root(i64 p) {
    std::vector<i64> factors = distinct_prime_factors(p - 1);
    for (i64 g = 2; g < p; ++g) {
        bool ok = true;
        for (i64 q : factors) {
            if (mod_pow(g, (p - 1) / q, p) == 1) { ok = false; break; }
        }
        if (ok) return g;
    }
    throw std::logic_error("least_primitive_root: no generator found");
}

}  // namespace detail

inline PrimeContext build_context(i64 p) {
    if (p < 2 || !is_prime(static_cast<u64>(p))) throw std::domain_error("build_context: modulus must be prime");
    if (p == 2) throw unsupported_modulus(p);
    if (p > (i64(1) << 31)) throw std::domain_error("build_context: modulus too large for dense tables");
    PrimeContext ctx;
    ctx.p = p;
    ctx.g = detail::least_primitive_root(p);
    size_t n = static_cast<size_t>(p);
    ctx.inv.assign(n, 0);
    ctx.dlog.assign(n, 0);
    ctx.inv[1] = 1;
    for (i64 a = 2; a < p; ++a) {
        // inv[a] = -(p/a) * inv[p mod a] mod p
        i64 v = p - (p / a) * static_cast<i64>(ctx.inv[static_cast<size_t>(p % a)]) % p;
        if (v == p) v = 0;
        ctx.inv[static_cast<size_t>(a)] = static_cast<std::uint32_t>(v);
    }
    i64 val = 1;
    for (i64 t = 0; t < p - 1; ++t) {
        ctx.dlog[static_cast<size_t>(val)] = static_cast<std::uint32_t>(t);
        val = static_cast<i64>(mulmod_u64(static_cast<u64>(val), static_cast<u64>(ctx.g), static_cast<u64>(p)));
    }
    return ctx;
}

}  // namespace invsum
