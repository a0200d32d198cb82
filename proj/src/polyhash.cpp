#include "lrpo/polyhash.hpp"

#include <cmath>
#include <stdexcept>

namespace lrpo {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull,
                            31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // deterministic Miller-Rabin witness set for all 64-bit integers
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull,
                            31ull, 37ull}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

std::uint64_t next_prime_at_least(std::uint64_t x) {
    if (x <= 2) return 2;
    std::uint64_t c = x | 1;
    while (!is_prime(c)) {
        if (c > UINT64_MAX - 2) throw std::overflow_error("prime search exceeds 64 bits");
        c += 2;
    }
    return c;
}

std::uint64_t modulus_for(std::uint64_t label_universe, std::uint64_t ell) {
    if (label_universe == 0 || ell == 0) throw std::invalid_argument("bad modulus arguments");
    unsigned __int128 target = static_cast<unsigned __int128>(label_universe) * ell * 1024u;
    if (target < (1ull << 31)) target = 1ull << 31;
    if (target > UINT64_MAX - (1ull << 16))
        throw std::overflow_error("label universe too large for 64-bit seed construction");
    return next_prime_at_least(static_cast<std::uint64_t>(target));
}

std::uint32_t coeff_word_bits(std::uint64_t label_universe, std::uint64_t ell) {
    std::uint32_t lg_n = label_universe <= 1
                             ? 1
                             : std::uint32_t(std::bit_width(label_universe - 1));  // ceil(log2 N)
    std::uint32_t w = std::max<std::uint32_t>(48, 2 * lg_n);
    w = (w + 7) / 8 * 8;
    // widen in the corner case of tiny N with huge ell, so the word always
    // dominates bit_width(p) by >= 8 bits
    double lg_p = std::max(std::log2(double(label_universe)) + std::log2(double(ell)) + 10.0,
                           31.0) + 1.0;
    while (w < lg_p + 8.0) w += 8;
    return w;
}

PolyHash::PolyHash(std::uint64_t prime, std::vector<std::uint64_t> cs)
    : p(prime), coeffs(std::move(cs)), word_bits(std::uint32_t(std::bit_width(prime))) {
    if (p < 2) throw std::invalid_argument("modulus must be >= 2");
    for (auto& c : coeffs) c %= p;
}

PolyHash::PolyHash(std::uint64_t prime, std::vector<std::uint64_t> cs, std::uint32_t word)
    : p(prime), coeffs(std::move(cs)), word_bits(word) {
    if (p < 2) throw std::invalid_argument("modulus must be >= 2");
    for (auto& c : coeffs) c %= p;
}

std::uint64_t bernoulli_threshold(double delta, std::uint64_t p) {
    if (delta <= 0.0) return 0;
    if (delta >= 1.0) return p;
    int e = 0;
    double m = std::frexp(delta, &e);  // delta = m * 2^e, m in [0.5, 1)
    auto mi = static_cast<unsigned __int128>(std::ldexp(m, 53));
    unsigned __int128 prod = mi * p;  // delta * p = prod * 2^(e-53)
    int shift = 53 - e;
    if (shift >= 128) return 0;
    return static_cast<std::uint64_t>(prod >> shift);
}

std::vector<std::uint64_t> read_coefficients(std::span<const std::uint8_t> material,
                                             std::size_t* cursor_bits, std::size_t count,
                                             std::uint32_t word_bits, std::uint64_t p) {
    if (word_bits % 8 != 0) throw std::invalid_argument("word width must be whole bytes");
    std::size_t word_bytes = word_bits / 8;
    std::vector<std::uint64_t> out;
    out.reserve(count);
    std::size_t pos = *cursor_bits / 8;
    for (std::size_t i = 0; i < count; ++i) {
        if (pos + word_bytes > material.size())
            throw std::invalid_argument("seed material too short for layout");
        // big-endian fold mod p; wider-than-64-bit words reduce incrementally
        std::uint64_t acc = 0;
        for (std::size_t j = 0; j < word_bytes; ++j)
            acc = (mulmod(acc, 256, p) + material[pos + j] % p) % p;
        out.push_back(acc);
        pos += word_bytes;
    }
    *cursor_bits = pos * 8;
    return out;
}

}  // namespace lrpo
