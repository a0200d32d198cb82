#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace lrpo {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);
bool is_prime(std::uint64_t n);
std::uint64_t next_prime_at_least(std::uint64_t x);

/// Modulus for the b-wise independent family over labels in [1, N] with
/// diffusion length ell: the smallest prime >= max(N*ell*2^10, 2^31), so that
/// distinct labels are distinct field points and every modular range
/// reduction keeps relative bias <= 2^-10. Throws when the product overflows
/// 64 bits (seed construction is then out of desk range; the bit ledger
/// still works, see seeds.hpp).
std::uint64_t modulus_for(std::uint64_t label_universe, std::uint64_t ell);

/// Storage width of one coefficient in the seed layout, in bits. Chosen as
/// max(48, 2*ceil(log2 N)) rounded up to whole bytes, so the width is a pure
/// function of ceil(log2 N) and seed length scales exactly linearly in it;
/// the slack over bit_width(p) also keeps word->coefficient reduction bias
/// below 2^-8.
std::uint32_t coeff_word_bits(std::uint64_t label_universe, std::uint64_t ell);

/// Degree-(b-1) polynomial over the prime field F_p. With coefficients
/// uniform in [0,p), evaluations at any b distinct points are jointly
/// uniform, which is the b-wise independence this library runs on.
struct PolyHash {
    std::uint64_t p = 0;
    std::vector<std::uint64_t> coeffs;  // c_0 .. c_{b-1}, each < p
    std::uint32_t word_bits = 0;        // storage width per coefficient

    PolyHash() = default;
    PolyHash(std::uint64_t prime, std::vector<std::uint64_t> cs);
    PolyHash(std::uint64_t prime, std::vector<std::uint64_t> cs, std::uint32_t word);

    std::uint64_t operator()(std::uint64_t x) const {
        std::uint64_t acc = 0;
        std::uint64_t xr = x % p;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
            acc = (mulmod(acc, xr, p) + *it) % p;
        return acc;
    }
};

/// Exact floor(delta * p) without floating-point rounding surprises; used as
/// the Bernoulli acceptance threshold, giving marginal |Pr - delta| <= 1/p.
std::uint64_t bernoulli_threshold(double delta, std::uint64_t p);

/// Reads consecutive big-endian words of `word_bits` bits from `material`
/// starting at bit offset `*cursor`, reducing each word mod p.
std::vector<std::uint64_t> read_coefficients(std::span<const std::uint8_t> material,
                                             std::size_t* cursor_bits, std::size_t count,
                                             std::uint32_t word_bits, std::uint64_t p);

}  // namespace lrpo
