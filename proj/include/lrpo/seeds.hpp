#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrpo/params.hpp"
#include "lrpo/polyhash.hpp"

namespace lrpo {

/// Exact count of the random bits the seed layout consumes.
struct RandomnessLedger {
    std::uint64_t bits_s1 = 0;  // phase Bernoullis + diffusion timesteps
    std::uint64_t bits_s2 = 0;  // findr sampling
    std::uint64_t total_bits() const { return bits_s1 + bits_s2; }
};

struct SeedS1;
struct SeedS2;
RandomnessLedger ledger_of(const SeedS1& s1, const SeedS2& s2);

/// S1: per phase, one hash driving the Bernoulli participation bits and one
/// driving the diffusion timesteps.
struct SeedS1 {
    std::vector<PolyHash> bernoulli;  // index h-1
    std::vector<PolyHash> timestep;
};

/// S2: per phase, one hash driving the uniform vertex-index sample stream
/// consumed by findr, plus the per-phase draw budget.
struct SeedS2 {
    std::vector<PolyHash> sampler;
    std::uint64_t sample_budget = 0;
};

/// The full structured randomness of one run. All draw operations are pure
/// functions of (seed, arguments); the bundle is immutable after
/// construction and safe for unlimited concurrent use.
class SeedBundle {
public:
    /// Material layout, big-endian words of coeff_word_bits(N, ell) bits:
    /// for h = 1..hbar: b Bernoulli coefficients, then b timestep
    /// coefficients; afterwards, for h = 1..hbar: b sampler coefficients.
    static SeedBundle from_material(const Params& params, std::uint64_t label_universe,
                                    std::vector<std::uint8_t> material);

    /// Convenience: expands a short byte string (or a bare 64-bit value)
    /// into full material via a splitmix64 stream. The formal random object
    /// is always the expanded material; the ledger accounts for it.
    static SeedBundle from_short_seed(const Params& params, std::uint64_t label_universe,
                                      std::span<const std::uint8_t> short_seed);
    static SeedBundle from_short_seed(const Params& params, std::uint64_t label_universe,
                                      std::uint64_t short_seed);

    static std::size_t material_bytes(const Params& params, std::uint64_t label_universe);

    const Params& params() const { return params_; }
    std::uint64_t label_universe() const { return universe_; }
    std::uint64_t modulus() const { return p_; }
    const SeedS1& s1() const { return s1_; }
    const SeedS2& s2() const { return s2_; }
    const std::vector<std::uint8_t>& material() const { return material_; }
    std::uint64_t digest() const;  // FNV-1a over the material

    /// Bernoulli(delta) participation bit of label v in phase h (1-based).
    bool draw_phase_bit(std::uint64_t h, std::uint64_t v) const;

    /// Smallest phase whose Bernoulli fires, or nullopt (unphased).
    std::optional<std::uint32_t> phase_of(std::uint64_t v) const;

    /// Diffusion length in [1, ell] for label v in phase h.
    std::uint64_t draw_timestep(std::uint64_t h, std::uint64_t v) const;

    /// j-th uniform vertex index in [1, n] of phase h's findr stream;
    /// throws std::out_of_range once j exceeds the sample budget.
    std::uint64_t sample_vertex(std::uint64_t h, std::uint64_t j, std::uint64_t n) const;

    RandomnessLedger ledger() const;

    void save(std::ostream& out) const;
    static SeedBundle load(std::istream& in);
    void save_file(const std::string& path) const;
    static SeedBundle load_file(const std::string& path);

private:
    Params params_;
    std::uint64_t universe_ = 0;
    std::uint64_t p_ = 0;
    std::uint64_t bern_threshold_ = 0;
    SeedS1 s1_;
    SeedS2 s2_;
    std::vector<std::uint8_t> material_;
};

/// Closed-form layout arithmetic in long double, for theory-mode parameter
/// sets whose hbar and b overflow 64 bits. Mirrors the construction above
/// exactly: total = 3 * hbar * b * word_bits.
struct TheoryLedger {
    long double hbar = 0, b = 0;
    std::uint32_t word_bits = 0;
    long double bits_s1 = 0, bits_s2 = 0;
    long double total_bits() const { return bits_s1 + bits_s2; }
};
TheoryLedger theory_ledger(double epsilon, std::uint64_t d, double rho, std::uint64_t ell,
                           double log2_label_universe);

std::uint64_t splitmix64(std::uint64_t& state);
std::vector<std::uint8_t> expand_seed_bytes(std::span<const std::uint8_t> short_seed,
                                            std::size_t out_bytes);
std::vector<std::uint8_t> parse_hex(const std::string& hex);
std::string to_hex(std::span<const std::uint8_t> bytes);

}  // namespace lrpo
