#include "lrpo/seeds.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace lrpo {

namespace {

constexpr char kMagic[5] = {'L', 'R', 'P', 'O', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
    std::uint8_t buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = std::uint8_t(v >> (8 * i));  // little-endian
    out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t get_u64(std::istream& in) {
    std::uint8_t buf[8];
    in.read(reinterpret_cast<char*>(buf), 8);
    if (!in) throw std::runtime_error("truncated seed file");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(buf[i]) << (8 * i);
    return v;
}

void put_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(out, bits);
}

double get_f64(std::istream& in) {
    std::uint64_t bits = get_u64(in);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

std::vector<std::uint8_t> expand_seed_bytes(std::span<const std::uint8_t> short_seed,
                                            std::size_t out_bytes) {
    // FNV-1a over the short seed initializes the splitmix state
    std::uint64_t state = 14695981039346656037ull;
    for (std::uint8_t c : short_seed) state = (state ^ c) * 1099511628211ull;
    std::vector<std::uint8_t> out(out_bytes);
    std::size_t i = 0;
    while (i < out_bytes) {
        std::uint64_t word = splitmix64(state);
        for (int j = 0; j < 8 && i < out_bytes; ++j, ++i) out[i] = std::uint8_t(word >> (8 * j));
    }
    return out;
}

std::vector<std::uint8_t> parse_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) throw std::invalid_argument("hex string must have even length");
    auto nib = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("invalid hex digit");
    };
    std::vector<std::uint8_t> out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::uint8_t(nib(hex[2 * i]) * 16 + nib(hex[2 * i + 1]));
    return out;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 15]);
    }
    return out;
}

std::size_t SeedBundle::material_bytes(const Params& params, std::uint64_t label_universe) {
    std::uint32_t w = coeff_word_bits(label_universe, params.ell);
    std::uint64_t coeffs = params.hbar() * params.b * 3;  // bernoulli + timestep + sampler
    return std::size_t(coeffs) * (w / 8);
}

SeedBundle SeedBundle::from_material(const Params& params, std::uint64_t label_universe,
                                     std::vector<std::uint8_t> material) {
    params.validate();
    if (material.size() != material_bytes(params, label_universe))
        throw std::invalid_argument("seed material length does not match the layout");
    SeedBundle s;
    s.params_ = params;
    s.universe_ = label_universe;
    s.p_ = modulus_for(label_universe, params.ell);
    s.bern_threshold_ = bernoulli_threshold(params.delta, s.p_);
    s.material_ = std::move(material);
    std::uint32_t w = coeff_word_bits(label_universe, params.ell);
    std::uint64_t hbar = params.hbar();
    std::size_t cursor = 0;
    s.s1_.bernoulli.reserve(hbar);
    s.s1_.timestep.reserve(hbar);
    for (std::uint64_t h = 0; h < hbar; ++h) {
        s.s1_.bernoulli.emplace_back(
            s.p_, read_coefficients(s.material_, &cursor, params.b, w, s.p_), w);
        s.s1_.timestep.emplace_back(
            s.p_, read_coefficients(s.material_, &cursor, params.b, w, s.p_), w);
    }
    s.s2_.sampler.reserve(hbar);
    for (std::uint64_t h = 0; h < hbar; ++h)
        s.s2_.sampler.emplace_back(
            s.p_, read_coefficients(s.material_, &cursor, params.b, w, s.p_), w);
    s.s2_.sample_budget = params.sample_budget;
    return s;
}

SeedBundle SeedBundle::from_short_seed(const Params& params, std::uint64_t label_universe,
                                       std::span<const std::uint8_t> short_seed) {
    return from_material(params, label_universe,
                         expand_seed_bytes(short_seed, material_bytes(params, label_universe)));
}

SeedBundle SeedBundle::from_short_seed(const Params& params, std::uint64_t label_universe,
                                       std::uint64_t short_seed) {
    std::uint8_t buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = std::uint8_t(short_seed >> (8 * i));
    return from_short_seed(params, label_universe, std::span<const std::uint8_t>(buf, 8));
}

std::uint64_t SeedBundle::digest() const {
    std::uint64_t h = 14695981039346656037ull;
    for (std::uint8_t c : material_) h = (h ^ c) * 1099511628211ull;
    return h;
}

bool SeedBundle::draw_phase_bit(std::uint64_t h, std::uint64_t v) const {
    if (h < 1 || h > s1_.bernoulli.size()) throw std::out_of_range("phase out of range");
    return s1_.bernoulli[h - 1](v) < bern_threshold_;
}

std::optional<std::uint32_t> SeedBundle::phase_of(std::uint64_t v) const {
    for (std::uint64_t h = 1; h <= s1_.bernoulli.size(); ++h)
        if (draw_phase_bit(h, v)) return std::uint32_t(h);
    return std::nullopt;
}

std::uint64_t SeedBundle::draw_timestep(std::uint64_t h, std::uint64_t v) const {
    if (h < 1 || h > s1_.timestep.size()) throw std::out_of_range("phase out of range");
    return 1 + s1_.timestep[h - 1](v) % params_.ell;
}

std::uint64_t SeedBundle::sample_vertex(std::uint64_t h, std::uint64_t j,
                                        std::uint64_t n) const {
    if (h < 1 || h > s2_.sampler.size()) throw std::out_of_range("phase out of range");
    if (j < 1 || j > s2_.sample_budget) throw std::out_of_range("sample budget exceeded");
    if (n == 0) throw std::invalid_argument("empty vertex range");
    return 1 + s2_.sampler[h - 1](j) % n;
}

RandomnessLedger ledger_of(const SeedS1& s1, const SeedS2& s2) {
    RandomnessLedger lg;
    for (const auto& hash : s1.bernoulli) lg.bits_s1 += hash.coeffs.size() * hash.word_bits;
    for (const auto& hash : s1.timestep) lg.bits_s1 += hash.coeffs.size() * hash.word_bits;
    for (const auto& hash : s2.sampler) lg.bits_s2 += hash.coeffs.size() * hash.word_bits;
    return lg;
}

RandomnessLedger SeedBundle::ledger() const { return ledger_of(s1_, s2_); }

void SeedBundle::save(std::ostream& out) const {
    out.write(kMagic, 5);
    put_f64(out, params_.epsilon);
    put_u64(out, params_.d);
    put_f64(out, params_.rho);
    put_u64(out, params_.ell);
    put_f64(out, params_.delta);
    put_u64(out, params_.b);
    put_u64(out, params_.hbar());
    put_u64(out, params_.mode == ParamMode::Theory ? 1 : 0);
    put_f64(out, params_.phi);
    put_u64(out, params_.sample_budget);
    put_f64(out, params_.findr_fraction);
    put_u64(out, universe_);
    put_u64(out, material_.size());
    out.write(reinterpret_cast<const char*>(material_.data()),
              std::streamsize(material_.size()));
    if (!out) throw std::runtime_error("seed write failed");
}

SeedBundle SeedBundle::load(std::istream& in) {
    char magic[5];
    in.read(magic, 5);
    if (!in || std::memcmp(magic, kMagic, 5) != 0)
        throw std::runtime_error("bad seed file magic");
    Params p;
    p.epsilon = get_f64(in);
    p.d = get_u64(in);
    p.rho = get_f64(in);
    p.ell = get_u64(in);
    p.delta = get_f64(in);
    p.b = get_u64(in);
    std::uint64_t stored_hbar = get_u64(in);
    p.mode = get_u64(in) == 1 ? ParamMode::Theory : ParamMode::Practical;
    p.phi = get_f64(in);
    p.sample_budget = get_u64(in);
    p.findr_fraction = get_f64(in);
    std::uint64_t universe = get_u64(in);
    if (stored_hbar != p.hbar()) throw std::runtime_error("seed file hbar != ceil(2/delta)");
    std::uint64_t len = get_u64(in);
    std::vector<std::uint8_t> material(len);
    in.read(reinterpret_cast<char*>(material.data()), std::streamsize(len));
    if (!in) throw std::runtime_error("truncated seed material");
    return from_material(p, universe, std::move(material));
}

void SeedBundle::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open seed file " + path);
    save(out);
}

SeedBundle SeedBundle::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open seed file " + path);
    return load(in);
}

TheoryLedger theory_ledger(double epsilon, std::uint64_t d, double rho, std::uint64_t ell,
                           double log2_label_universe) {
    TheoryLedger t;
    long double dd = d;
    long double delta = std::pow((long double)epsilon, 100) / (dd * dd * dd * dd) * rho / ell;
    long double beta = epsilon / 10.0L;
    t.hbar = std::ceil(2.0L / delta);
    t.b = std::max(std::ceil(4.0L * ell / rho), std::ceil(4.0L / std::pow(beta, 10)));
    // word width mirrors coeff_word_bits()
    std::uint32_t w = std::max<std::uint32_t>(48, 2 * std::uint32_t(std::ceil(log2_label_universe)));
    w = (w + 7) / 8 * 8;
    double lg_p = std::max(log2_label_universe + std::log2(double(ell)) + 10.0, 31.0) + 1.0;
    while (w < lg_p + 8.0) w += 8;
    t.word_bits = w;
    t.bits_s1 = 2.0L * t.hbar * t.b * w;
    t.bits_s2 = t.hbar * t.b * w;
    return t;
}

}  // namespace lrpo
