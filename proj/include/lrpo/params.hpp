#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace lrpo {

enum class ParamMode { Theory, Practical };

/// Algorithm parameters. Theory mode derives every value from the
/// asymptotic formulas (which blow up at realistic epsilon and exist for
/// symbolic verification only); practical mode uses desk-scale defaults and
/// leaves phi free for calibration.
struct Params {
    double epsilon = 0.5;
    std::uint64_t d = 4;       // degree bound
    double rho = 0.02;         // diffusion truncation threshold
    std::uint64_t ell = 20;    // max diffusion length
    double delta = 0.05;       // per-phase participation probability
    std::uint64_t b = 16;      // independence parameter
    double phi = 0.4;          // conductance acceptance threshold
    std::uint64_t sample_budget = 64;  // findr draws per phase
    // minimum fraction of the phase sample that must be viable before findr
    // accepts a threshold. 0 keeps the bare 12*beta^4 count rule; at desk
    // scale that rule is satisfied by a single sample, so calibration may
    // raise the fraction to recover the filtering the theory-scale count
    // performs.
    double findr_fraction = 0.0;
    ParamMode mode = ParamMode::Practical;

    double beta() const { return epsilon / 10.0; }
    std::uint64_t hbar() const {
        if (delta <= 0.0) return 1;  // degenerate: no phase ever fires
        return static_cast<std::uint64_t>(std::ceil(2.0 / delta));
    }
    /// Timestep count required for viability: ceil((beta / ln^2(1/beta)) * ell).
    std::uint64_t viable_timesteps() const {
        double lg = std::log(1.0 / beta());
        return static_cast<std::uint64_t>(std::ceil(beta() / (lg * lg) * double(ell)));
    }
    /// Largest k tried by findr's ladder: powers of two up to 2*ceil(1/rho).
    std::uint64_t k_ladder_max() const {
        return 2 * static_cast<std::uint64_t>(std::ceil(1.0 / rho));
    }

    static Params practical(double epsilon, std::uint64_t d);

    /// Theory mode: phi = eps^10/d, beta = eps/10, delta = (eps^100/d^4)*rho/ell,
    /// b = max(ceil(4*ell/rho), ceil(4/beta^10)). Only representable for
    /// epsilon close to 1; throws when the formulas overflow 64 bits.
    static Params theory(double epsilon, std::uint64_t d, double rho, std::uint64_t ell);

    void validate() const;
};

inline Params Params::practical(double epsilon, std::uint64_t d) {
    Params p;
    p.epsilon = epsilon;
    p.d = d;
    p.mode = ParamMode::Practical;
    p.validate();
    return p;
}

inline Params Params::theory(double epsilon, std::uint64_t d, double rho, std::uint64_t ell) {
    Params p;
    p.epsilon = epsilon;
    p.d = d;
    p.rho = rho;
    p.ell = ell;
    p.mode = ParamMode::Theory;
    p.phi = std::pow(epsilon, 10) / double(d);
    double dd = double(d);
    p.delta = std::pow(epsilon, 100) / (dd * dd * dd * dd) * rho / double(ell);
    double beta = epsilon / 10.0;
    double b1 = std::ceil(4.0 * double(ell) / rho);
    double b2 = std::ceil(4.0 / std::pow(beta, 10));
    double b = std::max(b1, b2);
    if (p.delta <= 0 || 2.0 / p.delta >= 1e18 || b >= 1e18)
        throw std::invalid_argument("theory-mode parameters overflow 64 bits at this epsilon");
    p.b = static_cast<std::uint64_t>(b);
    p.validate();
    return p;
}

inline void Params::validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must be in (0,1)");
    if (d == 0) throw std::invalid_argument("degree bound must be positive");
    if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("rho must be in (0,1)");
    if (ell < 1) throw std::invalid_argument("ell must be >= 1");
    // delta lives in (0,1); the closed endpoints are admitted for the
    // degenerate no-phase / all-phase configurations
    if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("delta must be in [0,1]");
    if (b < 2) throw std::invalid_argument("independence parameter must be >= 2");
    if (phi < 0.0) throw std::invalid_argument("phi must be nonnegative");
    if (sample_budget == 0) throw std::invalid_argument("sample budget must be positive");
    if (!(findr_fraction >= 0.0 && findr_fraction < 1.0))
        throw std::invalid_argument("findr fraction must be in [0,1)");
}

}  // namespace lrpo
