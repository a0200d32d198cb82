#include "lrpo/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "lrpo/oracle.hpp"

namespace lrpo {

namespace {

double quantile(std::vector<double> xs, double f) {
    std::sort(xs.begin(), xs.end());
    if (xs.empty()) return 0;
    std::size_t idx = std::size_t(std::ceil(f * double(xs.size())));
    idx = std::min(std::max<std::size_t>(idx, 1), xs.size());
    return xs[idx - 1];
}

double median_of(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    if (xs.empty()) return 0;
    std::size_t k = xs.size();
    return k % 2 ? xs[k / 2] : 0.5 * (xs[k / 2 - 1] + xs[k / 2]);
}

}  // namespace

Report run_experiment(const ExperimentSpec& spec) {
    Report report;
    report.spec = spec;
    Graph g = generate_graph(spec.generator, spec.n, spec.rng_seed, spec.label_universe);
    Params params = spec.params;
    params.d = g.degree_bound();
    params.validate();
    report.spec.params = params;
    report.edges = g.edge_count();

    const double beta_n = params.beta() * double(g.vertex_count());
    std::vector<double> fractions;
    std::uint64_t sum_x_total = 0;

    for (std::uint32_t run = 0; run < spec.seed_count; ++run) {
        std::uint64_t derive = spec.rng_seed;
        for (std::uint32_t i = 0; i <= run; ++i) splitmix64(derive);
        SeedBundle seeds = SeedBundle::from_short_seed(params, g.label_universe(), derive);
        if (run == 0) report.ledger = seeds.ledger();

        PartitionResult part = global_partition(g, seeds);
        validate_partition(g, part, params);

        RunRecord rec;
        rec.run_index = run;
        rec.seed_digest = seeds.digest();
        rec.cut_edges = part.cut_edges.size();
        if (rec.cut_edges != count_cut_edges(g, part))
            throw std::runtime_error("cut-edge recount mismatch");
        rec.cut_fraction =
            double(rec.cut_edges) / (double(g.degree_bound()) * double(g.vertex_count()));
        rec.max_component = part.max_component_size();
        rec.sum_x = part.sum_x();
        for (const auto& st : part.phase_stats)
            if (double(st.free_at_start) < beta_n) {
                rec.cutoff_phase = st.h;
                break;
            }

        if (spec.oracle_checks > 0) {
            OracleSession session(g, seeds);
            std::uint64_t pick = spec.rng_seed ^ (0xfeedULL + run);
            for (std::uint32_t c = 0; c < spec.oracle_checks; ++c) {
                Label u = g.label_at(1 + splitmix64(pick) % g.vertex_count());
                auto local = session.find_partition(u);
                const auto& global_comp = part.components[part.component_of.at(u)];
                if (local != global_comp) {
                    std::ostringstream os;
                    os << "local/global mismatch at label " << u << " (run " << run
                       << "): local size " << local.size() << ", global size "
                       << global_comp.size();
                    throw std::runtime_error(os.str());
                }
            }
            rec.oracle_max_queries = session.stats().max_per_call;
        }

        fractions.push_back(rec.cut_fraction);
        sum_x_total += rec.sum_x;
        report.max_component = std::max(report.max_component, rec.max_component);
        report.runs.push_back(rec);
    }

    report.mean_cut_fraction = 0;
    for (double f : fractions) report.mean_cut_fraction += f;
    if (!fractions.empty()) report.mean_cut_fraction /= double(fractions.size());
    report.median_cut_fraction = median_of(fractions);
    report.q23_cut_fraction = quantile(fractions, 2.0 / 3.0);
    report.mean_sum_x_over_n = spec.seed_count
                                   ? double(sum_x_total) /
                                         (double(spec.seed_count) * double(g.vertex_count()))
                                   : 0;
    return report;
}

std::string report_to_json(const Report& report) {
    nlohmann::json j;
    const Params& p = report.spec.params;
    j["spec"] = {{"generator", generator_name(report.spec.generator)},
                 {"n", report.spec.n},
                 {"seed_count", report.spec.seed_count},
                 {"rng_seed", report.spec.rng_seed},
                 {"label_universe", report.spec.label_universe},
                 {"oracle_checks", report.spec.oracle_checks},
                 {"params",
                  {{"epsilon", p.epsilon},
                   {"d", p.d},
                   {"rho", p.rho},
                   {"ell", p.ell},
                   {"delta", p.delta},
                   {"b", p.b},
                   {"phi", p.phi},
                   {"hbar", p.hbar()},
                   {"sample_budget", p.sample_budget},
                   {"findr_fraction", p.findr_fraction},
                   {"mode", p.mode == ParamMode::Theory ? "theory" : "practical"}}}};
    j["edges"] = report.edges;
    j["ledger"] = {{"bits_s1", report.ledger.bits_s1},
                   {"bits_s2", report.ledger.bits_s2},
                   {"total_bits", report.ledger.total_bits()}};
    auto& runs = j["runs"] = nlohmann::json::array();
    for (const auto& r : report.runs) {
        std::ostringstream digest;
        digest << std::hex << r.seed_digest;
        runs.push_back({{"run", r.run_index},
                        {"seed_digest", digest.str()},
                        {"cut_edges", r.cut_edges},
                        {"cut_fraction", r.cut_fraction},
                        {"max_component", r.max_component},
                        {"sum_x", r.sum_x},
                        {"cutoff_phase", r.cutoff_phase},
                        {"oracle_max_queries", r.oracle_max_queries}});
    }
    j["aggregates"] = {{"mean_cut_fraction", report.mean_cut_fraction},
                       {"median_cut_fraction", report.median_cut_fraction},
                       {"q23_cut_fraction", report.q23_cut_fraction},
                       {"max_component", report.max_component},
                       {"mean_sum_x_over_n", report.mean_sum_x_over_n}};
    return j.dump(2);
}

std::string report_to_csv(const Report& report) {
    std::ostringstream os;
    os << "run,seed_digest,cut_edges,cut_fraction,max_component,sum_x,cutoff_phase,"
          "oracle_max_queries\n";
    for (const auto& r : report.runs)
        os << r.run_index << ',' << std::hex << r.seed_digest << std::dec << ','
           << r.cut_edges << ',' << r.cut_fraction << ',' << r.max_component << ','
           << r.sum_x << ',' << r.cutoff_phase << ',' << r.oracle_max_queries << '\n';
    return os.str();
}

CalibrationResult calibrate(GeneratorKind generator, std::uint64_t n, double target,
                            double epsilon, std::uint64_t rng_seed,
                            std::uint32_t runs_per_point) {
    if (!(target > 0.0 && target <= 1.0)) throw std::invalid_argument("target must be in (0,1]");
    // documented lattice, scanned phi-major ascending so that tightening the
    // target can only move the accepted point to an equal-or-larger phi
    const double phis[] = {0.15, 0.20, 0.25, 0.35, 0.45};
    const double rhos[] = {0.002, 0.005, 0.02};
    const double fractions[] = {0.25, 0.0};
    const std::uint64_t ells[] = {20, 30};
    const double deltas[] = {0.05, 0.10};

    CalibrationResult result;
    std::ostringstream trail;
    for (double phi : phis)
        for (double rho : rhos)
            for (double fraction : fractions)
                for (std::uint64_t ell : ells)
                for (double delta : deltas) {
                    Params p = Params::practical(epsilon, 4);
                    p.phi = phi;
                    p.delta = delta;
                    p.ell = ell;
                    p.rho = rho;
                    p.findr_fraction = fraction;
                    ExperimentSpec spec;
                    spec.generator = generator;
                    spec.n = n;
                    spec.params = p;
                    spec.seed_count = runs_per_point;
                    spec.rng_seed = rng_seed;
                    spec.oracle_checks = 0;
                    Report rep = run_experiment(spec);
                    ++result.points_tried;
                    trail << "phi=" << phi << " rho=" << rho << " frac=" << fraction
                          << " ell=" << ell << " delta=" << delta
                          << " median=" << rep.median_cut_fraction
                          << " maxcomp=" << rep.max_component << '\n';
                    bool size_ok = double(rep.max_component) <= double(ell) / rho;
                    if (rep.median_cut_fraction <= target && size_ok) {
                        result.found = true;
                        result.params = rep.spec.params;
                        result.median_cut_fraction = rep.median_cut_fraction;
                        result.summary = trail.str();
                        return result;
                    }
                }
    result.summary = trail.str();
    return result;
}

}  // namespace lrpo
