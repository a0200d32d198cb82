#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lrpo/experiment.hpp"
#include "lrpo/generators.hpp"
#include "lrpo/graph.hpp"
#include "lrpo/lowerbound.hpp"
#include "lrpo/oracle.hpp"
#include "lrpo/params.hpp"
#include "lrpo/partition.hpp"
#include "lrpo/seeds.hpp"

namespace {

lrpo::Params load_params(const std::string& path) {
    if (path.empty()) return lrpo::Params{};
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open params file " + path);
    nlohmann::json j;
    in >> j;
    lrpo::Params p;
    p.epsilon = j.value("epsilon", p.epsilon);
    p.d = j.value("d", p.d);
    p.rho = j.value("rho", p.rho);
    p.ell = j.value("ell", p.ell);
    p.delta = j.value("delta", p.delta);
    p.b = j.value("b", p.b);
    p.phi = j.value("phi", p.phi);
    p.sample_budget = j.value("sample_budget", p.sample_budget);
    p.findr_fraction = j.value("findr_fraction", p.findr_fraction);
    p.mode = j.value("mode", std::string("practical")) == "theory" ? lrpo::ParamMode::Theory
                                                                   : lrpo::ParamMode::Practical;
    p.validate();
    return p;
}

lrpo::SeedBundle make_seeds(const lrpo::Params& params, std::uint64_t universe,
                            const std::string& seed_hex, std::uint64_t rng_seed) {
    if (seed_hex.empty()) return lrpo::SeedBundle::from_short_seed(params, universe, rng_seed);
    auto bytes = lrpo::parse_hex(seed_hex);
    if (bytes.size() == lrpo::SeedBundle::material_bytes(params, universe))
        return lrpo::SeedBundle::from_material(params, universe, std::move(bytes));
    return lrpo::SeedBundle::from_short_seed(params, universe,
                                             std::span<const std::uint8_t>(bytes));
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text << '\n';
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open output file " + out_path);
    out << text << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"low-randomness partition oracle toolkit"};
    app.require_subcommand(1);

    std::string graph_path, seed_hex, params_path, out_path, family_path;
    bool as_json = false, as_csv = false;
    std::uint64_t n = 64, rng_seed = 1, universe = 0, degree_cap = 0, vertex = 0;
    std::string kind = "cycle", demo_kind;
    std::uint32_t q = 3, r_bits = 1, seed_count = 10, oracle_checks = 4, runs_per_point = 21;
    double target = 0.25, epsilon = 0.5;

    auto* gen = app.add_subcommand("generate", "write a generated graph file");
    gen->add_option("--kind", kind, "cycle|path|grid|binary-tree|random-outerplanar");
    gen->add_option("--n", n, "vertex count")->required();
    gen->add_option("--rng-seed", rng_seed, "generation seed");
    gen->add_option("--universe", universe, "label universe size (0: labels 1..n)");
    gen->add_option("--degree-cap", degree_cap, "degree bound override");
    gen->add_option("--out", out_path, "output file (default stdout)");

    std::string seed_file, seed_out;
    auto* part = app.add_subcommand("partition", "run the global partition on a graph");
    part->add_option("--graph", graph_path, "graph file")->required();
    part->add_option("--seed-hex", seed_hex, "seed bytes (full material or short seed)");
    part->add_option("--rng-seed", rng_seed, "short seed when --seed-hex is absent");
    part->add_option("--seed-file", seed_file, "load the full seed bundle from a file");
    part->add_option("--seed-out", seed_out, "write the seed bundle actually used");
    part->add_option("--params-file", params_path, "JSON parameter file");
    part->add_flag("--json", as_json, "emit the full partition JSON");
    part->add_option("--out", out_path, "output file (default stdout)");

    auto* orc = app.add_subcommand("oracle", "query the local partition oracle");
    orc->add_option("--graph", graph_path, "graph file")->required();
    orc->add_option("--seed-hex", seed_hex, "seed bytes (full material or short seed)");
    orc->add_option("--rng-seed", rng_seed, "short seed when --seed-hex is absent");
    orc->add_option("--vertex", vertex, "query label")->required();
    orc->add_option("--params-file", params_path, "JSON parameter file");
    orc->add_flag("--json", as_json, "emit JSON");

    auto* lb = app.add_subcommand("lowerbound", "run the comparison-based cycle simulator");
    lb->add_option("--family", family_path, "decision-tree family JSON");
    lb->add_option("--n", n, "cycle size");
    lb->add_option("--demo", demo_kind, "emit a built-in family: constant|local-min|mixed");
    lb->add_option("--q", q, "query bound for --demo");
    lb->add_option("--r", r_bits, "randomness bits for --demo");
    lb->add_flag("--json", as_json, "emit JSON");
    lb->add_option("--out", out_path, "output file (default stdout)");

    auto* cal = app.add_subcommand("calibrate", "search practical parameters for a cut target");
    cal->add_option("--kind", kind, "generator kind");
    cal->add_option("--n", n, "vertex count")->required();
    cal->add_option("--target", target, "median cut-fraction target")->required();
    cal->add_option("--epsilon", epsilon, "proximity parameter");
    cal->add_option("--rng-seed", rng_seed, "experiment seed");
    cal->add_option("--runs", runs_per_point, "seeds per lattice point");
    cal->add_flag("--json", as_json, "emit JSON");

    auto* rep = app.add_subcommand("report", "run a seeded experiment and report statistics");
    rep->add_option("--kind", kind, "generator kind");
    rep->add_option("--n", n, "vertex count")->required();
    rep->add_option("--seeds", seed_count, "seed resamplings");
    rep->add_option("--rng-seed", rng_seed, "experiment seed");
    rep->add_option("--universe", universe, "label universe size");
    rep->add_option("--oracle-checks", oracle_checks, "local-oracle cross-checks per run");
    rep->add_option("--params-file", params_path, "JSON parameter file");
    rep->add_flag("--json", as_json, "emit JSON");
    rep->add_flag("--csv", as_csv, "emit CSV rows");
    rep->add_option("--out", out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) {
            lrpo::Graph g = lrpo::generate_graph(lrpo::generator_from_name(kind), n, rng_seed,
                                                 universe, degree_cap);
            std::ostringstream os;
            lrpo::save_graph(g, os);
            emit(os.str(), out_path);
            return 0;
        }
        if (part->parsed()) {
            lrpo::Graph g = lrpo::load_graph_file(graph_path);
            lrpo::Params params = load_params(params_path);
            params.d = g.degree_bound();
            auto seeds = seed_file.empty()
                             ? make_seeds(params, g.label_universe(), seed_hex, rng_seed)
                             : lrpo::SeedBundle::load_file(seed_file);
            if (!seed_out.empty()) seeds.save_file(seed_out);
            auto result = lrpo::global_partition(g, seeds);
            lrpo::Params run_params = seeds.params();
            run_params.d = g.degree_bound();
            lrpo::validate_partition(g, result, run_params);
            if (as_json) {
                emit(lrpo::partition_to_json(g, seeds, result), out_path);
            } else {
                std::ostringstream os;
                os << "n=" << g.vertex_count() << " components=" << result.components.size()
                   << " cut_edges=" << result.cut_edges.size() << " cut_fraction="
                   << double(result.cut_edges.size()) /
                          (double(g.degree_bound()) * double(g.vertex_count()))
                   << " max_component=" << result.max_component_size()
                   << " sum_x=" << result.sum_x()
                   << " seed_bits=" << seeds.ledger().total_bits();
                emit(os.str(), out_path);
            }
            return 0;
        }
        if (orc->parsed()) {
            lrpo::Graph g = lrpo::load_graph_file(graph_path);
            lrpo::Params params = load_params(params_path);
            params.d = g.degree_bound();
            auto seeds = make_seeds(params, g.label_universe(), seed_hex, rng_seed);
            lrpo::OracleSession session(g, seeds);
            auto decision = session.find_anchor(vertex);
            auto stats = session.stats();
            if (as_json) {
                nlohmann::json j;
                j["vertex"] = vertex;
                j["leftover"] = decision.leftover;
                if (!decision.leftover) {
                    j["anchor_phase"] = decision.phase;
                    j["anchor_center"] = decision.center;
                }
                j["component"] = decision.component;
                j["stats"] = {{"neighbor_queries", stats.neighbor_queries},
                              {"label_queries", stats.label_queries},
                              {"max_per_call", stats.max_per_call},
                              {"findr_neighbor_queries", stats.findr_neighbor_queries},
                              {"findr_label_queries", stats.findr_label_queries}};
                emit(j.dump(2), "");
            } else {
                std::ostringstream os;
                os << "component(" << vertex << ") =";
                for (auto l : decision.component) os << ' ' << l;
                os << "\nanchor=";
                if (decision.leftover)
                    os << "leftover";
                else
                    os << "(h=" << decision.phase << ", center=" << decision.center << ")";
                os << "\nqueries: neighbor=" << stats.neighbor_queries
                   << " label=" << stats.label_queries << " max_per_call=" << stats.max_per_call;
                emit(os.str(), "");
            }
            return 0;
        }
        if (lb->parsed()) {
            if (!demo_kind.empty()) {
                lrpo::TreeFamily fam;
                if (demo_kind == "constant")
                    fam = lrpo::make_constant_family(q, r_bits, true);
                else if (demo_kind == "local-min")
                    fam = lrpo::make_local_min_family(q, r_bits);
                else if (demo_kind == "mixed")
                    fam = lrpo::make_mixed_family(q, r_bits, 16);
                else
                    throw CLI::ValidationError("--demo must be constant|local-min|mixed");
                emit(lrpo::family_to_json_text(fam), out_path);
                return 0;
            }
            if (family_path.empty())
                throw CLI::ValidationError("lowerbound needs --family or --demo");
            auto fam = lrpo::family_from_json_file(family_path);
            auto report = lrpo::verify_chunk_uniformity(fam, n);
            if (as_json) {
                nlohmann::json j;
                j["n"] = report.n;
                j["q"] = fam.q;
                j["r"] = fam.r_bits;
                j["seed_count"] = report.seed_count;
                j["seed_bound_log2"] = report.seed_bound_log2;
                j["covered"] = report.chunks.covered;
                j["coverage_fraction"] = double(report.chunks.covered) / double(report.n);
                j["chunks"] = report.chunks.chunks.size();
                j["all_uniform"] = report.all_uniform;
                j["implied_cut_fraction"] = report.implied_cut_fraction;
                emit(j.dump(2), out_path);
            } else {
                std::ostringstream os;
                os << "n=" << report.n << " q=" << fam.q << " trees=" << fam.trees.size()
                   << "\nseed indices: " << report.seed_count
                   << " (log2 bound " << report.seed_bound_log2 << ")"
                   << "\nchunks: " << report.chunks.chunks.size() << " covering "
                   << report.chunks.covered << " vertices ("
                   << double(report.chunks.covered) / double(report.n) << ")"
                   << "\nall chunks uniform: " << (report.all_uniform ? "yes" : "NO")
                   << "\nimplied cut fraction: " << report.implied_cut_fraction;
                emit(os.str(), out_path);
            }
            return report.all_uniform ? 0 : 1;
        }
        if (cal->parsed()) {
            auto result = lrpo::calibrate(lrpo::generator_from_name(kind), n, target, epsilon,
                                          rng_seed, runs_per_point);
            if (as_json) {
                nlohmann::json j;
                j["found"] = result.found;
                j["points_tried"] = result.points_tried;
                j["median_cut_fraction"] = result.median_cut_fraction;
                if (result.found)
                    j["params"] = {{"epsilon", result.params.epsilon},
                                   {"d", result.params.d},
                                   {"rho", result.params.rho},
                                   {"ell", result.params.ell},
                                   {"delta", result.params.delta},
                                   {"b", result.params.b},
                                   {"phi", result.params.phi},
                                   {"sample_budget", result.params.sample_budget},
                                   {"findr_fraction", result.params.findr_fraction}};
                emit(j.dump(2), "");
            } else if (result.found) {
                std::ostringstream os;
                os << "calibrated after " << result.points_tried
                   << " lattice points: phi=" << result.params.phi
                   << " delta=" << result.params.delta << " ell=" << result.params.ell
                   << " rho=" << result.params.rho
                   << " (median cut fraction " << result.median_cut_fraction << ")";
                emit(os.str(), "");
            } else {
                emit("calibration failed to reach the target; trail:\n" + result.summary, "");
            }
            return 0;
        }
        if (rep->parsed()) {
            lrpo::ExperimentSpec spec;
            spec.generator = lrpo::generator_from_name(kind);
            spec.n = n;
            spec.params = load_params(params_path);
            spec.seed_count = seed_count;
            spec.rng_seed = rng_seed;
            spec.label_universe = universe;
            spec.oracle_checks = oracle_checks;
            auto report = lrpo::run_experiment(spec);
            if (as_csv)
                emit(lrpo::report_to_csv(report), out_path);
            else
                emit(lrpo::report_to_json(report), out_path);
            return 0;
        }
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
