#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "lrpo/diffusion.hpp"
#include "lrpo/experiment.hpp"
#include "lrpo/generators.hpp"
#include "lrpo/graph.hpp"
#include "lrpo/lowerbound.hpp"
#include "lrpo/oracle.hpp"
#include "lrpo/params.hpp"
#include "lrpo/partition.hpp"
#include "lrpo/seeds.hpp"

namespace py = pybind11;
using namespace lrpo;

PYBIND11_MODULE(_lrpo, m) {
    m.doc() = "low-randomness partition oracle core";

    py::class_<Params>(m, "Params")
        .def(py::init<>())
        .def_readwrite("epsilon", &Params::epsilon)
        .def_readwrite("d", &Params::d)
        .def_readwrite("rho", &Params::rho)
        .def_readwrite("ell", &Params::ell)
        .def_readwrite("delta", &Params::delta)
        .def_readwrite("b", &Params::b)
        .def_readwrite("phi", &Params::phi)
        .def_readwrite("sample_budget", &Params::sample_budget)
        .def_readwrite("findr_fraction", &Params::findr_fraction)
        .def_property_readonly("beta", &Params::beta)
        .def_property_readonly("hbar", &Params::hbar)
        .def_static("practical", &Params::practical, py::arg("epsilon"), py::arg("d"))
        .def_static("theory", &Params::theory, py::arg("epsilon"), py::arg("d"),
                    py::arg("rho"), py::arg("ell"))
        .def("validate", &Params::validate);

    py::class_<Graph>(m, "Graph")
        .def_static(
            "build",
            [](std::uint64_t d, std::uint64_t universe, std::vector<Label> labels,
               std::vector<std::pair<Label, Label>> edges) {
                return Graph::build(d, universe, std::move(labels), edges);
            },
            py::arg("degree_bound"), py::arg("label_universe"), py::arg("labels"),
            py::arg("edges"))
        .def_property_readonly("n", &Graph::vertex_count)
        .def_property_readonly("d", &Graph::degree_bound)
        .def_property_readonly("label_universe", &Graph::label_universe)
        .def_property_readonly("edge_count", &Graph::edge_count)
        .def("labels", [](const Graph& g) { return g.labels(); })
        .def("neighbors",
             [](const Graph& g, Label v) {
                 auto s = g.neighbors(v);
                 return std::vector<Label>(s.begin(), s.end());
             })
        .def("contains", &Graph::contains)
        .def("save", [](const Graph& g, const std::string& path) { save_graph_file(g, path); })
        .def_static("load", &load_graph_file, py::arg("path"))
        .def_static("generate",
                    [](const std::string& kind, std::uint64_t n, std::uint64_t rng_seed,
                       std::uint64_t universe, std::uint64_t degree_cap) {
                        return generate_graph(generator_from_name(kind), n, rng_seed, universe,
                                              degree_cap);
                    },
                    py::arg("kind"), py::arg("n"), py::arg("rng_seed") = 0,
                    py::arg("label_universe") = 0, py::arg("degree_cap") = 0);

    py::class_<RandomnessLedger>(m, "RandomnessLedger")
        .def_readonly("bits_s1", &RandomnessLedger::bits_s1)
        .def_readonly("bits_s2", &RandomnessLedger::bits_s2)
        .def_property_readonly("total_bits", &RandomnessLedger::total_bits);

    py::class_<SeedBundle>(m, "SeedBundle")
        .def_static(
            "from_short_seed",
            [](const Params& p, std::uint64_t universe, std::uint64_t seed) {
                return SeedBundle::from_short_seed(p, universe, seed);
            },
            py::arg("params"), py::arg("label_universe"), py::arg("seed"))
        .def_static(
            "from_material",
            [](const Params& p, std::uint64_t universe, py::bytes material) {
                std::string s = material;
                return SeedBundle::from_material(
                    p, universe, std::vector<std::uint8_t>(s.begin(), s.end()));
            },
            py::arg("params"), py::arg("label_universe"), py::arg("material"))
        .def_static("material_bytes", &SeedBundle::material_bytes, py::arg("params"),
                    py::arg("label_universe"))
        .def_property_readonly("modulus", &SeedBundle::modulus)
        .def("digest", &SeedBundle::digest)
        .def("draw_phase_bit", &SeedBundle::draw_phase_bit, py::arg("h"), py::arg("v"))
        .def("phase_of",
             [](const SeedBundle& s, Label v) -> py::object {
                 auto ph = s.phase_of(v);
                 if (!ph) return py::none();
                 return py::int_(*ph);
             })
        .def("draw_timestep", &SeedBundle::draw_timestep, py::arg("h"), py::arg("v"))
        .def("sample_vertex", &SeedBundle::sample_vertex, py::arg("h"), py::arg("j"),
             py::arg("n"))
        .def("ledger", &SeedBundle::ledger)
        .def("save", &SeedBundle::save_file)
        .def_static("load", &SeedBundle::load_file, py::arg("path"));

    m.def("theory_seed_bits",
          [](double epsilon, std::uint64_t d, double rho, std::uint64_t ell, double log2n) {
              return double(theory_ledger(epsilon, d, rho, ell, log2n).total_bits());
          },
          py::arg("epsilon"), py::arg("d"), py::arg("rho"), py::arg("ell"),
          py::arg("log2_label_universe"));

    m.def("trunc_diffusion",
          [](const Graph& g, Label v, std::uint64_t t, double rho) {
              DiffVector x = trunc_diffusion(g, v, t, rho);
              std::map<Label, double> out;
              for (const auto& [l, mass] : x.entries()) out[l] = mass;
              return out;
          },
          py::arg("graph"), py::arg("v"), py::arg("t"), py::arg("rho"));
    m.def("conductance",
          [](const Graph& g, std::vector<Label> members) {
              return conductance(g, std::span<const Label>(members));
          },
          py::arg("graph"), py::arg("members"));
    m.def("inverse_ball",
          [](const Graph& g, Label v, const Params& p) { return inverse_ball(g, v, p); },
          py::arg("graph"), py::arg("v"), py::arg("params"));

    py::class_<ClusterResult>(m, "ClusterResult")
        .def_readonly("members", &ClusterResult::members)
        .def_readonly("center", &ClusterResult::center)
        .def_readonly("t_used", &ClusterResult::t_used)
        .def_readonly("k_used", &ClusterResult::k_used)
        .def_readonly("conductance", &ClusterResult::conductance)
        .def_readonly("is_singleton", &ClusterResult::is_singleton);
    m.def("cluster",
          [](const Graph& g, Label v, std::uint64_t t, std::uint64_t k, const Params& p) {
              return cluster(g, v, t, k, p);
          },
          py::arg("graph"), py::arg("v"), py::arg("t"), py::arg("k"), py::arg("params"));

    py::class_<PhaseStat>(m, "PhaseStat")
        .def_readonly("h", &PhaseStat::h)
        .def_readonly("free_at_start", &PhaseStat::free_at_start)
        .def_readonly("phased", &PhaseStat::phased)
        .def_readonly("k_h", &PhaseStat::k_h)
        .def_readonly("clusters_carved", &PhaseStat::clusters_carved)
        .def_readonly("x_h", &PhaseStat::x_h);

    py::class_<PartitionResult>(m, "PartitionResult")
        .def_readonly("components", &PartitionResult::components)
        .def_readonly("cut_edges", &PartitionResult::cut_edges)
        .def_readonly("phase_stats", &PartitionResult::phase_stats)
        .def("component_of",
             [](const PartitionResult& p, Label v) { return p.component_of.at(v); })
        .def_property_readonly("max_component_size", &PartitionResult::max_component_size)
        .def_property_readonly("sum_x", &PartitionResult::sum_x);

    m.def("global_partition", &global_partition, py::arg("graph"), py::arg("seeds"));
    m.def("count_cut_edges", &count_cut_edges, py::arg("graph"), py::arg("partition"));
    m.def("validate_partition", &validate_partition, py::arg("graph"), py::arg("partition"),
          py::arg("params"));
    m.def("partition_to_json", &partition_to_json, py::arg("graph"), py::arg("seeds"),
          py::arg("partition"));

    py::class_<AnchorDecision>(m, "AnchorDecision")
        .def_readonly("vertex", &AnchorDecision::vertex)
        .def_readonly("leftover", &AnchorDecision::leftover)
        .def_readonly("phase", &AnchorDecision::phase)
        .def_readonly("center", &AnchorDecision::center)
        .def_readonly("component", &AnchorDecision::component);

    py::class_<OracleStats>(m, "OracleStats")
        .def_readonly("neighbor_queries", &OracleStats::neighbor_queries)
        .def_readonly("label_queries", &OracleStats::label_queries)
        .def_readonly("max_per_call", &OracleStats::max_per_call)
        .def_readonly("findr_neighbor_queries", &OracleStats::findr_neighbor_queries)
        .def_readonly("findr_label_queries", &OracleStats::findr_label_queries)
        .def_readonly("calls", &OracleStats::calls);

    py::class_<OracleSession>(m, "OracleSession")
        .def(py::init<const Graph&, const SeedBundle&>(), py::arg("graph"), py::arg("seeds"),
             py::keep_alive<1, 2>(), py::keep_alive<1, 3>())
        .def("find_anchor", &OracleSession::find_anchor, py::arg("vertex"))
        .def("find_partition", &OracleSession::find_partition, py::arg("vertex"))
        .def("stats", &OracleSession::stats)
        .def("reset_stats", &OracleSession::reset_stats);

    // lower-bound simulator: families travel as JSON text
    py::class_<ChunkReport>(m, "ChunkReport")
        .def_readonly("entire_seed_set", &ChunkReport::entire_seed_set)
        .def_readonly("chunks", &ChunkReport::chunks)
        .def_readonly("covered", &ChunkReport::covered);
    py::class_<UniformityReport>(m, "UniformityReport")
        .def_readonly("n", &UniformityReport::n)
        .def_readonly("seed_count", &UniformityReport::seed_count)
        .def_readonly("seed_bound_log2", &UniformityReport::seed_bound_log2)
        .def_readonly("chunks", &UniformityReport::chunks)
        .def_readonly("all_uniform", &UniformityReport::all_uniform)
        .def_readonly("implied_cut_fraction", &UniformityReport::implied_cut_fraction)
        .def_readonly("observed_cut_fraction", &UniformityReport::observed_cut_fraction);
    m.def("make_demo_family",
          [](const std::string& kind, std::uint32_t q, std::uint32_t r) {
              TreeFamily f = kind == "constant"    ? make_constant_family(q, r, true)
                             : kind == "local-min" ? make_local_min_family(q, r)
                                                   : make_mixed_family(q, r, 16);
              return family_to_json_text(f);
          },
          py::arg("kind"), py::arg("q"), py::arg("r"));
    m.def("verify_chunk_uniformity",
          [](const std::string& family_json, std::uint64_t n) {
              return verify_chunk_uniformity(family_from_json_text(family_json), n);
          },
          py::arg("family_json"), py::arg("n"));
    m.def("run_canonical_oracle",
          [](const std::string& family_json, std::size_t tree, std::vector<Label> labels,
             Label u) {
              TreeFamily f = family_from_json_text(family_json);
              return run_canonical_oracle(f, tree, CycleLabeling::from_labels(labels), u);
          },
          py::arg("family_json"), py::arg("tree_index"), py::arg("cycle_labels"), py::arg("u"));
    m.def("compute_chunks",
          [](std::uint64_t n, std::uint32_t q, std::vector<std::uint64_t> seeds) {
              return compute_chunks(n, q, std::set<std::uint64_t>(seeds.begin(), seeds.end()));
          },
          py::arg("n"), py::arg("q"), py::arg("seed_indices"));

    m.def("run_experiment",
          [](const std::string& kind, std::uint64_t n, const Params& params,
             std::uint32_t seed_count, std::uint64_t rng_seed, std::uint64_t universe,
             std::uint32_t oracle_checks) {
              ExperimentSpec spec;
              spec.generator = generator_from_name(kind);
              spec.n = n;
              spec.params = params;
              spec.seed_count = seed_count;
              spec.rng_seed = rng_seed;
              spec.label_universe = universe;
              spec.oracle_checks = oracle_checks;
              return report_to_json(run_experiment(spec));
          },
          py::arg("kind"), py::arg("n"), py::arg("params"), py::arg("seed_count") = 10,
          py::arg("rng_seed") = 1, py::arg("label_universe") = 0, py::arg("oracle_checks") = 4);
    m.def("calibrate",
          [](const std::string& kind, std::uint64_t n, double target, double epsilon,
             std::uint64_t rng_seed, std::uint32_t runs) {
              CalibrationResult r =
                  calibrate(generator_from_name(kind), n, target, epsilon, rng_seed, runs);
              py::dict out;
              out["found"] = r.found;
              out["points_tried"] = r.points_tried;
              out["median_cut_fraction"] = r.median_cut_fraction;
              if (r.found) {
                  py::dict ps;
                  ps["phi"] = r.params.phi;
                  ps["rho"] = r.params.rho;
                  ps["ell"] = r.params.ell;
                  ps["delta"] = r.params.delta;
                  ps["findr_fraction"] = r.params.findr_fraction;
                  out["params"] = ps;
              }
              return out;
          },
          py::arg("kind"), py::arg("n"), py::arg("target"), py::arg("epsilon") = 0.5,
          py::arg("rng_seed") = 1, py::arg("runs_per_point") = 21);
}
