"""Low-randomness partition oracle toolkit.

Thin wrapper over the C++ core. When working from a source checkout, point
LRPO_MODULE_DIR at the CMake build directory holding the _lrpo extension.
"""

import os
import sys

_module_dir = os.environ.get("LRPO_MODULE_DIR")
if _module_dir and _module_dir not in sys.path:
    sys.path.insert(0, _module_dir)

from _lrpo import (  # noqa: E402,F401
    AnchorDecision,
    ChunkReport,
    ClusterResult,
    Graph,
    OracleSession,
    OracleStats,
    Params,
    PartitionResult,
    PhaseStat,
    RandomnessLedger,
    SeedBundle,
    UniformityReport,
    calibrate,
    cluster,
    compute_chunks,
    conductance,
    count_cut_edges,
    global_partition,
    inverse_ball,
    make_demo_family,
    partition_to_json,
    run_canonical_oracle,
    run_experiment,
    theory_seed_bits,
    trunc_diffusion,
    validate_partition,
    verify_chunk_uniformity,
)

__all__ = [
    "AnchorDecision",
    "ChunkReport",
    "ClusterResult",
    "Graph",
    "OracleSession",
    "OracleStats",
    "Params",
    "PartitionResult",
    "PhaseStat",
    "RandomnessLedger",
    "SeedBundle",
    "UniformityReport",
    "calibrate",
    "cluster",
    "compute_chunks",
    "conductance",
    "count_cut_edges",
    "global_partition",
    "inverse_ball",
    "make_demo_family",
    "partition_to_json",
    "run_canonical_oracle",
    "run_experiment",
    "theory_seed_bits",
    "trunc_diffusion",
    "validate_partition",
    "verify_chunk_uniformity",
]
