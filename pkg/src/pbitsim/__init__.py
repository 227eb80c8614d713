"""pbitsim: emulate sign-problem-free quantum spin models with p-bits.

Layers, bottom to top: an exact dense-matrix oracle (exact), the
quantum-to-classical replica mapping (trotter, graph), the sequential
p-bit Gibbs engine (sampler), annealing schedules and the invertible
multiplier (annealing, factorizer), the stochastic-LLG device model
(device), and the experiment CLI (cli, config).
"""

__version__ = "0.1.0"

from .exact import (QuantumModelSpec, build_hamiltonian, embed_pauli,
                    embed_pauli_yy, exp_nonnegative, heisenberg_spec,
                    is_stoquastic, joint_distribution, magnetization_z,
                    pattern_projector, tfim_spec, thermal_expectation)
from .graph import (ClampSet, GraphBuilder, InteractionGraph, ReplicaLattice,
                    parse_lattice, serialize_lattice)
from .histogram import Histogram, total_variation
from .trotter import (HeisenbergCellCoefficients, chain_cost_graph,
                      consolidate, heisenberg_cell, map_heisenberg,
                      map_ising, map_tfim, perp_coupling)
from .sampler import (RunStatistics, SamplerConfig, classical_energy,
                      local_field, pbit_step, replica_histogram, run_chain,
                      sweep)
from .annealing import (AnnealResult, Schedule, ensemble_stats,
                        make_linear_schedule, run_ca, run_sqa)
from .factorizer import (CircuitGraph, GateBlock, build_multiplier,
                         clamp_and_solve, decode_factors, gate_block)
from .device import (CircuitMapping, MagnetParams, MTJParams, ReadoutLaw,
                     autocorrelation_time, calibrate_readout, circuit_mapping,
                     mtj_conductance, run_device_network, simulate_transfer,
                     sllg_step, thermal_field_sigma)
