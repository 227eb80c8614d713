"""Factoring by running a multiplier backwards.

AND gates and full adders become degenerate energy wells wired into an
array multiplier; equality-linked terminals merge into single p-bits.
Clamping the product register to N and annealing leaves only the factor
pairs as ground states. Classical annealing ramps the temperature on
independent copies; simulated quantum annealing ramps the transverse
field on the replica lattice instead.

Run:  python demos/04_factorization.py          (~1 minute)
"""

from pathlib import Path

from pbitsim import build_multiplier, clamp_and_solve, make_linear_schedule

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

N = 35
circuit = build_multiplier(4)
print(f"4-bit multiplier: {circuit.graph.n} p-bits after node merging, "
      f"{len(circuit.graph.pair_w)} couplings, "
      f"{len(circuit.graph.quad_w)} parity terms")

print(f"\nfactoring N = {N} with 25 ensembles per mode...")
sqa_sched = make_linear_schedule(3.0, 0.1, 10_000, kind="gamma_ramp",
                                 fixed_beta=10.0)
stats_sqa, _ = clamp_and_solve(circuit, N, "sqa", sqa_sched, ensembles=25,
                               seed=101)
ca_sched = make_linear_schedule(1.0, 0.1, 10_000)
stats_ca, _ = clamp_and_solve(circuit, N, "ca", ca_sched, ensembles=25,
                              seed=102)

rows = ["mode,success,std_error,samples"]
for name, st in (("sqa", stats_sqa), ("ca", stats_ca)):
    print(f"\n{name.upper()}: success {st.probability:.2f} "
          f"+/- {st.std_error:.2f} over {st.n_total} samples")
    for (p, q), count in st.breakdown.most_common(4):
        mark = " <-- factors" if p * q == N else ""
        print(f"   ({p:2d}, {q:2d}): {count}{mark}")
    rows.append(f"{name},{st.probability!r},{st.std_error!r},{st.n_total}")
(OUT / "factorization_summary.csv").write_text("\n".join(rows) + "\n")
print(f"\nwrote {OUT}/factorization_summary.csv")
print("(N=143 at paper statistics: PBITSIM_PAPER_SCALE=1 pytest "
      "tests/test_paper_scale.py)")
