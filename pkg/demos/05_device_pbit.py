"""From a fluctuating nanomagnet to a working p-bit network.

A 22 nm circular zero-barrier magnet tumbles in its easy plane under
thermal noise (stochastic LLG); its m_z modulates an MTJ conductance that
a divider-plus-comparator turns into a random bit whose bias follows
tanh(V_IN/V0). Forty such devices wired through a resistive synapse
reproduce the quantum statistics of a 4-spin chain in hardware form.

Run:  python demos/05_device_pbit.py          (~1 minute)
"""

from pathlib import Path

import numpy as np

from pbitsim import (MagnetParams, MTJParams, autocorrelation_time,
                     build_hamiltonian, calibrate_readout, circuit_mapping,
                     joint_distribution, map_tfim, mtj_conductance,
                     run_device_network, simulate_transfer, tfim_spec,
                     thermal_field_sigma, total_variation)

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

magnet, mtj = MagnetParams(), MTJParams()
print(f"magnet: {magnet.diameter_nm:.0f} nm x {magnet.thickness_nm:.0f} nm, "
      f"{magnet.n_bohr:.2e} Bohr magnetons, demag {magnet.demag_field_oe:.0f} Oe")
print(f"thermal field per 1 ps step: {thermal_field_sigma(magnet, 1e-12):.1f} Oe")
print(f"MTJ: R_P = {mtj.r_p / 1e3:.1f} kOhm, R_AP = {mtj.r_ap / 1e3:.1f} kOhm, "
      f"G0^-1 = {1 / mtj.g0 / 1e3:.1f} kOhm")

from pbitsim.device import run_sllg

traj = run_sllg([0.0, 0.0, 1.0], 400_000, magnet, dt=1e-12, seed=2)
tau = autocorrelation_time(traj[40_000:, 2], 1e-12)
print(f"m_z correlation time: {tau * 1e12:.0f} ps (fast easy-plane tumbling)")
rows = ["t_ps,mx,my,mz,G_S"]
for t in range(0, 2000):
    g = mtj_conductance(traj[t, 2], mtj)
    rows.append(f"{t},{traj[t, 0]!r},{traj[t, 1]!r},{traj[t, 2]!r},{g!r}")
(OUT / "device_trace.csv").write_text("\n".join(rows) + "\n")

# calibrate the abstract transistor against the measured m_z statistics
law = calibrate_readout(magnet, mtj, duration=2e-6, seed=3)
vins = np.linspace(-0.12, 0.12, 13)
thresh, analog = simulate_transfer(vins, duration=60e-9, params=magnet,
                                   mtj=mtj, law=law, seed=4)
print("\ntransfer curve (thresholded average vs tanh(V/40mV)):")
for v, o in zip(vins[::3], thresh[::3]):
    print(f"  V_IN={v * 1e3:+6.1f} mV: {o:+.3f}  (tanh: {np.tanh(v / 0.04):+.3f})")
(OUT / "device_transfer.csv").write_text(
    "vin_V,avg_out\n" + "\n".join(f"{v!r},{o!r}" for v, o in zip(vins, thresh)) + "\n")

# the full 40 p-bit network: 4-spin chain, 10 replicas, beta = 0.5
spec = tfim_spec(4, 1.0, gamma_x=10.0)
beta = 0.5
mapping = circuit_mapping(vdd=0.8, v0=0.040, r_ref=0.05 * 10e3, r0=10e3)
print(f"\ncircuit mapping check: beta = {mapping.beta} "
      f"(R_ref/R0 = {mapping.r_ref / mapping.r0})")
lattice = map_tfim(spec, 10, beta)
hist, _ = run_device_network(lattice, beta, magnet, mtj, law,
                             duration=400e-9, seed=5)
exact = joint_distribution(build_hamiltonian(spec), beta, 4)
print(f"40-device network vs exact quantum law: "
      f"TVD = {total_variation(hist.probs, exact.probs):.4f}")
(OUT / "device_network_histogram.csv").write_text(
    "state_index,device,exact\n" + "\n".join(
        f"{i},{hist.probs[i]!r},{exact.probs[i]!r}" for i in range(16)) + "\n")
print(f"wrote {OUT}/device_*.csv")
