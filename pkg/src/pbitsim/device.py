"""Device-level p-bit: zero-barrier circular nanomagnet + MTJ + divider.

Units are CGS-Gaussian as is conventional for magnet dynamics: fields in
Oe, magnetization in emu/cc, volumes in cc, energies in erg. Currents are
in amperes (the spin-torque terms carry 1/q with q in coulombs, giving
1/s). Constants live in one table below.

The magnet is a circular low-barrier free layer whose easy plane is z-y
(demag field -4*pi*Ms*m_x along x). Its m_z modulates the MTJ conductance

    G(t) = G0 * (1 + m_z(t) * (R_AP - R_P)/(R_AP + R_P)),

and the MTJ sits in a divider against an abstract transistor resistance
R_T(V_IN). The comparator output is the sign of R_MTJ - R_T(V_IN), i.e.
the thresholded divider midpoint. R_T is parameterized so that the
stationary output statistics follow tanh(V_IN/V0): a threshold-in-m_z law
through the magnet's quantile function (analytically arcsine for a free
easy-plane magnet; calibrate_readout replaces it with the measured one,
which also absorbs the spin-current tilt). The divider current feeds back
into the magnet as a z-directed spin current P * I_MTJ.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .graph import InteractionGraph, ReplicaLattice
from .histogram import Histogram, counts_to_histogram

GYROMAGNETIC_RATIO = 1.76e7   # rad / (s Oe)
BOLTZMANN_ERG = 1.380649e-16  # erg / K
BOHR_MAGNETON_EMU = 9.274e-21  # emu
ELECTRON_CHARGE = 1.602176634e-19  # C

PREDICTOR_STEP_LIMIT = 0.5  # |dm| in one predictor step before we call it divergent


@dataclass
class MagnetParams:
    """Circular low-barrier free layer (CoFeB-like defaults)."""

    ms: float = 1100.0          # emu/cc
    diameter_nm: float = 22.0
    thickness_nm: float = 2.0
    alpha: float = 0.01
    temperature: float = 300.0  # K

    def __post_init__(self):
        if min(self.ms, self.diameter_nm, self.thickness_nm,
               self.temperature) <= 0:
            raise ValueError("magnet parameters must be positive")
        if self.alpha < 0:
            raise ValueError("damping cannot be negative")

    @property
    def volume_cc(self) -> float:
        r_cm = self.diameter_nm * 1e-7 / 2.0
        return math.pi * r_cm**2 * self.thickness_nm * 1e-7

    @property
    def n_bohr(self) -> float:
        return self.ms * self.volume_cc / BOHR_MAGNETON_EMU

    @property
    def demag_field_oe(self) -> float:
        return 4.0 * math.pi * self.ms


@dataclass
class MTJParams:
    """Conductance model of the tunnel junction, plus interface polarization."""

    tmr: float = 1.1                  # (R_AP - R_P) / R_P
    g0: float = 1.0 / 23.4e3          # mean conductance, S
    polarization: float = 0.5

    def __post_init__(self):
        if self.tmr <= 0 or self.g0 <= 0:
            raise ValueError("tmr and g0 must be positive")

    @property
    def r_p(self) -> float:
        return (2.0 + self.tmr) / (2.0 * self.g0 * (1.0 + self.tmr))

    @property
    def r_ap(self) -> float:
        return (1.0 + self.tmr) * self.r_p

    @property
    def asymmetry(self) -> float:
        """(R_AP - R_P)/(R_AP + R_P) = TMR/(2 + TMR)."""
        return self.tmr / (2.0 + self.tmr)


def thermal_field_sigma(params: MagnetParams, dt: float) -> float:
    """Per-axis std (Oe) of the thermal field over one step of length dt:
    sigma^2 = 2 alpha k_B T / (gamma Ms Vol) / dt."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    psd = (2.0 * params.alpha * BOLTZMANN_ERG * params.temperature
           / (GYROMAGNETIC_RATIO * params.ms * params.volume_cc))
    return math.sqrt(psd / dt)


def mtj_conductance(m_z, mtj: MTJParams):
    """G(m_z); exactly 1/R_P at m_z = +1 and 1/R_AP at m_z = -1."""
    return mtj.g0 * (1.0 + np.asarray(m_z) * mtj.asymmetry)


def sllg_step(m, h_ext, i_s, params: MagnetParams, dt: float,
              h_noise=None) -> np.ndarray:
    """One Heun step of the stochastic LLG equation (reference path).

    m, h_ext, i_s are length-3 vectors (i_s in A along its direction; only
    the full vector form m x I_s x m + alpha m x I_s is used). h_noise, if
    given, is the frozen noise realization for this step; the easy-plane
    demag term is re-evaluated inside. Raises if the predictor moves m by
    more than PREDICTOR_STEP_LIMIT (dt too large).
    """
    m = np.asarray(m, dtype=float)
    if abs(np.linalg.norm(m) - 1.0) > 1e-6:
        raise ValueError("m must be a unit vector")
    h0 = np.asarray(h_ext, dtype=float).copy()
    if h_noise is not None:
        h0 = h0 + np.asarray(h_noise, dtype=float)
    i_s = np.asarray(i_s, dtype=float)
    alpha = params.alpha
    gamma = GYROMAGNETIC_RATIO
    qn = ELECTRON_CHARGE * params.n_bohr
    hd = params.demag_field_oe

    def rhs(mv):
        h = h0.copy()
        h[0] -= hd * mv[0]
        mxh = np.cross(mv, h)
        torque = (np.cross(mv, np.cross(i_s, mv)) + alpha * np.cross(mv, i_s)) / qn
        return (-gamma * mxh - alpha * gamma * np.cross(mv, mxh) + torque) / (1 + alpha**2)

    k1 = rhs(m)
    if np.linalg.norm(dt * k1) > PREDICTOR_STEP_LIMIT:
        raise RuntimeError(f"predictor step |dm|={np.linalg.norm(dt * k1):.3g} > "
                           f"{PREDICTOR_STEP_LIMIT}; reduce dt")
    pred = m + dt * k1
    out = m + 0.5 * dt * (k1 + rhs(pred))
    return out / np.linalg.norm(out)


def run_sllg(m0, nsteps: int, params: MagnetParams, dt: float = 1e-12,
             h_ext=(0.0, 0.0, 0.0), i_s_z: float = 0.0, thermal: bool = True,
             seed: int = 0) -> np.ndarray:
    """Fast single-magnet trajectory; returns the (nsteps, 3) m history."""
    sigma = thermal_field_sigma(params, dt) if thermal else 0.0
    return _kernels.sllg_trace(
        np.asarray(m0, dtype=float), nsteps, dt, float(h_ext[0]),
        float(h_ext[1]), float(h_ext[2]), sigma, params.demag_field_oe,
        float(i_s_z), params.alpha, GYROMAGNETIC_RATIO,
        1.0 / (ELECTRON_CHARGE * params.n_bohr), seed)


# ---------------------------------------------------------------------------
# readout chain
# ---------------------------------------------------------------------------


def _arcsine_quantiles(npoints: int = 257) -> np.ndarray:
    # quantile function of m_z = cos(uniform angle): Q(p) = -cos(pi p)
    return -np.cos(np.pi * np.linspace(0.0, 1.0, npoints))


@dataclass
class ReadoutLaw:
    """Abstract transistor + comparator: monotone R_T(V_IN) defined through
    an m_z threshold c(V) = Q((1 + tanh(V/V0))/2), where Q is the magnet's
    m_z quantile table. With the analytic arcsine table this reduces to
    c(V) = sin(pi/2 * tanh(V/V0)) and R_T(0) = 1/G0."""

    v0: float = 0.040  # V, stochastic-window width
    quantiles: np.ndarray = field(default_factory=_arcsine_quantiles)

    def threshold_mz(self, v_in):
        p = 0.5 * (1.0 + np.tanh(np.asarray(v_in, dtype=float) / self.v0))
        grid = np.linspace(0.0, 1.0, len(self.quantiles))
        return np.interp(p, grid, self.quantiles)


def transistor_resistance(v_in, law: ReadoutLaw, mtj: MTJParams):
    """R_T(V_IN): monotone nonincreasing, spanning the MTJ resistance range."""
    return 1.0 / (mtj.g0 * (1.0 + mtj.asymmetry * law.threshold_mz(v_in)))


def divider_midpoint(vdd, r_t, r_mtj):
    """V_mid = VDD * R_T / (R_T + R_MTJ)."""
    return vdd * r_t / (r_t + r_mtj)


def comparator_output(vdd, v_mid):
    """Thresholded (and inverted) midpoint: +1 when V_mid < VDD/2."""
    return np.where(np.asarray(v_mid) < vdd / 2.0, 1, -1)


@dataclass
class CircuitMapping:
    """Electrical-to-behavioral parameter map: m = V_OUT/(VDD/2),
    W_ji = R0/R_ji, beta = VDD * R_ref / (2 V0 R0)."""

    vdd: float
    v0: float
    r_ref: float
    r0: float

    def __post_init__(self):
        if min(self.vdd, self.v0, self.r_ref, self.r0) <= 0:
            raise ValueError("all mapping parameters must be positive")

    @property
    def beta(self) -> float:
        return self.vdd * self.r_ref / (2.0 * self.v0 * self.r0)

    def weight_from_resistance(self, r):
        return self.r0 / np.asarray(r, dtype=float)

    def resistance_from_weight(self, w):
        w = np.asarray(w, dtype=float)
        if np.any(w == 0):
            raise ValueError("zero weight corresponds to an open circuit")
        return self.r0 / w


def circuit_mapping(vdd: float, v0: float, r_ref: float, r0: float) -> CircuitMapping:
    return CircuitMapping(vdd, v0, r_ref, r0)


# ---------------------------------------------------------------------------
# device-level experiments
# ---------------------------------------------------------------------------


def _device_kernel_args(params: MagnetParams, mtj: MTJParams, dt: float):
    return dict(
        dt=dt,
        sigma=thermal_field_sigma(params, dt),
        hd=params.demag_field_oe,
        alpha=params.alpha,
        gamma=GYROMAGNETIC_RATIO,
        qn_inv=1.0 / (ELECTRON_CHARGE * params.n_bohr),
        g0=mtj.g0,
        lam=mtj.asymmetry,
    )


def simulate_transfer(v_in, duration: float, params: MagnetParams,
                      mtj: MTJParams, law: ReadoutLaw | None = None,
                      vdd: float = 0.8, dt: float = 1e-12,
                      burn: float = 2e-9, seed: int = 0,
                      spin_current: bool = True):
    """Averaged p-bit output vs input voltage.

    Each input point runs an independent device for `duration` seconds and
    averages both the thresholded output (the network-facing bit) and the
    analog divider midpoint normalized to [-1, 1]. Returns
    (thresholded_avg, analog_avg) arrays over v_in.
    """
    law = law or ReadoutLaw()
    vins = np.asarray(v_in, dtype=float)
    nsteps = int(round(duration / dt))
    nburn = min(int(round(burn / dt)), nsteps // 2)
    ppol = mtj.polarization if spin_current else 0.0
    thresh, analog, _ = _kernels.device_sweep(
        vins, nsteps, nburn, max(1, nsteps), vdd=vdd, v0=law.v0,
        qtab=np.asarray(law.quantiles, dtype=float), ppol=ppol, seed=seed,
        **_device_kernel_args(params, mtj, dt))
    return thresh, analog


def calibrate_readout(params: MagnetParams, mtj: MTJParams,
                      v0: float = 0.040, vdd: float = 0.8, dt: float = 1e-12,
                      duration: float = 2e-6, seed: int = 101,
                      npoints: int = 257) -> ReadoutLaw:
    """Build the readout law from the measured m_z statistics.

    Runs one device at V_IN = 0 with the spin-current feedback active (the
    operating-point current), then tabulates the empirical quantile
    function of m_z. This is the 'symmetric sigmoid, no offsets' design
    step: it centers the comparator on the actual (spin-current-tilted)
    distribution instead of the ideal arcsine one.
    """
    base = ReadoutLaw(v0=v0)
    nsteps = int(round(duration / dt))
    _, _, samples = _kernels.device_sweep(
        np.zeros(1), nsteps, min(50000, nsteps // 10), 1, vdd=vdd, v0=v0,
        qtab=np.asarray(base.quantiles, dtype=float), ppol=mtj.polarization,
        seed=seed, **_device_kernel_args(params, mtj, dt))
    q = np.quantile(samples[0], np.linspace(0.0, 1.0, npoints))
    return ReadoutLaw(v0=v0, quantiles=np.maximum.accumulate(q))


def fit_transfer_v0(v_in, avg_out) -> float:
    """Least-squares width of tanh(V/V0) through a measured transfer curve."""
    from scipy.optimize import curve_fit

    popt, _ = curve_fit(lambda v, v0: np.tanh(v / v0), np.asarray(v_in),
                        np.asarray(avg_out), p0=[0.04])
    return float(popt[0])


def autocorrelation_time(trace, dt: float) -> float:
    """Lag (seconds) where the normalized autocorrelation first drops
    below 1/e; raises when the trace never decays that far."""
    x = np.asarray(trace, dtype=float)
    if len(x) < 16:
        raise ValueError("trace too short")
    x = x - x.mean()
    var = float(x @ x)
    if var == 0.0:
        raise ValueError("constant trace has no decay")
    n = len(x)
    nfft = 1 << (2 * n - 1).bit_length()
    f = np.fft.rfft(x, nfft)
    acf = np.fft.irfft(f * np.conj(f))[:n] / var
    below = np.nonzero(acf < math.exp(-1.0))[0]
    if len(below) == 0:
        raise ValueError("no 1/e crossing found; trace too short")
    return float(below[0]) * dt


def run_device_network(lattice: ReplicaLattice, beta: float,
                       params: MagnetParams, mtj: MTJParams,
                       law: ReadoutLaw | None = None, vdd: float = 0.8,
                       dt: float = 1e-12, duration: float = 250e-9,
                       burn: float = 10e-9, seed: int = 0,
                       spin_current: bool = True):
    """Asynchronous coupled network of sLLG p-bits over a replica lattice.

    The resistive synapse (ideal op-amp) converts the previous step's
    comparator outputs into V_IN_j = V0 * beta * I_j per the circuit
    mapping. Returns (pooled Histogram, per-step mean output trace).
    """
    law = law or ReadoutLaw()
    graph = lattice.graph
    if len(graph.quad_w):
        raise ValueError("resistive synapse handles pairwise terms only")
    nsteps = int(round(duration / dt))
    nburn = min(int(round(burn / dt)), nsteps // 2)
    hist_counts = np.zeros(2**lattice.M)
    mz_trace = np.zeros(nsteps - nburn)
    _kernels.device_network(
        graph.pair_ptr, graph.pair_nbr, graph.pair_nbr_w, graph.bias,
        beta, nsteps, nburn, vdd=vdd, v0=law.v0,
        qtab=np.asarray(law.quantiles, dtype=float),
        ppol=mtj.polarization if spin_current else 0.0,
        M=lattice.M, slices=lattice.slices, seed=seed,
        hist_counts=hist_counts, mz_trace=mz_trace,
        **_device_kernel_args(params, mtj, dt))
    return counts_to_histogram(hist_counts, lattice.M), mz_trace
