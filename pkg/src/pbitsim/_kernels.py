"""Numba kernels: the sequential p-bit sweep engine and the sLLG device loop.

All randomness comes from an explicit xorshift128+ stream seeded via
splitmix64, so trajectories are bit-reproducible for a given seed
independent of numpy's global state. The uniform variate is strictly
inside (-1, 1); sgn(0) is defined as +1 in the update rule anyway.

Graphs arrive as CSR arrays (see InteractionGraph): per p-bit pair
neighbors with weights, and per p-bit 4-body partner triples with weights.
Fields are always recomputed from the current state, so within a sweep
every update sees all earlier ones (no stale fields).
"""

import math

import numpy as np
from numba import njit

# ---------------------------------------------------------------------------
# RNG
# ---------------------------------------------------------------------------


@njit(cache=True)
def seed_state(seed):
    """Two splitmix64 outputs as the xorshift128+ state."""
    s = np.empty(2, dtype=np.uint64)
    z = np.uint64(seed)
    for i in range(2):
        z = z + np.uint64(0x9E3779B97F4A7C15)
        t = z
        t = (t ^ (t >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        t = (t ^ (t >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        s[i] = t ^ (t >> np.uint64(31))
    if s[0] == np.uint64(0) and s[1] == np.uint64(0):
        s[0] = np.uint64(0x1)
    return s


@njit(inline="always")
def _rng_next(s):
    x = s[0]
    y = s[1]
    s[0] = y
    x ^= x << np.uint64(23)
    x ^= x >> np.uint64(17)
    x ^= y ^ (y >> np.uint64(26))
    s[1] = x
    return x + y


@njit(inline="always")
def _rng_pm1(s):
    """Uniform on the open interval (-1, 1)."""
    r = _rng_next(s) >> np.uint64(11)
    return (float(r) + 0.5) * (2.0 ** -52) - 1.0


@njit(inline="always")
def _rng_u01(s):
    """Uniform on (0, 1)."""
    r = _rng_next(s) >> np.uint64(11)
    return (float(r) + 0.5) * (2.0 ** -53)


@njit(inline="always")
def _rng_normal(s):
    u1 = _rng_u01(s)
    u2 = _rng_u01(s)
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


# ---------------------------------------------------------------------------
# p-bit Gibbs engine
# ---------------------------------------------------------------------------


@njit(inline="always")
def _field(m, i, pair_ptr, pair_nbr, pair_nbr_w, quad_ptr, quad_partners,
           quad_term_w, bias):
    f = bias[i]
    for p in range(pair_ptr[i], pair_ptr[i + 1]):
        f += pair_nbr_w[p] * m[pair_nbr[p]]
    for p in range(quad_ptr[i], quad_ptr[i + 1]):
        f += (quad_term_w[p] * m[quad_partners[p, 0]]
              * m[quad_partners[p, 1]] * m[quad_partners[p, 2]])
    return f


@njit(inline="always")
def _graph_energy(m, pair_ptr, pair_nbr, pair_nbr_w, quad_ptr, quad_partners,
                  quad_term_w, bias):
    # CSR stores each pair twice and each quad four times
    e = 0.0
    for i in range(m.shape[0]):
        e -= bias[i] * m[i]
        s = 0.0
        for p in range(pair_ptr[i], pair_ptr[i + 1]):
            s += pair_nbr_w[p] * m[pair_nbr[p]]
        e -= 0.5 * s * m[i]
        q = 0.0
        for p in range(quad_ptr[i], quad_ptr[i + 1]):
            q += (quad_term_w[p] * m[quad_partners[p, 0]]
                  * m[quad_partners[p, 1]] * m[quad_partners[p, 2]])
        e -= 0.25 * q * m[i]
    return e


@njit(inline="always")
def _shuffle(order, s):
    for a in range(order.shape[0] - 1, 0, -1):
        b = int(_rng_next(s) % np.uint64(a + 1))
        tmp = order[a]
        order[a] = order[b]
        order[b] = tmp


@njit(inline="always")
def _accumulate_slices(m, M, slices, hist_counts):
    for k in range(slices):
        idx = 0
        base = k * M
        for i in range(M):
            bit = 1 if m[base + i] > 0.0 else 0
            idx = (idx << 1) | bit
        hist_counts[idx] += 1.0


@njit(cache=True)
def gibbs_run(m, pair_ptr, pair_nbr, pair_nbr_w, quad_ptr, quad_partners,
              quad_term_w, bias, beta, order, randomize_order, sweeps,
              burn_in, M, slices, record_hist, record_traces, record_energy,
              hist_counts, mz_trace, e_trace, rng_state):
    """Sequential Gibbs sweeps at fixed beta; records post-burn-in stats."""
    n = m.shape[0]
    rec = 0
    for sweep in range(sweeps):
        if randomize_order:
            _shuffle(order, rng_state)
        for t in range(order.shape[0]):
            i = order[t]
            f = _field(m, i, pair_ptr, pair_nbr, pair_nbr_w,
                       quad_ptr, quad_partners, quad_term_w, bias)
            r = _rng_pm1(rng_state)
            m[i] = 1.0 if r + math.tanh(beta * f) >= 0.0 else -1.0
        if sweep >= burn_in:
            if record_traces:
                s = 0.0
                for i in range(n):
                    s += m[i]
                mz_trace[rec] = s / n
                if record_energy:
                    e_trace[rec] = _graph_energy(m, pair_ptr, pair_nbr,
                                                 pair_nbr_w, quad_ptr,
                                                 quad_partners, quad_term_w,
                                                 bias)
            if record_hist:
                _accumulate_slices(m, M, slices, hist_counts)
            rec += 1
    return rec


@njit(cache=True)
def anneal_run(m, pair_ptr, pair_nbr, pair_nbr_w, quad_ptr, quad_partners,
               quad_term_w, bias, betas, order, randomize_order,
               sweeps_per_step, perp_slots, perp_w_per_step,
               snapshots, record_snapshots, rng_state):
    """One annealing trajectory: per-step beta, optional perp re-weighting.

    perp_w_per_step is empty for classical annealing; otherwise it holds
    one inter-slice weight per schedule step, written into both CSR slots
    of every perp term before that step's sweeps.
    """
    steps = betas.shape[0]
    reweight = perp_w_per_step.shape[0] > 0
    for step in range(steps):
        if reweight:
            w = perp_w_per_step[step]
            for t in range(perp_slots.shape[0]):
                pair_nbr_w[perp_slots[t, 0]] = w
                pair_nbr_w[perp_slots[t, 1]] = w
        beta = betas[step]
        for rep in range(sweeps_per_step):
            if randomize_order:
                _shuffle(order, rng_state)
            for t in range(order.shape[0]):
                i = order[t]
                f = _field(m, i, pair_ptr, pair_nbr, pair_nbr_w,
                           quad_ptr, quad_partners, quad_term_w, bias)
                r = _rng_pm1(rng_state)
                m[i] = 1.0 if r + math.tanh(beta * f) >= 0.0 else -1.0
        if record_snapshots:
            for i in range(m.shape[0]):
                snapshots[step, i] = np.int8(1) if m[i] > 0.0 else np.int8(-1)


# ---------------------------------------------------------------------------
# stochastic LLG device
# ---------------------------------------------------------------------------


@njit(inline="always")
def _heun_step(mx, my, mz, hx0, hy0, hz0, hd, isz, alpha, gamma, qn_inv, dt):
    """One Heun step of the sLLG equation.

    hx0..hz0 hold external+thermal fields (Oe); the easy-plane demag
    -hd*m_x*x_hat is re-evaluated at the predictor point; isz is the
    z-directed spin current in A. The noise realization is shared by
    predictor and corrector (Stratonovich convention).
    """
    c = 1.0 / (1.0 + alpha * alpha)
    px, py, pz = mx, my, mz
    k1x = k1y = k1z = 0.0
    for it in range(2):
        hx = hx0 - hd * px
        hy = hy0
        hz = hz0
        cx = py * hz - pz * hy
        cy = pz * hx - px * hz
        cz = px * hy - py * hx
        dx = py * cz - pz * cy
        dy = pz * cx - px * cz
        dz = px * cy - py * cx
        # m x (Is x m) = Is - m (m . Is) and m x Is, with Is along z
        sx = qn_inv * (-px * pz * isz) + alpha * qn_inv * (py * isz)
        sy = qn_inv * (-py * pz * isz) + alpha * qn_inv * (-px * isz)
        sz = qn_inv * ((1.0 - pz * pz) * isz)
        fx = c * (-gamma * cx - alpha * gamma * dx + sx)
        fy = c * (-gamma * cy - alpha * gamma * dy + sy)
        fz = c * (-gamma * cz - alpha * gamma * dz + sz)
        if it == 0:
            k1x, k1y, k1z = fx, fy, fz
            px = mx + dt * fx
            py = my + dt * fy
            pz = mz + dt * fz
        else:
            mx += 0.5 * dt * (k1x + fx)
            my += 0.5 * dt * (k1y + fy)
            mz += 0.5 * dt * (k1z + fz)
    nrm = math.sqrt(mx * mx + my * my + mz * mz)
    return mx / nrm, my / nrm, mz / nrm


@njit(cache=True)
def sllg_trace(m0, nsteps, dt, hx_ext, hy_ext, hz_ext, sigma, hd, isz,
               alpha, gamma, qn_inv, seed):
    """Single-magnet trajectory; returns the (nsteps, 3) magnetization."""
    s = seed_state(seed)
    out = np.empty((nsteps, 3))
    mx, my, mz = m0[0], m0[1], m0[2]
    for t in range(nsteps):
        if sigma > 0.0:
            hx = hx_ext + sigma * _rng_normal(s)
            hy = hy_ext + sigma * _rng_normal(s)
            hz = hz_ext + sigma * _rng_normal(s)
        else:
            hx, hy, hz = hx_ext, hy_ext, hz_ext
        mx, my, mz = _heun_step(mx, my, mz, hx, hy, hz, hd, isz,
                                alpha, gamma, qn_inv, dt)
        out[t, 0] = mx
        out[t, 1] = my
        out[t, 2] = mz
    return out


@njit(inline="always")
def _readout_threshold(vin, v0, qtab):
    """m_z threshold c(V): quantile of the target probability (1+tanh)/2."""
    p = 0.5 * (1.0 + math.tanh(vin / v0))
    ngrid = qtab.shape[0] - 1
    x = p * ngrid
    i0 = int(x)
    if i0 >= ngrid:
        i0 = ngrid - 1
    return qtab[i0] + (x - i0) * (qtab[i0 + 1] - qtab[i0])


@njit(cache=True)
def device_sweep(vins, nsteps, burn, thin, dt, sigma, hd, alpha, gamma,
                 qn_inv, g0, lam, vdd, v0, qtab, ppol, seed):
    """Independent devices at fixed input voltages.

    Returns (thresholded-average, analog-average, m_z samples every `thin`
    steps). The analog output is the divider midpoint normalized to
    [-1, 1]; the thresholded output is its comparator sign. The divider
    current feeds back as spin current P * I_MTJ * z_hat.
    """
    ndev = vins.shape[0]
    s = seed_state(seed)
    m = np.zeros((ndev, 3))
    for j in range(ndev):
        m[j, 2] = 1.0 if _rng_pm1(s) >= 0.0 else -1.0
    nrec = (nsteps - burn) // thin
    mz_samples = np.empty((ndev, nrec))
    out_thresh = np.zeros(ndev)
    out_analog = np.zeros(ndev)
    nacc = 0
    rts = np.empty(ndev)
    for j in range(ndev):
        c = _readout_threshold(vins[j], v0, qtab)
        rts[j] = 1.0 / (g0 * (1.0 + lam * c))
    krec = 0
    for t in range(nsteps):
        for j in range(ndev):
            g = g0 * (1.0 + lam * m[j, 2])
            rmtj = 1.0 / g
            isz = ppol * vdd / (rts[j] + rmtj)
            hx = sigma * _rng_normal(s)
            hy = sigma * _rng_normal(s)
            hz = sigma * _rng_normal(s)
            mx, my, mz = _heun_step(m[j, 0], m[j, 1], m[j, 2], hx, hy, hz,
                                    hd, isz, alpha, gamma, qn_inv, dt)
            m[j, 0], m[j, 1], m[j, 2] = mx, my, mz
            if t >= burn:
                g = g0 * (1.0 + lam * mz)
                rmtj = 1.0 / g
                out_thresh[j] += 1.0 if rmtj > rts[j] else -1.0
                # midpoint vdd*rt/(rt+rmtj), normalized and inverted
                out_analog[j] += (rmtj - rts[j]) / (rmtj + rts[j])
        if t >= burn:
            nacc += 1
            if (t - burn) % thin == 0 and krec < nrec:
                for j in range(ndev):
                    mz_samples[j, krec] = m[j, 2]
                krec += 1
    return out_thresh / nacc, out_analog / nacc, mz_samples


@njit(cache=True)
def device_network(pair_ptr, pair_nbr, pair_nbr_w, bias, beta, nsteps, burn,
                   dt, sigma, hd, alpha, gamma, qn_inv, g0, lam, vdd, v0,
                   qtab, ppol, M, slices, seed, hist_counts, mz_trace):
    """Coupled p-bit network built from sLLG devices and an ideal resistive
    synapse; the synapse sees the previous step's comparator outputs.

    Input conversion per the circuit mapping: V_IN_j = V0 * beta * I_j.
    Pooled slice states accumulate into hist_counts each post-burn step.
    """
    n = pair_ptr.shape[0] - 1
    s = seed_state(seed)
    m = np.zeros((n, 3))
    for j in range(n):
        m[j, 2] = 1.0 if _rng_pm1(s) >= 0.0 else -1.0
    out = np.empty(n)
    for j in range(n):
        out[j] = 1.0 if m[j, 2] < 0.0 else -1.0
    rec = 0
    for t in range(nsteps):
        for j in range(n):
            f = bias[j]
            for p in range(pair_ptr[j], pair_ptr[j + 1]):
                f += pair_nbr_w[p] * out[pair_nbr[p]]
            vin = v0 * beta * f
            c = _readout_threshold(vin, v0, qtab)
            rt = 1.0 / (g0 * (1.0 + lam * c))
            g = g0 * (1.0 + lam * m[j, 2])
            rmtj = 1.0 / g
            isz = ppol * vdd / (rt + rmtj)
            hx = sigma * _rng_normal(s)
            hy = sigma * _rng_normal(s)
            hz = sigma * _rng_normal(s)
            mx, my, mz = _heun_step(m[j, 0], m[j, 1], m[j, 2], hx, hy, hz,
                                    hd, isz, alpha, gamma, qn_inv, dt)
            m[j, 0], m[j, 1], m[j, 2] = mx, my, mz
            rmtj = 1.0 / (g0 * (1.0 + lam * mz))
            out[j] = 1.0 if rmtj > rt else -1.0
        if t >= burn:
            _accumulate_slices(out, M, slices, hist_counts)
            sm = 0.0
            for j in range(n):
                sm += out[j]
            mz_trace[rec] = sm / n
            rec += 1
    return rec
