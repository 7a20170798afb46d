"""Hot numerical kernels: JIT-compiled when numba is available, pure NumPy otherwise.

Backend selection: environment variable ``CVOPTOMECH_BACKEND`` set to
``numba`` (default) or ``numpy``. The numba path compiles the same RK4 source;
the O(grid^2) double-integral reduction has a separate vectorized NumPy
implementation (fixed 256-row chunks, deterministic summation order) because
a scalar Python loop over ~10^7 grid pairs would be unusably slow. The two
backends are cross-checked against each other in the test suite.
"""

from __future__ import annotations

import math
import os

import numpy as np

_env = os.environ.get("CVOPTOMECH_BACKEND", "numba").strip().lower()
if _env not in ("numba", "numpy"):
    raise ValueError(f"CVOPTOMECH_BACKEND must be 'numba' or 'numpy', got {_env!r}")


def _rk4_lyapunov_py(m, mt, d, v0, dt, n_steps, stride, trace_cap):
    """Fixed-step classic RK4 for dV/dt = M V + V M.T + D, re-symmetrizing
    every step. Records the state every `stride` steps (initial state first).

    Returns (records, n_recorded, last_step, flag); flag 1 means the trace
    exceeded trace_cap or went non-finite at last_step (instability abort).
    """
    dim = v0.shape[0]
    n_rec = n_steps // stride + 1
    out = np.empty((n_rec, dim, dim))
    v = v0.copy()
    out[0] = v
    idx = 1
    for step in range(1, n_steps + 1):
        k1 = m @ v + v @ mt + d
        u = v + (0.5 * dt) * k1
        k2 = m @ u + u @ mt + d
        u = v + (0.5 * dt) * k2
        k3 = m @ u + u @ mt + d
        u = v + dt * k3
        k4 = m @ u + u @ mt + d
        v = v + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        v = 0.5 * (v + v.T)
        tr = 0.0
        for i in range(dim):
            tr += v[i, i]
        if not np.isfinite(tr) or tr > trace_cap:
            return out, idx, step, 1
        if step % stride == 0:
            out[idx] = v
            idx += 1
    return out, idx, n_steps, 0


def _output_integrals_loop(big_gamma, delta, n_th, c_plus, c_minus, tau, npts):
    """Trapezoid reduction of the six two-time kernels over [0, tau]^2.

    Kernels (z = big_gamma + i delta, phi(s) = expm1(2 big_gamma s)/(2 big_gamma)):
      sn = e^{-z t} e^{-z* t'} [(n_th + 1) + c_plus  phi(min(t, t'))]
      sa = e^{-z* t} e^{-z t'} [ n_th      + c_minus phi(min(t, t'))]
      e1 = e^{-z (t - t')} theta(t - t') + e^{-z* (t' - t)} theta(t' - t)
      e2 = same with z <-> z*
      qa = e^{-z* (t' - t)} theta(t' - t)
      qb = e^{-z  (t' - t)} theta(t' - t)
    with theta(0) = 1/2. Returns the six weighted sums in that order.
    """
    z = complex(big_gamma, delta)
    zc = complex(big_gamma, -delta)
    h = tau / (npts - 1)
    ezm = np.empty(npts, dtype=np.complex128)
    ezcm = np.empty(npts, dtype=np.complex128)
    ezp = np.empty(npts, dtype=np.complex128)
    ezcp = np.empty(npts, dtype=np.complex128)
    for i in range(npts):
        t = i * h
        ezm[i] = np.exp(-z * t)
        ezcm[i] = np.exp(-zc * t)
        ezp[i] = np.exp(z * t)
        ezcp[i] = np.exp(zc * t)
    i_sn = 0.0 + 0.0j
    i_sa = 0.0 + 0.0j
    i_e1 = 0.0 + 0.0j
    i_e2 = 0.0 + 0.0j
    i_qa = 0.0 + 0.0j
    i_qb = 0.0 + 0.0j
    for i in range(npts):
        t = i * h
        wi = h if 0 < i < npts - 1 else 0.5 * h
        for j in range(npts):
            tp = j * h
            w = wi * (h if 0 < j < npts - 1 else 0.5 * h)
            mn = t if t < tp else tp
            if big_gamma == 0.0:
                phi = mn
            else:
                phi = math.expm1(2.0 * big_gamma * mn) / (2.0 * big_gamma)
            i_sn += w * ezm[i] * ezcm[j] * ((n_th + 1.0) + c_plus * phi)
            i_sa += w * ezcm[i] * ezm[j] * (n_th + c_minus * phi)
            if i > j:
                i_e1 += w * ezm[i] * ezp[j]
                i_e2 += w * ezcm[i] * ezcp[j]
            elif i < j:
                lt1 = w * ezcp[i] * ezcm[j]
                lt2 = w * ezp[i] * ezm[j]
                i_e1 += lt1
                i_e2 += lt2
                i_qa += lt1
                i_qb += lt2
            else:
                i_e1 += w
                i_e2 += w
                i_qa += 0.5 * w
                i_qb += 0.5 * w
    out = np.empty(6, dtype=np.complex128)
    out[0] = i_sn
    out[1] = i_sa
    out[2] = i_e1
    out[3] = i_e2
    out[4] = i_qa
    out[5] = i_qb
    return out


_CHUNK = 256


def _output_integrals_numpy(big_gamma, delta, n_th, c_plus, c_minus, tau, npts):
    """Vectorized equivalent of _output_integrals_loop (fixed-size row chunks)."""
    z = complex(big_gamma, delta)
    t = np.linspace(0.0, tau, npts)
    h = t[1] - t[0]
    w = np.full(npts, h)
    w[0] = w[-1] = 0.5 * h
    ezm = np.exp(-z * t)
    ezcm = np.exp(-np.conj(z) * t)
    ezp = np.exp(z * t)
    ezcp = np.exp(np.conj(z) * t)
    i_sn = i_sa = i_e1 = i_e2 = i_qa = i_qb = 0.0 + 0.0j
    for a in range(0, npts, _CHUNK):
        b = min(a + _CHUNK, npts)
        tt = t[a:b, None]
        tp = t[None, :]
        ww = np.outer(w[a:b], w)
        mn = np.minimum(tt, tp)
        if big_gamma == 0.0:
            phi = mn
        else:
            phi = np.expm1(2.0 * big_gamma * mn) / (2.0 * big_gamma)
        i_sn += np.sum(ww * np.outer(ezm[a:b], ezcm) * ((n_th + 1.0) + c_plus * phi))
        i_sa += np.sum(ww * np.outer(ezcm[a:b], ezm) * (n_th + c_minus * phi))
        th_gt = 0.5 * (np.sign(tt - tp) + 1.0)  # 1 for t > t', 1/2 on the diagonal
        th_lt = 1.0 - th_gt
        lt1 = np.outer(ezcp[a:b], ezcm) * th_lt
        lt2 = np.outer(ezp[a:b], ezm) * th_lt
        i_e1 += np.sum(ww * (np.outer(ezm[a:b], ezp) * th_gt + lt1))
        i_e2 += np.sum(ww * (np.outer(ezcm[a:b], ezcp) * th_gt + lt2))
        i_qa += np.sum(ww * lt1)
        i_qb += np.sum(ww * lt2)
    return np.array([i_sn, i_sa, i_e1, i_e2, i_qa, i_qb], dtype=np.complex128)


BACKEND = "numpy"
rk4_lyapunov = _rk4_lyapunov_py
output_integrals = _output_integrals_numpy

if _env == "numba":
    try:
        import numba
    except ImportError:  # pragma: no cover - numba is a hard dependency, but stay usable
        numba = None
    if numba is not None:
        rk4_lyapunov = numba.njit(cache=True, nogil=True)(_rk4_lyapunov_py)
        output_integrals = numba.njit(cache=True, nogil=True)(_output_integrals_loop)
        BACKEND = "numba"
