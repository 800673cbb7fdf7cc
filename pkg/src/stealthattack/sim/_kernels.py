"""Inner loop of the plant / sensor filter / attacker / remote estimator.

Two interchangeable implementations over a block of runs:

* ``run_block_numba`` -- per-run scalar loop compiled with numba;
* ``run_block_numpy`` -- time loop vectorized across runs.

Both consume the same pre-drawn noise and perform the same floating-point
operations in the same order.  The numba path is used when numba imports and
``STEALTHATTACK_NUMBA`` is not set to 0.

Noise row layout for a horizon h: ``[x_1, w_1..w_h, v_1..v_h]`` (standard
normals, scaled inside the kernel).  Output columns: sum of squared a-priori
remote error, sum z~, sum z~^2, sum z~_k z~_{k-1}, all over k > burn_in.
"""

from __future__ import annotations

import numpy as np

from ..config import numba_requested

N_ACC = 4

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False


def run_block_numpy(noise, a, c, k_gain, t, s, sd_x, sd_w, sd_v, burn_in, out):
    n_runs, width = noise.shape
    h = (width - 1) // 2
    x = sd_x * noise[:, 0]
    xh = np.zeros(n_runs)  # sensor a-priori estimate
    xr = np.zeros(n_runs)  # remote a-priori estimate
    zt_prev = np.zeros(n_runs)
    out[:] = 0.0
    for k in range(1, h + 1):
        y = c * x + sd_v * noise[:, h + k]
        z = y - c * xh
        zt = t * zt_prev + s * z
        if k > burn_in:
            e = x - xr
            out[:, 0] += e * e
            out[:, 1] += zt
            out[:, 2] += zt * zt
            out[:, 3] += zt * zt_prev
        xh = a * (xh + k_gain * z)
        xr = a * (xr + k_gain * zt)
        x = a * x + sd_w * noise[:, k]
        zt_prev = zt
    return out


def _run_block_scalar(noise, a, c, k_gain, t, s, sd_x, sd_w, sd_v, burn_in, out):
    n_runs, width = noise.shape
    h = (width - 1) // 2
    for j in range(n_runs):
        x = sd_x * noise[j, 0]
        xh = 0.0
        xr = 0.0
        zt_prev = 0.0
        acc_e = 0.0
        acc_z = 0.0
        acc_z2 = 0.0
        acc_lag = 0.0
        for k in range(1, h + 1):
            y = c * x + sd_v * noise[j, h + k]
            z = y - c * xh
            zt = t * zt_prev + s * z
            if k > burn_in:
                e = x - xr
                acc_e += e * e
                acc_z += zt
                acc_z2 += zt * zt
                acc_lag += zt * zt_prev
            xh = a * (xh + k_gain * z)
            xr = a * (xr + k_gain * zt)
            x = a * x + sd_w * noise[j, k]
            zt_prev = zt
        out[j, 0] = acc_e
        out[j, 1] = acc_z
        out[j, 2] = acc_z2
        out[j, 3] = acc_lag
    return out


if HAVE_NUMBA:
    run_block_numba = numba.njit(cache=True, nogil=True)(_run_block_scalar)
else:  # pragma: no cover
    run_block_numba = None

BACKENDS = ("numba", "numpy")


def default_backend() -> str:
    return "numba" if HAVE_NUMBA and numba_requested() else "numpy"


def get_kernel(backend: str | None = None):
    backend = backend or default_backend()
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is not importable")
        return run_block_numba
    if backend == "numpy":
        return run_block_numpy
    raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
