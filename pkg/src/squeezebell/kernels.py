"""Hot loops, each in a numba flavour and a vectorised numpy flavour.

The public wrappers pick the numba version when it is available and not
disabled (see ``_accel``); ``backend="numpy"`` or ``backend="numba"`` forces
one side, which the tests and the benchmark use to compare them.
"""
import math

import numpy as np

from ._accel import HAVE_NUMBA, njit

ARMIJO = 1e-4
MIN_STEP = 1e-300


# --------------------------------------------------------------------------
# B_m bracket in width-scaled coordinates u = a*sqrt(E), v = b*sqrt(E):
#   g(u, v; k) = 1 + exp(-u^2) + exp(-v^2) - exp(-(u^2 + v^2 + 2 k u v)),
# with k = F/E in [0, 1).

@njit(cache=True)
def _bracket(u, v, k):
    return 1.0 + math.exp(-u * u) + math.exp(-v * v) - math.exp(-(u * u + v * v + 2.0 * k * u * v))


@njit(cache=True)
def _bracket_grad(u, v, k):
    c = math.exp(-(u * u + v * v + 2.0 * k * u * v))
    gu = -2.0 * u * math.exp(-u * u) + 2.0 * (u + k * v) * c
    gv = -2.0 * v * math.exp(-v * v) + 2.0 * (v + k * u) * c
    return gu, gv


@njit(cache=True)
def _next_step(su, sv, yu, yv, step):
    # Barzilai-Borwein trial step for ascent; fall back to doubling where the
    # local curvature along the step is not negative.
    sy = su * yu + sv * yv
    if sy < 0.0:
        return (su * su + sv * sv) / -sy
    return 2.0 * step


@njit(cache=True)
def _ascend_numba(k, starts, step_tol, value_tol, max_iter):
    n = starts.shape[0]
    out_u = np.empty(n)
    out_v = np.empty(n)
    out_g = np.empty(n)
    iters = np.zeros(n, dtype=np.int64)
    conv = np.zeros(n, dtype=np.bool_)
    for i in range(n):
        u = starts[i, 0]
        v = starts[i, 1]
        g = _bracket(u, v, k)
        gu, gv = _bracket_grad(u, v, k)
        step = 1.0
        it = 0
        while it < max_iter:
            # projected gradient: no motion through the a=0 / b=0 walls
            pu = 0.0 if (u <= 0.0 and gu < 0.0) else gu
            pv = 0.0 if (v <= 0.0 and gv < 0.0) else gv
            if math.sqrt(pu * pu + pv * pv) < step_tol:
                conv[i] = True
                break
            while True:
                un = max(0.0, u + step * gu)
                vn = max(0.0, v + step * gv)
                gn = _bracket(un, vn, k)
                if gn >= g + ARMIJO * (gu * (un - u) + gv * (vn - v)):
                    break
                step *= 0.5
                if step < MIN_STEP:
                    break
            it += 1
            if step < MIN_STEP:
                break
            dx = math.sqrt((un - u) ** 2 + (vn - v) ** 2)
            dg = gn - g
            gun, gvn = _bracket_grad(un, vn, k)
            step = _next_step(un - u, vn - v, gun - gu, gvn - gv, step)
            u = un
            v = vn
            g = gn
            gu = gun
            gv = gvn
            if dx < step_tol and dg <= value_tol:
                conv[i] = True
                break
        out_u[i] = u
        out_v[i] = v
        out_g[i] = g
        iters[i] = it
    return out_u, out_v, out_g, iters, conv


def _bracket_np(u, v, k):
    return 1.0 + np.exp(-u * u) + np.exp(-v * v) - np.exp(-(u * u + v * v + 2.0 * k * u * v))


def _bracket_grad_np(u, v, k):
    c = np.exp(-(u * u + v * v + 2.0 * k * u * v))
    gu = -2.0 * u * np.exp(-u * u) + 2.0 * (u + k * v) * c
    gv = -2.0 * v * np.exp(-v * v) + 2.0 * (v + k * u) * c
    return gu, gv


def _ascend_numpy(k, starts, step_tol, value_tol, max_iter):
    """All restarts advance together; finished ones are masked out."""
    u = starts[:, 0].astype(float)
    v = starts[:, 1].astype(float)
    n = u.size
    g = _bracket_np(u, v, k)
    gu, gv = _bracket_grad_np(u, v, k)
    step = np.ones(n)
    iters = np.zeros(n, dtype=np.int64)
    conv = np.zeros(n, dtype=bool)
    active = np.ones(n, dtype=bool)

    while active.any():
        pu = np.where((u <= 0.0) & (gu < 0.0), 0.0, gu)
        pv = np.where((v <= 0.0) & (gv < 0.0), 0.0, gv)
        flat = active & (np.hypot(pu, pv) < step_tol)
        conv |= flat
        active &= ~flat
        idx = np.flatnonzero(active & (iters < max_iter))
        if idx.size == 0:
            break

        uu, vv, gg, su = u[idx], v[idx], g[idx], step[idx]
        du, dv = gu[idx], gv[idx]
        un = np.maximum(0.0, uu + su * du)
        vn = np.maximum(0.0, vv + su * dv)
        gn = _bracket_np(un, vn, k)
        ok = gn >= gg + ARMIJO * (du * (un - uu) + dv * (vn - vv))
        while not ok.all():
            bad = ~ok & (su >= MIN_STEP)
            if not bad.any():
                break
            su[bad] *= 0.5
            un[bad] = np.maximum(0.0, uu[bad] + su[bad] * du[bad])
            vn[bad] = np.maximum(0.0, vv[bad] + su[bad] * dv[bad])
            gn[bad] = _bracket_np(un[bad], vn[bad], k)
            ok[bad] = gn[bad] >= gg[bad] + ARMIJO * (du[bad] * (un[bad] - uu[bad]) + dv[bad] * (vn[bad] - vv[bad]))

        iters[idx] += 1
        stalled = su < MIN_STEP
        moved = idx[~stalled]
        active[idx[stalled]] = False

        keep = ~stalled
        ddu = un[keep] - uu[keep]
        ddv = vn[keep] - vv[keep]
        dx = np.hypot(ddu, ddv)
        dg = gn[keep] - gg[keep]
        gun, gvn = _bracket_grad_np(un[keep], vn[keep], k)
        sy = ddu * (gun - du[keep]) + ddv * (gvn - dv[keep])
        with np.errstate(divide="ignore", invalid="ignore"):
            step[moved] = np.where(sy < 0.0, (ddu * ddu + ddv * ddv) / -sy, 2.0 * su[keep])
        u[moved], v[moved], g[moved] = un[keep], vn[keep], gn[keep]
        gu[moved], gv[moved] = gun, gvn
        done = (dx < step_tol) & (dg <= value_tol)
        conv[moved[done]] = True
        active[moved[done]] = False
        active &= iters < max_iter
    return u, v, g, iters, conv


def ascend(k, starts, step_tol, value_tol, max_iter, backend=None):
    """Projected steepest ascent of the scaled B_m bracket from each start.

    Returns ``(u, v, g, iterations, converged)`` arrays, one entry per start.
    """
    starts = np.ascontiguousarray(starts, dtype=np.float64).reshape(-1, 2)
    if _use_numba(backend):
        return _ascend_numba(float(k), starts, float(step_tol), float(value_tol), int(max_iter))
    return _ascend_numpy(float(k), starts, float(step_tol), float(value_tol), int(max_iter))


# --------------------------------------------------------------------------
# Exhaustive lattice maximum of B_m in raw displacement magnitudes.

@njit(cache=True)
def _grid_max_numba(e, f, pref, grid_max, grid_n):
    h = grid_max / (grid_n - 1)
    x = np.empty(grid_n)
    ex = np.empty(grid_n)
    for i in range(grid_n):
        x[i] = i * h
        ex[i] = math.exp(-e * x[i] * x[i])
    best = -np.inf
    ba = 0.0
    bb = 0.0
    for i in range(grid_n):
        a = x[i]
        for j in range(grid_n):
            b = x[j]
            # exp(-E(a^2+b^2) - 2Fab) = ex[i] * ex[j] * exp(-2Fab)
            val = pref * (1.0 + ex[i] + ex[j] - ex[i] * ex[j] * math.exp(-2.0 * f * a * b))
            if val > best:
                best = val
                ba = a
                bb = b
    return best, ba, bb


def _grid_max_numpy(e, f, pref, grid_max, grid_n):
    x = np.arange(grid_n) * (grid_max / (grid_n - 1))
    a = x[:, None]
    b = x[None, :]
    vals = pref * (1.0 + np.exp(-e * a * a) + np.exp(-e * b * b) - np.exp(-e * (a * a + b * b) - 2.0 * f * a * b))
    i, j = np.unravel_index(np.argmax(vals), vals.shape)
    return float(vals[i, j]), float(x[i]), float(x[j])


def grid_max(e, f, pref, grid_max, grid_n, backend=None):
    """Best B_m value on the lattice ``[0, grid_max]^2`` and where it sits."""
    if _use_numba(backend):
        return _grid_max_numba(float(e), float(f), float(pref), float(grid_max), int(grid_n))
    return _grid_max_numpy(float(e), float(f), float(pref), float(grid_max), int(grid_n))


# --------------------------------------------------------------------------
# Displacement operator <m|D(alpha)|n>. Along each diagonal k = m - n the
# entries are x^(k/2) e^(-x/2) sqrt(n!/(n+k)!) L_n^(k)(x) times a phase, with
# x = |alpha|^2. The normalised Laguerre recurrence
#   f_{n+1} = [(2n+1+k-x) f_n - sqrt(n(n+k)) f_{n-1}] / sqrt((n+1)(n+1+k))
# keeps every term bounded by one. Raising n or m directly with the ladder
# operators loses all accuracy for |alpha| >~ 3 at sizes ~60.

MAX_ABS2 = 600.0  # exp(-x/2) underflows the diagonal seeds past this


@njit(cache=True)
def _displacement_numba(alpha, size):
    out = np.zeros((size, size), dtype=np.complex128)
    x = alpha.real ** 2 + alpha.imag ** 2
    ph = alpha / math.sqrt(x) if x > 0.0 else 1.0 + 0.0j
    rot = 1.0 + 0.0j
    for k in range(size):
        if x > 0.0:
            f = math.exp(0.5 * k * math.log(x) - 0.5 * x - 0.5 * math.lgamma(k + 1.0))
        else:
            f = 1.0 if k == 0 else 0.0
        up = rot.conjugate() * (-1.0) ** k
        fm = 0.0
        for n in range(size - k):
            out[n + k, n] = f * rot
            out[n, n + k] = f * up
            fn = ((2.0 * n + 1.0 + k - x) * f - math.sqrt(n * (n + k)) * fm) / math.sqrt((n + 1.0) * (n + 1.0 + k))
            fm = f
            f = fn
        rot = rot * ph
    return out


def _displacement_numpy(alpha, size):
    out = np.zeros((size, size), dtype=np.complex128)
    x = abs(alpha) ** 2
    k = np.arange(size, dtype=float)
    if x > 0.0:
        f = np.exp(0.5 * k * np.log(x) - 0.5 * x - 0.5 * np.array([math.lgamma(i + 1.0) for i in range(size)]))
        rot = (alpha / np.sqrt(x)) ** np.arange(size)
    else:
        f = (k == 0).astype(float)
        rot = np.ones(size, dtype=np.complex128)
    up = rot.conj() * (-1.0) ** np.arange(size)
    fm = np.zeros(size)
    for n in range(size):
        kk = np.arange(size - n)
        out[n + kk, n] = f[: size - n] * rot[: size - n]
        out[n, n + kk] = f[: size - n] * up[: size - n]
        fn = ((2.0 * n + 1.0 + k - x) * f - np.sqrt(n * (n + k)) * fm) / np.sqrt((n + 1.0) * (n + 1.0 + k))
        fm, f = f, fn
    return out


def displacement(alpha, size, backend=None):
    """``(size x size)`` block of ``<m|D(alpha)|n>``; exact, no truncation error."""
    alpha = complex(alpha)
    if abs(alpha) ** 2 > MAX_ABS2:
        raise ValueError(f"|alpha|^2 = {abs(alpha) ** 2:.1f} is too large for double-precision matrix elements")
    if _use_numba(backend):
        return _displacement_numba(alpha, int(size))
    return _displacement_numpy(alpha, int(size))


def _use_numba(backend):
    if backend is None:
        return HAVE_NUMBA
    if backend == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is unavailable or disabled")
        return True
    if backend == "numpy":
        return False
    raise ValueError(f"unknown backend {backend!r}")
