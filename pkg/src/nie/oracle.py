"""Reference density-matrix solver used to verify the closed-form results.

The equations of motion are integrated in the rotating frame of the driving
fields:

    d rho / dt = -i [H, rho] + relaxation + incoherent pumping

with ``H[b, a] = G_j`` for each field ``j`` on transition (a lower, b upper)
and level energies chosen so that ``delta_b - delta_a = -Omega'_j``.  No
closed-form algebra is shared with :mod:`nie.two_field` or :mod:`nie.fwm`.

Two independent routes to the steady state are provided: a direct linear
solve of ``L rho + s = 0`` and relaxation in time with the exact propagator
(scaling and squaring of ``exp(L dt)``).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .core import GROUND, zero_field_populations
from .errors import NoConvergence


@dataclass(frozen=True)
class OracleResult:
    rho: np.ndarray
    levels: tuple
    residual: float
    populations: dict
    coherences: dict
    chi: dict
    hermiticity: float

    def r(self, level):
        return self.populations[level]


def level_detunings(scheme, fields, z, active=None, tol=1e-9):
    """Rotating-frame level energies from the field detunings at velocity z.

    Raises ``ValueError`` if a closed loop of fields is not multiphoton
    consistent (for FWM this means the generated-wave detuning must be
    ``Omega4 = Omega1 - Omega2 + Omega3`` including Doppler shifts).
    """
    trans = scheme.transitions
    active = list(trans) if active is None else list(active)
    adj = {lv: [] for lv in scheme.levels}
    for j in active:
        a, b = trans[j]
        w = fields.shifted(j, z)
        adj[a].append((b, -w))
        adj[b].append((a, +w))
    delta = {GROUND: 0.0}
    queue = deque([GROUND])
    scale = 1.0 + max((abs(fields.shifted(j, z)) for j in active), default=0.0)
    while queue:
        x = queue.popleft()
        for y, step in adj[x]:
            val = delta[x] + step
            if y in delta:
                if abs(delta[y] - val) > tol * scale:
                    raise ValueError("field detunings are not multiphoton consistent")
            else:
                delta[y] = val
                queue.append(y)
    for lv in scheme.levels:
        delta.setdefault(lv, 0.0)
    return delta


def hamiltonian(scheme, fields, z):
    levels = scheme.levels
    idx = {lv: i for i, lv in enumerate(levels)}
    delta = level_detunings(scheme, fields, z)
    H = np.diag([delta[lv] for lv in levels]).astype(complex)
    for j, (a, b) in scheme.transitions.items():
        G = fields.rabi(j)
        H[idx[b], idx[a]] += G
        H[idx[a], idx[b]] += np.conj(G)
    return H


def liouvillian(scheme, fields, z):
    """Generator ``L`` and source ``s`` acting on row-major ``vec(rho)``."""
    levels = scheme.levels
    N = len(levels)
    idx = {lv: i for i, lv in enumerate(levels)}
    H = hamiltonian(scheme, fields, z)
    eye = np.eye(N)
    L = -1j * (np.kron(H, eye) - np.kron(eye, H.T))
    s = np.zeros(N * N, dtype=complex)

    def pos(a, b):
        return idx[a] * N + idx[b]

    for a in levels:
        for b in levels:
            if a != b:
                L[pos(a, b), pos(a, b)] -= scheme.width(a, b)
    for k in levels:
        kk = pos(k, k)
        if scheme.closed and k == GROUND:
            continue
        L[kk, kk] -= scheme.G(k)
        if scheme.closed:
            L[pos(GROUND, GROUND), kk] += scheme.ground_return(k)
    for (src, dst), rate in scheme.gamma.items():
        if scheme.closed and dst == GROUND:
            continue
        L[pos(dst, dst), pos(src, src)] += rate
    for k, rate in scheme.pump.items():
        if scheme.closed:
            L[pos(k, k), pos(GROUND, GROUND)] += rate
            L[pos(GROUND, GROUND), pos(GROUND, GROUND)] -= rate
        else:
            s[pos(k, k)] += rate
    return L, s


def _result(scheme, fields, rho, residual):
    levels = scheme.levels
    idx = {lv: i for i, lv in enumerate(levels)}
    pops = {lv: float(rho[idx[lv], idx[lv]].real) for lv in levels}
    n0 = zero_field_populations(scheme).n
    coh, chi = {}, {}
    for j, (a, b) in scheme.transitions.items():
        c = rho[idx[a], idx[b]]
        coh[j] = c
        G = fields.rabi(j)
        dn = n0[a] - n0[b]
        if G != 0 and dn != 0:
            chi[j] = c / (1j * np.conj(G) * dn / scheme.transition_width(j))
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    return OracleResult(rho, levels, residual, pops, coh, chi, herm)


def _scale(scheme):
    rates = [abs(v) for v in scheme.Gamma.values()] + [abs(v) for v in scheme.pump.values()]
    return max(max(rates), 1.0)


def steady_state_linear(scheme, fields, z=0.0):
    L, s = liouvillian(scheme, fields, z)
    N = len(scheme.levels)
    A = L.copy()
    rhs = -s
    if scheme.closed:
        g = scheme.levels.index(GROUND) * (N + 1)
        A[g, :] = 0.0
        A[g, [i * (N + 1) for i in range(N)]] = 1.0
        rhs = rhs.copy()
        rhs[g] = 1.0
    x = np.linalg.solve(A, rhs)
    res = np.linalg.norm(L @ x + s) / (_scale(scheme) * max(np.linalg.norm(x), 1e-300))
    return x.reshape(N, N), float(res)


def steady_state_time(scheme, fields, z=0.0, tol=1e-10, max_doublings=80):
    """Relax the equations of motion in time with the exact propagator.

    The augmented generator ``[[L, s], [0, 0]]`` is exponentiated over a
    short step and squared repeatedly, so after ``k`` doublings the state
    has evolved for ``2**k`` steps from the field-free initial condition.
    """
    L, s = liouvillian(scheme, fields, z)
    N = len(scheme.levels)
    M = N * N
    A = np.zeros((M + 1, M + 1), dtype=complex)
    A[:M, :M] = L
    A[:M, M] = s
    x0 = np.zeros(M + 1, dtype=complex)
    x0[M] = 1.0
    if scheme.closed:
        g = scheme.levels.index(GROUND)
        x0[g * (N + 1)] = 1.0
    dt = 0.05 / max(np.max(np.abs(np.diag(L))), np.max(np.abs(L)), 1.0)
    E = expm(A * dt)
    prev = E @ x0
    herm = 0.0
    for _ in range(max_doublings):
        E = E @ E
        x = E @ x0
        rho = x[:M].reshape(N, N)
        herm = max(herm, float(np.max(np.abs(rho - rho.conj().T))))
        norm = max(np.linalg.norm(x[:M]), 1e-300)
        res = np.linalg.norm(L @ x[:M] + s) / (_scale(scheme) * norm)
        if np.linalg.norm(x - prev) <= tol * norm and res < tol:
            return rho, float(res), herm
        prev = x
    raise NoConvergence(f"time relaxation did not converge after {max_doublings} doublings")


def relax_to_steady_state(scheme, fields, z=0.0, tol=1e-10, method="linear"):
    """Steady state of the density-matrix equations at reduced velocity ``z``.

    Parameters
    ----------
    method : {'linear', 'time'}
        Direct solve of the stationary equations, or relaxation in time.
    """
    if method == "linear":
        rho, res = steady_state_linear(scheme, fields, z)
        if res > tol:
            raise NoConvergence(f"steady-state residual {res:.3e} exceeds tol {tol:.1e}")
    elif method == "time":
        rho, res, _ = steady_state_time(scheme, fields, z, tol=tol)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _result(scheme, fields, rho, res)


def weak_response(scheme, fields, z, weak, target, eps=None, conj=False):
    """First-order response of coherence ``target`` to the weak field ``weak``.

    The weak field amplitude is set to ``eps`` and ``i*eps`` and the
    coefficient multiplying ``G_weak`` (or its conjugate when ``conj``) is
    extracted by central differences.  All other weak fields must be off.
    ``eps`` defaults to 1e-6 of the largest strong Rabi frequency.

    Returns
    -------
    coef : complex
    richardson : float
        Relative change of ``coef`` when ``eps`` is halved.
    """
    trans = scheme.transitions
    a, b = trans[target]
    levels = scheme.levels
    ia, ib = levels.index(a), levels.index(b)
    strong = max((abs(f.rabi) for j, f in fields.items() if j != weak), default=0.0)
    base = strong if strong > 0 else scheme.transition_width(weak)
    eps = 1e-6 * base if eps is None else eps

    def coefficient(e):
        vals = {}
        for phase in (1.0, 1j):
            out = []
            for sign in (1.0, -1.0):
                f = fields.with_field(weak, rabi=sign * phase * e)
                rho, _ = steady_state_linear(scheme, f, z)
                out.append(rho[ia, ib])
            vals[phase] = (out[0] - out[1]) / (2 * e)
        # d rho = p G + c G*  ->  vals[1] = p + c, vals[i] = i (p - c)
        p = 0.5 * (vals[1.0] - 1j * vals[1j])
        c = 0.5 * (vals[1.0] + 1j * vals[1j])
        return c if conj else p

    c1 = coefficient(eps)
    c2 = coefficient(eps / 2)
    rich = abs(c1 - c2) / max(abs(c2), 1e-300)
    return c2, float(rich)
