"""Resonant four-wave mixing in the double-Lambda (Raman) configuration.

Transitions: 1 (l-g), 2 (n-g), 3 (n-m), 4 (l-m).  Two regimes are covered:

* ``fwm_cpt``: fields 1 and 2 strong (they share level g and can trap
  population in the l-n coherence), fields 3 and 4 weak.
* ``fwm_two_strong``: fields 1 and 3 strong, each perturbing its own pair
  of levels, fields 2 and 4 weak.

All third-order susceptibilities use ``K = 1``; with the rotating-frame
convention of :mod:`nie.oracle` they equal

    chi4 = d rho_lm / d G3^*  / (G1^* G2)       (CPT, generated at w1 - w2 + w3)
    chi3 = d rho_nm / d G4^*  / (G1 G2^*)       (CPT, generated at w4 - w1 + w2)
    chi4 = d rho_lm / d G2    / (G1^* G3^*)     (two strong, w1 - w2 + w3)
    chi2 = d rho_ng / d G4    / (G1^* G3^*)     (two strong, w1 - w4 + w3)

The generated-wave detuning is always the multiphoton combination of the
input detunings (exact phase matching), so for example ``d4`` uses
``Omega'_1 - Omega'_2 + Omega'_3`` regardless of the detuning stored on field 4.

Relaxation channels assumed by the closed forms: g -> l, g -> n, m -> l,
m -> n.  Level n does not decay to l within the open scheme.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import PopulationSet, as_output, denominator, zero_field_populations
from .errors import NormalizationUndefined, NotApplicable, UnsupportedScheme, ValidityWarning

_ALLOWED = {("g", "l"), ("g", "n"), ("m", "l"), ("m", "n")}
_CLOSED_ALLOWED = {("g", "n"), ("m", "n")}


def _check(scheme):
    if scheme.kind != "RamanFWM":
        raise UnsupportedScheme(f"FWM needs a RamanFWM scheme, got {scheme.kind}")
    allowed = _CLOSED_ALLOWED if scheme.closed else _ALLOWED
    for key, rate in scheme.gamma.items():
        if rate and key not in allowed:
            if scheme.closed and key[1] == "l":
                continue
            raise UnsupportedScheme(f"relaxation channel {key[0]}->{key[1]} is not covered")


@dataclass(frozen=True)
class FwmDenominators:
    P1: complex
    P2: complex
    P3: complex
    P4: complex
    P12: complex
    P32: complex
    P41: complex
    P43: complex
    d2: complex
    d3: complex
    d4: complex


def denominators(scheme, fields, z=0.0):
    """One-, two- and three-photon denominators at reduced velocity ``z``."""
    O1, O2, O3, O4 = (fields.shifted(j, z) for j in (1, 2, 3, 4))
    W = scheme.width
    return FwmDenominators(
        P1=denominator(W("l", "g"), O1),
        P2=denominator(W("n", "g"), O2),
        P3=denominator(W("n", "m"), O3),
        P4=denominator(W("l", "m"), O4),
        P12=denominator(W("l", "n"), O1 - O2),
        P32=denominator(W("g", "m"), O3 - O2),
        P41=denominator(W("g", "m"), O4 - O1),
        P43=denominator(W("l", "n"), O4 - O3),
        d2=denominator(W("n", "g"), O1 + O3 - O4),
        d3=denominator(W("n", "m"), O4 - O1 + O2),
        d4=denominator(W("l", "m"), O1 - O2 + O3),
    )


@dataclass(frozen=True)
class FwmResponse:
    """Output of one FWM evaluation at a single velocity.

    ``chi_t`` maps the generated field index to its third-order
    susceptibility (``{3, 4}`` in the CPT regime, ``{2, 4}`` with strong 1, 3).
    ``chi_abs`` holds the normalized linear susceptibilities of all four
    fields; ``dr`` is ``(dr1, dr2, dr3, dr4)``.
    """

    regime: str
    chi_t: dict
    chi_abs: dict
    populations: PopulationSet
    dr: tuple

    @property
    def chi4_t(self):
        return self.chi_t[4]

    @property
    def chi3_t(self):
        return self.chi_t.get(3)

    @property
    def chi2_t(self):
        return self.chi_t.get(2)


def _differences(p):
    return (p["l"] - p["g"], p["n"] - p["g"], p["n"] - p["m"], p["l"] - p["m"])


def _normalize(scheme, coherent, dn, normalized):
    out = {}
    for j, (value, P) in coherent.items():
        resp = scheme.transition_width(j) * value / P
        if normalized:
            if dn[j - 1] == 0:
                raise NormalizationUndefined(f"zero-field difference on transition {j} vanishes")
            resp = resp / dn[j - 1]
        out[j] = as_output(resp)
    return out


# ---------------------------------------------------------------------------
# CPT regime: strong 1, 2


@dataclass(frozen=True)
class CptFactors:
    g: tuple
    u: tuple
    q: tuple
    F: tuple
    sat1: float
    sat2: float
    a: tuple
    b: dict


def cpt_factors(scheme, fields, z=0.0, den=None):
    """Coupling factors, the F block and relaxation coefficients, strong 1 and 2."""
    _check(scheme)
    d = den or denominators(scheme, fields, z)
    c = np.conj
    A1, A2 = fields.intensity(1), fields.intensity(2)
    g = (
        A1 / (d.P41 * c(d.P1)),
        A1 / (c(d.P12) * d.P2),
        A1 / (c(d.P12) * c(d.P1)),
        A1 / (d.P41 * d.P4),
    )
    u = (
        A2 / (c(d.P12) * d.P2),
        A2 / (d.P12 * d.P1),
        A2 / (d.P32 * c(d.P2)),
        A2 / (d.P32 * d.P3),
    )
    q = (
        A1 / (d.P32 * d.d4),
        A2 / (d.P41 * d.d3),
        A1 / (d.P12 * d.d4),
        A2 / (c(d.P12) * d.d3),
    )
    G1w, G2w = scheme.width("l", "g"), scheme.width("n", "g")
    D = 1.0 + c(g[1]) + u[1]
    F = (
        (G1w / d.P1 * (1.0 + c(g[1])) / D).real,
        (G1w / d.P1 * c(u[0]) / D).real,
        (G2w / c(d.P2) * (1.0 + u[1]) / D).real,
        (G2w / c(d.P2) * c(g[2]) / D).real,
    )
    Gl, Gg, Gn = scheme.G("l"), scheme.G("g"), scheme.G("n")
    y1, y2 = scheme.g("g", "l"), scheme.g("g", "n")
    sat2 = 2.0 * A2 * (Gg + Gn - y2) / (Gg * Gn * G2w)
    n = zero_field_populations(scheme).n
    if not scheme.closed:
        sat1 = 2.0 * A1 * (Gg + Gl - y1) / (Gg * Gl * G1w)
        a = (
            1.0,
            Gn / Gl * (Gl - y1) / (Gg + Gn - y2),
            1.0,
            Gl / Gn * (Gn - y2) / (Gl + Gg - y1),
        )
        bg = (-Gl / (Gl + Gg - y1), Gn / (Gg + Gn - y2))
        b = {
            "g": bg,
            "n": (y2 / Gn * bg[0], -(Gg - y2) / (Gg + Gn - y2)),
            "l": ((Gg - y1) / (Gl + Gg - y1), y1 / Gl * bg[1]),
            "m": (0.0, 0.0),
        }
    else:
        sat1 = 4.0 * A1 / (Gg * G1w)
        dn1, dn2 = n["l"] - n["g"], n["n"] - n["g"]
        frac = (Gg - y2) / (Gg + Gn - y2)
        a = (
            0.5 * (1.0 + dn1 * (1.0 + y2 / Gn)),
            1.0 + dn1 - (1.0 + 2.0 * dn1) * frac,
            1.0 + dn2 * (1.0 - 2.0 * frac),
            0.5 * (1.0 - y2 / Gn + dn2 * (1.0 + y2 / Gn)),
        )
        b1 = (Gn + y2) / (2.0 * Gn)
        b2 = -(Gn - Gg + y2) / (Gg + Gn - y2)
        nn, ng = n["n"], n["g"]
        b = {
            "l": (b1 * n["l"], b2 * n["l"]),
            "m": (b1 * n["m"], b2 * n["m"]),
            "n": (0.5 * nn - (1.0 - nn) * y2 / (2.0 * Gn), (2.0 * nn - 1.0) * frac - nn),
            "g": (ng * b1 - 0.5, 1.0 - ng - (1.0 - 2.0 * ng) * frac),
        }
    return CptFactors(g=g, u=u, q=q, F=F, sat1=float(sat1), sat2=float(sat2), a=a, b=b)


def cpt_populations(scheme, factors):
    """Power-dependent occupancies in the CPT regime (weak fields ignored)."""
    n = zero_field_populations(scheme).n
    F1, F2, F3, F4 = factors.F
    a1, a2, a3, a4 = factors.a
    s1, s2 = factors.sat1, factors.sat2
    X1 = 1.0 + a1 * s1 * F1 - a2 * s2 * F4
    X2 = 1.0 + a3 * s2 * F3 - a4 * s1 * F2
    X3 = a2 * s2 * F3 - a1 * s1 * F2
    X4 = a4 * s1 * F1 - a3 * s2 * F4
    dn1, dn2 = n["l"] - n["g"], n["n"] - n["g"]
    det = X1 * X2 - X3 * X4
    dr1 = (dn1 * X2 - dn2 * X3) / det
    dr2 = (dn2 * X1 - dn1 * X4) / det
    r = {}
    for j in scheme.levels:
        b1, b2 = factors.b[j]
        r[j] = n[j] + dr2 * (b1 * s1 * F2 + b2 * s2 * F3) - dr1 * (b1 * s1 * F1 + b2 * s2 * F4)
    return PopulationSet(r=r, n=n)


def fwm_cpt(scheme, fields, z=0.0, normalized=True):
    """FWM susceptibilities with strong fields 1, 2 and weak fields 3, 4.

    Returns chi3 (generated at w4 - w1 + w2, input E4) and chi4 (generated at
    w1 - w2 + w3, input E3), plus the linear response of all four fields.
    """
    d = denominators(scheme, fields, z)
    f = cpt_factors(scheme, fields, z, d)
    pops = cpt_populations(scheme, f)
    dr1, dr2, dr3, dr4 = _differences(pops.r)
    c = np.conj
    g1, g2, g3, g4 = f.g
    u1, u2, u3, u4 = f.u
    q1, q2, q3, q4 = f.q
    R1 = ((1.0 + c(g2)) * dr1 - c(u1) * dr2) / (1.0 + c(g2) + u2)
    R2 = ((1.0 + c(u2)) * dr2 - g3 * dr1) / (1.0 + g2 + c(u2))
    R3 = (dr3 * (1.0 + q1) - u3 * c(R2) * (1.0 - q3) + q1 * u2 * R1) / (1.0 + q1 + u4)
    R4 = (dr4 * (1.0 + q2) - g1 * c(R1) * (1.0 - q4) + q2 * g2 * R2) / (1.0 + q2 + g4)
    chi3 = -1j / (d.d3 * (1.0 + q2)) * (
        c(R1) / c(d.P1) * (1.0 / d.P41 + 1.0 / c(d.P12))
        + R2 / (d.P2 * c(d.P12))
        + R4 / (d.P4 * d.P41)
    )
    chi4 = -1j / (d.d4 * (1.0 + q1)) * (
        R1 / (d.P1 * d.P12)
        + c(R2) / c(d.P2) * (1.0 / d.P32 + 1.0 / d.P12)
        + R3 / (d.P3 * d.P32)
    )
    dn = _differences(pops.n)
    chi_abs = _normalize(
        scheme, {1: (R1, d.P1), 2: (R2, d.P2), 3: (R3, d.P3), 4: (R4, d.P4)}, dn, normalized
    )
    return FwmResponse(
        regime="fwm_cpt",
        chi_t={3: as_output(chi3), 4: as_output(chi4)},
        chi_abs=chi_abs,
        populations=pops,
        dr=(dr1, dr2, dr3, dr4),
    )


# ---------------------------------------------------------------------------
# strong 1 and 3, each perturbing its own level pair


def two_strong_populations(scheme, fields, z=0.0, den=None):
    """Occupancies with strong fields on transitions 1 and 3 only."""
    _check(scheme)
    d = den or denominators(scheme, fields, z)
    n = zero_field_populations(scheme).n
    dn1, dn2, dn3, dn4 = _differences(n)
    A1, A3 = fields.intensity(1), fields.intensity(3)
    W1, W3 = scheme.width("l", "g"), scheme.width("n", "m")
    Gl, Gg, Gn, Gm = (scheme.G(x) for x in "lgnm")
    ygl, ygn = scheme.g("g", "l"), scheme.g("g", "n")
    yml, ymn = scheme.g("m", "l"), scheme.g("m", "n")
    lor1 = W1 ** 2 / abs(d.P1) ** 2
    lor3 = W3 ** 2 / abs(d.P3) ** 2
    k3 = 2.0 * (Gm + Gn - ymn) / (Gm * Gn * W3) * A3 * lor3
    if not scheme.closed:
        k1 = 2.0 * (Gl + Gg - ygl) / (Gl * Gg * W1) * A1 * lor1
        a1 = ygn * Gl / (Gn * (Gl + Gg - ygl))
        a2 = Gl * (Gn - ygn) / (Gn * (Gl + Gg - ygl))
        a3 = (Gg - ygl) / (Gl + Gg - ygl)
        b1 = yml * Gn / (Gl * (Gm + Gn - ymn))
        b2 = (Gm - ymn) / (Gm + Gn - ymn)
        b3 = Gn * (Gl - yml) / (Gl * (Gm + Gn - ymn))
        den_ = (1.0 + k1) * (1.0 + k3) - a1 * k1 * b1 * k3
        dr1 = ((1.0 + k3) * dn1 + b1 * k3 * dn3) / den_
        dr3 = ((1.0 + k1) * dn3 + a1 * k1 * dn1) / den_
        r = {
            "m": n["m"] + (1.0 - b2) * k3 * dr3,
            "g": n["g"] + (1.0 - a3) * k1 * dr1,
            "n": n["n"] - b2 * k3 * dr3 + a1 * k1 * dr1,
            "l": n["l"] - a3 * k1 * dr1 + b1 * k3 * dr3,
        }
    else:
        k1 = 2.0 * A1 / (W1 * Gg) * lor1
        bb = Gn / (Gm + Gn - ymn)
        src = dn3 * (1.0 + k1) + dn1 * ygn * k1 / Gn
        beta = (1.0 + k3) * (1.0 - dn3 + 2.0 * (n["l"] + n["m"]) * k1) + (1.0 + 2.0 * bb * k3) * src
        base = n["m"] * (1.0 + k3) * (1.0 + k1)
        r = {
            "l": n["l"] * (1.0 + k3) * (1.0 + k1) / beta,
            "g": (1.0 + k3) * (n["l"] * (1.0 + k1) - dn1) / beta,
            "n": (base + src * (1.0 + bb * k3)) / beta,
            "m": (base + src * bb * k3) / beta,
        }
    return PopulationSet(r=r, n=n)


def fwm_two_strong(scheme, fields, z=0.0, normalized=True):
    """FWM susceptibilities with strong fields 1, 3 and weak fields 2, 4.

    Returns chi2 (generated at w1 - w4 + w3, input E4) and chi4 (generated at
    w1 - w2 + w3, input E2).
    """
    d = denominators(scheme, fields, z)
    pops = two_strong_populations(scheme, fields, z, d)
    dr1, dr2, dr3, dr4 = _differences(pops.r)
    c = np.conj
    A1, A3 = fields.intensity(1), fields.intensity(3)
    g1 = A1 / (d.P41 * c(d.P1))
    g2 = A1 / (c(d.P12) * d.P2)
    g3 = A1 / (c(d.P12) * c(d.P1))
    g4 = A1 / (d.P41 * d.P4)
    v1 = A3 / (d.P43 * c(d.P3))
    v2 = A3 / (c(d.P32) * d.P2)
    v3 = A3 / (c(d.P32) * c(d.P3))
    v4 = A3 / (d.P43 * d.P4)
    v5 = A3 / (d.P41 * c(d.d2))
    g5 = A1 / (d.P43 * c(d.d2))
    v6 = A3 / (d.P43 * c(d.d2))
    g6 = A1 / (d.P41 * c(d.d2))
    v7 = A3 / (c(d.P12) * c(d.d4))
    g7 = A1 / (c(d.P32) * c(d.d4))
    v8 = A3 / (c(d.P32) * c(d.d4))
    g8 = A1 / (c(d.P12) * c(d.d4))
    R2 = (dr2 * (1 + g7 + v7) - v3 * (1 + v7 - g8) * dr3 - g3 * (1 + g7 - v8) * dr1) / (
        (1 + g2 + v2) + (g7 + g2 * (g7 - v8) + v7 + v2 * (v7 - g8))
    )
    R4 = (dr4 * (1 + v5 + g5) - g1 * (1 + g5 - v6) * dr1 - v1 * (1 + v5 - g6) * dr3) / (
        (1 + g4 + v4) + (v5 + v4 * (v5 - g6) + g5 + g4 * (g5 - v6))
    )
    chi2 = -1j / (d.d2 * (1 + c(v5) + c(g5))) * (
        dr1 / (d.P1 * c(d.P41)) + dr3 / (d.P3 * c(d.P43))
        + c(R4) / c(d.P4) * (1 / c(d.P41) + 1 / c(d.P43))
    )
    chi4 = -1j / (d.d4 * (1 + c(v7) + c(g7))) * (
        dr1 / (d.P1 * d.P12) + dr3 / (d.P3 * d.P32)
        + c(R2) / c(d.P2) * (1 / d.P12 + 1 / d.P32)
    )
    dn = _differences(pops.n)
    chi_abs = _normalize(
        scheme, {1: (dr1, d.P1), 2: (R2, d.P2), 3: (dr3, d.P3), 4: (R4, d.P4)}, dn, normalized
    )
    return FwmResponse(
        regime="fwm_two_strong",
        chi_t={2: as_output(chi2), 4: as_output(chi4)},
        chi_abs=chi_abs,
        populations=pops,
        dr=(dr1, dr2, dr3, dr4),
    )


# ---------------------------------------------------------------------------
# lowest order and its Doppler average


def perturbative_chi3(scheme, fields, z=0.0, process=4, populations=None):
    """Lowest-order Raman FWM susceptibility at velocity ``z`` (K = 1).

    ``process=4`` gives the wave generated at w1 - w2 + w3 and ``process=3``
    the one at w4 - w1 + w2.  ``populations`` overrides the zero-field
    occupancies (any mapping with keys l, g, n, m); the Maxwell weight is
    applied by the velocity average, not here.
    """
    n = populations if populations is not None else zero_field_populations(scheme).n
    dn1, dn2, dn3, dn4 = _differences(n)
    d = denominators(scheme, fields, z)
    c = np.conj
    if process == 4:
        return as_output(-1j / d.d4 * (
            (dn2 / c(d.P2) + dn3 / d.P3) / d.P32 + (dn2 / c(d.P2) + dn1 / d.P1) / d.P12
        ))
    if process == 3:
        return as_output(-1j / d.d3 * (
            dn1 / c(d.P1) * (1 / d.P41 + 1 / c(d.P12)) + dn2 / (d.P2 * c(d.P12)) + dn4 / (d.P4 * d.P41)
        ))
    raise ValueError("process must be 3 or 4")


def analytic_averaged_chi3(scheme, fields, N_g, N_n, form="residue"):
    """Doppler average of the lowest-order chi4 for ``Gamma << k vbar``.

    Only the terms with the excited-state difference ``N_g - N_n`` survive
    the velocity integral; closing the contour on the pole of ``1 / P2^*``
    at ``z0 = (Omega2 + i Gamma_ng) / k2`` gives

        2 i sqrt(pi) exp(-z0^2) (N_g - N_n) / k2 * (Pt12 + Pt32) / (dt4 Pt12 Pt32)

    with the effective widths ``Pt12 = Gt1 + i A1``, ``Pt32 = Gt3 + i A3``,
    ``Gt1 = Gamma_nl + (k1/k2 - 1) Gamma_ng``, ``Gt3 = Gamma_gm + (k3/k2 - 1) Gamma_ng``,
    ``A_j = Omega_j - k_j Omega_2 / k_2`` and
    ``dt4 = Gamma_ml + (k1/k2 + k3/k2 - 1) Gamma_ng + i (A1 + A3)``.

    ``form='compact'`` returns the compact form
    ``i sqrt(pi) exp(-(Omega2/k2)^2) (N_g - N_n) / (k2 Pt12 Pt32)``, which
    coincides only when ``Gamma_ml = Gamma_nl + Gamma_gm - Gamma_ng`` and drops
    a factor of two.

    Only co-propagating input waves are supported.  Warns with
    :class:`ValidityWarning` when any ``Gamma / |k vbar|`` of the
    three input transitions exceeds 0.1.
    """
    W = scheme.width
    f1, f2, f3 = fields.get(1), fields.get(2), fields.get(3)
    k1, k2, k3 = f1.k, f2.k, f3.k
    if not (k1 > 0 and k2 > 0 and k3 > 0):
        raise NotApplicable("the contour evaluation assumes co-propagating waves (k1, k2, k3 > 0)")
    ratio = max(W("l", "g") / abs(k1), W("n", "g") / abs(k2), W("n", "m") / abs(k3))
    if ratio > 0.1:
        warnings.warn(f"max Gamma/(k vbar) = {ratio:.3g} > 0.1", ValidityWarning, stacklevel=2)
    Gng = W("n", "g")
    A1 = f1.detuning - k1 * f2.detuning / k2
    A3 = f3.detuning - k3 * f2.detuning / k2
    Pt12 = W("l", "n") + (k1 / k2 - 1.0) * Gng + 1j * A1
    Pt32 = W("g", "m") + (k3 / k2 - 1.0) * Gng + 1j * A3
    dN = N_g - N_n
    if form == "compact":
        return complex(1j * np.sqrt(np.pi) * np.exp(-(f2.detuning / k2) ** 2) * dN / (k2 * Pt12 * Pt32))
    if form != "residue":
        raise ValueError(f"unknown form {form!r}")
    z0 = (f2.detuning + 1j * Gng) / k2
    dt4 = W("l", "m") + (k1 / k2 + k3 / k2 - 1.0) * Gng + 1j * (A1 + A3)
    pref = 2j * np.sqrt(np.pi) * np.exp(-z0 ** 2) * dN / k2
    return complex(pref * (Pt12 + Pt32) / (dt4 * Pt12 * Pt32))


def conversion_efficiency(chi, alphas, N, E1, E2, k3, k4, z, full_delta_alpha=False):
    """Small-signal quantum conversion efficiency of E3 into E4.

    ``alphas`` is ``(alpha1, alpha2, alpha3, alpha4)``.  The default uses
    ``delta_alpha = alpha3 - alpha4``; ``full_delta_alpha`` switches to
    ``alpha1 + alpha2 + alpha3 - alpha4``.  ``delta_alpha -> 0`` is handled by
    its analytic limit, which reduces to the ``z**2`` law for short media.
    """
    if z < 0:
        raise ValueError("length must be non-negative")
    a1, a2, a3, a4 = alphas
    dalpha = (a1 + a2 + a3 - a4) if full_delta_alpha else (a3 - a4)
    half = 0.5 * dalpha
    grow = z if half == 0 else -np.expm1(-half * z) / half
    amp = abs(2.0 * np.pi * N * chi * E1 * np.conj(E2)) ** 2
    return float(k3 * k4 * amp * np.exp(-a4 * z) * grow ** 2)
