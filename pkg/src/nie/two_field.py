"""Two strong fields on adjacent transitions of a three-level atom.

Field 4 drives ``l - m``; the auxiliary field ``i`` sits on the adjacent
transition (V: i = 1 on l - g, Lambda: i = 3 on n - m, H: i = 2 on m - f).
The steady-state coherences are expressed through four coupling factors

    g1 = |G_i|^2 / (P4 P4i),   g2 = |G_i|^2 / (P_i^* P4i),
    u1 = |G_4|^2 / (P4 P4i),   u2 = |G_4|^2 / (P_i^* P4i),

with ``P_j = Gamma_j + i Omega'_j`` and ``P4i`` the two-photon denominator.
In the H ladder ``P_i`` and ``P_i^*`` trade places.  The population
differences follow from a 2x2 linear system whose coefficients depend only on
relaxation constants (and on the zero-field populations for closed schemes).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    GROUND,
    PopulationSet,
    as_output,
    denominator,
    solve_rate_equations,
    zero_field_populations,
)
from .errors import (
    DegenerateSystem,
    NoBracket,
    NormalizationUndefined,
    NotApplicable,
    UnsupportedScheme,
)

AUX = {"V": 1, "Lambda": 3, "H": 2}
SIGN = {"V": -1.0, "Lambda": -1.0, "H": +1.0}


def aux_index(scheme):
    try:
        return AUX[scheme.kind]
    except KeyError:
        raise UnsupportedScheme(f"{scheme.kind} is not a two-field scheme") from None


@dataclass(frozen=True)
class CouplingFactors:
    g1: complex
    g2: complex
    u1: complex
    u2: complex
    P4: complex
    Pi: complex
    P4i: complex


@dataclass(frozen=True)
class SchemeCoefficients:
    """Saturation parameters and population-coupling coefficients.

    Only the four independent coefficients are stored; the remaining ones
    follow from ``a14 = -a34``, ``a1i = -a3i``, ``a24 = -a44``, ``a2i = -a4i``.
    """

    kappa4: float
    kappa_i: float
    a14: float
    a3i: float
    a44: float
    a2i: float
    sign: float
    conj_rule: bool

    @property
    def a34(self):
        return -self.a14

    @property
    def a1i(self):
        return -self.a3i

    @property
    def a24(self):
        return -self.a44

    @property
    def a4i(self):
        return -self.a2i

    @property
    def table(self):
        return {
            "a14": self.a14, "a24": self.a24, "a34": self.a34, "a44": self.a44,
            "a1i": self.a1i, "a2i": self.a2i, "a3i": self.a3i, "a4i": self.a4i,
        }


@dataclass(frozen=True)
class TwoFieldResponse:
    chi4_norm: complex
    chii_norm: complex
    dr4: float
    dri: float
    X: tuple
    populations: PopulationSet
    psi4: complex
    psii: complex

    @property
    def alpha4(self):
        return self.chi4_norm.real

    @property
    def alphai(self):
        return self.chii_norm.real

    @property
    def refraction4(self):
        return self.chi4_norm.imag / 2


def _two_photon(scheme, fields, z):
    i = aux_index(scheme)
    if scheme.kind == "V":
        return denominator(scheme.width("m", "g"), fields.shifted(4, z) - fields.shifted(1, z))
    if scheme.kind == "Lambda":
        return denominator(scheme.width("l", "n"), fields.shifted(4, z) - fields.shifted(3, z))
    return denominator(scheme.width("l", "f"), fields.shifted(4, z) + fields.shifted(i, z))


def coupling_factors(scheme, fields, z=0.0):
    """Coupling factors g1, g2, u1, u2 at reduced velocity ``z``."""
    i = aux_index(scheme)
    P4 = denominator(scheme.transition_width(4), fields.shifted(4, z))
    Pi = denominator(scheme.transition_width(i), fields.shifted(i, z))
    P4i = _two_photon(scheme, fields, z)
    Pis = Pi if scheme.kind == "H" else np.conj(Pi)
    Gi2 = fields.intensity(i)
    G42 = fields.intensity(4)
    return CouplingFactors(
        g1=Gi2 / (P4 * P4i),
        g2=Gi2 / (Pis * P4i),
        u1=G42 / (P4 * P4i),
        u2=G42 / (Pis * P4i),
        P4=P4, Pi=Pi, P4i=P4i,
    )


def _open_kappa(G2, Ga, Gb, gab, width):
    return 2.0 * G2 * (Ga + Gb - gab) / (Ga * Gb * width)


def scheme_coefficients(scheme, fields):
    """Saturation parameters and a-coefficients for (kind, topology)."""
    i = aux_index(scheme)
    G = scheme.G
    G42, Gi2 = fields.intensity(4), fields.intensity(i)
    W4, Wi = scheme.transition_width(4), scheme.transition_width(i)
    Gl, Gm = G("l"), G("m")
    sign = SIGN[scheme.kind]
    conj = scheme.kind == "H"
    if scheme.closed:
        n = zero_field_populations(scheme).n
        dn4 = n["l"] - n["m"]
    if scheme.kind == "V":
        Gg = G("g")
        g4, g1 = scheme.g("m", "l"), scheme.g("g", "l")
        if not scheme.closed:
            kappa4 = _open_kappa(G42, Gl, Gm, g4, W4)
            kappai = _open_kappa(Gi2, Gg, Gl, g1, Wi)
            a14, a2i = 1.0, 1.0
            a3i = (Gg - g1) / (Gg + Gl - g1)
            a44 = (Gm - g4) / (Gl + Gm - g4)
        else:
            dn1 = n["l"] - n["g"]
            kappa4 = 4.0 * G42 / (Gm * W4)
            kappai = 4.0 * Gi2 / (Gg * Wi)
            a3i = 0.5 * dn4
            a44 = 0.5 * dn1
            a2i = 0.5 * (1.0 + dn1)
            a14 = 0.5 * (1.0 + dn4)
    elif scheme.kind == "Lambda":
        Gn = G("n")
        g4, g3 = scheme.g("m", "l"), scheme.g("m", "n")
        kappai = _open_kappa(Gi2, Gm, Gn, g3, Wi)
        if not scheme.closed:
            kappa4 = _open_kappa(G42, Gl, Gm, g4, W4)
            a14, a2i = 1.0, 1.0
            a3i = Gn * (Gl - g4) / (Gl * (Gm + Gn - g3))
            a44 = Gl * (Gn - g3) / (Gn * (Gm + Gl - g4))
        else:
            dn3 = n["n"] - n["m"]
            kappa4 = 4.0 * G42 / (Gm * W4)
            frac = (Gm - g3) / (Gm + Gn - g3)
            a3i = 1.0 + dn4 - (1.0 + 2.0 * dn4) * frac
            a44 = 0.5 * (1.0 - g3 / Gn + dn3 * (1.0 + g3 / Gn))
            a2i = 1.0 + dn3 * (Gn - Gm + g3) / (Gn + Gm - g3)
            a14 = 0.5 * (1.0 + dn4 * (1.0 + g3 / Gn))
    else:
        Gf = G("f")
        g4, g2 = scheme.g("m", "l"), scheme.g("f", "m")
        kappai = _open_kappa(Gi2, Gf, Gm, g2, Wi)
        if not scheme.closed:
            kappa4 = _open_kappa(G42, Gl, Gm, g4, W4)
            a14, a2i = 1.0, 1.0
            a3i = (Gl - g4) / Gl * (Gf - g2) / (Gm + Gf - g2)
            a44 = Gl / (Gl + Gm - g4)
        else:
            dn2 = n["m"] - n["f"]
            kappa4 = 4.0 * G42 / (Gm * W4)
            a3i = (1.0 + 2.0 * dn4) * (Gf - g2) / (Gm + Gf - g2) - dn4
            a44 = 0.5 * (1.0 - dn2)
            a14 = 0.5 * (1.0 + dn4)
            a2i = 1.0 + dn2 * (Gm - Gf + g2) / (Gm + Gf - g2)
    return SchemeCoefficients(
        kappa4=float(kappa4), kappa_i=float(kappai),
        a14=float(a14), a3i=float(a3i), a44=float(a44), a2i=float(a2i),
        sign=sign, conj_rule=conj,
    )


def _response_parts(scheme, factors):
    """Coefficients of (dr4, dri) in the unnormalized coherences psi4, psii.

    ``psi4 = c44 * dr4 + c4i * dri`` and ``psii = cii * dri + ci4 * dr4``;
    ``chi/chi0 = psi / dn``.
    """
    i = aux_index(scheme)
    f = factors
    s = SIGN[scheme.kind]
    G4 = scheme.transition_width(4)
    Gi = scheme.transition_width(i)
    D = 1.0 + f.g1 + f.u2
    c44 = G4 * (1.0 + f.u2) / (f.P4 * D)
    c4i = s * G4 * f.g2 / (f.P4 * D)
    if scheme.kind == "H":
        cii = Gi * (1.0 + f.g1) / (f.Pi * D)
        ci4 = s * Gi * f.u1 / (f.Pi * D)
    else:
        Dc = np.conj(D)
        cii = Gi * (1.0 + np.conj(f.g1)) / (f.Pi * Dc)
        ci4 = s * Gi * np.conj(f.u1) / (f.Pi * Dc)
    return c44, c4i, cii, ci4


def _zero_differences(scheme, n):
    i = aux_index(scheme)
    (a4, b4), (ai, bi) = scheme.transitions[4], scheme.transitions[i]
    return n[a4] - n[b4], n[ai] - n[bi]


def population_differences(coeffs, factors, scheme, fields, z=0.0):
    """Power-dependent differences ``dr4``, ``dri`` and the auxiliary X1..X4.

    Also returns per-level occupancies rebuilt from the rate balance with
    the induced transition rates implied by ``dr4`` and ``dri``.
    """
    c44, c4i, cii, ci4 = _response_parts(scheme, factors)
    s = coeffs.sign
    k4, ki = coeffs.kappa4, coeffs.kappa_i
    # Re parts of the saturation-weighted response, as in X1..X4
    A4, B4 = c44.real, (s * c4i).real
    Ai, Bi = cii.real, (s * ci4).real
    X1 = 1.0 + coeffs.a14 * k4 * A4 + coeffs.a1i * ki * Bi
    X2 = 1.0 + coeffs.a24 * k4 * B4 + coeffs.a2i * ki * Ai
    X3 = coeffs.a34 * k4 * B4 + coeffs.a3i * ki * Ai
    X4 = coeffs.a44 * k4 * A4 + coeffs.a4i * ki * Bi
    n = zero_field_populations(scheme).n
    dn4, dni = _zero_differences(scheme, n)
    det = X1 * X2 - X3 * X4
    if np.any(np.abs(det) < 1e-14 * np.maximum(np.abs(X1 * X2), np.abs(X3 * X4))):
        raise DegenerateSystem(f"X1 X2 - X3 X4 = {np.min(np.abs(det)):.3e}")
    dr4 = (dn4 * X2 + s * dni * X3) / det
    dri = (dni * X1 + s * dn4 * X4) / det
    r = _rebuild_populations(scheme, fields, dr4, dri, (c44, c4i, cii, ci4))
    return dr4, dri, (X1, X2, X3, X4), PopulationSet(r=r, n=n)


def induced_rates(scheme, fields, dr4, dri, parts):
    """Net lower -> upper transfer rates on transitions 4 and i."""
    i = aux_index(scheme)
    c44, c4i, cii, ci4 = parts
    psi4 = c44 * dr4 + c4i * dri
    psii = cii * dri + ci4 * dr4
    R4 = 2.0 * fields.intensity(4) / scheme.transition_width(4) * psi4.real
    Ri = 2.0 * fields.intensity(i) / scheme.transition_width(i) * psii.real
    return R4, Ri


def _rebuild_populations(scheme, fields, dr4, dri, parts):
    i = aux_index(scheme)
    R4, Ri = induced_rates(scheme, fields, dr4, dri, parts)
    transfer = {lv: 0.0 for lv in scheme.levels}
    for j, rate in ((4, R4), (i, Ri)):
        lo, up = scheme.transitions[j]
        transfer[lo] -= rate
        transfer[up] += rate
    if scheme.closed:
        transfer[GROUND] = 0.0
    return solve_rate_equations(scheme, transfer)


def susceptibilities(scheme, fields, z=0.0, normalized=True):
    """Normalized susceptibilities chi4/chi4^0 and chi_i/chi_i^0 at ``z``.

    ``Re`` of a normalized susceptibility is the absorption index relative
    to its zero-field resonant value; ``Im / 2`` is the relative resonant
    refractive index.  With ``normalized=False`` the Delta n division is
    skipped (needed when a zero-field difference vanishes).
    """
    factors = coupling_factors(scheme, fields, z)
    coeffs = scheme_coefficients(scheme, fields)
    dr4, dri, X, pops = population_differences(coeffs, factors, scheme, fields, z)
    c44, c4i, cii, ci4 = _response_parts(scheme, factors)
    psi4 = c44 * dr4 + c4i * dri
    psii = cii * dri + ci4 * dr4
    dn4, dni = _zero_differences(scheme, pops.n)
    if normalized:
        if dn4 == 0 or dni == 0:
            raise NormalizationUndefined("zero-field population difference vanishes")
        chi4, chii = psi4 / dn4, psii / dni
    else:
        chi4, chii = psi4, psii
    return TwoFieldResponse(
        chi4_norm=as_output(chi4), chii_norm=as_output(chii),
        dr4=as_output(dr4), dri=as_output(dri), X=X, populations=pops,
        psi4=as_output(psi4), psii=as_output(psii),
    )


def awi_classify(response, factors, scheme=None, resonant=None):
    """Gain and amplification-without-inversion flags.

    Gain means a negative absorption index.  AWI means gain on a transition
    whose saturated population difference is not inverted (``dr >= 0``).
    At resonant coupling of the V and Lambda schemes the analytic condition
    ``dr4/dri < g2/(1+u2)`` (and ``dri/dr4 < u1/(1+g1)``) is also required to
    agree with the computed gain; elsewhere only the raw flags are used.
    """
    if scheme is not None and scheme.kind == "H":
        raise NotApplicable("AWI in the H ladder requires adjacent inversion; use raw outputs")
    gain4 = response.chi4_norm.real < 0
    gaini = response.chii_norm.real < 0
    awi4 = gain4 and response.dr4 >= 0
    awii = gaini and response.dri >= 0
    if resonant is None:
        resonant = (
            abs(factors.P4.imag) <= 1e-9 * abs(factors.P4)
            and abs(factors.Pi.imag) <= 1e-9 * abs(factors.Pi)
            and abs(factors.P4i.imag) <= 1e-9 * abs(factors.P4i)
        )
    out = {"gain4": bool(gain4), "gain_i": bool(gaini), "awi4": bool(awi4), "awi_i": bool(awii)}
    if resonant:
        out["condition4"] = awi_condition(response.dr4, response.dri, factors)[0]
        out["condition_i"] = awi_condition(response.dr4, response.dri, factors)[1]
    return out


def awi_condition(dr4, dri, factors):
    """Resonant-coupling AWI inequalities for (transition 4, transition i).

    Written in product form so that they stay meaningful when a difference
    changes sign: ``dr4 (1 + u2) < dri g2`` and ``dri (1 + g1) < dr4 u1``.
    """
    g1, g2 = factors.g1.real, factors.g2.real
    u1, u2 = factors.u1.real, factors.u2.real
    return bool(dr4 * (1.0 + u2) < dri * g2), bool(dri * (1.0 + g1) < dr4 * u1)


def lasing_operating_point(gain_of_S4, T, S4_range, points=64, rtol=1e-6):
    """Largest S4 in ``S4_range`` at which the averaged gain equals the loss.

    ``gain_of_S4(S4)`` returns the averaged ``-alpha4/alpha04``; ``T`` is the
    per-pass cavity loss in the same units.  The range is scanned on a
    uniform grid to bracket the last downward crossing of ``gain - T``,
    which is then refined by bisection.

    Raises
    ------
    NoBracket
        If the gain never reaches ``T`` in the range.
    """
    if T < 0:
        raise ValueError("loss must be non-negative")
    lo, hi = S4_range
    grid = np.linspace(lo, hi, points)
    vals = np.array([gain_of_S4(s) - T for s in grid])
    if not np.any(vals >= 0):
        raise NoBracket(f"gain stays below loss T={T} on [{lo}, {hi}]")
    if vals[-1] >= 0:
        return float(hi)
    last = np.nonzero(vals >= 0)[0][-1]
    a, b = grid[last], grid[last + 1]
    fa = vals[last]
    while b - a > rtol * max(abs(b), abs(a), 1e-300):
        mid = 0.5 * (a + b)
        fm = gain_of_S4(mid) - T
        if fm >= 0:
            a, fa = mid, fm
        else:
            b = mid
    return float(0.5 * (a + b))
