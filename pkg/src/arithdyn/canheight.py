"""Canonical heights of algebraically stable maps of P^N with degree > 1.

With the defect ``B = h o f - delta h`` the normalized heights telescope:

    h(f^N P) / delta^N = h(P) + sum_{k<N} B(f^k P) / delta^(k+1).

The partial sums are therefore exact rewrites of ``h(f^N P)/delta^N``; the
limit exists once the ``B`` terms grow slower than ``delta^k``.  The reported
error bound uses the largest ``|B|`` seen on the second half of the orbit
and is an empirical quantity, not a proven constant.
"""

from __future__ import annotations

import enum
import numbers
from dataclasses import dataclass

from .degrees import Stability
from .errors import DeltaNotGreaterThanOne, IndeterminatePoint, NotStable, TooShort
from .numeric import log_defect
from .orbits import OrbitRecord, Termination, compute_orbit
from .projmap import DEFAULT_HEIGHT_CAP, ProjPoint, RationalMap

DEFAULT_REL_TOL = 1e-4
DEFAULT_DIVERGENCE_FLOOR = -1e6
_EPS = 2.0 ** -52


class CanonicalStatus(enum.Enum):
    CONVERGED = "Converged"
    DIVERGES_TO_MINUS_INFINITY = "DivergesToMinusInfinity"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class DefectSequence:
    B_values: tuple[float, ...]
    delta: float


def defect_sequence(orbit: OrbitRecord, delta) -> DefectSequence:
    """``B(f^k P) = h(f^(k+1) P) - delta h(f^k P)`` along a recorded orbit.

    For integer ``delta`` on P^N the difference is formed from the exact
    coordinates, so that identities such as ``B = 0`` for the squaring map
    survive at heights in the millions.
    """
    if orbit.length < 2:
        raise TooShort("defect sequence needs at least two orbit points")
    pts = orbit.points
    if isinstance(delta, numbers.Integral) and isinstance(pts[0], ProjPoint):
        d = int(delta)
        tops = [max(abs(x) for x in P.coords) for P in pts]
        B = [log_defect(tops[k + 1], tops[k], d) for k in range(len(pts) - 1)]
    else:
        h = orbit.h
        B = [h[k + 1] - delta * h[k] for k in range(len(h) - 1)]
    return DefectSequence(tuple(B), delta)


@dataclass(frozen=True)
class CanonicalHeightEstimate:
    """``partial_sums[N] = h(P) + sum_{k<N} B_k / delta^(k+1)``."""

    hhat: float
    partial_sums: tuple[float, ...]
    status: CanonicalStatus
    err_bound: float
    C_B_tail: float
    C_B: float
    positive_part: float
    negative_part: float
    delta: int


def _check_hypotheses(delta, stable) -> int:
    if not isinstance(delta, numbers.Integral):
        raise TypeError("delta must be the exact integer degree of a stable map of P^N")
    if delta <= 1:
        raise DeltaNotGreaterThanOne(f"canonical height needs delta > 1, got {delta}")
    ok = stable is True or stable is Stability.STABLE or stable == "Stable"
    if not ok:
        raise NotStable("canonical height needs an algebraically stable map")
    return int(delta)


def canonical_height(
    orbit: OrbitRecord,
    delta: int,
    stable=Stability.STABLE,
    rel_tol: float = DEFAULT_REL_TOL,
    floor: float = DEFAULT_DIVERGENCE_FLOOR,
) -> CanonicalHeightEstimate:
    """Canonical height of ``orbit.start`` from its recorded orbit.

    Status is ``Converged`` when the tail bound ``C_B_tail / (delta^N (delta-1))``
    is below ``rel_tol * max(1, |hhat|)``, ``DivergesToMinusInfinity`` when
    the partial sums drop below ``floor``, and ``Inconclusive`` otherwise.
    """
    d = _check_hypotheses(delta, stable)
    defect = defect_sequence(orbit, d)
    B = defect.B_values
    h0 = orbit.heights[0].h
    sums = [h0]
    pos = neg = 0.0
    for k, b in enumerate(B):
        term = b / float(d ** (k + 1))
        sums.append(sums[-1] + term)
        if term >= 0:
            pos += term
        else:
            neg -= term
    N = len(B)
    tail = B[N // 2:]
    c_tail = max(abs(b) for b in tail)
    c_all = max(abs(b) for b in B)
    err = c_tail / (float(d ** N) * (d - 1))
    hhat = sums[-1]
    if hhat < floor:
        status = CanonicalStatus.DIVERGES_TO_MINUS_INFINITY
    elif N >= 4 and err <= rel_tol * max(1.0, abs(hhat)):
        status = CanonicalStatus.CONVERGED
    else:
        status = CanonicalStatus.INCONCLUSIVE
    return CanonicalHeightEstimate(hhat, tuple(sums), status, err, c_tail, c_all, pos, neg, d)


def telescoping_residuals(orbit: OrbitRecord, est: CanonicalHeightEstimate) -> list[float]:
    """``|partial_sums[N] - h(f^N P)/delta^N| / max(1, h(f^N P)/delta^N)`` for each N."""
    out = []
    for N, (s, hv) in enumerate(zip(est.partial_sums, orbit.heights)):
        target = hv.h / float(est.delta ** N)
        out.append(abs(s - target) / max(1.0, abs(target)))
    return out


@dataclass(frozen=True)
class TransformCheck:
    residual: float
    bound: float
    hhat_P: CanonicalHeightEstimate
    hhat_fP: CanonicalHeightEstimate

    @property
    def ok(self) -> bool:
        return self.residual <= self.bound


def transform_check(
    f: RationalMap,
    P: ProjPoint,
    delta: int,
    N: int,
    stable=Stability.STABLE,
    height_cap: float = DEFAULT_HEIGHT_CAP,
) -> TransformCheck:
    """``|hhat(f(P)) - delta hhat(P)|`` with both heights taken from ``N`` steps."""
    d = _check_hypotheses(delta, stable)
    orbit = compute_orbit(f, P, N + 1, height_cap)
    if orbit.terminated is Termination.HIT_INDETERMINACY:
        raise IndeterminatePoint(f"orbit of {P} meets the indeterminacy locus at n={orbit.stop_index}")
    if orbit.length < N + 2:
        raise TooShort(f"orbit stopped after {orbit.length - 1} steps ({orbit.termination_label()})")
    head = OrbitRecord(P, orbit.points[: N + 1], orbit.heights[: N + 1], Termination.COMPLETED)
    shifted = OrbitRecord(orbit.points[1], orbit.points[1:], orbit.heights[1:], Termination.COMPLETED)
    a = canonical_height(head, d, stable)
    b = canonical_height(shifted, d, stable)
    residual = abs(b.hhat - d * a.hhat)
    # plus the rounding of the two float partial sums
    bound = b.err_bound + d * a.err_bound + 8 * _EPS * max(1.0, abs(b.hhat))
    return TransformCheck(residual, bound, a, b)
