"""Numerical oracles for the two square-root growth lemmas.

Lemma 0: if ``a_n <= a_(n-1) + C1 (sqrt(a_(n-1)) + sqrt(a_(n-1) + C2))`` and
``a_0 >= 1`` then ``a_n <= Ct n^2 a_0`` with ``Ct = max(C3^2/4, 1 + C3)`` and
``C3 = C1 (1 + sqrt(1 + C2))``.

Lemma sum: if ``a_n <= C (a_0 + sqrt(a_0) + ... + sqrt(a_(n-1)))`` the same
quadratic bound is claimed with ``Ct = max(C^2/4, 1 + C)``.  The equality
sequence has ``b_1 = C (a_0 + sqrt(a_0))``, which exceeds ``(1 + C) a_0``
whenever ``C > sqrt(a_0)``, so that constant is too small for
``1 < C < 8`` and small ``a_0``.  :func:`lemma_sum_repaired_constant`
returns ``max(C^2/4, 2C, 1 + C)``, for which the induction goes through.

All sequences are run in binary64.  Comparisons allow a relative slack of
``RATIO_SLACK`` so that equality cases such as ``b_1 = 2 = Ct`` survive
rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BoundViolated, NegativeConstant

PARAM_CAP = 1.0e6
N_MAX_CAP = 10_000
RATIO_SLACK = 1e-12


@dataclass(frozen=True)
class LemmaConstants:
    C1: float
    C2: float
    C3: float
    C_tilde: float


def _check_nonneg(**kw) -> None:
    for name, v in kw.items():
        if not v >= 0:
            raise NegativeConstant(f"{name} must be nonnegative, got {v}")
        if v > PARAM_CAP:
            raise ValueError(f"{name} = {v} exceeds the cap {PARAM_CAP:g}")


def _check_run(a0: float, n_max: int) -> None:
    if not a0 >= 1:
        raise ValueError(f"a0 must be at least 1, got {a0}")
    if a0 > PARAM_CAP:
        raise ValueError(f"a0 = {a0} exceeds the cap {PARAM_CAP:g}")
    if not 1 <= n_max <= N_MAX_CAP:
        raise ValueError(f"n_max must lie in [1, {N_MAX_CAP}]")


def lemma0_constants(C1: float, C2: float) -> LemmaConstants:
    """``C3 = C1 (1 + sqrt(1 + C2))`` and the minimal ``Ct = max(C3^2/4, 1 + C3)``.

    >>> lemma0_constants(2, 3)
    LemmaConstants(C1=2.0, C2=3.0, C3=6.0, C_tilde=9.0)
    """
    _check_nonneg(C1=C1, C2=C2)
    C1, C2 = float(C1), float(C2)
    C3 = C1 * (1.0 + math.sqrt(1.0 + C2))
    return LemmaConstants(C1, C2, C3, max(C3 * C3 / 4.0, 1.0 + C3))


def lemma_sum_constant(C: float) -> float:
    """The constant ``max(C^2/4, 1 + C)`` claimed for the summed hypothesis."""
    return max(C * C / 4.0, 1.0 + C)


def lemma_sum_repaired_constant(C: float) -> float:
    """``max(C^2/4, 2C, 1 + C)``, which also covers ``b_1 <= 2C a_0``."""
    return max(C * C / 4.0, 2.0 * C, 1.0 + C)


def lemma0_worst_sequence(a0: float, C1: float, C2: float, n_max: int) -> list[float]:
    """``b_0 = a0``, ``b_n = b_(n-1) + C1 (sqrt(b_(n-1)) + sqrt(b_(n-1) + C2))``."""
    _check_nonneg(C1=C1, C2=C2)
    _check_run(a0, n_max)
    b = [float(a0)]
    for _ in range(n_max):
        x = b[-1]
        b.append(x + C1 * (math.sqrt(x) + math.sqrt(x + C2)))
    return b


def lemma_sum_sequence(a0: float, C: float, n_max: int) -> list[float]:
    """``b_n = C (b_0 + sqrt(b_0) + ... + sqrt(b_(n-1)))`` via ``b_(n+1) = b_n + C sqrt(b_n)``."""
    if not C > 0:
        raise NegativeConstant(f"C must be positive, got {C}")
    _check_nonneg(C=C)
    _check_run(a0, n_max)
    b = [float(a0), C * (a0 + math.sqrt(a0))]
    for _ in range(n_max - 1):
        x = b[-1]
        b.append(x + C * math.sqrt(x))
    return b


@dataclass(frozen=True)
class LemmaReport:
    """``ratios[n-1] = b_n / (n^2 a0)``; ``violations`` lists the ``n`` with ratio above ``C_tilde``."""

    a0: float
    C_tilde: float
    ratios: tuple[float, ...] = field(repr=False)
    max_ratio: float
    argmax: int
    violations: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def _report(a0: float, b: list[float], C_tilde: float, strict: bool, label: str) -> LemmaReport:
    ratios = tuple(b[n] / (n * n * a0) for n in range(1, len(b)))
    limit = C_tilde * (1.0 + RATIO_SLACK)
    bad = tuple(n for n, r in enumerate(ratios, start=1) if r > limit)
    i = max(range(len(ratios)), key=ratios.__getitem__)
    rep = LemmaReport(a0, C_tilde, ratios, ratios[i], i + 1, bad)
    if strict and bad:
        n = bad[0]
        raise BoundViolated(
            f"{label}: b_{n} = {b[n]!r} exceeds {C_tilde!r} * {n}^2 * {a0!r}"
        )
    return rep


def verify_lemma0(a0: float, C1: float, C2: float, n_max: int, strict: bool = True) -> LemmaReport:
    consts = lemma0_constants(C1, C2)
    b = lemma0_worst_sequence(a0, C1, C2, n_max)
    return _report(a0, b, consts.C_tilde, strict, "lemma 0")


def verify_lemma_sum(
    a0: float, C: float, n_max: int, C_tilde: float | None = None, strict: bool = True
) -> LemmaReport:
    """Check the equality sequence against ``C_tilde`` (default: the claimed constant)."""
    b = lemma_sum_sequence(a0, C, n_max)
    if C_tilde is None:
        C_tilde = lemma_sum_constant(C)
    return _report(a0, b, C_tilde, strict, "summed lemma")


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepResult:
    trials: int
    n_max: int
    seed: int
    lemma0_violations: int
    lemma0_max_ratio_over_Ct: float
    lemma_sum_violations: int
    lemma_sum_max_ratio_over_Ct: float
    lemma_sum_repaired_violations: int
    lemma_sum_examples: tuple[tuple[float, float, int], ...]

    @property
    def ok(self) -> bool:
        return self.lemma0_violations == 0 and self.lemma_sum_violations == 0


def _vector_ratios(b0: np.ndarray, step, n_max: int, first=None) -> np.ndarray:
    # ratios[n-1, t] = b_n / (n^2 a0) for each trial t
    out = np.empty((n_max, b0.size))
    b = b0.copy()
    for n in range(1, n_max + 1):
        b = first(b) if (n == 1 and first is not None) else step(b)
        out[n - 1] = b / (n * n * b0)
    return out


def sweep(trials: int = 1000, n_max: int = 1000, seed: int = 0) -> SweepResult:
    """Random ``(a0, C1, C2)`` in ``[1,10] x [0,10]^2`` for lemma 0 and ``(a0, C1)`` for the summed lemma.

    The recurrences are the same floating point operations as in
    :func:`lemma0_worst_sequence` and :func:`lemma_sum_sequence`, run for all
    trials at once.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    _check_run(1.0, n_max)
    rng = np.random.default_rng(seed)
    a0 = rng.uniform(1.0, 10.0, trials)
    C1 = rng.uniform(0.0, 10.0, trials)
    C2 = rng.uniform(0.0, 10.0, trials)

    C3 = C1 * (1.0 + np.sqrt(1.0 + C2))
    Ct0 = np.maximum(C3 * C3 / 4.0, 1.0 + C3)
    r0 = _vector_ratios(a0, lambda b: b + C1 * (np.sqrt(b) + np.sqrt(b + C2)), n_max)
    over0 = (r0 / Ct0).max(axis=0)

    C = np.where(C1 > 0, C1, 1.0)
    Cts = np.maximum(C * C / 4.0, 1.0 + C)
    Ctr = np.maximum(Cts, 2.0 * C)
    rs = _vector_ratios(a0, lambda b: b + C * np.sqrt(b), n_max, first=lambda b: C * (b + np.sqrt(b)))
    over_s = (rs / Cts).max(axis=0)
    over_r = (rs / Ctr).max(axis=0)

    limit = 1.0 + RATIO_SLACK
    bad = np.flatnonzero(over_s > limit)
    examples = tuple(
        (float(a0[t]), float(C[t]), int(np.argmax(rs[:, t] > Cts[t] * limit)) + 1) for t in bad[:5]
    )
    return SweepResult(
        trials=trials,
        n_max=n_max,
        seed=seed,
        lemma0_violations=int((over0 > limit).sum()),
        lemma0_max_ratio_over_Ct=float(over0.max()),
        lemma_sum_violations=int(bad.size),
        lemma_sum_max_ratio_over_Ct=float(over_s.max()),
        lemma_sum_repaired_violations=int((over_r > limit).sum()),
        lemma_sum_examples=examples,
    )
