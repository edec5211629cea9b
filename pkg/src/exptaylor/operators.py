"""The lambda-scaled derivative cascade applied to jets.

For nonzero complex ``lam`` the cascade starts at the identity and steps by

    next = (1/lam) * d/dx (current) - j * (current)        (j = 0, 1, ...)

so stage ``j`` applied to ``exp(m*lam*x)`` multiplies it by the falling
factorial ``m (m-1) ... (m-j+1)``; stages beyond ``m`` annihilate it.  The
same operator expands over plain derivatives with signed first-kind
Stirling numbers:

    stage N  =  sum_{m=1..N} s(N, m) * lam^(-m) * d^m/dx^m     (N >= 1)

Both forms are implemented; they must agree to rounding, which the test
suite uses as a cross-check.  In n dimensions the cascade factorizes per
axis and the Stirling form becomes a product over axes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .jet import Jet1D, JetND
from .stirling import StirlingTable


@dataclass(frozen=True)
class OperatorSequence:
    """Cascade values ``values[j]`` for stages ``j = 0 .. N`` at one point."""

    lam: complex
    center: float
    values: np.ndarray  # complex128, shape (N+1,)


@dataclass(frozen=True)
class OperatorField:
    """Cascade values per multi-index ``g`` with ``|g| < order`` at one point."""

    lam: complex
    center: tuple[float, ...]
    order: int
    values: dict[tuple[int, ...], complex]

    def value(self, gamma: tuple[int, ...]) -> complex:
        return self.values.get(tuple(gamma), 0j)


def _check_lam(lam: complex) -> complex:
    lam = complex(lam)
    if lam == 0:
        raise ValidationError("lam must be nonzero")
    return lam


def cascade_values(coeffs: np.ndarray, lam: complex, count: int) -> np.ndarray:
    """Stage values 0..count from normalized jet coefficients, batched.

    ``coeffs[..., j]`` is ``f^(j)(x)/j!``; the last axis must have length
    at least ``count + 1``.  Returns an array of shape ``(..., count+1)``
    whose entry ``[..., j]`` is the stage-``j`` cascade value at the jet's
    center.  This is the recursion path: each step differentiates the
    running jet (dropping one order) and subtracts ``j`` times it.
    """
    lam = _check_lam(lam)
    L = coeffs.shape[-1]
    if count < 0 or count > L - 1:
        raise ValidationError(f"need jet order >= {count}, have {L - 1}")
    out = np.empty(coeffs.shape[:-1] + (count + 1,), dtype=np.complex128)
    cur = np.asarray(coeffs, dtype=np.complex128)
    out[..., 0] = cur[..., 0]
    inv = 1.0 / lam
    for j in range(count):
        m = cur.shape[-1] - 1
        deriv = cur[..., 1:] * np.arange(1, m + 1)
        cur = inv * deriv - j * cur[..., :m]
        out[..., j + 1] = cur[..., 0]
    return out


def d_lambda_recursive(jet: Jet1D, lam: complex, count: int) -> OperatorSequence:
    """Cascade stages 0..count at the jet's center, by the defining recursion.

    Requires ``jet.order >= count``: every stage costs one derivative.
    """
    values = cascade_values(jet.coeffs, lam, count)
    return OperatorSequence(lam=complex(lam), center=jet.center, values=values)


def d_lambda_stirling(jet: Jet1D, table: StirlingTable, lam: complex, count: int) -> OperatorSequence:
    """Cascade stages 0..count via the signed-Stirling expansion.

    Stage ``N >= 1`` is ``sum_m s(N, m) lam^(-m) m! c_m`` with ``c_m`` the
    normalized jet coefficients; stage 0 is the value itself.
    """
    lam = _check_lam(lam)
    if count < 0 or count > jet.order:
        raise ValidationError(f"need jet order >= {count}, have {jet.order}")
    if count > table.n_max:
        raise ValidationError(f"table only reaches n = {table.n_max}, need {count}")
    # m! * c_m = f^(m); precompute plain derivatives and powers of 1/lam
    derivs = [jet.coeffs[m] * math.factorial(m) for m in range(count + 1)]
    inv_pows = [complex(1.0)]
    for _ in range(count):
        inv_pows.append(inv_pows[-1] / lam)
    values = np.empty(count + 1, dtype=np.complex128)
    values[0] = jet.coeffs[0]
    for N in range(1, count + 1):
        row = table.row(N)
        acc = 0j
        for m in range(1, N + 1):
            acc += row[m] * inv_pows[m] * derivs[m]
        values[N] = acc
    return OperatorSequence(lam=lam, center=jet.center, values=values)


def d_lambda_nd(jet: JetND, table: StirlingTable, lam: complex, order: int) -> OperatorField:
    """Cascade values for every multi-index ``g`` with ``|g| < order``.

    The per-axis Stirling expansions multiply out:

        value(g) = sum over m <= g (m_i >= 1 wherever g_i >= 1) of
                   prod_i s(g_i, m_i) * lam^(-|m|) * m! * c_m

    with ``c_m`` the normalized jet coefficients, ``m!`` the product of
    per-axis factorials.  Requires ``jet.order >= order - 1``.
    """
    lam = _check_lam(lam)
    if order < 1:
        raise ValidationError(f"order must be >= 1, got {order}")
    if jet.order < order - 1:
        raise ValidationError(f"need jet order >= {order - 1}, have {jet.order}")
    if order - 1 > table.n_max:
        raise ValidationError(f"table only reaches n = {table.n_max}, need {order - 1}")
    from .seriesnd import multi_indices  # local import: seriesnd depends on this module

    values: dict[tuple[int, ...], complex] = {}
    for gamma in multi_indices(jet.dims, order):
        values[gamma] = complex(nd_stage_value(jet.coeffs, gamma, table, lam))
    return OperatorField(lam=lam, center=jet.center, order=order, values=values)


def nd_stage_value(coeffs: dict, gamma: tuple[int, ...], table: StirlingTable, lam: complex):
    """Stage value for one multi-index from normalized n-D jet coefficients.

    ``coeffs`` maps multi-indices to coefficients; values may be scalars or
    ndarrays over a batch of centers, and the result has the same shape.
    """
    ranges = [(0,) if g == 0 else tuple(range(1, g + 1)) for g in gamma]
    acc = 0j
    for m in _cartesian(ranges):
        c = coeffs.get(m)
        if c is None:
            continue
        weight = 1
        fact = 1
        for gi, mi in zip(gamma, m):
            if gi >= 1:
                weight *= table.value(gi, mi)
            fact *= math.factorial(mi)
        acc = acc + (weight * fact) * lam ** (-sum(m)) * c
    return acc


def _cartesian(ranges):
    if not ranges:
        yield ()
        return
    head, *tail = ranges
    for h in head:
        for rest in _cartesian(tail):
            yield (h,) + rest
