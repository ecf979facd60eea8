"""Sign certification for two constrained symmetric forms.

The nonexistence arguments rest on strict negativity of

    J(a, b, c, d) = ab + ac + ad + bc + bd + cd   on  a+b+c+d = -1, a < 0 < b < c < d,
    I(a, b, c)    = a^2 + 2ab + 2ac + bc          on  2a+b+c = -1, b < 0 < c < a.

Both forms are evaluated exactly; the sign claims are certified by
sampling the constraint manifolds (log-uniform over the unbounded
directions, dependent variable from the linear constraint) and
sharpening every running sample maximum with a golden-section
coordinate ascent. Because each prefix maximum gets its own ascent,
the certified value can only grow with the sample count at a fixed
seed.
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["ConstraintSample", "I_value", "J_value", "certify_negative"]

_GOLD = (math.sqrt(5.0) - 1.0) / 2.0
_FLOOR = 1e-9
_SWEEPS = 100
_CHUNK = 65536


def J_value(alpha: float, beta: float, gamma: float, delta: float) -> float:
    """Sum of the six pairwise products of the four arguments."""
    return alpha * (beta + gamma + delta) + beta * (gamma + delta) + gamma * delta


def I_value(alpha: float, beta: float, gamma: float) -> float:
    """alpha^2 + 2 alpha beta + 2 alpha gamma + beta gamma."""
    return alpha * alpha + 2.0 * alpha * (beta + gamma) + beta * gamma


@dataclass(frozen=True)
class ConstraintSample:
    """A feasible point, its linear-constraint residuals, and its objective."""

    point: tuple
    constraint_residuals: tuple
    objective: float


def _setup(which: str):
    # free variables are the ordered positive coordinates; the remaining one
    # comes out of the linear constraint with the required sign automatically
    if which == "J":
        def from_free(y):
            b, c, d = y
            return (-1.0 - (b + c + d), b, c, d)

        def value(y):
            return J_value(*from_free(y))

        def residual(point):
            return sum(point) + 1.0

        return 3, from_free, value, residual
    if which == "I":
        def from_free(y):
            g, a = y
            return (a, -1.0 - 2.0 * a - g, g)

        def value(y):
            return I_value(*from_free(y))

        def residual(point):
            a, b, g = point
            return 2.0 * a + b + g + 1.0

        return 2, from_free, value, residual
    raise ValueError(f"unknown objective {which!r}, expected 'J' or 'I'")


def _golden(fn, a: float, b: float, iters: int = 34) -> float:
    c = b - _GOLD * (b - a)
    d = a + _GOLD * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLD * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLD * (b - a)
            fd = fn(d)
    return c if fc >= fd else d


def _ascend(value, y0):
    """Coordinate-wise golden-section ascent inside the ordered cone."""
    y = list(y0)
    for _ in range(_SWEEPS):
        moved = 0.0
        for i in range(len(y)):
            lo = y[i - 1] if i > 0 else _FLOOR
            hi = y[i + 1] if i + 1 < len(y) else y[i] * 8.0 + 8.0
            if not lo < hi:
                continue

            def slice_fn(t, i=i):
                trial = y[:i] + [t] + y[i + 1 :]
                return value(trial)

            t = _golden(slice_fn, lo, hi)
            if value(y[:i] + [t] + y[i + 1 :]) > value(y):
                moved = max(moved, abs(t - y[i]) / (1.0 + abs(y[i])))
                y[i] = t
        if moved < 1e-13:
            break
    return y, value(y)


def certify_negative(which: str, n_samples: int, seed: int):
    """Certified maximum of J or I over its constraint set, with a witness.

    Draws n_samples points (ordered positives log-uniform in [1e-3, 1e3],
    dependent coordinate from the linear constraint, degenerate orderings
    skipped) and runs the ascent from every running maximum. Returns
    (max_found, witness); the relevant sign facts assert max_found < 0.
    """
    assert n_samples >= 1
    k, from_free, value, residual = _setup(which)
    rng = np.random.default_rng(seed)
    best = -math.inf
    best_free = None
    done = 0
    while done < n_samples:
        m = min(_CHUNK, n_samples - done)
        draws = 10.0 ** rng.uniform(-3.0, 3.0, size=(m, k))
        draws.sort(axis=1)
        if which == "J":
            b, c, d = draws[:, 0], draws[:, 1], draws[:, 2]
            a = -1.0 - (b + c + d)
            vals = a * (b + c + d) + b * (c + d) + c * d
            ok = (b < c) & (c < d)
        else:
            g, a = draws[:, 0], draws[:, 1]
            be = -1.0 - 2.0 * a - g
            vals = a * a + 2.0 * a * (be + g) + be * g
            ok = g < a
        vals = np.where(ok, vals, -np.inf)
        prefix = np.maximum.accumulate(vals)
        for i in np.flatnonzero((vals == prefix) & (prefix > best)):
            v = float(vals[i])
            if v <= best:
                continue
            best = v
            best_free = [float(t) for t in draws[i]]
            cy, cv = _ascend(value, best_free)
            if cv > best:
                best = cv
                best_free = cy
        done += m
    assert best_free is not None
    point = from_free(best_free)
    return best, ConstraintSample(
        point=tuple(point),
        constraint_residuals=(residual(point),),
        objective=best,
    )
