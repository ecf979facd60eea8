"""Catalogued solution families of the low-dimensional classification.

Each fixture freezes one family: dimension, curvature sign, the
constraint clauses its parameters must satisfy, the (lambda, mu) pair it
plants in the slope polynomial, the branch window it occupies and, where
a closed form exists, g(s) itself together with the implicit
antiderivative identity F(g) = log s + c.

reference_F closures return F already divided by the overall scale of
the identity, so F'(x) = x^(n-1) / H(x) holds exactly and cross checks
can compare F against the quadrature route up to an additive constant.
Families without a usable identity carry reference_F = None.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import ConstraintViolationError, NotClassifiedError
from .reduction import FunctionHandle

# Equality clauses are checked to this absolute slack; the catalogued
# parameter sets satisfy them to round-off.
_EQ_TOL = 1e-9


@dataclass(frozen=True)
class CaseFixture:
    """One solution family, with enough data to rebuild and verify it."""

    label: str
    n: int
    curv_factor: int  # R = curv_factor * n * (n + 1)
    param_names: tuple
    defaults: dict
    n_is_free: bool
    verdict: str
    kind: Optional[str]
    validate: Callable
    lambda_mu: Callable
    branch_range: Optional[Callable]
    closed_form: Optional[Callable]
    reference_F: Optional[Callable]

    def curvature(self, n=None) -> float:
        m = self.n if n is None else n
        return float(self.curv_factor * m * (m + 1))


def _check(label, ok, clause):
    if not ok:
        raise ConstraintViolationError(label, clause)


def _eq(value, target=0.0):
    return abs(value - target) <= _EQ_TOL


# ---------------------------------------------------------------------------
# closed forms for g(s)

def _g_linear(a):
    return FunctionHandle(
        value=lambda s: a * s,
        deriv=lambda s: a,
        second=lambda s: 0.0,
    )


def _g_affine(a, b):
    return FunctionHandle(
        value=lambda s: a * s + b,
        deriv=lambda s: a,
        second=lambda s: 0.0,
    )


def _g_round_sphere(a):
    # g = s / (s + a), the smooth positive-curvature profile
    return FunctionHandle(
        value=lambda s: s / (s + a),
        deriv=lambda s: a / (s + a) ** 2,
        second=lambda s: -2.0 * a / (s + a) ** 3,
    )


def _g_power_pole(a, k):
    # g = (k + 1)/2 - k a / (s^k + a), increasing from (1-k)/2 to (1+k)/2
    def value(s):
        return 0.5 * (k + 1.0) - k * a / (s**k + a)

    def deriv(s):
        return a * k * k * s ** (k - 1.0) / (s**k + a) ** 2

    def second(s):
        w = s**k + a
        return a * k * k * s ** (k - 2.0) * ((k - 1.0) * w - 2.0 * k * s**k) / w**3

    return FunctionHandle(value=value, deriv=deriv, second=second)


def _g_hyperbolic_sqrt(a, b):
    # g = a sqrt(s^2 + b^2)
    def value(s):
        return a * math.sqrt(s * s + b * b)

    def deriv(s):
        return a * s / math.sqrt(s * s + b * b)

    def second(s):
        return a * b * b / (s * s + b * b) ** 1.5

    return FunctionHandle(value=value, deriv=deriv, second=second)


def _g_unit_ball(_unused=None):
    # g = s / (1 - s) on (0, 1)
    return FunctionHandle(
        value=lambda s: s / (1.0 - s),
        deriv=lambda s: 1.0 / (1.0 - s) ** 2,
        second=lambda s: 2.0 / (1.0 - s) ** 3,
    )


def _g_ball_power(k):
    # g = -(k + 1)/2 + k / (1 - s^k) on (0, 1)
    def value(s):
        return -0.5 * (k + 1.0) + k / (1.0 - s**k)

    def deriv(s):
        return k * k * s ** (k - 1.0) / (1.0 - s**k) ** 2

    def second(s):
        w = 1.0 - s**k
        return k * k * s ** (k - 2.0) * ((k - 1.0) * w + 2.0 * k * s**k) / w**3

    return FunctionHandle(value=value, deriv=deriv, second=second)


# ---------------------------------------------------------------------------
# reference antiderivatives, one closure per distinct identity

def _F_log(p):
    return lambda x: math.log(x)


def _F_log_shift(p):
    b = p["b"]
    return lambda x: math.log(x - b)


def _F_two_log_ratio(p):
    al, be = p["alpha"], p["beta"]
    d = be - al

    def F(x):
        return (be * math.log(x - be) - al * math.log(x - al)) / d

    return F


def _F_double_root_n2(p):
    al = p["alpha"]

    def F(x):
        return math.log(x - al) - al / (x - al)

    return F


def _F_round_sphere(p):
    def F(x):
        return math.log(x) - math.log(1.0 - x)

    return F


def _F_power_pole(p):
    k = p["k"]
    al = 0.5 * (1.0 - k)
    be = 0.5 * (1.0 + k)

    def F(x):
        return (math.log(x - al) - math.log(be - x)) / (be - al)

    return F


def _F_three_log_capped(p):
    # shared by the positive-curvature three-root families; the top root
    # bounds the window, so its log argument is (gamma - x)
    al, be, ga = p["alpha"], p["beta"], p["gamma"]
    scale = (be - al) * (ga - be) * (ga - al)

    def F(x):
        t = (
            -al * (ga - be) * math.log(x - al)
            + be * (ga - al) * math.log(x - be)
            - ga * (be - al) * math.log(ga - x)
        )
        return t / scale

    return F


def _F_double_below_simple(p):
    al, be = p["alpha"], p["beta"]
    scale = (be - al) ** 2

    def F(x):
        t = al * math.log(x - be) - al * math.log(al - x) + be * (be - al) / (x - be)
        return t / scale

    return F


def _F_sqrt_profile(p):
    c = p["a"] * p["b"]

    def F(x):
        return 0.5 * math.log(x * x - c * c)

    return F


def _F_three_log_open(p):
    # three simple roots with the window unbounded above
    al, be, ga = p["alpha"], p["beta"], p["gamma"]
    scale = (be - al) * (ga - be) * (ga - al)

    def F(x):
        t = (
            al * al * (ga - be) * math.log(x - al)
            - be * be * (ga - al) * math.log(x - be)
            + ga * ga * (be - al) * math.log(x - ga)
        )
        return t / scale

    return F


def _F_cubic_double(p):
    al = p["alpha"]

    def F(x):
        return (
            (5.0 / 9.0) * math.log(x - al)
            + (4.0 / 9.0) * math.log(x + 2.0 * al)
            - (al / 3.0) / (x - al)
        )

    return F


def _F_cubic_quad_pair(p):
    al, be, ga = p["alpha"], p["beta"], p["gamma"]
    scale = (al - be) ** 2 + ga * ga
    q = be * be + ga * ga

    def F(x):
        t = (
            al * al * math.log(x - al)
            + 0.5 * (q - 2.0 * al * be) * math.log((x - be) ** 2 + ga * ga)
            + ((be * q - al * be * be + al * ga * ga) / ga)
            * math.atan((x - be) / ga)
        )
        return t / scale

    return F


def _F_four_log(p):
    al, be, ga, de = p["alpha"], p["beta"], p["gamma"], p["delta"]

    def F(x):
        return (
            al * al / ((be - al) * (ga - al) * (de - al)) * math.log(x - al)
            - be * be / ((be - al) * (ga - be) * (de - be)) * math.log(x - be)
            + ga * ga / ((ga - al) * (ga - be) * (de - ga)) * math.log(x - ga)
            - de * de / ((de - al) * (de - be) * (de - ga)) * math.log(de - x)
        )

    return F


def _F_quartic_double(p):
    al, be, ga = p["alpha"], p["beta"], p["gamma"]

    def F(x):
        return (
            -ga * ga / ((ga - be) * (ga - al) ** 2) * math.log(ga - x)
            + be * be / ((ga - be) * (be - al) ** 2) * math.log(x - be)
            - (2.0 * al * be * ga - al * al * (be + ga))
            / ((ga - al) ** 2 * (be - al) ** 2)
            * math.log(x - al)
            + al * al / ((ga - al) * (be - al)) / (x - al)
        )

    return F


def _F_quartic_quad_pair(p):
    a1, a2, be, ga = p["alpha1"], p["alpha2"], p["beta"], p["gamma"]
    q = be * be + ga * ga
    d1 = (a1 - be) ** 2 + ga * ga
    d2 = (a2 - be) ** 2 + ga * ga

    def F(x):
        quad = math.log((x - be) ** 2 + ga * ga)
        at = math.atan((x - be) / ga)
        s1 = (
            a1 * a1 * math.log(x - a1)
            + 0.5 * (q - 2.0 * a1 * be) * quad
            + (((a1 + be) * q - 2.0 * a1 * be * be) / ga) * at
        )
        s2 = (
            a2 * a2 * math.log(a2 - x)
            + 0.5 * (q - 2.0 * a2 * be) * quad
            + (((a2 + be) * q - 2.0 * a2 * be * be) / ga) * at
        )
        return (s1 / d1 - s2 / d2) / (a2 - a1)

    return F


def _F_ball_smooth(p):
    def F(x):
        return math.log(x) - math.log(x + 1.0)

    return F


def _F_ball_power(p):
    k = p["k"]
    rp = 0.5 * (k - 1.0)
    rm = -0.5 * (k + 1.0)

    def F(x):
        return (math.log(x - rp) - math.log(x - rm)) / k

    return F


def _F_ball_three_log(p):
    al, be, ga = p["alpha"], p["beta"], p["gamma"]
    scale = (be - al) * (ga - al) * (ga - be)

    def F(x):
        t = (
            al * (ga - be) * math.log(x - al)
            - be * (ga - al) * math.log(x - be)
            + ga * (be - al) * math.log(x - ga)
        )
        return t / scale

    return F


def _F_ball_double(p):
    al, be = p["alpha"], p["beta"]
    scale = (be - al) ** 2

    def F(x):
        t = -al * math.log(x - be) + al * math.log(x - al) - be * (be - al) / (x - be)
        return t / scale

    return F


# ---------------------------------------------------------------------------
# validators and (lambda, mu) maps

def _v_smooth_flat(p):
    _check("1.1.1", p["a"] > 0, "a > 0")


def _v_smooth_round(p):
    _check("1.1.2", p["a"] > 0, "a > 0")


def _v_smooth_none(p):
    pass


def _v_121(p):
    _check("1.2.1", p["a"] > 0, "a > 0")


def _v_122(p):
    _check("1.2.2", p["a"] > 0, "a > 0")
    _check("1.2.2", p["b"] > 0, "b > 0")


def _v_123(p):
    al, be = p["alpha"], p["beta"]
    _check("1.2.3", al != 0, "alpha != 0")
    _check("1.2.3", be > 0, "beta > 0")
    _check("1.2.3", al < be, "alpha < beta")


def _v_124(p):
    _check("1.2.4", p["alpha"] > 0, "alpha > 0")


def _v_131(p):
    _check("1.3.1", p["a"] > 0, "a > 0")


def _v_132(p):
    _check("1.3.2", p["a"] > 0, "a > 0")
    _check("1.3.2", 0 < p["k"] < 1, "0 < k < 1")


def _v_133(p):
    al, be, ga = p["alpha"], p["beta"], p["gamma"]
    _check("1.3.3", al != 0, "alpha != 0")
    _check("1.3.3", be > 0, "beta > 0")
    _check("1.3.3", al < be < ga, "alpha < beta < gamma")
    _check("1.3.3", _eq(al + be + ga, 1.0), "alpha + beta + gamma = 1")


def _v_134(p):
    al, be = p["alpha"], p["beta"]
    _check("1.3.4", 0 < be < al, "0 < beta < alpha")
    _check("1.3.4", _eq(al + 2.0 * be, 1.0), "alpha + 2 beta = 1")


def _v_141(p):
    _check("1.4.1", p["a"] > 0, "a > 0")


def _v_142(p):
    _check("1.4.2", p["a"] > 0, "a > 0")
    _check("1.4.2", p["b"] > 0, "b > 0")


def _v_143(p):
    al, be, ga = p["alpha"], p["beta"], p["gamma"]
    _check("1.4.3", al < 0, "alpha < 0")
    _check("1.4.3", be != 0, "beta != 0")
    _check("1.4.3", ga > 0, "gamma > 0")
    _check("1.4.3", al < be < ga, "alpha < beta < gamma")
    _check("1.4.3", _eq(al + be + ga, 0.0), "alpha + beta + gamma = 0")


def _v_144(p):
    _check("1.4.4", p["alpha"] < 0, "alpha < 0")


def _v_145(p):
    _check("1.4.5", p["alpha"] > 0, "alpha > 0")


def _v_146(p):
    al, be, ga = p["alpha"], p["beta"], p["gamma"]
    _check("1.4.6", al > 0, "alpha > 0")
    _check("1.4.6", ga > 0, "gamma > 0")
    _check("1.4.6", _eq(al + 2.0 * be, 0.0), "alpha + 2 beta = 0")


def _v_151(p):
    _check("1.5.1", p["a"] > 0, "a > 0")


def _v_152(p):
    al, be, ga = p["alpha"], p["beta"], p["gamma"]
    _check("1.5.2", al < 0 < be and be < ga, "alpha < 0 < beta < gamma")
    _check("1.5.2", _eq(al + be + ga, 1.0), "alpha + beta + gamma = 1")
    _check(
        "1.5.2",
        _eq(al * be + be * ga + ga * al, 0.0),
        "alpha beta + beta gamma + gamma alpha = 0",
    )


def _v_153(p):
    al, be, ga, de = p["alpha"], p["beta"], p["gamma"], p["delta"]
    _check("1.5.3", al < be < ga < de, "alpha < beta < gamma < delta")
    _check("1.5.3", _eq(al + be + ga + de, 1.0), "alpha + beta + gamma + delta = 1")
    pair_sum = al * be + al * ga + al * de + be * ga + be * de + ga * de
    _check("1.5.3", _eq(pair_sum, 0.0), "sum of pairwise products = 0")
    _check("1.5.3", ga > 0, "gamma > 0")
    _check("1.5.3", al * be * de != 0, "alpha beta delta != 0")


def _i_quantity(al, be, ga):
    return al * al + 2.0 * al * be + 2.0 * al * ga + be * ga


def _v_154(p):
    al, be, ga = p["alpha"], p["beta"], p["gamma"]
    _check("1.5.4", _eq(2.0 * al + be + ga, 1.0), "2 alpha + beta + gamma = 1")
    _check(
        "1.5.4",
        _eq(_i_quantity(al, be, ga), 0.0),
        "alpha^2 + 2 alpha beta + 2 alpha gamma + beta gamma = 0",
    )
    _check("1.5.4", al < 0 < be and be < ga, "alpha < 0 < beta < gamma")


def _v_155(p):
    al, be, ga = p["alpha"], p["beta"], p["gamma"]
    _check("1.5.5", _eq(2.0 * al + be + ga, 1.0), "2 alpha + beta + gamma = 1")
    _check(
        "1.5.5",
        _eq(_i_quantity(al, be, ga), 0.0),
        "alpha^2 + 2 alpha beta + 2 alpha gamma + beta gamma = 0",
    )
    _check("1.5.5", be < 0 < al and al < ga, "beta < 0 < alpha < gamma")


def _v_156(p):
    a1, a2, be, ga = p["alpha1"], p["alpha2"], p["beta"], p["gamma"]
    _check("1.5.6", 0 < a1 < a2, "0 < alpha1 < alpha2")
    _check("1.5.6", ga > 0, "gamma > 0")
    _check("1.5.6", _eq(a1 + a2 + 2.0 * be, 1.0), "alpha1 + alpha2 + 2 beta = 1")
    _check(
        "1.5.6",
        _eq(a1 * a2 + 2.0 * be * (a1 + a2) + be * be + ga * ga, 0.0),
        "alpha1 alpha2 + 2 beta (alpha1 + alpha2) + beta^2 + gamma^2 = 0",
    )


def _v_171(p):
    pass


def _v_172(p):
    _check("1.7.2", p["k"] > 1, "k > 1")


def _v_173(p):
    al, be, ga = p["alpha"], p["beta"], p["gamma"]
    _check("1.7.3", _eq(al + be + ga, -1.0), "alpha + beta + gamma = -1")
    _check("1.7.3", al < be < ga, "alpha < beta < gamma")
    _check("1.7.3", ga > 0, "gamma > 0")


def _v_174(p):
    al, be = p["alpha"], p["beta"]
    _check("1.7.4", al < 0, "alpha < 0")
    _check("1.7.4", be > 0, "beta > 0")
    _check("1.7.4", _eq(al + 2.0 * be, -1.0), "alpha + 2 beta = -1")


def _v_175(p):
    al, be = p["alpha"], p["beta"]
    _check("1.7.5", al > 0, "alpha > 0")
    _check("1.7.5", be < 0, "beta < 0")
    _check("1.7.5", _eq(al + 2.0 * be, -1.0), "alpha + 2 beta = -1")


def _v_176(p):
    al, ga = p["alpha"], p["gamma"]
    _check("1.7.6", al > 0, "alpha > 0")
    _check("1.7.6", ga > 0, "gamma > 0")
    _check("1.7.6", _eq(al + 2.0 * p["beta"], -1.0), "alpha + 2 beta = -1")


def _lm_zero(p):
    return 0.0, 0.0


def _lm_122(p):
    return -p["b"], 0.0


def _lm_two_roots(p):
    al, be = p["alpha"], p["beta"]
    return -(al + be), al * be


def _lm_124(p):
    al = p["alpha"]
    return -2.0 * al, al * al


def _lm_132(p):
    k = p["k"]
    return -0.25 * (1.0 - k * k), 0.0


def _lm_133(p):
    al, be, ga = p["alpha"], p["beta"], p["gamma"]
    return -(al * be + be * ga + ga * al), al * be * ga


def _lm_134(p):
    al, be = p["alpha"], p["beta"]
    return -(2.0 * al * be + be * be), al * be * be


def _lm_142(p):
    c = p["a"] * p["b"]
    return -c * c, 0.0


def _lm_143(p):
    al, be, ga = p["alpha"], p["beta"], p["gamma"]
    return al * be + be * ga + ga * al, -al * be * ga


def _lm_cubic_double(p):
    al = p["alpha"]
    return -3.0 * al * al, 2.0 * al**3


def _lm_146(p):
    al, be, ga = p["alpha"], p["beta"], p["gamma"]
    q = be * be + ga * ga
    return q + 2.0 * al * be, -al * q


def _lm_152(p):
    al, be, ga = p["alpha"], p["beta"], p["gamma"]
    return al * be * ga, 0.0


def _lm_153(p):
    al, be, ga, de = p["alpha"], p["beta"], p["gamma"], p["delta"]
    e3 = al * be * ga + al * be * de + al * ga * de + be * ga * de
    return e3, -al * be * ga * de


def _lm_15_double(p):
    al, be, ga = p["alpha"], p["beta"], p["gamma"]
    e3 = al * al * (be + ga) + 2.0 * al * be * ga
    return e3, -al * al * be * ga


def _lm_156(p):
    a1, a2, be, ga = p["alpha1"], p["alpha2"], p["beta"], p["gamma"]
    q = be * be + ga * ga
    return 2.0 * be * a1 * a2 + (a1 + a2) * q, -a1 * a2 * q


def _lm_172(p):
    k = p["k"]
    return 0.25 * (1.0 - k * k), 0.0


def _lm_173(p):
    al, be, ga = p["alpha"], p["beta"], p["gamma"]
    return al * be + be * ga + ga * al, -al * be * ga


def _lm_17_double(p):
    al, be = p["alpha"], p["beta"]
    return 2.0 * al * be + be * be, -al * be * be


def _lm_176(p):
    al, be, ga = p["alpha"], p["beta"], p["gamma"]
    q = be * be + ga * ga
    return q + 2.0 * al * be, -al * q


# ---------------------------------------------------------------------------
# branch windows

_INF = math.inf


def _fix(
    label,
    n,
    curv_factor,
    param_names,
    defaults,
    verdict,
    kind,
    validate,
    lambda_mu,
    branch_range,
    closed_form=None,
    reference_F=None,
    n_is_free=False,
):
    return CaseFixture(
        label=label,
        n=n,
        curv_factor=curv_factor,
        param_names=tuple(param_names),
        defaults=dict(defaults),
        n_is_free=n_is_free,
        verdict=verdict,
        kind=kind,
        validate=validate,
        lambda_mu=lambda_mu,
        branch_range=branch_range,
        closed_form=closed_form,
        reference_F=reference_F,
    )


_SQ5 = math.sqrt(5.0)
_SQ6 = math.sqrt(6.0)
_SQ21 = math.sqrt(21.0)
_SQ3 = math.sqrt(3.0)

_ALL = (
    # smooth metrics on the whole of C^n, any dimension
    _fix(
        "1.1.1", 2, 0, ("a",), {"a": 1.0},
        "SmoothFamily", "SmoothOrigin",
        _v_smooth_flat, _lm_zero,
        lambda p: (0.0, _INF),
        closed_form=lambda p: _g_linear(p["a"]),
        reference_F=_F_log,
        n_is_free=True,
    ),
    _fix(
        "1.1.2", 2, 1, ("a",), {"a": 1.0},
        "SmoothFamily", "SmoothOrigin",
        _v_smooth_round, _lm_zero,
        lambda p: (0.0, 1.0),
        closed_form=lambda p: _g_round_sphere(p["a"]),
        reference_F=_F_round_sphere,
        n_is_free=True,
    ),
    _fix(
        "1.1.3", 2, -1, (), {},
        "Nonexistent", None,
        _v_smooth_none, _lm_zero,
        None,
        n_is_free=True,
    ),
    # n = 2, R = 0
    _fix(
        "1.2.1", 2, 0, ("a", "b"), {"a": 1.0, "b": 0.0},
        "SmoothFamily", "SmoothOrigin",
        _v_121, _lm_zero,
        lambda p: (0.0, _INF),
        closed_form=lambda p: _g_linear(p["a"]),
        reference_F=_F_log,
    ),
    _fix(
        "1.2.2", 2, 0, ("a", "b"), {"a": 1.0, "b": 1.0},
        "SingularFamilies", "FullRay",
        _v_122, _lm_122,
        lambda p: (p["b"], _INF),
        closed_form=lambda p: _g_affine(p["a"], p["b"]),
        reference_F=_F_log_shift,
    ),
    _fix(
        "1.2.3", 2, 0, ("alpha", "beta"), {"alpha": -1.0, "beta": 1.0},
        "SingularFamilies", "FullRay",
        _v_123, _lm_two_roots,
        lambda p: (p["beta"], _INF),
        reference_F=_F_two_log_ratio,
    ),
    _fix(
        "1.2.4", 2, 0, ("alpha",), {"alpha": 1.0},
        "SingularFamilies", "FullRay",
        _v_124, _lm_124,
        lambda p: (p["alpha"], _INF),
        reference_F=_F_double_root_n2,
    ),
    # n = 2, R = 6
    _fix(
        "1.3.1", 2, 1, ("a",), {"a": 1.0},
        "SmoothFamily", "SmoothOrigin",
        _v_131, _lm_zero,
        lambda p: (0.0, 1.0),
        closed_form=lambda p: _g_round_sphere(p["a"]),
        reference_F=_F_round_sphere,
    ),
    _fix(
        "1.3.2", 2, 1, ("a", "k"), {"a": 1.0, "k": 0.5},
        "SingularFamilies", "FullRay",
        _v_132, _lm_132,
        lambda p: (0.5 * (1.0 - p["k"]), 0.5 * (1.0 + p["k"])),
        closed_form=lambda p: _g_power_pole(p["a"], p["k"]),
        reference_F=_F_power_pole,
    ),
    _fix(
        "1.3.3", 2, 1, ("alpha", "beta", "gamma"),
        {"alpha": -1.0, "beta": 0.5, "gamma": 1.5},
        "SingularFamilies", "FullRay",
        _v_133, _lm_133,
        lambda p: (p["beta"], p["gamma"]),
        reference_F=_F_three_log_capped,
    ),
    _fix(
        "1.3.4", 2, 1, ("alpha", "beta"), {"alpha": 0.5, "beta": 0.25},
        "SingularFamilies", "FullRay",
        _v_134, _lm_134,
        lambda p: (p["beta"], p["alpha"]),
        reference_F=_F_double_below_simple,
    ),
    # n = 3, R = 0
    _fix(
        "1.4.1", 3, 0, ("a", "b"), {"a": 1.0, "b": 0.0},
        "SmoothFamily", "SmoothOrigin",
        _v_141, _lm_zero,
        lambda p: (0.0, _INF),
        closed_form=lambda p: _g_linear(p["a"]),
        reference_F=_F_log,
    ),
    _fix(
        "1.4.2", 3, 0, ("a", "b"), {"a": 1.0, "b": 1.0},
        "SingularFamilies", "FullRay",
        _v_142, _lm_142,
        lambda p: (p["a"] * p["b"], _INF),
        closed_form=lambda p: _g_hyperbolic_sqrt(p["a"], p["b"]),
        reference_F=_F_sqrt_profile,
    ),
    _fix(
        "1.4.3", 3, 0, ("alpha", "beta", "gamma"),
        {"alpha": -3.0, "beta": 1.0, "gamma": 2.0},
        "SingularFamilies", "FullRay",
        _v_143, _lm_143,
        lambda p: (p["gamma"], _INF),
        reference_F=_F_three_log_open,
    ),
    _fix(
        "1.4.4", 3, 0, ("alpha",), {"alpha": -1.0},
        "SingularFamilies", "FullRay",
        _v_144, _lm_cubic_double,
        lambda p: (-2.0 * p["alpha"], _INF),
        reference_F=_F_cubic_double,
    ),
    _fix(
        "1.4.5", 3, 0, ("alpha",), {"alpha": 1.0},
        "SingularFamilies", "FullRay",
        _v_145, _lm_cubic_double,
        lambda p: (p["alpha"], _INF),
        reference_F=_F_cubic_double,
    ),
    _fix(
        "1.4.6", 3, 0, ("alpha", "beta", "gamma"),
        {"alpha": 1.0, "beta": -0.5, "gamma": 1.0},
        "SingularFamilies", "FullRay",
        _v_146, _lm_146,
        lambda p: (p["alpha"], _INF),
        reference_F=_F_cubic_quad_pair,
    ),
    # n = 3, R = 12
    _fix(
        "1.5.1", 3, 1, ("a",), {"a": 1.0},
        "SmoothFamily", "SmoothOrigin",
        _v_151, _lm_zero,
        lambda p: (0.0, 1.0),
        closed_form=lambda p: _g_round_sphere(p["a"]),
        reference_F=_F_round_sphere,
    ),
    _fix(
        "1.5.2", 3, 1, ("alpha", "beta", "gamma"),
        {"alpha": 0.25 * (1.0 - _SQ5), "beta": 0.5, "gamma": 0.25 * (1.0 + _SQ5)},
        "SingularFamilies", "FullRay",
        _v_152, _lm_152,
        lambda p: (p["beta"], p["gamma"]),
        reference_F=_F_three_log_capped,
    ),
    _fix(
        "1.5.3", 3, 1, ("alpha", "beta", "gamma", "delta"),
        {
            "alpha": 0.125 * (1.0 - _SQ21),
            "beta": 0.25,
            "gamma": 0.5,
            "delta": 0.125 * (1.0 + _SQ21),
        },
        "SingularFamilies", "FullRay",
        _v_153, _lm_153,
        lambda p: (p["gamma"], p["delta"]),
        reference_F=_F_four_log,
    ),
    _fix(
        "1.5.4", 3, 1, ("alpha", "beta", "gamma"),
        {"alpha": -1.0 / 6.0, "beta": 0.5, "gamma": 5.0 / 6.0},
        "SingularFamilies", "FullRay",
        _v_154, _lm_15_double,
        lambda p: (p["beta"], p["gamma"]),
        reference_F=_F_quartic_double,
    ),
    _fix(
        "1.5.5", 3, 1, ("alpha", "beta", "gamma"),
        {"alpha": 0.25, "beta": 0.25 * (1.0 - _SQ6), "gamma": 0.25 * (1.0 + _SQ6)},
        "SingularFamilies", "FullRay",
        _v_155, _lm_15_double,
        lambda p: (p["alpha"], p["gamma"]),
        reference_F=_F_quartic_double,
    ),
    _fix(
        "1.5.6", 3, 1, ("alpha1", "alpha2", "beta", "gamma"),
        {"alpha1": 0.5, "alpha2": 1.0, "beta": -0.25, "gamma": 0.25 * _SQ3},
        "SingularFamilies", "FullRay",
        _v_156, _lm_156,
        lambda p: (p["alpha1"], p["alpha2"]),
        reference_F=_F_quartic_quad_pair,
    ),
    # n = 2, R = -6, metrics on the unit ball
    _fix(
        "1.7.1", 2, -1, (), {},
        "FiniteExtensionOnly", "FiniteExtension",
        _v_171, _lm_zero,
        lambda p: (0.0, _INF),
        closed_form=lambda p: _g_unit_ball(),
        reference_F=_F_ball_smooth,
    ),
    _fix(
        "1.7.2", 2, -1, ("k",), {"k": 2.0},
        "FiniteExtensionOnly", "FiniteExtension",
        _v_172, _lm_172,
        lambda p: (0.5 * (p["k"] - 1.0), _INF),
        closed_form=lambda p: _g_ball_power(p["k"]),
        reference_F=_F_ball_power,
    ),
    _fix(
        "1.7.3", 2, -1, ("alpha", "beta", "gamma"),
        {"alpha": -2.0, "beta": 0.2, "gamma": 0.8},
        "FiniteExtensionOnly", "FiniteExtension",
        _v_173, _lm_173,
        lambda p: (p["gamma"], _INF),
        reference_F=_F_ball_three_log,
    ),
    _fix(
        "1.7.4", 2, -1, ("alpha", "beta"), {"alpha": -3.0, "beta": 1.0},
        "FiniteExtensionOnly", "FiniteExtension",
        _v_174, _lm_17_double,
        lambda p: (p["beta"], _INF),
        reference_F=_F_ball_double,
    ),
    _fix(
        "1.7.5", 2, -1, ("alpha", "beta"), {"alpha": 1.0, "beta": -1.0},
        "FiniteExtensionOnly", "FiniteExtension",
        _v_175, _lm_17_double,
        lambda p: (p["alpha"], _INF),
        reference_F=_F_ball_double,
    ),
    _fix(
        "1.7.6", 2, -1, ("alpha", "beta", "gamma"),
        {"alpha": 1.0, "beta": -1.0, "gamma": 1.0},
        "FiniteExtensionOnly", "FiniteExtension",
        _v_176, _lm_176,
        lambda p: (p["alpha"], _INF),
        reference_F=None,
    ),
)

CASES = {f.label: f for f in _ALL}

# The smooth families repeat inside the fixed-dimension tables; prefer
# the dimension-specific label when one exists.
_SMOOTH_ALIAS = {
    ("1.1.1", 2): "1.2.1",
    ("1.1.1", 3): "1.4.1",
    ("1.1.2", 2): "1.3.1",
    ("1.1.2", 3): "1.5.1",
}

_FAMILY_PREFIX = {
    (2, "zero"): "1.2",
    (2, "pos"): "1.3",
    (3, "zero"): "1.4",
    (3, "pos"): "1.5",
    (2, "neg"): "1.7",
}


def get_case(label):
    try:
        return CASES[label]
    except KeyError:
        raise NotClassifiedError(f"no catalogued case with label {label!r}") from None


def canonical_label(label, n):
    """Dimension-specific alias of a smooth-family label, if one exists."""
    return _SMOOTH_ALIAS.get((label, n), label)


def labels_for(n, r_sign):
    """Labels catalogued for dimension n and curvature sign r_sign.

    r_sign is one of 'neg', 'zero', 'pos', or 'smooth'; the last selects
    the dimension-free smooth families.
    """
    if r_sign == "smooth":
        return tuple(sorted(l for l in CASES if l.startswith("1.1")))
    key = (n, r_sign)
    if key not in _FAMILY_PREFIX:
        raise NotClassifiedError(
            f"no catalogued families for n = {n} with curvature sign {r_sign!r}"
        )
    prefix = _FAMILY_PREFIX[key]
    return tuple(sorted(l for l in CASES if l.startswith(prefix)))


# ---------------------------------------------------------------------------
# pattern matching from a root profile to a catalogued label

def _match_n2_zero(roots):
    if len(roots) == 1:
        r, m = roots[0]
        if m == 2:
            return "1.2.1" if r == 0.0 else "1.2.4"
    if len(roots) == 2 and all(m == 1 for _, m in roots):
        return "1.2.2" if roots[0][0] == 0.0 else "1.2.3"
    return "unclassified"


def _match_n2_pos(roots):
    if len(roots) == 2 and roots[0] == (0.0, 2):
        return "1.3.1"
    if len(roots) == 3 and all(m == 1 for _, m in roots):
        return "1.3.2" if roots[0][0] == 0.0 else "1.3.3"
    if len(roots) == 2 and roots[0][1] == 2 and roots[1][1] == 1:
        return "1.3.4"
    return "unclassified"


def _match_n3_zero(roots, has_quad):
    if has_quad:
        return "1.4.6" if len(roots) == 1 and roots[0][1] == 1 else "unclassified"
    if roots == ((0.0, 3),):
        return "1.4.1"
    if len(roots) == 3 and all(m == 1 for _, m in roots):
        return "1.4.2" if any(r == 0.0 for r, _ in roots) else "1.4.3"
    if len(roots) == 2 and roots[0][1] == 2 and roots[1][1] == 1:
        return "1.4.4"
    if len(roots) == 2 and roots[0][1] == 1 and roots[1][1] == 2:
        return "1.4.5"
    return "unclassified"


def _match_n3_pos(roots, has_quad):
    if has_quad:
        return (
            "1.5.6"
            if len(roots) == 2 and all(m == 1 for _, m in roots)
            else "unclassified"
        )
    if len(roots) == 2 and roots[0] == (0.0, 3):
        return "1.5.1"
    if len(roots) == 4 and all(m == 1 for _, m in roots):
        return "1.5.2" if any(r == 0.0 for r, _ in roots) else "1.5.3"
    if len(roots) == 3:
        mults = tuple(m for _, m in roots)
        if mults == (2, 1, 1) and roots[0][0] < 0.0:
            return "1.5.4"
        if mults == (1, 2, 1) and roots[1][0] > 0.0:
            return "1.5.5"
    return "unclassified"


def _match_n2_neg(roots, has_quad):
    if has_quad:
        return "1.7.6" if len(roots) == 1 and roots[0][1] == 1 else "unclassified"
    if len(roots) == 2 and roots[1] == (0.0, 2):
        return "1.7.1"
    if len(roots) == 3 and all(m == 1 for _, m in roots):
        return "1.7.2" if any(r == 0.0 for r, _ in roots) else "1.7.3"
    if len(roots) == 2 and roots[0][1] == 1 and roots[1][1] == 2:
        return "1.7.4"
    if len(roots) == 2 and roots[0][1] == 2 and roots[1][1] == 1:
        return "1.7.5"
    return "unclassified"


def match_label(n, R, lam, mu, real_roots, has_quad, has_branch):
    """Label of the catalogued family a classified problem falls into.

    real_roots must be the zero-snapped root profile of the slope
    polynomial, sorted increasing. Returns None when the problem admits
    no branch, and 'unclassified' when branches exist but no catalogued
    family covers the combination.
    """
    if not has_branch:
        return None
    roots = tuple(real_roots)
    ncrit = float(n * (n + 1))
    if n == 2 and R == 0.0:
        return _match_n2_zero(roots)
    if n == 2 and R == ncrit:
        return _match_n2_pos(roots)
    if n == 3 and R == 0.0:
        return _match_n3_zero(roots, has_quad)
    if n == 3 and R == ncrit:
        return _match_n3_pos(roots, has_quad)
    if n == 2 and R == -ncrit:
        return _match_n2_neg(roots, has_quad)
    if lam == 0.0 and mu == 0.0:
        if R == 0.0:
            return "1.1.1"
        if R == ncrit:
            return "1.1.2"
    return "unclassified"
