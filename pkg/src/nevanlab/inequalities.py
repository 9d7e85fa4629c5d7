"""Empirical slack harnesses for the classical growth inequalities.

Each check tabulates LHS and RHS of one inequality over a radial grid and
returns a SlackSeries (slack = rhs - lhs, normalized by T(r, g)).  The
little-o error terms of the underlying inequalities are not modeled; instead a
SlackPolicy tolerates small relative dips on a tail of the grid, and every
report carries the policy so the convention is visible, never silent.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

from .diffpoly import degree_d, diffpoly_expression, weight_theta
from .expressions import Const, NotNormalizableError, add, canonicalize, div, divisors, differentiate, print_expr
from .nevanlinna import FunctionData, RadialGrid, counting_N

_NORM_FLOOR = 1e-9


@dataclass(frozen=True)
class SlackPolicy:
    """Tolerance convention standing in for the dropped o(T) terms.

    A series passes when slack / T >= -epsilon on the grid tail except on at
    most max_exceptional of the tail radii.  The tail is the trailing
    tail_fraction of the grid.
    """

    epsilon: float = 0.05
    max_exceptional: float = 0.10
    tail_fraction: float = 0.60

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")
        if not 0.0 <= self.max_exceptional < 1.0:
            raise ValueError("max_exceptional must lie in [0, 1)")
        if not 0.0 < self.tail_fraction <= 1.0:
            raise ValueError("tail_fraction must lie in (0, 1]")

    def tail_start(self, count):
        return count - max(1, int(round(count * self.tail_fraction)))

    def to_json_dict(self):
        return {
            "epsilon": self.epsilon,
            "max_exceptional": self.max_exceptional,
            "tail_fraction": self.tail_fraction,
        }


def _normalized(slack, normalizer):
    return slack / max(normalizer, _NORM_FLOOR)


@dataclass(frozen=True)
class SlackSeries:
    """Per-radius (r, lhs, rhs, normalizer) records for one inequality."""

    name: str
    params: dict
    rows: tuple

    def __post_init__(self):
        rows = tuple(tuple(float(v) for v in row) for row in self.rows)
        if not rows:
            raise ValueError("empty slack series")
        for r, lhs, rhs, norm in rows:
            if not all(math.isfinite(v) for v in (r, lhs, rhs, norm)):
                raise ValueError(f"non-finite series entry at r = {r}")
        object.__setattr__(self, "rows", rows)

    @property
    def radii(self):
        return tuple(row[0] for row in self.rows)

    def slack(self, i):
        _, lhs, rhs, _ = self.rows[i]
        return rhs - lhs

    def normalized_slack(self, i):
        return _normalized(self.slack(i), self.rows[i][3])

    def to_csv_text(self):
        lines = ["r,lhs,rhs,slack,normalized_slack"]
        for i, (r, lhs, rhs, _) in enumerate(self.rows):
            lines.append(f"{r!r},{lhs!r},{rhs!r},{self.slack(i)!r},"
                         f"{self.normalized_slack(i)!r}")
        return "\n".join(lines) + "\n"

    def to_json_dict(self, verdict=None):
        payload = {
            "inequality": self.name,
            "params": self.params,
            "columns": ["r", "lhs", "rhs", "slack", "normalized_slack"],
            "rows": [[row[0], row[1], row[2], self.slack(i),
                      self.normalized_slack(i)]
                     for i, row in enumerate(self.rows)],
        }
        if verdict is not None:
            payload["verdict"] = verdict.to_json_dict()
        return payload

    def to_json_text(self, verdict=None):
        return json.dumps(self.to_json_dict(verdict), sort_keys=True, indent=2) + "\n"


@dataclass(frozen=True)
class Verdict:
    passed: bool
    worst_radius: float
    worst_normalized_slack: float
    exceptional_fraction: float
    tail_count: int
    policy: SlackPolicy

    def to_json_dict(self):
        return {
            "passed": self.passed,
            "worst_radius": self.worst_radius,
            "worst_normalized_slack": self.worst_normalized_slack,
            "exceptional_fraction": self.exceptional_fraction,
            "tail_count": self.tail_count,
            "policy": self.policy.to_json_dict(),
        }


def slack_verdict(series, policy=None):
    """Apply the tolerance policy to the tail of a slack series."""
    policy = policy if policy is not None else SlackPolicy()
    start = policy.tail_start(len(series.rows))
    tail = range(start, len(series.rows))
    worst_i = min(tail, key=series.normalized_slack)
    bad = sum(1 for i in tail if series.normalized_slack(i) < -policy.epsilon)
    fraction = bad / len(tail)
    return Verdict(
        passed=fraction <= policy.max_exceptional,
        worst_radius=series.rows[worst_i][0],
        worst_normalized_slack=series.normalized_slack(worst_i),
        exceptional_fraction=fraction,
        tail_count=len(tail),
        policy=policy,
    )


@dataclass(frozen=True)
class BoundednessVerdict:
    passed: bool
    head_max: float
    tail_max: float
    margin: float
    policy: SlackPolicy

    def to_json_dict(self):
        return {
            "passed": self.passed,
            "head_max": self.head_max,
            "tail_max": self.tail_max,
            "margin": self.margin,
            "policy": self.policy.to_json_dict(),
        }


def fmt_boundedness_verdict(series, policy=None, margin=1.0):
    """Bounded-difference proxy: the tail may not exceed the head by margin."""
    policy = policy if policy is not None else SlackPolicy()
    start = policy.tail_start(len(series.rows))
    start = max(1, start)
    head = [abs(series.slack(i)) for i in range(start)]
    tail = [abs(series.slack(i)) for i in range(start, len(series.rows))]
    if not tail:
        tail = head
    head_max = max(head)
    tail_max = max(tail)
    return BoundednessVerdict(tail_max <= head_max + margin, head_max,
                              tail_max, margin, policy)


def _ensure_nonconstant(data, what):
    c = data.canonical
    if c.num.degree == 0 and c.den.degree == 0 and c.expo.degree <= 0:
        raise ValueError(f"{what} must be nonconstant")


def _grid_or_default(grid):
    return grid if grid is not None else RadialGrid.geometric()


def check_log_derivative(f, k, grid=None, samples=None, policy=None):
    """Slack series for the smallness of m(r, f^(k)/f).

    lhs = m(r, f^(k)/f) and rhs = epsilon * T(r, f), so nonnegative slack
    means the proximity of the logarithmic derivative stays below the policy
    fraction of the characteristic.
    """
    if not isinstance(k, int) or k < 1:
        raise ValueError("k must be a positive integer")
    policy = policy if policy is not None else SlackPolicy()
    grid = _grid_or_default(grid)
    data = FunctionData(f)
    _ensure_nonconstant(data, "f")
    ratio = div(differentiate(f, k), f)
    lhs = FunctionData(ratio).proximity(grid.radii, samples)
    ts = data.characteristic(grid.radii, samples)
    rows = tuple((r, a, policy.epsilon * t, t)
                 for r, a, t in zip(grid.radii, lhs, ts))
    params = {"f": print_expr(data.expr), "k": k, "epsilon": policy.epsilon}
    return SlackSeries("logderiv", params, rows)


def check_fmt(f, a, grid=None, samples=None):
    """Difference series T(r, 1/(f-a)) vs T(r, f); bounded for every a."""
    grid = _grid_or_default(grid)
    data = FunctionData(f)
    _ensure_nonconstant(data, "f")
    a = complex(a)
    shifted = div(Const(1), add(f, Const(-a)))
    lhs = FunctionData(shifted).characteristic(grid.radii, samples)
    rhs = data.characteristic(grid.radii, samples)
    rows = tuple((r, x, y, y) for r, x, y in zip(grid.radii, lhs, rhs))
    params = {"f": print_expr(data.expr), "a": repr(a)}
    return SlackSeries("fmt", params, rows)


def _distinct(values):
    vals = [complex(v) for v in values]
    for i, v in enumerate(vals):
        for w in vals[i + 1:]:
            if v == w:
                raise ValueError(f"values must be distinct; {v} repeats")
    return vals


def check_smt(f, values, grid=None, samples=None):
    """Slack series for the defect-style bound at q >= 2 target values.

    lhs = (q - 1) T(r, f); rhs = truncated pole counting plus the truncated
    zero counting of f - a for each target a.
    """
    values = _distinct(values)
    if len(values) < 2:
        raise ValueError("need at least two target values")
    grid = _grid_or_default(grid)
    data = FunctionData(f)
    _ensure_nonconstant(data, "f")
    zero_divs = []
    for a in values:
        try:
            zero_divs.append(divisors(add(f, Const(-a)))[0])
        except NotNormalizableError as exc:
            raise NotNormalizableError(
                f"divisor extraction failed for f - ({a}): {exc}") from exc
    ts = data.characteristic(grid.radii, samples)
    q = len(values)
    rows = []
    for r, t in zip(grid.radii, ts):
        rhs = counting_N(data.poles, r, truncated=True)
        rhs += sum(counting_N(d, r, truncated=True) for d in zero_divs)
        rows.append((r, (q - 1) * t, rhs, t))
    params = {"f": print_expr(data.expr), "values": [repr(v) for v in values]}
    return SlackSeries("smt", params, rows)


def _poly_of_g(p, g, values):
    """Compose P with g and extract zero divisors of P - a for each a."""
    p_expr = diffpoly_expression(p, g)
    divs = []
    for j, a in enumerate(values):
        try:
            divs.append(divisors(add(p_expr, Const(-a)))[0])
        except NotNormalizableError as exc:
            raise NotNormalizableError(
                f"P - a_{j + 1} (a = {a}) is outside the normalizable class: "
                f"{exc}") from exc
    return divs


def _value_bound_series(name, g, p, values, grid, samples, num_coeff, den,
                        extra_params=None):
    # shared assembly: T(r,g) vs the weighted counting bound with
    # coefficients num_coeff/den and 1/den
    data = FunctionData(g)
    _ensure_nonconstant(data, "g")
    zeros_g = data.zeros
    divs = _poly_of_g(p, g, values)
    ts = data.characteristic(grid.radii, samples)
    rows = []
    for r, t in zip(grid.radii, ts):
        rhs = (num_coeff / den) * counting_N(zeros_g, r, truncated=True)
        rhs += sum(counting_N(d, r, truncated=True) for d in divs) / den
        rows.append((r, t, rhs, t))
    params = {
        "g": print_expr(data.expr),
        "P_degree": degree_d(p),
        "P_weight": weight_theta(p),
        "values": [repr(complex(v)) for v in values],
    }
    if extra_params:
        params.update(extra_params)
    return SlackSeries(name, params, tuple(rows))


def check_hinchliffe(g, P, grid=None, samples=None):
    """Single-value growth bound T <= (theta+1)/(d-1) Nbar(1/g) + Nbar(1/(P-1))/(d-1)."""
    d = degree_d(P)
    theta = weight_theta(P)
    if d < 2:
        raise ValueError("the bound needs degree d(P) >= 2")
    grid = _grid_or_default(grid)
    return _value_bound_series("hinchliffe", g, P, [1.0 + 0j], grid, samples,
                               float(theta + 1), float(d - 1))


def check_hinchliffe_multi(g, P, values, grid=None, samples=None, entire=False):
    """Multi-value growth bound on T(r, g) from the zeros of g and of P - a_j.

    Meromorphic variant: T <= (q theta + 1)/(q d - 1) Nbar(r, 1/g)
    + (1/(q d - 1)) sum_j Nbar(r, 1/(P - a_j)); the entire variant (pole-free
    g required) replaces both denominators by q d.
    """
    values = _distinct(values)
    if not values:
        raise ValueError("need at least one target value")
    for v in values:
        if v == 0:
            raise ValueError("target values must be nonzero")
    d = degree_d(P)
    theta = weight_theta(P)
    if d < 2:
        raise ValueError("the bound needs degree d(P) >= 2")
    q = len(values)
    den = float(q * d) if entire else float(q * d - 1)
    grid = _grid_or_default(grid)
    if entire:
        data = FunctionData(g)
        if not data.poles.is_empty:
            raise ValueError("the entire variant requires a pole-free g")
    name = "hinchliffe-multi-entire" if entire else "hinchliffe-multi"
    return _value_bound_series(name, g, P, values, grid, samples,
                               float(q * theta + 1), den,
                               extra_params={"entire": entire})
