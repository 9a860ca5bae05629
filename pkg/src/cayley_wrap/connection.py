"""Discrete principal bundles with Cayley-Dickson structure group.

A :class:`DiscreteBundle` is a cover of (a region of) ``R^d`` by charts, with
transition functions ``g_{k,j}`` and a connection 1-form ``w_k`` per chart.
Every field is a *vectorised* callable: it takes an ``(n, d)`` array of points
and returns ``(n, 2^r)`` values (transitions, gauges, potentials) or
``(n, d, 2^r)`` covectors (connection forms).  Sampled data read from files is
wrapped in :class:`SampledField`, which answers the same protocol through a
``cKDTree`` (nearest sample) or piecewise-linear interpolation.

Parallel transport along a segment ``p -> q`` is ``exp(-omega)`` with
``omega`` the trapezoidal (or midpoint) quadrature of ``w`` along the segment.
Holonomy is the ordered, left-to-right product of the segment transports, with
the transition ``g_{j,k}(p)`` inserted whenever the loop passes from chart
``j`` to chart ``k`` at ``p``.  When every factor lies in one complex subfield
the exponents are summed first and exponentiated once, which is the abelian
integral formula and is also the numerically sharper route.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, NamedTuple, Sequence

import numpy as np
from scipy.interpolate import LinearNDInterpolator
from scipy.spatial import cKDTree

from .algebra import (
    CdNumber,
    cd_ln,
    exp_arr,
    format_cd,
    inverse_arr,
    ln_arr,
    mul_arr,
    parse_cd,
)
from .config import Config, resolve
from .errors import BranchCutError, ContractViolation, CoverageError, DomainError

Field = Callable[[np.ndarray], np.ndarray]


def _points(x, dim: int | None = None) -> np.ndarray:
    arr = np.atleast_2d(np.asarray(x, dtype=float))
    if dim is not None and arr.shape[-1] != dim:
        raise ContractViolation(f"expected points in R^{dim}, got shape {arr.shape}")
    return arr


def _identity(n: int, dim: int) -> np.ndarray:
    out = np.zeros((n, dim))
    out[:, 0] = 1.0
    return out


# ---------------------------------------------------------------------------
# fields and charts


class SampledField:
    """A field known only at scattered sample points.

    ``method="nearest"`` returns the value of the nearest sample;
    ``method="linear"`` interpolates over a Delaunay triangulation (``d >= 2``)
    or along the axis (``d == 1``), falling back to the nearest sample outside
    the convex hull.  Queries farther than ``max_distance`` from every sample
    raise :class:`CoverageError`.
    """

    def __init__(self, points, values, method: str = "nearest",
                 max_distance: float = math.inf):
        self.points = _points(points)
        self.values = np.asarray(values, dtype=float)
        if len(self.values) != len(self.points) or len(self.points) == 0:
            raise ContractViolation("a sampled field needs one value per sample point")
        if method not in ("nearest", "linear"):
            raise ContractViolation(f"unknown interpolation method {method!r}")
        self.method = method
        self.max_distance = max_distance
        self._tree = cKDTree(self.points)
        self._flat = self.values.reshape(len(self.values), -1)
        self._interp = None
        if method == "linear" and len(self.points) > self.points.shape[1]:
            if self.points.shape[1] >= 2:
                self._interp = LinearNDInterpolator(self.points, self._flat)

    def __call__(self, pts) -> np.ndarray:
        pts = _points(pts, self.points.shape[1])
        dist, idx = self._tree.query(pts)
        far = dist > self.max_distance
        if np.any(far):
            raise CoverageError(f"{int(far.sum())} query point(s) lie outside the sampled "
                                f"region, first at {pts[far][0].tolist()}")
        out = self._flat[idx]
        if self.method == "linear":
            if self.points.shape[1] == 1:
                order = np.argsort(self.points[:, 0])
                xs = self.points[order, 0]
                out = np.stack([np.interp(pts[:, 0], xs, col[order])
                                for col in self._flat.T], axis=-1)
            elif self._interp is not None:
                lin = self._interp(pts)
                inside = ~np.isnan(lin).any(axis=1)
                out = np.where(inside[:, None], lin, out)
        return out.reshape((len(pts),) + self.values.shape[1:])


def constant_field(value, dim: int) -> Field:
    """A field that ignores its argument; ``value`` is a CdNumber or a covector list."""
    if isinstance(value, CdNumber):
        arr = value.coeffs
    else:
        arr = np.stack([v.coeffs for v in value])
    arr = np.asarray(arr, dtype=float)

    def f(pts):
        pts = _points(pts, dim)
        return np.broadcast_to(arr, (len(pts),) + arr.shape).copy()

    return f


@dataclass(frozen=True)
class Chart:
    """A chart domain with the sample points used to probe overlaps.

    ``contains`` maps an ``(n, d)`` point array to a boolean mask.  When it is
    omitted, membership means lying within ``radius`` of a sample point.
    """

    name: str
    points: np.ndarray
    contains: Callable[[np.ndarray], np.ndarray] | None = None
    radius: float = math.inf

    def __post_init__(self):
        object.__setattr__(self, "points", _points(self.points))

    def member(self, pts) -> np.ndarray:
        pts = _points(pts)
        if self.contains is not None:
            return np.asarray(self.contains(pts), dtype=bool)
        if math.isinf(self.radius):
            return np.ones(len(pts), dtype=bool)
        dist, _ = cKDTree(self.points).query(pts)
        return dist <= self.radius


@dataclass(frozen=True)
class Gauge:
    """A change of trivialisation ``f_k`` per chart.

    Without ``dlog`` the transport along ``p -> q`` becomes
    ``f(p) U f(q)^{-1}`` (for commuting values: ``w + dLn f`` with ``dLn f``
    the exact edge difference).  With ``dlog`` the 1-form ``dLn f`` is added
    to the connection and integrated by the same quadrature as ``w``; this is
    the only way to express gauges whose logarithm is multivalued around a
    loop (non-integer winding), which are not functions on the base.
    """

    f: Mapping[str, Field]
    dlog: Mapping[str, Field] | None = None


# ---------------------------------------------------------------------------
# bundle and loop


@dataclass(frozen=True)
class DiscreteBundle:
    level: int
    dim: int
    charts: tuple[Chart, ...]
    transitions: Mapping[tuple[str, str], Field]
    connection: Mapping[str, Field]
    potentials: Mapping[str, Field] | None = None
    gauges: tuple[Gauge, ...] = ()
    cocycle_defect: float = field(default=0.0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "charts", tuple(self.charts))
        names = [c.name for c in self.charts]
        if len(set(names)) != len(names):
            raise ContractViolation("chart names must be unique")
        for k in self.connection:
            if k not in names:
                raise ContractViolation(f"connection given for unknown chart {k!r}")
        for c in self.charts:
            if c.name not in self.connection:
                raise ContractViolation(f"chart {c.name!r} has no connection form")
        for (k, j) in self.transitions:
            if k not in names or j not in names or k == j:
                raise ContractViolation(f"bad transition key {(k, j)!r}")
        self._check_transitions()

    @property
    def components(self) -> int:
        return 1 << self.level

    def chart(self, name: str) -> Chart:
        for c in self.charts:
            if c.name == name:
                return c
        raise ContractViolation(f"unknown chart {name!r}")

    def overlap(self, *names: str) -> np.ndarray:
        """Sample points of the first chart that lie in every listed chart."""
        pts = self.chart(names[0]).points
        mask = np.ones(len(pts), dtype=bool)
        for n in names[1:]:
            mask &= self.chart(n).member(pts)
        return pts[mask]

    def transition(self, k: str, j: str) -> Field:
        """``g_{k,j}``; the reverse direction is the pointwise inverse."""
        D = self.components
        if k == j:
            return lambda pts: _identity(len(_points(pts)), D)
        if (k, j) in self.transitions:
            return self.transitions[(k, j)]
        if (j, k) in self.transitions:
            g = self.transitions[(j, k)]
            return lambda pts: inverse_arr(g(pts))
        raise CoverageError(f"no transition between charts {k!r} and {j!r}")

    def has_transition(self, k: str, j: str) -> bool:
        return (k, j) in self.transitions or (j, k) in self.transitions

    def _check_transitions(self, tol: float = 1e-9):
        D = self.components
        for (k, j), g in self.transitions.items():
            pts = self.overlap(k, j)
            if len(pts) and np.any(np.linalg.norm(g(pts), axis=-1) == 0.0):
                raise ContractViolation(f"transition g_({k},{j}) vanishes on the overlap")
        for (k, j) in self.transitions:
            if (j, k) in self.transitions:
                pts = self.overlap(k, j)
                if len(pts):
                    prod = mul_arr(self.transitions[(k, j)](pts), self.transitions[(j, k)](pts))
                    if np.max(np.abs(prod - _identity(len(pts), D))) > tol:
                        raise ContractViolation(f"g_({j},{k}) is not the inverse of g_({k},{j})")
        worst = 0.0
        names = [c.name for c in self.charts]
        for k, j, l in itertools.permutations(names, 3):
            if not (self.has_transition(k, j) and self.has_transition(j, l)
                    and self.has_transition(k, l)):
                continue
            pts = self.overlap(k, j, l)
            if not len(pts):
                continue
            lhs = mul_arr(self.transition(k, j)(pts), self.transition(j, l)(pts))
            rhs = self.transition(k, l)(pts)
            worst = max(worst, float(np.max(np.linalg.norm(lhs - rhs, axis=-1)
                                            / np.linalg.norm(rhs, axis=-1))))
        if self.level <= 2 and worst > tol:
            raise ContractViolation(f"transitions violate the cocycle condition by {worst:.3g}")
        object.__setattr__(self, "cocycle_defect", worst)


@dataclass(frozen=True)
class DiscreteLoop:
    """Closed polygon ``p_0, ..., p_N = p_0`` with one chart name per segment.

    ``period`` optionally identifies coordinates modulo a lattice of
    translations (one entry per axis, ``0`` for a non-periodic axis); closure is
    then checked modulo the period, which allows loops on circles and tori
    written in angle coordinates.
    """

    points: np.ndarray
    charts: tuple[str, ...]
    period: tuple[float, ...] | None = None

    def __post_init__(self):
        pts = _points(self.points)
        object.__setattr__(self, "points", pts)
        charts = (self.charts,) * (len(pts) - 1) if isinstance(self.charts, str) \
            else tuple(self.charts)
        object.__setattr__(self, "charts", charts)
        if len(pts) < 4:
            raise ContractViolation("a loop needs at least three segments")
        if len(charts) != len(pts) - 1:
            raise ContractViolation("one chart name is needed per segment")
        gap = pts[-1] - pts[0]
        if self.period is not None:
            per = np.asarray(self.period, dtype=float)
            if per.shape != (pts.shape[1],):
                raise ContractViolation("period needs one entry per coordinate")
            safe = np.where(per > 0, per, 1.0)
            gap = np.where(per > 0, gap - safe * np.round(gap / safe), gap)
        if np.max(np.abs(gap)) > 1e-12 * max(1.0, float(np.max(np.abs(pts)))):
            raise ContractViolation("loop is not closed")

    @property
    def n_segments(self) -> int:
        return len(self.charts)

    def reversed(self) -> DiscreteLoop:
        return DiscreteLoop(self.points[::-1], self.charts[::-1], self.period)

    def shifted(self, y) -> DiscreteLoop:
        return DiscreteLoop(self.points + np.asarray(y, dtype=float), self.charts, self.period)

    def refine(self, n_segments: int) -> DiscreteLoop:
        """Subdivide edges (keeping every vertex) to about ``n_segments`` segments."""
        lengths = np.linalg.norm(np.diff(self.points, axis=0), axis=1)
        total = lengths.sum()
        if total == 0.0:
            raise ContractViolation("cannot refine a loop of zero length")
        counts = np.maximum(1, np.round(lengths / total * n_segments).astype(int))
        pts, charts = [self.points[0]], []
        for i, m in enumerate(counts):
            a, b = self.points[i], self.points[i + 1]
            for t in range(1, m + 1):
                pts.append(a + (b - a) * (t / m))
                charts.append(self.charts[i])
            pts[-1] = b
        return DiscreteLoop(np.array(pts), tuple(charts), self.period)


def splice(loop: DiscreteLoop, at: int, path) -> DiscreteLoop:
    """Insert the excursion ``path`` and its reversal at vertex ``at``."""
    path = _points(path)
    chart = loop.charts[min(at, loop.n_segments - 1)]
    base = loop.points[at]
    excursion = np.vstack([base + path, (base + path)[-2::-1], base[None, :]])
    pts = np.vstack([loop.points[:at + 1], excursion, loop.points[at + 1:]])
    charts = (loop.charts[:at] + (chart,) * (2 * len(path))
              + loop.charts[at:])
    return DiscreteLoop(pts, charts, loop.period)


# ---------------------------------------------------------------------------
# defect forms


class DefectForms(NamedTuple):
    """``nu[(k, j)]`` and ``eta[(k, j, l)]`` as ``(points, values)`` pairs.

    ``residual`` is the largest pointwise violation of
    ``eta_{k,j,l} = nu_{k,l} - nu_{k,j} - nu_{j,l}``.
    """

    nu: dict
    eta: dict
    residual: float


def defect_forms(b: DiscreteBundle, config: Config | None = None) -> DefectForms:
    """Logarithm defects of the transitions on sampled overlaps.

    ``nu_{k,j} = Ln g_{k,j} - (w~_k - w~_j)`` when chart potentials ``w~`` are
    supplied, ``Ln g_{k,j}`` otherwise;
    ``eta_{k,j,l} = Ln g_{k,l} - Ln g_{k,j} - Ln g_{j,l}``.
    """
    cfg = resolve(config)
    names = [c.name for c in b.charts]
    nu, logs = {}, {}

    def log_at(k, j, pts):
        vals = b.transition(k, j)(pts)
        bad = np.linalg.norm(vals, axis=-1) <= cfg.zero_eps
        if np.any(bad):
            raise DomainError(f"transition g_({k},{j}) vanishes at {pts[bad][0].tolist()}")
        try:
            return ln_arr(vals, cfg.ln_branch_generator, cfg.small_angle,
                          strict=True, cut_tol=cfg.eq_tol)
        except BranchCutError as exc:
            where = pts[exc.location[0]]
            raise BranchCutError(f"Ln g_({k},{j}) is on its branch cut at {where.tolist()}",
                                 location=(k, j, tuple(where.tolist()))) from None

    for k, j in itertools.permutations(names, 2):
        if not b.has_transition(k, j):
            continue
        pts = b.overlap(k, j)
        if not len(pts):
            continue
        lg = log_at(k, j, pts)
        val = lg
        if b.potentials is not None:
            val = lg - (b.potentials[k](pts) - b.potentials[j](pts))
        nu[(k, j)] = (pts, val)
        logs[(k, j)] = lg

    eta, residual = {}, 0.0
    for k, j, l in itertools.permutations(names, 3):
        if not all(p in nu for p in ((k, j), (j, l), (k, l))):
            continue
        pts = b.overlap(k, j, l)
        if not len(pts):
            continue
        e = log_at(k, l, pts) - log_at(k, j, pts) - log_at(j, l, pts)
        n_kl = _nu_at(b, k, l, pts, cfg, log_at)
        n_kj = _nu_at(b, k, j, pts, cfg, log_at)
        n_jl = _nu_at(b, j, l, pts, cfg, log_at)
        eta[(k, j, l)] = (pts, e)
        residual = max(residual, float(np.max(np.abs(e - (n_kl - n_kj - n_jl)))))
    return DefectForms(nu, eta, residual)


def _nu_at(b, k, j, pts, cfg, log_at):
    val = log_at(k, j, pts)
    if b.potentials is not None:
        val = val - (b.potentials[k](pts) - b.potentials[j](pts))
    return val


# ---------------------------------------------------------------------------
# transport and holonomy


def _segment_exponents(field_: Field, p, q, quadrature: str) -> np.ndarray:
    dp = q - p
    if quadrature == "trapezoid":
        w = 0.5 * (field_(p) + field_(q))
    elif quadrature == "midpoint":
        w = field_(0.5 * (p + q))
    else:
        raise ContractViolation(f"unknown quadrature {quadrature!r}")
    return np.einsum("nd,ndk->nk", dp, w)


def _common_subfield(arrs: Sequence[np.ndarray], tol: float = 1e-13) -> bool:
    """True when all the given elements lie in one subfield R + R*u."""
    im = np.concatenate([a[:, 1:] for a in arrs if len(a)], axis=0)
    norms = np.linalg.norm(im, axis=1)
    scale = norms.max() if len(norms) else 0.0
    if scale == 0.0:
        return True
    u = im[np.argmax(norms)] / scale
    resid = im - np.outer(im @ u, u)
    return float(np.max(np.linalg.norm(resid, axis=1))) <= tol * max(scale, 1.0)


def _ordered_product(factors: np.ndarray) -> np.ndarray:
    """Left-to-right product; pairwise reduction where the algebra is associative."""
    D = factors.shape[1]
    if len(factors) == 0:
        return _identity(1, D)[0]
    if D <= 4:
        f = factors
        while len(f) > 1:
            if len(f) % 2:
                f = np.vstack([f, _identity(1, D)])
            f = mul_arr(f[0::2], f[1::2])
        return f[0]
    h = factors[0]
    for g in factors[1:]:
        h = mul_arr(h, g)
    return h


def loop_factors(loop: DiscreteLoop, b: DiscreteBundle, config: Config | None = None,
                 quadrature: str = "trapezoid"):
    """Ingredients of the holonomy product, vectorised over segments.

    Returns ``omega`` (segment exponents; the transport is ``exp(-omega)``),
    ``(left, right, conjugated)`` (gauge factors wrapping each transport as
    ``left @ exp(-omega) @ right``) and ``jumps``, a list of
    ``(segment index, transition value)`` inserted before that segment.
    """
    cfg = resolve(config)
    pts = loop.points
    if pts.shape[1] != b.dim:
        raise ContractViolation(f"loop lives in R^{pts.shape[1]}, bundle base is R^{b.dim}")
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    if seg.max() > cfg.holonomy_h_max:
        raise ContractViolation(f"segment length {seg.max():.3g} exceeds h_max = "
                                f"{cfg.holonomy_h_max}; refine the loop")
    charts = np.array(loop.charts)
    N, D = loop.n_segments, b.components
    omega = np.zeros((N, D))
    left = np.tile(_identity(1, D), (N, 1))
    right = np.tile(_identity(1, D), (N, 1))
    conjugated = False
    for name in dict.fromkeys(loop.charts):
        chart = b.chart(name)
        idx = np.flatnonzero(charts == name)
        p, q = pts[idx], pts[idx + 1]
        inside = chart.member(p) & chart.member(q)
        if not inside.all():
            bad = idx[~inside][0]
            raise CoverageError(f"segment {bad} leaves chart {name!r} near {pts[bad].tolist()}")
        omega[idx] = _segment_exponents(b.connection[name], p, q, quadrature)
        for gauge in b.gauges:
            if gauge.dlog is not None:
                omega[idx] += _segment_exponents(gauge.dlog[name], p, q, quadrature)
            else:
                fp, fq = gauge.f[name](p), gauge.f[name](q)
                left[idx] = mul_arr(fp, left[idx])
                right[idx] = mul_arr(right[idx], inverse_arr(fq))
                conjugated = True
    jumps = []
    for i in range(1, N):
        if loop.charts[i] != loop.charts[i - 1]:
            jumps.append((i, b.transition(loop.charts[i - 1], loop.charts[i])(pts[i:i + 1])[0]))
    if loop.charts[-1] != loop.charts[0]:
        jumps.append((N, b.transition(loop.charts[-1], loop.charts[0])(pts[N:N + 1])[0]))
    return omega, (left, right, conjugated), jumps


def holonomy(loop: DiscreteLoop, b: DiscreteBundle, config: Config | None = None,
             quadrature: str = "trapezoid") -> CdNumber:
    """Ordered product of segment transports ``exp(-omega_i)`` around ``loop``."""
    cfg = resolve(config)
    omega, (left, right, conjugated), jumps = loop_factors(loop, b, cfg, quadrature)
    jump_vals = [g[None, :] for _, g in jumps]
    extra = [left, right] if conjugated else []
    if _common_subfield([omega] + jump_vals + extra):
        h = exp_arr(-omega.sum(axis=0), cfg.small_angle)
        for g in jump_vals:
            h = mul_arr(h, g[0])
        if conjugated:
            h = mul_arr(mul_arr(h, _ordered_product(left)), _ordered_product(right))
        return CdNumber(b.level, h)
    transports = exp_arr(-omega, cfg.small_angle)
    if conjugated:
        transports = mul_arr(mul_arr(left, transports), right)
    pieces, start = [], 0
    for i, g in jumps:
        pieces.append(transports[start:i])
        pieces.append(g[None, :])
        start = i
    pieces.append(transports[start:])
    return CdNumber(b.level, _ordered_product(np.vstack(pieces)))


def gauge_transform(b: DiscreteBundle, f, dlog=None) -> DiscreteBundle:
    """Change trivialisation by ``f`` (a field, or a mapping chart -> field).

    Transitions become ``f_k g_{k,j} f_j^{-1}``.  The connection becomes
    ``w + dLn f``: as an exact edge difference when ``dlog`` is omitted, or as
    the supplied 1-form ``dlog`` (field or mapping) otherwise.
    """
    names = [c.name for c in b.charts]
    fmap = dict(f) if isinstance(f, Mapping) else {n: f for n in names}
    dmap = None
    if dlog is not None:
        dmap = dict(dlog) if isinstance(dlog, Mapping) else {n: dlog for n in names}
    for c in b.charts:
        if c.name not in fmap:
            raise ContractViolation(f"gauge missing on chart {c.name!r}")
        vals = fmap[c.name](c.points)
        if np.any(np.linalg.norm(vals, axis=-1) == 0.0):
            raise ContractViolation(f"gauge vanishes on chart {c.name!r}")

    def conj_transition(k, j, g):
        fk, fj = fmap[k], fmap[j]
        return lambda pts: mul_arr(mul_arr(fk(pts), g(pts)), inverse_arr(fj(pts)))

    transitions = {key: conj_transition(*key, g) for key, g in b.transitions.items()}
    return DiscreteBundle(b.level, b.dim, b.charts, transitions, b.connection,
                          b.potentials, b.gauges + (Gauge(fmap, dmap),))


# ---------------------------------------------------------------------------
# loop families and curvature


def gamma(v, w, u) -> np.ndarray:
    """The parallelogram loop ``gamma_{v,w}`` at parameters ``u`` in [0, 1]."""
    v, w = np.asarray(v, dtype=float), np.asarray(w, dtype=float)
    u = np.asarray(u, dtype=float)
    out = np.empty(u.shape + v.shape)
    a = u <= 0.25
    b_ = (u > 0.25) & (u <= 0.5)
    c = (u > 0.5) & (u <= 0.75)
    d = u > 0.75
    out[a] = 4 * u[a, None] * v
    out[b_] = v + 4 * (u[b_, None] - 0.25) * w
    out[c] = w - 4 * (u[c, None] - 0.75) * v
    out[d] = 4 * (1 - u[d, None]) * w
    return out


def nested_gamma(vectors, params, s: float = 1.0) -> np.ndarray:
    """``gamma_{w_0,...,w_q}(u_1, ..., u_q)`` by the recursive rule, ``q <= 2``."""
    vecs = [s * np.asarray(v, dtype=float) for v in vectors]
    q = len(vecs) - 1
    if not 1 <= q <= 2:
        raise ContractViolation("nested parametrisation is provided for q = 1, 2 only")
    params = np.atleast_2d(np.asarray(params, dtype=float))
    if params.shape[-1] != q:
        raise ContractViolation(f"need {q} parameters per point")
    first = gamma(vecs[0], vecs[1], params[:, 0])
    if q == 1:
        return first
    return np.stack([gamma(a, vecs[2], np.array([u]))[0]
                     for a, u in zip(first, params[:, 1])])


def _check_independent(vectors):
    m = np.array(vectors, dtype=float)
    if np.linalg.matrix_rank(m, tol=1e-12 * max(1.0, np.abs(m).max())) < len(m):
        raise ContractViolation("loop vectors must be linearly independent")


def loop_family(v, w, s: float = 1.0, n_per_edge: int = 64, y=None,
                chart: str = "0", period=None) -> DiscreteLoop:
    """The sampled loop ``y + gamma^s_{v,w}``; the four corners are sample points."""
    if not 0.0 < s <= 1.0:
        raise ContractViolation("scale s must lie in (0, 1]")
    if n_per_edge < 1:
        raise ContractViolation("need at least one sample per edge")
    _check_independent([v, w])
    u = np.arange(4 * n_per_edge + 1) / (4 * n_per_edge)
    pts = gamma(s * np.asarray(v, float), s * np.asarray(w, float), u)
    pts[-1] = 0.0
    if y is not None:
        pts = pts + np.asarray(y, dtype=float)
    return DiscreteLoop(pts, chart, period)


def nested_loop_family(w0, w1, w2, s: float = 1.0, n_outer: int = 8, n_per_edge: int = 16,
                       y=None, chart: str = "0") -> list[DiscreteLoop]:
    """Loops ``u_2 -> gamma_{gamma_{w0,w1}(u_1), w2}(u_2)`` for a grid of interior ``u_1``."""
    if not 0.0 < s <= 1.0:
        raise ContractViolation("scale s must lie in (0, 1]")
    _check_independent([w0, w1, w2])
    u2 = np.arange(4 * n_per_edge + 1) / (4 * n_per_edge)
    loops = []
    for u1 in (np.arange(1, n_outer) / n_outer):
        pts = nested_gamma([w0, w1, w2], np.column_stack([np.full_like(u2, u1), u2]), s)
        pts[-1] = 0.0
        if y is not None:
            pts = pts + np.asarray(y, dtype=float)
        loops.append(DiscreteLoop(pts, chart))
    return loops


def _chart_at(b: DiscreteBundle, y) -> str:
    for c in b.charts:
        if c.member(_points(y))[0]:
            return c.name
    raise CoverageError(f"no chart contains {np.asarray(y).tolist()}")


def curvature_estimate(b: DiscreteBundle, y, j: int, k: int, s: float,
                       n_per_edge: int = 64, chart: str | None = None,
                       config: Config | None = None) -> CdNumber:
    """``-Ln(hol(y + gamma^s_{e_j,e_k})) / s^p`` with ``p = curvature_exponent``.

    Swapping the axes reverses the plaquette; the estimator always integrates
    the ``j < k`` orientation and negates, so antisymmetry is exact.  If the holonomy falls within ``branch_margin`` of the logarithm's cut the
    plaquette is halved, up to ``branch_retries`` times.
    """
    cfg = resolve(config)
    y = np.asarray(y, dtype=float)
    if not (0 <= j < b.dim and 0 <= k < b.dim) or j == k:
        raise ContractViolation(f"axes must be distinct in 0..{b.dim - 1}")
    if j > k:
        # the (k, j) plaquette is the (j, k) one traversed backwards
        return -curvature_estimate(b, y, k, j, s, n_per_edge, chart, cfg)
    chart = chart or _chart_at(b, y)
    e = np.eye(b.dim)
    for _ in range(cfg.branch_retries + 1):
        loop = loop_family(e[j], e[k], s, n_per_edge, y, chart)
        h = holonomy(loop, b, cfg)
        try:
            L = cd_ln(h, cfg, strict=True, cut_tol=cfg.branch_margin)
        except BranchCutError:
            s /= 2.0
            continue
        return -L / s ** cfg.curvature_exponent
    raise BranchCutError(f"holonomy stays on the Ln branch cut at y={y.tolist()}, "
                         f"axes ({j},{k})", location=(tuple(y), j, k, s))


def curvature_extrapolated(b: DiscreteBundle, y, j: int, k: int, s: float,
                           n_per_edge: int = 64, chart: str | None = None,
                           config: Config | None = None) -> CdNumber:
    """Two-point Richardson extrapolation ``2 E(s/2) - E(s)``."""
    coarse = curvature_estimate(b, y, j, k, s, n_per_edge, chart, config)
    fine = curvature_estimate(b, y, j, k, s / 2, n_per_edge, chart, config)
    return 2 * fine - coarse


def curvature_form(b: DiscreteBundle, y, s: float, n_per_edge: int = 64,
                   extrapolate: bool = False, chart: str | None = None,
                   config: Config | None = None) -> np.ndarray:
    """Array ``K[j, k, :]`` of plaquette components; antisymmetric by construction."""
    est = curvature_extrapolated if extrapolate else curvature_estimate
    K = np.zeros((b.dim, b.dim, b.components))
    for j, k in itertools.combinations(range(b.dim), 2):
        K[j, k] = est(b, y, j, k, s, n_per_edge, chart, config).coeffs
        K[k, j] = -K[j, k]
    return K


def exterior_derivative(form: Field, y, h: float = 1e-5) -> np.ndarray:
    """``(dw)_{jk} = d_j w_k - d_k w_j`` by central differences (an oracle)."""
    y = np.asarray(y, dtype=float)
    d = len(y)
    grads = []
    for a in range(d):
        e = np.zeros(d)
        e[a] = h
        grads.append((form((y + e)[None, :])[0] - form((y - e)[None, :])[0]) / (2 * h))
    grads = np.array(grads)                       # grads[a, k] = d_a w_k
    return grads - grads.transpose(1, 0, 2)


# ---------------------------------------------------------------------------
# file formats


def _split_rows(text: str):
    section, header, rows = None, {}, {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            rows.setdefault(section, [])
        elif section is None:
            key, sep, value = line.partition(":")
            if not sep:
                raise ContractViolation(f"expected 'key: value', got {line!r}")
            header[key.strip()] = value.strip()
        else:
            rows[section].append([part.strip() for part in line.split(";", 2)])
    return header, rows


def _coords(text: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in text.split(",")])
    except ValueError as exc:
        raise ContractViolation(f"bad coordinates {text!r}") from exc


def parse_bundle(text: str) -> DiscreteBundle:
    """Read the sectioned bundle format.

    Header lines ``level:``, ``dim:``, optional ``interpolation:`` (nearest or
    linear) and ``cover_radius:``; then sections ``[cover]`` (``chart; coords``),
    ``[transitions]`` (``k,j; coords; value``), ``[connection]``
    (``chart; coords; c_1 | ... | c_d``) and optional ``[potentials]``.
    """
    header, rows = _split_rows(text)
    try:
        level, dim = int(header["level"]), int(header["dim"])
    except KeyError as exc:
        raise ContractViolation(f"bundle header lacks {exc.args[0]!r}") from None
    method = header.get("interpolation", "nearest")
    radius = float(header.get("cover_radius", "inf"))
    for sec in ("cover", "connection"):
        if sec not in rows:
            raise ContractViolation(f"bundle file has no [{sec}] section")

    def value(text):
        x = parse_cd(text)
        if x.level != level:
            raise ContractViolation(f"value {text!r} is not at level {level}")
        return x.coeffs

    cover: dict[str, list] = {}
    for row in rows["cover"]:
        cover.setdefault(row[0], []).append(_coords(row[1]))
    charts = tuple(Chart(name, np.array(p), radius=radius) for name, p in cover.items())

    def sampled(section, keyed, covector=False):
        tables: dict = {}
        for row in rows.get(section, []):
            if len(row) != 3:
                raise ContractViolation(f"[{section}] rows need three fields: {row}")
            key = tuple(s.strip() for s in row[0].split(",")) if keyed else row[0]
            val = np.stack([value(c) for c in row[2].split("|")]) if covector else value(row[2])
            if covector and len(val) != dim:
                raise ContractViolation(f"connection covector needs {dim} components")
            tables.setdefault(key, ([], []))
            tables[key][0].append(_coords(row[1]))
            tables[key][1].append(val)
        return {k: SampledField(np.array(p), np.array(v), method) for k, (p, v) in tables.items()}

    transitions = sampled("transitions", True)
    connection = sampled("connection", False, covector=True)
    potentials = sampled("potentials", False) if "potentials" in rows else None
    return DiscreteBundle(level, dim, charts, transitions, connection, potentials)


def parse_loop(text: str) -> DiscreteLoop:
    """Rows ``chart; coords`` (the chart labels the segment leaving the point);
    optional header ``period: p_1, ..., p_d``."""
    header, points, charts = {}, [], []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ";" not in line:
            key, _, value = line.partition(":")
            header[key.strip()] = value.strip()
            continue
        chart, coords = (part.strip() for part in line.split(";", 1))
        charts.append(chart)
        points.append(_coords(coords))
    period = tuple(_coords(header["period"])) if "period" in header else None
    return DiscreteLoop(np.array(points), tuple(charts[:-1]), period)


def format_loop(loop: DiscreteLoop) -> str:
    lines = []
    if loop.period is not None:
        lines.append("period: " + ",".join(repr(float(p)) for p in loop.period))
    labels = loop.charts + (loop.charts[-1],)
    for name, p in zip(labels, loop.points):
        lines.append(f"{name}; " + ",".join(repr(float(c)) for c in p))
    return "\n".join(lines) + "\n"


def format_bundle_rows(level: int, dim: int, cover, connection, transitions=(),
                       interpolation: str = "nearest", cover_radius: float | None = None) -> str:
    """Write the bundle format from explicit rows.

    ``cover`` is ``[(chart, point)]``, ``connection`` is
    ``[(chart, point, [CdNumber]*dim)]`` and ``transitions`` is
    ``[((k, j), point, CdNumber)]``.
    """
    def pt(p):
        return ",".join(repr(float(c)) for c in np.atleast_1d(p))

    out = [f"level: {level}", f"dim: {dim}", f"interpolation: {interpolation}"]
    if cover_radius is not None:
        out.append(f"cover_radius: {cover_radius!r}")
    out.append("[cover]")
    out += [f"{c}; {pt(p)}" for c, p in cover]
    out.append("[transitions]")
    out += [f"{k},{j}; {pt(p)}; {format_cd(g)}" for (k, j), p, g in transitions]
    out.append("[connection]")
    out += [f"{c}; {pt(p)}; " + " | ".join(format_cd(x) for x in w) for c, p, w in connection]
    return "\n".join(out) + "\n"
