"""Finite Alexander-Spanier cochains with Cayley-Dickson coefficients.

An ``m``-cochain on a finite set ``X`` assigns a Cayley-Dickson number to every
ordered tuple ``(x_0, ..., x_m)``; it is stored densely as an array of shape
``(|X|,) * (m + 1) + (2^r,)``.  The coboundary is the alternating sum over
deleted entries and acts on each real coefficient separately, so the
cohomology of the ``2^r``-component coefficient group is ``2^r`` copies of the
real cohomology.

An optional *support* predicate restricts the complex to admissible tuples
(for example tuples of points pairwise within ``eps``); it must be closed
under deleting entries.  Without it every tuple is admissible; on a finite
discrete space locally-zero cochains vanish, so no further quotient is taken.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import yaml

from .algebra import CdNumber, exp_arr, ln_arr, parse_cd
from .config import Config, resolve
from .errors import ContractViolation

log = logging.getLogger(__name__)

Support = Callable[[tuple], bool]


def _check_size(n_points: int, degree: int, cfg: Config) -> None:
    if n_points > cfg.max_points:
        raise ContractViolation(f"|X| = {n_points} exceeds the cap of {cfg.max_points} points")
    if degree > cfg.max_degree:
        raise ContractViolation(f"degree {degree} exceeds the cap of {cfg.max_degree}")


def neighbourhood_support(points, eps: float) -> Support:
    """Tuples whose points are pairwise within ``eps`` (a Vietoris-Rips support)."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    close = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1) <= eps

    def allowed(t):
        return all(close[a, b] for a, b in itertools.combinations(t, 2))

    return allowed


def _support_mask(n: int, degree: int, support: Support | None) -> np.ndarray | None:
    if support is None:
        return None
    shape = (n,) * (degree + 1)
    mask = np.zeros(shape, dtype=bool)
    for t in itertools.product(range(n), repeat=degree + 1):
        mask[t] = bool(support(t))
    return mask


@dataclass(frozen=True, eq=False)
class Cochain:
    degree: int
    n_points: int
    level: int
    values: np.ndarray
    support: Support | None = None

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        expected = (self.n_points,) * (self.degree + 1) + (1 << self.level,)
        if self.degree < 0 or vals.shape != expected:
            raise ContractViolation(f"cochain values need shape {expected}, got {vals.shape}")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @classmethod
    def zeros(cls, n_points: int, degree: int, level: int, support=None) -> Cochain:
        shape = (n_points,) * (degree + 1) + (1 << level,)
        return cls(degree, n_points, level, np.zeros(shape), support)

    @classmethod
    def from_function(cls, n_points: int, degree: int, level: int,
                      func: Callable[..., CdNumber], support=None) -> Cochain:
        out = np.zeros((n_points,) * (degree + 1) + (1 << level,))
        for t in itertools.product(range(n_points), repeat=degree + 1):
            if support is None or support(t):
                out[t] = func(*t).coeffs
        return cls(degree, n_points, level, out, support)

    @classmethod
    def random(cls, rng, n_points: int, degree: int, level: int, support=None) -> Cochain:
        vals = rng.normal(size=(n_points,) * (degree + 1) + (1 << level,))
        mask = _support_mask(n_points, degree, support)
        if mask is not None:
            vals = vals * mask[..., None]
        return cls(degree, n_points, level, vals, support)

    def __call__(self, *xs: int) -> CdNumber:
        if len(xs) != self.degree + 1:
            raise ContractViolation(f"a {self.degree}-cochain takes {self.degree + 1} points")
        return CdNumber(self.level, self.values[xs])

    def _like(self, values) -> Cochain:
        return Cochain(self.degree, self.n_points, self.level, values, self.support)

    def _check(self, other: Cochain) -> None:
        if (self.degree, self.n_points, self.level) != (other.degree, other.n_points, other.level):
            raise ContractViolation("cochains differ in degree, base size or level")

    def __add__(self, other: Cochain) -> Cochain:
        self._check(other)
        return self._like(self.values + other.values)

    def __sub__(self, other: Cochain) -> Cochain:
        self._check(other)
        return self._like(self.values - other.values)

    def __neg__(self) -> Cochain:
        return self._like(-self.values)

    def __mul__(self, s: float) -> Cochain:
        return self._like(self.values * float(s))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return ((self.degree, self.n_points, self.level)
                == (other.degree, other.n_points, other.level)
                and np.array_equal(self.values, other.values))

    __hash__ = None

    def max_norm(self) -> float:
        if self.values.size == 0:
            return 0.0
        return float(np.max(np.linalg.norm(self.values, axis=-1)))

    def component(self, k: int) -> Cochain:
        """The graded piece ``f_k i_k``: keep coefficient ``k``, zero the rest."""
        out = np.zeros_like(self.values)
        out[..., k] = self.values[..., k]
        return self._like(out)

    def components(self) -> list[Cochain]:
        return [self.component(k) for k in range(1 << self.level)]

    def relabel(self, perm: Sequence[int]) -> Cochain:
        """Pull back along the relabelling ``x -> perm[x]``."""
        perm = np.asarray(perm)
        idx = np.ix_(*([perm] * (self.degree + 1)))
        base = self.support
        support = None if base is None else (lambda t: base(tuple(int(perm[i]) for i in t)))
        return Cochain(self.degree, self.n_points, self.level, self.values[idx], support)


def coboundary(f: Cochain, config: Config | None = None) -> Cochain:
    """``(df)(x_0..x_{m+1}) = sum_j (-1)^j f(x_0..^x_j..x_{m+1})``."""
    cfg = resolve(config)
    m = f.degree
    _check_size(f.n_points, m + 1, cfg)
    shape = (f.n_points,) * (m + 2) + (1 << f.level,)
    out = np.zeros(shape)
    for j in range(m + 2):
        term = np.broadcast_to(np.expand_dims(f.values, j), shape)
        out = out + term if j % 2 == 0 else out - term
    mask = _support_mask(f.n_points, m + 1, f.support)
    if mask is not None:
        out = out * mask[..., None]
    return Cochain(m + 1, f.n_points, f.level, out, f.support)


def log_cochain(f: Cochain, config: Config | None = None) -> Cochain:
    """Pass multiplicative (nowhere-zero) coefficients to the additive group via Ln.

    Values on the negative real axis take the configured branch generator; how
    many did so is logged.
    """
    cfg = resolve(config)
    flat = f.values.reshape(-1, f.values.shape[-1])
    on_cut = (np.linalg.norm(flat[:, 1:], axis=1) == 0.0) & (flat[:, 0] < 0.0)
    if np.any(on_cut):
        log.info("Ln branch choice: %d value(s) on the negative real axis mapped to i_%d pi",
                 int(on_cut.sum()), cfg.ln_branch_generator)
    vals = ln_arr(flat, cfg.ln_branch_generator, cfg.small_angle).reshape(f.values.shape)
    return f._like(vals)


# ---------------------------------------------------------------------------
# cohomology


def coboundary_matrix(n_points: int, degree: int, support: Support | None = None) -> np.ndarray:
    """Real matrix of ``d: C^degree -> C^{degree+1}`` for scalar coefficients.

    With a support predicate only admissible tuples index rows and columns.
    """
    cols = list(itertools.product(range(n_points), repeat=degree + 1))
    rows = list(itertools.product(range(n_points), repeat=degree + 2))
    if support is not None:
        cols = [t for t in cols if support(t)]
        rows = [t for t in rows if support(t)]
    col_index = {t: i for i, t in enumerate(cols)}
    mat = np.zeros((len(rows), len(cols)))
    for r, t in enumerate(rows):
        for j in range(degree + 2):
            face = t[:j] + t[j + 1:]
            c = col_index.get(face)
            if c is not None:
                mat[r, c] += (-1) ** j
    return mat


def numerical_rank(mat: np.ndarray, sv_tol: float = 1e-10) -> int:
    if mat.size == 0:
        return 0
    s = np.linalg.svd(mat, compute_uv=False)
    return int(np.sum(s > sv_tol * max(1.0, s[0])))


def _pattern_block(degree: int, k: int) -> np.ndarray:
    """The block of ``d`` on tensors with ``k`` factors in the zero-sum subspace.

    Writing ``R^X = R*1 (+) W`` with ``W`` the zero-sum vectors, deleting an
    entry of the tuple inserts the constant vector ``1``; hence ``d`` preserves
    the ordered pattern of ``W`` slots and acts on the positions of the ``1``
    slots only.  Patterns are bit masks of length ``degree + 1``.
    """
    def words(length):
        return [w for w in itertools.product((0, 1), repeat=length) if sum(w) == k]

    src, dst = words(degree + 1), words(degree + 2)
    index = {w: i for i, w in enumerate(dst)}
    mat = np.zeros((len(dst), len(src)))
    for c, w in enumerate(src):
        for j in range(degree + 2):
            mat[index[w[:j] + (0,) + w[j:]], c] += (-1) ** j
    return mat


def coboundary_rank(n_points: int, degree: int, sv_tol: float = 1e-10) -> int:
    """Rank of the scalar ``d`` on all tuples, through the block decomposition."""
    if n_points == 0:
        return 0
    return sum((n_points - 1) ** k * numerical_rank(_pattern_block(degree, k), sv_tol)
               for k in range(degree + 2))


def cohomology_dims(n_points: int, level: int, max_degree: int,
                    support: Support | None = None, config: Config | None = None,
                    method: str = "auto") -> list[int]:
    """``dim H^m`` for ``m = 0..max_degree`` with coefficients in the ``2^r``-dim algebra.

    ``method="dense"`` builds coboundary matrices and takes SVD ranks;
    ``"blocks"`` uses the exact block decomposition (full complex only);
    ``"auto"`` picks blocks for the full complex and dense otherwise.
    """
    cfg = resolve(config)
    _check_size(n_points, max_degree, cfg)
    if max_degree < 0:
        raise ContractViolation("max_degree must be non-negative")
    if method == "auto":
        method = "dense" if support is not None else "blocks"
    if method == "blocks" and support is not None:
        raise ContractViolation("the block decomposition needs the full complex")
    if method not in ("dense", "blocks"):
        raise ContractViolation(f"unknown method {method!r}")

    def dim_c(m):
        if support is None:
            return n_points ** (m + 1)
        return sum(1 for t in itertools.product(range(n_points), repeat=m + 1) if support(t))

    def rank(m):
        if m < 0 or n_points == 0:
            return 0
        if method == "blocks":
            return coboundary_rank(n_points, m, cfg.sv_tol)
        return numerical_rank(coboundary_matrix(n_points, m, support), cfg.sv_tol)

    ranks = {m: rank(m) for m in range(-1, max_degree + 1)}
    dims = [dim_c(m) - ranks[m] - ranks[m - 1] for m in range(max_degree + 1)]
    return [(1 << level) * d for d in dims]


# ---------------------------------------------------------------------------
# exactness of finite linear sequences


@dataclass(frozen=True)
class LinearSequence:
    """Real maps ``A_1, ..., A_k`` with ``A_i: R^{n_i} -> R^{n_{i+1}}`` (shape ``(n_{i+1}, n_i)``)."""

    maps: tuple

    def __post_init__(self):
        maps = tuple(np.asarray(a, dtype=float) for a in self.maps)
        for a in maps:
            if a.ndim != 2:
                raise ContractViolation("every map must be a matrix")
        for i in range(len(maps) - 1):
            if maps[i + 1].shape[1] != maps[i].shape[0]:
                raise ContractViolation(f"map {i + 1} has target dim {maps[i].shape[0]} but map "
                                        f"{i + 2} has source dim {maps[i + 1].shape[1]}")
        object.__setattr__(self, "maps", maps)

    @property
    def dims(self) -> list[int]:
        return [self.maps[0].shape[1]] + [a.shape[0] for a in self.maps]


@dataclass(frozen=True)
class ExactnessReport:
    ranks: list[int]
    kernels: list[int]
    defects: list[int]            # dim ker(next) - rank(prev) at each junction
    composition_residuals: list[float]

    @property
    def exact(self) -> bool:
        return all(d == 0 for d in self.defects)

    def __str__(self) -> str:
        lines = [f"junction {i + 1}: ker {self.kernels[i + 1]} - im {self.ranks[i]} = {d}"
                 f"  ({'exact' if d == 0 else 'NOT exact'})"
                 for i, d in enumerate(self.defects)]
        return "\n".join(lines + [f"exact: {self.exact}"])


def check_exactness(seq: LinearSequence, config: Config | None = None) -> ExactnessReport:
    cfg = resolve(config)
    ranks = [numerical_rank(a, cfg.sv_tol) for a in seq.maps]
    kernels = [a.shape[1] - r for a, r in zip(seq.maps, ranks)]
    defects = [kernels[i + 1] - ranks[i] for i in range(len(seq.maps) - 1)]
    residuals = [float(np.abs(seq.maps[i + 1] @ seq.maps[i]).max(initial=0.0))
                 for i in range(len(seq.maps) - 1)]
    return ExactnessReport(ranks, kernels, defects, residuals)


def exp_jacobian(x: CdNumber, h: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian of ``exp`` at ``x`` in the real coefficient basis."""
    D = x.dim
    jac = np.zeros((D, D))
    for k in range(D):
        e = np.zeros(D)
        e[k] = h
        jac[:, k] = (exp_arr(x.coeffs + e) - exp_arr(x.coeffs - e)) / (2 * h)
    return jac


def exp_sequence(level: int) -> LinearSequence:
    """``0 -> (lattice tangent = 0) -> A_r -> A_r^*`` linearised at the identity."""
    D = 1 << level
    return LinearSequence((np.zeros((0, 0)), np.zeros((D, 0)),
                           exp_jacobian(CdNumber.zero(level)), np.zeros((0, D))))


def exp_kernel_check(M: CdNumber, k: int, config: Config | None = None) -> float:
    """``|exp(M + 2 pi k M/|M|) - exp(M)|`` for an imaginary ``M != 0``."""
    cfg = resolve(config)
    if not M.is_imaginary():
        raise ContractViolation("M must be purely imaginary")
    norm = M.norm()
    if norm <= cfg.zero_eps:
        raise ContractViolation("M must be non-zero")
    if int(k) != k:
        raise ContractViolation("k must be an integer")
    shifted = M.coeffs + 2 * math.pi * int(k) * M.coeffs / norm
    return float(np.linalg.norm(exp_arr(shifted) - exp_arr(M.coeffs)))


# ---------------------------------------------------------------------------
# complex description files


@dataclass(frozen=True)
class ComplexSpec:
    points: np.ndarray
    level: int
    degree_cap: int
    support: Support | None
    cochains: dict


def parse_complex(text: str, config: Config | None = None) -> ComplexSpec:
    """YAML with ``points``, ``degree_cap``, optional ``level``, ``neighbourhood``
    (support radius) and ``cochains`` (name -> {degree, values: {"i,j,...": literal}})."""
    cfg = resolve(config)
    data = yaml.safe_load(text) or {}
    if not isinstance(data, dict) or "points" not in data or "degree_cap" not in data:
        raise ContractViolation("complex file needs 'points' and 'degree_cap'")
    raw = data["points"] or []
    points = np.array([np.atleast_1d(np.asarray(p, dtype=float)) for p in raw]).reshape(len(raw), -1)
    level = int(data.get("level", 0))
    cap = int(data["degree_cap"])
    _check_size(len(points), cap, cfg)
    eps = data.get("neighbourhood", data.get("neighborhood"))
    support = neighbourhood_support(points, float(eps)) if eps is not None else None
    cochains = {}
    for name, spec in (data.get("cochains") or {}).items():
        degree = int(spec["degree"])
        vals = np.zeros((len(points),) * (degree + 1) + (1 << level,))
        for key, lit in (spec.get("values") or {}).items():
            idx = tuple(int(i) for i in str(key).split(","))
            if len(idx) != degree + 1 or not all(0 <= i < len(points) for i in idx):
                raise ContractViolation(f"cochain {name!r}: bad tuple {key!r}")
            x = parse_cd(str(lit))
            if x.level != level:
                raise ContractViolation(f"cochain {name!r}: value {lit!r} not at level {level}")
            vals[idx] = x.coeffs
        cochains[name] = Cochain(degree, len(points), level, vals, support)
    return ComplexSpec(points, level, cap, support, cochains)
