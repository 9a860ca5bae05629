"""Cayley-Dickson arithmetic for the reals, complexes, quaternions and octonions.

Elements of the level-``r`` algebra are stored as ``2**r`` real coefficients
over generators ``i_0 .. i_{2^r - 1}``. The generators are fixed by iterated
doubling: level ``r + 1`` is ``A_r + A_r l`` with ``l = i_{2^r}`` and
``i_{2^r + s} = i_s l``, multiplied by

    (a + b l)(c + v l) = (a c - conj(v) b) + (v a + b conj(c)) l.

That one rule drives everything here. The array kernels (``*_arr``) accept any
leading batch shape and also work on ``object`` arrays of
:class:`fractions.Fraction`, which is how the generator-sum formulas for the
real part and the graded components are evaluated exactly.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .config import Config, resolve
from .errors import (
    BranchCutError,
    ContractViolation,
    DivisionByZeroError,
    DomainError,
    UnsupportedLevelError,
)

MAX_LEVEL = 3


def _check_level(level: int) -> int:
    if not isinstance(level, (int, np.integer)) or not 0 <= level <= MAX_LEVEL:
        raise UnsupportedLevelError(f"level must be in 0..{MAX_LEVEL}, got {level!r}")
    return int(level)


def level_of_dim(dim: int) -> int:
    level = dim.bit_length() - 1
    if dim <= 0 or 1 << level != dim:
        raise ContractViolation(f"coefficient count {dim} is not a power of two")
    return _check_level(level)


# ---------------------------------------------------------------------------
# array kernels


def conj_arr(x):
    """conj(a + b l) = conj(a) - b l, i.e. negate every imaginary coefficient."""
    out = -x
    out[..., 0] = x[..., 0]
    return out


def mul_arr(x, y):
    """Recursive doubling product over the last axis."""
    n = x.shape[-1]
    if n == 1:
        return x * y
    h = n // 2
    a, b = x[..., :h], x[..., h:]
    c, v = y[..., :h], y[..., h:]
    first = mul_arr(a, c) - mul_arr(conj_arr(v), b)
    second = mul_arr(v, a) + mul_arr(b, conj_arr(c))
    return np.concatenate([first, second], axis=-1)


def norm_arr(x):
    return np.linalg.norm(x, axis=-1)


def inverse_arr(x, eps: float = 1e-300):
    sq = np.sum(x * x, axis=-1)
    if np.any(np.sqrt(sq) <= eps):
        raise DivisionByZeroError("inverse of a zero Cayley-Dickson number")
    return conj_arr(x) / sq[..., None]


def exp_arr(x, small_angle: float = 1e-8):
    """exp(a + M) = e^a (cos|M| + sin|M| M/|M|), vectorised."""
    x = np.asarray(x, dtype=float)
    a = x[..., 0]
    im = x[..., 1:]
    m = np.linalg.norm(im, axis=-1)
    small = m < small_angle
    safe_m = np.where(small, 1.0, m)
    sinc = np.where(small, 1.0 - m * m / 6.0, np.sin(m) / safe_m)
    scale = np.exp(a)
    out = np.empty_like(x)
    out[..., 0] = scale * np.cos(m)
    out[..., 1:] = (scale * sinc)[..., None] * im
    return out


def ln_arr(x, branch_generator: int = 1, small_angle: float = 1e-8,
           strict: bool = False, eps: float = 1e-300, cut_tol: float = 0.0):
    """Principal logarithm, vectorised.

    On the negative real axis the imaginary direction is ``i_{branch_generator}``
    unless ``strict`` is set, in which case :class:`BranchCutError` is raised.
    In strict mode points with ``|Im x| <= cut_tol * |x|`` left of the origin
    count as lying on the cut.
    """
    x = np.asarray(x, dtype=float)
    shape = x.shape
    dim = shape[-1]
    x = x.reshape(-1, dim)
    a = x[:, 0]
    im = x[:, 1:]
    m = np.linalg.norm(im, axis=-1)
    r = np.linalg.norm(x, axis=-1)
    if np.any(r <= eps):
        raise DomainError("Ln is undefined at 0")
    on_cut = (m == 0.0) & (a < 0.0)
    if strict:
        near_cut = (m <= cut_tol * r) & (a < 0.0)
        if np.any(near_cut):
            raise BranchCutError("Ln evaluated on the negative real axis",
                                 location=np.flatnonzero(near_cut).tolist())
    if np.any(on_cut):
        if dim == 1:
            raise BranchCutError("Ln evaluated on the negative real axis",
                                 location=np.flatnonzero(on_cut).tolist())
        if not 1 <= branch_generator < dim:
            raise ContractViolation(
                f"branch generator i_{branch_generator} does not exist at dimension {dim}")
    theta = np.arctan2(m, a)
    small = (m < small_angle * r) & (a > 0)
    safe_m = np.where(m == 0.0, 1.0, m)
    safe_a = np.where(small, a, 1.0)
    # theta / |M| via its series near the positive real axis
    factor = np.where(small, (1.0 - (m / safe_a) ** 2 / 3.0) / safe_a, theta / safe_m)
    out = np.empty_like(x)
    out[:, 0] = np.log(r)
    out[:, 1:] = factor[:, None] * im
    if np.any(on_cut):
        out[on_cut, 1:] = 0.0
        out[on_cut, branch_generator] = math.pi
    return out.reshape(shape)


# ---------------------------------------------------------------------------
# structure constants, derived symbolically from the doubling rule


@lru_cache(maxsize=None)
def basis_product(level: int, p: int, q: int) -> tuple[int, int]:
    """Return ``(sign, s)`` with ``i_p i_q = sign * i_s`` at the given level.

    Integer-only recursion; used as an oracle against :func:`mul_arr`.
    """
    if level == 0:
        return 1, 0
    h = 1 << (level - 1)

    def conj_sign(k):
        return 1 if k == 0 else -1

    if p < h and q < h:
        return basis_product(level - 1, p, q)
    if p < h:  # a (v l) = (v a) l
        sign, s = basis_product(level - 1, q - h, p)
        return sign, s + h
    if q < h:  # (b l) c = (b conj(c)) l
        sign, s = basis_product(level - 1, p - h, q)
        return sign * conj_sign(q), s + h
    # (b l)(v l) = -conj(v) b
    sign, s = basis_product(level - 1, q - h, p - h)
    return -sign * conj_sign(q - h), s


@lru_cache(maxsize=None)
def structure_table(level: int) -> tuple[np.ndarray, np.ndarray]:
    """``(signs, indices)`` arrays of shape ``(2^r, 2^r)``."""
    _check_level(level)
    n = 1 << level
    signs = np.zeros((n, n), dtype=int)
    idx = np.zeros((n, n), dtype=int)
    for p in range(n):
        for q in range(n):
            signs[p, q], idx[p, q] = basis_product(level, p, q)
    signs.setflags(write=False)
    idx.setflags(write=False)
    return signs, idx


@lru_cache(maxsize=None)
def structure_tensor(level: int) -> np.ndarray:
    """Dense tensor ``T[p, q, s]`` with ``i_p i_q = sum_s T[p, q, s] i_s``."""
    signs, idx = structure_table(level)
    n = signs.shape[0]
    t = np.zeros((n, n, n))
    for p in range(n):
        for q in range(n):
            t[p, q, idx[p, q]] = signs[p, q]
    t.setflags(write=False)
    return t


def mul_with_tensor(x, y, tensor):
    return np.einsum("...p,...q,pqs->...s", x, y, tensor)


# ---------------------------------------------------------------------------
# element type


class CdNumber:
    """Immutable element of the level-``r`` Cayley-Dickson algebra."""

    __slots__ = ("level", "coeffs")

    def __init__(self, level: int, coeffs):
        level = _check_level(level)
        arr = np.array(coeffs, dtype=float).reshape(-1)
        if arr.shape[0] != 1 << level:
            raise ContractViolation(
                f"level {level} needs {1 << level} coefficients, got {arr.shape[0]}")
        arr.setflags(write=False)
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("CdNumber is immutable")

    @classmethod
    def from_array(cls, arr) -> CdNumber:
        arr = np.asarray(arr, dtype=float)
        return cls(level_of_dim(arr.shape[-1]), arr)

    @classmethod
    def basis(cls, level: int, j: int, scale: float = 1.0) -> CdNumber:
        n = 1 << _check_level(level)
        if not 0 <= j < n:
            raise ContractViolation(f"generator i_{j} does not exist at level {level}")
        c = np.zeros(n)
        c[j] = scale
        return cls(level, c)

    @classmethod
    def real(cls, level: int, value: float) -> CdNumber:
        return cls.basis(level, 0, value)

    @classmethod
    def zero(cls, level: int) -> CdNumber:
        return cls(level, np.zeros(1 << _check_level(level)))

    @classmethod
    def one(cls, level: int) -> CdNumber:
        return cls.basis(level, 0)

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    @property
    def re(self) -> float:
        return float(self.coeffs[0])

    @property
    def im(self) -> CdNumber:
        c = self.coeffs.copy()
        c[0] = 0.0
        return CdNumber(self.level, c)

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def is_imaginary(self) -> bool:
        return self.coeffs[0] == 0.0

    def conj(self) -> CdNumber:
        return cd_conj(self)

    def inverse(self, config: Config | None = None) -> CdNumber:
        return cd_inverse(self, config)

    def allclose(self, other: CdNumber, tol: float = 1e-12) -> bool:
        _same_level(self, other)
        return bool(np.max(np.abs(self.coeffs - other.coeffs), initial=0.0) <= tol)

    def _coerce(self, other):
        if isinstance(other, CdNumber):
            _same_level(self, other)
            return other.coeffs
        if isinstance(other, (int, float, np.floating, np.integer)):
            c = np.zeros(self.dim)
            c[0] = other
            return c
        return None

    def __add__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return CdNumber(self.level, self.coeffs + c)

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return CdNumber(self.level, self.coeffs - c)

    def __rsub__(self, other):
        c = self._coerce(other)
        if c is None:
            return NotImplemented
        return CdNumber(self.level, c - self.coeffs)

    def __neg__(self):
        return CdNumber(self.level, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, CdNumber):
            return cd_mul(self, other)
        if isinstance(other, (int, float, np.floating, np.integer)):
            return CdNumber(self.level, self.coeffs * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return CdNumber(self.level, other * self.coeffs)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, float, np.floating, np.integer)):
            return CdNumber(self.level, self.coeffs / other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, CdNumber):
            return NotImplemented
        return self.level == other.level and bool(np.array_equal(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.level, (self.coeffs + 0.0).tobytes()))  # -0.0 == 0.0

    def __repr__(self):
        return f"CdNumber({format_cd(self)!r})"

    def __str__(self):
        return format_cd(self)


def _same_level(x: CdNumber, y: CdNumber) -> None:
    if x.level != y.level:
        raise ContractViolation(f"level mismatch: {x.level} vs {y.level}")


def generator(level: int, j: int) -> CdNumber:
    """The generator ``i_j`` at the given level."""
    return CdNumber.basis(level, j)


# ---------------------------------------------------------------------------
# operations


def cd_mul(x: CdNumber, y: CdNumber) -> CdNumber:
    _same_level(x, y)
    return CdNumber(x.level, mul_arr(x.coeffs, y.coeffs))


def cd_conj(x: CdNumber) -> CdNumber:
    return CdNumber(x.level, conj_arr(x.coeffs))


def cd_inverse(x: CdNumber, config: Config | None = None) -> CdNumber:
    """x^{-1} = conj(x) (x conj(x))^{-1}; the bracket is the real |x|^2."""
    cfg = resolve(config)
    if x.norm() <= cfg.zero_eps:
        raise DivisionByZeroError("inverse of a zero Cayley-Dickson number")
    xx = mul_arr(x.coeffs, conj_arr(x.coeffs))[0]
    return CdNumber(x.level, conj_arr(x.coeffs) / xx)


def cd_exp(x: CdNumber, config: Config | None = None) -> CdNumber:
    cfg = resolve(config)
    return CdNumber(x.level, exp_arr(x.coeffs, cfg.small_angle))


def cd_ln(x: CdNumber, config: Config | None = None, strict: bool = False,
          cut_tol: float = 0.0) -> CdNumber:
    """Principal logarithm with ``Ln(1) = 0`` and imaginary angle in ``[0, pi]``."""
    cfg = resolve(config)
    if x.norm() <= cfg.zero_eps:
        raise DomainError("Ln is undefined at 0")
    return CdNumber(x.level, ln_arr(x.coeffs, cfg.ln_branch_generator, cfg.small_angle,
                                    strict=strict, eps=cfg.zero_eps, cut_tol=cut_tol))


def _as_imaginary(x: CdNumber, cfg: Config, name: str) -> CdNumber:
    scale = max(1.0, x.norm())
    if abs(x.coeffs[0]) > cfg.eq_tol * scale:
        raise ContractViolation(f"{name} must be purely imaginary, real part {x.coeffs[0]!r}")
    return x.im


def k_defect(m: CdNumber, n: CdNumber, config: Config | None = None) -> CdNumber:
    """K(M, N) = Im Ln(e^M e^N) for purely imaginary M, N.

    Raises :class:`BranchCutError` when the product lands on the negative
    real axis (up to ``eq_tol`` relative to its norm).
    """
    cfg = resolve(config)
    _same_level(m, n)
    m = _as_imaginary(m, cfg, "M")
    n = _as_imaginary(n, cfg, "N")
    z = cd_ln(cd_mul(cd_exp(m, cfg), cd_exp(n, cfg)), cfg, strict=True, cut_tol=cfg.eq_tol)
    return z.im


def p_defect(m: CdNumber, n: CdNumber, config: Config | None = None) -> CdNumber:
    """P(M, N) = K(M, N) - M - N."""
    return k_defect(m, n, config) - m.im - n.im


# ---------------------------------------------------------------------------
# exact generator-sum formulas


def to_fraction_array(coeffs) -> np.ndarray:
    return np.array([Fraction(float(c)) for c in np.ravel(coeffs)], dtype=object)


def unit_mul(level: int, z, j: int, left: bool = True) -> np.ndarray:
    """``i_j z`` (or ``z i_j``) as a signed permutation of the coefficients of ``z``.

    Works on any element dtype, so exact rationals stay exact and cheap.
    """
    signs, idx = structure_table(level)
    z = np.asarray(z)
    out = np.empty_like(z)
    if left:
        out[idx[j]] = signs[j] * z
    else:
        out[idx[:, j]] = signs[:, j] * z
    return out


def generator_conjugation_sum(z, level: int) -> np.ndarray:
    """S(z) = (-z + sum_{j>=1} i_j (z conj(i_j))) / (2^r - 2), in exact rationals.

    For every z this equals conj(z); it is the building block of the closed
    formulas for the real part and for the graded components.
    """
    if level < 2:
        raise ContractViolation("the generator-sum formula needs level >= 2")
    z = np.asarray(z, dtype=object)
    total = -z
    for j in range(1, 1 << level):
        # i_j (z conj(i_j)) = -i_j (z i_j)
        total = total - unit_mul(level, unit_mul(level, z, j, left=False), j)
    return total / Fraction((1 << level) - 2)


def re_im_split(z: CdNumber) -> tuple[float, CdNumber]:
    """Real and imaginary parts via the generator-sum formulas.

    Levels 0 and 1 fall back to reading coefficients. At levels 2 and 3 the
    formulas are evaluated over exact rationals, so the result agrees with a
    direct coefficient read bit for bit.
    """
    if z.level < 2:
        return float(z.coeffs[0]), z.im
    zf = to_fraction_array(z.coeffs)
    s = generator_conjugation_sum(zf, z.level)
    re_part = (zf + s) / 2
    im_part = (zf - s) / 2
    assert all(c == 0 for c in re_part[1:]), "real-part formula left imaginary residue"
    return float(re_part[0]), CdNumber(z.level, [float(c) for c in im_part])


def smash(a: CdNumber, b: CdNumber) -> CdNumber:
    """a + b l one level up, with l = i_{2^r} the doubling generator."""
    _same_level(a, b)
    if a.level >= MAX_LEVEL:
        raise UnsupportedLevelError("smashing octonions would produce sedenions")
    return CdNumber(a.level + 1, np.concatenate([a.coeffs, b.coeffs]))


# ---------------------------------------------------------------------------
# literal syntax  ``level:r; c0,c1,...``

_LITERAL = re.compile(r"^\s*level\s*:\s*(\d+)\s*;\s*(.*?)\s*$")


def parse_cd(text: str) -> CdNumber:
    match = _LITERAL.match(text)
    if match is None:
        raise ContractViolation(f"not a Cayley-Dickson literal: {text!r}")
    level = int(match.group(1))
    body = match.group(2)
    try:
        coeffs = [float(tok) for tok in body.split(",")] if body else []
    except ValueError as exc:
        raise ContractViolation(f"bad coefficient in {text!r}") from exc
    return CdNumber(level, coeffs)


def format_float(value: float) -> str:
    """Shortest repr that round-trips; locale independent."""
    return repr(float(value))


def format_cd(x: CdNumber) -> str:
    return f"level:{x.level};" + ",".join(format_float(c) for c in x.coeffs)
