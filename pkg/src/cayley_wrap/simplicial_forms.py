"""Canonical connection 1-forms on the bar construction of ``A_r^*``.

A 1-form on the simplicial space ``A A_r^*`` is a family ``w^n`` of forms on
``Delta^n x (A_r^*)^{n+1}``.  Here each ``w^n`` is a black-box evaluator:
it takes a :class:`TangentWord` (a base point plus one tangent vector per
slot, times held fixed) and returns a :class:`~cayley_wrap.bar.VectorWord`.

The canonical form sends ``z_0[z_1|...|z_n]`` with tangents ``(v_0, ...,
v_n)`` to ``z_0^{-1}v_0[z_1^{-1}v_1|...|z_n^{-1}v_n]``.  A family is
*compatible* when pulling back along coface/codegeneracy maps of the
simplex agrees with pulling back along the face/degeneracy maps of the
group part; :func:`check_compatibility` measures both conditions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import CdNumber, cd_inverse, cd_mul
from .bar import VectorWord, vector_normalize
from .config import Config, resolve
from .errors import ContractViolation, DivisionByZeroError


@dataclass(frozen=True)
class TangentWord:
    """A base point ``|t; z_0[z_1|...|z_n]|`` with tangent vectors ``v_j``.

    Time velocities are zero.  ``head``/``head_velocity`` are present
    exactly for A-side words.  ``times`` may be shorter or longer than the
    letter list when the word is an intermediate object of a pullback; the
    evaluators only require ``len(times) == len(points)``.
    """

    side: str
    level: int
    times: tuple
    points: tuple
    velocities: tuple
    head: CdNumber | None = None
    head_velocity: CdNumber | None = None

    def __post_init__(self):
        object.__setattr__(self, "times", tuple(float(t) for t in self.times))
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "velocities", tuple(self.velocities))
        if len(self.points) != len(self.velocities):
            raise ContractViolation("one velocity per letter slot is required")
        if self.side == "A":
            if self.head is None or self.head_velocity is None:
                raise ContractViolation("A-side tangent words need a head point and velocity")
        elif self.side == "B":
            if self.head is not None or self.head_velocity is not None:
                raise ContractViolation("B-side tangent words carry no head")
        else:
            raise ContractViolation(f"side must be 'A' or 'B', got {self.side!r}")

    @property
    def n(self) -> int:
        return len(self.points)

    def with_times(self, times) -> TangentWord:
        return TangentWord(self.side, self.level, tuple(times), self.points, self.velocities,
                           self.head, self.head_velocity)

    def scaled(self, a: float) -> TangentWord:
        hv = a * self.head_velocity if self.head_velocity is not None else None
        return TangentWord(self.side, self.level, self.times, self.points,
                           tuple(a * v for v in self.velocities), self.head, hv)


def _left_trivialize(z: CdNumber, v: CdNumber, cfg: Config) -> CdNumber:
    if z.norm() <= cfg.zero_eps:
        raise DivisionByZeroError("base point has a zero letter")
    return cd_mul(cd_inverse(z, cfg), v)


def _check_times(x: TangentWord) -> None:
    if len(x.times) != x.n:
        raise ContractViolation(f"{len(x.times)} times for {x.n} letters")


def eval_canonical_A(x: TangentWord, config: Config | None = None) -> VectorWord:
    """``z_0^{-1}v_0[z_1^{-1}v_1|...|z_n^{-1}v_n]`` as a normalised vector word."""
    cfg = resolve(config)
    if x.side != "A":
        raise ContractViolation("eval_canonical_A expects an A-side tangent word")
    _check_times(x)
    head = _left_trivialize(x.head, x.head_velocity, cfg)
    letters = tuple(_left_trivialize(z, v, cfg) for z, v in zip(x.points, x.velocities))
    return vector_normalize(VectorWord("A", x.level, x.times, letters, head), cfg)


def eval_canonical_B(x: TangentWord, config: Config | None = None) -> VectorWord:
    """``[z_1^{-1}v_1|...|z_n^{-1}v_n]`` as a normalised vector word."""
    cfg = resolve(config)
    if x.side != "B":
        raise ContractViolation("eval_canonical_B expects a B-side tangent word")
    _check_times(x)
    letters = tuple(_left_trivialize(z, v, cfg) for z, v in zip(x.points, x.velocities))
    return vector_normalize(VectorWord("B", x.level, x.times, letters), cfg)


@dataclass(frozen=True)
class NestedVectorWord:
    """Value of an iterated canonical form: a word whose slots are B-side vector words."""

    side: str
    times: tuple
    letters: tuple
    head: VectorWord | None = None


def eval_canonical_AB1(times, head: TangentWord, letters: list[TangentWord],
                       config: Config | None = None) -> NestedVectorWord:
    """The iterated form ``AB(z^{-1}dz)`` at ``|t; g_0[g_1|...|g_n]|`` with ``g_j`` in ``B A_r^*``.

    Each slot ``g_j`` is itself a B-side tangent word; its value is the
    canonical B-form evaluated there.
    """
    cfg = resolve(config)
    if len(times) != len(letters):
        raise ContractViolation(f"{len(times)} times for {len(letters)} letters")
    return NestedVectorWord("A", tuple(float(t) for t in times),
                            tuple(eval_canonical_B(g, cfg) for g in letters),
                            eval_canonical_B(head, cfg))


def eval_canonical_B2(times, letters: list[TangentWord],
                      config: Config | None = None) -> NestedVectorWord:
    """The iterated form ``B^2(z^{-1}dz)`` at ``|t; [g_1|...|g_n]|`` with ``g_j`` in ``B A_r^*``."""
    cfg = resolve(config)
    if len(times) != len(letters):
        raise ContractViolation(f"{len(times)} times for {len(letters)} letters")
    return NestedVectorWord("B", tuple(float(t) for t in times),
                            tuple(eval_canonical_B(g, cfg) for g in letters))


# ---------------------------------------------------------------------------
# families and compatibility


@dataclass
class FormFamily:
    """A family ``n -> w^n`` of form evaluators, defined for ``n <= cap``."""

    side: str
    level: int
    evaluator: Callable[[int, TangentWord], VectorWord]
    cap: int = 6
    name: str = "form"

    def __call__(self, n: int, x: TangentWord) -> VectorWord:
        if not 0 <= n <= self.cap:
            raise ContractViolation(f"w^{n} is outside the family (cap {self.cap})")
        if x.n != n:
            raise ContractViolation(f"w^{n} evaluated on a word with {x.n} letters")
        return self.evaluator(n, x)


def canonical_A_family(level: int, config: Config | None = None) -> FormFamily:
    cfg = resolve(config)
    return FormFamily("A", level, lambda n, x: eval_canonical_A(x, cfg), cfg.form_cap, "A(z^-1 dz)")


def canonical_B_family(level: int, config: Config | None = None) -> FormFamily:
    cfg = resolve(config)
    return FormFamily("B", level, lambda n, x: eval_canonical_B(x, cfg), cfg.form_cap, "B(z^-1 dz)")


def perturbed_family(family: FormFamily, degree: int, amount: float = 1e-3) -> FormFamily:
    """Negative control: add ``amount`` times the first letter's value to ``w^degree``."""

    def evaluator(n, x):
        value = family.evaluator(n, x)
        if n != degree or not value.letters:
            return value
        letters = (value.letters[0] * (1.0 + amount),) + value.letters[1:]
        return VectorWord(value.side, value.level, value.times, letters, value.head)

    return FormFamily(family.side, family.level, evaluator, family.cap, f"{family.name} (perturbed)")


def coface_times(j: int, times, n: int) -> tuple:
    """``d^j`` on ``Delta^{n-1}``: duplicate ``t_j`` with ``t_0 = 0``, ``t_n = 1``."""
    times = tuple(times)
    if len(times) != n - 1:
        raise ContractViolation(f"expected {n - 1} times, got {len(times)}")
    if not 0 <= j <= n:
        raise ContractViolation(f"coface index {j} out of range for n = {n}")
    padded = (0.0,) + times + (1.0,)
    return times[:j] + (padded[j],) + times[j:]


def codegeneracy_times(j: int, times) -> tuple:
    """``s^j`` on ``Delta^{n+1}``: drop ``t_{j+1}``."""
    times = tuple(times)
    if not 0 <= j < len(times):
        raise ContractViolation(f"codegeneracy index {j} out of range")
    return times[:j] + times[j + 1:]


def face_tangent(j: int, x: TangentWord, config: Config | None = None) -> TangentWord:
    """Push a tangent word forward along the face map ``d_j`` of the group part.

    Merged slots carry the product point ``z_j z_{j+1}`` and the tangent whose
    left-trivialisation is ``z_j^{-1}v_j + z_{j+1}^{-1}v_{j+1}``, i.e. the
    Maurer-Cartan form of the product in the trivialisation used by the
    canonical forms.  Times are left untouched (set them separately).
    """
    cfg = resolve(config)
    n = x.n
    if not 0 <= j <= n or n == 0:
        raise ContractViolation(f"face index {j} out of range for {n} letters")
    pts, vel = list(x.points), list(x.velocities)
    head, hv = x.head, x.head_velocity

    def merge(z1, v1, z2, v2):
        z = cd_mul(z1, z2)
        return z, cd_mul(z, _left_trivialize(z1, v1, cfg) + _left_trivialize(z2, v2, cfg))

    if j == 0:
        if x.side == "A":
            head, hv = merge(head, hv, pts[0], vel[0])
        pts, vel = pts[1:], vel[1:]
    elif j < n:
        z, v = merge(pts[j - 1], vel[j - 1], pts[j], vel[j])
        pts[j - 1:j + 1] = [z]
        vel[j - 1:j + 1] = [v]
    else:
        pts, vel = pts[:-1], vel[:-1]
    return TangentWord(x.side, x.level, x.times, tuple(pts), tuple(vel), head, hv)


def degeneracy_tangent(j: int, x: TangentWord) -> TangentWord:
    """Push forward along ``s_j``: insert ``e`` with zero tangent at slot ``j``."""
    n = x.n
    if not 0 <= j <= n:
        raise ContractViolation(f"degeneracy index {j} out of range for {n} letters")
    e, zero = CdNumber.one(x.level), CdNumber.zero(x.level)
    pts = x.points[:j] + (e,) + x.points[j:]
    vel = x.velocities[:j] + (zero,) + x.velocities[j:]
    return TangentWord(x.side, x.level, x.times, pts, vel, x.head, x.head_velocity)


def vector_word_residual(a: VectorWord, b: VectorWord) -> float:
    """Max coefficient difference of two normal forms; ``inf`` if their shapes differ."""
    if a.side != b.side or a.times != b.times:
        return float("inf")
    r = 0.0
    if a.head is not None:
        r = float(np.max(np.abs(a.head.coeffs - b.head.coeffs)))
    for u, v in zip(a.letters, b.letters):
        r = max(r, float(np.max(np.abs(u.coeffs - v.coeffs))))
    return r


@dataclass
class CompatibilityReport:
    residuals: dict = field(default_factory=dict)  # (condition, n, j) -> max residual
    tol: float = 1e-10

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    @property
    def failures(self) -> dict:
        return {k: v for k, v in self.residuals.items() if not v <= self.tol}

    @property
    def passed(self) -> bool:
        return not self.failures

    def __str__(self):
        lines = [f"{cond} n={n} j={j}: {res:.3g}{'' if res <= self.tol else '  FAIL'}"
                 for (cond, n, j), res in sorted(self.residuals.items())]
        lines.append(f"max residual {self.max_residual:.3g} -> {'pass' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def random_tangent_word(rng, side: str, level: int, n_letters: int, n_times: int) -> TangentWord:
    """Random base point away from zero, random tangents, sorted times in (0, 1)."""

    def point():
        c = rng.normal(size=1 << level)
        return CdNumber(level, c / np.linalg.norm(c) * rng.uniform(0.5, 2.0))

    def vec():
        return CdNumber(level, rng.normal(size=1 << level))

    times = tuple(np.sort(rng.uniform(0.05, 0.95, size=n_times)))
    head = point() if side == "A" else None
    hv = vec() if side == "A" else None
    return TangentWord(side, level, times, tuple(point() for _ in range(n_letters)),
                       tuple(vec() for _ in range(n_letters)), head, hv)


def check_compatibility(family: FormFamily, n_max: int = 5, samples: int = 5,
                        rng: np.random.Generator | None = None, tol: float = 1e-10,
                        config: Config | None = None) -> CompatibilityReport:
    """Compare both pullback conditions on random points for ``n <= n_max``.

    Condition (1): ``(d^j x id)^* w^n = (id x d_j)^* w^{n-1}`` on
    ``Delta^{n-1} x N_n``.  Condition (2): ``(s^j x id)^* w^n =
    (id x s_j)^* w^{n+1}`` on ``Delta^{n+1} x N_n``.
    """
    cfg = resolve(config)
    rng = rng if rng is not None else np.random.default_rng(0)
    n_max = min(n_max, family.cap - 1)
    report = CompatibilityReport(tol=tol)
    for n in range(0, n_max + 1):
        for _ in range(samples):
            if n >= 1:
                x = random_tangent_word(rng, family.side, family.level, n, n - 1)
                for j in range(n + 1):
                    lhs = family(n, x.with_times(coface_times(j, x.times, n)))
                    rhs = family(n - 1, face_tangent(j, x, cfg))
                    key = ("coface/face", n, j)
                    report.residuals[key] = max(report.residuals.get(key, 0.0),
                                                vector_word_residual(lhs, rhs))
            y = random_tangent_word(rng, family.side, family.level, n, n + 1)
            for j in range(n + 1):
                lhs = family(n, y.with_times(codegeneracy_times(j, y.times)))
                rhs = family(n + 1, degeneracy_tangent(j, y))
                key = ("codegeneracy/degeneracy", n, j)
                report.residuals[key] = max(report.residuals.get(key, 0.0),
                                            vector_word_residual(lhs, rhs))
    return report


__all__ = [
    "CompatibilityReport",
    "FormFamily",
    "NestedVectorWord",
    "TangentWord",
    "canonical_A_family",
    "canonical_B_family",
    "check_compatibility",
    "codegeneracy_times",
    "coface_times",
    "degeneracy_tangent",
    "eval_canonical_A",
    "eval_canonical_AB1",
    "eval_canonical_B",
    "eval_canonical_B2",
    "face_tangent",
    "perturbed_family",
    "random_tangent_word",
    "vector_word_residual",
]
