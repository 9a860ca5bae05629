"""Twisted groups: graded pure states, block decomposition and the group Z(C_r).

A twisted group here is the unit group of a Cayley-Dickson algebra viewed as a
direct sum of graded blocks ``G_j i_j`` whose coefficient groups ``G_j`` are
all copies of one commutative group ``G_0``.  Elements with a single nonzero
block are *pure states*; they multiply to pure states, which is what makes
the bar construction in :mod:`cayley_wrap.bar` computable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .algebra import (
    CdNumber,
    basis_product,
    conj_arr,
    format_cd,
    generator_conjugation_sum,
    mul_with_tensor,
    parse_cd,
    structure_tensor,
    to_fraction_array,
    unit_mul,
)
from .errors import ContractViolation, DivisionByZeroError


# ---------------------------------------------------------------------------
# commutative component groups


@dataclass(frozen=True)
class ComponentGroup:
    """A commutative coefficient group ``G_0`` with its conjugation involution.

    Values are python/numpy scalars; ``dtype`` is the numpy dtype used when
    an embedded element is materialised as a coefficient array.
    """

    name: str
    dtype: type
    conj: callable = field(compare=False)

    def coerce(self, value):
        return self.dtype(value)

    def is_zero(self, value, eps: float = 0.0) -> bool:
        return abs(value) <= eps


REAL = ComponentGroup("real", float, lambda y: y)
COMPLEX = ComponentGroup("complex", complex, lambda y: y.conjugate())


# ---------------------------------------------------------------------------
# pure states


class PureState:
    """The element ``value * i_generator`` of one graded block.

    ``value`` lives in the component group (real by default).  A zero value is
    accepted so that pure states can also serve as additive letters; such a
    state is not invertible.
    """

    __slots__ = ("level", "generator", "value", "group")

    def __init__(self, level: int, generator: int, value=1.0, group: ComponentGroup = REAL):
        if not 0 <= generator < (1 << level):
            raise ContractViolation(f"generator i_{generator} does not exist at level {level}")
        object.__setattr__(self, "level", int(level))
        object.__setattr__(self, "generator", int(generator))
        object.__setattr__(self, "value", group.coerce(value))
        object.__setattr__(self, "group", group)

    def __setattr__(self, name, value):
        raise AttributeError("PureState is immutable")

    @classmethod
    def identity(cls, level: int, group: ComponentGroup = REAL) -> PureState:
        return cls(level, 0, 1.0, group)

    @classmethod
    def from_cd(cls, x: CdNumber, tol: float = 0.0) -> PureState:
        """Read a pure state off a CdNumber with at most one block above ``tol``."""
        nz = np.flatnonzero(np.abs(x.coeffs) > tol)
        if len(nz) > 1:
            raise ContractViolation(f"{x} is not a pure state: blocks {nz.tolist()} are nonzero")
        j = int(nz[0]) if len(nz) else 0
        return cls(x.level, j, float(x.coeffs[j]))

    @property
    def is_identity(self) -> bool:
        return self.generator == 0 and self.value == 1

    def is_close_to_identity(self, tol: float) -> bool:
        return self.generator == 0 and abs(self.value - 1) <= tol

    def _check(self, other: PureState) -> None:
        if self.level != other.level or self.group is not other.group:
            raise ContractViolation("pure states from different twisted groups")

    def __mul__(self, other: PureState) -> PureState:
        if not isinstance(other, PureState):
            return PureState(self.level, self.generator, self.value * other, self.group)
        self._check(other)
        sign, s = basis_product(self.level, self.generator, other.generator)
        return PureState(self.level, s, sign * self.value * other.value, self.group)

    def __rmul__(self, other):
        return PureState(self.level, self.generator, other * self.value, self.group)

    def __neg__(self) -> PureState:
        return PureState(self.level, self.generator, -self.value, self.group)

    def conj(self) -> PureState:
        sign = 1 if self.generator == 0 else -1
        return PureState(self.level, self.generator, sign * self.group.conj(self.value), self.group)

    def inverse(self, eps: float = 1e-300) -> PureState:
        """``(y i_j)^{-1} = y^{-1} conj(i_j)``."""
        if abs(self.value) <= eps:
            raise DivisionByZeroError(f"pure state {self!r} is not invertible")
        sign = 1 if self.generator == 0 else -1
        return PureState(self.level, self.generator, sign / self.value, self.group)

    def to_array(self) -> np.ndarray:
        out = np.zeros(1 << self.level, dtype=self.group.dtype)
        out[self.generator] = self.value
        return out

    def to_cd(self) -> CdNumber:
        if self.group is not REAL:
            raise ContractViolation("only real-valued pure states embed in a real CdNumber")
        return CdNumber.basis(self.level, self.generator, self.value)

    def __eq__(self, other):
        if not isinstance(other, PureState):
            return NotImplemented
        return (self.level, self.generator, self.value, self.group) == \
            (other.level, other.generator, other.value, other.group)

    def __hash__(self):
        return hash((self.level, self.generator, self.value, self.group.name))

    def __repr__(self):
        return f"PureState(level={self.level}, i_{self.generator}, {self.value!r})"


# ---------------------------------------------------------------------------
# block decomposition


def component_decompose(g: CdNumber) -> list[CdNumber]:
    """Split ``g`` into real blocks ``g_0, ..., g_{2^r-1}`` with ``g = sum g_j i_j``.

    At levels 2 and 3 the blocks come from the closed generator-sum formulas
    evaluated over exact rationals, so they reproduce the coefficients of
    ``g`` exactly.  Levels 0 and 1 read coefficients directly.
    """
    level = g.level
    if level < 2:
        return [CdNumber.real(level, c) for c in g.coeffs]
    gf = to_fraction_array(g.coeffs)
    s = generator_conjugation_sum(gf, level)
    blocks = [(gf + s) / 2]
    for j in range(1, 1 << level):
        blocks.append((unit_mul(level, s, j) - unit_mul(level, gf, j, left=False)) / 2)
    out = []
    for b in blocks:
        assert all(c == 0 for c in b[1:]), "block formula left a non-central residue"
        out.append(CdNumber.real(level, float(b[0])))
    return out


def assemble(blocks: Sequence[CdNumber]) -> CdNumber:
    """Inverse of :func:`component_decompose`: ``sum_j g_j i_j``."""
    level = blocks[0].level
    if len(blocks) != 1 << level:
        raise ContractViolation(f"expected {1 << level} blocks, got {len(blocks)}")
    coeffs = np.zeros(1 << level)
    for j, b in enumerate(blocks):
        if np.any(b.coeffs[1:] != 0):
            raise ContractViolation(f"block {j} is not central")
        coeffs[j] = b.coeffs[0]
    return CdNumber(level, coeffs)


# ---------------------------------------------------------------------------
# axiom checks


@dataclass
class AxiomResult:
    passed: bool
    residual: float
    checked: int


@dataclass
class AxiomReport:
    results: dict[str, AxiomResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def __str__(self):
        lines = [f"{name}: {'pass' if r.passed else 'FAIL'} "
                 f"(max residual {r.residual:.3g} over {r.checked})"
                 for name, r in self.results.items()]
        return "\n".join(lines)


def _as_array(x) -> np.ndarray:
    if isinstance(x, PureState):
        return x.to_array()
    if isinstance(x, CdNumber):
        return x.coeffs
    return np.asarray(x)


def verify_twisted_axioms(samples: Iterable[Sequence], tensor: np.ndarray | None = None,
                          tol: float = 1e-11) -> AxiomReport:
    """Check the twisted-group axioms on sample triples ``(g, f, h)``.

    Products are taken through the structure tensor ``T[p, q, s]`` (the true
    one unless ``tensor`` is given, which allows negative controls).  Checked:

    * alternativity ``g(gf) = (gg)f``, ``(fg)g = f(gg)`` and ``g^{-1}(gf) = f``;
    * grading closure: a product of pure states has a single nonzero block;
    * ``conj(gf) = conj(f) conj(g)`` and ``conj(e) = e``.

    Residuals are relative to the size of the terms involved.
    """
    samples = [tuple(s) for s in samples]
    if not samples:
        raise ContractViolation("verify_twisted_axioms needs at least one sample")
    first = _as_array(samples[0][0])
    dim = first.shape[-1]
    level = dim.bit_length() - 1
    if tensor is None:
        tensor = structure_tensor(level)

    def mul(a, b):
        return mul_with_tensor(a, b, tensor)

    def inv(a):
        return conj_arr(a) / np.sum(np.abs(a) ** 2)

    res = {k: 0.0 for k in ("alternativity", "grading_closure", "conj_antihomomorphism", "conj_identity")}
    counts = dict.fromkeys(res, 0)
    for triple in samples:
        arrs = [_as_array(x) for x in triple]
        g, f = arrs[0], arrs[1 % len(arrs)]
        scale = max(1.0, np.linalg.norm(g) ** 2 * np.linalg.norm(f))
        r = max(np.max(np.abs(mul(g, mul(g, f)) - mul(mul(g, g), f))),
                np.max(np.abs(mul(mul(f, g), g) - mul(f, mul(g, g)))))
        r = r / scale
        if np.linalg.norm(g) > 0:
            r = max(r, np.max(np.abs(mul(inv(g), mul(g, f)) - f)) / max(1.0, np.linalg.norm(f)))
        res["alternativity"] = max(res["alternativity"], r)
        counts["alternativity"] += 1

        pure = [x for x in triple if isinstance(x, PureState)]
        for a in pure:
            for b in pure:
                prod = mul(a.to_array(), b.to_array())
                mags = np.sort(np.abs(prod))[::-1]
                top = max(mags[0], 1e-300)
                res["grading_closure"] = max(res["grading_closure"], mags[1] / top)
                counts["grading_closure"] += 1

        cr = np.max(np.abs(conj_arr(mul(g, f)) - mul(conj_arr(f), conj_arr(g))))
        res["conj_antihomomorphism"] = max(res["conj_antihomomorphism"],
                                           cr / max(1.0, np.linalg.norm(g) * np.linalg.norm(f)))
        counts["conj_antihomomorphism"] += 1

    e = np.zeros(dim)
    e[0] = 1.0
    res["conj_identity"] = float(np.max(np.abs(conj_arr(e) - e)))
    # e must also act as a unit under the (possibly corrupted) table
    for triple in samples:
        g = _as_array(triple[0])
        res["conj_identity"] = max(res["conj_identity"], float(np.max(np.abs(mul(e, g) - g))))
    counts["conj_identity"] = len(samples)

    return AxiomReport({k: AxiomResult(bool(v <= tol), float(v), counts[k]) for k, v in res.items()})


def random_pure_states(rng, level: int, size: int, group: ComponentGroup = REAL) -> list[PureState]:
    """Random nonzero pure states with generator and value drawn uniformly."""
    gens = rng.integers(0, 1 << level, size=size)
    vals = rng.uniform(0.5, 2.0, size=size) * rng.choice([-1.0, 1.0], size=size)
    if group is COMPLEX:
        phase = np.exp(1j * rng.uniform(0, 2 * np.pi, size=size))
        vals = vals * phase
    return [PureState(level, int(j), v, group) for j, v in zip(gens, vals)]


# ---------------------------------------------------------------------------
# the group Z(C_r), truncated to finitely many directions


def canonical_direction(u: CdNumber) -> tuple[CdNumber, int]:
    """Return ``(u', s)`` with ``u = s u'`` and the first nonzero coefficient of ``u'`` positive."""
    if not u.is_imaginary() or abs(u.norm() - 1.0) > 1e-12:
        raise ContractViolation(f"direction {u} must be a unit imaginary element")
    first = u.coeffs[np.flatnonzero(u.coeffs)[0]]
    return (u, 1) if first > 0 else (-u, -1)


class ZCrElement:
    """A finite integer combination ``sum k_u u`` of unit imaginary directions.

    Directions ``u`` and ``-u`` are identified (``k(-u) = (-k)u``).  Elements
    are tied to a *sample set*: the frozenset of canonical directions they may
    use.  Zero coefficients are dropped.
    """

    __slots__ = ("level", "sample_set", "terms")

    def __init__(self, level: int, terms=(), sample_set: Iterable[CdNumber] | None = None):
        collected: dict[CdNumber, int] = {}
        for k, u in terms:
            if int(k) != k:
                raise ContractViolation(f"coefficient {k!r} is not an integer")
            if u.level != level:
                raise ContractViolation("direction at the wrong level")
            cu, s = canonical_direction(u)
            collected[cu] = collected.get(cu, 0) + s * int(k)
        if sample_set is None:
            sample = frozenset(collected)
        else:
            sample = frozenset(canonical_direction(u)[0] for u in sample_set)
            extra = set(collected) - sample
            if extra:
                raise ContractViolation(f"directions {sorted(map(str, extra))} are not in the sample set")
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "sample_set", sample)
        object.__setattr__(self, "terms", {u: k for u, k in collected.items() if k != 0})

    def __setattr__(self, name, value):
        raise AttributeError("ZCrElement is immutable")

    @classmethod
    def zero(cls, level: int, sample_set: Iterable[CdNumber] = ()) -> ZCrElement:
        return cls(level, (), sample_set)

    def coefficient(self, u: CdNumber) -> int:
        cu, s = canonical_direction(u)
        return s * self.terms.get(cu, 0)

    def __add__(self, other: ZCrElement) -> ZCrElement:
        return zcr_add(self, other)

    def __neg__(self) -> ZCrElement:
        return ZCrElement(self.level, [(-k, u) for u, k in self.terms.items()], self.sample_set)

    def __sub__(self, other: ZCrElement) -> ZCrElement:
        return zcr_add(self, -other)

    def __eq__(self, other):
        if not isinstance(other, ZCrElement):
            return NotImplemented
        return self.level == other.level and self.terms == other.terms

    def __hash__(self):
        return hash((self.level, frozenset(self.terms.items())))

    def to_cd(self) -> CdNumber:
        """The image ``2 pi sum k_u u`` in the kernel of ``exp``."""
        total = CdNumber.zero(self.level)
        for u, k in self.terms.items():
            total = total + (2 * np.pi * k) * u
        return total

    def __repr__(self):
        return f"ZCrElement({format_zcr(self)})"


def zcr_add(a: ZCrElement, b: ZCrElement) -> ZCrElement:
    """Pointwise integer addition; both operands must share one sample set."""
    if a.level != b.level or a.sample_set != b.sample_set:
        raise ContractViolation("ZCr elements over different sample sets")
    terms = [(k, u) for u, k in a.terms.items()] + [(k, u) for u, k in b.terms.items()]
    return ZCrElement(a.level, terms, a.sample_set)


_ZCR_TERM = re.compile(r"^\s*([+-]?\d+)\s*\*\s*(level\s*:.*)$")


def parse_zcr(text: str, sample_set: Iterable[CdNumber] | None = None) -> ZCrElement:
    """Parse ``[k1*u1; k2*u2; ...]``; each ``u`` is a CdNumber literal.

    The literal separator inside ``u`` is ``;`` as well, so terms are split
    on the ``k*`` prefixes.
    """
    body = text.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ContractViolation(f"ZCr literal must be bracketed: {text!r}")
    body = body[1:-1].strip()
    if not body:
        if sample_set is None:
            raise ContractViolation("an empty ZCr literal needs an explicit level via its sample set")
        sample_set = list(sample_set)
        return ZCrElement.zero(sample_set[0].level, sample_set)
    pieces = re.split(r";\s*(?=[+-]?\d+\s*\*)", body)
    terms = []
    for piece in pieces:
        m = _ZCR_TERM.match(piece)
        if not m:
            raise ContractViolation(f"bad ZCr term {piece!r}")
        terms.append((int(m.group(1)), parse_cd(m.group(2))))
    level = terms[0][1].level
    return ZCrElement(level, terms, sample_set)


def format_zcr(x: ZCrElement) -> str:
    items = sorted(x.terms.items(), key=lambda kv: tuple(-kv[0].coeffs))
    return "[" + "; ".join(f"{k}*{format_cd(u)}" for u, k in items) + "]"


__all__ = [
    "AxiomReport",
    "AxiomResult",
    "COMPLEX",
    "ComponentGroup",
    "PureState",
    "REAL",
    "ZCrElement",
    "assemble",
    "canonical_direction",
    "component_decompose",
    "format_zcr",
    "parse_zcr",
    "random_pure_states",
    "verify_twisted_axioms",
    "zcr_add",
]
