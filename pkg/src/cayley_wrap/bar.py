"""The bar construction ``AG`` / ``BG`` over a twisted group of pure states.

A word ``|t_1, ..., t_n; h_0[h_1|...|h_n]|`` carries time coordinates
``0 <= t_1 <= ... <= t_n <= 1`` and letters.  ``A``-side words also carry a
head ``h_0``; ``B``-side words do not.  Words are plain immutable values:
the constructor does not normalise, so faces and degeneracies can act on raw
words, while the group operations always return normal forms.

Normal form
-----------
* times are snapped to a dyadic grid and stably sorted;
* letters sharing a time are multiplied together, left to right;
* identity letters are dropped together with their times;
* a letter at ``t = 0`` is absorbed into the head (A) or discarded (B);
* a letter at ``t = 1`` is discarded.

Sign convention
---------------
Multiplication merges the two letter sequences by time.  Merging reorders
non-commuting letters, so a sign is needed to keep the operation a group
law.  Write ``T(w) = (((h_0 h_1) h_2) ...) h_n`` for the left-nested total
product of an A-word.  The sign ``eps`` put on the product's head is the
unique one with ``T(x * y) = T(x) T(y)``; on generators this is exactly the
ratio of two nested products, see :func:`shuffle_sign`.  On the B side the
head, and with it the sign, is quotiented away, which keeps the projection
``A -> B`` a homomorphism.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from .algebra import CdNumber, basis_product, cd_mul, format_float
from .config import Config, resolve
from .errors import ContractViolation, DivisionByZeroError
from .twisted import PureState

SIDES = ("A", "B")


@dataclass(frozen=True)
class BarWord:
    """A (possibly unnormalised) word of the bar construction.

    ``letters`` are :class:`PureState` objects for ``depth == 1`` and B-side
    ``BarWord`` objects of depth ``depth - 1`` otherwise.
    """

    side: str
    level: int
    times: tuple = ()
    letters: tuple = ()
    head: PureState | None = None
    depth: int = 1

    def __post_init__(self):
        if self.side not in SIDES:
            raise ContractViolation(f"side must be 'A' or 'B', got {self.side!r}")
        object.__setattr__(self, "times", tuple(float(t) for t in self.times))
        object.__setattr__(self, "letters", tuple(self.letters))
        if len(self.times) != len(self.letters):
            raise ContractViolation(f"{len(self.times)} times for {len(self.letters)} letters")
        if self.side == "A":
            if self.depth != 1:
                raise ContractViolation("iterated words live on the B side")
            if self.head is None:
                object.__setattr__(self, "head", PureState.identity(self.level))
        elif self.head is not None:
            raise ContractViolation("B-side words carry no head")
        for h in self.letters:
            if self.depth == 1:
                if not isinstance(h, PureState) or h.level != self.level:
                    raise ContractViolation(f"letter {h!r} is not a level-{self.level} pure state")
            elif not (isinstance(h, BarWord) and h.side == "B" and h.depth == self.depth - 1
                      and h.level == self.level):
                raise ContractViolation(f"letters of a depth-{self.depth} word must be "
                                        f"depth-{self.depth - 1} B-words")
        if self.head is not None and self.head.level != self.level:
            raise ContractViolation("head at the wrong level")

    def __len__(self):
        return len(self.letters)

    @property
    def is_unit(self) -> bool:
        """True for a normal-form unit (no letters, identity head)."""
        return not self.letters and (self.head is None or self.head.is_identity)

    def __mul__(self, other: BarWord) -> BarWord:
        return mul(self, other)

    def __add__(self, other: BarWord) -> BarWord:
        return add(self, other)

    def __str__(self):
        return format_word(self)


def unit_word(side: str, level: int, times: Sequence[float] = (), depth: int = 1) -> BarWord:
    """``|t_1, ..., t_k; e[e|...|e]|``, whose normal form is the empty word."""
    e = PureState.identity(level) if depth == 1 else BarWord("B", level, depth=depth - 1)
    return BarWord(side, level, tuple(times), (e,) * len(times), depth=depth)


# ---------------------------------------------------------------------------
# letter helpers, uniform over pure states and nested words


def _lmul(a, b, cfg):
    if isinstance(a, PureState):
        return a * b
    return mul(a, b, cfg)


def _linv(a, cfg):
    if isinstance(a, PureState):
        return a.inverse(cfg.zero_eps)
    return inverse(a, cfg)


def _lconj(a):
    return a.conj() if isinstance(a, PureState) else bar_conj(a)


def _is_e(a, cfg) -> bool:
    if isinstance(a, PureState):
        return a.is_close_to_identity(cfg.letter_tol)
    return normalize(a, cfg).is_unit


def _unit_copy(a):
    """Same generator, value 1: used to replay merges for exact signs."""
    return PureState(a.level, a.generator, 1.0)


def _total(level: int, states: Iterable[PureState]) -> PureState:
    acc = PureState.identity(level)
    for s in states:
        acc = acc * s
    return acc


def _snap(t: float, cfg: Config) -> float:
    if not 0.0 <= t <= 1.0:
        raise ContractViolation(f"time {t!r} outside [0, 1]")
    g = cfg.time_grid
    return float(np.round(t / g) * g) if g > 0 else t


def _sorted(times, letters, cfg):
    snapped = [_snap(t, cfg) for t in times]
    order = sorted(range(len(snapped)), key=lambda i: snapped[i])  # stable
    return [snapped[i] for i in order], [letters[i] for i in order], order


def _merge_ties(times, letters, cfg, combine=None):
    combine = combine or (lambda a, b: _lmul(a, b, cfg))
    out_t, out_l = [], []
    for t, h in zip(times, letters):
        if out_t and out_t[-1] == t:
            out_l[-1] = combine(out_l[-1], h)
        else:
            out_t.append(t)
            out_l.append(h)
    return out_t, out_l


def _finish(side, level, times, letters, head, depth, cfg, is_e=None, absorb=None):
    """Drop identities and boundary letters; times are sorted and tie-free."""
    is_e = is_e or (lambda a: _is_e(a, cfg))
    absorb = absorb or (lambda hd, a: _lmul(hd, a, cfg))
    keep = [(t, h) for t, h in zip(times, letters) if not is_e(h)]
    if keep and keep[0][0] == 0.0:
        if side == "A":
            head = absorb(head, keep[0][1])
        keep = keep[1:]
    if keep and keep[-1][0] == 1.0:
        keep = keep[:-1]
    ts = tuple(t for t, _ in keep)
    ls = tuple(h for _, h in keep)
    return BarWord(side, level, ts, ls, head if side == "A" else None, depth)


def normalize(word: BarWord, config: Config | None = None) -> BarWord:
    """Return the unique normal form of ``word``; idempotent."""
    cfg = resolve(config)
    letters = list(word.letters)
    if word.depth > 1:
        letters = [normalize(h, cfg) for h in letters]
    times, letters, _ = _sorted(word.times, letters, cfg)
    times, letters = _merge_ties(times, letters, cfg)
    return _finish(word.side, word.level, times, letters, word.head, word.depth, cfg)


def is_normal(word: BarWord, config: Config | None = None) -> bool:
    return normalize(word, config) == word


# ---------------------------------------------------------------------------
# signs


def _chain(level: int, gens: Iterable[int]) -> tuple[int, int]:
    sign, idx = 1, 0
    for g in gens:
        s, idx = basis_product(level, idx, g)
        sign *= s
    return sign, idx


def shuffle_sign(level: int, left_gens: Sequence[int], right_gens: Sequence[int],
                 sigma: Sequence[int]) -> int:
    """Sign relating the two nested generator products of a merge.

    ``sigma[m]`` is the index, in the concatenation ``left_gens + right_gens``,
    of the generator that ends up in merged position ``m``.  Returns the
    ``s`` with ``s * L(permuted) = L(left_gens) * L(right_gens)``, ``L``
    being the left-nested product.
    """
    gens = list(left_gens) + list(right_gens)
    if sorted(sigma) != list(range(len(gens))):
        raise ContractViolation(f"{list(sigma)} is not a permutation of {len(gens)} indices")
    sl, il = _chain(level, left_gens)
    sr, ir = _chain(level, right_gens)
    s, i_orig = basis_product(level, il, ir)
    sp, i_perm = _chain(level, (gens[k] for k in sigma))
    assert i_orig == i_perm, "nested products landed on different generators"
    return sl * sr * s * sp


# ---------------------------------------------------------------------------
# group and ring operations


def _check_pair(x: BarWord, y: BarWord) -> None:
    if x.side != y.side or x.level != y.level or x.depth != y.depth:
        raise ContractViolation(f"cannot combine {x.side}/level {x.level}/depth {x.depth} with "
                                f"{y.side}/level {y.level}/depth {y.depth}")


def _merge(x: BarWord, y: BarWord, cfg: Config, tie_break: str):
    if tie_break not in ("left", "right"):
        raise ContractViolation("tie_break must be 'left' or 'right'")
    first, second = (x, y) if tie_break == "left" else (y, x)
    times, letters, _ = _sorted(first.times + second.times, first.letters + second.letters, cfg)
    return _merge_ties(times, letters, cfg)


def _letter_sign(x: BarWord, y: BarWord, cfg: Config, tie_break: str, with_heads: bool) -> int:
    """Exact +-1 making the left-nested total product multiplicative."""
    if x.depth > 1:
        return 1
    ux = [_unit_copy(h) for h in x.letters]
    uy = [_unit_copy(h) for h in y.letters]
    hx = _unit_copy(x.head) if with_heads else PureState.identity(x.level)
    hy = _unit_copy(y.head) if with_heads else PureState.identity(x.level)
    target = _total(x.level, [hx] + ux) * _total(x.level, [hy] + uy)
    first, second = (ux, uy) if tie_break == "left" else (uy, ux)
    times, letters, _ = _sorted(x.times + y.times if tie_break == "left" else y.times + x.times,
                                first + second, cfg)
    _, merged = _merge_ties(times, letters, cfg)
    got = _total(x.level, [hx * hy] + merged)
    assert got.generator == target.generator
    return int(np.sign(target.value * got.value))


def mul(x: BarWord, y: BarWord, config: Config | None = None, tie_break: str = "left") -> BarWord:
    """Product of two words of the same side, level and depth.

    Times are merged by a stable sort (``tie_break`` picks which operand goes
    first on equal times), letters sharing a time are multiplied, heads are
    multiplied, and on the A side the head picks up the shuffle sign.
    """
    cfg = resolve(config)
    _check_pair(x, y)
    x, y = normalize(x, cfg), normalize(y, cfg)
    times, merged = _merge(x, y, cfg, tie_break)
    head = None
    if x.side == "A":
        eps = _letter_sign(x, y, cfg, tie_break, with_heads=True)
        head = (x.head * y.head) * float(eps)
    return _finish(x.side, x.level, times, merged, head, x.depth, cfg)


def add(x: BarWord, y: BarWord, config: Config | None = None, tie_break: str = "left") -> BarWord:
    """Sum in the ring extension of the bar construction.

    The letter sequences are merged as for :func:`mul`.  A-side heads must share
    a generator and are added; the shuffle sign of the letters multiplies the
    head (A) or the leading letter (B).
    """
    cfg = resolve(config)
    _check_pair(x, y)
    if x.depth > 1:
        raise ContractViolation("addition is defined on depth-1 words only")
    x, y = normalize(x, cfg), normalize(y, cfg)
    if x.side == "A" and x.head.generator != y.head.generator:
        if x.head.value == 0:
            x = replace(x, head=PureState(x.level, y.head.generator, 0.0))
        elif y.head.value != 0:
            raise ContractViolation(f"heads i_{x.head.generator} and i_{y.head.generator} differ")
    eps = _letter_sign(x, y, cfg, tie_break, with_heads=False)
    times, merged = _merge(x, y, cfg, tie_break)
    head = None
    if x.side == "A":
        gen = x.head.generator if x.head.value != 0 else y.head.generator
        head = PureState(x.level, gen, eps * (x.head.value + (y.head.value if y.head.generator == gen else 0.0)))
    elif merged:
        merged[0] = merged[0] * float(eps)
    return _finish(x.side, x.level, times, merged, head, x.depth, cfg)


def bar_conj(x: BarWord) -> BarWord:
    """Conjugate the head and every letter, keeping the times."""
    head = x.head.conj() if x.head is not None else None
    return BarWord(x.side, x.level, x.times, tuple(_lconj(h) for h in x.letters), head, x.depth)


def _letterwise_inverse(x: BarWord, cfg: Config) -> BarWord:
    head = x.head.inverse(cfg.zero_eps) if x.head is not None else None
    return BarWord(x.side, x.level, x.times, tuple(_linv(h, cfg) for h in x.letters), head, x.depth)


def inverse(x: BarWord, config: Config | None = None) -> BarWord:
    """Group inverse, computed as ``conj(x) * (x * conj(x))^{-1}``.

    ``x * conj(x)`` has only real letters, which are central, so its inverse
    is taken letter by letter.  Naive letterwise inversion of ``x`` itself
    would miss the shuffle sign for non-commuting letters.
    """
    cfg = resolve(config)
    x = normalize(x, cfg)
    if x.depth > 1:
        return normalize(_letterwise_inverse(x, cfg), cfg)
    try:
        central = mul(x, bar_conj(x), cfg)
        return mul(bar_conj(x), _letterwise_inverse(central, cfg), cfg)
    except DivisionByZeroError as exc:
        raise DivisionByZeroError(f"word {format_word(x)} has a non-invertible letter") from exc


def project_a_to_b(x: BarWord, config: Config | None = None) -> BarWord:
    """The projection ``AG -> BG``: forget the head and renormalise."""
    if x.side != "A":
        raise ContractViolation("project_a_to_b expects an A-side word")
    return normalize(BarWord("B", x.level, x.times, x.letters, None), config)


def total_product(x: BarWord) -> PureState:
    """``T(x) = ((h_0 h_1) ...) h_n``, the group element a word evaluates to."""
    if x.depth > 1:
        raise ContractViolation("total_product is defined on depth-1 words")
    head = [x.head] if x.head is not None else []
    return _total(x.level, head + list(x.letters))


# ---------------------------------------------------------------------------
# simplicial structure (raw words)


def face(j: int, x: BarWord, config: Config | None = None) -> BarWord:
    """Face map ``d_j``: merge letters ``j, j+1`` (``j = 0`` merges into the head / drops)."""
    cfg = resolve(config)
    n = len(x)
    if not 0 <= j <= n or n == 0:
        raise ContractViolation(f"face index {j} out of range for a word with {n} letters")
    letters = list(x.letters)
    head = x.head
    if j == 0:
        if x.side == "A":
            head = _lmul(head, letters[0], cfg)
        letters = letters[1:]
    elif j < n:
        letters[j - 1:j + 1] = [_lmul(letters[j - 1], letters[j], cfg)]
    else:
        letters = letters[:-1]
    times = list(x.times)
    del times[min(j, n - 1)]
    return BarWord(x.side, x.level, tuple(times), tuple(letters), head, x.depth)


def degeneracy(j: int, x: BarWord) -> BarWord:
    """Degeneracy ``s_j``: insert an identity letter at position ``j``."""
    n = len(x)
    if not 0 <= j <= n:
        raise ContractViolation(f"degeneracy index {j} out of range for a word with {n} letters")
    e = PureState.identity(x.level) if x.depth == 1 else BarWord("B", x.level, depth=x.depth - 1)
    t = x.times[j] if j < n else (x.times[-1] if n else 0.0)
    times = x.times[:j] + (t,) + x.times[j:]
    letters = x.letters[:j] + (e,) + x.letters[j:]
    return BarWord(x.side, x.level, times, letters, x.head, x.depth)


# ---------------------------------------------------------------------------
# iterated construction


def iterate_b(x: BarWord, depth: int, time: float = 0.5, config: Config | None = None) -> BarWord:
    """Lift a B-word to ``B^depth G`` by wrapping it as a single letter at ``time``."""
    cfg = resolve(config)
    if depth < 1 or depth > cfg.bar_depth_cap:
        raise ContractViolation(f"depth {depth} outside 1..{cfg.bar_depth_cap}")
    if x.side != "B":
        raise ContractViolation("iterate_b lifts B-side words")
    if x.depth > depth:
        raise ContractViolation(f"cannot lower depth {x.depth} to {depth}")
    while x.depth < depth:
        x = normalize(BarWord("B", x.level, (time,), (x,), None, x.depth + 1), cfg)
    return normalize(x, cfg)


# ---------------------------------------------------------------------------
# words over an A_r vector space


@dataclass(frozen=True)
class VectorWord:
    """A word whose head and letters are arbitrary ``A_r`` vectors.

    Equal times add, zero letters are dropped; this is the additive
    structure on ``AX`` / ``BX`` used for tangent data and form values.
    """

    side: str
    level: int
    times: tuple = ()
    letters: tuple = ()
    head: CdNumber | None = None

    def __post_init__(self):
        if self.side not in SIDES:
            raise ContractViolation(f"side must be 'A' or 'B', got {self.side!r}")
        object.__setattr__(self, "times", tuple(float(t) for t in self.times))
        object.__setattr__(self, "letters", tuple(self.letters))
        if len(self.times) != len(self.letters):
            raise ContractViolation(f"{len(self.times)} times for {len(self.letters)} letters")
        if self.side == "A" and self.head is None:
            object.__setattr__(self, "head", CdNumber.zero(self.level))
        if self.side == "B" and self.head is not None:
            raise ContractViolation("B-side words carry no head")

    def __len__(self):
        return len(self.letters)

    @property
    def is_zero(self) -> bool:
        return not self.letters and (self.head is None or self.head.is_zero())

    def __add__(self, other: VectorWord) -> VectorWord:
        return vector_add(self, other)

    def allclose(self, other: VectorWord, tol: float = 1e-12) -> bool:
        if (self.side, self.level, self.times) != (other.side, other.level, other.times):
            return False
        if self.head is not None and not self.head.allclose(other.head, tol):
            return False
        return all(a.allclose(b, tol) for a, b in zip(self.letters, other.letters))


def vector_normalize(x: VectorWord, config: Config | None = None) -> VectorWord:
    cfg = resolve(config)
    times, letters, _ = _sorted(x.times, list(x.letters), cfg)
    times, letters = _merge_ties(times, letters, cfg, combine=lambda a, b: a + b)
    keep = [(t, v) for t, v in zip(times, letters) if not v.is_zero()]
    head = x.head
    if keep and keep[0][0] == 0.0:
        if x.side == "A":
            head = head + keep[0][1]
        keep = keep[1:]
    if keep and keep[-1][0] == 1.0:
        keep = keep[:-1]
    return VectorWord(x.side, x.level, tuple(t for t, _ in keep), tuple(v for _, v in keep),
                      head if x.side == "A" else None)


def vector_add(x: VectorWord, y: VectorWord, config: Config | None = None) -> VectorWord:
    if x.side != y.side or x.level != y.level:
        raise ContractViolation("cannot add vector words of different side or level")
    head = x.head + y.head if x.side == "A" else None
    return vector_normalize(VectorWord(x.side, x.level, x.times + y.times,
                                       x.letters + y.letters, head), config)


def scalar_mul(s, x: VectorWord, side: str = "left", config: Config | None = None) -> VectorWord:
    """``s x`` (``side='left'``) or ``x s`` applied to the head and every letter."""
    if side not in ("left", "right"):
        raise ContractViolation("side must be 'left' or 'right'")
    if not isinstance(s, CdNumber):
        s = CdNumber.real(x.level, float(s))
    if s.level != x.level:
        raise ContractViolation("scalar at the wrong level")

    def act(v):
        return cd_mul(s, v) if side == "left" else cd_mul(v, s)

    head = act(x.head) if x.head is not None else None
    return vector_normalize(VectorWord(x.side, x.level, x.times,
                                       tuple(act(v) for v in x.letters), head), config)


def as_vector_word(x: BarWord) -> VectorWord:
    """Embed a depth-1 word of pure states as a vector word."""
    head = x.head.to_cd() if x.head is not None else None
    return VectorWord(x.side, x.level, x.times, tuple(h.to_cd() for h in x.letters), head)


# ---------------------------------------------------------------------------
# formal sums


@dataclass(frozen=True)
class FormalSum:
    """A finite real combination of normal-form words.

    General ring elements of the bar construction are sums of pure-state
    words; only addition and the real scalar action are provided.
    """

    terms: tuple = field(default_factory=tuple)

    @classmethod
    def of(cls, *words: BarWord, config: Config | None = None) -> FormalSum:
        return cls._collect(((1.0, normalize(w, config)) for w in words))

    @classmethod
    def _collect(cls, pairs) -> FormalSum:
        acc: dict[BarWord, float] = {}
        order = []
        for c, w in pairs:
            if w not in acc:
                order.append(w)
                acc[w] = 0.0
            acc[w] += c
        return cls(tuple((acc[w], w) for w in order if acc[w] != 0.0))

    def __add__(self, other: FormalSum) -> FormalSum:
        return FormalSum._collect(self.terms + other.terms)

    def __rmul__(self, s: float) -> FormalSum:
        return FormalSum._collect((s * c, w) for c, w in self.terms)

    def __neg__(self) -> FormalSum:
        return (-1.0) * self

    def __sub__(self, other: FormalSum) -> FormalSum:
        return self + (-other)

    def __len__(self):
        return len(self.terms)


def random_word(rng, side: str, level: int, n_letters: int | None = None,
                values: Sequence[float] = (-2.0, -1.0, -0.5, 0.5, 1.0, 2.0),
                grid: Sequence[float] = tuple(np.arange(1, 16) / 16),
                config: Config | None = None) -> BarWord:
    """A random normal-form word of pure states with dyadic values and times.

    Dyadic data keep every product exact, so group laws can be compared with
    ``==``.  ``n_letters`` defaults to a uniform draw from 0..4.
    """
    if n_letters is None:
        n_letters = int(rng.integers(0, 5))
    times = np.sort(rng.choice(np.asarray(grid, dtype=float), size=n_letters, replace=False))

    def state():
        return PureState(level, int(rng.integers(0, 1 << level)), float(rng.choice(values)))

    letters = tuple(state() for _ in times)
    head = state() if side == "A" else None
    return normalize(BarWord(side, level, tuple(float(t) for t in times), letters, head), config)


# ---------------------------------------------------------------------------
# literal syntax:  A;2;[0.25,0.5];(1:2.0);(2:1.0),(3:-1.0)


_STATE = re.compile(r"\(\s*(\d+)\s*:\s*([^)]+?)\s*\)")


def _parse_states(text: str, level: int) -> list[PureState]:
    text = text.strip()
    if not text:
        return []
    states = []
    pos = 0
    for m in _STATE.finditer(text):
        gap = text[pos:m.start()].strip().strip(",").strip()
        if gap:
            raise ContractViolation(f"unexpected {gap!r} in letter list")
        states.append(PureState(level, int(m.group(1)), float(m.group(2))))
        pos = m.end()
    if text[pos:].strip():
        raise ContractViolation(f"unexpected {text[pos:]!r} in letter list")
    return states


def parse_word(text: str, config: Config | None = None) -> BarWord:
    """Parse ``side;level;[times];head;letters`` and return the normal form."""
    fields = [f.strip() for f in text.split(";")]
    if len(fields) != 5:
        raise ContractViolation(f"word literal needs 5 ';'-separated fields: {text!r}")
    side, level_s, times_s, head_s, letters_s = fields
    if side not in SIDES:
        raise ContractViolation(f"side must be A or B, got {side!r}")
    try:
        level = int(level_s)
    except ValueError:
        raise ContractViolation(f"bad level {level_s!r}") from None
    if not (times_s.startswith("[") and times_s.endswith("]")):
        raise ContractViolation(f"times must be bracketed: {times_s!r}")
    body = times_s[1:-1].strip()
    try:
        times = [float(t) for t in body.split(",")] if body else []
    except ValueError:
        raise ContractViolation(f"bad time list {times_s!r}") from None
    heads = _parse_states(head_s, level)
    if side == "A":
        if len(heads) > 1:
            raise ContractViolation("at most one head")
        head = heads[0] if heads else PureState.identity(level)
    else:
        if heads:
            raise ContractViolation("B-side words carry no head")
        head = None
    letters = _parse_states(letters_s, level)
    return normalize(BarWord(side, level, tuple(times), tuple(letters), head), config)


def _fmt_state(h: PureState) -> str:
    return f"({h.generator}:{format_float(h.value)})"


def format_word(x: BarWord) -> str:
    if x.depth > 1:
        inner = " | ".join(format_word(h) for h in x.letters)
        return f"B^{x.depth};{x.level};[{','.join(format_float(t) for t in x.times)}];{{{inner}}}"
    head = _fmt_state(x.head) if x.head is not None else ""
    return (f"{x.side};{x.level};[{','.join(format_float(t) for t in x.times)}];"
            f"{head};{','.join(_fmt_state(h) for h in x.letters)}")


__all__ = [
    "BarWord",
    "FormalSum",
    "VectorWord",
    "add",
    "as_vector_word",
    "bar_conj",
    "degeneracy",
    "face",
    "format_word",
    "inverse",
    "is_normal",
    "iterate_b",
    "mul",
    "normalize",
    "parse_word",
    "project_a_to_b",
    "scalar_mul",
    "shuffle_sign",
    "total_product",
    "unit_word",
    "vector_add",
    "vector_normalize",
]
