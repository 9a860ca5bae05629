"""Randomised property suites behind ``cayley-wrap verify``.

Each suite draws its samples from ``numpy.random.default_rng(seed)`` and
returns a :class:`SuiteResult` with the largest residual seen and the
tolerance it is judged against, so runs are reproducible byte for byte.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import (
    CdNumber,
    conj_arr,
    exp_arr,
    k_defect,
    ln_arr,
    mul_arr,
    re_im_split,
)
from .bar import inverse, mul, normalize, project_a_to_b, random_word
from .cochain import Cochain, coboundary
from .config import Config, resolve
from .errors import ContractViolation
from .simplicial_forms import canonical_A_family, canonical_B_family, check_compatibility
from .twisted import component_decompose, random_pure_states, verify_twisted_axioms


@dataclass(frozen=True)
class SuiteResult:
    name: str
    level: int
    samples: int
    max_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance

    def lines(self) -> list[str]:
        return [f"suite: {self.name}", f"level: {self.level}", f"samples: {self.samples}",
                f"max_residual: {self.max_residual!r}", f"tolerance: {self.tolerance!r}",
                "PASS" if self.passed else "FAIL"]


def _rel(a, b, scale) -> float:
    return float(np.max(np.linalg.norm(a - b, axis=-1) / scale))


def _triples(rng, level, n):
    return rng.normal(size=(3, n, 1 << level))


def alternativity(rng, level, n, cfg):
    x, y, _ = _triples(rng, level, n)
    m = mul_arr
    scale = np.linalg.norm(x, axis=-1) ** 2 * np.linalg.norm(y, axis=-1)
    return max(_rel(m(x, m(x, y)), m(m(x, x), y), scale),
               _rel(m(m(y, x), x), m(y, m(x, x)), scale)), 1e-11


def moufang(rng, level, n, cfg):
    x, y, z = _triples(rng, level, n)
    m = mul_arr
    scale = (np.linalg.norm(x, axis=-1) ** 2 * np.linalg.norm(y, axis=-1)
             * np.linalg.norm(z, axis=-1))
    xyx = m(m(x, y), x)
    return max(_rel(m(xyx, z), m(x, m(y, m(x, z))), scale),
               _rel(m(z, xyx), m(m(m(z, x), y), x), scale),
               _rel(m(m(x, y), m(z, x)), m(m(x, m(y, z)), x), scale)), 1e-11


def conjugation(rng, level, n, cfg):
    x, y, _ = _triples(rng, level, n)
    scale = np.linalg.norm(x, axis=-1) * np.linalg.norm(y, axis=-1)
    return _rel(conj_arr(mul_arr(x, y)), mul_arr(conj_arr(y), conj_arr(x)), scale), 1e-12


def exp_ln(rng, level, n, cfg):
    x = rng.normal(size=(n, 1 << level))
    if level > 0:
        # |Im x| uniform in [0, 3), inside the principal range (0, pi)
        im = x[:, 1:]
        x[:, 1:] = im / np.linalg.norm(im, axis=1, keepdims=True) * rng.uniform(0, 3, size=(n, 1))
    back = ln_arr(exp_arr(x, cfg.small_angle), cfg.ln_branch_generator, cfg.small_angle)
    return float(np.max(np.abs(back - x))), 1e-9


def kernel(rng, level, n, cfg):
    if level == 0:
        raise ContractViolation("the kernel suite needs imaginary units (level >= 1)")
    m = rng.normal(size=(n, 1 << level))
    m[:, 0] = 0.0
    unit = m / np.linalg.norm(m, axis=1, keepdims=True)
    base = exp_arr(m)
    worst = 0.0
    for k in range(-3, 4):
        worst = max(worst, float(np.max(np.abs(exp_arr(m + 2 * math.pi * k * unit) - base))))
    return worst, 1e-9


def k_identities(rng, level, n, cfg):
    worst = 0.0
    for _ in range(n):
        a, b = rng.normal(size=(2, 1 << level))
        a[0] = b[0] = 0.0
        a *= rng.uniform(0, 1) / max(np.linalg.norm(a), 1e-300)
        b *= rng.uniform(0, 1) / max(np.linalg.norm(b), 1e-300)
        M, N = CdNumber(level, a), CdNumber(level, b)
        K = k_defect(M, N, cfg)
        worst = max(worst, (k_defect(K, -N, cfg) - M).norm(), (k_defect(-M, K, cfg) - N).norm(),
                    (K + k_defect(-N, -M, cfg)).norm())
    return worst, 1e-9


def decomposition(rng, level, n, cfg):
    worst = 0.0
    for _ in range(n):
        z = CdNumber(level, rng.normal(size=1 << level))
        re, im = re_im_split(z)
        blocks = component_decompose(z)
        ok = (re == z.coeffs[0] and np.array_equal(im.coeffs[1:], z.coeffs[1:])
              and [b.re for b in blocks] == list(z.coeffs))
        worst = max(worst, 0.0 if ok else 1.0)
    return worst, 0.0


def bar_laws(rng, level, n, cfg):
    """Counts failed laws: associativity (r <= 2) or alternativity (r = 3), inverse,
    normal-form idempotence and projection homomorphism; must be zero."""
    failures = 0
    for i in range(n):
        side = "AB"[i % 2]
        x, y, z = (random_word(rng, side, level, config=cfg) for _ in range(3))
        if level <= 2:
            failures += mul(mul(x, y, cfg), z, cfg) != mul(x, mul(y, z, cfg), cfg)
        else:
            failures += mul(x, mul(x, y, cfg), cfg) != mul(mul(x, x, cfg), y, cfg)
        failures += not mul(inverse(x, cfg), x, cfg).is_unit
        failures += normalize(x, cfg) != x
        if side == "A":
            failures += (project_a_to_b(mul(x, y, cfg), cfg)
                         != mul(project_a_to_b(x, cfg), project_a_to_b(y, cfg), cfg))
    return float(failures), 0.0


def twisted_axioms(rng, level, n, cfg):
    states = random_pure_states(rng, level, 3 * n)
    report = verify_twisted_axioms(list(zip(states[::3], states[1::3], states[2::3])))
    return max(r.residual for r in report.results.values()), 1e-11


def forms(rng, level, n, cfg):
    """``n`` tangent words in total, spread over the ~20 (condition, degree, index) checks."""
    per_check = max(1, -(-n // 20))
    worst = 0.0
    for family in (canonical_A_family(level, cfg), canonical_B_family(level, cfg)):
        worst = max(worst, check_compatibility(family, n_max=5, samples=per_check, rng=rng,
                                               config=cfg).max_residual)
    return worst, 1e-10


def cochain_d2(rng, level, n, cfg):
    worst = 0.0
    for _ in range(n):
        f = Cochain.random(rng, int(rng.integers(1, 7)), int(rng.integers(0, 3)), level)
        worst = max(worst, coboundary(coboundary(f, cfg), cfg).max_norm())
    return worst, 1e-12


SUITES: dict[str, tuple[Callable, int]] = {
    # name: (driver, default level)
    "alternativity": (alternativity, 3),
    "moufang": (moufang, 3),
    "conj": (conjugation, 3),
    "exp-ln": (exp_ln, 3),
    "kernel": (kernel, 3),
    "k-defect": (k_identities, 3),
    "decomposition": (decomposition, 3),
    "bar": (bar_laws, 2),
    "twisted": (twisted_axioms, 3),
    "forms": (forms, 2),
    "cochain": (cochain_d2, 2),
}


def run_suite(name: str, seed: int = 0, samples: int = 1000, level: int | None = None,
              config: Config | None = None) -> SuiteResult:
    if name not in SUITES:
        raise ContractViolation(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    if samples < 1:
        raise ContractViolation("samples must be positive")
    driver, default_level = SUITES[name]
    level = default_level if level is None else level
    if not 0 <= level <= 3:
        raise ContractViolation("level must be 0..3")
    rng = np.random.default_rng(seed)
    residual, tol = driver(rng, level, samples, resolve(config))
    return SuiteResult(name, level, samples, float(residual), float(tol))
