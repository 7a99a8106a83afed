"""Parameter schedules: level functions, sampling exponents and analysis radii.

A schedule fixes ``k``, a level function ``f``, the exponents ``λ_0..λ_{F-1}``
(level ``j`` survives into level ``j+1`` with probability ``n^(-λ_j/k)``),
the depth ``F`` and the radii ``r_0..r_F`` used only by the analysis.
All sequences are exact: ``int`` or :class:`fractions.Fraction`.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field, replace
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Sequence

import numpy as np

VARIANTS = ("hopset", "spanner-truncated", "spanner-half")


@dataclass(frozen=True)
class LevelFunction:
    """Monotone map ``f`` with ``f(i) >= i``.

    kinds: ``linear`` (``f(i) = max(k, i)``), ``identity``, ``interleaved``
    (``f(i) = ⌊i/c⌋·c + c - 1``) and ``custom`` (explicit table, extended by
    ``max(table[-1], i)`` past its end).
    """

    kind: str
    k: int | None = None
    c: int | None = None
    table: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.kind == "linear":
            if self.k is None or self.k < 1:
                raise ValueError("linear level function needs k >= 1")
        elif self.kind == "interleaved":
            if not isinstance(self.c, int) or self.c < 1:
                raise ValueError("interleaved level function needs an integer c >= 1")
        elif self.kind == "custom":
            if not self.table:
                raise ValueError("custom level function needs a non-empty table")
            tab = tuple(int(x) for x in self.table)
            object.__setattr__(self, "table", tab)
            for i, x in enumerate(tab):
                if x < i:
                    raise ValueError(f"custom f violates f(i) >= i at i={i}")
                if i and x < tab[i - 1]:
                    raise ValueError(f"custom f is not monotone at i={i}")
        elif self.kind != "identity":
            raise ValueError(f"unknown level function kind {self.kind!r}")

    @classmethod
    def linear(cls, k: int) -> "LevelFunction":
        return cls("linear", k=k)

    @classmethod
    def identity(cls) -> "LevelFunction":
        return cls("identity")

    @classmethod
    def interleaved(cls, c: int) -> "LevelFunction":
        return cls("interleaved", c=c)

    @classmethod
    def custom(cls, table: Sequence[int]) -> "LevelFunction":
        return cls("custom", table=tuple(table))

    def __call__(self, i: int) -> int:
        if i < 0:
            raise ValueError("level index must be non-negative")
        if self.kind == "linear":
            return max(self.k, i)
        if self.kind == "identity":
            return i
        if self.kind == "interleaved":
            return (i // self.c) * self.c + self.c - 1
        tab = self.table
        return tab[i] if i < len(tab) else max(tab[-1], i)

    def inverse(self, j: int) -> int:
        """Smallest ``i`` with ``f(i) >= j``."""
        if j < 0:
            raise ValueError("level index must be non-negative")
        if self.kind == "linear":
            return 0 if j <= self.k else j
        if self.kind == "identity":
            return j
        if self.kind == "interleaved":
            return (j // self.c) * self.c
        for i, x in enumerate(self.table):
            if x >= j:
                return i
        return max(j, len(self.table))

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.k is not None:
            d["k"] = self.k
        if self.c is not None:
            d["c"] = self.c
        if self.table is not None:
            d["table"] = list(self.table)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "LevelFunction":
        table = d.get("table")
        return cls(d["kind"], k=d.get("k"), c=d.get("c"), table=tuple(table) if table else None)

    def __str__(self) -> str:
        if self.kind == "linear":
            return f"linear(k={self.k})"
        if self.kind == "interleaved":
            return f"interleaved(c={self.c})"
        if self.kind == "custom":
            return f"custom({list(self.table)})"
        return "identity"


def parse_level_function(text: str, k: int | None = None) -> LevelFunction:
    """Parse ``linear``, ``identity``, ``interleaved:C`` or ``custom:0,2,2,3``."""
    name, _, arg = text.partition(":")
    name = name.strip().lower()
    if name == "linear":
        if k is None:
            raise ValueError("linear level function needs k")
        return LevelFunction.linear(k)
    if name == "identity":
        return LevelFunction.identity()
    if name == "interleaved":
        if not arg:
            raise ValueError("interleaved needs a parameter, e.g. interleaved:2")
        return LevelFunction.interleaved(int(arg))
    if name == "custom":
        return LevelFunction.custom([int(x) for x in arg.split(",") if x.strip()])
    raise ValueError(f"unknown level function {text!r}")


def f_inverse(f: LevelFunction, j: int, domain_max: int | None = None) -> int:
    """``min{i : j <= f(i)}``; raises if ``j`` exceeds ``f(domain_max)``."""
    if domain_max is not None and j > f(domain_max):
        raise ValueError(f"level {j} is outside the range of f on [0, {domain_max}]")
    return f.inverse(j)


def _check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")


def compute_lambdas(k: int, f: LevelFunction, variant: str = "hopset") -> tuple[tuple, int]:
    """Exponents from the recurrence, stopped at the smallest adequate ``F``.

    Hopset variants use ``λ_j = 1 + Σ_{l<f⁻¹(j)} λ_l`` (integers); the
    half-bunch spanner uses a third of that (exact fractions).
    """
    _check_variant(variant)
    if k < 1:
        raise ValueError("k must be >= 1")
    half = variant == "spanner-half"
    lams: list = []
    prefix = [0]  # prefix[j] = Σ_{l<j} λ_l
    while prefix[-1] < k + 1:
        j = len(lams)
        base = 1 + prefix[f.inverse(j)]
        lam = Fraction(base, 3) if half else base
        lams.append(lam)
        prefix.append(prefix[-1] + lam)
    return tuple(lams), len(lams)


def compute_radii(f: LevelFunction, t, F: int, variant: str = "hopset", r0=1) -> tuple[Fraction, ...]:
    """Radii ``r_0..r_F`` taken with equality in the variant's recurrence."""
    _check_variant(variant)
    t = Fraction(t)
    if t <= 0:
        raise ValueError("t must be positive")
    if F < 1:
        raise ValueError("F must be >= 1")
    r = [Fraction(r0)]
    if variant == "spanner-half":
        a, b, add = 2 + 8 / t, 3 + 8 / t, Fraction(4)
    else:
        a, b = 1 + 4 / t, 2 + 4 / t
        add = Fraction(2) if variant == "spanner-truncated" else Fraction(0)
    for i in range(1, F + 1):
        r.append(a * r[i - 1] + b * r[f.inverse(i - 1)] + add)
    return tuple(r)


def rF_upper_bound(k: int, c: int) -> float:
    """Closed-form ceiling ``96e²·k^(1+2/ln c)`` on the interleaved top radius."""
    if isinstance(c, bool) or not isinstance(c, (int, np.integer)):
        raise ValueError("c must be an integer")
    if c < 2:
        raise ValueError("c must be >= 2")
    if k < 1:
        raise ValueError("k must be >= 1")
    return 96 * math.e ** 2 * k ** (1 + 2 / math.log(c))


def lower_bound_radii(f: LevelFunction, alpha, F: int) -> tuple[Fraction, ...]:
    """Radii of the tower construction: ``r_{j+1} = (1+1/α)r_j + (2+1/α)r_{f⁻¹(j)}``."""
    alpha = Fraction(alpha)
    if alpha < 1:
        raise ValueError("alpha must be >= 1")
    r = [Fraction(1)]
    for j in range(F):
        r.append((1 + 1 / alpha) * r[j] + (2 + 1 / alpha) * r[f.inverse(j)])
    return tuple(r)


def big_lambdas(lambdas: Sequence) -> tuple:
    """``Λ_j = 1 + Σ_{l<j} λ_l`` for ``j = 0..F``."""
    out = [1]
    for lam in lambdas:
        out.append(out[-1] + lam)
    return tuple(out)


class Verdict(enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    PRECONDITION_UNMET = "precondition unmet"

    def __bool__(self) -> bool:
        return self is Verdict.HOLDS


def power_mean_inequality_holds(a: float, b: float, d: float, grid=(0.0, 10.0, 200), rtol: float = 1e-12) -> Verdict:
    """Check ``a·x^(1+1/d) + b·y^(1+1/d) >= (x+y)^(1+1/d)`` on a square grid.

    ``grid`` is ``(lo, hi, num)`` per axis. The check is only meaningful when
    ``a^-d + b^-d <= 1``; otherwise the precondition verdict is returned.
    """
    if a <= 1 or b <= 1 or d <= 0:
        raise ValueError("need a > 1, b > 1, d > 0")
    if a ** -d + b ** -d > 1 + 1e-12:
        return Verdict.PRECONDITION_UNMET
    lo, hi, num = grid
    xs = np.linspace(lo, hi, int(num))
    x, y = np.meshgrid(xs, xs, indexing="ij")
    e = 1 + 1 / d
    lhs = a * x ** e + b * y ** e
    rhs = (x + y) ** e
    return Verdict.HOLDS if np.all(lhs >= rhs * (1 - rtol)) else Verdict.FAILS


def _fraction_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _decimal_str(x: Fraction, digits: int = 30) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(x.numerator) / Decimal(x.denominator))


@dataclass(frozen=True)
class ParamSchedule:
    """Everything the construction and its analysis need for one run."""

    k: int
    f: LevelFunction
    lambdas: tuple
    F: int
    t: Fraction
    radii: tuple[Fraction, ...]
    variant: str = "hopset"
    r0: Fraction = field(default=Fraction(1))

    @classmethod
    def make(cls, k: int, f: LevelFunction | str, t=1, variant: str = "hopset", r0=1) -> "ParamSchedule":
        if isinstance(f, str):
            f = parse_level_function(f, k)
        lambdas, F = compute_lambdas(k, f, variant)
        radii = compute_radii(f, t, F, variant, r0)
        return cls(k, f, lambdas, F, Fraction(t), radii, variant, Fraction(r0))

    def with_t(self, t) -> "ParamSchedule":
        """Same sampling exponents, radii recomputed for another ``t``."""
        return replace(self, t=Fraction(t), radii=compute_radii(self.f, t, self.F, self.variant, self.r0))

    def finv(self, j: int) -> int:
        return self.f.inverse(j)

    @property
    def rF(self) -> Fraction:
        return self.radii[self.F]

    @property
    def hop_budget(self) -> int:
        """``⌈4·r_F⌉ + 3``."""
        return math.ceil(4 * self.rF) + 3

    @property
    def hopset_stretch(self) -> Fraction:
        return 2 * self.t + 3

    def probabilities(self, n: int) -> list[float]:
        """Per-level promotion probabilities ``n^(-λ_j/k)``."""
        if n <= 1:
            return [0.0 if n == 0 else 1.0 for _ in self.lambdas]
        return [float(n) ** (-float(lam) / self.k) for lam in self.lambdas]

    def validate(self) -> None:
        """Re-check every invariant; raises ``ValueError`` on the first failure."""
        _check_variant(self.variant)
        lams, F = compute_lambdas(self.k, self.f, self.variant)
        if tuple(lams) != tuple(self.lambdas) or F != self.F:
            raise ValueError("lambdas/F do not match the recurrence")
        total = sum(self.lambdas)
        if not (total >= self.k + 1 and total - self.lambdas[-1] < self.k + 1):
            raise ValueError("F is not minimal")
        if self.variant != "spanner-half" and F > self.k + 1:
            raise ValueError("F exceeds k+1")
        if tuple(self.radii) != compute_radii(self.f, self.t, self.F, self.variant, self.r0):
            raise ValueError("radii do not satisfy the recurrence")
        if any(b < a for a, b in zip(self.radii, self.radii[1:])):
            raise ValueError("radii are not monotone")
        for i in range(1, self.F + 1):
            if self.f.inverse(i - 1) > i - 1:
                raise ValueError("empty score window")

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "f": self.f.to_dict(),
            "variant": self.variant,
            "t": _fraction_str(self.t),
            "r0": _fraction_str(self.r0),
            "F": self.F,
            "lambdas": [_fraction_str(x) for x in self.lambdas],
            "radii": [_decimal_str(r) for r in self.radii],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "ParamSchedule":
        sched = cls.make(d["k"], LevelFunction.from_dict(d["f"]), Fraction(d["t"]), d["variant"], Fraction(d.get("r0", "1")))
        if "lambdas" in d and [_fraction_str(x) for x in sched.lambdas] != list(d["lambdas"]):
            raise ValueError("stored lambdas disagree with the recurrence")
        if "F" in d and d["F"] != sched.F:
            raise ValueError("stored F disagrees with the recurrence")
        return sched

    @classmethod
    def from_json(cls, text: str) -> "ParamSchedule":
        return cls.from_dict(json.loads(text))

    def summary(self) -> str:
        lam = ", ".join(_fraction_str(x) for x in self.lambdas)
        return (
            f"{self.variant} k={self.k} f={self.f} F={self.F} t={_fraction_str(self.t)} "
            f"lambda=[{lam}] r_F={float(self.rF):.6g}"
        )
