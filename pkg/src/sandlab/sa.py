"""Ranges, sand-automaton local rules and exact global steps.

A local rule maps the saturated relative-height neighborhood seen from the
top of a pile (its range) to a variation in [-r, r].  The global step acts
exactly on the finite configuration descriptions: infinite piles are fixed,
backgrounds move by the flat-range variation, and the core is recomputed
over the light cone before re-canonicalizing.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .heights import Height, MINUS_INF, PLUS_INF, add, is_finite
from .lattice import (
    Configuration,
    Kind,
    constant,
    grid_config,
    height_at,
    line_config,
    periodic_config,
)
from .metric import beta


class CenterInfiniteError(ValueError):
    """Ranges are only defined at piles with a finite number of grains."""


def range_offsets(dim: int, r: int) -> list[tuple[int, ...]]:
    """Off-center offsets of a radius-r range, lexicographically sorted."""
    return [o for o in product(range(-r, r + 1), repeat=dim) if any(v != 0 for v in o)]


@dataclass(frozen=True)
class Range:
    dim: int
    radius: int
    entries: tuple  # values at range_offsets(dim, radius), in that order

    def __post_init__(self):
        if len(self.entries) != (2 * self.radius + 1) ** self.dim - 1:
            raise ValueError("wrong number of range entries")

    def entry(self, offset) -> Height:
        if isinstance(offset, int):
            offset = (offset,)
        offs = range_offsets(self.dim, self.radius)
        return self.entries[offs.index(tuple(offset))]


def flat_range(dim: int, r: int) -> Range:
    return Range(dim, r, (0,) * ((2 * r + 1) ** dim - 1))


class SaRule:
    """Base class: a total local rule from ranges to variations."""

    dim: int
    radius: int
    name: str

    def apply(self, rng: Range) -> int:
        raise NotImplementedError

    def __repr__(self):
        return f"<SaRule {self.name} dim={self.dim} r={self.radius}>"


def table_digit(r: int, v: Height) -> int:
    """Entry value -> digit: -inf, -r..r, +inf map to 0..2r+2."""
    if v == MINUS_INF:
        return 0
    if v == PLUS_INF:
        return 2 * r + 2
    return v + r + 1


def digit_value(r: int, d: int) -> Height:
    if d == 0:
        return MINUS_INF
    if d == 2 * r + 2:
        return PLUS_INF
    return d - r - 1


def range_index(rng: Range) -> int:
    """Dense-table index: sum of digit * (2r+3)^position over sorted offsets."""
    r = rng.radius
    base = 2 * r + 3
    idx = 0
    for pos, v in enumerate(rng.entries):
        idx += table_digit(r, v) * base**pos
    return idx


def range_from_index(dim: int, r: int, idx: int) -> Range:
    base = 2 * r + 3
    n = (2 * r + 1) ** dim - 1
    entries = []
    for _ in range(n):
        entries.append(digit_value(r, idx % base))
        idx //= base
    return Range(dim, r, tuple(entries))


def all_ranges(dim: int, r: int):
    n = (2 * r + 1) ** dim - 1
    vals = [MINUS_INF] + list(range(-r, r + 1)) + [PLUS_INF]
    for entries in product(vals, repeat=n):
        yield Range(dim, r, entries)


class TableRule(SaRule):
    def __init__(self, dim: int, radius: int, table, name: str = "TABLE"):
        n = (2 * radius + 3) ** ((2 * radius + 1) ** dim - 1)
        table = tuple(table)
        if len(table) != n:
            raise ValueError(f"dense table needs {n} entries")
        if any(not -radius <= v <= radius for v in table):
            raise ValueError("table outputs must lie in [-r, r]")
        self.dim, self.radius, self.table, self.name = dim, radius, table, name

    def apply(self, rng: Range) -> int:
        if rng.dim != self.dim or rng.radius != self.radius:
            raise ValueError("range does not match rule signature")
        return self.table[range_index(rng)]


class FuncRule(SaRule):
    def __init__(self, dim: int, radius: int, fn, name: str, memoize: bool = False):
        self.dim, self.radius, self.fn, self.name = dim, radius, fn, name
        self._memo: dict | None = {} if memoize else None

    def apply(self, rng: Range) -> int:
        if rng.dim != self.dim or rng.radius != self.radius:
            raise ValueError("range does not match rule signature")
        if self._memo is None:
            return self.fn(rng)
        v = self._memo.get(rng.entries)
        if v is None:
            v = self.fn(rng)
            self._memo[rng.entries] = v
        return v


def identity_rule(radius: int = 1, dim: int = 1) -> SaRule:
    return FuncRule(dim, radius, lambda rng: 0, "IDENTITY")


def raise_rule(radius: int = 1, dim: int = 1) -> SaRule:
    """The raising map: every pile gains one grain per step."""
    return FuncRule(dim, radius, lambda rng: 1, "RAISE")


def range_at(x: Configuration, i, r: int) -> Range:
    if x.dim == 1 and isinstance(i, int):
        i = (i,)
    center = height_at(x, i if x.dim > 1 else i[0])
    if not is_finite(center):
        raise CenterInfiniteError(f"pile at {i} is infinite")
    entries = []
    for off in range_offsets(x.dim, r):
        j = tuple(a + b for a, b in zip(i, off))
        entries.append(beta(r, center, height_at(x, j if x.dim > 1 else j[0])))
    return Range(x.dim, r, tuple(entries))


def apply_local(f: SaRule, rng: Range) -> int:
    v = f.apply(rng)
    if not -f.radius <= v <= f.radius:
        raise ValueError(f"rule {f.name} returned {v} outside [-r, r]")
    return v


def _bg_delta(f: SaRule, bg: Height) -> int:
    if not is_finite(bg):
        return 0
    return apply_local(f, flat_range(f.dim, f.radius))


def step(f: SaRule, x: Configuration) -> Configuration:
    """One synchronous update of the whole configuration."""
    if f.dim != x.dim:
        raise ValueError("dimension mismatch")
    r = f.radius
    if x.kind is Kind.PERIODIC:
        cells = []
        for j in range(x.period):
            v = x.cells[j]
            cells.append(v if not is_finite(v) else add(v, apply_local(f, range_at(x, j, r))))
        return periodic_config(cells)
    if x.dim == 1:
        new_left = add(x.left, _bg_delta(f, x.left))
        new_right = add(x.right, _bg_delta(f, x.right))
        if x.is_constant():
            return line_config((), 0, new_left, new_right)
        lo = x.origin - r
        hi = x.origin + len(x.core) - 1 + r
        core = []
        for i in range(lo, hi + 1):
            v = height_at(x, i)
            core.append(v if not is_finite(v) else add(v, apply_local(f, range_at(x, i, r))))
        return line_config(core, lo, new_left, new_right)
    new_bg = add(x.left, _bg_delta(f, x.left))
    if x.is_constant():
        return constant(new_bg, dim=2)
    (o1, o2) = x.origin
    n1, n2 = len(x.core), len(x.core[0])
    rows = []
    for a in range(o1 - r, o1 + n1 + r):
        row = []
        for b in range(o2 - r, o2 + n2 + r):
            v = height_at(x, (a, b))
            row.append(v if not is_finite(v) else add(v, apply_local(f, range_at(x, (a, b), r))))
        rows.append(row)
    return grid_config(rows, (o1 - r, o2 - r), new_bg)


@dataclass(frozen=True)
class OrbitRecord:
    step: int
    config: Configuration
    drift: int = 0


def orbit(f: SaRule, x: Configuration, n_steps: int) -> list[OrbitRecord]:
    if n_steps < 0:
        raise ValueError("n_steps must be >= 0")
    records = [OrbitRecord(0, x)]
    cur = x
    for n in range(1, n_steps + 1):
        cur = step(f, cur)
        records.append(OrbitRecord(n, cur))
    return records


def oracle_step_window(f: SaRule, heights, n: int):
    """Brute-force n-step update of an explicit 1-d height array.

    Each step trims the radius off both ends, so only the light-cone-valid
    central region is returned.  This is the independent check for ``step``
    and for iterated rules; it never consults them.
    """
    if f.dim != 1:
        raise ValueError("the window oracle is one-dimensional")
    r = f.radius
    cur = list(heights)
    if len(cur) < 2 * n * r + 1:
        raise ValueError("window too small for the requested number of steps")
    for _ in range(n):
        nxt = []
        for i in range(r, len(cur) - r):
            c = cur[i]
            if not is_finite(c):
                nxt.append(c)
                continue
            entries = tuple(
                beta(r, c, cur[i + o]) for o in range(-r, r + 1) if o != 0
            )
            nxt.append(add(c, apply_local(f, Range(1, r, entries))))
        cur = nxt
    return tuple(cur)


def realize_range(rng: Range) -> tuple:
    """Canonical height array over [-R, R] realizing a 1-d range at center 0.

    Saturated entries are materialized at magnitude radius + 1, the least
    value the comparator still saturates on.
    """
    R = rng.radius
    arr: list[Height] = [0] * (2 * R + 1)
    for off, v in zip(range_offsets(1, R), rng.entries):
        o = off[0]
        if v == PLUS_INF:
            arr[o + R] = R + 1
        elif v == MINUS_INF:
            arr[o + R] = -(R + 1)
        else:
            arr[o + R] = v
    return tuple(arr)


def iterate_local_rule(f: SaRule, n: int) -> SaRule:
    """A single rule whose global map equals n applications of f.

    The radius is (3n-2)r.  Cells saturated at that precision start more
    than R grains from the center; a chain of unsaturated reads gains at
    most r per hop and heights drift at most r per step on each side, so
    the set of cells whose exact value matters closes on the center by at
    most 3r per step and still misses it after n-1 steps.  Entries are
    therefore read at radius (3n-2)r, with saturated neighbors realized
    just beyond it.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if f.dim != 1:
        raise ValueError("rule iteration is implemented for dimension 1")
    r = f.radius
    R = (3 * n - 2) * r

    def fn(rng: Range) -> int:
        arr = realize_range(rng)
        out = oracle_step_window(f, arr, n)
        return out[len(out) // 2]

    return FuncRule(1, R, fn, f"{f.name}^{n}", memoize=True)


@dataclass
class CharacterizationReport:
    ok: bool
    checked: int
    failure: str | None = None
    witness: object = None


def check_characterization(f: SaRule, samples: int, seed: int = 0, modulus_w: int = 2) -> CharacterizationReport:
    """Property harness for the defining invariants of a sand automaton.

    Verifies shift commutation, vertical commutation, infinity preservation
    and the uniform-continuity modulus on sampled configurations.  A failure
    indicates an implementation bug, not a property of the rule.
    """
    import random

    from .metric import ground_cylinder
    from .sampling import random_configuration

    rand = random.Random(seed)
    r, w = f.radius, modulus_w
    from .lattice import raise_by, shift

    for t in range(samples):
        x = random_configuration(rand, dim=f.dim)
        k = rand.randint(-3, 3)
        kk = k if f.dim == 1 else (k, rand.randint(-3, 3))
        if step(f, shift(x, kk)) != shift(step(f, x), kk):
            return CharacterizationReport(False, t, "shift-commutation", x)
        m = rand.randint(-4, 4)
        if step(f, raise_by(x, m)) != raise_by(step(f, x), m):
            return CharacterizationReport(False, t, "vertical-commutation", x)
        fx = step(f, x)
        zero = 0 if f.dim == 1 else (0, 0)
        for probe in range(-2, 3):
            i = probe if f.dim == 1 else (probe, 0)
            a, b = height_at(x, i), height_at(fx, i)
            if (a == PLUS_INF) != (b == PLUS_INF) or (a == MINUS_INF) != (b == MINUS_INF):
                return CharacterizationReport(False, t, "infinity-preservation", x)
        if f.dim == 1:
            # agree with x on [-(r+w), r+w], arbitrary elsewhere
            far = r + w + 1 + rand.randint(0, 2)
            core = [height_at(x, i) for i in range(-far, far + 1)]
            core[0] = rand.choice([MINUS_INF, PLUS_INF, core[0] if is_finite(core[0]) else 0, 17])
            core[-1] = rand.choice([MINUS_INF, PLUS_INF, -9, 3])
            y = line_config(core, -far, rand.randint(-3, 3), rand.randint(-3, 3))
            if ground_cylinder(x, 0, r + w) == ground_cylinder(y, 0, r + w):
                if ground_cylinder(step(f, x), 0, w) != ground_cylinder(step(f, y), 0, w):
                    return CharacterizationReport(False, t, "uniform-continuity-modulus", (x, y))
    return CharacterizationReport(True, samples)
