"""First-quadrant Serre spectral sequences over finitely generated abelian groups.

Scenario data is always integral homology of fiber, base and total space.
For the cohomological direction the fiber and total lists are converted by
universal coefficients, and

    E_2^{p,q} = Hom(H_p B, H^q F) ⊕ Ext(H_{p-1} B, H^q F),

while the homological direction uses

    E^2_{p,q} = H_p B ⊗ H_q F ⊕ Tor(H_{p-1} B, H_q F).

The solver enumerates differentials page by page and keeps every
assignment whose limit can reassemble the total (co)homology.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .fgab import (
    FgAbGroup,
    G,
    GroupHom,
    _columns_to_matrix,
    enumerate_homs,
    ext,
    format_list,
    hom,
    homs_complete,
    p_rank_bound_ok,
    subquotient,
    tensor,
    tor,
    uct_cohomology,
)

HOMOLOGICAL = "homological"
COHOMOLOGICAL = "cohomological"
Position = tuple[int, int]


@dataclass(frozen=True)
class Slot:
    """A group known only up to a finite candidate set."""

    name: str
    candidates: tuple[FgAbGroup, ...]
    plus: FgAbGroup = FgAbGroup()  # known summand: the entry is plus ⊕ (slot value)

    def __post_init__(self):
        if not self.candidates:
            raise ValueError(f"unknown slot {self.name!r} has no candidates")

    def entry(self, value: FgAbGroup) -> FgAbGroup:
        return self.plus + value


def _parse_entry(entry, where: str):
    if isinstance(entry, dict):
        if "unknown" not in entry:
            raise ValueError(f"{where}: object entries need an 'unknown' candidate list")
        cands = tuple(FgAbGroup.parse(c) for c in entry["unknown"])
        return Slot(entry.get("name", where), cands, FgAbGroup.parse(entry.get("plus", "0")))
    if isinstance(entry, (Slot, FgAbGroup)):
        return entry
    return FgAbGroup.parse(entry)


@dataclass
class FibrationScenario:
    name: str
    fiber: list
    base: list
    total: list
    direction: str = HOMOLOGICAL
    base_simply_connected: bool = True
    citation: str = ""

    def __post_init__(self):
        if self.direction not in (HOMOLOGICAL, COHOMOLOGICAL):
            raise ValueError(f"direction must be {HOMOLOGICAL!r} or {COHOMOLOGICAL!r}")
        if not self.base_simply_connected:
            raise ValueError("local coefficients are not supported: the base must be simply connected")
        for label in ("fiber", "base", "total"):
            raw = getattr(self, label)
            if not raw:
                raise ValueError(f"{label} homology list is empty")
            setattr(self, label, [_parse_entry(e, f"{label}[{i}]") for i, e in enumerate(raw)])
        expected = len(self.fiber) + len(self.base) - 1
        if len(self.total) > expected:
            raise ValueError(
                f"total list has {len(self.total)} entries; fiber and base allow at most {expected}"
            )

    @property
    def slots(self) -> list[tuple[str, int, Slot]]:
        out = []
        for label in ("fiber", "base", "total"):
            for i, e in enumerate(getattr(self, label)):
                if isinstance(e, Slot):
                    out.append((label, i, e))
        return out

    def instances(self):
        """Yield ``(choice, fiber, base, total)`` for every combination of slot candidates."""
        slots = self.slots
        for combo in itertools.product(*(s.candidates for _, _, s in slots)):
            lists = {k: list(getattr(self, k)) for k in ("fiber", "base", "total")}
            for (label, i, slot), g in zip(slots, combo):
                lists[label][i] = slot.entry(g)
            choice = {s.name: g for (_, _, s), g in zip(slots, combo)}
            yield choice, lists["fiber"], lists["base"], lists["total"]

    def with_direction(self, direction: str) -> "FibrationScenario":
        return FibrationScenario(self.name, self.fiber, self.base, self.total, direction,
                                 self.base_simply_connected, self.citation)

    @classmethod
    def from_dict(cls, data: dict) -> "FibrationScenario":
        missing = [k for k in ("name", "fiber", "base", "total") if k not in data]
        if missing:
            raise ValueError(f"scenario is missing keys: {', '.join(missing)}")
        return cls(
            data["name"], data["fiber"], data["base"], data["total"],
            data.get("direction", HOMOLOGICAL), data.get("base_simply_connected", True),
            data.get("citation", ""),
        )

    @classmethod
    def from_json(cls, text: str) -> "FibrationScenario":
        return cls.from_dict(json.loads(text))

    @classmethod
    def load(cls, path) -> "FibrationScenario":
        return cls.from_json(Path(path).read_text())


# -- pages -------------------------------------------------------------------------


def differential_target(pos: Position, r: int, direction: str) -> Position:
    p, q = pos
    if direction == HOMOLOGICAL:
        return (p - r, q + r - 1)
    return (p + r, q - r + 1)


def differential_source(pos: Position, r: int, direction: str) -> Position:
    p, q = pos
    if direction == HOMOLOGICAL:
        return (p + r, q - r + 1)
    return (p - r, q + r - 1)


@dataclass
class SpectralPage:
    r: int
    direction: str
    grid: dict[Position, FgAbGroup]
    differentials: dict[Position, GroupHom] = field(default_factory=dict)

    def __post_init__(self):
        self.grid = {pos: g for pos, g in self.grid.items() if not g.is_zero}
        for (p, q) in self.grid:
            if p < 0 or q < 0:
                raise ValueError(f"position {(p, q)} is outside the first quadrant")

    def group(self, pos: Position) -> FgAbGroup:
        return self.grid.get(pos, FgAbGroup())

    def target(self, pos: Position) -> Position:
        return differential_target(pos, self.r, self.direction)

    def source(self, pos: Position) -> Position:
        return differential_source(pos, self.r, self.direction)

    def live_positions(self) -> list[Position]:
        """Positions whose outgoing differential has nonzero source and target."""
        return sorted(pos for pos in self.grid if self.target(pos) in self.grid)

    def diagonal(self, n: int) -> list[tuple[Position, FgAbGroup]]:
        """Nonzero entries with p + q = n in filtration order (smallest piece first)."""
        items = [((p, q), g) for (p, q), g in self.grid.items() if p + q == n]
        reverse = self.direction == COHOMOLOGICAL
        return sorted(items, key=lambda it: it[0][0], reverse=reverse)

    def check(self) -> None:
        for pos, d in self.differentials.items():
            tgt = self.target(pos)
            if d.source != self.group(pos) or d.target != self.group(tgt):
                raise ValueError(f"differential at {pos} has type {d.source} -> {d.target}, "
                                 f"expected {self.group(pos)} -> {self.group(tgt)}")
        for pos, d in self.differentials.items():
            nxt = self.differentials.get(self.target(pos))
            if nxt is not None and not nxt.compose(d).is_zero:
                raise ValueError(f"d∘d is not zero at {pos}")

    def __str__(self) -> str:
        if not self.grid:
            return f"E_{self.r}: all zero"
        P = max(p for p, _ in self.grid)
        Q = max(q for _, q in self.grid)
        cells = [[str(self.group((p, q))) if (p, q) in self.grid else "." for p in range(P + 1)]
                 for q in range(Q + 1)]
        width = max(len(c) for row in cells for c in row)
        lines = [f"E_{self.r} ({self.direction})"]
        for q in range(Q, -1, -1):
            lines.append(f"{q:>3} | " + " ".join(c.rjust(width) for c in cells[q]))
        lines.append("      " + " ".join(str(p).rjust(width) for p in range(P + 1)))
        return "\n".join(lines)


def _e2_grid(fiber, base, direction) -> dict[Position, FgAbGroup]:
    grid = {}
    zero = FgAbGroup()
    if direction == HOMOLOGICAL:
        for p in range(len(base) + 1):
            for q, F in enumerate(fiber):
                b = base[p] if p < len(base) else zero
                prev = base[p - 1] if p >= 1 else zero
                grid[(p, q)] = tensor(b, F) + tor(prev, F)
    else:
        Fc = uct_cohomology(fiber)
        for p in range(len(base) + 1):
            for q, F in enumerate(Fc):
                b = base[p] if p < len(base) else zero
                prev = base[p - 1] if p >= 1 else zero
                grid[(p, q)] = hom(b, F) + ext(prev, F)
    return grid


def build_e2(s: FibrationScenario, choice: dict | None = None) -> SpectralPage:
    """E_2 page of a scenario; unknown slots must be fixed through ``choice``."""
    choice = choice or {}

    def pick(e):
        if not isinstance(e, Slot):
            return e
        if e.name not in choice:
            raise ValueError(f"no value chosen for unknown slot {e.name!r}")
        return e.entry(G(choice[e.name]))

    fiber = [pick(e) for e in s.fiber]
    base = [pick(e) for e in s.base]
    return SpectralPage(2, s.direction, _e2_grid(fiber, base, s.direction))


def _relation_columns(A: FgAbGroup) -> list[list[int]]:
    a = A.ngens
    return [[o if i == j else 0 for i in range(a)] for j, o in enumerate(A.orders) if o]


def homology_at(A: FgAbGroup, d_in: GroupHom | None, d_out: GroupHom | None) -> FgAbGroup:
    """``ker(d_out) / im(d_in)`` at a group ``A``."""
    a = A.ngens
    if a == 0:
        return A
    if d_out is None or d_out.is_zero:
        L = [[int(i == j) for i in range(a)] for j in range(a)]
    else:
        L = d_out._preimage_lattice()
    gens = _relation_columns(A)
    if d_in is not None and not d_in.is_zero:
        gens += [list(c) for c in zip(*d_in.matrix)]
    return subquotient(L, gens, a)


def turn_page(page: SpectralPage) -> SpectralPage:
    """Next page from ``page`` and its (partial) differential assignment; missing maps are zero."""
    page.check()
    grid = {}
    for pos, A in page.grid.items():
        d_out = page.differentials.get(pos)
        d_in = page.differentials.get(page.source(pos))
        grid[pos] = homology_at(A, d_in, d_out)
    return SpectralPage(page.r + 1, page.direction, grid)


# -- limits -----------------------------------------------------------------------------


def extensions(A: FgAbGroup, C: FgAbGroup) -> set[FgAbGroup]:
    """Isomorphism types of groups ``G`` with ``0 -> A -> G -> C -> 0``."""
    a = A.ngens
    c_orders = C.orders
    ngens = a + len(c_orders)
    base_rel = [[o if i == j else 0 for i in range(ngens)] for j, o in enumerate(A.orders) if o]
    torsion_c = [(j, c) for j, c in enumerate(c_orders) if c]
    # a_j ranges over A / c_j A, one coefficient per generator of A
    per_gen = []
    for _, c in torsion_c:
        ranges = [range(c if o == 0 else math.gcd(c, o)) for o in A.orders]
        per_gen.append(list(itertools.product(*ranges)))
    out = set()
    for choice in itertools.product(*per_gen):
        rels = list(base_rel)
        for (j, c), coeffs in zip(torsion_c, choice):
            col = [-x for x in coeffs] + [0] * len(c_orders)
            col[a + j] = c
            rels.append(col)
        R = _columns_to_matrix(rels, ngens) if rels else []
        out.add(FgAbGroup.from_relations(R, ngens))
    return out


def extension_candidates(pieces) -> set[FgAbGroup]:
    """Groups with a filtration whose quotients are ``pieces`` (smallest subgroup first)."""
    current = {FgAbGroup()}
    for piece in pieces:
        nxt = set()
        for A in current:
            nxt |= extensions(A, piece)
        current = nxt
    return current


@dataclass
class Diagonal:
    n: int
    pieces: list[tuple[Position, FgAbGroup]]
    candidates: set[FgAbGroup]

    @property
    def extension_flag(self) -> bool:
        return len(self.candidates) > 1

    def __str__(self) -> str:
        grp = " | ".join(str(g) for g in sorted(self.candidates, key=str))
        flag = " (extension ambiguous)" if self.extension_flag else ""
        return f"n={self.n}: {grp}{flag}"


def assemble_limit(page: SpectralPage, top: int | None = None) -> list[Diagonal]:
    if top is None:
        top = max((p + q for p, q in page.grid), default=0)
    out = []
    for n in range(top + 1):
        pieces = page.diagonal(n)
        out.append(Diagonal(n, pieces, extension_candidates([g for _, g in pieces])))
    return out


# -- solver -------------------------------------------------------------------------------


@dataclass
class ForcedMap:
    page: int
    position: Position
    hom: GroupHom

    @property
    def label(self) -> str:
        """The map with its sign dropped, e.g. ``2`` for multiplication by -2."""
        m = self.hom
        if m.is_zero:
            return "0"
        if m.source.ngens == 1 and m.target.ngens == 1:
            return str(abs(m.matrix[0][0]))
        first = next(x for row in m.matrix for x in row if x)
        return str(m if first > 0 else m.negated())

    def __str__(self):
        return f"d_{self.page} at {self.position}: {self.hom.source} -> {self.hom.target} is ±{self.label}"


@dataclass
class Solution:
    choice: dict[str, FgAbGroup]
    maps: dict[tuple[int, Position], GroupHom]
    limit: list[Diagonal]


@dataclass
class SolverResult:
    scenario: str
    consistent: bool
    forced: list[ForcedMap]
    ambiguous: list[tuple[int, Position]]
    extension_flags: list[Diagonal]
    unknowns: dict[str, list[FgAbGroup]]
    solutions: list[Solution] = field(repr=False)
    blocking: tuple[int, Position] | None = None
    partial: bool = False
    complete_up_to_bound: bool = False
    nodes: int = 0

    def forced_map(self, page: int, position: Position) -> GroupHom | None:
        for f in self.forced:
            if f.page == page and f.position == position:
                return f.hom
        return None

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "consistent": self.consistent,
            "solutions": len(self.solutions),
            "forced": [
                {"page": f.page, "position": list(f.position), "source": str(f.hom.source),
                 "target": str(f.hom.target), "map": str(f.hom), "matrix": [list(r) for r in f.hom.matrix]}
                for f in self.forced
            ],
            "ambiguous": [{"page": r, "position": list(p)} for r, p in self.ambiguous],
            "extension_flags": [
                {"n": d.n, "candidates": sorted(str(g) for g in d.candidates)} for d in self.extension_flags
            ],
            "unknowns": {k: [str(g) for g in v] for k, v in self.unknowns.items()},
            "blocking": None if self.blocking is None
            else {"page": self.blocking[0], "position": list(self.blocking[1])},
            "partial": self.partial,
            "complete_up_to_bound": self.complete_up_to_bound,
            "nodes": self.nodes,
        }


class _BudgetExceeded(Exception):
    pass


class _Search:
    def __init__(self, direction, targets: list[FgAbGroup], bound: int, budget: int, pmax: int, qmax: int):
        self.direction = direction
        self.targets = targets
        self.bound = bound
        self.budget = budget
        self.pmax, self.qmax = pmax, qmax
        self.last_page = max(2, min(pmax, qmax + 1))
        self.nodes = 0
        self.failures: list[tuple[int, Position]] = []
        self.bounded = False
        self.found: list[tuple[dict, SpectralPage]] = []

    def target_group(self, n: int) -> FgAbGroup:
        return self.targets[n] if n < len(self.targets) else FgAbGroup()

    def stable_after(self, grid, pos: Position, r: int) -> bool:
        """No differential of page > r can touch ``pos`` (``grid`` bounds the later pages)."""
        for s in range(r + 1, self.last_page + 1):
            if differential_target(pos, s, self.direction) in grid:
                return False
            if differential_source(pos, s, self.direction) in grid:
                return False
        return True

    def position_ok(self, pos: Position, group: FgAbGroup) -> bool:
        return p_rank_bound_ok(group, self.target_group(sum(pos)))

    def check_grid(self, grid, r: int, label: int) -> bool:
        """Prune using entries of page r+1 (``grid``) that are already final."""
        diag_done: dict[int, bool] = {}
        for pos, g in grid.items():
            stable = self.stable_after(grid, pos, r)
            n = sum(pos)
            diag_done[n] = diag_done.get(n, True) and stable
            if stable and not self.position_ok(pos, g):
                self.failures.append((label, pos))
                return False
        top = max(len(self.targets), max((sum(p) for p in grid), default=0) + 1)
        for n in range(top):
            if not diag_done.get(n, True):
                continue
            page = SpectralPage(r + 1, self.direction, grid)
            pieces = page.diagonal(n)
            if self.target_group(n) not in extension_candidates([g for _, g in pieces]):
                pos = pieces[0][0] if pieces else ((0, n) if self.direction == HOMOLOGICAL else (n, 0))
                self.failures.append((label, pos))
                return False
        return True

    def run(self, grid) -> None:
        if not self.check_grid(grid, 1, 2):
            return
        self.page(SpectralPage(2, self.direction, grid), {})

    def page(self, page: SpectralPage, maps: dict) -> None:
        if page.r > self.last_page:
            self.found.append((dict(maps), page))
            return
        live = page.live_positions()
        # positions ordered so that chains d∘d are decided early
        live.sort(key=lambda pos: (sum(pos), pos))
        self.assign(page, live, 0, {}, maps)

    def local_ok(self, page: SpectralPage, assigned: dict, pos: Position) -> bool:
        """Test positions touched by the new map whose next-page group is now determined."""
        tgt = page.target(pos)
        for z in (pos, tgt):
            out_needed = page.target(z) in page.grid
            in_needed = page.source(z) in page.grid
            if (out_needed and z not in assigned) or (in_needed and page.source(z) not in assigned):
                continue
            g = homology_at(page.group(z), assigned.get(page.source(z)), assigned.get(z))
            if g.is_zero:
                continue
            if self.stable_after(page.grid, z, page.r) and not self.position_ok(z, g):
                self.failures.append((page.r, z))
                return False
        return True

    def assign(self, page: SpectralPage, live, i, assigned, maps) -> None:
        if i == len(live):
            page.differentials = dict(assigned)
            nxt = turn_page(page)
            if not self.check_grid(nxt.grid, page.r, page.r):
                return
            maps = dict(maps)
            maps.update({(page.r, pos): d for pos, d in assigned.items()})
            self.page(nxt, maps)
            return
        pos = live[i]
        A, B = page.group(pos), page.group(page.target(pos))
        if not homs_complete(A, B):
            self.bounded = True
        prev = assigned.get(page.source(pos))
        nxt_map = assigned.get(page.target(pos))
        for d in enumerate_homs(A, B, self.bound):
            self.nodes += 1
            if self.nodes > self.budget:
                raise _BudgetExceeded
            if prev is not None and not d.compose(prev).is_zero:
                self.failures.append((page.r, pos))
                continue
            if nxt_map is not None and not nxt_map.compose(d).is_zero:
                self.failures.append((page.r, pos))
                continue
            assigned[pos] = d
            if self.local_ok(page, assigned, pos):
                self.assign(page, live, i + 1, assigned, maps)
            del assigned[pos]


def solve(s: FibrationScenario, bound: int = 4, budget: int = 10**6) -> SolverResult:
    """Enumerate differential assignments consistent with the total (co)homology."""
    solutions: list[Solution] = []
    failures: list[tuple[int, Position]] = []
    nodes, partial, bounded = 0, False, False
    for choice, fiber, base, total in s.instances():
        targets = uct_cohomology(total) if s.direction == COHOMOLOGICAL else list(total)
        search = _Search(s.direction, targets, bound, budget - nodes, len(base), len(fiber) - 1)
        try:
            search.run(_e2_grid(fiber, base, s.direction))
        except _BudgetExceeded:
            partial = True
        nodes += search.nodes
        bounded |= search.bounded
        failures += search.failures
        top = len(targets) - 1
        for maps, final in search.found:
            solutions.append(Solution(dict(choice), maps, assemble_limit(final, top)))
        if partial:
            break

    keys = sorted({k for sol in solutions for k in sol.maps})
    forced, ambiguous = [], []
    for key in keys:
        maps = [sol.maps.get(key) for sol in solutions]
        first = maps[0]
        if first is not None and all(m is not None and m.equal_up_to_sign(first) for m in maps):
            forced.append(ForcedMap(key[0], key[1], first))
        else:
            ambiguous.append(key)

    flags: dict[int, Diagonal] = {}
    for sol in solutions:
        for d in sol.limit:
            if d.extension_flag and d.n not in flags:
                flags[d.n] = d

    unknowns = {}
    for _, _, slot in s.slots:
        seen = []
        for sol in solutions:
            g = sol.choice[slot.name]
            if g not in seen:
                seen.append(g)
        unknowns[slot.name] = seen

    blocking = None
    if not solutions and failures:
        last = max(f[0] for f in failures)
        blocking = Counter(f for f in failures if f[0] == last).most_common(1)[0][0]
    return SolverResult(
        scenario=s.name,
        consistent=bool(solutions),
        forced=forced,
        ambiguous=ambiguous,
        extension_flags=[flags[n] for n in sorted(flags)],
        unknowns=unknowns,
        solutions=solutions,
        blocking=blocking,
        partial=partial,
        complete_up_to_bound=bounded,
        nodes=nodes,
    )


def summary(result: SolverResult) -> str:
    """One-line verdict, e.g. ``forced: d4 at (4,0) = ±2; total consistent``."""
    parts = [f"d{f.page} at ({f.position[0]},{f.position[1]}) = ±{f.label}"
             for f in result.forced if not f.hom.is_zero]
    head = "forced: " + ", ".join(parts) if parts else "forced: none nonzero"
    for name, vals in result.unknowns.items():
        head += f"; {name} = {' | '.join(str(g) for g in vals) or 'none'}"
    return head + ("; total consistent" if result.consistent else "; total INCONSISTENT")


def describe(result: SolverResult) -> str:
    lines = [f"scenario {result.scenario}: {'consistent' if result.consistent else 'INCONSISTENT'}"
             f" ({len(result.solutions)} assignment(s), {result.nodes} nodes)"]
    for name, vals in result.unknowns.items():
        lines.append(f"  unknown {name}: {', '.join(str(g) for g in vals) or 'no consistent value'}")
    for f in result.forced:
        if not f.hom.is_zero:
            lines.append(f"  forced {f}")
    nzero = sum(1 for f in result.forced if f.hom.is_zero)
    if nzero:
        lines.append(f"  forced zero maps: {nzero}")
    if result.ambiguous:
        lines.append("  ambiguous: " + ", ".join(f"d_{r} at {p}" for r, p in result.ambiguous))
    for d in result.extension_flags:
        lines.append(f"  extension flag {d}")
    if result.blocking:
        lines.append(f"  blocked at position {result.blocking[1]} on page {result.blocking[0]}")
    if result.partial:
        lines.append("  node budget exceeded: result is partial")
    if result.complete_up_to_bound:
        lines.append("  complete up to bound (free-to-free maps enumerated with bounded entries)")
    if result.solutions and result.consistent:
        lim = result.solutions[0].limit
        lines.append("  limit: " + format_list(
            sorted(d.candidates, key=str)[0] if len(d.candidates) == 1 else "?" for d in lim))
    return "\n".join(lines)
