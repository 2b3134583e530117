"""Graded commutative rings presented as sums of truncated monomial algebras.

Each component is ``R[g_1, ..., g_m] / (zero monomials)`` with ``R`` either
Z or Z_2; products of elements from different components vanish.  This is
the shape of every cohomology ring handled here, e.g.

    Z[x4, x5]/(x4^2, x5^2) ⊕ Z2[y3, y7]/(y3^2, y7^2, y3 y7).

A torsion component carries no unit of its own: its degree-0 part would
duplicate the unit of the free component.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field

from .fgab import CheckResult, FgAbGroup, group_list

Monomial = tuple[int, ...]


@dataclass(frozen=True)
class RingComponent:
    coeff: str  # "Z" or "Z2"
    gens: tuple[tuple[str, int], ...]
    zero_monomials: tuple[Monomial, ...] = ()
    unit: bool | None = None

    def __post_init__(self):
        if self.coeff not in ("Z", "Z2"):
            raise ValueError(f"coefficients must be 'Z' or 'Z2', got {self.coeff!r}")
        for name, deg in self.gens:
            if deg <= 0:
                raise ValueError(f"generator {name} must have positive degree")
        for m in self.zero_monomials:
            if len(m) != len(self.gens) or not any(m):
                raise ValueError(f"bad zero monomial {m}")
        if self.unit is None:
            object.__setattr__(self, "unit", self.coeff == "Z")

    @property
    def modulus(self) -> int:
        return 0 if self.coeff == "Z" else 2

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.gens]

    @property
    def degrees(self) -> list[int]:
        return [d for _, d in self.gens]

    def degree(self, m: Monomial) -> int:
        return sum(e * d for e, d in zip(m, self.degrees))

    def is_zero(self, m: Monomial) -> bool:
        if not any(m) and not self.unit:
            return True
        return any(all(a >= b for a, b in zip(m, z)) for z in self.zero_monomials)

    def monomials(self, d: int) -> list[Monomial]:
        """Surviving monomials of degree ``d``."""
        out = []

        def rec(i, remaining, acc):
            if i == len(self.gens):
                if remaining == 0:
                    m = tuple(acc)
                    if not self.is_zero(m):
                        out.append(m)
                return
            deg = self.degrees[i]
            for e in range(remaining // deg + 1):
                rec(i + 1, remaining - e * deg, acc + [e])

        if d >= 0:
            rec(0, d, [])
        return out

    def graded_group(self, d: int) -> FgAbGroup:
        count = len(self.monomials(d))
        if self.coeff == "Z":
            return FgAbGroup(count)
        return FgAbGroup(0, (2,) * count)

    def format_monomial(self, m: Monomial) -> str:
        parts = [n if e == 1 else f"{n}^{e}" for n, e in zip(self.names, m) if e]
        return "*".join(parts) if parts else "1"


@dataclass(frozen=True)
class RingElement:
    """Finite sum of ``coefficient * monomial`` keyed by (component index, monomial)."""

    ring: "TruncatedRing" = field(repr=False, compare=False)
    terms: tuple[tuple[tuple[int, Monomial], int], ...] = ()

    @classmethod
    def from_dict(cls, ring, terms: dict) -> "RingElement":
        clean = {}
        for (c, m), a in terms.items():
            comp = ring.components[c]
            if comp.modulus:
                a %= comp.modulus
            if a and not comp.is_zero(m):
                clean[(c, m)] = a
        return cls(ring, tuple(sorted(clean.items())))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {self.ring.components[c].degree(m) for (c, m), _ in self.terms}

    def __mul__(self, other: "RingElement") -> "RingElement":
        out: dict = {}
        for (c1, m1), a1 in self.terms:
            for (c2, m2), a2 in other.terms:
                if c1 != c2:
                    continue
                m = tuple(x + y for x, y in zip(m1, m2))
                out[(c1, m)] = out.get((c1, m), 0) + a1 * a2
        return RingElement.from_dict(self.ring, out)

    def __add__(self, other: "RingElement") -> "RingElement":
        out = dict(self.terms)
        for k, a in other.terms:
            out[k] = out.get(k, 0) + a
        return RingElement.from_dict(self.ring, out)

    def scaled(self, k: int) -> "RingElement":
        return RingElement.from_dict(self.ring, {key: k * a for key, a in self.terms})

    def __eq__(self, other):
        return isinstance(other, RingElement) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (c, m), a in self.terms:
            mono = self.ring.components[c].format_monomial(m)
            parts.append(mono if a == 1 else f"{a}*{mono}")
        return " + ".join(parts)


class TruncatedRing:
    """Direct sum of truncated polynomial components (commutative, monomial relations)."""

    def __init__(self, components, name: str = ""):
        self.components = list(components)
        self.name = name
        self._where: dict[str, tuple[int, int]] = {}
        for c, comp in enumerate(self.components):
            for i, g in enumerate(comp.names):
                if g in self._where:
                    raise ValueError(f"generator {g!r} appears in two components")
                self._where[g] = (c, i)
        self._token = re.compile(
            "|".join(re.escape(n) for n in sorted(self._where, key=len, reverse=True)) or r"(?!)"
        )

    # -- construction
    @classmethod
    def from_dict(cls, data: dict, name: str = "") -> "TruncatedRing":
        comps = []
        for k, cd in enumerate(data.get("components", [])):
            gens = tuple((str(g), int(d)) for g, d in cd["gens"].items())
            names = [g for g, _ in gens]
            zeros = tuple(_parse_monomial(z, names) for z in cd.get("zero_monomials", []))
            comps.append(RingComponent(cd.get("coeff", "Z"), gens, zeros, cd.get("unit")))
        if not comps:
            raise ValueError("ring needs at least one component")
        return cls(comps, name or data.get("name", ""))

    @classmethod
    def from_json(cls, text: str) -> "TruncatedRing":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return {
            "components": [
                {
                    "coeff": c.coeff,
                    "gens": dict(c.gens),
                    "zero_monomials": [c.format_monomial(z).replace("*", "") for z in c.zero_monomials],
                    **({} if c.unit == (c.coeff == "Z") else {"unit": c.unit}),
                }
                for c in self.components
            ]
        }

    def with_zero_monomial(self, text: str) -> "TruncatedRing":
        """Copy with one more monomial declared zero (in the component owning its generators)."""
        names = self._token.findall(text.replace("*", "").split("^")[0])
        if not names:
            raise ValueError(f"no generator in {text!r}")
        c, _ = self._where[names[0]]
        comps = list(self.components)
        comp = comps[c]
        z = _parse_monomial(text, comp.names)
        comps[c] = RingComponent(comp.coeff, comp.gens, comp.zero_monomials + (z,), comp.unit)
        return TruncatedRing(comps, self.name)

    # -- structure
    @property
    def generators(self) -> dict[str, int]:
        return {n: d for comp in self.components for n, d in comp.gens}

    def gen(self, name: str) -> RingElement:
        c, i = self._where[name]
        m = tuple(int(j == i) for j in range(len(self.components[c].gens)))
        return RingElement.from_dict(self, {(c, m): 1})

    def zero(self) -> RingElement:
        return RingElement(self, ())

    def element(self, text: str) -> RingElement:
        """Parse ``"0"``, ``"x5"``, ``"x4*x5"``, ``"x4x5"``, ``"2*x3 + x5"``."""
        s = str(text).replace(" ", "")
        if s in ("", "0"):
            return self.zero()
        total = self.zero()
        for term in re.findall(r"[+-]?[^+-]+", s):
            sign = -1 if term.startswith("-") else 1
            term = term.lstrip("+-")
            m = re.match(r"^(\d+)\*?(.*)$", term)
            coeff, rest = (int(m.group(1)), m.group(2)) if m else (1, term)
            if rest == "":
                raise ValueError(f"constant terms are not supported: {text!r}")
            val = self._monomial_element(rest, text)
            total = total + val.scaled(sign * coeff)
        return total

    def _monomial_element(self, text: str, whole: str) -> RingElement:
        val = None
        for factor in filter(None, text.split("*")):
            m = re.match(r"^(.*?)(?:\^(\d+))?$", factor)
            body, power = m.group(1), int(m.group(2) or 1)
            names = self._token.findall(body)
            if "".join(names) != body:
                raise ValueError(f"unknown generator in {factor!r} of {whole!r}")
            for k, nm in enumerate(names):
                g = self.gen(nm)
                reps = power if k == len(names) - 1 else 1
                for _ in range(reps):
                    val = g if val is None else val * g
        if val is None:
            raise ValueError(f"empty monomial in {whole!r}")
        return val

    def graded_group(self, d: int) -> FgAbGroup:
        out = FgAbGroup()
        for comp in self.components:
            out = out + comp.graded_group(d)
        return out

    @property
    def top_degree(self) -> int:
        """Largest degree with a surviving monomial (requires every generator nilpotent)."""
        best = 0
        for comp in self.components:
            bounds = []
            for i in range(len(comp.gens)):
                pure = [z[i] for z in comp.zero_monomials if sum(1 for e in z if e) == 1 and z[i]]
                if not pure:
                    raise ValueError(f"generator {comp.names[i]} is not nilpotent")
                bounds.append(min(pure) - 1)
            for m in itertools.product(*(range(b + 1) for b in bounds)):
                if not comp.is_zero(m):
                    best = max(best, comp.degree(m))
        return best

    def poincare_series(self, free_only: bool = True) -> list[int]:
        return [
            sum(len(c.monomials(d)) for c in self.components if not free_only or c.coeff == "Z")
            for d in range(self.top_degree + 1)
        ]

    def __str__(self) -> str:
        parts = []
        for c in self.components:
            gens = ",".join(c.names)
            rels = ",".join(c.format_monomial(z) for z in c.zero_monomials)
            parts.append(f"{c.coeff}[{gens}]/({rels})")
        return " + ".join(parts)


def _parse_monomial(text: str, names: list[str]) -> Monomial:
    exps = [0] * len(names)
    token = re.compile("|".join(re.escape(n) for n in sorted(names, key=len, reverse=True)))
    s = str(text).replace(" ", "")
    for factor in filter(None, s.split("*")):
        m = re.match(r"^(.*?)(?:\^(\d+))?$", factor)
        body, power = m.group(1), int(m.group(2) or 1)
        found = token.findall(body)
        if not found or "".join(found) != body:
            raise ValueError(f"cannot parse monomial {text!r} over generators {names}")
        for k, nm in enumerate(found):
            exps[names.index(nm)] += power if k == len(found) - 1 else 1
    return tuple(exps)


def graded_group(r: TruncatedRing, d: int) -> FgAbGroup:
    return r.graded_group(d)


def ring_matches_cohomology(r: TruncatedRing, Hc) -> CheckResult:
    """``graded_group(r, d) ≅ H^d`` for every degree of the list and zero beyond it."""
    Hc = group_list(Hc)
    top = max(len(Hc) - 1, r.top_degree)
    for d in range(top + 1):
        expected = Hc[d] if d < len(Hc) else FgAbGroup()
        got = r.graded_group(d)
        if got != expected:
            return CheckResult(False, f"degree {d}: ring gives {got}, cohomology is {expected}", d)
    return CheckResult(True, f"graded pieces agree in degrees 0..{top}")


def duality_pairing_check(r: TruncatedRing, n: int) -> CheckResult:
    """Every free generator pairs nontrivially with a complementary monomial into degree n."""
    free = [c for c in r.components if c.coeff == "Z"]
    if not free:
        return CheckResult(False, "no free component")
    if r.graded_group(n) != FgAbGroup(1) or sum(len(c.monomials(n)) for c in free) != 1:
        return CheckResult(False, f"degree {n} has no unique top class: {r.graded_group(n)}", n)
    for comp in free:
        for name, d in comp.gens:
            g = r.gen(name)
            partners = [
                RingElement.from_dict(r, {(r.components.index(comp), m): 1})
                for m in comp.monomials(n - d)
            ]
            if not any(not (g * m).is_zero for m in partners):
                return CheckResult(False, f"{name} has no partner of degree {n - d}", d)
    return CheckResult(True, f"every free generator pairs into the top class in degree {n}")


def verify_ring_hom(mapping: dict, source: TruncatedRing, target: TruncatedRing) -> CheckResult:
    """Check that a generator assignment extends to a graded ring homomorphism.

    Degrees must match (the zero element is allowed anywhere), images of
    Z_m generators must be m-torsion, and every relation of the source,
    including the vanishing of products across components, must map to zero.
    """
    images = {}
    for name, deg in source.generators.items():
        if name not in mapping:
            return CheckResult(False, f"no image given for generator {name}")
        img = mapping[name]
        img = img if isinstance(img, RingElement) else target.element(img)
        if not img.is_zero and img.degrees() != {deg}:
            return CheckResult(False, f"{name} has degree {deg} but its image {img} has degree "
                                      f"{sorted(img.degrees())}", deg)
        images[name] = img
    extra = set(mapping) - set(images)
    if extra:
        return CheckResult(False, f"mapping names unknown generators {sorted(extra)}")

    def image_of(c: int, m: Monomial) -> RingElement:
        comp = source.components[c]
        val = None
        for name, e in zip(comp.names, m):
            for _ in range(e):
                val = images[name] if val is None else val * images[name]
        return val

    for c, comp in enumerate(source.components):
        if comp.modulus:
            for name in comp.names:
                if not images[name].scaled(comp.modulus).is_zero:
                    return CheckResult(False, f"{name} is {comp.modulus}-torsion but its image is not")
        for z in comp.zero_monomials:
            val = image_of(c, z)
            if not val.is_zero:
                return CheckResult(False, f"relation {comp.format_monomial(z)} = 0 maps to {val}")
    for (c1, a), (c2, b) in itertools.combinations(
        [(c, n) for c, comp in enumerate(source.components) for n in comp.names], 2
    ):
        if c1 != c2 and not (images[a] * images[b]).is_zero:
            return CheckResult(False, f"{a}*{b} = 0 maps to {images[a] * images[b]}")
    return CheckResult(True, "relations and degrees preserved")
