"""Finite permutation groups on points 1..n.

Permutations are plain tuples of 0-based images, composed in right-action
convention: ``x^(pq) = (x^p)^q``.  A ``GroupData`` enumerates the whole
group breadth-first from its generators, which keeps element indices
deterministic for a given generator list; everything downstream addresses
elements by those indices.
"""

from __future__ import annotations

from math import lcm
from typing import Iterable, Optional, Sequence

MAX_GROUP_SIZE = 10**6


class GroupTooLarge(Exception):
    """Enumeration exceeded the element cap."""


class InvalidInvolutions(Exception):
    """The proposed axis set fails one of the involution-set conditions."""


def identity(n: int) -> tuple:
    return tuple(range(n))


def mul(p: tuple, q: tuple) -> tuple:
    """Compose left-to-right: (p then q)."""
    return tuple(q[x] for x in p)


def inv(p: tuple) -> tuple:
    out = [0] * len(p)
    for x, y in enumerate(p):
        out[y] = x
    return tuple(out)


def conj(p: tuple, g: tuple) -> tuple:
    """p conjugated by g, i.e. g^-1 p g."""
    return mul(inv(g), mul(p, g))


def perm_order(p: tuple) -> int:
    seen = [False] * len(p)
    o = 1
    for start in range(len(p)):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = p[x]
            length += 1
        o = lcm(o, length)
    return o


def parse_cycles(s: str, n: int) -> tuple:
    """Parse cycle notation like ``(1,2)(3,4,5)`` into a permutation.

    Points are 1-based in the notation.  ``()`` and the empty string both
    denote the identity.
    """
    images = list(range(n))
    text = s.replace(" ", "")
    if text in ("", "()"):
        return tuple(images)
    if not (text.startswith("(") and text.endswith(")")):
        raise ValueError(f"bad cycle notation: {s!r}")
    used = set()
    for chunk in text[1:-1].split(")("):
        if not chunk:
            raise ValueError(f"empty cycle in: {s!r}")
        try:
            pts = [int(tok) for tok in chunk.split(",")]
        except ValueError:
            raise ValueError(f"bad cycle notation: {s!r}") from None
        for a in pts:
            if not 1 <= a <= n:
                raise ValueError(f"point {a} outside 1..{n}")
            if a in used:
                raise ValueError(f"point {a} repeated in: {s!r}")
            used.add(a)
        for i, a in enumerate(pts):
            images[a - 1] = pts[(i + 1) % len(pts)] - 1
    return tuple(images)


def format_cycles(p: tuple) -> str:
    """Cycle notation with 1-based points; identity renders as ``()``."""
    seen = [False] * len(p)
    parts = []
    for start in range(len(p)):
        if seen[start] or p[start] == start:
            seen[start] = True
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x + 1)
            x = p[x]
        parts.append("(" + ",".join(map(str, cyc)) + ")")
    return "".join(parts) if parts else "()"


class GroupData:
    """A finite permutation group enumerated breadth-first.

    Attributes:
        n_points: degree of the permutation representation.
        generators: the generating permutations as given.
        elements: every group element, in BFS discovery order; index 0 is
            the identity.
        index: inverse mapping, element tuple to its position in elements.
    """

    def __init__(self, n_points: int, generators: Sequence[tuple], max_size: int = MAX_GROUP_SIZE):
        self.n_points = n_points
        self.generators = [tuple(g) for g in generators]
        for g in self.generators:
            if len(g) != n_points or sorted(g) != list(range(n_points)):
                raise ValueError("generator is not a permutation of the points")
        ident = identity(n_points)
        elements = [ident]
        index = {ident: 0}
        head = 0
        while head < len(elements):
            cur = elements[head]
            head += 1
            for g in self.generators:
                nxt = mul(cur, g)
                if nxt not in index:
                    if len(elements) >= max_size:
                        raise GroupTooLarge(f"group exceeds {max_size} elements")
                    index[nxt] = len(elements)
                    elements.append(nxt)
        self.elements = elements
        self.index = index
        self._inv: Optional[list] = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def gidx(self, p: tuple) -> int:
        try:
            return self.index[p]
        except KeyError:
            raise ValueError("permutation is not a group element") from None

    def mul(self, i: int, j: int) -> int:
        return self.index[mul(self.elements[i], self.elements[j])]

    def inv(self, i: int) -> int:
        if self._inv is None:
            inv_list = [0] * len(self.elements)
            for k, p in enumerate(self.elements):
                inv_list[k] = self.index[inv(p)]
            self._inv = inv_list
        return self._inv[i]

    def conj(self, i: int, g: int) -> int:
        return self.mul(self.mul(self.inv(g), i), g)

    def power(self, i: int, e: int) -> int:
        if e < 0:
            return self.power(self.inv(i), -e)
        out = 0
        for _ in range(e):
            out = self.mul(out, i)
        return out

    def element_order(self, i: int) -> int:
        return perm_order(self.elements[i])

    def conjugacy_class(self, i: int) -> list:
        """All conjugates of element i, as a sorted list of indices."""
        seen = {i}
        frontier = [i]
        gen_idx = [self.index[g] for g in self.generators]
        while frontier:
            nxt = []
            for e in frontier:
                for g in gen_idx:
                    c = self.conj(e, g)
                    if c not in seen:
                        seen.add(c)
                        nxt.append(c)
            frontier = nxt
        return sorted(seen)

    def involution_classes(self) -> list:
        """Conjugacy classes of involutions, each a sorted index list.

        Classes are ordered by their smallest member, which makes the
        class numbering reproducible.
        """
        covered = set()
        classes = []
        for i in range(1, len(self.elements)):
            if i in covered or self.element_order(i) != 2:
                continue
            cls = self.conjugacy_class(i)
            covered.update(cls)
            classes.append(cls)
        return classes

    def subgroup_order(self, gen_indices: Iterable[int]) -> int:
        gens = [self.elements[i] for i in gen_indices]
        ident = identity(self.n_points)
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for cur in frontier:
                for g in gens:
                    cand = mul(cur, g)
                    if cand not in seen:
                        seen.add(cand)
                        nxt.append(cand)
            frontier = nxt
        return len(seen)


def validated_axis_involutions(group: GroupData, elements: Iterable[int]) -> list:
    """Check an axis set: involutions, closed under conjugation, generating.

    Args:
        group: the ambient group.
        elements: candidate element indices.

    Returns:
        The sorted, de-duplicated index list.

    Raises:
        InvalidInvolutions: with a message naming the first failed condition.
    """
    tset = sorted(set(elements))
    if not tset:
        raise InvalidInvolutions("axis set is empty")
    for i in tset:
        if group.element_order(i) != 2:
            raise InvalidInvolutions(
                f"element {format_cycles(group.elements[i])} is not an involution"
            )
    member = set(tset)
    gen_idx = [group.index[g] for g in group.generators]
    for i in tset:
        for g in gen_idx:
            c = group.conj(i, g)
            if c not in member:
                raise InvalidInvolutions(
                    "axis set is not closed under conjugation: "
                    f"{format_cycles(group.elements[i])} maps outside it"
                )
    if group.subgroup_order(tset) != group.order:
        raise InvalidInvolutions("axis set does not generate the group")
    return tset
