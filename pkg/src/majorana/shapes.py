"""Axis-pair orbits and admissible shape enumeration.

A shape assigns a dihedral type ``NX`` to every orbit of unordered axis
pairs, where ``N`` is the order of the product of the two involutions.
``N`` must be at most 6.  Orbits with ``N`` in {1, 5, 6} carry a single
admissible letter.  Choices remain for ``N`` in {2, 3, 4}, but they are
not independent:

* a tetragonal orbit with representative ``(t0, t1)`` and ``rho = t0 t1``
  contains the pairs ``(t0, t0^rho)`` and ``(t1, t1^rho)`` inside its
  dihedral algebra, and those force 4A with 2B and 4B with 2A;
* a hexagonal orbit forces type 3A on the orbits of ``(t0, t0^rho)`` and
  ``(t1, t1^rho)`` and type 2A on the orbit of ``(t0, t1^rho)``.

Propagating these ties leaves a set of independent binary choices; the
enumeration walks them in a fixed order so the shape list is stable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .perms import GroupData, format_cycles


class NotSixTranspositions(Exception):
    """Some pair of axis involutions has product order above 6."""


class ShapeError(Exception):
    """Type constraints on the pair orbits contradict each other."""


@dataclass
class PairOrbit:
    """One orbit of unordered axis pairs.

    Attributes:
        index: position in the orbit list (scan order, stable).
        rep: lexicographically first pair (i, j) of axis positions, i <= j.
        n: order of the product of the representative's involutions.
        pairs: every pair in the orbit, sorted.
        product_in_axes: whether that product is itself an axis involution.
    """

    index: int
    rep: tuple
    n: int
    pairs: list
    product_in_axes: bool


def classify_pair_orbits(group: GroupData, tset: Sequence[int]):
    """Orbits of unordered pairs of axes under conjugation.

    Args:
        group: ambient group.
        tset: sorted element indices of the axis involutions.

    Returns:
        ``(orbits, orbit_of)`` where ``orbit_of`` maps each pair (i, j)
        with i <= j of axis positions to its orbit index.  Orbit indices
        follow the lexicographic scan over representatives.

    Raises:
        NotSixTranspositions: if some product of two axes has order > 6.
    """
    m = len(tset)
    pos = {g: k for k, g in enumerate(tset)}
    gen_idx = [group.index[g] for g in group.generators]
    act = [[pos[group.conj(tset[k], g)] for k in range(m)] for g in gen_idx]
    tset_set = set(tset)
    orbit_of: dict = {}
    orbits = []
    for i in range(m):
        for j in range(i, m):
            if (i, j) in orbit_of:
                continue
            idx = len(orbits)
            orbit_of[(i, j)] = idx
            members = [(i, j)]
            frontier = [(i, j)]
            while frontier:
                nxt = []
                for a, b in frontier:
                    for ga in act:
                        c, d = ga[a], ga[b]
                        key = (c, d) if c <= d else (d, c)
                        if key not in orbit_of:
                            orbit_of[key] = idx
                            members.append(key)
                            nxt.append(key)
                frontier = nxt
            prod = group.mul(tset[i], tset[j])
            n = group.element_order(prod)
            if n > 6:
                raise NotSixTranspositions(
                    f"axes {format_cycles(group.elements[tset[i]])} and "
                    f"{format_cycles(group.elements[tset[j]])} have product "
                    f"of order {n}"
                )
            members.sort()
            orbits.append(PairOrbit(idx, (i, j), n, members, prod in tset_set))
    return orbits, orbit_of


def _pair_key(pos: dict, a: int, b: int) -> tuple:
    i, j = pos[a], pos[b]
    return (i, j) if i <= j else (j, i)


def enumerate_shapes(
    group: GroupData,
    tset: Sequence[int],
    force_2a_when_product_is_axis: bool = False,
):
    """All admissible shapes for the given axis set.

    Args:
        group: ambient group.
        tset: sorted element indices of the axis involutions.
        force_2a_when_product_is_axis: additionally pin every dihedral
            orbit whose product involution is itself an axis to type 2A.

    Returns:
        ``(orbits, shapes)`` where each shape is a list of type letters
        aligned with the orbit list.  Shapes are emitted in lexicographic
        order of the free choices, A-letters first.

    Raises:
        ShapeError: if the forced types contradict each other.
    """
    orbits, orbit_of = classify_pair_orbits(group, tset)
    pos = {g: k for k, g in enumerate(tset)}

    fixed: dict = {}

    def fix(k: int, letter: str) -> None:
        old = fixed.get(k)
        if old is not None and old != letter:
            raise ShapeError(f"orbit {k} forced to both {old} and {letter}")
        fixed[k] = letter

    for ob in orbits:
        if ob.n == 1:
            fix(ob.index, "1A")
        elif ob.n == 5:
            fix(ob.index, "5A")
        elif ob.n == 6:
            fix(ob.index, "6A")

    couplings = set()
    for ob in orbits:
        ti, tj = tset[ob.rep[0]], tset[ob.rep[1]]
        rho = group.mul(ti, tj)
        if ob.n == 4:
            for t in (ti, tj):
                sub = orbit_of[_pair_key(pos, t, group.conj(t, rho))]
                if orbits[sub].n != 2:
                    raise ShapeError("tetragonal suborbit is not dihedral of order 4")
                couplings.add((ob.index, sub))
        elif ob.n == 6:
            for t in (ti, tj):
                sub = orbit_of[_pair_key(pos, t, group.conj(t, rho))]
                if orbits[sub].n != 3:
                    raise ShapeError("hexagonal suborbit is not dihedral of order 6")
                fix(sub, "3A")
            sub = orbit_of[_pair_key(pos, ti, group.conj(tj, rho))]
            if orbits[sub].n != 2:
                raise ShapeError("hexagonal suborbit is not dihedral of order 4")
            fix(sub, "2A")

    if force_2a_when_product_is_axis:
        for ob in orbits:
            if ob.n == 2 and ob.product_in_axes:
                fix(ob.index, "2A")

    # union the letter-coupled orbits; within a component one binary choice
    # fixes every member (4A pairs with 2B, 4B with 2A)
    parent: dict = {}

    def find(x: int) -> int:
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for four, two in couplings:
        union(four, two)

    comp_members: dict = {}
    for k in parent:
        comp_members.setdefault(find(k), []).append(k)
    for members in comp_members.values():
        members.sort()

    def comp_letters(members: list, a_side: bool) -> dict:
        # a_side means the 2-orbits take 2A (so the 4-orbits take 4B)
        out = {}
        for k in members:
            if orbits[k].n == 2:
                out[k] = "2A" if a_side else "2B"
            else:
                out[k] = "4B" if a_side else "4A"
        return out

    slots = []  # (smallest orbit index, list of {orbit: letter} options)
    consumed = set()
    for root in sorted(comp_members):
        members = comp_members[root]
        consumed.update(members)
        forced_sides = set()
        for k in members:
            if k in fixed:
                letter = fixed[k]
                forced_sides.add(letter in ("2A", "4B"))
        if len(forced_sides) == 2:
            raise ShapeError(
                f"coupled orbits {members} are forced to incompatible types"
            )
        if forced_sides:
            side = forced_sides.pop()
            for k, letter in comp_letters(members, side).items():
                fix(k, letter)
        else:
            lead = members[0]
            # alphabetical first letter for the lowest-numbered orbit
            first_side = orbits[lead].n == 2
            options = [comp_letters(members, first_side),
                       comp_letters(members, not first_side)]
            slots.append((lead, options))

    for ob in orbits:
        k = ob.index
        if k in fixed or k in consumed:
            continue
        if ob.n == 2:
            slots.append((k, [{k: "2A"}, {k: "2B"}]))
        elif ob.n == 3:
            slots.append((k, [{k: "3A"}, {k: "3C"}]))
        else:
            raise ShapeError(f"orbit {k} of order {ob.n} has no assigned type")

    slots.sort(key=lambda s: s[0])
    shapes = []
    for combo in itertools.product(*(range(len(opts)) for _, opts in slots)):
        assignment = dict(fixed)
        for (_, opts), choice in zip(slots, combo):
            assignment.update(opts[choice])
        shapes.append([assignment[k] for k in range(len(orbits))])
    return orbits, shapes
