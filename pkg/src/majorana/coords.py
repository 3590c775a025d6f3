"""Coordinate system and orbit bookkeeping for a chosen shape.

The algebra is spanned by one coordinate per axis involution plus one
coordinate per cyclic axis demanded by the shape:

* type 2A orbits contribute an axis for each product involution that is
  not already an axis;
* type 3A, 4A and 5A orbits contribute one vector per cyclic subgroup
  generated by their products (u, v and w respectively).

A cyclic subgroup has several generators, and the extra vectors do not
distinguish all of them: u and v agree on every generator, while the
order five vector flips sign between a generator and its square.  Each
subgroup is therefore keyed by its generator with the smallest element
index, and every generator records a signed 1-based position into the
coordinate list.  Group elements then act on the coordinates by signed
permutations, and all orbit structures (coordinate orbits, orbits of
unordered coordinate pairs, transporting elements) are built from that
action by breadth-first scans in a fixed order, so coordinate and orbit
indices are reproducible.
"""

from __future__ import annotations

from math import gcd
from typing import Optional, Sequence

from .perms import GroupData
from .shapes import PairOrbit

CYCLIC_KINDS = ("2A", "3A", "4A", "5A")


class Setup:
    """Coordinates, signed action and pair-orbit tables for one shape.

    Attributes:
        group: ambient group.
        tset: axis involutions, sorted element indices.
        naxes: number of axis coordinates (they come first).
        coordinates: coordinate descriptors; ("axis", t) for axes, then
            (kind, h) for cyclic vectors with h the canonical generator,
            then optionally ("pair", (i, j)) after an extension.
        position_of: element index -> signed 1-based coordinate position,
            covering axes and every generator of the cyclic subgroups.
        longcoordinates: the element indices carrying positions, axes
            first, then subgroup generators grouped per coordinate.
        positionlist: signed positions parallel to longcoordinates.
        pairrepresentatives: representative (i, j) per pair orbit.
        pairorbitlist: symmetric matrix of signed orbit numbers; entry
            (i, j) holds ±(k + 1) for orbit k.
        pairconj: symmetric matrix of element indices g carrying the
            orbit representative onto the pair.
        orbitrepresentatives: representative coordinate per coordinate
            orbit, in scan order.
        conjelements: per coordinate, an element carrying its orbit
            representative onto it.
        pairconjelements: cache of signed coordinate permutations, keyed
            by element index.
        t_orbits, shape, t_orbit_of: filled by build_setup; the axis pair
            orbits, the chosen letter per orbit, and the map from an axis
            index pair to its orbit.
    """

    def __init__(self, group: GroupData, tset: Sequence[int], coordinates: list,
                 position_of: dict, pair_coord_index: Optional[dict] = None):
        self.group = group
        self.tset = list(tset)
        self.naxes = len(tset)
        self.coordinates = coordinates
        self.position_of = position_of
        self.pair_coord_index = pair_coord_index or {}
        self.t_orbits: list = []
        self.shape: list = []
        self.t_orbit_of: dict = {}
        self.ncoords = len(coordinates)
        self.longcoordinates: list = []
        self.positionlist: list = []
        for t in self.tset:
            self.longcoordinates.append(t)
            self.positionlist.append(position_of[t])
        for kind, h in coordinates[self.naxes:]:
            if kind == "pair":
                break
            n = int(kind[0])
            for e in range(1, n):
                if gcd(e, n) != 1:
                    continue
                he = group.power(h, e)
                self.longcoordinates.append(he)
                self.positionlist.append(position_of[he])
        self.pairconjelements: dict = {}
        self.pairrepresentatives: list = []
        self.pairorbitlist: list = []
        self.pairconj: list = []
        self.orbitrepresentatives: list = []
        self.conjelements: list = []
        self._gen_idx = [group.index[g] for g in group.generators]
        self._compute_pair_orbits()
        self._compute_coordinate_orbits()

    def signed_perm(self, g: int) -> list:
        """Signed permutation of the coordinates induced by element ``g``.

        Entry j is the signed 1-based position of the image of coordinate
        j; the cached list must not be mutated.
        """
        sp = self.pairconjelements.get(g)
        if sp is not None:
            return sp
        group = self.group
        sp = []
        for kind, payload in self.coordinates:
            if kind == "pair":
                i, j = payload
                si, sj = sp[i], sp[j]
                a, b = abs(si) - 1, abs(sj) - 1
                if a > b:
                    a, b = b, a
                pos = self.pair_coord_index[(a, b)] + 1
                sp.append(pos if (si > 0) == (sj > 0) else -pos)
            else:
                sp.append(self.position_of[group.conj(payload, g)])
        self.pairconjelements[g] = sp
        return sp

    def _compute_pair_orbits(self) -> None:
        nc = self.ncoords
        group = self.group
        gen_sp = [self.signed_perm(gi) for gi in self._gen_idx]
        pol = [[0] * nc for _ in range(nc)]
        pcj = [[0] * nc for _ in range(nc)]
        reps = []
        for i in range(nc):
            for j in range(i, nc):
                if pol[i][j] != 0:
                    continue
                k1 = len(reps) + 1
                reps.append((i, j))
                pol[i][j] = pol[j][i] = k1
                frontier = [(i, j)]
                while frontier:
                    nxt = []
                    for a, b in frontier:
                        base = pol[a][b]
                        gab = pcj[a][b]
                        for sp, gi in zip(gen_sp, self._gen_idx):
                            sa, sb = sp[a], sp[b]
                            c, d = abs(sa) - 1, abs(sb) - 1
                            if c > d:
                                c, d = d, c
                            if pol[c][d] != 0:
                                continue
                            step = 1 if (sa > 0) == (sb > 0) else -1
                            val = k1 if base * step > 0 else -k1
                            pol[c][d] = pol[d][c] = val
                            g_new = group.mul(gab, gi)
                            pcj[c][d] = pcj[d][c] = g_new
                            nxt.append((c, d))
                    frontier = nxt
        self.pairrepresentatives = reps
        self.pairorbitlist = pol
        self.pairconj = pcj

    def _compute_coordinate_orbits(self) -> None:
        nc = self.ncoords
        gen_sp = [self.signed_perm(gi) for gi in self._gen_idx]
        orbit_rep = [-1] * nc
        conj = [0] * nc
        reps = []
        for i in range(nc):
            if orbit_rep[i] >= 0:
                continue
            reps.append(i)
            orbit_rep[i] = i
            frontier = [i]
            while frontier:
                nxt = []
                for a in frontier:
                    for sp, gi in zip(gen_sp, self._gen_idx):
                        b = abs(sp[a]) - 1
                        if orbit_rep[b] < 0:
                            orbit_rep[b] = i
                            conj[b] = self.group.mul(conj[a], gi)
                            nxt.append(b)
                frontier = nxt
        self.orbitrepresentatives = reps
        self.conjelements = conj
        self.orbit_rep_of = orbit_rep

    @property
    def npairorbits(self) -> int:
        return len(self.pairrepresentatives)

    def orbit_of_pair(self, i: int, j: int):
        """Orbit number, sign and transporting element for a pair.

        Returns ``(k, sign, g)`` such that the pair (i, j) is the image of
        ``pairrepresentatives[k]`` under ``g`` with the given sign.
        """
        v = self.pairorbitlist[i][j]
        k = abs(v) - 1
        return k, (1 if v > 0 else -1), self.pairconj[i][j]

    def axis_positions(self) -> range:
        return range(self.naxes)


def build_setup(
    group: GroupData,
    tset: Sequence[int],
    orbits: Sequence[PairOrbit],
    shape: Sequence[str],
) -> Setup:
    """Assemble the coordinate system for one shape.

    Args:
        group: ambient group.
        tset: sorted element indices of the axis involutions.
        orbits: axis-pair orbits from shape classification.
        shape: type letters aligned with the orbits.

    Returns:
        A fully populated Setup.
    """
    tset = list(tset)
    tset_set = set(tset)
    keys = {}
    for ob in orbits:
        letter = shape[ob.index]
        if letter not in CYCLIC_KINDS:
            continue
        n = int(letter[0])
        for i, j in ob.pairs:
            rho = group.mul(tset[i], tset[j])
            if letter == "2A":
                if rho not in tset_set:
                    keys[("2A", rho)] = True
                continue
            gens = [group.power(rho, e) for e in range(1, n) if gcd(e, n) == 1]
            keys[(letter, min(gens))] = True
    cyclic = sorted(keys)
    coordinates = [("axis", t) for t in tset] + cyclic
    position_of = {}
    for k, t in enumerate(tset):
        position_of[t] = k + 1
    for p, (kind, h) in enumerate(cyclic, start=len(tset)):
        n = int(kind[0])
        for e in range(1, n):
            if gcd(e, n) != 1:
                continue
            he = group.power(h, e)
            # the order five vector flips sign on squaring the generator
            sign = -1 if kind == "5A" and e in (2, 3) else 1
            existing = position_of.get(he)
            if existing is not None and existing != sign * (p + 1):
                raise ValueError("conflicting coordinate positions")
            position_of[he] = sign * (p + 1)
    st = Setup(group, tset, coordinates, position_of)
    st.t_orbits = list(orbits)
    st.shape = list(shape)
    st.t_orbit_of = {pair: ob.index for ob in orbits for pair in ob.pairs}
    return st
