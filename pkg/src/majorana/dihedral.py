"""Dihedral algebra tables and the orbit-compressed algebra state.

Any two axis involutions t0, t1 generate a dihedral subgroup whose axes
span a known algebra, classified by the order n of rho = t0*t1 and, for
n in (2, 3), a letter choice.  The tables below give every product,
inner product and ad(a0)-eigenvector of these algebras in local symbols:
integers k index the axis a_k of t0*rho^k over a fixed window around 0,
and the extra basis vectors are named "rho", "u", "v", "w", "rho2",
"rho3", "u2" as usual.  Local symbols are resolved to signed global
coordinates through the position table of a Setup, so seeding one orbit
representative and transporting by the group action fills in every pair
of coordinates lying in a common dihedral subalgebra.

The same pair of coordinates is typically covered by several dihedral
windows (a hexagonal orbit restates the products of the triangles and
reflections inside it), and a wrong letter assignment makes those
restatements disagree.  AlgebraState therefore checks every recorded
value against what is already stored at the orbit representative and
raises ShapeConflictError on mismatch; surviving shapes are exactly the
consistently seedable ones.
"""

from __future__ import annotations

from typing import Optional

from .coords import Setup
from .linalg import EchelonBasis, Q, SparseVector

WINDOWS = {
    1: [0],
    2: [0, 1],
    3: [-1, 0, 1],
    4: [-1, 0, 1, 2],
    5: [-2, -1, 0, 1, 2],
    6: [-2, -1, 0, 1, 2, 3],
}

EIGENVALUES = ("0", "1/4", "1/32")


class ShapeConflictError(Exception):
    """Two dihedral windows disagree about a product; the shape is dead."""


def _wrap(x: int, n: int) -> int:
    lo = WINDOWS[n][0]
    return (x - lo) % n + lo


def product_entries(letter: str) -> list:
    """Products of a dihedral algebra as (symbol, symbol, expression).

    Expressions map local symbols to rational coefficients; diagonal
    idempotents are included, so the list covers every unordered pair of
    basis vectors.
    """
    n = int(letter[0])
    win = WINDOWS[n]
    out = [(k, k, {k: Q(1)}) for k in win]
    if letter == "1A":
        return out
    if letter == "2B":
        out.append((0, 1, {}))
        return out
    if letter == "2A":
        out.append(("rho", "rho", {"rho": Q(1)}))
        for x, y, z in ((0, 1, "rho"), (0, "rho", 1), (1, "rho", 0)):
            out.append((x, y, {x: Q(1, 8), y: Q(1, 8), z: Q(-1, 8)}))
        return out
    if letter in ("3A", "3C"):
        for a in range(3):
            for b in range(a + 1, 3):
                i, j = win[a], win[b]
                l = next(x for x in win if x not in (i, j))
                if letter == "3A":
                    out.append((i, j, {i: Q(1, 16), j: Q(1, 16), l: Q(1, 32),
                                       "u": Q(-135, 2048)}))
                else:
                    out.append((i, j, {i: Q(1, 64), j: Q(1, 64), l: Q(-1, 64)}))
        if letter == "3A":
            out.append(("u", "u", {"u": Q(1)}))
            for i in win:
                p, q = (x for x in win if x != i)
                out.append((i, "u", {i: Q(2, 9), p: Q(-1, 9), q: Q(-1, 9),
                                     "u": Q(5, 32)}))
        return out
    if letter in ("4A", "4B"):
        mid = "v" if letter == "4A" else "rho2"
        out.append((mid, mid, {mid: Q(1)}))
        for a in range(4):
            for b in range(a + 1, 4):
                i, j = win[a], win[b]
                p, q = (x for x in win if x not in (i, j))
                if (j - i) % 4 == 2:
                    if letter == "4A":
                        out.append((i, j, {}))
                    else:
                        out.append((i, j, {i: Q(1, 8), j: Q(1, 8),
                                           "rho2": Q(-1, 8)}))
                elif letter == "4A":
                    out.append((i, j, {i: Q(3, 64), j: Q(3, 64), p: Q(1, 64),
                                       q: Q(1, 64), "v": Q(-3, 64)}))
                else:
                    out.append((i, j, {i: Q(1, 64), j: Q(1, 64), p: Q(-1, 64),
                                       q: Q(-1, 64), "rho2": Q(1, 64)}))
        for i in win:
            if letter == "4A":
                out.append((i, "v", {i: Q(5, 16),
                                     _wrap(i + 1, 4): Q(-1, 8),
                                     _wrap(i + 2, 4): Q(-1, 16),
                                     _wrap(i - 1, 4): Q(-1, 8),
                                     "v": Q(3, 16)}))
            else:
                out.append((i, "rho2", {i: Q(1, 8), "rho2": Q(1, 8),
                                        _wrap(i + 2, 4): Q(-1, 8)}))
        return out
    if letter == "5A":
        out.append(("w", "w", {k: Q(175, 524288) for k in win}))
        for a in range(5):
            for b in range(a + 1, 5):
                i, j = win[a], win[b]
                expr = {i: Q(3, 128), j: Q(3, 128),
                        "w": Q(1) if (j - i) % 5 in (1, 4) else Q(-1)}
                for o in win:
                    if o not in (i, j):
                        expr[o] = Q(-1, 128)
                out.append((i, j, expr))
        for i in win:
            out.append((i, "w", {_wrap(i + 1, 5): Q(7, 4096),
                                 _wrap(i - 1, 5): Q(7, 4096),
                                 _wrap(i + 2, 5): Q(-7, 4096),
                                 _wrap(i - 2, 5): Q(-7, 4096),
                                 "w": Q(7, 32)}))
        return out
    if letter == "6A":
        out.append(("rho3", "rho3", {"rho3": Q(1)}))
        out.append(("u2", "u2", {"u2": Q(1)}))
        out.append(("rho3", "u2", {}))
        for a in range(6):
            for b in range(a + 1, 6):
                i, j = win[a], win[b]
                d = (j - i) % 6
                if d in (1, 5):
                    expr = {i: Q(1, 64), j: Q(1, 64), "rho3": Q(1, 64),
                            "u2": Q(45, 2048)}
                    for o in win:
                        if o not in (i, j):
                            expr[o] = Q(-1, 64)
                    out.append((i, j, expr))
                elif d in (2, 4):
                    # same-parity pair: the triangle algebra on <rho^2>
                    l = next(x for x in win if (x - i) % 2 == 0 and x not in (i, j))
                    out.append((i, j, {i: Q(1, 16), j: Q(1, 16), l: Q(1, 32),
                                       "u2": Q(-135, 2048)}))
                else:
                    out.append((i, j, {i: Q(1, 8), j: Q(1, 8), "rho3": Q(-1, 8)}))
        for i in win:
            p, q = (x for x in win if (x - i) % 2 == 0 and x != i)
            out.append((i, "u2", {i: Q(2, 9), p: Q(-1, 9), q: Q(-1, 9),
                                  "u2": Q(5, 32)}))
            out.append((i, "rho3", {i: Q(1, 8), "rho3": Q(1, 8),
                                    _wrap(i + 3, 6): Q(-1, 8)}))
        return out
    raise ValueError(f"unknown dihedral letter {letter!r}")


def inner_entries(letter: str) -> list:
    """Inner products of a dihedral algebra as (symbol, symbol, value)."""
    n = int(letter[0])
    win = WINDOWS[n]
    out = [(k, k, Q(1)) for k in win]
    pairs = [(win[a], win[b]) for a in range(n) for b in range(a + 1, n)]
    if letter == "1A":
        return out
    if letter == "2A":
        out.append(("rho", "rho", Q(1)))
        out.extend([(0, 1, Q(1, 8)), (0, "rho", Q(1, 8)), (1, "rho", Q(1, 8))])
    elif letter == "2B":
        out.append((0, 1, Q(0)))
    elif letter == "3A":
        out.extend((i, j, Q(13, 256)) for i, j in pairs)
        out.extend((i, "u", Q(1, 4)) for i in win)
        out.append(("u", "u", Q(8, 5)))
    elif letter == "3C":
        out.extend((i, j, Q(1, 64)) for i, j in pairs)
    elif letter == "4A":
        out.extend((i, j, Q(0) if (j - i) % 4 == 2 else Q(1, 32)) for i, j in pairs)
        out.extend((i, "v", Q(3, 8)) for i in win)
        out.append(("v", "v", Q(2)))
    elif letter == "4B":
        out.extend((i, j, Q(1, 8) if (j - i) % 4 == 2 else Q(1, 64)) for i, j in pairs)
        out.extend((i, "rho2", Q(1, 8)) for i in win)
        out.append(("rho2", "rho2", Q(1)))
    elif letter == "5A":
        out.extend((i, j, Q(3, 128)) for i, j in pairs)
        out.extend((i, "w", Q(0)) for i in win)
        out.append(("w", "w", Q(875, 524288)))
    elif letter == "6A":
        for i, j in pairs:
            d = (j - i) % 6
            out.append((i, j, Q(1, 8) if d == 3 else
                        Q(13, 256) if d in (2, 4) else Q(5, 256)))
        out.extend((i, "u2", Q(1, 4)) for i in win)
        out.extend((i, "rho3", Q(1, 8)) for i in win)
        out.append(("u2", "u2", Q(8, 5)))
        out.append(("rho3", "rho3", Q(1)))
        out.append(("rho3", "u2", Q(0)))
    else:
        raise ValueError(f"unknown dihedral letter {letter!r}")
    return out


def eigen_entries(letter: str) -> list:
    """ad(a0)-eigenvectors of a dihedral algebra as (eigenvalue, expression).

    Eigenvalues are the strings "0", "1/4", "1/32"; together with a0
    itself the listed vectors span the algebra.
    """
    if letter == "1A":
        return []
    if letter == "2A":
        return [("0", {1: Q(1), "rho": Q(1), 0: Q(-1, 4)}),
                ("1/4", {1: Q(1), "rho": Q(-1)})]
    if letter == "2B":
        return [("0", {1: Q(1)})]
    if letter == "3A":
        return [("0", {"u": Q(1), 0: Q(-10, 27), 1: Q(32, 27), -1: Q(32, 27)}),
                ("1/4", {"u": Q(1), 0: Q(-8, 45), 1: Q(-32, 45), -1: Q(-32, 45)}),
                ("1/32", {1: Q(1), -1: Q(-1)})]
    if letter == "3C":
        return [("0", {1: Q(1), -1: Q(1), 0: Q(-1, 32)}),
                ("1/32", {1: Q(1), -1: Q(-1)})]
    if letter == "4A":
        return [("0", {"v": Q(1), 0: Q(-1, 2), 1: Q(2), -1: Q(2)}),
                ("0", {2: Q(1)}),
                ("1/4", {"v": Q(1), 0: Q(-1, 3), 1: Q(-2, 3), -1: Q(-2, 3),
                         2: Q(-1, 3)}),
                ("1/32", {1: Q(1), -1: Q(-1)})]
    if letter == "4B":
        return [("0", {1: Q(1), -1: Q(1), 0: Q(-1, 32), "rho2": Q(-1, 8),
                       2: Q(1, 8)}),
                ("0", {2: Q(1), "rho2": Q(1), 0: Q(-1, 4)}),
                ("1/4", {2: Q(1), "rho2": Q(-1)}),
                ("1/32", {1: Q(1), -1: Q(-1)})]
    if letter == "5A":
        return [("0", {"w": Q(1), 0: Q(3, 512), 1: Q(-15, 128), -1: Q(-15, 128),
                       2: Q(-1, 128), -2: Q(-1, 128)}),
                ("0", {"w": Q(1), 0: Q(-3, 512), 1: Q(1, 128), -1: Q(1, 128),
                       2: Q(15, 128), -2: Q(15, 128)}),
                ("1/4", {"w": Q(1), 1: Q(1, 128), -1: Q(1, 128),
                         2: Q(-1, 128), -2: Q(-1, 128)}),
                ("1/32", {1: Q(1), -1: Q(-1)}),
                ("1/32", {2: Q(1), -2: Q(-1)})]
    if letter == "6A":
        return [("0", {"u2": Q(1), 0: Q(2, 45), 1: Q(-256, 45), -1: Q(-256, 45),
                       2: Q(-32, 45), -2: Q(-32, 45), 3: Q(-32, 45),
                       "rho3": Q(32, 45)}),
                ("0", {3: Q(1), "rho3": Q(1), 0: Q(-1, 4)}),
                ("0", {"u2": Q(1), 0: Q(-10, 27), 2: Q(32, 27), -2: Q(32, 27)}),
                ("1/4", {"u2": Q(1), 0: Q(-8, 45), 2: Q(-32, 45), -2: Q(-32, 45),
                         3: Q(-32, 45), "rho3": Q(32, 45)}),
                ("1/4", {3: Q(1), "rho3": Q(-1)}),
                ("1/32", {1: Q(1), -1: Q(-1)}),
                ("1/32", {2: Q(1), -2: Q(-1)})]
    raise ValueError(f"unknown dihedral letter {letter!r}")


def symbol_positions(setup: Setup, i: int, j: int, letter: str) -> dict:
    """Resolve the local symbols of the window of axes (i, j).

    Maps each symbol to (coordinate, sign); axis symbol k names the axis
    of t_i * rho^k with rho = t_i * t_j, and the extra symbols name
    powers of rho or the cyclic vector of the subgroup they generate.
    """
    group = setup.group
    t0, t1 = setup.tset[i], setup.tset[j]
    rho = group.mul(t0, t1)
    n = int(letter[0])

    def signed(el: int) -> tuple:
        p = setup.position_of[el]
        return (abs(p) - 1, 1 if p > 0 else -1)

    out = {}
    for k in WINDOWS[n]:
        el = group.mul(t0, group.power(rho, k % n))
        p = setup.position_of[el]
        if p <= 0:
            raise ValueError("axis coordinate with nonpositive position")
        out[k] = (p - 1, 1)
    if letter == "2A":
        out["rho"] = signed(rho)
    elif letter == "3A":
        out["u"] = signed(rho)
    elif letter == "4A":
        out["v"] = signed(rho)
    elif letter == "4B":
        out["rho2"] = signed(group.power(rho, 2))
    elif letter == "5A":
        out["w"] = signed(rho)
    elif letter == "6A":
        out["rho3"] = signed(group.power(rho, 3))
        out["u2"] = signed(group.power(rho, 2))
    return out


class AlgebraState:
    """Products and inner products stored once per coordinate pair orbit.

    ``algebraproducts[k]`` and ``innerproducts[k]`` hold the value at the
    orbit representative, or None while unknown.  Values at arbitrary
    pairs are recovered by transporting along the cached conjugating
    elements; setting a value transports it back to the representative
    and cross-checks anything already there.
    """

    def __init__(self, setup: Setup):
        self.setup = setup
        m = setup.npairorbits
        self.algebraproducts: list = [None] * m
        self.innerproducts: list = [None] * m
        # per axis orbit representative: eigenvalue string -> echelon basis
        self.eigenbases: dict = {}
        self.nullspace = EchelonBasis(setup.ncoords)
        self.gram_done = False
        # solver memos: fused eigenvector pairs, verified check equations
        self.fusion_done: set = set()
        self.consistency_done: set = set()
        # until the Gram kernel is known, product vectors are only
        # determined modulo the radical; with defer_conflicts set,
        # disagreements are parked here and re-checked against the kernel
        # instead of failing immediately
        self.defer_conflicts = False
        self.pending: list = []

    def set_product(self, i: int, j: int, value: SparseVector) -> None:
        k, sign, g = self.setup.orbit_of_pair(i, j)
        rep_val = value.transport(self.setup.signed_perm(self.setup.group.inv(g)))
        if sign < 0:
            rep_val.scale(Q(-1))
        if self.nullspace.dim:
            # products are classes modulo the form's radical; store the
            # canonical representative so conflict checks compare cosets
            rep_val = self.nullspace.reduce(rep_val)
        cur = self.algebraproducts[k]
        if cur is None:
            self.algebraproducts[k] = rep_val
        elif cur != rep_val:
            if self.defer_conflicts and not self.gram_done:
                diff = cur.copy()
                diff.add_scaled(rep_val, Q(-1))
                self.pending.append(diff)
            else:
                raise ShapeConflictError(
                    f"conflicting products at pair orbit {k} "
                    f"(representative {self.setup.pairrepresentatives[k]})")

    def set_inner(self, i: int, j: int, value) -> None:
        k, sign, _ = self.setup.orbit_of_pair(i, j)
        val = value if sign > 0 else -value
        cur = self.innerproducts[k]
        if cur is None:
            self.innerproducts[k] = val
        elif cur != val:
            raise ShapeConflictError(
                f"conflicting inner products at pair orbit {k} "
                f"(representative {self.setup.pairrepresentatives[k]})")

    def product(self, i: int, j: int) -> Optional[SparseVector]:
        """x_i * x_j, or None while the pair's orbit is unknown."""
        k, sign, g = self.setup.orbit_of_pair(i, j)
        rep_val = self.algebraproducts[k]
        if rep_val is None:
            return None
        out = rep_val.transport(self.setup.signed_perm(g))
        if sign < 0:
            out.scale(Q(-1))
        return out

    def inner(self, i: int, j: int):
        """(x_i, x_j), or None while the pair's orbit is unknown."""
        k, sign, _ = self.setup.orbit_of_pair(i, j)
        val = self.innerproducts[k]
        if val is None:
            return None
        return val if sign > 0 else -val

    def product_known(self, i: int, j: int) -> bool:
        return self.algebraproducts[abs(self.setup.pairorbitlist[i][j]) - 1] is not None

    def inner_known(self, i: int, j: int) -> bool:
        return self.innerproducts[abs(self.setup.pairorbitlist[i][j]) - 1] is not None

    def unknown_products(self) -> int:
        return sum(1 for v in self.algebraproducts if v is None)

    def unknown_inners(self) -> int:
        return sum(1 for v in self.innerproducts if v is None)


def _expr_vector(setup: Setup, pos: dict, expr: dict) -> SparseVector:
    vec = SparseVector(setup.ncoords)
    for sym, c in expr.items():
        cc, sg = pos[sym]
        vec[cc] = vec[cc] + (c if sg > 0 else -c)
    return vec


def seed_dihedral_products(state: AlgebraState) -> None:
    """Record every product and inner product a dihedral table determines.

    One pass over the axis pair orbits; each representative's window is
    expanded with its assigned letter and all entries are pushed through
    set_product / set_inner, which transport them onto every orbit they
    touch.  Raises ShapeConflictError if the shape is inconsistent.
    """
    setup = state.setup
    for ob in setup.t_orbits:
        letter = setup.shape[ob.index]
        i, j = ob.rep
        pos = symbol_positions(setup, i, j, letter)
        for sa, sb, expr in product_entries(letter):
            ca, sga = pos[sa]
            cb, sgb = pos[sb]
            vec = _expr_vector(setup, pos, expr)
            if sga * sgb < 0:
                vec.scale(Q(-1))
            state.set_product(ca, cb, vec)
        for sa, sb, val in inner_entries(letter):
            ca, sga = pos[sa]
            cb, sgb = pos[sb]
            state.set_inner(ca, cb, val if sga * sgb > 0 else -val)


def seed_eigenvectors(state: AlgebraState) -> None:
    """Fill the known ad(a_r)-eigenvectors for each axis orbit representative.

    For every other axis j, the window of (r, j) contributes the table
    eigenvectors of its letter; vectors are accumulated in echelon form
    per eigenvalue, so duplicates across windows collapse.
    """
    setup = state.setup
    for r in setup.orbitrepresentatives:
        if r >= setup.naxes:
            continue
        bases = {lam: EchelonBasis(setup.ncoords) for lam in EIGENVALUES}
        state.eigenbases[r] = bases
        for j in range(setup.naxes):
            if j == r:
                continue
            key = (r, j) if r < j else (j, r)
            letter = setup.shape[setup.t_orbit_of[key]]
            pos = symbol_positions(setup, r, j, letter)
            for lam, expr in eigen_entries(letter):
                bases[lam].insert(_expr_vector(setup, pos, expr))
