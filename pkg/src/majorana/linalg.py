"""Exact sparse linear algebra over the rationals.

Everything downstream (dihedral seeding, the equation solvers, axiom
verification) runs on three structures defined here:

* ``SparseVector``: a dict-backed rational vector of fixed length.
* ``EchelonBasis``: an append-only forward-reduced basis with stable row
  indices, used for eigenspace bases and the nullspace of the Gram matrix.
* ``LinearSystem``: an incremental Gauss-Jordan eliminator over a block of
  unknown columns, with an attached right-hand-side block of fixed width.
  Feeding it equations one at a time keeps the reduced system canonical, so
  an unknown is reported determined exactly when a batch reduction of the
  same equations would pin it.

Scalars are ``gmpy2.mpq`` when available (C-speed rationals) and
``fractions.Fraction`` otherwise.  Both print as ``p/q`` or ``p`` and parse
back from that form, which is what the state files store.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as Q

_ZERO = Q(0)
_ONE = Q(1)


def qstr(x) -> str:
    """Render a rational as ``p/q``, or ``p`` when the denominator is 1."""
    return str(x)

def qparse(s: str):
    """Parse a rational from the ``p/q`` or ``p`` form produced by qstr."""
    return Q(s)


class SparseVector:
    """Fixed-length rational vector storing only nonzero entries.

    Mutating operations (`__setitem__`, `add_scaled`, `scale`) keep the
    invariant that no explicit zero is ever stored; the arithmetic
    operators return fresh vectors and are for convenience outside hot
    loops.
    """

    __slots__ = ("n", "d")

    def __init__(self, n: int):
        self.n = n
        self.d: dict = {}

    @classmethod
    def from_dense(cls, values: Sequence) -> "SparseVector":
        v = cls(len(values))
        for j, x in enumerate(values):
            if x != 0:
                v.d[j] = Q(x)
        return v

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable) -> "SparseVector":
        v = cls(n)
        for j, x in pairs:
            if x != 0:
                v.d[j] = Q(x)
        return v

    @classmethod
    def unit(cls, n: int, j: int) -> "SparseVector":
        v = cls(n)
        v.d[j] = _ONE
        return v

    def copy(self) -> "SparseVector":
        v = SparseVector(self.n)
        v.d = dict(self.d)
        return v

    def widened(self, n: int) -> "SparseVector":
        """Copy with length ``n``; the appended coordinates are zero."""
        if n < self.n:
            raise ValueError("widened cannot shrink a vector")
        v = SparseVector(n)
        v.d = dict(self.d)
        return v

    def __getitem__(self, j: int):
        return self.d.get(j, _ZERO)

    def __setitem__(self, j: int, val) -> None:
        if val == 0:
            self.d.pop(j, None)
        else:
            self.d[j] = val

    @property
    def nnz(self) -> int:
        return len(self.d)

    def is_zero(self) -> bool:
        return not self.d

    def support(self) -> list:
        """Indices of nonzero entries, ascending."""
        return sorted(self.d)

    def items(self) -> list:
        """(index, value) pairs, ascending by index."""
        return sorted(self.d.items())

    def leading(self) -> Optional[tuple]:
        """Smallest nonzero index and its value, or None on the zero vector."""
        if not self.d:
            return None
        j = min(self.d)
        return j, self.d[j]

    def add_scaled(self, other: "SparseVector", c) -> None:
        """In-place ``self += c * other``."""
        if c == 0:
            return
        d = self.d
        for j, x in other.d.items():
            new = d.get(j, _ZERO) + c * x
            if new == 0:
                d.pop(j, None)
            else:
                d[j] = new

    def scale(self, c) -> None:
        """In-place ``self *= c``."""
        if c == 0:
            self.d.clear()
            return
        for j in self.d:
            self.d[j] *= c

    def dot(self, other: "SparseVector"):
        a, b = self.d, other.d
        if len(b) < len(a):
            a, b = b, a
        total = _ZERO
        for j, x in a.items():
            y = b.get(j)
            if y is not None:
                total += x * y
        return total

    def transport(self, sp: Sequence[int]) -> "SparseVector":
        """Push the vector through a signed permutation of its coordinates.

        ``sp`` lists signed 1-based images: coordinate ``j`` is carried to
        ``|sp[j]| - 1`` and its value negated when ``sp[j] < 0``.
        """
        out = SparseVector(self.n)
        od = out.d
        for j, x in self.d.items():
            s = sp[j]
            if s > 0:
                od[s - 1] = x
            else:
                od[-s - 1] = -x
        return out

    def resized(self, m: int) -> "SparseVector":
        """Copy with length ``m``; existing entries must fit."""
        if m < self.n and any(j >= m for j in self.d):
            raise ValueError("resize would drop entries")
        v = SparseVector(m)
        v.d = dict(self.d)
        return v

    def to_dense(self) -> list:
        return [self.d.get(j, _ZERO) for j in range(self.n)]

    def __add__(self, other: "SparseVector") -> "SparseVector":
        v = self.copy()
        v.add_scaled(other, _ONE)
        return v

    def __sub__(self, other: "SparseVector") -> "SparseVector":
        v = self.copy()
        v.add_scaled(other, -_ONE)
        return v

    def __neg__(self) -> "SparseVector":
        v = self.copy()
        v.scale(-_ONE)
        return v

    def __rmul__(self, c) -> "SparseVector":
        v = self.copy()
        v.scale(c)
        return v

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SparseVector)
            and self.n == other.n
            and self.d == other.d
        )

    __hash__ = None

    def __repr__(self) -> str:
        inner = ", ".join(f"{j}: {qstr(x)}" for j, x in self.items())
        return f"SparseVector({self.n}, {{{inner}}})"


class EchelonBasis:
    """Append-only echelon basis with stable row indices.

    New vectors are reduced against existing rows in insertion order and
    appended monic when independent.  Existing rows are never touched, so
    the index returned by ``insert`` stays valid for the lifetime of the
    basis; eigenspace bookkeeping depends on that.
    """

    __slots__ = ("ncols", "rows", "pivcols", "_pivmap")

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list = []
        self.pivcols: list = []
        self._pivmap: dict = {}

    @property
    def dim(self) -> int:
        return len(self.rows)

    def reduce(self, v: SparseVector) -> SparseVector:
        """Residual of ``v`` after elimination by the stored rows."""
        w = v.copy()
        # row i carries no pivot column of rows < i, so one ascending pass
        # clears every pivot column for good
        for i, row in enumerate(self.rows):
            c = self.pivcols[i]
            x = w.d.get(c)
            if x is not None:
                w.add_scaled(row, -x)
        return w

    def insert(self, v: SparseVector) -> Optional[int]:
        """Add ``v`` to the basis; return its row index, or None if dependent."""
        w = self.reduce(v)
        lead = w.leading()
        if lead is None:
            return None
        c, x = lead
        w.scale(_ONE / x)
        idx = len(self.rows)
        self.rows.append(w)
        self.pivcols.append(c)
        self._pivmap[c] = idx
        return idx

    def contains(self, v: SparseVector) -> bool:
        return self.reduce(v).is_zero()

    def widened(self, ncols: int) -> "EchelonBasis":
        """Copy over a longer coordinate list; row indices are preserved."""
        b = EchelonBasis(ncols)
        b.rows = [r.widened(ncols) for r in self.rows]
        b.pivcols = list(self.pivcols)
        b._pivmap = dict(self._pivmap)
        return b


class LinearSystem:
    """Incremental exact Gauss-Jordan elimination with a vector right hand side.

    Each equation is ``sum_j coeffs[j] * x_j = rhs`` where the unknowns
    ``x_j`` are themselves vectors of width ``rhs_width`` (width 1 recovers
    plain scalar systems).  The stored rows are kept in full reduced form:
    besides its pivot column a row carries only free columns.  That costs a
    back-elimination sweep on every new pivot, but it is what keeps the
    arithmetic small; a forward-only variant lets row supports and rational
    denominators snowball on the larger equation sets.  ``colmap`` tracks
    which rows carry each column so the sweep touches only those.

    An equation whose coefficients reduce to zero is redundant when its
    right hand side also cancels and inconsistent otherwise.
    """

    __slots__ = (
        "ncols",
        "rhs_width",
        "rows",
        "pivots",
        "colmap",
        "inconsistent",
        "witness",
        "_handed",
    )

    def __init__(self, ncols: int, rhs_width: int):
        self.ncols = ncols
        self.rhs_width = rhs_width
        self.rows: list = []  # (coeffs, rhs) in insertion order
        self.pivots: dict = {}  # pivot col -> index into rows
        self.colmap: dict = {}  # col -> indices of rows whose coeffs carry it
        self.inconsistent = False
        self.witness: Optional[tuple] = None
        self._handed: set = set()

    @property
    def rank(self) -> int:
        return len(self.rows)

    def add(self, coeffs: SparseVector, rhs: SparseVector, tag=None) -> str:
        """Fold one equation in. Returns "new", "redundant" or "inconsistent".

        ``coeffs`` and ``rhs`` are consumed.  A redundant equation is one
        already implied by the system; it is dropped after serving as a
        consistency check.  ``tag`` is kept with the witness on the first
        inconsistency for error reporting.
        """
        # stored rows carry no pivot column but their own, so subtracting a
        # pivot row introduces only free columns and one pass over the
        # initial support eliminates every pivoted column
        for col in coeffs.support():
            x = coeffs.d.get(col)
            if x is None:
                continue
            idx = self.pivots.get(col)
            if idx is None:
                continue
            prow, prhs = self.rows[idx]
            coeffs.add_scaled(prow, -x)
            rhs.add_scaled(prhs, -x)
        lead = coeffs.leading()
        if lead is None:
            if rhs.is_zero():
                return "redundant"
            self.inconsistent = True
            if self.witness is None:
                self.witness = (tag, rhs)
            return "inconsistent"
        col, x = lead
        inv = _ONE / x
        coeffs.scale(inv)
        rhs.scale(inv)
        idx = len(self.rows)
        carriers = self.colmap.get(col)
        if carriers:
            # the new pivot column was free until now; clear it from the
            # rows that picked it up, refreshing their colmap membership
            # on the columns this row touches
            new_cols = list(coeffs.d)
            for i in list(carriers):
                prow, prhs = self.rows[i]
                f = prow.d[col]
                prow.add_scaled(coeffs, -f)
                prhs.add_scaled(rhs, -f)
                for c in new_cols:
                    if c in prow.d:
                        self.colmap.setdefault(c, set()).add(i)
                    else:
                        s = self.colmap.get(c)
                        if s is not None:
                            s.discard(i)
        self.pivots[col] = idx
        self.rows.append((coeffs, rhs))
        for c in coeffs.d:
            self.colmap.setdefault(c, set()).add(idx)
        return "new"

    def take_determined(self) -> dict:
        """Unknowns pinned by the equations so far, as {column: value}.

        Values are copies sized ``rhs_width``; each column is handed out
        once across calls, in ascending column order.
        """
        out = {}
        for col in sorted(self.pivots):
            if col in self._handed:
                continue
            coeffs, rhs = self.rows[self.pivots[col]]
            if len(coeffs.d) == 1:
                self._handed.add(col)
                out[col] = rhs.copy()
        return out

    def determined_value(self, col: int) -> Optional[SparseVector]:
        idx = self.pivots.get(col)
        if idx is None:
            return None
        coeffs, rhs = self.rows[idx]
        return rhs.copy() if len(coeffs.d) == 1 else None


def echelonize(rows: Iterable[SparseVector], ncols: int):
    """Canonical RREF of the span of ``rows``.

    Returns ``(rref_rows, pivots)`` with rows monic, mutually reduced and
    sorted by pivot column.  The output depends only on the row space, so
    it is usable as a canonical form.
    """
    sys_ = LinearSystem(ncols, 0)
    for r in rows:
        sys_.add(r.copy(), SparseVector(0))
    order = sorted(sys_.pivots)
    out_rows = [sys_.rows[sys_.pivots[c]][0] for c in order]
    return out_rows, order


def kernel_basis(rows: Iterable[SparseVector], ncols: int) -> list:
    """Basis of the right kernel ``{x : row . x = 0 for all rows}``.

    One vector per free column in ascending order, each carrying a unit at
    its free column and the balancing entries at the pivot columns.
    """
    rref, pivots = echelonize(rows, ncols)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = SparseVector(ncols)
        v.d[f] = _ONE
        for p, row in zip(pivots, rref):
            x = row.d.get(f)
            if x is not None:
                v.d[p] = -x
        basis.append(v)
    return basis
