"""Spanning set extension for constructions that stall short of 2-closure.

A completion run can end with some coordinate pair orbits still lacking
a product: the span of the axes and cyclic vectors is not closed under
the algebra product.  The remedy is to adjoin the missing products as
new basis vectors.  Every pair (i, j) of an unresolved orbit becomes a
coordinate, that orbit's product becomes the unit vector at the new
coordinate of its representative pair, and all stored vectors are
padded with zero entries.  One call performs one such round, so calling
it n - 2 times on a stubborn algebra targets n-closure.

The group action extends to pair coordinates by acting on the two
underlying coordinates; the image of a pair coordinate is positive
exactly when the signs of the two component images agree.  The axis
involutions fix the 1, 0 and 1/4 eigenspaces of their axis pointwise
and negate the 1/32 eigenspace, so for any vector w the difference
w - w^t lies in the 1/32 eigenspace of the axis of t.  Applied to each
new coordinate this donates fresh eigenvectors, which is what lets the
rerun make progress.
"""

from __future__ import annotations

from .coords import Setup
from .dihedral import AlgebraState
from .linalg import Q, SparseVector
from .solver import BuildOutcome, DEFAULT_RESURRECTION_CAP, main_loop


def _extended_setup(setup: Setup, unknown: set) -> Setup:
    """Copy of ``setup`` with one coordinate per pair of each listed orbit.

    Pairs are scanned in ascending (i, j) order, so the new coordinate
    numbering is reproducible.  The old coordinates keep their indices,
    and since the action maps old coordinates among themselves, the old
    pair orbits reappear with their representatives and transports
    unchanged (their orbit numbers may shift).
    """
    coordinates = list(setup.coordinates)
    pair_index = dict(setup.pair_coord_index)
    nc = setup.ncoords
    for i in range(nc):
        row = setup.pairorbitlist[i]
        for j in range(i, nc):
            if abs(row[j]) - 1 in unknown and (i, j) not in pair_index:
                pair_index[(i, j)] = len(coordinates)
                coordinates.append(("pair", (i, j)))
    ext = Setup(setup.group, setup.tset, coordinates,
                dict(setup.position_of), pair_index)
    ext.t_orbits = list(setup.t_orbits)
    ext.shape = list(setup.shape)
    ext.t_orbit_of = dict(setup.t_orbit_of)
    return ext


def _carry_state(state: AlgebraState, ext: Setup) -> AlgebraState:
    """Transplant every stored value onto the extended coordinate list.

    Known products and inner products are re-entered through the new
    setup's own transport tables (the orbit numbering may have changed,
    the values have not); eigenbases, the nullspace, parked residuals
    and the solver memos are carried verbatim.  Vectors in the kernel of
    a positive semidefinite form are orthogonal to the whole
    representation, not just the old span, so keeping the nullspace rows
    is sound.  The Gram matrix gains unknown entries, so gram_done drops
    back to False and the kernel is recomputed after the rerun fills
    them in.
    """
    old = state.setup
    nc = ext.ncoords
    carried = AlgebraState(ext)
    carried.defer_conflicts = state.defer_conflicts
    carried.gram_done = False
    carried.fusion_done = set(state.fusion_done)
    carried.consistency_done = set(state.consistency_done)
    carried.pending = [v.widened(nc) for v in state.pending]
    carried.nullspace = state.nullspace.widened(nc)
    for r, bases in state.eigenbases.items():
        carried.eigenbases[r] = {lam: b.widened(nc) for lam, b in bases.items()}
    for k, (i, j) in enumerate(old.pairrepresentatives):
        v = state.algebraproducts[k]
        if v is None:
            # the orbit whose pairs became coordinates now has its
            # product by construction; others stay unknown
            pos = ext.pair_coord_index.get((i, j))
            if pos is not None:
                carried.set_product(i, j, SparseVector.unit(nc, pos))
        else:
            carried.set_product(i, j, v.widened(nc))
        x = state.innerproducts[k]
        if x is not None:
            carried.set_inner(i, j, x)
    return carried


def new_32_eigenvectors(state: AlgebraState, first_new: int) -> int:
    """Append (w - w^t)-style eigenvectors for the new coordinates.

    For each axis orbit representative r and each coordinate c at or
    beyond ``first_new``, inserts e_c - (e_c)^t into the 1/32 eigenspace
    of r (t the involution of r); images are read off the signed
    permutation, and vectors that reduce to zero are discarded by the
    echelon insert.  Returns the number of independent vectors gained.
    """
    ext = state.setup
    gained = 0
    for r, bases in state.eigenbases.items():
        sp = ext.signed_perm(ext.tset[r])
        target = bases["1/32"]
        for c in range(first_new, ext.ncoords):
            img = sp[c]
            j = abs(img) - 1
            if j == c and img > 0:
                continue
            w = SparseVector.unit(ext.ncoords, c)
            w.add_scaled(SparseVector.unit(ext.ncoords, j),
                         Q(-1) if img > 0 else Q(1))
            if w.is_zero():
                continue
            if target.insert(w) is not None:
                gained += 1
    return gained


def extend_representation(state: AlgebraState, threads: int = 1,
                          resurrection_cap: int = DEFAULT_RESURRECTION_CAP,
                          use_orthogonality: bool = False) -> BuildOutcome:
    """One extension round over the currently missing products.

    Takes a snapshot of the unresolved orbits, then processes them one
    at a time: adjoin that orbit's pairs as coordinates, rerun the
    completion loop, move on.  An orbit whose product was found by an
    earlier rerun is skipped, and the round stops as soon as the algebra
    completes, so the spanning set stays as small as the derivation
    order allows.  Raises ValueError when there is nothing to extend.
    The argument state is left intact; the outcome carries the extended
    one.
    """
    snapshot = [k for k, p in enumerate(state.algebraproducts) if p is None]
    if not snapshot:
        raise ValueError("every pair orbit has a product; nothing to extend")
    # extensions renumber the orbits, so remember each orbit by its
    # representative pair; the pre-extension coordinate indices are stable
    pairs = [state.setup.pairrepresentatives[k] for k in snapshot]
    outcome = BuildOutcome("incomplete", state, 0)
    for i, j in pairs:
        current = outcome.state
        if current.product_known(i, j):
            continue
        k = abs(current.setup.pairorbitlist[i][j]) - 1
        ext = _extended_setup(current.setup, {k})
        carried = _carry_state(current, ext)
        new_32_eigenvectors(carried, current.setup.ncoords)
        outcome = main_loop(carried, threads, resurrection_cap,
                            use_orthogonality)
        if outcome.status != "incomplete":
            break
    return outcome
