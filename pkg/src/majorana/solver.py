"""Completion of a seeded algebra by sparse rational linear systems.

The seeded state knows every product inside a dihedral window; the
remaining products are found by an iterated three step loop:

* inner products from associativity of the form, (u, v*w) = (u*v, w),
  solved as scalar systems over the unknown pair orbits; once the form
  is complete its Gram kernel is stored as the algebra nullspace;
* new eigenvectors by fusing known ones: a product of eigenvectors
  decomposes along the fusion rules, and the eigenvalue one component
  is the projection (a, x)a, so the 1/4 and 1/32 squares shed exactly
  computable corrections;
* algebra products from the eigen equations a*v = mu*v, annihilation
  u*v = 0 against the nullspace, and (when those stall) the resurrection
  identity a*((alpha - beta)*gamma) = (1/4)(alpha, gamma)a - nu*(gamma*beta)
  for eigenvectors alpha, gamma of a common eigenvalue in {0, 1/4} and
  beta of another; the correction term drops when alpha, gamma have
  eigenvalue 0.  These systems treat each unknown coordinate pair as a
  vector unknown with scalar coefficients; solved pairs are transported
  onto their orbit representative, which makes the whole orbit known.

Every equation whose unknowns all turn out to be known is kept as a
consistency check, so impossible shapes die with a witness instead of
completing incorrectly.  All scans run in fixed orders, so identical
inputs give identical states.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .coords import Setup, build_setup
from .dihedral import (
    EIGENVALUES,
    AlgebraState,
    ShapeConflictError,
    seed_dihedral_products,
    seed_eigenvectors,
)
from .linalg import LinearSystem, Q, SparseVector, kernel_basis

logger = logging.getLogger(__name__)

LAMBDA = {"0": Q(0), "1/4": Q(1, 4), "1/32": Q(1, 32)}
FUSION_TARGET = {("0", "1/4"): "1/4", ("0", "1/32"): "1/32",
                 ("1/4", "1/32"): "1/32"}

# eigenvalue of the alpha/gamma pool, eigenvalues of the beta pool
RESURRECTION_POOLS = (("0", ("1/4", "1/32")), ("1/4", ("0", "1/32")))

DEFAULT_RESURRECTION_CAP = 2000


class InconsistentSystem(Exception):
    """A linear system contradicts itself; the shape is impossible."""


@dataclass
class BuildOutcome:
    """Result of the completion loop.

    status is "complete" when every inner and algebra product is known,
    "incomplete" when the loop stalled with unknowns left (a candidate
    for extending the spanning set), and "fail" when the shape led to a
    contradiction.
    """

    status: str
    state: AlgebraState
    iterations: int = 0
    message: str = ""


def split_product(state: AlgebraState, u: SparseVector, v: SparseVector):
    """Split u*v into a known vector and an unknown linear expression.

    Returns (known, unknown) with unknown a dict from canonical unknown
    coordinate pairs to coefficients; u*v equals known plus the formal
    sum of coefficient times pair product.  Terms of a common orbit and
    transporting element are grouped before transport.
    """
    setup = state.setup
    pol = setup.pairorbitlist
    pconj = setup.pairconj
    prods = state.algebraproducts
    groups: dict = {}
    unknown: dict = {}
    for i, x in u.items():
        row_o = pol[i]
        row_g = pconj[i]
        for j, y in v.items():
            c = x * y
            k = row_o[j]
            if prods[abs(k) - 1] is None:
                key = (i, j) if i <= j else (j, i)
                unknown[key] = unknown.get(key, 0) + c
            else:
                gk = (k, row_g[j])
                groups[gk] = groups.get(gk, 0) + c
    known = SparseVector(setup.ncoords)
    for (k, g), c in sorted(groups.items()):
        if c == 0:
            continue
        rep = prods[abs(k) - 1]
        known.add_scaled(rep.transport(setup.signed_perm(g)), c if k > 0 else -c)
    return known, {p: c for p, c in sorted(unknown.items()) if c != 0}


def mult_or_none(state: AlgebraState, u: SparseVector, v: SparseVector):
    """u*v when every touched pair product is known, else None."""
    known, unknown = split_product(state, u, v)
    return None if unknown else known


def form_or_none(state: AlgebraState, u: SparseVector, v: SparseVector):
    """(u, v) when every touched pair inner product is known, else None."""
    pol = state.setup.pairorbitlist
    inners = state.innerproducts
    total = Q(0)
    for i, x in u.items():
        row = pol[i]
        for j, y in v.items():
            k = row[j]
            val = inners[abs(k) - 1]
            if val is None:
                return None
            total += x * y * (val if k > 0 else -val)
    return total


def _axis_reps(setup: Setup) -> list:
    return [r for r in setup.orbitrepresentatives if r < setup.naxes]


def orthogonality_equations(state: AlgebraState, r: int) -> list:
    """Equations (u, v) = 0 for eigenvectors of distinct eigenvalues.

    The eigenspace decomposition is orthogonal, and the axis itself
    spans the eigenvalue one space, so every stored eigenvector of a_r
    is orthogonal to the axis and to the vectors of the other two
    bases.  An optional second source of inner product equations.
    """
    setup = state.setup
    pol = setup.pairorbitlist
    inners = state.innerproducts
    bases = state.eigenbases[r]
    axis = SparseVector.unit(setup.ncoords, r)
    out = []
    spaces = [("1", [axis])] + [(lam, bases[lam].rows) for lam in EIGENVALUES]
    for a in range(len(spaces)):
        for b in range(a + 1, len(spaces)):
            mu, rows_a = spaces[a]
            nu, rows_b = spaces[b]
            for i, u in enumerate(rows_a):
                for j, v in enumerate(rows_b):
                    coeffs = SparseVector(setup.npairorbits)
                    rhs = Q(0)
                    for m, x in u.items():
                        row = pol[m]
                        for n, y in v.items():
                            k = row[n]
                            sc = x * y if k > 0 else -x * y
                            val = inners[abs(k) - 1]
                            if val is None:
                                coeffs[abs(k) - 1] = coeffs[abs(k) - 1] + sc
                            else:
                                rhs -= sc * val
                    out.append((coeffs, rhs, ("orth", r, mu, i, nu, j)))
    return out


def find_inner_products(state: AlgebraState,
                        use_orthogonality: bool = False) -> None:
    """Derive inner products from (u, v*w) = (u*v, w) over all triples.

    u runs over coordinate orbit representatives, which covers every
    triple up to the group action.  Unknowns are the inner product
    values at the unknown pair orbits; fully known equations are checked
    and must hold.  Once no unknowns remain the Gram matrix kernel is
    stored as the nullspace.
    """
    setup = state.setup
    nc = setup.ncoords
    pol = setup.pairorbitlist
    inners = state.innerproducts
    if any(v is None for v in inners):
        reps = setup.orbitrepresentatives
        rep_rows = {u: [state.product(u, v) for v in range(nc)] for u in reps}
        system = LinearSystem(setup.npairorbits, 1)
        for v in range(nc):
            pol_v = pol[v]
            row_v = [None] * nc
            for w in range(nc):
                if state.algebraproducts[abs(pol_v[w]) - 1] is not None:
                    row_v[w] = state.product(v, w)
            for w in range(nc):
                pvw = row_v[w]
                if pvw is None:
                    continue
                for u in reps:
                    puv = rep_rows[u][v]
                    if puv is None:
                        continue
                    coeffs = SparseVector(setup.npairorbits)
                    rhs = Q(0)
                    for m, c in pvw.items():
                        k = pol[u][m]
                        sc = c if k > 0 else -c
                        val = inners[abs(k) - 1]
                        if val is None:
                            coeffs[abs(k) - 1] = coeffs[abs(k) - 1] + sc
                        else:
                            rhs -= sc * val
                    for m, c in puv.items():
                        k = pol[m][w]
                        sc = c if k > 0 else -c
                        val = inners[abs(k) - 1]
                        if val is None:
                            coeffs[abs(k) - 1] = coeffs[abs(k) - 1] - sc
                        else:
                            rhs += sc * val
                    outcome = system.add(
                        coeffs, SparseVector.from_pairs(1, [(0, rhs)]),
                        tag=("m1", u, v, w))
                    if outcome == "inconsistent":
                        raise InconsistentSystem(
                            f"associativity fails at triple {system.witness}")
        if use_orthogonality:
            for r in _axis_reps(setup):
                for coeffs, rhs, tag in orthogonality_equations(state, r):
                    outcome = system.add(
                        coeffs, SparseVector.from_pairs(1, [(0, rhs)]), tag=tag)
                    if outcome == "inconsistent":
                        raise InconsistentSystem(
                            f"eigenvectors not orthogonal at {system.witness}")
        for col, vec in system.take_determined().items():
            inners[col] = vec[0]
    if state.gram_done or any(v is None for v in inners):
        return
    rows = []
    for i in range(nc):
        row = pol[i]
        rows.append(SparseVector.from_pairs(
            nc, ((j, inners[abs(row[j]) - 1] if row[j] > 0
                  else -inners[abs(row[j]) - 1]) for j in range(nc))))
    for vec in kernel_basis(rows, nc):
        state.nullspace.insert(vec)
    state.gram_done = True
    if state.nullspace.dim:
        # renormalize products recorded before the radical was known
        for k, p in enumerate(state.algebraproducts):
            if p is not None:
                state.algebraproducts[k] = state.nullspace.reduce(p)
    # product disagreements parked before the kernel was known must be
    # radical elements; anything else is a genuine contradiction
    for vec in state.pending:
        if not state.nullspace.reduce(vec).is_zero():
            raise InconsistentSystem(
                "product conflict outside the radical "
                f"(kernel dimension {state.nullspace.dim})")
    state.pending.clear()


def fuse_eigenvectors(state: AlgebraState) -> None:
    """Produce new eigenvectors from products of known ones.

    For eigenvectors of distinct eigenvalues, or both of eigenvalue 0,
    the product lands in the fusion target space.  Squares from the 1/4
    and 1/32 spaces decompose with an eigenvalue one component equal to
    the projection onto the axis, so they are recovered once the inner
    product of the factors is known; the 1/32 case additionally splits
    its 0 and 1/4 parts by one multiplication with the axis.  Processed
    pairs are memoized; pairs whose products are not yet recoverable are
    retried on later passes.
    """
    setup = state.setup
    nc = setup.ncoords
    done = state.fusion_done
    for r in _axis_reps(setup):
        bases = state.eigenbases[r]
        counts = {lam: bases[lam].dim for lam in EIGENVALUES}
        axis = SparseVector.unit(nc, r)
        for a in range(len(EIGENVALUES)):
            for b in range(a, len(EIGENVALUES)):
                mu, nu = EIGENVALUES[a], EIGENVALUES[b]
                for i in range(counts[mu]):
                    for j in range(i if mu == nu else 0, counts[nu]):
                        key = (r, mu, i, nu, j)
                        if key in done:
                            continue
                        alpha = bases[mu].rows[i]
                        beta = bases[nu].rows[j]
                        prod, unknown = split_product(state, alpha, beta)
                        if unknown:
                            continue
                        if mu != nu:
                            bases[FUSION_TARGET[(mu, nu)]].insert(prod)
                        elif mu == "0":
                            bases["0"].insert(prod)
                        elif mu == "1/4":
                            ab = form_or_none(state, alpha, beta)
                            if ab is None:
                                continue
                            v0 = prod.copy()
                            v0[r] = v0[r] - ab / 4
                            bases["0"].insert(v0)
                        else:
                            ab = form_or_none(state, alpha, beta)
                            if ab is None:
                                continue
                            x = mult_or_none(state, axis, prod)
                            if x is None:
                                continue
                            v14 = x.copy()
                            v14.scale(Q(4))
                            v14[r] = v14[r] - ab / 8
                            v0 = prod.copy()
                            v0.add_scaled(v14, Q(-1))
                            v0[r] = v0[r] - ab / 32
                            bases["1/4"].insert(v14)
                            bases["0"].insert(v0)
                        done.add(key)


def axis_eigen_equations(state: AlgebraState, r: int) -> list:
    """Equations a_r * v = mu * v over the unknown pairs touching v."""
    out = []
    if r not in state.eigenbases:
        return out
    axis = SparseVector.unit(state.setup.ncoords, r)
    bases = state.eigenbases[r]
    for lam in EIGENVALUES:
        for idx, v in enumerate(bases[lam].rows):
            tag = ("eig", r, lam, idx)
            if tag in state.consistency_done:
                continue
            known, unknown = split_product(state, axis, v)
            rhs = v.copy()
            rhs.scale(LAMBDA[lam])
            rhs.add_scaled(known, Q(-1))
            out.append((unknown, rhs, tag))
    return out


def _transport_equation(sp: list, row: dict, rhs: SparseVector):
    """Image of a pair-unknown equation under a signed permutation.

    Valid because products are equivariant: carrying every pair and the
    right hand side along g turns a true equation into a true equation,
    and known pairs stay known since knowledge is per orbit.
    """
    new_row = {}
    for (i, j), c in row.items():
        si, sj = sp[i], sp[j]
        a, b = abs(si) - 1, abs(sj) - 1
        if a > b:
            a, b = b, a
        new_row[(a, b)] = c if (si > 0) == (sj > 0) else -c
    return new_row, rhs.transport(sp)


def _with_conjugates(state: AlgebraState, reps: list, per_rep: list) -> list:
    """Representative equations plus their transports to the whole orbit."""
    setup = state.setup
    out = []
    for r, eqs in zip(reps, per_rep):
        out.extend(eqs)
        for t in range(setup.naxes):
            if t == r or setup.orbit_rep_of[t] != r:
                continue
            sp = setup.signed_perm(setup.conjelements[t])
            for row, rhs, tag in eqs:
                if not row:
                    continue
                row2, rhs2 = _transport_equation(sp, row, rhs)
                out.append((row2, rhs2, ("conj", t) + tag))
    return out


def nullspace_equations(state: AlgebraState) -> list:
    """Equations u * v = 0 for every coordinate u and nullspace vector v."""
    if not state.gram_done:
        return []
    setup = state.setup
    nc = setup.ncoords
    out = []
    for w_idx, w in enumerate(state.nullspace.rows):
        for i in range(nc):
            tag = ("null", i, w_idx)
            if tag in state.consistency_done:
                continue
            known, unknown = split_product(
                state, SparseVector.unit(nc, i), w)
            known.scale(Q(-1))
            out.append((unknown, known, tag))
    return out


def _unknown_columns(state: AlgebraState) -> list:
    """Per coordinate, the set of partners whose pair orbit is unknown."""
    setup = state.setup
    prods = state.algebraproducts
    nc = setup.ncoords
    out = []
    for i in range(nc):
        row = setup.pairorbitlist[i]
        out.append({j for j in range(nc) if prods[abs(row[j]) - 1] is None})
    return out


def _unknown_part(state: AlgebraState, u: SparseVector, v: SparseVector,
                  ucols: list) -> dict:
    """The unknown half of split_product, skipping the known accumulation.

    Set intersections against the precomputed unknown-partner table make
    pairs with fully known products (the common case late in the run)
    nearly free.
    """
    vd = v.d
    vkeys = vd.keys()
    unknown: dict = {}
    for i, x in u.d.items():
        cols = ucols[i]
        if not cols:
            continue
        for j in vkeys & cols:
            c = x * vd[j]
            key = (i, j) if i <= j else (j, i)
            unknown[key] = unknown.get(key, 0) + c
    return {p: c for p, c in sorted(unknown.items()) if c != 0}


def resurrection_equations(state: AlgebraState, r: int,
                           cap: int = DEFAULT_RESURRECTION_CAP) -> list:
    """Resurrection equations for the axis a_r.

    For gamma, beta with beta * gamma not recoverable, an alpha from the
    same eigenspace as gamma is sought whose product with gamma has the
    same unknown part up to scale; then (c*alpha - beta) * gamma is
    known and a_r * ((c*alpha - beta) * gamma) = (1/4)(c*alpha, gamma)a
    - nu * (gamma * beta) relates the unknown products a_r * x to the
    unknown pairs of beta * gamma.  Candidates are bucketed by the
    normalized unknown part; every alpha in a matching bucket yields its
    own equation since the known parts differ.  At most cap equations
    are emitted per axis (logged when hit).

    Bucket building needs only unknown parts; the expensive known parts
    are computed for actual matches alone, cached per unordered row pair
    (the same cross pair shows up from both pools).
    """
    setup = state.setup
    nc = setup.ncoords
    if r not in state.eigenbases:
        return []
    bases = state.eigenbases[r]
    axis = SparseVector.unit(nc, r)
    ucols = _unknown_columns(state)
    unk_cache: dict = {}
    known_cache: dict = {}

    def pairkey(la, ia, lb, ib):
        return ((la, ia), (lb, ib)) if (la, ia) <= (lb, ib) else \
            ((lb, ib), (la, ia))

    def unk_of(la, ia, lb, ib):
        key = pairkey(la, ia, lb, ib)
        got = unk_cache.get(key)
        if got is None:
            got = _unknown_part(
                state, bases[la].rows[ia], bases[lb].rows[ib], ucols)
            unk_cache[key] = got
        return got

    def known_of(la, ia, lb, ib):
        key = pairkey(la, ia, lb, ib)
        got = known_cache.get(key)
        if got is None:
            got, _ = split_product(
                state, bases[la].rows[ia], bases[lb].rows[ib])
            known_cache[key] = got
        return got

    out = []
    for pool_lam, beta_lams in RESURRECTION_POOLS:
        pool = bases[pool_lam].rows
        for g_i in range(len(pool)):
            gamma = pool[g_i]
            buckets: dict = {}
            for a_i in range(len(pool)):
                unk_a = unk_of(pool_lam, a_i, pool_lam, g_i)
                if not unk_a:
                    continue
                lead = next(iter(unk_a.values()))
                sig = tuple((p, c / lead) for p, c in unk_a.items())
                buckets.setdefault(sig, []).append((a_i, lead))
            for beta_lam in beta_lams:
                if pool_lam == "0":
                    nu = LAMBDA[beta_lam]
                else:
                    nu = Q(1, 4) if beta_lam == "0" else Q(1, 32)
                for b_i, beta in enumerate(bases[beta_lam].rows):
                    unk_b = unk_of(beta_lam, b_i, pool_lam, g_i)
                    if not unk_b:
                        continue
                    lead = next(iter(unk_b.values()))
                    sig = tuple((p, c / lead) for p, c in unk_b.items())
                    hits = buckets.get(sig)
                    if not hits:
                        continue
                    known_b = known_of(beta_lam, b_i, pool_lam, g_i)
                    for a_i, lead_a in hits:
                        scale = lead / lead_a
                        if pool_lam == "1/4":
                            ag = form_or_none(state, pool[a_i], gamma)
                            if ag is None:
                                continue
                            ag = scale * ag
                        # (scale*alpha - beta) * gamma is fully known
                        diff = known_of(pool_lam, a_i, pool_lam, g_i).copy()
                        diff.scale(scale)
                        diff.add_scaled(known_b, Q(-1))
                        x_known, x_unknown = split_product(state, axis, diff)
                        row = dict(x_unknown)
                        for p, c in unk_b.items():
                            row[p] = row.get(p, 0) + nu * c
                        rhs = known_b.copy()
                        rhs.scale(-nu)
                        rhs.add_scaled(x_known, Q(-1))
                        if pool_lam == "1/4":
                            rhs[r] = rhs[r] + ag / 4
                        row = {p: c for p, c in row.items() if c != 0}
                        out.append((row, rhs,
                                    ("res", r, pool_lam, beta_lam,
                                     g_i, b_i, a_i)))
                        if len(out) >= cap:
                            logger.info(
                                "resurrection cap %d reached at axis %d",
                                cap, r)
                            return out
    return out


def _solve_pair_system(state: AlgebraState, equations: list) -> None:
    """Solve scalar-coefficient equations over unknown pair products.

    Each unknown pair is one column; right hand sides are coordinate
    vectors.  Determined pairs are recorded through set_product, which
    transports them onto their orbit representative.  Fully known
    equations must reduce to 0 = 0 and are memoized as checked.
    """
    cols: dict = {}
    order: list = []
    for row, _, _ in equations:
        for p in row:
            if p not in cols:
                cols[p] = len(order)
                order.append(p)
    system = LinearSystem(len(order), state.setup.ncoords)
    for row, rhs, tag in equations:
        coeffs = SparseVector.from_pairs(
            len(order), ((cols[p], c) for p, c in row.items()))
        if state.nullspace.dim:
            rhs = state.nullspace.reduce(rhs)
        outcome = system.add(coeffs, rhs, tag=tag)
        if outcome == "inconsistent":
            if state.gram_done:
                raise InconsistentSystem(
                    f"contradictory equation {system.witness}")
            # rhs now holds the eliminated residual; it must turn out to
            # lie in the not yet known radical
            state.pending.append(rhs)
        elif not row and outcome == "redundant":
            state.consistency_done.add(tag)
    for col, vec in system.take_determined().items():
        i, j = order[col]
        state.set_product(i, j, vec)


def find_algebra_products(state: AlgebraState, threads: int = 1,
                          resurrection_cap: int = DEFAULT_RESURRECTION_CAP) -> None:
    """Derive algebra products from eigenvectors, nullspace, resurrection.

    First solves the system of eigen equations and nullspace
    annihilation; if unknown products remain, builds and solves the
    resurrection system.  Equations are generated at axis orbit
    representatives and transported to every axis of the orbit; the
    transported copies constrain the pairs the representative does not
    touch.  Generation per representative is independent and may run on
    a thread pool; assembly order is by axis regardless.
    """
    if not any(p is None for p in state.algebraproducts):
        return
    reps = _axis_reps(state.setup)
    per_axis = _map_axes(axis_eigen_equations, state, reps, threads)
    equations = _with_conjugates(state, reps, per_axis)
    equations.extend(nullspace_equations(state))
    _solve_pair_system(state, equations)
    if not any(p is None for p in state.algebraproducts):
        return
    # the resurrection system alone is usually rank deficient; rebuild the
    # eigen and nullspace equations (solving consumed them) and solve all
    # three sources together
    per_axis = _map_axes(axis_eigen_equations, state, reps, threads)
    equations = _with_conjugates(state, reps, per_axis)
    equations.extend(nullspace_equations(state))
    per_axis = _map_axes(
        lambda st, r: resurrection_equations(st, r, resurrection_cap),
        state, reps, threads)
    equations.extend(_with_conjugates(state, reps, per_axis))
    _solve_pair_system(state, equations)


def _map_axes(fn, state: AlgebraState, reps: list, threads: int) -> list:
    if threads > 1 and len(reps) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda r: fn(state, r), reps))
    return [fn(state, r) for r in reps]


def _progress(state: AlgebraState) -> tuple:
    evec_dims = sum(b.dim for bases in state.eigenbases.values()
                    for b in bases.values())
    known_inner = sum(1 for v in state.innerproducts if v is not None)
    known_alg = sum(1 for v in state.algebraproducts if v is not None)
    return (known_inner, known_alg, evec_dims, len(state.fusion_done),
            state.nullspace.dim)


def main_loop(state: AlgebraState, threads: int = 1,
              resurrection_cap: int = DEFAULT_RESURRECTION_CAP,
              use_orthogonality: bool = False) -> BuildOutcome:
    """Alternate the three derivation steps until complete or stalled."""
    iteration = 0
    while True:
        iteration += 1
        before = _progress(state)
        try:
            find_inner_products(state, use_orthogonality)
            fuse_eigenvectors(state)
            find_algebra_products(state, threads, resurrection_cap)
        except (InconsistentSystem, ShapeConflictError) as exc:
            logger.info("iter=%d failed: %s", iteration, exc)
            return BuildOutcome("fail", state, iteration, str(exc))
        inner_u = state.unknown_inners()
        alg_u = state.unknown_products()
        logger.info("iter=%d inner_unknown=%d algebra_unknown=%d pending=%d",
                    iteration, inner_u, alg_u, len(state.pending))
        if inner_u == 0 and alg_u == 0:
            if state.pending:
                raise AssertionError("complete build left unchecked residuals")
            return BuildOutcome("complete", state, iteration)
        if _progress(state) == before:
            return BuildOutcome("incomplete", state, iteration)


def build_representation(group, tset, orbits, shape, threads: int = 1,
                         resurrection_cap: int = DEFAULT_RESURRECTION_CAP,
                         use_orthogonality: bool = False) -> BuildOutcome:
    """Seed the algebra of one shape and run the completion loop."""
    setup = build_setup(group, tset, orbits, shape)
    state = AlgebraState(setup)
    try:
        seed_dihedral_products(state)
    except ShapeConflictError as exc:
        return BuildOutcome("fail", state, 0, str(exc))
    seed_eigenvectors(state)
    # seeding conflicts are table contradictions and fatal above; from
    # here on disagreements may be radical elements, so defer them
    state.defer_conflicts = True
    return main_loop(state, threads, resurrection_cap, use_orthogonality)
