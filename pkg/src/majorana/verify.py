"""Axiom checks for completed algebras.

A finished state claims to be a Majorana representation: a commutative
algebra whose bilinear form associates with the product and is positive
semidefinite, whose axes are idempotents of length 1 with spectrum
inside {1, 0, 1/4, 1/32}, whose eigenvectors multiply inside the fusion
rules, and whose products are invariant under the acting group.  Nothing
here trusts the solver: every check recomputes its claim from the stored
products.  Vector equalities are taken modulo the radical of the form,
the same quotient the construction works in.

``check_axioms`` covers the algebra side, ``check_equivariance`` the
group action.  Both leave the state untouched and return a ``Report``
whose records carry pass/fail, a count of what was checked, and the
witnessing triple or pair on failure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dihedral import AlgebraState
from .linalg import Q, EchelonBasis, SparseVector

_ZERO = Q(0)
_ONE = Q(1)

LAMBDA = {"0": _ZERO, "1/4": Q(1, 4), "1/32": Q(1, 32)}

# closure targets for products of eigenvectors; "1" stands for the span
# of the axis itself
FUSION_SPAN = {
    ("0", "0"): ("0",),
    ("0", "1/4"): ("1/4",),
    ("0", "1/32"): ("1/32",),
    ("1/4", "1/4"): ("1", "0"),
    ("1/4", "1/32"): ("1/32",),
    ("1/32", "1/32"): ("1", "0", "1/4"),
}

_WITNESS_CAP = 5


@dataclass
class CheckRecord:
    """Outcome of one axiom check."""

    name: str
    passed: bool = True
    checked: int = 0
    failures: int = 0
    witnesses: list = field(default_factory=list)
    note: str = ""

    def fail(self, witness) -> None:
        self.passed = False
        self.failures += 1
        if len(self.witnesses) < _WITNESS_CAP:
            self.witnesses.append(list(witness))

    def line(self) -> str:
        status = "pass" if self.passed else "FAIL"
        out = f"{self.name}: {status} ({self.checked} checked"
        if self.failures:
            out += f", {self.failures} failed"
        out += ")"
        if not self.passed and self.witnesses:
            out += f" witness {self.witnesses[0]}"
        if self.note:
            out += f" [{self.note}]"
        return out


@dataclass
class Report:
    """Ordered collection of check records."""

    records: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def record(self, name: str, **kw) -> CheckRecord:
        rec = CheckRecord(name, **kw)
        self.records.append(rec)
        return rec

    def to_text(self) -> str:
        head = "all checks passed" if self.passed else "CHECKS FAILED"
        return "\n".join([head] + [r.line() for r in self.records])

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [
                {
                    "name": r.name,
                    "passed": r.passed,
                    "checked": r.checked,
                    "failures": r.failures,
                    "witnesses": r.witnesses,
                    "note": r.note,
                }
                for r in self.records
            ],
        }


def _require_complete(state: AlgebraState) -> None:
    if state.unknown_products() or state.unknown_inners():
        raise ValueError("axiom checks need a completed algebra")


def _product_table(state: AlgebraState) -> dict:
    """All pairwise products of coordinate units, keyed by (i, j), i <= j."""
    n = state.setup.ncoords
    return {(i, j): state.product(i, j) for i in range(n) for j in range(i, n)}


def _gram_rows(state: AlgebraState) -> list:
    """Dense rows of the form's matrix on the coordinate units."""
    n = state.setup.ncoords
    return [[state.inner(i, j) for j in range(n)] for i in range(n)]


def _pair_mult(prod: dict, n: int, u: SparseVector, v: SparseVector) -> SparseVector:
    out = SparseVector(n)
    for i, x in u.d.items():
        for j, y in v.d.items():
            key = (i, j) if i <= j else (j, i)
            out.add_scaled(prod[key], x * y)
    return out


def _form_rows(prod: dict, gram: list, n: int) -> dict:
    """For each pair, the vector of form values ((e_i e_j), e_w) over w."""
    out = {}
    for key, p in prod.items():
        acc = [_ZERO] * n
        for k, x in p.d.items():
            row = gram[k]
            for w in range(n):
                y = row[w]
                if y:
                    acc[w] += x * y
        out[key] = acc
    return out


def _residual(state: AlgebraState, v: SparseVector) -> bool:
    """True when v is zero modulo the radical."""
    if v.is_zero():
        return True
    return state.nullspace.reduce(v).is_zero()


def _check_m1(rep: Report, n: int, formrows: dict) -> None:
    rec = rep.record("M1 form associates with the product")
    for u in range(n):
        for v in range(u, n):
            fuv = formrows[(u, v)]
            for w in range(v, n):
                # the full symmetric group on (u, v, w) is generated by
                # these cycles once the product commutes and the form is
                # symmetric, both of which hold by construction
                rec.checked += 1
                t1 = fuv[w]
                if t1 != formrows[(v, w)][u] or t1 != formrows[(u, w)][v]:
                    rec.fail((u, v, w))


def _check_m2(rep: Report, n: int, prod: dict, formrows: dict) -> None:
    rec = rep.record(
        "M2 Norton inequality",
        note="necessary condition only: checked on coordinate pairs, not all of V",
    )
    for u in range(n):
        fu = formrows[(u, u)]
        for v in range(u, n):
            rec.checked += 1
            lhs = _ZERO
            for k, x in prod[(v, v)].d.items():
                lhs += x * fu[k]
            rhs = _ZERO
            fuv = formrows[(u, v)]
            for k, x in prod[(u, v)].d.items():
                rhs += x * fuv[k]
            if lhs < rhs:
                rec.fail((u, v))


def _check_m3(rep: Report, state: AlgebraState) -> None:
    rec = rep.record("M3 axes are idempotents of length 1")
    n = state.setup.ncoords
    for i in range(state.setup.naxes):
        rec.checked += 1
        d = state.product(i, i)
        d.add_scaled(SparseVector.unit(n, i), -_ONE)
        if not _residual(state, d) or state.inner(i, i) != 1:
            rec.fail((i,))


def _axis_reps(state: AlgebraState) -> list:
    setup = state.setup
    return [r for r in setup.orbitrepresentatives if r < setup.naxes]


def _check_eigenspaces(rep: Report, state: AlgebraState, prod: dict,
                       gram: list) -> None:
    """Spectrum, eigenspace dimensions and orthogonality, fusion, and the
    sign automorphism, checked at one axis per orbit."""
    setup = state.setup
    n = setup.ncoords
    nulldim = state.nullspace.dim
    rec_eig = rep.record("M4 spectrum is {1, 0, 1/4, 1/32}")
    rec_dim = rep.record("M4 eigenvectors span the algebra")
    rec_m5 = rep.record("M5 axis spans its 1-eigenspace")
    rec_orth = rep.record("eigenspaces orthogonal for the form")
    rec_fus = rep.record("fusion rules close eigenvector products")
    rec_m7 = rep.record("M7 sign automorphism preserves products on V+")
    for r in _axis_reps(state):
        bases = state.eigenbases[r]
        axis = SparseVector.unit(n, r)

        def amult(x, _r=r):
            out = SparseVector(n)
            for j, xj in x.d.items():
                key = (_r, j) if _r <= j else (j, _r)
                out.add_scaled(prod[key], xj)
            return out

        # every stored basis vector is an actual eigenvector
        for lam in ("0", "1/4", "1/32"):
            lv = LAMBDA[lam]
            for ridx, v in enumerate(bases[lam].rows):
                rec_eig.checked += 1
                d = amult(v)
                d.add_scaled(v, -lv)
                if not _residual(state, d):
                    rec_eig.fail((r, lam, ridx))

        # the axis, the eigenbases and the radical together must fill the
        # space: modulo the radical that is a spanning set of eigenvectors
        # of dimension ncoords - nulldim, so ad(a) acts diagonalizably
        # with the claimed spectrum
        span = EchelonBasis(n)
        for v in state.nullspace.rows:
            span.insert(v)
        span.insert(axis)
        for lam in ("0", "1/4", "1/32"):
            for v in bases[lam].rows:
                span.insert(v)
        rec_dim.checked += 1
        if span.dim != n:
            rec_dim.fail((r, span.dim, n - nulldim))

        # the cubic in ad(a) that kills the 0, 1/4 and 1/32 eigenspaces
        # projects onto the 1-eigenspace; every coordinate has to land on
        # the line through the axis
        axline = EchelonBasis(n)
        for v in state.nullspace.rows:
            axline.insert(v)
        axline.insert(axis)
        c14, c132 = LAMBDA["1/4"], LAMBDA["1/32"]
        scale = _ONE / ((_ONE - c14) * (_ONE - c132))
        for j in range(n):
            rec_m5.checked += 1
            e = SparseVector.unit(n, j)
            y = amult(e)
            q = amult(y)
            q.add_scaled(y, -(c14 + c132))
            q.add_scaled(e, c14 * c132)
            p1 = amult(q)
            p1.scale(scale)
            if not axline.reduce(p1).is_zero():
                rec_m5.fail((r, j))

        # distinct eigenvalues give orthogonal eigenvectors
        labelled = [("1", [axis])]
        labelled += [(lam, bases[lam].rows) for lam in ("0", "1/4", "1/32")]
        for a in range(len(labelled)):
            la, rows_a = labelled[a]
            for b in range(a + 1, len(labelled)):
                lb, rows_b = labelled[b]
                for ia, x in enumerate(rows_a):
                    for ib, y in enumerate(rows_b):
                        rec_orth.checked += 1
                        total = _ZERO
                        for i, xi in x.d.items():
                            gi = gram[i]
                            for j, yj in y.d.items():
                                total += xi * yj * gi[j]
                        if total != 0:
                            rec_orth.fail((r, la, lb, ia, ib))

        # products of eigenvectors stay inside the fused span
        spans = {}
        for pair, target in FUSION_SPAN.items():
            if target in spans:
                continue
            eb = EchelonBasis(n)
            for v in state.nullspace.rows:
                eb.insert(v)
            for lam in target:
                if lam == "1":
                    eb.insert(axis)
                else:
                    for v in bases[lam].rows:
                        eb.insert(v)
            spans[target] = eb
        products = {}
        for (la, lb), target in FUSION_SPAN.items():
            eb = spans[target]
            rows_a = bases[la].rows
            rows_b = bases[lb].rows
            for ia, x in enumerate(rows_a):
                start = ia if la == lb else 0
                for ib in range(start, len(rows_b)):
                    rec_fus.checked += 1
                    p = _pair_mult(prod, n, x, rows_b[ib])
                    products[(la, ia, lb, ib)] = p
                    if not eb.reduce(p).is_zero():
                        rec_fus.fail((r, la, lb, ia, ib))

        # the map fixing the 1- and 0-eigenspaces and negating the
        # 1/4-eigenspace; on V+ the 1/4 component of p comes out of
        # 4(a p - (a, p) a), so sigma(p) = p - 8(a p - (a, p) a)
        def sigma(p, _r=r):
            form = _ZERO
            row = gram[_r]
            for k, x in p.d.items():
                form += x * row[k]
            out = p.copy()
            ap = amult(p)
            out.add_scaled(ap, Q(-8))
            out[_r] = out[_r] + 8 * form
            return out

        plus = [("1", 0, axis, _ONE)]
        plus += [("0", i, v, _ONE) for i, v in enumerate(bases["0"].rows)]
        plus += [("1/4", i, v, -_ONE) for i, v in enumerate(bases["1/4"].rows)]
        for a in range(len(plus)):
            la, ia, x, sa = plus[a]
            for b in range(a, len(plus)):
                lb, ib, y, sb = plus[b]
                rec_m7.checked += 1
                key = (la, ia, lb, ib)
                p = products.get(key)
                if p is None:
                    p = _pair_mult(prod, n, x, y)
                lhs = sigma(p)
                lhs.add_scaled(p, -sa * sb)
                if not _residual(state, lhs):
                    rec_m7.fail((r, la, lb, ia, ib))


def _transported_pair(sp: list, i: int, j: int):
    si, sj = sp[i], sp[j]
    i2 = si - 1 if si > 0 else -si - 1
    j2 = sj - 1 if sj > 0 else -sj - 1
    sign = _ONE if (si > 0) == (sj > 0) else -_ONE
    if i2 > j2:
        i2, j2 = j2, i2
    return i2, j2, sign


def _check_m6(rep: Report, state: AlgebraState, prod: dict) -> None:
    rec = rep.record("M6 axis involutions preserve the product")
    setup = state.setup
    n = setup.ncoords
    for ti, t in enumerate(setup.tset):
        sp = setup.signed_perm(t)
        for (i, j), p in prod.items():
            rec.checked += 1
            i2, j2, sign = _transported_pair(sp, i, j)
            d = p.transport(sp)
            d.add_scaled(prod[(i2, j2)], -sign)
            if not _residual(state, d):
                rec.fail((ti, i, j))


def _check_gram_psd(rep: Report, state: AlgebraState, gram: list) -> None:
    rec = rep.record("form is positive semidefinite")
    n = state.setup.ncoords
    a = [row[:] for row in gram]
    positive = 0
    for i in range(n):
        d = a[i][i]
        if d < 0:
            rec.fail(("negative pivot", i))
            break
        if d == 0:
            # a semidefinite form with a zero diagonal entry must vanish
            # on that whole row; anything else is indefinite
            bad = next((j for j in range(i + 1, n) if a[i][j] != 0), None)
            if bad is not None:
                rec.fail(("zero pivot with nonzero row", i, bad))
                break
            continue
        positive += 1
        inv = _ONE / d
        ai = a[i]
        for r in range(i + 1, n):
            f = a[r][i]
            if f == 0:
                continue
            fr = f * inv
            ar = a[r]
            for c in range(i, n):
                ar[c] -= fr * ai[c]
    rec.checked = n
    if rec.passed and positive != n - state.nullspace.dim:
        rec.fail(("rank mismatch", positive, n - state.nullspace.dim))


def check_axioms(state: AlgebraState) -> Report:
    """Verify the algebra axioms on a completed state.

    Exact arithmetic throughout; the state is only read.  Raises
    ValueError while any product or inner product is still unknown.
    """
    _require_complete(state)
    n = state.setup.ncoords
    rep = Report()
    prod = _product_table(state)
    gram = _gram_rows(state)
    formrows = _form_rows(prod, gram, n)
    _check_m1(rep, n, formrows)
    _check_m2(rep, n, prod, formrows)
    _check_m3(rep, state)
    _check_eigenspaces(rep, state, prod, gram)
    _check_m6(rep, state, prod)
    _check_gram_psd(rep, state, gram)
    return rep


def check_equivariance(state: AlgebraState) -> Report:
    """Verify stored products and inner products are group invariant.

    Transports every coordinate pair by each group generator and compares
    against the stored value at the image pair, products modulo the
    radical, inner products exactly.
    """
    _require_complete(state)
    setup = state.setup
    rep = Report()
    prod = _product_table(state)
    rec_p = rep.record("products invariant under the group")
    rec_f = rep.record("form invariant under the group")
    for gi, g in enumerate(setup.group.generators):
        sp = setup.signed_perm(setup.group.index[g])
        for (i, j), p in prod.items():
            i2, j2, sign = _transported_pair(sp, i, j)
            rec_p.checked += 1
            d = p.transport(sp)
            d.add_scaled(prod[(i2, j2)], -sign)
            if not _residual(state, d):
                rec_p.fail((gi, i, j))
            rec_f.checked += 1
            if state.inner(i, j) != sign * state.inner(i2, j2):
                rec_f.fail((gi, i, j))
    return rep
