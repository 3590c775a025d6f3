"""End-to-end completion runs on the groups small enough to be quick.

The expected outcomes (coordinate count, algebra dimension, nullspace
dimension) are frozen from completed runs and cross-checked against the
known answers for these groups where published dimensions exist.  Shapes
are always selected by their letter assignment, never by enumeration
position.
"""

import pytest

from majorana.dihedral import EIGENVALUES
from majorana.linalg import Q, SparseVector
from majorana.perms import GroupData, parse_cycles
from majorana.shapes import enumerate_shapes
from majorana.solver import build_representation

GROUPS = {
    "S4": (4, ["(1,2)", "(1,2,3,4)"]),
    "A5": (5, ["(1,2,3,4,5)", "(1,2)(3,4)"]),
    "S5": (5, ["(1,2)", "(1,2,3,4,5)"]),
    "L3(2)": (8, ["(1,2,3,4,5,6,7)", "(1,8)(2,7)(3,4)(5,6)"]),
}


def group_and_axes(name, class_sizes=None):
    points, gens = GROUPS[name]
    group = GroupData(points, [parse_cycles(s, points) for s in gens])
    classes = group.involution_classes()
    if class_sizes is not None:
        classes = [c for c in classes if len(c) in class_sizes]
        assert classes
    tset = sorted(set().union(*classes))
    return group, tset


def pick_shape(orbits, shapes, two, three):
    """The unique shape assigning ``two`` to all dihedral orbits of order
    4 and ``three`` to all of order 6."""
    chosen = [
        sh for sh in shapes
        if all(sh[ob.index] == two for ob in orbits if ob.n == 2)
        and all(sh[ob.index] == three for ob in orbits if ob.n == 3)
    ]
    assert len(chosen) == 1, (two, three, shapes)
    return chosen[0]


# group, axis class sizes, (2-letter, 3-letter), expected status,
# expected |C|, expected algebra dimension (None unless complete)
CASES = [
    ("S4", (6, 3), ("2B", "3C"), "complete", 12, 12),
    ("S4", (6, 3), ("2A", "3C"), "complete", 9, 9),
    ("S4", (6, 3), ("2B", "3A"), "incomplete", 16, None),
    ("S4", (6, 3), ("2A", "3A"), "complete", 13, 13),
    ("S4", (6,), ("2B", "3C"), "complete", 6, 6),
    ("S4", (6,), ("2A", "3C"), "complete", 9, 9),
    ("S4", (6,), ("2B", "3A"), "incomplete", 10, None),
    ("A5", None, ("2B", "3C"), "complete", 21, 21),
    ("A5", None, ("2A", "3C"), "complete", 21, 20),
    ("A5", None, ("2B", "3A"), "incomplete", 31, None),
    ("A5", None, ("2A", "3A"), "complete", 31, 26),
    ("L3(2)", None, ("2A", "3C"), "complete", 21, 21),
    ("L3(2)", None, ("2A", "3A"), "complete", 49, 49),
    ("L3(2)", None, ("2B", "3C"), "incomplete", 42, None),
    ("L3(2)", None, ("2B", "3A"), "incomplete", 70, None),
]


def run_case(name, sizes, letters, **kwargs):
    group, tset = group_and_axes(name, sizes)
    orbits, shapes = enumerate_shapes(group, tset)
    shape = pick_shape(orbits, shapes, *letters)
    return build_representation(group, tset, orbits, shape, **kwargs)


@pytest.mark.parametrize("name,sizes,letters,status,ncoords,dim", CASES,
                         ids=[f"{c[0]}-{'+'.join(map(str, c[1])) if c[1] else 'T'}"
                              f"-{c[2][0]}{c[2][1]}" for c in CASES])
def test_small_tier_outcomes(name, sizes, letters, status, ncoords, dim):
    res = run_case(name, sizes, letters)
    state = res.state
    assert res.status == status
    assert state.setup.ncoords == ncoords
    if dim is not None:
        assert state.setup.ncoords - state.nullspace.dim == dim
    if res.status == "complete":
        assert state.unknown_inners() == 0
        assert state.unknown_products() == 0
        assert not state.pending


def test_s5_transposition_shape_completes():
    # the all-2A shape is the only one that survives seeding
    group, tset = group_and_axes("S5")
    orbits, shapes = enumerate_shapes(group, tset)
    assert len(shapes) == 2
    outcomes = {}
    for sh in shapes:
        res = build_representation(group, tset, orbits, sh)
        two = "".join(sorted({sh[ob.index] for ob in orbits if ob.n == 2}))
        outcomes[two] = res
    good = outcomes["2A"]
    assert good.status == "complete"
    assert good.state.setup.ncoords == 41
    assert good.state.setup.ncoords - good.state.nullspace.dim == 36
    assert outcomes["2A2B"].status == "fail"


def mult(state, u, v):
    w = SparseVector(u.n)
    for i, x in u.items():
        for j, y in v.items():
            w.add_scaled(state.product(i, j), x * y)
    return w


def form(state, u, v):
    total = Q(0)
    for i, x in u.items():
        for j, y in v.items():
            total += x * y * state.inner(i, j)
    return total


@pytest.mark.parametrize("letters", [("2B", "3C"), ("2A", "3C")])
def test_completed_a5_satisfies_axis_identities(letters):
    # eigenvectors still hold mod the nullspace, and the bilinear form
    # associates on a full triple scan
    res = run_case("A5", None, letters)
    state = res.state
    assert res.status == "complete"
    nc = state.setup.ncoords
    for r, bases in state.eigenbases.items():
        for lam in EIGENVALUES:
            for v in bases[lam].rows:
                av = mult(state, SparseVector.unit(nc, r), v)
                av.add_scaled(v, -Q(lam))
                assert state.nullspace.reduce(av).is_zero()
    for u in range(3):
        eu = SparseVector.unit(nc, u)
        for v in range(nc):
            for w in range(nc):
                uv_w = form(state, state.product(u, v),
                            SparseVector.unit(nc, w))
                u_vw = form(state, eu, state.product(v, w))
                assert uv_w == u_vw


def serialized_products(state):
    rows = []
    for p in state.algebraproducts:
        rows.append(None if p is None else tuple(p.items()))
    inners = tuple(state.innerproducts)
    return rows, inners


def test_solver_options_do_not_change_results():
    base = run_case("A5", None, ("2A", "3A"))
    alt = run_case("A5", None, ("2A", "3A"), threads=2,
                   use_orthogonality=True)
    assert base.status == alt.status == "complete"
    assert serialized_products(base.state) == serialized_products(alt.state)


def test_repeated_runs_are_identical():
    a = run_case("S4", (6, 3), ("2A", "3A"))
    b = run_case("S4", (6, 3), ("2A", "3A"))
    assert serialized_products(a.state) == serialized_products(b.state)
