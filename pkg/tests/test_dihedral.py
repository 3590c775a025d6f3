"""Seeding checks on groups that are themselves dihedral.

In a dihedral group every coordinate pair lies inside the window of some
axis pair orbit, so table seeding alone already determines the whole
algebra.  That makes these groups an end-to-end oracle for the tables,
the signed transport and the coordinate sharing: build each shape, seed
it, then verify the algebra identities and the advertised eigenvectors
by dense computation.
"""

import pytest

from majorana.coords import build_setup
from majorana.dihedral import (
    AlgebraState,
    EIGENVALUES,
    ShapeConflictError,
    seed_dihedral_products,
    seed_eigenvectors,
)
from majorana.linalg import Q, SparseVector, kernel_basis
from majorana.perms import GroupData, parse_cycles
from majorana.shapes import enumerate_shapes

# group generators and the axis involutions, as cycle strings
FAMILIES = {
    "V4": (4, ["(1,2)", "(3,4)"], ["(1,2)", "(3,4)"]),
    "S3": (3, ["(1,2)", "(1,2,3)"], ["(1,2)", "(1,3)", "(2,3)"]),
    "D8": (4, ["(1,2,3,4)", "(1,3)"],
           ["(1,3)", "(2,4)", "(1,2)(3,4)", "(1,4)(2,3)"]),
    "D10": (5, ["(1,2,3,4,5)", "(2,5)(3,4)"],
            ["(2,5)(3,4)", "(1,3)(4,5)", "(1,5)(2,4)", "(1,2)(3,5)",
             "(1,4)(2,3)"]),
    "D12": (6, ["(1,2,3,4,5,6)", "(2,6)(3,5)"],
            ["(2,6)(3,5)", "(1,3)(4,6)", "(1,5)(2,4)",
             "(1,2)(3,6)(4,5)", "(2,3)(1,4)(5,6)", "(3,4)(2,5)(1,6)"]),
}

# letters keyed by dihedral order; expected coordinate count; expected
# ad(a_r)-eigenspace dimensions for every axis representative
CASES = {
    "V4-2A": ("V4", {2: "2A"}, 3, {"0": 1, "1/4": 1, "1/32": 0}),
    "V4-2B": ("V4", {2: "2B"}, 2, {"0": 1, "1/4": 0, "1/32": 0}),
    "S3-3A": ("S3", {3: "3A"}, 4, {"0": 1, "1/4": 1, "1/32": 1}),
    "S3-3C": ("S3", {3: "3C"}, 3, {"0": 1, "1/4": 0, "1/32": 1}),
    "D8-4A": ("D8", {4: "4A", 2: "2B"}, 5, {"0": 2, "1/4": 1, "1/32": 1}),
    "D8-4B": ("D8", {4: "4B", 2: "2A"}, 5, {"0": 2, "1/4": 1, "1/32": 1}),
    "D10-5A": ("D10", {5: "5A"}, 6, {"0": 2, "1/4": 1, "1/32": 2}),
    "D12-6A": ("D12", {6: "6A", 3: "3A", 2: "2A"}, 8,
               {"0": 3, "1/4": 2, "1/32": 2}),
}

LAMBDA = {"0": Q(0), "1/4": Q(1, 4), "1/32": Q(1, 32)}


def family(name):
    points, gens, axes = FAMILIES[name]
    group = GroupData(points, [parse_cycles(s, points) for s in gens])
    tset = sorted(group.index[parse_cycles(s, points)] for s in axes)
    return group, tset


def build_case(name):
    fam, letters, _, _ = CASES[name]
    group, tset = family(fam)
    orbits, shapes = enumerate_shapes(group, tset)
    chosen = [sh for sh in shapes
              if all(sh[ob.index] == letters[ob.n] for ob in orbits if ob.n > 1)]
    assert len(chosen) == 1
    return build_setup(group, tset, orbits, chosen[0])


@pytest.mark.parametrize(
    "fam,count", [("V4", 2), ("S3", 2), ("D8", 2), ("D10", 1), ("D12", 1)])
def test_shape_counts(fam, count):
    group, tset = family(fam)
    _, shapes = enumerate_shapes(group, tset)
    assert len(shapes) == count


def test_cyclic_coordinates_are_shared():
    # both D10 axis pair orbits key the same order five subgroup, and
    # both D12 triangle orbits key the same order three subgroup
    extra = [k for k, _ in build_case("D10-5A").coordinates[5:]]
    assert extra == ["5A"]
    extra = sorted(k for k, _ in build_case("D12-6A").coordinates[6:])
    assert extra == ["2A", "3A"]


def seeded_state(name):
    setup = build_case(name)
    state = AlgebraState(setup)
    seed_dihedral_products(state)
    seed_eigenvectors(state)
    return state


def dense_tables(state):
    nc = state.setup.ncoords
    prod = [[state.product(i, j) for j in range(nc)] for i in range(nc)]
    gram = [[state.inner(i, j) for j in range(nc)] for i in range(nc)]
    return prod, gram


def mult(prod, u, v):
    w = SparseVector(u.n)
    for i, x in u.items():
        for j, y in v.items():
            w.add_scaled(prod[i][j], x * y)
    return w


def form(gram, u, v):
    total = Q(0)
    for i, x in u.items():
        for j, y in v.items():
            total += x * y * gram[i][j]
    return total


@pytest.mark.parametrize("name", sorted(CASES))
def test_seeding_completes_the_algebra(name):
    _, _, ncoords, _ = CASES[name]
    state = seeded_state(name)
    assert state.setup.ncoords == ncoords
    assert state.unknown_products() == 0
    assert state.unknown_inners() == 0


@pytest.mark.parametrize("name", sorted(CASES))
def test_algebra_identities(name):
    state = seeded_state(name)
    nc = state.setup.ncoords
    prod, gram = dense_tables(state)
    for i in range(nc):
        for j in range(nc):
            assert prod[i][j] == prod[j][i]
            assert gram[i][j] == gram[j][i]
    # axis coordinates are idempotents of norm one
    for i, (kind, _) in enumerate(state.setup.coordinates):
        if kind in ("axis", "2A"):
            assert prod[i][i] == SparseVector.unit(nc, i)
            assert gram[i][i] == Q(1)
    # the form associates with the product on every coordinate triple
    basis = [SparseVector.unit(nc, i) for i in range(nc)]
    for i in range(nc):
        for j in range(nc):
            for k in range(nc):
                assert form(gram, prod[i][j], basis[k]) == \
                    form(gram, basis[i], prod[j][k])


@pytest.mark.parametrize("name", sorted(CASES))
def test_eigenvectors_and_dimensions(name):
    _, _, _, eigdims = CASES[name]
    state = seeded_state(name)
    setup = state.setup
    nc = setup.ncoords
    prod, _ = dense_tables(state)
    axis_reps = [r for r in setup.orbitrepresentatives if r < setup.naxes]
    assert set(state.eigenbases) == set(axis_reps)
    for r in axis_reps:
        a = SparseVector.unit(nc, r)
        for lam in EIGENVALUES:
            basis = state.eigenbases[r][lam]
            assert basis.dim == eigdims[lam]
            for row in basis.rows:
                expect = row.copy()
                expect.scale(LAMBDA[lam])
                assert mult(prod, a, row) == expect
        # dense eigenspace dimensions agree, and ad(a_r) diagonalizes
        # with a one dimensional eigenvalue one space
        for lam, want in [(Q(1), 1)] + [(LAMBDA[s], eigdims[s])
                                        for s in EIGENVALUES]:
            rows = []
            for i in range(nc):
                row = SparseVector.from_pairs(
                    nc, ((j, prod[r][j][i]) for j in range(nc)))
                row[i] = row[i] - lam
                rows.append(row)
            assert len(kernel_basis(rows, nc)) == want
        assert 1 + sum(eigdims.values()) == nc


def test_incompatible_letters_collide():
    # a four orbit restates the products of the reflection pairs inside
    # it; pairing letter A with side letters A contradicts that
    group, tset = family("D8")
    orbits, _ = enumerate_shapes(group, tset)
    shape = ["1A" if ob.n == 1 else ("4A" if ob.n == 4 else "2A")
             for ob in orbits]
    setup = build_setup(group, tset, orbits, shape)
    state = AlgebraState(setup)
    with pytest.raises(ShapeConflictError):
        seed_dihedral_products(state)
