from fractions import Fraction

import numpy as np
import pytest
from sympy import QQ, GF
from sympy.polys.matrices import DomainMatrix

from errors import InvariantError, ParseError
from linalg import (
    ChainComplexVS,
    EchelonBasis,
    FieldSpec,
    Matrix,
    SpanSolver,
    cochain_as_chain,
    homology_dims,
    homology_with_projection,
    rank,
    rank_kernel,
)


def sympy_rank(rows, p=0):
    domain = QQ if p == 0 else GF(p)
    shape = (len(rows), len(rows[0]) if rows else 0)
    return DomainMatrix([[domain(int(x)) for x in r] for r in rows], shape, domain).rank()


def test_field_spec_validation():
    assert FieldSpec().label == "QQ"
    assert FieldSpec(2).label == "GF(2)"
    assert FieldSpec(2**31 - 1).characteristic == 2**31 - 1
    for bad in (1, 4, -3, 2**31 + 11, True, "2"):
        with pytest.raises(ParseError):
            FieldSpec(bad)


def test_field_elements():
    gf7 = FieldSpec(7)
    assert gf7.element(-1) == 6
    assert gf7.element(Fraction(1, 2)) == 4
    assert gf7.inv(3) == 5
    assert FieldSpec().element(3) == Fraction(3)


def test_rank_kernel_examples(qq):
    r, ker = rank_kernel(Matrix.identity(3, qq))
    assert (r, ker) == (3, [])

    r, ker = rank_kernel(Matrix.zeros(2, 5, qq))
    assert r == 0
    assert len(ker) == 5

    r, ker = rank_kernel(Matrix.from_rows([[2, 4], [1, 2]], qq))
    assert r == 1
    assert ker == [(-2, 1)]


def test_kernel_vectors_are_killed():
    rng = np.random.default_rng(3)
    for p in (0, 2, 5, 101):
        fld = FieldSpec(p)
        for _ in range(20):
            rows, cols = int(rng.integers(1, 7)), int(rng.integers(1, 7))
            m = Matrix.from_rows(rng.integers(-3, 4, size=(rows, cols)).tolist(), fld)
            r, ker = rank_kernel(m)
            assert r + len(ker) == cols
            for v in ker:
                assert all(x == 0 for x in m.apply(v))


def test_rank_matches_sympy():
    rng = np.random.default_rng(17)
    for p in (0, 2, 3, 7919):
        fld = FieldSpec(p)
        for _ in range(25):
            rows, cols = int(rng.integers(1, 8)), int(rng.integers(1, 8))
            data = rng.integers(-4, 5, size=(rows, cols)).tolist()
            assert rank(Matrix.from_rows(data, fld)) == sympy_rank(data, p)


def test_rank_invariant_under_permutations(qq):
    rng = np.random.default_rng(23)
    for _ in range(15):
        data = rng.integers(-2, 3, size=(5, 6))
        expected = rank(Matrix.from_rows(data.tolist(), qq))
        shuffled = data[rng.permutation(5)][:, rng.permutation(6)]
        assert rank(Matrix.from_rows(shuffled.tolist(), qq)) == expected


def test_large_prime_agrees_with_rationals():
    rng = np.random.default_rng(29)
    big = FieldSpec(2**31 - 1)
    for _ in range(15):
        data = rng.integers(-9, 10, size=(6, 6)).tolist()
        assert rank(Matrix.from_rows(data, big)) == rank(Matrix.from_rows(data, FieldSpec()))


def test_matrix_shapes_survive_zero_sizes(qq):
    m = Matrix.zeros(0, 3, qq)
    assert m.transpose().shape == (3, 0)
    assert Matrix.zeros(3, 0, qq).transpose().shape == (0, 3)
    assert (Matrix.zeros(2, 0, qq) @ Matrix.zeros(0, 4, qq)).shape == (2, 4)


def test_matrix_json_round_trip(qq):
    m = Matrix.from_rows([[Fraction(1, 2), -3], [0, Fraction(7, 9)]], qq)
    assert Matrix.from_json(m.to_json(), 2, 2, qq) == m
    assert m.to_json() == [["1/2", "-3"], ["0", "7/9"]]


def test_echelon_basis():
    fld = FieldSpec(3)
    basis = EchelonBasis(3, fld)
    assert basis.add((1, 1, 0))
    assert basis.add((0, 1, 1))
    assert not basis.add((1, 2, 1))
    assert basis.contains((2, 2, 0))
    assert len(basis) == 2


def test_span_solver(qq):
    solver = SpanSolver([(1, 0, 1), (0, 1, 1)], 3, qq)
    assert solver.solve((2, 3, 5)) == (2, 3)
    assert solver.solve((0, 0, 1)) is None
    with pytest.raises(InvariantError):
        SpanSolver([(1, 2), (2, 4)], 2, qq)


def test_homology_examples(qq):
    one = Matrix.identity(1, qq)
    zero = Matrix.zeros(1, 1, qq)
    assert [h.dim for h in homology_with_projection(ChainComplexVS((1, 1), (one,), qq))] == [0, 0]
    assert [h.dim for h in homology_with_projection(ChainComplexVS((1, 1), (zero,), qq))] == [1, 1]


def test_homology_rejects_nonzero_square(qq):
    one = Matrix.identity(1, qq)
    with pytest.raises(InvariantError):
        homology_with_projection(ChainComplexVS((1, 1, 1), (one, one), qq))


def test_projection_of_representatives_and_boundaries(qq):
    # 0 <- k^2 <-d1- k^3 <- 0 with d1 of rank 1
    d1 = Matrix.from_rows([[1, 1, 0], [2, 2, 0]], qq)
    data = homology_with_projection(ChainComplexVS((2, 3), (d1,), qq))
    assert [h.dim for h in data] == [1, 2]
    for h in data:
        for k, rep in enumerate(h.representatives):
            expected = tuple(1 if j == k else 0 for j in range(h.dim))
            assert h.project(rep) == expected
    assert data[0].project(d1.column(0)) == (0,)
    with pytest.raises(InvariantError):
        data[1].project((1, 0, 0))


def test_dual_complex_homology_is_reversed():
    rng = np.random.default_rng(41)
    fld = FieldSpec(5)
    for _ in range(10):
        a = Matrix.from_rows(rng.integers(0, 5, size=(3, 4)).tolist(), fld)
        kernel = rank_kernel(a)[1]
        b = Matrix.from_columns(kernel, 4, fld) if kernel else Matrix.zeros(4, 1, fld)
        chain = ChainComplexVS((3, 4, b.cols), (a, b), fld)
        dims = homology_dims(chain)
        dual = cochain_as_chain(list(chain.terms), [a.transpose(), b.transpose()], fld)
        assert homology_dims(dual) == list(reversed(dims))
        assert [h.dim for h in homology_with_projection(chain)] == dims
