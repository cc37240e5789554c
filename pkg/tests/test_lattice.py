from fractions import Fraction
from itertools import product

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import invariant_factors

from tpc_invariants import lattice
from tpc_invariants.errors import (
    DefiniteForm,
    DegenerateMatrix,
    NotCharacteristic,
    NotUnimodular,
    ParityViolation,
    RankObstruction,
    SignatureObstruction,
)
from tpc_invariants.lattice import (
    E8_NEGATIVE,
    E8_POSITIVE,
    EVEN,
    HYPERBOLIC,
    ODD,
    FinAbGroup,
    FormDescriptor,
    Summand,
)

from .conftest import symmetric_matrices, unimodular_matrices

int_matrices = st.integers(0, 7).flatmap(
    lambda m: st.integers(0, 7).flatmap(
        lambda n: st.lists(st.lists(st.integers(-20, 20), min_size=n, max_size=n),
                           min_size=m, max_size=m)))


# smith normal form -----------------------------------------------------------

def test_snf_examples():
    assert lattice.smith_normal_form([]).D == ()
    assert lattice.smith_normal_form([[2, 0], [0, 3]]).diagonal == (1, 6)
    assert lattice.smith_normal_form([[0]]).D == ((0,),)


@settings(max_examples=150, deadline=None)
@given(int_matrices)
def test_snf_relation_and_chain(a):
    s = lattice.smith_normal_form(a)
    m = len(a)
    n = len(a[0]) if m else 0
    if m and n:
        assert lattice.matmul(lattice.matmul(s.U, a), s.V) == s.D
    assert abs(lattice.determinant(s.U)) == 1 and abs(lattice.determinant(s.V)) == 1
    assert lattice.matmul(s.U, s.U_inv) == lattice.identity(m)
    for i in range(m):
        for j in range(n):
            if i != j:
                assert s.D[i][j] == 0
    d = s.diagonal
    for x, y in zip(d, d[1:]):
        assert x >= 0 and (y % x == 0 if x else y == 0)


@settings(max_examples=60, deadline=None)
@given(int_matrices.filter(lambda a: a and a[0]))
def test_snf_matches_sympy_invariant_factors(a):
    mine = [x for x in lattice.smith_normal_form(a).diagonal if x]
    theirs = [abs(int(x)) for x in invariant_factors(sympy.Matrix(a)) if x]
    assert mine == theirs


def test_snf_12x12():
    rng = np.random.default_rng(7)
    a = rng.integers(-9, 10, size=(12, 12)).tolist()
    s = lattice.smith_normal_form(a)
    assert lattice.matmul(lattice.matmul(s.U, a), s.V) == s.D


# groups and cokernels -----------------------------------------------------------

def test_cokernel_examples():
    assert lattice.cokernel([[0]]).group == FinAbGroup(1)
    assert lattice.cokernel(E8_NEGATIVE).group == FinAbGroup(0)
    assert lattice.cokernel([[2]]).group == FinAbGroup(0, (2,))


def test_e8_determinant_by_cofactor_expansion():
    assert sympy.Matrix(E8_POSITIVE).det(method="berkowitz") == 1
    assert lattice.determinant(E8_POSITIVE) == 1


@settings(max_examples=80, deadline=None)
@given(symmetric_matrices(max_n=6))
def test_cokernel_free_rank_is_nullity(a):
    c = lattice.cokernel(a)
    assert c.group.free_rank == lattice.inertia(a).nullity
    # columns of A map to zero and lifts project back
    for j in range(len(a)):
        assert c.project([row[j] for row in a]).is_zero()
    for g in list(c.group.torsion_elements())[:20]:
        assert c.project(c.lift(g)) == g


def test_group_validation():
    with pytest.raises(ValueError):
        FinAbGroup(0, (2, 3))
    with pytest.raises(ValueError):
        FinAbGroup(0, (1,))
    g = FinAbGroup(1, (4,))
    assert g.element([3, 7]).coords == (3, 3)
    assert g.element([0, 2]).order() == 2
    assert g.element([1, 0]).order() == 0


# divisibility and factors -----------------------------------------------------------

def test_divisibility_examples():
    assert lattice.divisibility(FinAbGroup(2).element([2, 4])) == 2
    assert lattice.divisibility(FinAbGroup(0, (6,)).element([4])) == 0
    assert lattice.divisibility(FinAbGroup(1).element([0])) == 0


def test_is_factor_examples():
    g = FinAbGroup(1, (6,))
    c = g.element([5, 3])
    assert lattice.is_factor(1, c)
    t = FinAbGroup(0, (6,)).element([1])  # order 6
    for k in (1, 7, 13, -5):
        assert lattice.is_factor(k, t)
    assert not lattice.is_factor(8, FinAbGroup(1).element([4]))
    assert lattice.factor_witness(2, FinAbGroup(1).element([4])).coords == (2,)


groups = st.tuples(st.integers(0, 2), st.lists(st.integers(2, 12), max_size=2)).map(
    lambda t: FinAbGroup(t[0], tuple(sorted(t[1], key=lambda x: x))) if _chain(sorted(t[1])) else FinAbGroup(t[0]))


def _chain(ts):
    return all(b % a == 0 for a, b in zip(ts, ts[1:]))


@settings(max_examples=150, deadline=None)
@given(groups.filter(lambda g: g.rank <= 3), st.data())
def test_is_factor_brute_force(g, data):
    coords = [data.draw(st.integers(-6, 6)) for _ in range(g.free_rank)]
    coords += [data.draw(st.integers(0, t - 1)) for t in g.torsion]
    c = g.element(coords)
    k = data.draw(st.integers(-6, 6))
    ranges = [range(-6, 7)] * g.free_rank + [range(t) for t in g.torsion]
    brute = any(k * g.element(b) == c for b in product(*ranges))
    assert lattice.is_factor(k, c) == brute


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=3), st.integers(-9, 9))
def test_divisibility_scales(coords, k):
    g = FinAbGroup(len(coords))
    x = g.element(coords)
    assert lattice.divisibility(k * x) == abs(k) * lattice.divisibility(x)


# signature -----------------------------------------------------------

def test_signature_examples():
    assert lattice.signature(HYPERBOLIC) == 0
    assert lattice.signature(E8_POSITIVE) == 8
    assert lattice.signature(E8_NEGATIVE) == -8
    assert lattice.signature([]) == 0
    assert lattice.inertia([[0, 0], [0, 0]]) == lattice.Inertia(0, 0, 2)


@settings(max_examples=150, deadline=None)
@given(symmetric_matrices(max_n=7))
def test_inertia_matches_eigenvalues(a):
    i = lattice.inertia(a)
    assert i.b_plus + i.b_minus + i.nullity == len(a)
    if a:
        ev = np.linalg.eigvalsh(np.array(a, dtype=float))
        scale = max(1.0, float(np.abs(ev).max()))
        assert i.b_plus == int((ev > 1e-9 * scale).sum())
        assert i.b_minus == int((ev < -1e-9 * scale).sum())
    # nullity is exact through the rank over Q
    rank = sympy.Matrix(a).rank() if a else 0
    assert i.nullity == len(a) - rank


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_signature_congruence_invariant(data):
    p = data.draw(unimodular_matrices(max_n=5))
    n = len(p)
    a = data.draw(symmetric_matrices(min_n=n, max_n=n))
    b = lattice.matmul(lattice.matmul(lattice.transpose(p), a), p)
    assert lattice.inertia(b) == lattice.inertia(a)


# characteristic vectors -----------------------------------------------------------

def test_characteristic_examples():
    assert lattice.is_characteristic((0, 0), HYPERBOLIC)
    assert not lattice.is_characteristic((0,), [[1]])
    # the diagonal is the characteristic covector, not always a lattice vector
    a = [[3, 1], [1, -2]]
    assert not lattice.is_characteristic((3, -2), a)
    assert lattice.is_characteristic((0, 1), a)
    assert lattice.is_characteristic((1, -1), [[1, 0], [0, -1]])
    assert lattice.char_square_defect((1,), [[1]]) == 0
    assert lattice.char_square_defect((0, 0), HYPERBOLIC) == 0
    assert lattice.char_square_defect((3, 1), [[1, 0], [0, -1]]) == 8
    with pytest.raises(NotCharacteristic):
        lattice.char_square_defect((0,), [[1]])


def test_char_square_defect_needs_unimodular():
    # the law fails on [[2]]: 0 is characteristic, 0 - 1 = -1
    assert lattice.is_characteristic((0,), [[2]])
    with pytest.raises(NotUnimodular):
        lattice.char_square_defect((0,), [[2]])


@settings(max_examples=100, deadline=None)
@given(symmetric_matrices(max_n=5), st.data())
def test_characteristic_brute_force(a, data):
    n = len(a)
    c = [data.draw(st.integers(-3, 3)) for _ in range(n)]
    brute = all((lattice.dot(c, lattice.matvec(a, x)) - lattice.quad(a, x)) % 2 == 0
                for x in product((0, 1), repeat=n))
    assert lattice.is_characteristic(c, a) == brute


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_char_square_law_on_unimodular_forms(data):
    # random unimodular forms P^T D P with D diagonal +-1 or a sum of H and E8 blocks
    p = data.draw(unimodular_matrices(max_n=8))
    n = len(p)
    if data.draw(st.booleans()):
        d = [[data.draw(st.sampled_from([1, -1])) if i == j else 0 for j in range(n)] for i in range(n)]
    else:
        d = lattice.block_diag(*[HYPERBOLIC] * (n // 2) + [[[1]]] * (n % 2))
    a = lattice.matmul(lattice.matmul(lattice.transpose(p), d), p)
    inv = lattice.rational_inverse(a)
    diag = [a[i][i] for i in range(n)]
    base = [int(sum(inv[i][j] * diag[j] for j in range(n))) for i in range(n)]
    shift = [2 * data.draw(st.integers(-2, 2)) for _ in range(n)]
    c = [x + y for x, y in zip(base, shift)]
    assert lattice.is_characteristic(c, a)
    assert lattice.char_square_defect(c, a) % 8 == 0


# classification -----------------------------------------------------------

def test_classify_examples():
    assert lattice.classify_indefinite(FormDescriptor(1, 1, EVEN)) == [Summand("H")]
    out = lattice.classify_indefinite(FormDescriptor(10, 2, EVEN))
    assert lattice.describe_summands(out) == "E8 + 2H"
    out = lattice.classify_indefinite(FormDescriptor(2, 1, ODD))
    assert lattice.describe_summands(out) == "2<+1> + <-1>"
    with pytest.raises(DefiniteForm):
        lattice.classify_indefinite(FormDescriptor(3, 0, ODD))
    with pytest.raises(ParityViolation):
        lattice.classify_indefinite(FormDescriptor(3, 1, EVEN))


@given(st.integers(1, 30), st.integers(1, 30), st.sampled_from([EVEN, ODD]))
def test_classify_reconstructs(bp, bm, parity):
    f = FormDescriptor(bp, bm, parity)
    if parity == EVEN and (bp - bm) % 8:
        with pytest.raises(ParityViolation):
            lattice.classify_indefinite(f)
        return
    out = lattice.classify_indefinite(f)
    assert lattice.summands_descriptor(out) == f
    m = lattice.summands_matrix(out)
    assert FormDescriptor.of(m) == f


def test_perp_examples():
    assert lattice.perp_complement(FormDescriptor(10, 10, EVEN), FormDescriptor(1, 1, EVEN)) == \
        FormDescriptor(9, 9, EVEN)
    p = lattice.perp_complement(FormDescriptor(19, 3, ODD), FormDescriptor(3, 3, ODD))
    assert p == FormDescriptor(16, 0, EVEN) and p.signature == 16
    with pytest.raises(SignatureObstruction):
        lattice.perp_complement(FormDescriptor(2, 2, EVEN), FormDescriptor(2, 1, EVEN))
    with pytest.raises(RankObstruction):
        lattice.perp_complement(FormDescriptor(2, 2, EVEN), FormDescriptor(3, 1, EVEN))
    with pytest.raises(ParityViolation):
        lattice.perp_complement(FormDescriptor(9, 9, EVEN), FormDescriptor(1, 1, ODD))


@given(st.integers(0, 40), st.integers(0, 40), st.integers(0, 10), st.integers(0, 10))
def test_perp_rejects_bad_signature(bp, bm, sp, sm):
    target, sub = FormDescriptor(bp, bm, EVEN), FormDescriptor(sp, sm, EVEN)
    if sp > bp or sm > bm:
        with pytest.raises(RankObstruction):
            lattice.perp_complement(target, sub)
    elif (bp - bm - sp + sm) % 16:
        with pytest.raises(SignatureObstruction):
            lattice.perp_complement(target, sub)
    else:
        p = lattice.perp_complement(target, sub)
        assert p.signature % 16 == 0 and p.rank == target.rank - sub.rank


# linking form -----------------------------------------------------------

def test_linking_examples():
    lf = lattice.linking_form([[2]])
    g = lf.group.element([1])
    assert lf(g, g) == Fraction(1, 2)
    assert lattice.linking_form(E8_NEGATIVE).group.order == 1
    for p in (3, 5, 8):
        lf = lattice.linking_form([[p]])
        g = lf.group.element([1])
        assert lf(g, g) == Fraction(-1, p) % 1
    with pytest.raises(DegenerateMatrix):
        lattice.linking_form([[0]])


@settings(max_examples=80, deadline=None)
@given(symmetric_matrices(max_n=4, bound=5).filter(lambda a: 0 < abs(lattice.determinant(a)) <= 30))
def test_linking_form_symmetric_nondegenerate(a):
    lf = lattice.linking_form(a)
    elems = list(lf.group.torsion_elements())
    assert len(elems) == abs(lattice.determinant(a))
    for x in elems:
        for y in elems:
            assert lf(x, y) == lf(y, x)
            assert 0 <= lf(x, y) < 1
    for x in elems:
        if not x.is_zero():
            assert any(lf(x, y) != 0 for y in elems)


def test_integral_inputs_only():
    with pytest.raises(TypeError):
        lattice.as_matrix([[1.5]])
    with pytest.raises(ValueError):
        lattice.symmetric([[0, 1], [2, 0]])
