import random
from fractions import Fraction
from itertools import combinations, permutations, product

import pytest

from hairygraphs.linalg import SparseMatrix, kernel_basis
from hairygraphs.symplectic import (
    StableRangeError,
    SymplecticSpace,
    TensorVector,
    contract,
    harmonic_subspace,
    insert_omega,
    project_pi,
    word_vector,
    words_of_weight,
    all_weights,
    padded_weight,
)


def rand_tensor(space, d, rng, terms=5):
    coeffs = {}
    for _ in range(terms):
        w = tuple(rng.randrange(space.dim) for _ in range(d))
        coeffs[w] = coeffs.get(w, 0) + rng.randint(-3, 3)
    return TensorVector(space, d, coeffs)


def test_omega_table():
    sp = SymplecticSpace(2)
    assert sp.omega(sp.a(1), sp.b(1)) == 1
    assert sp.omega(sp.b(1), sp.a(1)) == -1
    assert sp.omega(sp.a(1), sp.a(1)) == 0
    assert sp.omega(sp.a(1), sp.b(2)) == 0
    assert sp.pairing_matrix_rank() == 4


def test_contract_ab_gives_scalar_one():
    sp = SymplecticSpace(1)
    v = word_vector(sp, (sp.a(1), sp.b(1)))
    got = contract(v, 1, 2)
    assert got.coeffs == {(): Fraction(1)}


def test_contract_aa_gives_zero():
    sp = SymplecticSpace(1)
    v = word_vector(sp, (sp.a(1), sp.a(1)))
    assert contract(v, 1, 2).is_zero()


def test_contract_skips_middle_position():
    # g=2: a1 (x) a2 (x) b1, contracting positions (1,3) leaves a2
    sp = SymplecticSpace(2)
    v = word_vector(sp, (sp.a(1), sp.a(2), sp.b(1)))
    got = contract(v, 1, 3)
    assert got.coeffs == {(sp.a(2),): Fraction(1)}


def test_contract_position_errors():
    sp = SymplecticSpace(1)
    v = word_vector(sp, (0, 1))
    with pytest.raises(ValueError):
        contract(v, 2, 1)
    with pytest.raises(ValueError):
        contract(v, 1, 3)


def test_insert_omega_on_empty_word():
    sp = SymplecticSpace(1)
    empty = TensorVector(sp, 0, {(): 1})
    got = insert_omega(empty, 1, 2)
    assert got.coeffs == {(sp.a(1), sp.b(1)): Fraction(1),
                          (sp.b(1), sp.a(1)): Fraction(-1)}


def test_insert_omega_after_letter():
    sp = SymplecticSpace(2)
    v = word_vector(sp, (sp.a(1),))
    got = insert_omega(v, 2, 3)
    expected = {}
    for k in (1, 2):
        expected[(sp.a(1), sp.a(k), sp.b(k))] = Fraction(1)
        expected[(sp.a(1), sp.b(k), sp.a(k))] = Fraction(-1)
    assert got.coeffs == expected


@pytest.mark.parametrize("g,d", [(1, 0), (1, 2), (2, 1), (2, 3), (3, 2)])
def test_contract_insert_is_2g_identity(g, d):
    sp = SymplecticSpace(g)
    rng = random.Random(g * 10 + d)
    v = rand_tensor(sp, d, rng)
    for i, j in [(1, 2), (1, d + 2), (d + 1, d + 2)]:
        got = contract(insert_omega(v, i, j), i, j)
        assert got == 2 * g * v


def test_harmonic_d1_full_space():
    for g in (1, 2):
        sp = SymplecticSpace(g)
        assert harmonic_subspace(sp, 1).dim == 2 * g


def test_harmonic_d2_dimension_formula():
    # dim V^<2> = 4g^2 - 1
    for g in (1, 2, 3):
        sp = SymplecticSpace(g)
        assert harmonic_subspace(sp, 2).dim == 4 * g * g - 1


def brute_force_harmonic_dim(g, d):
    """Oracle: stack every contraction matrix over the whole word space."""
    sp = SymplecticSpace(g)
    words = list(product(range(2 * g), repeat=d))
    index = {w: i for i, w in enumerate(words)}
    rows = {}
    for w in words:
        for i, j in combinations(range(d), 2):
            o = sp.omega(w[i], w[j])
            if o:
                key = (i, j, w[:i] + w[i + 1:j] + w[j + 1:])
                rows.setdefault(key, {})[index[w]] = o
    mat = SparseMatrix.from_rows(len(words), list(rows.values()))
    return kernel_basis(mat).dim


def test_harmonic_d3_g2_matches_brute_force():
    sp = SymplecticSpace(2)
    assert harmonic_subspace(sp, 3).dim == brute_force_harmonic_dim(2, 3)


def test_harmonic_vectors_are_killed_by_all_contractions():
    sp = SymplecticSpace(2)
    hb = harmonic_subspace(sp, 3)
    for vec in hb.vectors():
        for i, j in combinations(range(1, 4), 2):
            assert contract(vec, i, j).is_zero()


def test_project_pi_g1_d2_worked_example():
    # pi(a1 (x) b1) = (a1 b1 + b1 a1) / 2, solved by hand from
    # a1 b1 = h + lambda * (a1 b1 - b1 a1) with c12(h) = 0.
    sp = SymplecticSpace(1)
    v = word_vector(sp, (sp.a(1), sp.b(1)))
    got = project_pi(v)
    assert got.coeffs == {(sp.a(1), sp.b(1)): Fraction(1, 2),
                          (sp.b(1), sp.a(1)): Fraction(1, 2)}


def test_project_pi_fixes_harmonics():
    sp = SymplecticSpace(2)
    for vec in harmonic_subspace(sp, 2).vectors():
        assert project_pi(vec) == vec


def test_project_pi_kills_insertions():
    sp = SymplecticSpace(2)
    rng = random.Random(1)
    u = rand_tensor(sp, 1, rng)
    for i, j in [(1, 2), (1, 3), (2, 3)]:
        assert project_pi(insert_omega(u, i, j)).is_zero()


@pytest.mark.parametrize("g,d", [(1, 2), (2, 2), (2, 3), (3, 3), (2, 4), (3, 4)])
def test_project_pi_idempotent_and_annihilated(g, d):
    sp = SymplecticSpace(g)
    rng = random.Random(100 * g + d)
    v = rand_tensor(sp, d, rng)
    p = project_pi(v)
    assert project_pi(p) == p
    for i, j in combinations(range(1, d + 1), 2):
        assert contract(p, i, j).is_zero()


@pytest.mark.parametrize("g,d", [(2, 2), (2, 3), (3, 3), (2, 4), (3, 4)])
def test_project_pi_equivariant_under_position_permutations(g, d):
    sp = SymplecticSpace(g)
    rng = random.Random(17 * g + d)
    perms = list(permutations(range(d)))
    for _ in range(5):
        v = rand_tensor(sp, d, rng)
        perm = rng.choice(perms)
        assert project_pi(v.permute_positions(perm)) == \
            project_pi(v).permute_positions(perm)


def test_project_pi_image_is_harmonic_subspace():
    # dimension and containment: span of pi over all basis words equals V^<d>
    from hairygraphs.linalg import RowBasis

    g, d = 2, 3
    sp = SymplecticSpace(g)
    hb = harmonic_subspace(sp, d)
    rb = RowBasis()
    words = list(product(range(2 * g), repeat=d))
    index = {w: i for i, w in enumerate(words)}
    for w in words:
        p = project_pi(word_vector(sp, w))
        row = {index[u]: c for u, c in p.coeffs.items()}
        rb.add(row)
    assert rb.rank == hb.dim


def test_decomposition_directness_verified_even_below_stable_range():
    # the runtime directness check passes even at g=1, d=4 (2g < d); the
    # harmonic/insertion decomposition of symplectic tensors is direct there
    sp = SymplecticSpace(1)
    v = word_vector(sp, (0, 1, 0, 1))
    p = project_pi(v)
    assert project_pi(p) == p


def test_stable_range_error_reports_g_d():
    err = StableRangeError(3, 5, "probe")
    assert err.g == 3 and err.d == 5
    assert "g=3" in str(err) and "d=5" in str(err)


def test_words_of_weight_and_blocks():
    sp = SymplecticSpace(2)
    for d in (2, 3):
        seen = set()
        for wt in all_weights(2, d):
            ws = words_of_weight(sp, d, wt)
            for w in ws:
                assert padded_weight(w, 2) == wt
            seen.update(ws)
        assert len(seen) == (2 * 2) ** d


def test_tensor_json_roundtrip():
    sp = SymplecticSpace(2)
    v = TensorVector(sp, 2, {(sp.a(1), sp.b(2)): Fraction(3, 7),
                             (sp.b(1), sp.a(1)): -2})
    w = TensorVector.from_json(v.to_json())
    assert w == v
    assert '"a1"' in v.to_json() and '"b2"' in v.to_json()
    assert "3/7" in v.to_json()
