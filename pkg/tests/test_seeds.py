import random

import pytest
from hypothesis import given, settings, strategies as st

from clustermut import (
    BadDirection,
    ContextMismatch,
    ExchangeMatrix,
    LaurentPolynomial,
    NondegenerateRequired,
    NotSkewSymmetrizable,
    Seed,
    SubtractionFreeSemifield,
    TropicalElement,
    TropicalSemifield,
    coefficient_free_seed,
    coefficients_from_extended,
    compute_toric_weights,
    compute_yhat,
    matrix_mutate,
    mutate_coefficients,
    parse_poly,
    principal_extension,
    principal_seed,
    random_skew_symmetrizable,
    seed_mutate_general,
    seed_mutate_geometric,
    validate_and_symmetrize,
    y_pattern_tuple,
)
from clustermut.verify import check_pipeline_agreement


# -- symmetrizer ---------------------------------------------------------------


def test_symmetrizer_already_skew(a2):
    sym = validate_and_symmetrize(a2)
    assert sym.d == (1, 1)
    assert sym.rho == 1


def test_symmetrizer_b2(b2):
    sym = validate_and_symmetrize(b2)
    assert sym.d == (2, 1)
    assert sym.rho == 1


def test_symmetrizer_two_blocks():
    m = ExchangeMatrix.from_rows(
        [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]]
    )
    sym = validate_and_symmetrize(m)
    assert sym.rho == 2
    assert sym.blocks == ((0, 1), (2, 3))


def test_symmetrizer_rejects_bad_signs():
    with pytest.raises(NotSkewSymmetrizable):
        validate_and_symmetrize(ExchangeMatrix.from_rows([[0, 1], [1, 0]]))
    with pytest.raises(NotSkewSymmetrizable):
        validate_and_symmetrize(ExchangeMatrix.from_rows([[0, 1], [0, 0]]))


def test_symmetrizer_rejects_inconsistent_cycle():
    # a 3-cycle whose ratios multiply to something != 1
    m = ExchangeMatrix.from_rows([[0, 1, -2], [-1, 0, 1], [1, -1, 0]])
    with pytest.raises(NotSkewSymmetrizable):
        validate_and_symmetrize(m)


# -- matrix mutation ---------------------------------------------------------------


def test_matrix_mutation_rank2_sign_flip(a2):
    assert matrix_mutate(a2, 1).rows == ((0, -1), (1, 0))


def test_matrix_mutation_a3_example(a3):
    assert matrix_mutate(a3, 2).rows == ((0, -1, 1), (1, 0, -1), (-1, 1, 0))


def test_matrix_mutation_bad_direction(a2):
    with pytest.raises(BadDirection):
        matrix_mutate(a2, 0)
    with pytest.raises(BadDirection):
        matrix_mutate(a2, 3)


def test_matrix_mutation_extended_columns(a2):
    ext = principal_extension(a2)
    mut = matrix_mutate(ext, 1)
    # row 2 keeps its stable part: (|b_21| b_13 + b_21 |b_13|) / 2 = 0
    assert mut.rows == ((0, -1, -1, 0), (1, 0, 0, 1))
    assert matrix_mutate(mut, 1) == ext


@given(st.data())
@settings(max_examples=40)
def test_matrix_mutation_involution(data):
    rng = random.Random(data.draw(st.integers(0, 10 ** 6)))
    n = rng.randint(2, 4)
    m = random_skew_symmetrizable(rng, n, rng.randint(0, 2))
    k = rng.randint(1, n)
    assert matrix_mutate(matrix_mutate(m, k), k) == m


@given(st.data())
@settings(max_examples=40)
def test_mutation_preserves_symmetrizer_and_blocks(data):
    rng = random.Random(data.draw(st.integers(0, 10 ** 6)))
    n = rng.randint(2, 4)
    m = random_skew_symmetrizable(rng, n, 0)
    before = validate_and_symmetrize(m)
    k = rng.randint(1, n)
    after = validate_and_symmetrize(matrix_mutate(m, k))
    assert before.d == after.d
    assert before.blocks == after.blocks


# -- seed mutation, general mode -------------------------------------------------


def test_a2_trivial_exchange(a2):
    seed = coefficient_free_seed(a2)
    mutated = seed_mutate_general(seed, 1)
    assert mutated.cluster[0] == parse_poly(seed.vars, "x1^-1*x2 + x1^-1")
    assert mutated.cluster[1] == seed.cluster[1]


def test_coefficient_mutation_inverts_at_k():
    sf = TropicalSemifield(2)
    b = ExchangeMatrix.from_rows([[0, 1], [-1, 0]])
    coeffs = (TropicalElement((1, 2)), TropicalElement((0, -1)))
    mutated = mutate_coefficients(coeffs, b, 1, sf)
    assert mutated[0] == coeffs[0].inv()


def test_double_mutation_is_identity(a2):
    sf = TropicalSemifield(2)
    coeffs = (TropicalElement((1, -1)), TropicalElement((2, 0)))
    seed = Seed.initial_general(a2, sf, coeffs)
    back = seed.mutate(1).mutate(1)
    assert back.cluster == seed.cluster
    assert back.coeffs == seed.coeffs
    assert back.matrix == seed.matrix


def test_general_mode_rejects_sf_cluster_mutation(a2):
    seed = Seed.initial_general(a2, SubtractionFreeSemifield(2))
    with pytest.raises(ContextMismatch):
        seed.mutate(1)


# -- seed mutation, geometric mode ---------------------------------------------------


def test_geometric_m0_matches_trivial(a2):
    geo = Seed.initial_geometric(a2)
    cf = coefficient_free_seed(a2)
    for path in [(1,), (2,), (1, 2), (2, 1, 2)]:
        assert geo.mutate_path(path).cluster == cf.mutate_path(path).cluster


def test_principal_a2_exchange(a2):
    seed = principal_seed(a2)
    mutated = seed_mutate_geometric(seed, 1)
    assert mutated.cluster[0] == parse_poly(seed.vars, "x1^-1*x2*x3 + x1^-1")


def test_mode_guards(a2):
    with pytest.raises(ContextMismatch):
        seed_mutate_general(principal_seed(a2), 1)
    with pytest.raises(ContextMismatch):
        seed_mutate_geometric(coefficient_free_seed(a2), 1)


@given(st.data())
@settings(max_examples=30, deadline=None)
def test_pipelines_agree_on_random_geometric_seeds(data):
    rng = random.Random(data.draw(st.integers(0, 10 ** 6)))
    n = rng.randint(2, 4)
    m = rng.randint(0, 3)
    matrix = random_skew_symmetrizable(rng, n, m)
    path = tuple(rng.randint(1, n) for _ in range(rng.randint(0, 2)))
    k = rng.randint(1, n)
    assert check_pipeline_agreement(matrix, path, k).verdict == "confirmed"


# -- principal extension / coefficients ------------------------------------------------


def test_principal_extension_shape(a2):
    ext = principal_extension(a2)
    assert ext.rows == ((0, 1, 1, 0), (-1, 0, 0, 1))
    assert ext.principal() == a2


def test_principal_initial_coefficients_are_generators(a3):
    ys = coefficients_from_extended(principal_extension(a3))
    assert ys == (TropicalElement((1, 0, 0)), TropicalElement((0, 1, 0)), TropicalElement((0, 0, 1)))


def test_zero_stable_block_gives_unit_coefficients(a2):
    ext = ExchangeMatrix.from_rows([[0, 1, 0, 0], [-1, 0, 0, 0]], 2)
    assert coefficients_from_extended(ext) == (TropicalElement((0, 0)), TropicalElement((0, 0)))


def test_stable_columns_read_off():
    ext = ExchangeMatrix.from_rows([[0, 1, 2, -1], [-1, 0, 0, 3]], 2)
    assert coefficients_from_extended(ext)[0] == TropicalElement((2, -1))


# -- y-hat ------------------------------------------------------------------------


def test_yhat_trivial_a2(a2):
    seed = coefficient_free_seed(a2)
    y1, y2 = compute_yhat(seed)
    assert y1.as_polynomial() == parse_poly(seed.vars, "x2")
    assert y2.as_polynomial() == parse_poly(seed.vars, "x1^-1")


def test_yhat_principal_includes_stable_factor(a2):
    seed = principal_seed(a2)
    y1, y2 = compute_yhat(seed)
    assert y1.as_polynomial() == parse_poly(seed.vars, "x2*x3")
    assert y2.as_polynomial() == parse_poly(seed.vars, "x1^-1*x4")


def test_y_pattern_identity_for_empty_path(a2):
    pats = y_pattern_tuple(a2, ())
    sf = SubtractionFreeSemifield(2)
    assert pats == sf.identity_tuple()


# -- toric weights --------------------------------------------------------------------


def test_toric_weights_a2(a2):
    w = compute_toric_weights(a2)
    assert w == ((0, 1, -1, 0), (-1, 0, 0, -1))


def test_toric_weights_require_nondegenerate(a3):
    with pytest.raises(NondegenerateRequired):
        compute_toric_weights(a3)


@given(st.data())
@settings(max_examples=30)
def test_toric_weights_kernel_condition(data):
    from clustermut import random_nondegenerate

    rng = random.Random(data.draw(st.integers(0, 10 ** 6)))
    n = rng.choice([2, 4])
    b = random_nondegenerate(rng, n)
    ext = principal_extension(b)
    for w in compute_toric_weights(b):
        for i in range(n):
            assert sum(ext.rows[i][t] * w[t] for t in range(2 * n)) == 0


# -- Laurent property along longer paths ------------------------------------------------


@pytest.mark.parametrize("rows", [
    [[0, 1], [-1, 0]],
    [[0, 1], [-2, 0]],
    [[0, 1], [-3, 0]],
    [[0, 1, 0], [-1, 0, 1], [0, -1, 0]],
])
def test_laurent_property_along_random_paths(rows, rng):
    matrix = ExchangeMatrix.from_rows(rows)
    n = matrix.n
    for variant in (coefficient_free_seed(matrix), principal_seed(matrix)):
        for _ in range(6):
            path = tuple(rng.randint(1, n) for _ in range(8))
            seed = variant.mutate_path(path)  # NotDivisible would raise
            assert all(isinstance(p, LaurentPolynomial) for p in seed.cluster)
