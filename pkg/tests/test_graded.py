import random
from fractions import Fraction

import pytest

from precy.graded import (
    GradedSpace, Operation, block_cyclic_permutation, compose_partial,
    compose_simple, hom_differential, identity_operation, koszul_sign,
    op_homog, perm_compose, permute_inputs, permute_outputs, permute_tuple,
    random_operation, space, suspension_map, desuspension_map,
    tensor_differential,
)


def test_koszul_sign_identity():
    assert koszul_sign((0, 1, 2), (1, 1, 1)) == 1


def test_koszul_sign_transposition_odd():
    assert koszul_sign((1, 0), (1, 1)) == -1


def test_koszul_sign_transposition_even():
    assert koszul_sign((1, 0), (2, 1)) == 1
    assert koszul_sign((1, 0), (0, 0)) == 1


def test_koszul_sign_cycle():
    # cycle moving (x1,x2,x3) |-> (x3,x1,x2), degrees (1,1,0):
    # decompose as two adjacent transpositions; only the odd-odd swap counts.
    sigma = (1, 2, 0)
    assert koszul_sign(sigma, (1, 1, 0)) == 1


def test_koszul_cocycle_random():
    rng = random.Random(7)
    for _ in range(200):
        k = rng.randint(1, 6)
        sigma = list(range(k))
        tau = list(range(k))
        rng.shuffle(sigma)
        rng.shuffle(tau)
        sigma, tau = tuple(sigma), tuple(tau)
        degs = tuple(rng.randint(-2, 2) for _ in range(k))
        lhs = koszul_sign(perm_compose(sigma, tau), degs)
        rhs = koszul_sign(tau, degs) * koszul_sign(sigma, permute_tuple(tau, degs))
        assert lhs == rhs


def test_block_cyclic_permutation_singletons():
    assert block_cyclic_permutation((1, 1)) == (1, 0)


def test_block_cyclic_permutation_single_block():
    n = 5
    assert block_cyclic_permutation((n,)) == tuple(range(n))


def test_block_cyclic_permutation_two_one():
    # blocks {1,2} and {3}: word (x1,x2,x3) -> (x3,x1,x2),
    # so position 0 -> 1, 1 -> 2, 2 -> 0.
    assert block_cyclic_permutation((2, 1)) == (1, 2, 0)


def test_permute_tuple():
    assert permute_tuple((2, 0, 1), ("a", "b", "c")) == ("b", "c", "a")


V = space(("x", 0), ("y", 1), ("z", -1))


def test_identity_unit_of_composition():
    rng = random.Random(1)
    f = random_operation(rng, V, V, 3, 2, 1, fill=6)
    idv = identity_operation(V)
    assert compose_partial(f, idv, 1, 1) == f
    assert compose_partial(f, idv, 2, 1) == f
    assert compose_partial(idv, f, 1, 1) == f


def test_compose_even_is_plain():
    W = space(("a", 0), ("b", 0))
    f = op_homog(W, W, 2, 1, 0)
    f.add_entry((0, 1), (1,), 1)
    g = op_homog(W, W, 2, 1, 0)
    g.add_entry((0, 0), (0,), 2)
    h = compose_partial(f, g, 1, 1)
    # h(a,a,b) = f(g(a,a), b) = 2 f(a,b) = 2b
    assert h.entries == {((0, 0, 1), (1,)): Fraction(2)}


def test_compose_koszul_sign_left_argument():
    # odd-degree g sliding past an odd argument on its left flips the sign
    g = op_homog(V, V, 1, 1, 1)
    g.add_entry((0,), (1,), 1)          # g(x) = y, degree +1
    f = op_homog(V, V, 2, 1, -2)
    f.add_entry((1, 1), (0,), 1)        # f(y,y) = x, degree -2
    h = compose_partial(f, g, 2, 1)     # h = f(-, g(-)) with g in slot 2
    # h(y, x) = (-1)^{|g||y|} f(y, g x) = -x
    assert h.entries == {((1, 0), (0,)): Fraction(-1)}


def _positions_after_graft(n_f, n_g, i):
    """Input slots of f o_i g: returns the composite position of f-slot t."""
    def pos(t):
        if t < i:
            return t
        if t == i:
            raise ValueError
        return t + n_g - 1
    return pos


def test_parallel_axiom_random():
    # (f o_i g) then h in a former f-slot j>i equals +-(f o_j h) then g,
    # with the Koszul sign (-1)^{|g||h|}.
    rng = random.Random(5)
    for _ in range(40):
        nf = rng.randint(2, 3)
        f = random_operation(rng, V, V, nf, 2, rng.randint(-1, 1), fill=5)
        g = random_operation(rng, V, V, 2, 1, rng.randint(-1, 1), fill=4)
        h = random_operation(rng, V, V, 1, 1, rng.randint(-1, 1), fill=4)
        i, j = 1, nf  # first and last inputs of f
        if i == j:
            continue
        left = compose_partial(compose_partial(f, g, i, 1),
                               h, j + g.n_inputs - 1, 1)
        right = compose_partial(compose_partial(f, h, j, 1), g, i, 1)
        sign = -1 if (g.degree * h.degree) % 2 else 1
        assert left == right.scale(sign)


def test_sequential_axiom_random():
    # f o_i (g o_k h) = (f o_i g) o_{i+k-1} h
    rng = random.Random(9)
    for _ in range(40):
        f = random_operation(rng, V, V, 2, 2, rng.randint(-1, 1), fill=5)
        g = random_operation(rng, V, V, 3, 1, rng.randint(-1, 1), fill=5)
        h = random_operation(rng, V, V, 1, 1, rng.randint(-1, 1), fill=4)
        i, k = 2, 2
        lhs = compose_partial(f, compose_partial(g, h, k, 1), i, 1)
        rhs = compose_partial(compose_partial(f, g, i, 1), h, i + k - 1, 1)
        assert lhs == rhs


def test_output_interleaving_shape():
    rng = random.Random(3)
    f = random_operation(rng, V, V, 2, 2, 0, fill=4)
    g = random_operation(rng, V, V, 2, 3, 0, fill=4)
    h = compose_partial(f, g, 1, 2)
    assert h.n_inputs == 3 and h.m_outputs == 4


def test_permute_operation_identity_and_involution():
    rng = random.Random(11)
    f = random_operation(rng, V, V, 3, 2, 0, fill=6)
    assert permute_inputs(f, (0, 1, 2)) == f
    swapped = permute_inputs(f, (1, 0, 2))
    assert permute_inputs(swapped, (1, 0, 2)) == f


def test_permute_outputs_odd_pair_flips():
    f = op_homog(V, V, 1, 2, 2)
    f.add_entry((0,), (1, 1), 1)        # lands in y (x) y, odd (x) odd
    g = permute_outputs(f, (1, 0))
    assert g.entries == {((0,), (1, 1)): Fraction(-1)}


def test_permute_action_composition():
    rng = random.Random(13)
    for _ in range(30):
        f = random_operation(rng, V, V, 3, 1, 0, fill=5)
        s1 = list(range(3)); rng.shuffle(s1)
        s2 = list(range(3)); rng.shuffle(s2)
        one = permute_inputs(permute_inputs(f, tuple(s1)), tuple(s2))
        both = permute_inputs(f, perm_compose(tuple(s2), tuple(s1)))
        assert one == both


def test_tensor_differential_squares_to_zero():
    W = space(("u", 0), ("v", 1))
    d = op_homog(W, W, 1, 1, -1)
    d.add_entry((1,), (0,), 1)  # d(v) = u
    dd = compose_simple(tensor_differential(d, 3), tensor_differential(d, 3))
    assert dd.is_zero()


def test_hom_differential_squares_to_zero():
    W = space(("u", 0), ("v", 1))
    d = op_homog(W, W, 1, 1, -1)
    d.add_entry((1,), (0,), 1)
    rng = random.Random(17)
    for _ in range(10):
        f = random_operation(rng, W, W, 2, 2, rng.randint(-1, 1), fill=4)
        ddf = hom_differential(hom_differential(f, d, d), d, d)
        assert ddf.is_zero()


def test_suspension_roundtrip():
    s = suspension_map(V)
    s_inv = desuspension_map(V)
    assert compose_simple(s_inv, s) == identity_operation(V)
    # s s^{-1} = id on sA as well
    sa = V.suspend()
    assert compose_simple(s, s_inv) == identity_operation(sa)
