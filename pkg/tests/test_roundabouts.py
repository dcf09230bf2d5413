import random

import pytest

from precy.roundabout import (
    Arc, ArcSystem, Roundabout, canonical_cyclic_form, canonical_key,
    cutting_index_set_size, cyclic_sign_curved, cyclic_sign_noncurved,
    enumerate_bicoloured_partitions, enumerate_elementary_cuttings,
    enumerate_infinitesimal_bw_partitions, enumerate_oriented_partitions,
    faces_of_system, partition_to_graph, roundabout_to_sequence,
    sequence_to_roundabout, standard_roundabout, rotation_sign,
)


def test_sequence_of_paper_figure():
    # blocks (3,4,2) with outputs 1,2,3: clockwise boundary reads
    # out1, in3, in2, in1, out2, in7, in6, in5, in4, out3, in9, in8
    r = standard_roundabout((3, 4, 2))
    seq = roundabout_to_sequence(r)
    assert seq == (("out", 1), ("in", 3), ("in", 2), ("in", 1),
                   ("out", 2), ("in", 7), ("in", 6), ("in", 5), ("in", 4),
                   ("out", 3), ("in", 9), ("in", 8))


def test_sequence_roundtrip_random():
    rng = random.Random(23)
    for _ in range(1000):
        m = rng.randint(1, 4)
        lambdas = tuple(rng.randint(1, 3) for _ in range(m))
        outs = list(range(1, m + 1))
        rng.shuffle(outs)
        ins = list(range(1, sum(lambdas) + 1))
        rng.shuffle(ins)
        blocks, pos = [], 0
        for l in lambdas:
            blocks.append(tuple(ins[pos:pos + l]))
            pos += l
        r = Roundabout(lambdas, tuple(outs), tuple(blocks))
        r2 = sequence_to_roundabout(roundabout_to_sequence(r))
        # parsing starts at the first output in the sequence, which is block 1
        assert r2 == r


def test_corolla_roundtrip():
    r = standard_roundabout((3,))
    assert sequence_to_roundabout(roundabout_to_sequence(r)) == r


def test_canonical_cyclic_form_m1():
    r = standard_roundabout((4,))
    canon, sign = canonical_cyclic_form(r)
    assert canon == r and sign == 1


def test_cyclic_sign_one_rotation_11():
    # lambda = (1,1): exponent n*l1 + l_m = 2 + 1 = 3
    assert cyclic_sign_noncurved((1, 1)) == -1


def test_cyclic_signs_disagree_on_211():
    # (2,1,1): non-curved exponent 4*2+1 = 9 (odd), curved 2*(4-3-1)-4 = -4 (even)
    assert cyclic_sign_noncurved((2, 1, 1)) == -1
    assert cyclic_sign_curved((2, 1, 1)) == 1


def test_full_cycle_sign_is_identity():
    # composing the m rotation signs around a full cycle yields +1
    for flavor in ("hdpois", "pcy", "curved"):
        for lam in [(1, 1), (2, 1), (2, 1, 1), (1, 1, 1), (3, 2, 1, 1)]:
            if flavor == "hdpois" or True:
                assert rotation_sign(flavor, lam, len(lam)) == 1


def test_canonical_form_rotation_invariance():
    rng = random.Random(5)
    for _ in range(200):
        m = rng.randint(1, 4)
        lambdas = tuple(rng.randint(1, 3) for _ in range(m))
        r = standard_roundabout(lambdas)
        canon, _ = canonical_cyclic_form(r)
        for c in range(m):
            canon2, _ = canonical_cyclic_form(r.rotate(c))
            assert canon2 == canon


def test_cuttings_of_generators_empty():
    assert enumerate_elementary_cuttings(standard_roundabout((2,))) == []
    assert enumerate_elementary_cuttings(standard_roundabout((1, 1))) == []


def test_cuttings_of_nu3():
    cuts = enumerate_elementary_cuttings(standard_roundabout((3,)))
    # exactly the two splittings with both factors of arity >= 2
    assert len(cuts) == 2
    for cut in cuts:
        assert cut.bottom.lambdas == (2,) and cut.top.lambdas == (2,)
    assert sorted(c.graft_input for c in cuts) == [1, 2]


def test_cuttings_match_index_set_small():
    for lam in [(3,), (4,), (2, 1), (1, 1, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]:
        cuts = enumerate_elementary_cuttings(standard_roundabout(lam))
        assert len(cuts) == cutting_index_set_size("hdpois", lam)
        # duplicate-free
        seen = {(c.k, c.sigma_shift, c.p, c.q) for c in cuts}
        assert len(seen) == len(cuts)


def test_cutting_parts_reassemble_labels():
    r = standard_roundabout((2, 2))
    for cut in enumerate_elementary_cuttings(r):
        bot_ins = [x for x in cut.bottom.flat_inputs() if x != ("cut", 0)]
        top_ins = list(cut.top.flat_inputs())
        assert sorted(bot_ins + top_ins) == list(range(1, 5))
        outs = [x for x in list(cut.bottom.output_labels)
                + list(cut.top.output_labels) if x != ("cut", 0)]
        assert sorted(outs) == [1, 2]


def test_curved_cuttings_include_unary_and_curvature():
    r = standard_roundabout((2,), flavor="curved")
    cuts = enumerate_elementary_cuttings(r)
    # k=1, p=q=0 gives bottom (1,), i.e. a differential-type term
    assert any(c.bottom.lambdas == (1,) and c.top.lambdas == (2,) for c in cuts)
    # p+q = 2 gives top (0,), i.e. a curvature insertion
    assert any(c.top.lambdas == (0,) for c in cuts)


def test_pcy_cuttings_exclude_unary_and_curvature():
    r = standard_roundabout((2,), flavor="pcy")
    cuts = enumerate_elementary_cuttings(r)
    assert all(c.bottom.lambdas != (1,) and c.top.lambdas != (0,)
               and c.top.lambdas != (1,) for c in cuts)


def test_oriented_partition_trivial_listed():
    r = standard_roundabout((3,))
    parts = enumerate_oriented_partitions(r)
    assert any(len(p.system.arcs) == 0 for p in parts)
    r2 = standard_roundabout((1, 1))
    # (1,1) satisfies "two outgoing", so the empty partition is listed
    assert any(len(p.system.arcs) == 0
               for p in enumerate_oriented_partitions(r2))


def test_oriented_contains_all_cuttings():
    r = standard_roundabout((2, 1))
    cuts = enumerate_elementary_cuttings(r)
    oriented = enumerate_oriented_partitions(r)
    one_arc = [p for p in oriented if len(p.system.arcs) == 1]
    assert len(one_arc) == len(cuts)


def test_bicoloured_subset_of_oriented():
    for lam in [(3,), (2, 1), (1, 1, 1), (2, 2)]:
        r = standard_roundabout(lam)
        ori = {p.system.arcs for p in enumerate_oriented_partitions(r)}
        for b in enumerate_bicoloured_partitions(r):
            faces = faces_of_system(r, b.system)
            # every bicoloured part satisfies the oriented size constraints:
            # whites have >= 2 leaving arcs or an input (plus possibly more),
            # blacks >= 2 outputs or an incoming arc
            for f in faces:
                n_out, n_in = f.counts()
                assert n_out >= 1


def test_one_arc_bicoloured_parts_are_morphism_keys():
    # one-arc bicoloured partitions split all inputs above / all outputs
    # below; both parts are composable morphism component shapes
    from precy.roundabout import is_valid_morphism_key
    for lam in [(3,), (4,), (2, 1), (2, 2)]:
        r = standard_roundabout(lam)
        for b in enumerate_bicoloured_partitions(r):
            if len(b.system.arcs) != 1:
                continue
            for f in faces_of_system(r, b.system):
                ra = f.to_roundabout("curved")
                assert is_valid_morphism_key("hdpois", ra.lambdas)


def test_inf_black_whites_may_carry_outputs():
    # the broad definition: white parts of an infinitesimal black partition
    # can hold outgoing edges (outputs bypassing the black part)
    r = standard_roundabout((1, 1, 1))
    found = False
    for p in enumerate_infinitesimal_bw_partitions(r, "black"):
        faces = faces_of_system(r, p.system)
        for i, f in enumerate(faces):
            if i == p.special_face:
                continue
            if any(kind == "out" and not (isinstance(lbl, tuple) and lbl
                                          and lbl[0] == "arc")
                   for kind, lbl in f.seq):
                found = True
    assert found


def test_inf_partitions_are_stars():
    # every arc borders the special part
    for lam in [(3,), (2, 1), (2, 2)]:
        r = standard_roundabout(lam)
        for kind in ("black", "white"):
            for p in enumerate_infinitesimal_bw_partitions(r, kind):
                faces = faces_of_system(r, p.system)
                special = faces[p.special_face]
                n_arcs_on_special = sum(
                    1 for kindx, lbl in special.seq
                    if isinstance(lbl, tuple) and lbl and lbl[0] == "arc")
                assert n_arcs_on_special == len(p.system.arcs)


def test_partition_graph_is_tree():
    r = standard_roundabout((2, 2))
    for p in enumerate_oriented_partitions(r):
        g = partition_to_graph(r, p.system)
        assert g.is_tree()
        assert len(g.edges) == len(g.vertices) - 1


def test_partition_graph_vertex_count():
    r = standard_roundabout((3,))
    for p in enumerate_oriented_partitions(r):
        g = partition_to_graph(r, p.system)
        assert len(g.vertices) == len(p.system.arcs) + 1
