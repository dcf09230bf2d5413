"""Roundabouts: the basis objects of the codioperads, and the four kinds of
partitions realizing their decomposition maps.

A roundabout is a disc with m outgoing and n ingoing labelled edges; it is
stored in stairway coordinates: an ordered tuple of block sizes
``lambdas = (l_1..l_m)``, output labels per cyclic position, and input labels
per block in stairway (left-to-right) order.  The clockwise boundary sequence
of the disc reads ``out_1, reversed(block_1), out_2, reversed(block_2), ...``
(inputs of a block are labelled anti-clockwise).

Flavors restrict the admissible block shapes:

* ``hdpois`` — all blocks >= 1 and (m, n) != (1, 1);
* ``pcy``    — blocks >= 0, with n >= 2 when m = 1 (no curvature, no unary key);
* ``curved`` — blocks >= 0 unrestricted (keys include () and (1,)).

Arc systems on the boundary circle are stored as nested interval structures:
an arc is a chord between two gaps together with the direction of its edge.
Non-crossing families form a forest by containment, their faces are again
roundabouts, and contracting the arcs yields a tree of parts (genus 0 for
free).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

FLAVORS = ("hdpois", "pcy", "curved")


def is_valid_structure_key(flavor: str, lambdas) -> bool:
    """May a structure operation be indexed by this ordered partition?"""
    m = len(lambdas)
    n = sum(lambdas)
    if m == 0:
        return False
    if flavor == "hdpois":
        return all(l >= 1 for l in lambdas) and (m, n) != (1, 1)
    if flavor == "pcy":
        if any(l < 0 for l in lambdas):
            return False
        return m >= 2 or n >= 2
    if flavor == "curved":
        return all(l >= 0 for l in lambdas)
    raise ValueError(flavor)


def is_valid_morphism_key(flavor: str, lambdas) -> bool:
    """Keys of infinity-morphism components (n >= 1; unary key allowed)."""
    m = len(lambdas)
    n = sum(lambdas)
    if m == 0 or n < 1:
        return False
    if flavor == "hdpois":
        return all(l >= 1 for l in lambdas)
    if flavor in ("pcy", "curved"):
        if any(l < 0 for l in lambdas):
            return False
        return m >= 2 or lambdas[0] >= 1
    raise ValueError(flavor)


def canonical_key(lambdas) -> tuple:
    """Lexicographically smallest cyclic rotation of the partition."""
    lambdas = tuple(lambdas)
    m = len(lambdas)
    if m == 0:
        return ()
    return min(lambdas[c:] + lambdas[:c] for c in range(m))


def key_rotations_to_canonical(lambdas) -> int:
    """Least c >= 0 with rot^c(lambdas) canonical (blocks shifted down)."""
    lambdas = tuple(lambdas)
    m = len(lambdas)
    best = canonical_key(lambdas)
    for c in range(m):
        if lambdas[c:] + lambdas[:c] == best:
            return c
    raise AssertionError


# ---------------------------------------------------------------------------
# cyclic rotation signs


def cyclic_sign_noncurved(lambdas) -> int:
    """Sign relating a key to its one-step rotation in the non-curved
    convention: exponent n*l_1 + l_m."""
    n = sum(lambdas)
    exp = n * lambdas[0] + lambdas[-1]
    return -1 if exp % 2 else 1


def cyclic_sign_curved(lambdas) -> int:
    """Same relation in the curved convention: exponent l_1(n-m-1) - n."""
    n = sum(lambdas)
    m = len(lambdas)
    exp = lambdas[0] * (n - m - 1) - n
    return -1 if exp % 2 else 1


def cyclic_sign(flavor: str, lambdas) -> int:
    if len(lambdas) <= 1:
        return 1
    if flavor == "hdpois":
        return cyclic_sign_noncurved(lambdas)
    return cyclic_sign_curved(lambdas)


def rotation_sign(flavor: str, lambdas, steps: int) -> int:
    """Accumulated sign for rotating a key by ``steps`` places."""
    lam = tuple(lambdas)
    sign = 1
    for _ in range(steps % max(len(lam), 1)):
        sign *= cyclic_sign(flavor, lam)
        lam = lam[1:] + lam[:1]
    return sign


# ---------------------------------------------------------------------------
# roundabouts


@dataclass(frozen=True)
class Roundabout:
    """Stairway-coordinate presentation of a roundabout."""

    lambdas: tuple
    output_labels: tuple
    input_labels: tuple  # tuple of tuples, block l in stairway order
    flavor: str = "hdpois"

    def __post_init__(self):
        assert self.flavor in FLAVORS
        m = len(self.lambdas)
        assert len(self.output_labels) == m
        assert len(self.input_labels) == m
        for l, blk in zip(self.lambdas, self.input_labels):
            assert len(blk) == l

    @property
    def m(self) -> int:
        return len(self.lambdas)

    @property
    def n(self) -> int:
        return sum(self.lambdas)

    def flat_inputs(self) -> tuple:
        out = []
        for blk in self.input_labels:
            out.extend(blk)
        return tuple(out)

    def rotate(self, steps: int = 1) -> "Roundabout":
        m = self.m
        c = steps % m if m else 0
        return Roundabout(self.lambdas[c:] + self.lambdas[:c],
                          self.output_labels[c:] + self.output_labels[:c],
                          self.input_labels[c:] + self.input_labels[:c],
                          self.flavor)

    def sort_token(self):
        return (self.lambdas,
                tuple(_label_key(x) for x in self.output_labels),
                tuple(tuple(_label_key(x) for x in blk)
                      for blk in self.input_labels))


def _label_key(x):
    if isinstance(x, int):
        return (0, x)
    return (1, tuple(str(t) for t in (x if isinstance(x, tuple) else (x,))))


def standard_roundabout(lambdas, flavor="hdpois") -> Roundabout:
    """The canonical basis roundabout of a key: outputs 1..m, inputs 1..n."""
    lambdas = tuple(lambdas)
    assert is_valid_structure_key(flavor, lambdas) or \
        is_valid_morphism_key(flavor, lambdas), \
        f"invalid key {lambdas} for {flavor}"
    blocks = []
    nxt = 1
    for l in lambdas:
        blocks.append(tuple(range(nxt, nxt + l)))
        nxt += l
    return Roundabout(lambdas, tuple(range(1, len(lambdas) + 1)),
                      tuple(blocks), flavor)


def canonical_cyclic_form(r: Roundabout):
    """Lexicographically smallest rotation together with the accumulated
    rotation sign (flavor convention): r = sign * (conjugated canonical)."""
    best_c = 0
    best = r.sort_token()
    for c in range(1, r.m):
        tok = r.rotate(c).sort_token()
        if tok < best:
            best, best_c = tok, c
    return r.rotate(best_c), rotation_sign(r.flavor, r.lambdas, best_c)


# ---------------------------------------------------------------------------
# the roundabout <-> clockwise boundary sequence bijection


def roundabout_to_sequence(r: Roundabout) -> tuple:
    """Clockwise boundary: out_l followed by reversed block l."""
    seq = []
    for l in range(r.m):
        seq.append(("out", r.output_labels[l]))
        for lbl in reversed(r.input_labels[l]):
            seq.append(("in", lbl))
    return tuple(seq)


def sequence_to_roundabout(seq, flavor="hdpois", first_output=None) -> Roundabout:
    """Parse a clockwise boundary sequence back into stairway coordinates.

    ``first_output``: index into seq of the output to use as block 1 (defaults
    to the first output occurring in seq).
    """
    seq = tuple(seq)
    outs = [i for i, (kind, _) in enumerate(seq) if kind == "out"]
    assert outs, "a roundabout needs at least one output"
    start = outs[0] if first_output is None else first_output
    assert seq[start][0] == "out"
    rot = seq[start:] + seq[:start]
    lambdas, out_labels, blocks = [], [], []
    i = 0
    while i < len(rot):
        kind, lbl = rot[i]
        assert kind == "out"
        out_labels.append(lbl)
        i += 1
        blk = []
        while i < len(rot) and rot[i][0] == "in":
            blk.append(rot[i][1])
            i += 1
        blocks.append(tuple(reversed(blk)))
        lambdas.append(len(blk))
    return Roundabout(tuple(lambdas), tuple(out_labels), tuple(blocks), flavor)


# ---------------------------------------------------------------------------
# elementary cuttings


@dataclass(frozen=True)
class ElementaryCutting:
    """One oriented arc splitting a roundabout into a white (top) and a black
    (bottom) part; ``k``, ``sigma_shift``, ``p``, ``q`` index the cutting in
    the rotated frame where the grafted block of the bottom part comes last.
    """

    roundabout: Roundabout
    k: int
    sigma_shift: int
    p: int
    q: int
    bottom: Roundabout
    top: Roundabout
    graft_input: int  # 1-based flat input slot of bottom receiving top's output 1

    def sigma(self, j: int) -> int:
        """sigma(j), 1-based, rotation by sigma_shift."""
        m = self.roundabout.m
        return ((j - 1 + self.sigma_shift) % m) + 1


CUT_LABEL = ("cut", 0)


def _cut_ranges(flavor, lam_sk, lam_sm):
    if flavor == "hdpois":
        return range(0, lam_sm), range(0, lam_sk)
    return range(0, lam_sm + 1), range(0, lam_sk + 1)


def enumerate_elementary_cuttings(r: Roundabout):
    """All elementary coloured cuttings of r, in deterministic order.

    The index set is (k, sigma, p, q) as in the infinitesimal decomposition:
    for each cyclic rotation sigma and 1 <= k <= m, the bottom part keeps the
    blocks sigma(1..k-1) plus a new block (first p of block sigma(m), the cut
    edge, last q of block sigma(k)); the top part keeps the rest.
    """
    out = []
    m, flavor = r.m, r.flavor
    lam = r.lambdas
    for c in range(m):
        sig = [((j + c) % m) for j in range(m)]  # 0-based: sigma(j+1)-1
        for k in range(1, m + 1):
            lam_sk = lam[sig[k - 1]]
            lam_sm = lam[sig[m - 1]]
            p_range, q_range = _cut_ranges(flavor, lam_sk, lam_sm)
            for p in p_range:
                for q in q_range:
                    cut = _build_cutting(r, c, k, p, q)
                    if cut is not None:
                        out.append(cut)
    return out


def _part_ok_as_structure_key(flavor, lambdas) -> bool:
    # parts of Delta_(1,1) are structure keys of the flavor; the curved
    # flavor additionally admits the unary and the empty key
    if flavor == "curved":
        return all(l >= 0 for l in lambdas)
    return is_valid_structure_key(flavor, lambdas)


def _build_cutting(r: Roundabout, c: int, k: int, p: int, q: int):
    m, lam, flavor = r.m, r.lambdas, r.flavor
    sig = [((j + c) % m) for j in range(m)]
    sk, sm = sig[k - 1], sig[m - 1]
    if k == m:
        if p + q > lam[sm]:
            return None
        top_lams = (lam[sm] - p - q,)
        blk = r.input_labels[sm]
        top_blocks = (tuple(blk[p:len(blk) - q]),)
        top_outs = (CUT_LABEL,)
    else:
        if q > lam[sk] or p > lam[sm]:
            return None
        top_lams = (lam[sk] - q,) + tuple(lam[sig[j]] for j in range(k, m - 1)) \
            + (lam[sm] - p,)
        first = tuple(r.input_labels[sk][:lam[sk] - q])
        last = tuple(r.input_labels[sm][p:])
        mids = tuple(r.input_labels[sig[j]] for j in range(k, m - 1))
        top_blocks = (first,) + mids + (last,)
        top_outs = (CUT_LABEL,) + tuple(r.output_labels[sig[j]]
                                        for j in range(k, m))
    bot_lams = tuple(lam[sig[j]] for j in range(k - 1)) + (p + 1 + q,)
    pblk = tuple(r.input_labels[sm][:p])
    qblk = tuple(r.input_labels[sk][lam[sk] - q:])
    bot_blocks = tuple(r.input_labels[sig[j]] for j in range(k - 1)) \
        + (pblk + (CUT_LABEL,) + qblk,)
    bot_outs = tuple(r.output_labels[sig[j]] for j in range(k))
    if not _part_ok_as_structure_key(flavor, bot_lams):
        return None
    if not _part_ok_as_structure_key(flavor, top_lams):
        return None
    bottom = Roundabout(bot_lams, bot_outs, bot_blocks, flavor)
    top = Roundabout(top_lams, top_outs, top_blocks, flavor)
    i = sum(bot_lams[:-1]) + p + 1
    return ElementaryCutting(r, k, c, p, q, bottom, top, i)


def cutting_index_set_size(flavor, lambdas) -> int:
    """|{(k, sigma, p, q)}| with the flavor's range constraints; used as an
    independent cardinality check on the enumeration."""
    return len(enumerate_elementary_cuttings(
        standard_roundabout(lambdas, flavor)))


# ---------------------------------------------------------------------------
# arc systems


@dataclass(frozen=True)
class Arc:
    """Chord from gap ``a`` to gap ``b`` (0 <= a <= b <= N); the inside region
    is the slot interval [a, b).  ``out_of_inside`` is True when the arc's
    oriented edge leaves the inside region (the inside is the white side)."""

    a: int
    b: int
    out_of_inside: bool

    def inside(self):
        return range(self.a, self.b)


def arcs_noncrossing(x: Arc, y: Arc) -> bool:
    if x.b <= y.a or y.b <= x.a:
        return True  # disjoint (may share an endpoint)
    if x.a <= y.a and y.b <= x.b:
        return True  # y nested in x
    if y.a <= x.a and x.b <= y.b:
        return True
    return False


@dataclass(frozen=True)
class ArcSystem:
    arcs: tuple  # sorted tuple of Arc

    def __post_init__(self):
        arcs = self.arcs
        for i in range(len(arcs)):
            for j in range(i + 1, len(arcs)):
                assert arcs_noncrossing(arcs[i], arcs[j]), "crossing arcs"


def _sorted_arcs(arcs):
    return tuple(sorted(arcs, key=lambda e: (e.a, -e.b, e.out_of_inside)))


@dataclass
class Face:
    """One part of a partition: its boundary as a clockwise sequence of typed
    edges.  Entries are ("out"|"in", label); labels of arc edges are
    ("arc", arc_index)."""

    seq: tuple
    own_arc: int | None  # index of the enclosing arc, None for the outer face
    child_arcs: tuple

    def counts(self):
        n_out = sum(1 for kind, _ in self.seq if kind == "out")
        n_in = len(self.seq) - n_out
        return n_out, n_in

    def to_roundabout(self, flavor) -> Roundabout:
        return sequence_to_roundabout(self.seq, flavor)


def faces_of_system(r: Roundabout, system: ArcSystem):
    """Faces of the disc cut along the arc system, outer face first."""
    seq = roundabout_to_sequence(r)
    N = len(seq)
    arcs = system.arcs
    idx = list(range(len(arcs)))
    # containment forest: parent = smallest arc strictly containing
    parent = {}
    for i in idx:
        best = None
        for j in idx:
            if i == j:
                continue
            ai, aj = arcs[i], arcs[j]
            if aj.a <= ai.a and ai.b <= aj.b:
                if best is None or (arcs[best].b - arcs[best].a) > (aj.b - aj.a):
                    best = j
        parent[i] = best
    children = {i: [] for i in idx}
    top_level = []
    for i in idx:
        if parent[i] is None:
            top_level.append(i)
        else:
            children[parent[i]].append(i)

    def order_arcs(lst):
        return sorted(lst, key=lambda i: (arcs[i].a, -(arcs[i].b), i))

    def walk(lo, hi, kids):
        """Clockwise items strictly between gaps lo and hi at this level."""
        items = []
        pos = lo
        kid_list = order_arcs(kids)
        ki = 0
        while pos < hi:
            while ki < len(kid_list) and arcs[kid_list[ki]].a < pos:
                ki += 1
            if ki < len(kid_list) and arcs[kid_list[ki]].a == pos:
                e = kid_list[ki]
                kind = "in" if arcs[e].out_of_inside else "out"
                items.append((kind, ("arc", e)))
                pos = arcs[e].b
                ki += 1
            else:
                items.append(seq[pos])
                pos += 1
        return items

    faces = []
    outer_items = walk(0, N, top_level)
    faces.append(Face(tuple(outer_items), None, tuple(order_arcs(top_level))))
    for i in idx:
        e = arcs[i]
        body = walk(e.a, e.b, children[i])
        kind = "out" if e.out_of_inside else "in"
        body.append((kind, ("arc", i)))
        faces.append(Face(tuple(body), i, tuple(order_arcs(children[i]))))
    return faces


# ---------------------------------------------------------------------------
# partition kinds


def _face_part_sizes_ok(face: Face) -> bool:
    n_out, n_in = face.counts()
    return n_out >= 2 or (n_out == 1 and n_in >= 2)


def _face_flavor_ok(face: Face, flavor: str) -> bool:
    if not any(kind == "out" for kind, _ in face.seq):
        return False
    ra = face.to_roundabout(flavor if flavor != "hdpois" else "curved")
    if flavor == "hdpois":
        return all(l >= 1 for l in ra.lambdas)
    return True


@dataclass(frozen=True)
class OrientedPartition:
    system: ArcSystem


@dataclass(frozen=True)
class BicolouredPartition:
    system: ArcSystem
    outer_white: bool


@dataclass(frozen=True)
class InfinitesimalBWPartition:
    system: ArcSystem
    kind: str  # "black" | "white"
    special_face: int  # index into faces_of_system


def _all_chords(N):
    # chords touching gap 0 are represented with a >= 1 (their other,
    # non-wrapping side), so each geometric chord appears exactly once
    return [(a, b) for a in range(1, N + 1) for b in range(a + 1, N + 1)]


def _chords_noncrossing(x, y) -> bool:
    return x[1] <= y[0] or y[1] <= x[0] or \
        (x[0] <= y[0] and y[1] <= x[1]) or (y[0] <= x[0] and x[1] <= y[1])


def _enumerate_chord_sets(N):
    """All non-crossing sets of distinct chords (no repeated intervals)."""
    pool = _all_chords(N)
    out = []

    def rec(i, chosen):
        if i == len(pool):
            out.append(tuple(chosen))
            return
        rec(i + 1, chosen)
        e = pool[i]
        if all(_chords_noncrossing(e, f) and e != f for f in chosen):
            chosen.append(e)
            rec(i + 1, chosen)
            chosen.pop()

    rec(0, [])
    return out


def _face_geometry(r: Roundabout, chords):
    """Faces of the chord set with orientation-free boundary data.

    Each face is a list of boundary items, clockwise: either an original slot
    ("out"|"in", label) or a chord edge ("chord", idx, inside) where inside
    says whether the face is the inside region of that chord.
    """
    seq = roundabout_to_sequence(r)
    N = len(seq)
    idx = list(range(len(chords)))
    parent = {}
    for i in idx:
        best = None
        for j in idx:
            if i == j:
                continue
            if chords[j][0] <= chords[i][0] and chords[i][1] <= chords[j][1]:
                if best is None or \
                        (chords[best][1] - chords[best][0]) > (chords[j][1] - chords[j][0]):
                    best = j
        parent[i] = best
    children = {i: [] for i in idx}
    top_level = []
    for i in idx:
        if parent[i] is None:
            top_level.append(i)
        else:
            children[parent[i]].append(i)

    def order(lst):
        return sorted(lst, key=lambda i: chords[i][0])

    def walk(lo, hi, kids):
        items = []
        pos = lo
        kid_list = order(kids)
        ki = 0
        while pos < hi:
            if ki < len(kid_list) and chords[kid_list[ki]][0] == pos:
                e = kid_list[ki]
                items.append(("chord", e, False))
                pos = chords[e][1]
                ki += 1
            else:
                items.append(seq[pos])
                pos += 1
        return items

    faces = [walk(0, N, top_level)]
    for i in idx:
        a, b = chords[i]
        body = walk(a, b, children[i])
        body.append(("chord", i, True))
        faces.append(body)
    return faces


def _face_with_flows(geom_face, flows):
    """Boundary sequence of a face once chord orientations are fixed."""
    seq = []
    for item in geom_face:
        if item[0] == "chord":
            _, i, inside = item
            out = flows[i] if inside else not flows[i]
            seq.append(("out" if out else "in", ("arc", i)))
        else:
            seq.append(item)
    return tuple(seq)


def _geom_stats(geom_face):
    n_orig_out = sum(1 for it in geom_face if it[0] == "out")
    n_orig_in = sum(1 for it in geom_face if it[0] == "in")
    chord_items = [(it[1], it[2]) for it in geom_face if it[0] == "chord"]
    return n_orig_out, n_orig_in, chord_items


def enumerate_oriented_partitions(r: Roundabout, include_trivial=True):
    """Complete duplicate-free list of oriented partitions of r."""
    N = r.n + r.m
    results = []
    for chords in _enumerate_chord_sets(N):
        faces = _face_geometry(r, chords)
        k = len(chords)
        if k == 0:
            if include_trivial:
                f = Face(_face_with_flows(faces[0], ()), None, ())
                if _face_part_sizes_ok(f) and _face_flavor_ok(f, r.flavor):
                    results.append(OrientedPartition(ArcSystem(())))
            continue
        for bits in iproduct((True, False), repeat=k):
            ok = True
            for gf in faces:
                f_seq = _face_with_flows(gf, bits)
                f = Face(f_seq, None, ())
                if not (_face_part_sizes_ok(f) and _face_flavor_ok(f, r.flavor)):
                    ok = False
                    break
            if ok:
                arcs = _sorted_arcs(Arc(chords[i][0], chords[i][1], bits[i])
                                    for i in range(k))
                results.append(OrientedPartition(ArcSystem(arcs)))
    results.sort(key=lambda p: tuple((e.a, e.b, e.out_of_inside)
                                     for e in p.system.arcs))
    return results


def _face_color_constraints(face: Face, white: bool) -> bool:
    """Colour admissibility for bicoloured partitions."""
    n_arc_out = n_arc_in = n_orig_out = n_orig_in = 0
    for kind, lbl in face.seq:
        is_arc = isinstance(lbl, tuple) and lbl and lbl[0] == "arc"
        if kind == "out":
            if is_arc:
                n_arc_out += 1
            else:
                n_orig_out += 1
        else:
            if is_arc:
                n_arc_in += 1
            else:
                n_orig_in += 1
    if white:
        # inputs live in white parts; all incident arc edges leave
        if n_orig_out or n_arc_in:
            return False
        return n_arc_out >= 2 or n_orig_in >= 1
    # black: outputs live in black parts; all incident arc edges enter
    if n_orig_in or n_arc_out:
        return False
    return n_orig_out >= 2 or n_arc_in >= 1


def enumerate_bicoloured_partitions(r: Roundabout):
    """Complete duplicate-free list of bicoloured partitions of r.

    Colours alternate along the face tree, so a chord set admits at most two
    colourings; the orientations (edges leave white parts) are determined by
    the colouring.
    """
    N = r.n + r.m
    results = []
    for chords in _enumerate_chord_sets(N):
        faces = _face_geometry(r, chords)
        k = len(chords)
        for outer_white in (True, False):
            colours = _colours_from_outer(faces, k, outer_white)
            # orientation: arcs leave white faces; chord i sits between the
            # face inside it and its parent face
            flows = [None] * k
            for fi, gf in enumerate(faces):
                for it in gf:
                    if it[0] == "chord" and it[2]:
                        # this face is the inside of chord it[1]
                        flows[it[1]] = colours[fi]
            flows = tuple(bool(x) for x in flows)
            ok = True
            for fi, gf in enumerate(faces):
                f = Face(_face_with_flows(gf, flows), None, ())
                if not (_face_color_constraints(f, colours[fi]) and
                        _face_flavor_ok(f, r.flavor)):
                    ok = False
                    break
            if ok:
                arcs = _sorted_arcs(Arc(chords[i][0], chords[i][1], flows[i])
                                    for i in range(k))
                results.append(BicolouredPartition(ArcSystem(arcs), outer_white))
            if k == 0:
                break  # the trivial system: one colour choice per validity
    results.sort(key=lambda p: (tuple((e.a, e.b, e.out_of_inside)
                                      for e in p.system.arcs), p.outer_white))
    return results


def _colours_from_outer(faces, n_chords, outer_white):
    """Alternating colours on the face tree (face 0 is outer; face i+1 is the
    inside face of chord i)."""
    depth = [0] * len(faces)
    # parent of inside-face of chord i is the face whose boundary lists
    # ("chord", i, False)
    parent_face = {}
    for fi, gf in enumerate(faces):
        for it in gf:
            if it[0] == "chord" and not it[2]:
                parent_face[it[1]] = fi
    colours = [None] * len(faces)
    colours[0] = outer_white

    def fill(fi):
        for it in faces[fi]:
            if it[0] == "chord" and not it[2]:
                child = it[1] + 1
                colours[child] = not colours[fi]
                fill(child)

    fill(0)
    return colours


def _face_colours(faces):
    """Colour of every face forced by the arc orientations; None if mixed."""
    colours = []
    for f in faces:
        is_white = is_black = True
        for kind, lbl in f.seq:
            if isinstance(lbl, tuple) and lbl and lbl[0] == "arc":
                if kind == "out":
                    is_black = False
                else:
                    is_white = False
            else:
                if kind == "in":
                    is_black = False
                else:
                    is_white = False
        if is_white and not is_black:
            colours.append(True)
        elif is_black and not is_white:
            colours.append(False)
        else:
            return None  # ambiguous (no edges) or contradictory
    return colours


def enumerate_infinitesimal_bw_partitions(r: Roundabout, kind: str):
    """Infinitesimal black / white partitions (exactly one part of ``kind``).

    These are broader than bicoloured partitions with one part of the colour:
    in the black kind the white parts may hold outgoing edges (they bypass
    the black part), and in the white kind incoming edges may sit directly in
    black parts.  Every arc borders the special part, so the face tree is a
    star and the orientations are forced by the choice of the special face.
    """
    assert kind in ("black", "white")
    N = r.n + r.m
    results = []
    for chords in _enumerate_chord_sets(N):
        k = len(chords)
        if k == 0:
            continue  # the special part needs at least one frontier arc
        faces = _face_geometry(r, chords)
        for special, gf in enumerate(faces):
            incident = [(it[1], it[2]) for it in gf if it[0] == "chord"]
            if len(incident) != k:
                continue  # some arc does not border the special face
            flows = [None] * k
            for ci, special_is_inside in incident:
                if kind == "black":
                    # the edge enters the special face
                    flows[ci] = not special_is_inside
                else:
                    flows[ci] = special_is_inside
            flows = tuple(flows)
            arcs = _sorted_arcs(Arc(chords[i][0], chords[i][1], flows[i])
                                for i in range(k))
            system = ArcSystem(arcs)
            face_objs = faces_of_system(r, system)
            found = _check_inf_partition(face_objs, kind, r.flavor)
            if found is not None:
                results.append(
                    InfinitesimalBWPartition(system, kind, found))
    results.sort(key=lambda p: (tuple((e.a, e.b, e.out_of_inside)
                                      for e in p.system.arcs), p.special_face))
    return results


def _check_inf_partition(faces, kind, flavor):
    """Return the index of the unique special face, or None."""
    special = []
    for i, f in enumerate(faces):
        stats = _face_stats(f)
        n_arc_out, n_arc_in, n_orig_out, n_orig_in = stats
        if kind == "black":
            # black face: all arcs enter it, no original inputs
            if n_arc_out == 0 and n_orig_in == 0 and n_arc_in >= 1:
                special.append(i)
        else:
            # white face: all arcs leave it, no original outputs
            if n_arc_in == 0 and n_orig_out == 0 and n_arc_out >= 1:
                special.append(i)
    if len(special) != 1:
        return None
    s = special[0]
    for i, f in enumerate(faces):
        n_arc_out, n_arc_in, n_orig_out, n_orig_in = _face_stats(f)
        if i == s:
            if kind == "black":
                # valid key of the coideal: m >= 2 outputs or >= 2 inputs
                if not (n_orig_out >= 2 or n_arc_in >= 2):
                    return None
            else:
                if not (n_arc_out >= 2 or n_orig_in >= 2):
                    return None
            if flavor == "hdpois" and not _face_flavor_ok(f, flavor):
                return None
            continue
        # ordinary faces are morphism components: the remaining arcs must all
        # point towards the special part with the correct orientation
        if kind == "black":
            # whites: arcs all leave, at least one original input or >= 2 arcs
            if n_arc_in:
                return None
            if not (n_orig_in >= 1 or n_arc_out >= 2):
                return None
        else:
            # blacks: arcs all enter, at least one outgoing original edge
            if n_arc_out:
                return None
            if n_orig_out < 1:
                return None
        if n_orig_in + n_arc_in < 1:
            return None  # morphism keys need n >= 1
        if flavor == "hdpois" and not _face_flavor_ok(f, flavor):
            return None
    return s


def _face_stats(f: Face):
    n_arc_out = n_arc_in = n_orig_out = n_orig_in = 0
    for kind, lbl in f.seq:
        is_arc = isinstance(lbl, tuple) and lbl and lbl[0] == "arc"
        if kind == "out":
            if is_arc:
                n_arc_out += 1
            else:
                n_orig_out += 1
        else:
            if is_arc:
                n_arc_in += 1
            else:
                n_orig_in += 1
    return n_arc_out, n_arc_in, n_orig_out, n_orig_in


# ---------------------------------------------------------------------------
# partitions -> graphs


@dataclass
class PartitionGraph:
    """Flow-directed tree of parts: vertices are faces (as roundabouts with
    arc labels on their boundary), edges are the arcs, directed from the face
    where the arc leaves to the face where it enters."""

    vertices: list  # list of Roundabout (boundary labels include ("arc", i))
    edges: list     # list of (src_vertex, dst_vertex, arc_index)

    def is_tree(self) -> bool:
        v, e = len(self.vertices), len(self.edges)
        if e != v - 1:
            return False
        adj = {i: set() for i in range(v)}
        for s, d, _ in self.edges:
            adj[s].add(d)
            adj[d].add(s)
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == v


def partition_to_graph(r: Roundabout, system: ArcSystem) -> PartitionGraph:
    faces = faces_of_system(r, system)
    verts = [f.to_roundabout("curved") for f in faces]
    owner_out = {}
    owner_in = {}
    for vi, f in enumerate(faces):
        for kind, lbl in f.seq:
            if isinstance(lbl, tuple) and lbl and lbl[0] == "arc":
                if kind == "out":
                    owner_out[lbl[1]] = vi
                else:
                    owner_in[lbl[1]] = vi
    edges = [(owner_out[i], owner_in[i], i) for i in range(len(system.arcs))]
    g = PartitionGraph(verts, edges)
    assert g.is_tree(), "partition graph must be a connected genus-0 tree"
    return g
