"""Term engine for the Koszul dual properad of stairways.

A basis monomial is a treewise stairway: a chain of two-in/two-out "box"
generators (degree -1) whose strand tops carry right combs of binary "mu"
generators (degree -1); empty blocks are capped by a nullary "u" generator
(degree +1, curved setting only).  Monomials carry an explicit tensor order
of their vertices; transposing two vertices flips the sign (all generators
are odd).

The engine composes two stairways along one edge (grafted output 1 of the
top into a chosen input of the bottom, whose mixed block comes last) and
rewrites the composite back to stairway normal form with the local moves

  * anti-associativity          mu(mu(a,b),c)    -> - mu(a,mu(b,c))
  * comb-over-box pull-ups      mu under box.o1  -> - mu over the box
  * unit cancellations          mu o_1 u = -id,  mu o_2 u = +id

followed by a vertex-order comparison against the canonically built result.
The cyclic rotation back to the canonical frame uses the stairway basis
relation (one-step sign exponent n*l_1 + l_m), and the final dualization
contributes (-1)^{|top| |bottom|}.  This computes the coefficients of the
infinitesimal decomposition map independently of any closed sign formula.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .roundabout import CUT_LABEL, ElementaryCutting, Roundabout

BOX = "box"
MU = "mu"
UU = "u"

ARITY = {BOX: (2, 2), MU: (2, 1), UU: (0, 1)}


@dataclass
class StairTerm:
    """Sign * monomial: vertices in tensor order plus wiring.

    ``in_src[(v, k)]`` is the source feeding input k of vertex v: either
    ("leaf", label) or ("v", w, out_k).  ``roots[label]`` is the source of
    the global output with that label.
    """

    kinds: list = field(default_factory=list)
    in_src: dict = field(default_factory=dict)
    roots: dict = field(default_factory=dict)
    sign: int = 1

    def n_vertices(self):
        return len(self.kinds)

    def new_vertex(self, kind):
        self.kinds.append(kind)
        return len(self.kinds) - 1

    def out_destinations(self):
        """Map ("v", v, out_k) -> destination port ((v', k') or root label)."""
        dst = {}
        for (v, k), src in self.in_src.items():
            if src[0] == "v":
                dst[src] = ("port", v, k)
        for label, src in self.roots.items():
            if src[0] == "v":
                dst[src] = ("root", label)
        return dst

    def leaf_positions(self):
        pos = {}
        for (v, k), src in self.in_src.items():
            if src[0] == "leaf":
                pos[src[1]] = ("port", v, k)
        for label, src in self.roots.items():
            if src[0] == "leaf":
                pos[src[1]] = ("root", label)
        return pos


def build_stairway_term(lambdas, out_labels, in_blocks) -> StairTerm:
    """Canonical monomial of a labelled stairway.

    Vertex tensor order: boxes bottom-up, then per strand (left to right) the
    comb vertices root-first (the u cap when the block is empty).
    """
    m = len(lambdas)
    t = StairTerm()
    boxes = [t.new_vertex(BOX) for _ in range(m - 1)]
    strand_tops = []  # source feeding the top of each strand

    def build_block(block):
        lam = len(block)
        if lam == 0:
            u = t.new_vertex(UU)
            return ("v", u, 0)
        if lam == 1:
            return ("leaf", block[0])
        verts = [t.new_vertex(MU) for _ in range(lam - 1)]
        for idx, v in enumerate(verts):
            t.in_src[(v, 0)] = ("leaf", block[idx])
            if idx + 1 < len(verts):
                t.in_src[(v, 1)] = ("v", verts[idx + 1], 0)
            else:
                t.in_src[(v, 1)] = ("leaf", block[lam - 1])
        return ("v", verts[0], 0)

    if m == 1:
        t.roots[out_labels[0]] = build_block(in_blocks[0])
        return t
    # wiring of the box chain
    for l in range(m - 1):
        t.in_src[(boxes[l], 0)] = None  # filled below by block l
        if l + 1 < m - 1:
            t.in_src[(boxes[l], 1)] = ("v", boxes[l + 1], 0)
    t.roots[out_labels[0]] = ("v", boxes[0], 0)
    for l in range(1, m):
        t.roots[out_labels[l]] = ("v", boxes[l - 1], 1)
    # strand tops (built after boxes so the tensor order is boxes first)
    for l in range(m):
        strand_tops.append(build_block(in_blocks[l]))
    for l in range(m - 1):
        t.in_src[(boxes[l], 0)] = strand_tops[l]
    t.in_src[(boxes[m - 2], 1)] = strand_tops[m - 1]
    return t


def term_from_roundabout(r: Roundabout) -> StairTerm:
    return build_stairway_term(r.lambdas, r.output_labels, r.input_labels)


def graft(bottom: StairTerm, top: StairTerm, leaf_label, top_out_label):
    """gamma(bottom (x) top): bottom vertices first, then top's, with top's
    output ``top_out_label`` wired into bottom's leaf ``leaf_label``."""
    t = StairTerm(sign=bottom.sign * top.sign)
    t.kinds = list(bottom.kinds)
    off = len(bottom.kinds)
    t.kinds += list(top.kinds)

    def shift(src):
        if src is None or src[0] == "leaf":
            return src
        return ("v", src[1] + off, src[2])

    t.in_src = dict(bottom.in_src)
    t.roots = dict(bottom.roots)
    for (v, k), src in top.in_src.items():
        t.in_src[(v + off, k)] = shift(src)
    top_out_src = shift(top.roots[top_out_label])
    for label, src in top.roots.items():
        if label != top_out_label:
            assert label not in t.roots
            t.roots[label] = shift(src)
    # plug the grafted edge into the bottom leaf
    target = bottom.leaf_positions()[leaf_label]
    if target[0] == "port":
        t.in_src[(target[1], target[2])] = top_out_src
    else:
        t.roots[target[1]] = top_out_src
    return t


# ---------------------------------------------------------------------------
# moves


def _swap_to(t: StairTerm, v: int, pos: int):
    """Move vertex v to index pos by adjacent transpositions, updating the
    sign; all generators are odd so each swap contributes -1."""
    cur = v
    while cur > pos:
        _swap_adjacent(t, cur - 1)
        cur -= 1
    while cur < pos:
        _swap_adjacent(t, cur)
        cur += 1


def _swap_adjacent(t: StairTerm, i: int):
    """Transpose vertices i and i+1 in the tensor order."""
    j = i + 1
    t.kinds[i], t.kinds[j] = t.kinds[j], t.kinds[i]
    remap = {i: j, j: i}

    def fix(src):
        if src is not None and src[0] == "v" and src[1] in remap:
            return ("v", remap[src[1]], src[2])
        return src

    new_in = {}
    for (v, k), src in t.in_src.items():
        new_in[(remap.get(v, v), k)] = fix(src)
    t.in_src = new_in
    t.roots = {lab: fix(src) for lab, src in t.roots.items()}
    t.sign = -t.sign


def _find_move(t: StairTerm):
    """Locate the next rewriting site (deterministic: smallest mu index)."""
    for v in range(len(t.kinds)):
        if t.kinds[v] != MU:
            continue
        for k in (0, 1):
            src = t.in_src[(v, k)]
            if src is None or src[0] != "v":
                continue
            w, outk = src[1], src[2]
            kindw = t.kinds[w]
            if kindw == UU:
                return ("unit", v, k, w)
            if kindw == BOX:
                assert outk == 0, "box output 2 never feeds a comb here"
                return ("pullup", v, k, w)
            if kindw == MU and k == 0:
                return ("assoc", v, k, w)
    return None


def _apply_unit(t: StairTerm, v, k, w):
    """mu o_1 u = -id, mu o_2 u = +id: drop both vertices (the pair is even,
    so removing it costs nothing beyond making it adjacent)."""
    _swap_to(t, w, v + 1 if w > v else v)
    v, w = _locate_pair(t, MU, UU)
    k = 0 if t.in_src[(v, 0)] == ("v", w, 0) else 1
    assert t.in_src[(v, k)] == ("v", w, 0)
    other = t.in_src[(v, 1 - k)]
    dst = t.out_destinations()[("v", v, 0)]
    if dst[0] == "port":
        t.in_src[(dst[1], dst[2])] = other
    else:
        t.roots[dst[1]] = other
    if k == 0:
        t.sign = -t.sign
    _drop_vertices(t, [v, w])


def _locate_pair(t: StairTerm, kind_a, kind_b, slot=None):
    """Find adjacent pair (v, v+1) with kinds (kind_a, kind_b) and an edge
    from v+1 into input ``slot`` of v (any slot when None)."""
    for v in range(len(t.kinds) - 1):
        if t.kinds[v] == kind_a and t.kinds[v + 1] == kind_b:
            slots = range(ARITY[kind_a][0]) if slot is None else (slot,)
            for k in slots:
                src = t.in_src.get((v, k))
                if src is not None and src[0] == "v" and src[1] == v + 1:
                    return v, v + 1
    raise AssertionError("pair not adjacent")


def _drop_vertices(t: StairTerm, victims):
    victims = sorted(victims, reverse=True)
    for v in victims:
        for k in range(ARITY[t.kinds[v]][0]):
            t.in_src.pop((v, k), None)
    for v in victims:
        assert all(src is None or src[0] != "v" or src[1] != v
                   for src in list(t.in_src.values()) + list(t.roots.values())), \
            "dropping a vertex that is still referenced"
        del t.kinds[v]

        def remap(x, _v=v):
            return x - 1 if x > _v else x

        new_in = {}
        for (vv, k), src in t.in_src.items():
            if src is not None and src[0] == "v":
                src = ("v", remap(src[1]), src[2])
            new_in[(remap(vv), k)] = src
        t.in_src = new_in
        t.roots = {lab: (("v", remap(src[1]), src[2])
                         if src is not None and src[0] == "v" else src)
                   for lab, src in t.roots.items()}


def _apply_assoc(t: StairTerm, v, w):
    """mu(mu(a,b),c) -> -mu(a, mu(b,c)); order (outer, inner) kept."""
    _swap_to(t, w, v + 1 if w > v else v)
    v, w = _locate_pair(t, MU, MU, slot=0)
    assert t.in_src[(v, 0)] == ("v", w, 0), "left-comb pattern expected"
    a = t.in_src[(w, 0)]
    b = t.in_src[(w, 1)]
    c = t.in_src[(v, 1)]
    t.in_src[(v, 0)] = a
    t.in_src[(v, 1)] = ("v", w, 0)
    t.in_src[(w, 0)] = b
    t.in_src[(w, 1)] = c
    t.sign = -t.sign


def _apply_pullup(t: StairTerm, v, k, w):
    """mu fed by box.out0 hops above the box; the 2-vertex relation reads
    (mu, box)-ordered LHS = - (box, mu)-ordered RHS, so the rewiring comes
    with one sign and an order exchange that is part of the relation (the
    relabeling below must not count as a Koszul transposition)."""
    _swap_to(t, w, v + 1 if w > v else v)
    v, w = _locate_pair(t, MU, BOX)
    dst = t.out_destinations()[("v", v, 0)]
    k = 0 if t.in_src[(v, 0)] == ("v", w, 0) else 1
    assert t.in_src[(v, k)] == ("v", w, 0)
    topk = k  # the mu lands on the box input on its own side
    upper = t.in_src[(w, topk)]
    t.in_src[(v, k)] = upper
    t.in_src[(w, topk)] = ("v", v, 0)
    if dst[0] == "port":
        t.in_src[(dst[1], dst[2])] = ("v", w, 0)
    else:
        t.roots[dst[1]] = ("v", w, 0)
    t.sign = -t.sign
    _swap_adjacent(t, v)
    t.sign = -t.sign  # undo the Koszul sign: the exchange is in the relation


def normalize(t: StairTerm, max_steps=10000):
    steps = 0
    while True:
        mv = _find_move(t)
        if mv is None:
            return t
        steps += 1
        assert steps < max_steps, "rewriting did not terminate"
        tag = mv[0]
        if tag == "unit":
            _apply_unit(t, mv[1], mv[2], mv[3])
        elif tag == "assoc":
            _apply_assoc(t, mv[1], mv[3])
        else:
            _apply_pullup(t, mv[1], mv[2], mv[3])


def parse_stairway(t: StairTerm):
    """Read a normalized term as (lambdas, out_labels, in_blocks, perm) where
    perm maps canonical vertex positions to t's positions."""
    # find the box chain bottom: the box whose out0 is a root
    dst = t.out_destinations()
    boxes = [v for v, k in enumerate(t.kinds) if k == BOX]
    chain = []
    if boxes:
        bottoms = [v for v in boxes if dst.get(("v", v, 0), ("x",))[0] == "root"]
        assert len(bottoms) == 1, "not a stairway: no unique bottom box"
        b = bottoms[0]
        chain = [b]
        while True:
            src = t.in_src[(chain[-1], 1)]
            if src is not None and src[0] == "v" and t.kinds[src[1]] == BOX:
                chain.append(src[1])
            else:
                break
        assert len(chain) == len(boxes), "boxes do not form one chain"

    def read_comb(src):
        """Return (labels, vertex list root-first) hanging at a strand top."""
        if src[0] == "leaf":
            return [src[1]], []
        v = src[1]
        if t.kinds[v] == UU:
            return [], [v]
        assert t.kinds[v] == MU
        labels, verts = [], []
        while True:
            verts.append(v)
            a = t.in_src[(v, 0)]
            assert a[0] == "leaf", "not a right comb"
            labels.append(a[1])
            b = t.in_src[(v, 1)]
            if b[0] == "leaf":
                labels.append(b[1])
                return labels, verts
            assert t.kinds[b[1]] == MU
            v = b[1]

    m = len(chain) + 1
    out_labels = [None] * m
    blocks = [None] * m
    comb_vertices = []
    if not chain:
        (label, src), = t.roots.items()
        out_labels[0] = label
        lbls, verts = read_comb(src)
        blocks[0] = tuple(lbls)
        comb_vertices.append(verts)
    else:
        root_of = {src: lab for lab, src in t.roots.items()}
        out_labels[0] = root_of[("v", chain[0], 0)]
        for l in range(1, m):
            out_labels[l] = root_of[("v", chain[l - 1], 1)]
        for l in range(m - 1):
            lbls, verts = read_comb(t.in_src[(chain[l], 0)])
            blocks[l] = tuple(lbls)
            comb_vertices.append(verts)
        lbls, verts = read_comb(t.in_src[(chain[m - 2], 1)])
        blocks[m - 1] = tuple(lbls)
        comb_vertices.append(verts)
    # canonical order: boxes bottom-up, then strand combs root-first
    canonical = list(chain)
    for verts in comb_vertices:
        canonical.extend(verts)
    assert sorted(canonical) == list(range(len(t.kinds)))
    lambdas = tuple(len(b) for b in blocks)
    return lambdas, tuple(out_labels), tuple(blocks), canonical


def _perm_sign(order) -> int:
    sign = 1
    n = len(order)
    for i in range(n):
        for j in range(i + 1, n):
            if order[i] > order[j]:
                sign = -sign
    return sign


def normal_form_sign(t: StairTerm):
    """Normalize and compare with the canonically built stairway; returns
    (lambdas, out_labels, in_blocks, total sign)."""
    normalize(t)
    lambdas, out_labels, blocks, canonical = parse_stairway(t)
    # t equals sign(t) * (vertices in t's order); the canonical term lists
    # them in `canonical` order; reordering odd vertices costs the parity
    sign = t.sign * _perm_sign(canonical)
    return lambdas, out_labels, blocks, sign


# ---------------------------------------------------------------------------
# the sign oracle


def dual_sign_oracle(cut: ElementaryCutting) -> int:
    """Coefficient of (bottom, top) in the infinitesimal decomposition of the
    cutting's roundabout, computed mechanically: compose the two stairways,
    rewrite to normal form, rotate to the canonical frame, dualize."""
    from .roundabout import cyclic_sign_noncurved

    r = cut.roundabout
    bottom_t = term_from_roundabout(cut.bottom)
    top_t = term_from_roundabout(cut.top)
    comp = graft(bottom_t, top_t, CUT_LABEL, CUT_LABEL)
    lambdas, out_labels, blocks, sign = normal_form_sign(comp)
    expected = r.rotate(cut.sigma_shift)
    assert lambdas == expected.lambdas, (lambdas, expected.lambdas)
    assert out_labels == expected.output_labels
    assert blocks == expected.input_labels
    # rotate back to the canonical frame using the stairway basis relation
    m = r.m
    lam = list(expected.lambdas)
    steps = (m - cut.sigma_shift) % m if m else 0
    for _ in range(steps):
        sign *= cyclic_sign_noncurved(tuple(lam))
        lam = lam[1:] + lam[:1]
    # linear dualization: product of the degrees of the two factors
    deg_b = cut.bottom.n - 1
    deg_t = cut.top.n - 1
    if (deg_b * deg_t) % 2:
        sign = -sign
    return sign
