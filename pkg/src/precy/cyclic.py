"""The higher cyclic complex, the necklace algebra, and the comparison maps.

Components of a higher-cyclic element are multilinear maps from tensor words
of the suspended space to tensor powers of the plain space, invariant under
the block-rotation conjugation.  The partial products graft the suspended
first output of one component into a chosen input of another and reshuffle
the flanking blocks cyclically; summing over all inputs gives the
Lie-admissible product.

Necklace elements are rational combinations of cyclic words in letters from
the space and duals of its suspension; the half-bracket pairs dual letters
of the left factor against plain letters of the right factor.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .graded import (
    GradedSpace, Operation, block_cyclic_permutation, compose_partial,
    koszul_sign, permute_inputs, permute_outputs, rotation_perm,
)
from .roundabout import canonical_key, key_rotations_to_canonical
from .signs import upsilon_sign, zeta_sign
from .structures import ConvolutionElement, _ordered_partitions


def hc_op_shape(space: GradedSpace, lambdas, degree):
    sa = space.suspend()
    n, m = sum(lambdas), len(lambdas)
    return Operation((sa,) * n, (space,) * m, degree)


@dataclass
class HcElement:
    """Degree-d element of the higher cyclic complex: components indexed by
    canonical partition keys; the component at a key with n inputs is a map
    (sA)^n -> A^m of degree d - 1 (the global suspension carries the +1)."""

    space: GradedSpace
    degree: int
    comps: dict = field(default_factory=dict)

    def __post_init__(self):
        sa = self.space.suspend()
        for key, op in self.comps.items():
            assert key == canonical_key(key), f"non-canonical key {key}"
            n, m = sum(key), len(key)
            assert op.n_inputs == n and op.m_outputs == m
            assert all(s == sa for s in op.sources)
            assert all(t == self.space for t in op.targets)
            assert op.degree == self.degree - 1

    def component(self, lambdas) -> Operation:
        """Component at any rotation of a canonical key (conjugation, no
        scalar sign: the element is invariant)."""
        lambdas = tuple(lambdas)
        ckey = canonical_key(lambdas)
        base = self.comps.get(ckey)
        n, m = sum(lambdas), len(lambdas)
        if base is None:
            return hc_op_shape(self.space, lambdas, self.degree - 1)
        c = key_rotations_to_canonical(lambdas)
        cur = base
        lam = ckey
        for _ in range((m - c) % m):
            cur = _hc_conjugate(cur, lam)
            lam = lam[1:] + lam[:1]
        return cur

    def is_zero(self):
        return all(op.is_zero() for op in self.comps.values())

    def __add__(self, other):
        assert self.space == other.space and self.degree == other.degree
        comps = dict(self.comps)
        for key, op in other.comps.items():
            comps[key] = comps[key] + op if key in comps else op
        return HcElement(self.space, self.degree,
                         {k: v for k, v in comps.items() if not v.is_zero()})

    def scale(self, c):
        return HcElement(self.space, self.degree,
                         {k: v.scale(c) for k, v in self.comps.items()
                          if c != 0 and not v.is_zero()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        if not isinstance(other, HcElement):
            return NotImplemented
        if self.space != other.space or self.degree != other.degree:
            return False
        return (self - other).is_zero()

    def is_invariant(self) -> bool:
        """Every stored component returns to itself after a full cycle of
        conjugations (the invariance that makes `component` well defined)."""
        for key, op in self.comps.items():
            m = len(key)
            cur, lam = op, key
            for _ in range(m):
                cur = _hc_conjugate(cur, lam)
                lam = lam[1:] + lam[:1]
            if not (cur - op).is_zero():
                return False
        return True


def _hc_conjugate(op: Operation, lambdas) -> Operation:
    """Component at the one-step rotated key from the component at the key:
    rotate the input blocks and the outputs, Koszul signs entrywise."""
    m = len(lambdas)
    out = permute_inputs(op, block_cyclic_permutation(lambdas, 1))
    out = permute_outputs(out, rotation_perm(m, -1))
    return out


def _hc_conjugate_inv(op: Operation, lambdas) -> Operation:
    """Inverse of one conjugation step: from the component at the rotated key
    rot(lambdas) back to the component at ``lambdas``."""
    m = len(lambdas)
    rot = tuple(lambdas[1:]) + (lambdas[0],)
    from .graded import perm_inverse
    out = permute_inputs(op, perm_inverse(block_cyclic_permutation(lambdas, 1)))
    out = permute_outputs(out, rotation_perm(m, 1))
    return out


def hc_symmetrize(space, degree, raw_comps) -> HcElement:
    """Invariant element from raw components: average the conjugation orbit
    of every raw component into its canonical key."""
    acc = {}
    for key, op in raw_comps.items():
        key = tuple(key)
        m = len(key)
        cur, lam = op, key
        for _ in range(key_rotations_to_canonical(key)):
            cur = _hc_conjugate(cur, lam)
            lam = lam[1:] + lam[:1]
        ckey = canonical_key(key)
        acc[ckey] = acc[ckey] + cur if ckey in acc else cur
    out = {}
    for key, op in acc.items():
        m = len(key)
        stab = [c for c in range(1, m) if key[c:] + key[:c] == key]
        period = min(stab) if stab else m
        if period < m:
            proj, cur, lam, count = op.copy(), op, key, 1
            for _ in range(m // period - 1):
                for _ in range(period):
                    cur = _hc_conjugate(cur, lam)
                    lam = lam[1:] + lam[:1]
                proj = proj + cur
                count += 1
            op = proj.scale(Fraction(1, count))
        if not op.is_zero():
            out[key] = op
    return HcElement(space, degree, out)


# ---------------------------------------------------------------------------
# the partial and total products


def _suspend_first_output(op: Operation, space: GradedSpace) -> Operation:
    """(s (x) 1 (x) .. (x) 1) o op: retype output 1 into sA (degree +1)."""
    sa = space.suspend()
    out = Operation(op.sources, (sa,) + op.targets[1:], op.degree + 1)
    for (ti, to), c in op.entries.items():
        out.add_entry(ti, to, c)
    return out


def _desuspend_first_output(op: Operation, space: GradedSpace) -> Operation:
    out = Operation(op.sources, (space,) + op.targets[1:], op.degree - 1)
    for (ti, to), c in op.entries.items():
        out.add_entry(ti, to, c)
    return out


def hc_partial_product(F: HcElement, G: HcElement, lam, k: int, l: int,
                       lam_g) -> tuple:
    """One partial composite: G's suspended first output into input
    i = lam_1+..+lam_{k-1}+l of F's component at ``lam``; returns
    (result_key, operation with inputs/outputs cyclically interleaved).

    The composite key reads (lam_1 .. lam_{k-1}, lam'_1 + lam_k - l,
    lam'_2 .. lam'_{m'-1}, l - 1 + lam'_{m'}, lam_{k+1} .. lam_m).
    """
    m, mp = len(lam), len(lam_g)
    assert 1 <= k <= m and 1 <= l <= lam[k - 1]
    f_op = F.component(lam)
    g_op = G.component(lam_g)
    if f_op.is_zero() or g_op.is_zero():
        return None, None
    sf = _suspend_first_output(f_op, F.space)
    sg = _suspend_first_output(g_op, G.space)
    i = sum(lam[:k - 1]) + l
    comp = compose_partial(sf, sg, i, 1)
    n, np_ = sum(lam), sum(lam_g)
    # output rearrangement: from (F_1..F_m, G_2..G_m') to
    # (F_1..F_k, G_2..G_m', F_{k+1}..F_m)
    sigma_out = ([j for j in range(k)]
                 + [j + mp - 1 for j in range(k, m)]
                 + [k + j for j in range(mp - 1)])
    comp = permute_outputs(comp, tuple(sigma_out))
    # input rearrangement
    pre = list(range(i - l))                      # blocks 1..k-1 of F
    head = [i - l + t for t in range(l - 1)]      # x_1..x_{l-1}
    gfirst = [i - 1 + t for t in range(lam_g[0])]
    gmidlast = [i - 1 + lam_g[0] + t for t in range(np_ - lam_g[0])]
    gmid = gmidlast[:np_ - lam_g[0] - lam_g[-1]] if mp > 1 else []
    glast = gmidlast[np_ - lam_g[0] - lam_g[-1]:] if mp > 1 else []
    tail = [i - 1 + np_ + t for t in range(lam[k - 1] - l)]  # x_{l+1}..
    rest = [i - 1 + np_ + lam[k - 1] - l + t for t in range(n - i - (lam[k - 1] - l))]
    if mp > 1:
        target = pre + gfirst + tail + gmid + head + glast + rest
        key = (tuple(lam[:k - 1]) + (lam_g[0] + lam[k - 1] - l,)
               + tuple(lam_g[1:-1]) + (l - 1 + lam_g[-1],) + tuple(lam[k:]))
    else:
        # single-block G: the block keeps its natural order (head, G, tail)
        target = pre + head + gfirst + tail + rest
        key = (tuple(lam[:k - 1]) + (lam_g[0] + lam[k - 1] - 1,)
               + tuple(lam[k:]))
    # target[t] = position in comp's input order of the t-th composite slot
    sigma_in = [0] * len(target)
    for slot, cur in enumerate(target):
        sigma_in[cur] = slot
    comp = permute_inputs(comp, tuple(sigma_in))
    comp = _desuspend_first_output(comp, F.space)
    assert len(key) == m + mp - 1 and sum(key) == n + np_ - 1
    return key, comp


HC_SINGLE_BLOCK_WRAP = True  # m'=1 blocks read (G, F-tail, F-head)


def hc_product(F: HcElement, G: HcElement, max_arity: int = 8) -> HcElement:
    """The total product: sum of all partial composites, assembled on
    canonical keys.

    The bottom factor runs over the distinct rotations of F's keys (its own
    input slots index the graftings); the grafted factor runs over all
    rotation frames of G's keys *with stabilizer multiplicity*: grafting
    output j of an invariant component equals grafting output 1 of its
    rotated frame, and self-symmetric keys repeat frames.
    """
    assert F.space == G.space
    acc = {}
    deg = F.degree + G.degree
    f_keys = _all_rotations(F.comps.keys())
    g_frames = []
    for gk in G.comps.keys():
        for c in range(len(gk)):
            g_frames.append(gk[c:] + gk[:c])
    for lam in f_keys:
        m = len(lam)
        for lam_g in g_frames:
            if sum(lam) + sum(lam_g) - 1 > max_arity:
                continue
            for k in range(1, m + 1):
                for l in range(1, lam[k - 1] + 1):
                    key, op = hc_partial_product(F, G, lam, k, l, lam_g)
                    if op is None or op.is_zero():
                        continue
                    # fold into the canonical frame: every term is read as an
                    # invariant map, so a term landing at a rotated frame
                    # contributes its conjugate to the canonical component
                    ckey = canonical_key(key)
                    c = key_rotations_to_canonical(key)
                    cur, lam_cur = op, key
                    for _ in range(c):
                        cur = _hc_conjugate(cur, lam_cur)
                        lam_cur = lam_cur[1:] + lam_cur[:1]
                    assert lam_cur == ckey
                    acc[ckey] = acc[ckey] + cur if ckey in acc else cur
    return HcElement(F.space, deg, {k: v for k, v in acc.items()
                                    if not v.is_zero()})


def _all_rotations(keys):
    out = set()
    for key in keys:
        m = len(key)
        for c in range(m):
            out.add(key[c:] + key[:c])
    return sorted(out)


def hc_bracket(F: HcElement, G: HcElement, max_arity: int = 8) -> HcElement:
    sign = -1 if (F.degree * G.degree) % 2 else 1
    return hc_product(F, G, max_arity) - hc_product(G, F, max_arity).scale(sign)


# ---------------------------------------------------------------------------
# the comparison isomorphism with the convolution algebra


def upsilon(F: ConvolutionElement) -> HcElement:
    """Componentwise sign-twisted identification of convolution elements with
    higher cyclic elements."""
    comps = {}
    for key, op in F.comps.items():
        comps[key] = _upsilon_component(F.space, F.degree, key, op, forward=True)
    return HcElement(F.space, F.degree,
                     {k: v for k, v in comps.items() if not v.is_zero()})


def upsilon_inverse(F: HcElement) -> ConvolutionElement:
    comps = {}
    for key, op in F.comps.items():
        comps[key] = _upsilon_component(F.space, F.degree, key, op, forward=False)
    return ConvolutionElement(F.space, F.degree,
                              {k: v for k, v in comps.items()
                               if not v.is_zero()})


def _upsilon_component(space, degree, key, op, forward: bool):
    sa = space.suspend()
    n, m = sum(key), len(key)
    lam_m = key[-1] if key else 0
    if forward:
        out = Operation((sa,) * n, (space,) * m, degree - 1)
    else:
        out = Operation((space,) * n, (space,) * m, degree + n - 1)
    for (ti, to), c in op.entries.items():
        degs = space.degrees(ti)  # degrees of the unsuspended inputs
        sign = upsilon_sign(degree, degs, lam_m)
        out.add_entry(ti, to, sign * c)
    return out


# ---------------------------------------------------------------------------
# necklace elements


A_LETTER = "a"
F_LETTER = "f"


def letter_degree(space: GradedSpace, letter) -> int:
    kind, idx = letter
    if kind == A_LETTER:
        return space.degree(idx)
    return -(space.degree(idx) + 1)  # dual of the suspended basis element


def word_degree(space: GradedSpace, word) -> int:
    return 1 + sum(letter_degree(space, x) for x in word)


def word_key(word):
    """Partition key of a necklace word starting with a plain letter."""
    assert word and word[0][0] == A_LETTER, "words start with a plain letter"
    lambdas = []
    cur = None
    for kind, _ in word:
        if kind == A_LETTER:
            if cur is not None:
                lambdas.append(cur)
            cur = 0
        else:
            assert cur is not None
            cur += 1
    lambdas.append(cur)
    return tuple(lambdas)


@dataclass
class NecklaceElement:
    """Finite rational combination of necklace words.

    A word is a tuple of letters ("a", i) -- a basis element -- or
    ("f", i) -- the dual of the suspended basis element; words start with a
    plain letter and alternate in blocks (a, f-block, a, f-block, ...).
    """

    space: GradedSpace
    degree: int
    words: dict = field(default_factory=dict)

    def __post_init__(self):
        for word, c in self.words.items():
            assert c != 0
            word_key(word)
            assert word_degree(self.space, word) == self.degree, \
                f"word {word} has degree {word_degree(self.space, word)}"

    def add(self, word, c):
        word = tuple(word)
        c = Fraction(c)
        if c == 0:
            return
        new = self.words.get(word, Fraction(0)) + c
        if new == 0:
            self.words.pop(word, None)
        else:
            self.words[word] = new

    def is_zero(self):
        return not self.words

    def __add__(self, other):
        assert self.space == other.space and self.degree == other.degree
        out = NecklaceElement(self.space, self.degree, dict(self.words))
        for w, c in other.words.items():
            out.add(w, c)
        return out

    def scale(self, c):
        c = Fraction(c)
        return NecklaceElement(self.space, self.degree,
                               {} if c == 0 else
                               {w: v * c for w, v in self.words.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        if not isinstance(other, NecklaceElement):
            return NotImplemented
        return self.space == other.space and self.degree == other.degree \
            and (self - other).is_zero()


def rotate_word(space, word, steps=1):
    """Rotate the (a, f-block) chunks; returns (word', koszul sign)."""
    chunks = []
    cur = []
    for letter in word:
        if letter[0] == A_LETTER and cur:
            chunks.append(cur)
            cur = [letter]
        else:
            cur.append(letter)
    chunks.append(cur)
    m = len(chunks)
    steps %= m
    if steps == 0:
        return tuple(word), 1
    moved = chunks[:steps]
    rest = chunks[steps:]
    d_moved = sum(letter_degree(space, x) for ch in moved for x in ch)
    d_rest = sum(letter_degree(space, x) for ch in rest for x in ch)
    sign = -1 if (d_moved * d_rest) % 2 else 1
    out = [x for ch in rest for x in ch] + [x for ch in moved for x in ch]
    return tuple(out), sign


def symmetrize_necklace(space, degree, raw_words) -> NecklaceElement:
    """Average over the chunk rotations: the invariant element with the given
    representative words."""
    out = NecklaceElement(space, degree, {})
    for word, c in raw_words.items():
        word = tuple(word)
        m = len(word_key(word))
        for steps in range(m):
            w2, sign = rotate_word(space, word, steps)
            out.add(w2, Fraction(c, m) * sign)
    return out


def _letter_pairing(space, x, y):
    """<x, y> for letters: nonzero when one is the dual of the other's
    suspension; graded symmetric."""
    if x[0] == F_LETTER and y[0] == A_LETTER:
        return Fraction(1) if x[1] == y[1] else Fraction(0)
    if x[0] == A_LETTER and y[0] == F_LETTER:
        if x[1] != y[1]:
            return Fraction(0)
        sign = -1 if (letter_degree(space, x) * letter_degree(space, y)) % 2 else 1
        return Fraction(sign)
    return Fraction(0)


def necklace_product(X: NecklaceElement, Y: NecklaceElement) -> NecklaceElement:
    """The half-bracket: the terms of the necklace bracket where a dual
    letter of X eats a plain letter of Y."""
    assert X.space == Y.space
    sp = X.space
    out = NecklaceElement(sp, X.degree + Y.degree, {})
    for wx, cx in X.words.items():
        da = [letter_degree(sp, x) for x in wx]
        for wy, cy in Y.words.items():
            db = [letter_degree(sp, y) for y in wy]
            dbtot = sum(db)
            datot = sum(da)
            # first sum: pair x_i (dual, from X) against y_1 (plain, from Y)
            for i, x in enumerate(wx):
                if x[0] != F_LETTER or wy[0][0] != A_LETTER:
                    continue
                pair = _letter_pairing(sp, x, wy[0])
                if pair == 0:
                    continue
                exp = sum(da[:i]) + dbtot * sum(da[i + 1:])
                sign = -1 if exp % 2 else 1
                word = wx[:i] + wy[1:] + wx[i + 1:]
                out.add(word, sign * pair * cx * cy)
            # second sum: pair y_j (plain, from Y) against x_1 -- only when
            # x_1 is dual, which cannot happen for block words (they start
            # with a plain letter), so this sum contributes nothing here;
            # the companion term lives in Y * X.
    return out


def necklace_bracket(X: NecklaceElement, Y: NecklaceElement) -> NecklaceElement:
    sign = -1 if (X.degree * Y.degree) % 2 else 1
    return necklace_product(X, Y) - necklace_product(Y, X).scale(sign)


def psi(X: NecklaceElement) -> HcElement:
    """Hom-space avatar of a necklace element: outputs are the plain letters,
    the dual letters (blocks reversed) contract the suspended inputs."""
    sp = X.space
    sa = sp.suspend()
    comps = {}
    for word, c in X.words.items():
        key = word_key(word)
        n, m = sum(key), len(key)
        a_idx = [x[1] for x in word if x[0] == A_LETTER]
        blocks = []
        cur = []
        for x in word:
            if x[0] == A_LETTER:
                blocks.append(cur)
                cur = []
            else:
                cur.append(x[1])
        blocks.append(cur)
        f_blocks = blocks[1:]  # f-block j follows a_j
        a_degs = [sp.degree(i) for i in a_idx]
        f_degs = [sum(-(sp.degree(i) + 1) for i in blk) for blk in f_blocks]
        zsign = zeta_sign(f_degs, a_degs)
        op = comps.get(key)
        if op is None:
            op = Operation((sa,) * n, (sp,) * m, X.degree - 1)
            comps[key] = op
        in_tuple = tuple(i for blk in f_blocks for i in blk)
        extra = _dual_evaluation_sign(sp, f_blocks)
        op.add_entry(in_tuple, tuple(a_idx), Fraction(zsign * extra) * c)
    return HcElement(sp, X.degree,
                     {k: v for k, v in comps.items() if not v.is_zero()})


def _dual_evaluation_sign(space, f_blocks) -> int:
    """Koszul sign of evaluating the reversed dual word f_m (x) .. (x) f_1 on
    the input word block_1 (x) .. (x) block_m.

    The combined word (duals then arguments) is rearranged so every dual
    letter sits directly left of its argument, pairs ordered by argument
    position; each adjacent contraction is then sign-free.
    """
    m = len(f_blocks)
    duals = []   # (argument position, degree) in the reversed-block order
    pos = 0
    arg_pos_of_block = []
    for blk in f_blocks:
        arg_pos_of_block.append(pos)
        pos += len(blk)
    n = pos
    for j in range(m - 1, -1, -1):
        for t, i in enumerate(f_blocks[j]):
            duals.append((arg_pos_of_block[j] + t, -(space.degree(i) + 1)))
    arg_degs = []
    for blk in f_blocks:
        for i in blk:
            arg_degs.append(space.degree(i) + 1)
    # combined word: duals (positions 0..n-1), arguments (positions n..2n-1)
    # target: pair t occupies slots (2t, 2t+1) = (dual for argument t, arg t)
    sigma = [0] * (2 * n)
    degs = [0] * (2 * n)
    for d_idx, (argpos, fdeg) in enumerate(duals):
        sigma[d_idx] = 2 * argpos
        degs[d_idx] = fdeg
    for t in range(n):
        sigma[n + t] = 2 * t + 1
        degs[n + t] = arg_degs[t]
    return koszul_sign(tuple(sigma), tuple(degs))
