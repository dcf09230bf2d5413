"""Graded vector spaces over exact rationals and sparse multilinear operations.

Everything downstream (roundabout combinatorics, structure equations, homotopy
transfer) reduces to the primitives in this module: Koszul signs, sparse
rational tensors, partial composites, graded permutation actions.

Conventions
-----------
* homological grading, differentials have degree -1;
* a permutation ``sigma`` of ``{0..k-1}`` acts on a tensor word by *moving the
  factor at position i to position sigma[i]*;
* the Koszul sign of that move is the product of ``(-1)^{|x_i||x_j|}`` over
  the pairs ``i < j`` that get inverted;
* ``f o_i^j g`` places ``g`` on top of ``f``: input ``i`` of ``f`` receives
  output ``j`` of ``g``; composite inputs read
  ``(f_1..f_{i-1}, g_1..g_{n'}, f_{i+1}..f_n)`` and composite outputs
  ``(g_1..g_{j-1}, f_1..f_m, g_{j+1}..g_{m'})``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct

Scalar = Fraction


def rat(p, q=1) -> Fraction:
    """Exact rational scalar; accepts ints or 'p/q' strings."""
    if isinstance(p, str):
        return Fraction(p)
    return Fraction(p, q)


# ---------------------------------------------------------------------------
# permutations


def check_permutation(sigma):
    assert sorted(sigma) == list(range(len(sigma))), f"not a permutation: {sigma}"


def perm_compose(sigma, tau):
    """First tau, then sigma (as moves): position i ends at sigma[tau[i]]."""
    assert len(sigma) == len(tau)
    return tuple(sigma[tau[i]] for i in range(len(tau)))


def perm_inverse(sigma):
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma):
        inv[s] = i
    return tuple(inv)


def perm_parity_sign(sigma) -> int:
    sign = 1
    n = len(sigma)
    for i in range(n):
        for j in range(i + 1, n):
            if sigma[i] > sigma[j]:
                sign = -sign
    return sign


def koszul_sign(sigma, degrees) -> int:
    """Sign picked up when homogeneous factors of the given degrees are
    rearranged by ``sigma`` (position i moves to position sigma[i])."""
    assert len(sigma) == len(degrees), "length mismatch"
    check_permutation(sigma)
    sign = 1
    n = len(sigma)
    for i in range(n):
        for j in range(i + 1, n):
            if sigma[i] > sigma[j] and (degrees[i] % 2) and (degrees[j] % 2):
                sign = -sign
    return sign


def permute_tuple(sigma, items):
    """Rearranged word: the item at position i lands at position sigma[i]."""
    out = [None] * len(items)
    for i, x in enumerate(items):
        out[sigma[i]] = x
    return tuple(out)


def block_cyclic_permutation(lambdas, steps: int = 1):
    """The permutation of {0..n-1} rotating blocks of sizes lambdas by
    ``steps`` places: one step sends (B1, B2, .., Bm) to (B2, .., Bm, B1),
    entries keeping their order inside each block."""
    assert all(l >= 0 for l in lambdas)
    m = len(lambdas)
    n = sum(lambdas)
    if m == 0:
        return ()
    starts = [0]
    for l in lambdas[:-1]:
        starts.append(starts[-1] + l)
    rot = [(i + steps) % m for i in range(m)]
    order = sorted(range(m), key=lambda i: rot[i])
    tstart = {}
    off = 0
    for i in order:
        tstart[i] = off
        off += lambdas[i]
    sigma = [0] * n
    for b in range(m):
        for k in range(lambdas[b]):
            sigma[starts[b] + k] = tstart[b] + k
    check_permutation(sigma)
    return tuple(sigma)


def rotation_perm(k: int, steps: int = 1):
    """Cyclic rotation of k slots: position i moves to (i + steps) mod k."""
    return tuple((i + steps) % k for i in range(k))


# ---------------------------------------------------------------------------
# graded spaces


@dataclass(frozen=True)
class GradedSpace:
    """Finite dimensional graded vector space with a chosen homogeneous basis.

    ``basis`` is a tuple of (name, degree); the optional ``filtration`` maps
    basis names to non-negative levels (the twisting procedure requires a
    complete-nilpotent filtration, which finite level data always is).
    """

    basis: tuple
    filtration: tuple | None = None  # tuple of levels aligned with basis

    def __post_init__(self):
        names = [b[0] for b in self.basis]
        assert len(set(names)) == len(names), "basis names must be unique"
        if self.filtration is not None:
            assert len(self.filtration) == len(self.basis)
            assert all(v >= 0 for v in self.filtration)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def degree(self, i: int) -> int:
        return self.basis[i][1]

    def name(self, i: int) -> str:
        return self.basis[i][0]

    def index(self, name: str) -> int:
        for i, (nm, _) in enumerate(self.basis):
            if nm == name:
                return i
        raise KeyError(name)

    def degrees(self, idx_tuple) -> tuple:
        return tuple(self.degree(i) for i in idx_tuple)

    def total_degree(self, idx_tuple) -> int:
        return sum(self.degree(i) for i in idx_tuple)

    def level(self, i: int) -> int:
        assert self.filtration is not None, "no filtration declared"
        return self.filtration[i]

    def nilpotency_bound(self) -> int:
        """Smallest N with no basis element at filtration level >= N."""
        assert self.filtration is not None, "no filtration declared"
        return max(self.filtration) + 1

    def suspend(self) -> "GradedSpace":
        """sA: same names decorated, all degrees shifted by +1."""
        return GradedSpace(tuple((f"s({nm})", d + 1) for nm, d in self.basis))

    def indices_of_degree(self, d: int):
        return [i for i in range(self.dim) if self.degree(i) == d]


def space(*pairs, filtration=None) -> GradedSpace:
    return GradedSpace(tuple(pairs), filtration)


# ---------------------------------------------------------------------------
# sparse operations (slot-typed: each leg carries its own space)


@dataclass
class Operation:
    """Homogeneous multilinear map between tensor words of graded spaces,
    stored as a sparse rational tensor.

    ``sources``/``targets`` give the space of every input/output slot (all
    equal in the common one-space case).  ``entries`` maps
    (in_tuple, out_tuple) of basis indices to nonzero rationals; every entry
    satisfies deg(out word) - deg(in word) = degree.
    """

    sources: tuple
    targets: tuple
    degree: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        self.sources = tuple(self.sources)
        self.targets = tuple(self.targets)
        assert len(self.targets) >= 1
        for (ti, to), c in list(self.entries.items()):
            self._check_entry(ti, to, c)

    # -- shape ------------------------------------------------------------

    @property
    def n_inputs(self) -> int:
        return len(self.sources)

    @property
    def m_outputs(self) -> int:
        return len(self.targets)

    def in_degrees(self, ti):
        return tuple(self.sources[k].degree(ti[k]) for k in range(len(ti)))

    def out_degrees(self, to):
        return tuple(self.targets[k].degree(to[k]) for k in range(len(to)))

    def _check_entry(self, ti, to, c):
        assert len(ti) == self.n_inputs and len(to) == self.m_outputs
        assert c != 0
        din = sum(self.in_degrees(ti))
        dout = sum(self.out_degrees(to))
        assert dout - din == self.degree, (
            f"degree mismatch: out {dout} - in {din} != {self.degree} at {(ti, to)}"
        )

    def same_shape(self, other) -> bool:
        return (self.sources == other.sources and self.targets == other.targets
                and self.degree == other.degree)

    # -- algebra ------------------------------------------------------------

    def copy(self):
        return Operation(self.sources, self.targets, self.degree, dict(self.entries))

    def add_entry(self, ti, to, c):
        c = Fraction(c)
        if c == 0:
            return
        ti, to = tuple(ti), tuple(to)
        self._check_entry(ti, to, c)
        new = self.entries.get((ti, to), Fraction(0)) + c
        if new == 0:
            self.entries.pop((ti, to), None)
        else:
            self.entries[(ti, to)] = new

    def is_zero(self) -> bool:
        return not self.entries

    def support_size(self) -> int:
        return len(self.entries)

    def __add__(self, other):
        assert self.same_shape(other), "shape mismatch in +"
        out = self.copy()
        for (ti, to), c in other.entries.items():
            out.add_entry(ti, to, c)
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Fraction(c)
        if c == 0:
            return Operation(self.sources, self.targets, self.degree, {})
        return Operation(self.sources, self.targets, self.degree,
                         {k: v * c for k, v in self.entries.items()})

    def __eq__(self, other):
        if not isinstance(other, Operation):
            return NotImplemented
        return self.same_shape(other) and self.entries == other.entries

    def apply(self, in_tuple):
        """Value on a basis tensor: dict out_tuple -> coefficient."""
        in_tuple = tuple(in_tuple)
        out = {}
        for (ti, to), c in self.entries.items():
            if ti == in_tuple:
                out[to] = out.get(to, Fraction(0)) + c
        return out


def op_homog(src: GradedSpace, tgt: GradedSpace, n: int, m: int, degree: int,
             entries=None) -> Operation:
    return Operation((src,) * n, (tgt,) * m, degree, dict(entries or {}))


def zero_like(f: Operation) -> Operation:
    return Operation(f.sources, f.targets, f.degree, {})


def identity_operation(sp: GradedSpace) -> Operation:
    op = op_homog(sp, sp, 1, 1, 0)
    for i in range(sp.dim):
        op.add_entry((i,), (i,), 1)
    return op


def suspension_map(sp: GradedSpace) -> Operation:
    """s : A -> sA, degree +1, identity on names."""
    op = Operation((sp,), (sp.suspend(),), 1)
    for i in range(sp.dim):
        op.add_entry((i,), (i,), 1)
    return op


def desuspension_map(sp: GradedSpace) -> Operation:
    """s^{-1} : sA -> A, degree -1."""
    op = Operation((sp.suspend(),), (sp,), -1)
    for i in range(sp.dim):
        op.add_entry((i,), (i,), 1)
    return op


# ---------------------------------------------------------------------------
# graded permutation actions


@dataclass(frozen=True)
class GradedPermutationAction:
    permutation: tuple
    side: str  # "input" | "output"

    def __post_init__(self):
        check_permutation(self.permutation)
        assert self.side in ("input", "output")


def permute_operation(f: Operation, action: GradedPermutationAction) -> Operation:
    """Relabel input or output slots with entrywise Koszul signs.

    The slot at position i moves to position sigma[i]; each entry picks up the
    Koszul sign of rearranging the degrees of the basis word sitting there.
    """
    sigma = action.permutation
    if action.side == "input":
        assert len(sigma) == f.n_inputs, "arity mismatch"
        out = Operation(permute_tuple(sigma, f.sources), f.targets, f.degree)
        for (ti, to), c in f.entries.items():
            sign = koszul_sign(sigma, f.in_degrees(ti))
            out.add_entry(permute_tuple(sigma, ti), to, sign * c)
    else:
        assert len(sigma) == f.m_outputs, "arity mismatch"
        out = Operation(f.sources, permute_tuple(sigma, f.targets), f.degree)
        for (ti, to), c in f.entries.items():
            sign = koszul_sign(sigma, f.out_degrees(to))
            out.add_entry(ti, permute_tuple(sigma, to), sign * c)
    return out


def permute_inputs(f: Operation, sigma) -> Operation:
    return permute_operation(f, GradedPermutationAction(tuple(sigma), "input"))


def permute_outputs(f: Operation, sigma) -> Operation:
    return permute_operation(f, GradedPermutationAction(tuple(sigma), "output"))


# ---------------------------------------------------------------------------
# composites


def compose_partial(f: Operation, g: Operation, i: int, j: int = 1) -> Operation:
    """The partial composite f o_i^j g (g on top, slots 1-based).

    Koszul bookkeeping, entrywise on basis words: g slides past the f-inputs
    left of slot i; the g-outputs flanking j slide past the f-inputs they
    cross; f slides past the g-outputs left of j.
    """
    assert 1 <= i <= f.n_inputs, "input index out of range"
    assert 1 <= j <= g.m_outputs, "output index out of range"
    assert g.targets[j - 1] == f.sources[i - 1], "grafted slot spaces differ"
    res = Operation(f.sources[:i - 1] + g.sources + f.sources[i:],
                    g.targets[:j - 1] + f.targets + g.targets[j:],
                    f.degree + g.degree)
    by_out = {}
    for (ti_g, to_g), cg in g.entries.items():
        by_out.setdefault(to_g[j - 1], []).append((ti_g, to_g, cg))
    for (ti_f, to_f), cf in f.entries.items():
        mid = ti_f[i - 1]
        hits = by_out.get(mid)
        if not hits:
            continue
        din_f = f.in_degrees(ti_f)
        d_apre = sum(din_f[:i - 1])
        d_apost = sum(din_f[i:])
        for ti_g, to_g, cg in hits:
            dout_g = g.out_degrees(to_g)
            d_cpre = sum(dout_g[:j - 1])
            d_cpost = sum(dout_g[j:])
            exp = (g.degree * d_apre + d_cpre * d_apre + d_cpost * d_apost
                   + f.degree * d_cpre)
            sign = -1 if exp % 2 else 1
            res.add_entry(ti_f[:i - 1] + ti_g + ti_f[i:],
                          to_g[:j - 1] + to_f + to_g[j:],
                          sign * cf * cg)
    return res


def compose_simple(f: Operation, g: Operation) -> Operation:
    """Plain composite f o g when g's outputs exactly fill f's inputs."""
    assert f.n_inputs == g.m_outputs and f.sources == g.targets
    res = Operation(g.sources, f.targets, f.degree + g.degree)
    by_out = {}
    for (ti_g, to_g), cg in g.entries.items():
        by_out.setdefault(to_g, []).append((ti_g, cg))
    for (ti_f, to_f), cf in f.entries.items():
        for ti_g, cg in by_out.get(ti_f, ()):
            res.add_entry(ti_g, to_f, cf * cg)
    return res


def tensor_operations(f: Operation, g: Operation) -> Operation:
    """f (x) g with the Koszul convention: entry sign (-1)^{|g| deg(f-in word)}."""
    res = Operation(f.sources + g.sources, f.targets + g.targets,
                    f.degree + g.degree)
    for (ti_f, to_f), cf in f.entries.items():
        d_a = sum(f.in_degrees(ti_f))
        sign = -1 if (g.degree * d_a) % 2 else 1
        for (ti_g, to_g), cg in g.entries.items():
            res.add_entry(ti_f + ti_g, to_f + to_g, sign * cf * cg)
    return res


def tensor_differential(d: Operation, k: int) -> Operation:
    """Differential induced on the k-th tensor power of d's space."""
    assert d.n_inputs == 1 and d.m_outputs == 1 and d.degree == -1
    assert d.sources[0] == d.targets[0]
    sp = d.sources[0]
    out = op_homog(sp, sp, k, k, -1)
    for pos in range(k):
        for (ti, to), c in d.entries.items():
            src, tgt = ti[0], to[0]
            for rest in iproduct(range(sp.dim), repeat=k - 1):
                word = rest[:pos] + (src,) + rest[pos:]
                pre_deg = sp.total_degree(word[:pos])
                sign = -1 if pre_deg % 2 else 1
                out.add_entry(word, word[:pos] + (tgt,) + word[pos + 1:], sign * c)
    return out


def hom_differential(f: Operation, d_source: Operation,
                     d_target: Operation) -> Operation:
    """d(f) = d o f - (-1)^{|f|} f o d on Hom(source word, target word)."""
    assert all(s == d_source.sources[0] for s in f.sources)
    assert all(t == d_target.sources[0] for t in f.targets)
    dm = tensor_differential(d_target, f.m_outputs)
    dn = tensor_differential(d_source, f.n_inputs)
    left = compose_simple(dm, f)
    right = compose_simple(f, dn)
    sign = -1 if f.degree % 2 else 1
    return left - right.scale(sign)


def random_operation(rng, src: GradedSpace, tgt: GradedSpace, n: int, m: int,
                     degree: int, fill=3) -> Operation:
    """Seeded random sparse operation with small integer entries."""
    op = op_homog(src, tgt, n, m, degree)
    ins = list(iproduct(range(src.dim), repeat=n))
    outs = list(iproduct(range(tgt.dim), repeat=m))
    cand = [(ti, to) for ti in ins for to in outs
            if tgt.total_degree(to) - src.total_degree(ti) == degree]
    rng.shuffle(cand)
    for ti, to in cand[:fill]:
        c = rng.choice([-2, -1, 1, 2])
        op.add_entry(ti, to, c)
    return op
