"""Structures (partition-indexed operation families), the convolution
product, differentials, and structure-equation residuals.

A structure is a Maurer-Cartan element of the convolution Lie-admissible
algebra: a family of operations indexed by ordered partitions, cyclically
skew-symmetric, satisfying the structure equations.  Only canonical orbit
representatives are stored; rotations are materialized on demand, so skew
symmetry violations are unrepresentable.

All decomposition signs are taken from the mechanical stairway oracle (the
printed closed forms are exposed in :mod:`precy.signs` and compared against
the oracle by the verification suites).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .graded import (
    GradedSpace, Operation, block_cyclic_permutation, compose_partial,
    hom_differential, koszul_sign, op_homog, perm_inverse, permute_inputs,
    permute_outputs, rotation_perm,
)
from .roundabout import (
    ElementaryCutting, Roundabout, canonical_key, cyclic_sign_noncurved,
    enumerate_elementary_cuttings, is_valid_structure_key,
    key_rotations_to_canonical, standard_roundabout,
)
from .stairway import dual_sign_oracle

_COEF_CACHE: dict = {}


def delta_coefficient(cut: ElementaryCutting) -> int:
    """Coefficient of (bottom, top) in the infinitesimal decomposition of the
    cutting's key, from the stairway oracle (cached by index data)."""
    key = (cut.roundabout.flavor, cut.roundabout.lambdas, cut.k,
           cut.sigma_shift, cut.p, cut.q)
    if key not in _COEF_CACHE:
        _COEF_CACHE[key] = dual_sign_oracle(cut)
    return _COEF_CACHE[key]


def equation_coefficient(cut: ElementaryCutting) -> int:
    """Sign with which the composed pair enters the structure equations:
    the decomposition coefficient times (-1)^{n_bottom} (one Koszul pass of
    the degree -1 element over the bottom basis element, and the overall
    minus from the Maurer-Cartan equation)."""
    s = delta_coefficient(cut)
    return -s if cut.bottom.n % 2 else s


def element_rotation_sign(lambdas) -> int:
    """One-step rotation sign of the dual basis used by every equivariance
    materialization (the non-curved printed relation, which the appendix
    equivariance computation uses for the curved codioperad as well)."""
    if len(lambdas) <= 1:
        return 1
    return cyclic_sign_noncurved(lambdas)


def conjugated_operation(op: Operation, lambdas) -> Operation:
    """tau_m^{-1} . op . tau_{lambda}: rotate the output slots one step back
    and the input slots one block step, with entrywise Koszul signs."""
    m = len(lambdas)
    out = permute_inputs(op, block_cyclic_permutation(lambdas, 1))
    out = permute_outputs(out, rotation_perm(m, -1))
    return out


def materialize_at_rotation(op: Operation, lambdas, steps: int) -> Operation:
    """Operation at the key rotated by ``steps`` from ``lambdas`` given the
    operation at ``lambdas``: iterate the skew-symmetry relation."""
    cur = op
    lam = tuple(lambdas)
    for _ in range(steps % max(len(lam), 1)):
        sign = element_rotation_sign(lam)
        cur = conjugated_operation(cur, lam).scale(sign)
        lam = lam[1:] + lam[:1]
    return cur


@dataclass
class Structure:
    """A homotopy double Poisson / pre-Calabi-Yau structure.

    ``ops`` maps canonical partition keys to operations of degree n - 2;
    for the hdpois and pcy flavors the differential (degree -1, squaring to
    zero) is separate data; for the curved flavor the unary key lives inside
    ``ops`` and there is no ambient differential.
    """

    space: GradedSpace
    flavor: str
    ops: dict = field(default_factory=dict)
    differential: Operation | None = None

    def __post_init__(self):
        assert self.flavor in ("hdpois", "pcy", "curved")
        if self.flavor == "curved":
            assert self.differential is None, \
                "curved structures keep the unary operation inside ops"
        for key, op in self.ops.items():
            self._check_key(key, op)
        if self.differential is not None:
            d = self.differential
            assert d.n_inputs == 1 and d.m_outputs == 1 and d.degree == -1
            from .graded import compose_simple
            assert compose_simple(d, d).is_zero(), "differential must square to zero"

    def _check_key(self, key, op):
        assert key == canonical_key(key), f"non-canonical key {key}"
        assert is_valid_structure_key(self.flavor, key), \
            f"invalid {self.flavor} key {key}"
        n, m = sum(key), len(key)
        assert op.n_inputs == n and op.m_outputs == m
        assert op.degree == n - 2, f"operation at {key} must have degree n-2"

    def component(self, lambdas) -> Operation:
        """Operation at an arbitrary (possibly non-canonical) key."""
        lambdas = tuple(lambdas)
        ckey = canonical_key(lambdas)
        n, m = sum(lambdas), len(lambdas)
        base = self.ops.get(ckey)
        if base is None:
            return op_homog(self.space, self.space, n, m, n - 2)
        c = key_rotations_to_canonical(lambdas)
        # lambdas rotated by c gives the canonical key; materialize forward
        # from the canonical representative by m - c further steps
        steps = (m - c) % m
        return materialize_at_rotation(base, ckey, steps)

    def full_differential(self) -> Operation | None:
        if self.flavor == "curved":
            op = self.ops.get((1,))
            return op
        return self.differential

    def keys_up_to(self, max_arity):
        """Canonical keys with n <= max_arity and m <= max_arity."""
        return structure_keys(self.flavor, max_arity)


def structure_keys(flavor, max_arity, max_outputs=None):
    out = []
    lo = 1 if flavor == "hdpois" else 0
    n_min = 1 if flavor == "hdpois" else 0
    max_outputs = max_outputs if max_outputs is not None else max_arity
    for n in range(n_min, max_arity + 1):
        for m in range(1, (min(n, max_outputs) if flavor == "hdpois"
                           else max_outputs) + 1):
            for key in _ordered_partitions(n, m, lo):
                if key != canonical_key(key):
                    continue
                if is_valid_structure_key(flavor, key):
                    out.append(key)
    return out


def _ordered_partitions(n, m, lo):
    if m == 0:
        if n == 0:
            yield ()
        return
    for first in range(lo, n + 1):
        for rest in _ordered_partitions(n - first, m - 1, lo):
            yield (first,) + rest


def symmetrize_structure(space, flavor, raw_ops, differential=None) -> Structure:
    """Build a structure from raw operations on arbitrary keys: each raw key
    is rotated to canonical form (with the relation sign) and keys whose
    cyclic stabilizer forces a projection get averaged; components killed by
    a self-rotation sign of -1 are zeroed with a warning."""
    canon_ops = {}
    for key, op in raw_ops.items():
        key = tuple(key)
        c = key_rotations_to_canonical(key)
        ckey = canonical_key(key)
        moved = materialize_at_rotation(op, key, c)
        if ckey in canon_ops:
            canon_ops[ckey] = canon_ops[ckey] + moved
        else:
            canon_ops[ckey] = moved
    out = {}
    for key, op in canon_ops.items():
        m = len(key)
        stab = [c for c in range(1, m) if key[c:] + key[:c] == key]
        if stab:
            period = min(stab)
            proj, cur, count = op.copy(), op, 1
            for _ in range(m // period - 1):
                cur = materialize_at_rotation(cur, key, period)
                proj = proj + cur
                count += 1
            proj = proj.scale(Fraction(1, count))
            check = materialize_at_rotation(proj, key, period)
            if not (check - proj).is_zero():
                warnings.warn(f"self-rotation forces the component at {key} to vanish")
                proj = op_homog(space, space, sum(key), m, sum(key) - 2)
            op = proj
        if not op.is_zero():
            out[key] = op
    return Structure(space, flavor, out, differential)


# ---------------------------------------------------------------------------
# composing cutting terms


def arrange_by_labels(op: Operation, in_labels, out_labels) -> Operation:
    """Permute slots so labels come in increasing order (Koszul signs)."""
    sigma_in = _sort_permutation(in_labels)
    sigma_out = _sort_permutation(out_labels)
    out = permute_inputs(op, sigma_in)
    out = permute_outputs(out, sigma_out)
    return out


def _sort_permutation(labels):
    order = sorted(range(len(labels)), key=lambda i: labels[i])
    # order[j] = position in the current tuple of the j-th smallest label;
    # we need sigma with sigma[current_pos] = target_pos
    sigma = [0] * len(labels)
    for target, cur in enumerate(order):
        sigma[cur] = target
    return tuple(sigma)


def composed_cutting(fb: Operation, gt: Operation,
                     cut: ElementaryCutting) -> Operation:
    """Graft ``gt`` on top of ``fb`` along the cutting and rearrange the
    slots back to the original label order (Koszul signs throughout)."""
    comp = compose_partial(fb, gt, cut.graft_input, 1)
    in_labels = (list(cut.bottom.flat_inputs()[:cut.graft_input - 1])
                 + list(cut.top.flat_inputs())
                 + list(cut.bottom.flat_inputs()[cut.graft_input:]))
    out_labels = list(cut.bottom.output_labels) + \
        [x for x in cut.top.output_labels if x != ("cut", 0)]
    return arrange_by_labels(comp, in_labels, out_labels)


def cutting_term(s: Structure, cut: ElementaryCutting) -> Operation:
    """The composed, label-arranged operation of one elementary cutting,
    with the equation coefficient included."""
    n, m = cut.roundabout.n, cut.roundabout.m
    mb = s.component(cut.bottom.lambdas)
    mt = s.component(cut.top.lambdas)
    if mb.is_zero() or mt.is_zero():
        return op_homog(s.space, s.space, n, m, n - 3)
    arranged = composed_cutting(mb, mt, cut)
    return arranged.scale(equation_coefficient(cut))


def mc_residual(s: Structure, max_arity: int = 4) -> dict:
    """Structure-equation residuals per canonical key with n <= max_arity.

    For hdpois/pcy: d(M_key) - sum of cutting terms; for curved: the plain
    sum of cutting terms (the unary operation is part of the family).  The
    structure is valid iff every residual vanishes.
    """
    assert max_arity >= 2, "arity bound must be at least 2"
    res = {}
    d = s.differential
    for key in s.keys_up_to(max_arity):
        n, m = sum(key), len(key)
        acc = op_homog(s.space, s.space, n, m, n - 3)
        r = standard_roundabout(key, s.flavor)
        for cut in enumerate_elementary_cuttings(r):
            acc = acc - cutting_term(s, cut)
        if s.flavor != "curved" and d is not None:
            mk = s.component(key)
            if not mk.is_zero():
                acc = hom_differential(mk, d, d) + acc
        if not acc.is_zero():
            res[key] = acc
    return res


def is_valid_structure(s: Structure, max_arity: int = 4) -> bool:
    return not mc_residual(s, max_arity)


# ---------------------------------------------------------------------------
# convolution elements and the star product


@dataclass
class ConvolutionElement:
    """Equivariant family of operations indexed by partition keys: a degree-d
    element of the convolution Lie-admissible algebra.  Component at a key
    with n inputs has operation degree d + n - 1."""

    space: GradedSpace
    degree: int
    comps: dict = field(default_factory=dict)

    def __post_init__(self):
        for key, op in self.comps.items():
            assert key == canonical_key(key), f"non-canonical key {key}"
            n, m = sum(key), len(key)
            assert all(l >= 0 for l in key) and m >= 1
            assert op.n_inputs == n and op.m_outputs == m
            assert op.degree == self.degree + n - 1, \
                f"component at {key}: degree {op.degree} != {self.degree + n - 1}"

    def component(self, lambdas) -> Operation:
        lambdas = tuple(lambdas)
        ckey = canonical_key(lambdas)
        n, m = sum(lambdas), len(lambdas)
        base = self.comps.get(ckey)
        if base is None:
            return op_homog(self.space, self.space, n, m,
                            self.degree + n - 1)
        c = key_rotations_to_canonical(lambdas)
        return materialize_at_rotation(base, ckey, (m - c) % m)

    def is_zero(self):
        return all(op.is_zero() for op in self.comps.values())

    def __add__(self, other):
        assert self.space == other.space and self.degree == other.degree
        comps = dict(self.comps)
        for key, op in other.comps.items():
            comps[key] = comps[key] + op if key in comps else op
        comps = {k: v for k, v in comps.items() if not v.is_zero()}
        return ConvolutionElement(self.space, self.degree, comps)

    def scale(self, c):
        return ConvolutionElement(self.space, self.degree,
                                  {k: v.scale(c) for k, v in self.comps.items()
                                   if c != 0 and not v.is_zero()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        if not isinstance(other, ConvolutionElement):
            return NotImplemented
        if self.space != other.space or self.degree != other.degree:
            return False
        return (self - other).is_zero()


def symmetrize_element(space, degree, raw_comps) -> ConvolutionElement:
    """Equivariant element from raw components on representative keys."""
    comps = {}
    for key, op in raw_comps.items():
        key = tuple(key)
        c = key_rotations_to_canonical(key)
        ckey = canonical_key(key)
        moved = materialize_at_rotation(op, key, c)
        comps[ckey] = comps[ckey] + moved if ckey in comps else moved
    out = {}
    for key, op in comps.items():
        m = len(key)
        stab = [c for c in range(1, m) if key[c:] + key[:c] == key]
        if stab:
            period = min(stab)
            proj, cur, count = op.copy(), op, 1
            for _ in range(m // period - 1):
                cur = materialize_at_rotation(cur, key, period)
                proj = proj + cur
                count += 1
            op = proj.scale(Fraction(1, count))
            if not (materialize_at_rotation(op, key, period) - op).is_zero():
                op = op.scale(0)
        if not op.is_zero():
            out[key] = op
    return ConvolutionElement(space, degree, out)


def convolution_product(F: ConvolutionElement, G: ConvolutionElement,
                        max_arity: int = 6,
                        max_outputs: int | None = None) -> ConvolutionElement:
    """The convolution product: componentwise sum over elementary cuttings,
    G's value composed on top of F's below, the Koszul pass of G over the
    bottom basis element included.

    Components are computed on all curved keys with n, m <= the bounds;
    elements supported on a smaller key set simply contribute vanishing
    terms for out-of-range parts.
    """
    assert F.space == G.space
    out_comps = {}
    for key in structure_keys("curved", max_arity, max_outputs):
        n, m = sum(key), len(key)
        acc = op_homog(F.space, F.space, n, m, F.degree + G.degree + n - 1)
        r = standard_roundabout(key, "curved")
        for cut in enumerate_elementary_cuttings(r):
            fb = F.component(cut.bottom.lambdas)
            gt = G.component(cut.top.lambdas)
            if fb.is_zero() or gt.is_zero():
                continue
            arranged = composed_cutting(fb, gt, cut)
            sign = delta_coefficient(cut)
            if (G.degree * (cut.bottom.n - 1)) % 2:
                sign = -sign
            acc = acc + arranged.scale(sign)
        if not acc.is_zero():
            out_comps[key] = acc
    return ConvolutionElement(F.space, F.degree + G.degree, out_comps)


def convolution_differential(F: ConvolutionElement, d: Operation,
                             ) -> ConvolutionElement:
    """Componentwise commutator with the differential."""
    from .graded import compose_simple
    assert compose_simple(d, d).is_zero(), "d^2 must vanish"
    comps = {}
    for key, op in F.comps.items():
        dop = hom_differential(op, d, d)
        if not dop.is_zero():
            comps[key] = dop
    return ConvolutionElement(F.space, F.degree - 1, comps)


def structure_as_element(s: Structure) -> ConvolutionElement:
    """Package a structure as the degree -1 element of the convolution
    algebra (curved flavor keeps the unary key; uncurved ones do not)."""
    comps = {k: op.copy() for k, op in s.ops.items()}
    return ConvolutionElement(s.space, -1, comps)


def mc_residual_via_star(s: Structure, max_arity: int = 4) -> dict:
    """Independent route: residual of d(alpha) + alpha * alpha = 0."""
    alpha = structure_as_element(s)
    sq = convolution_product(alpha, alpha, max_arity)
    d = s.differential
    res = {}
    for key in s.keys_up_to(max_arity):
        acc = sq.component(key)
        if s.flavor != "curved" and d is not None:
            mk = s.component(key)
            if not mk.is_zero():
                acc = acc + hom_differential(mk, d, d)
        if not acc.is_zero():
            res[key] = acc
    return res
