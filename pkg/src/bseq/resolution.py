"""Minimal free resolutions, mapping cones, Betti tables, Hilbert data.

Includes the numerator Q(λ) of a Hilbert series with exact derivative tests
at λ = 1, the closed-form codimension-3 conditions on twist data, and Ext
patterns against S(-n) computed from dualized minimal resolutions.
"""

import json

from .rings import DimensionMismatch, Polynomial, binomial
from .modules import (
    ChainComplex,
    GradedFreeModule,
    ModuleMap,
    Vec,
    compose,
    subquotient_presentation,
)
from . import groebner

__all__ = [
    "BettiTable",
    "HilbertNumerator",
    "NumericalReport",
    "ChainMap",
    "minimal_resolution",
    "mapping_cone",
    "hilbert_numerator",
    "hilbert_from_groebner",
    "q_vanishing",
    "numerical_conditions",
    "cohomology_pattern",
    "exactness_audit",
    "fp_dimension",
    "fp_hilbert_function",
]


class BettiTable:
    """Map (homological index i, internal degree j) -> multiplicity."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        self.entries = {k: v for k, v in entries.items() if v}

    @classmethod
    def from_complex(cls, cc):
        entries = {}
        for i, mod in enumerate(cc.modules):
            for tw in mod.twists:
                entries[(i, tw)] = entries.get((i, tw), 0) + 1
        return cls(entries)

    def total(self, i):
        return sum(v for (h, _), v in self.entries.items() if h == i)

    def max_index(self):
        return max((i for i, _ in self.entries), default=-1)

    def to_json(self):
        return json.dumps(
            [[i, j, v] for (i, j), v in sorted(self.entries.items())])

    @classmethod
    def from_json(cls, text):
        return cls({(i, j): v for i, j, v in json.loads(text)})

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.entries == other.entries

    def __repr__(self):
        rows = sorted(self.entries.items())
        return "BettiTable(" + ", ".join(
            f"b[{i},{j}]={v}" for (i, j), v in rows) + ")"


class HilbertNumerator:
    """Integer Laurent polynomial Q(λ) with Hilb = Q/(1-λ)^n."""

    __slots__ = ("coeffs", "n")

    def __init__(self, coeffs, n):
        self.coeffs = {j: c for j, c in coeffs.items() if c}
        self.n = n

    def derivative_at_one(self, k):
        """Q^(k)(1) exactly: Σ_j c_j · j(j-1)...(j-k+1)."""
        total = 0
        for j, c in self.coeffs.items():
            f = 1
            for a in range(k):
                f *= j - a
            total += c * f
        return total

    def series_coefficient(self, d):
        """Coefficient of λ^d in Q/(1-λ)^n."""
        return sum(c * binomial(d - j + self.n - 1, self.n - 1)
                   for j, c in self.coeffs.items() if j <= d)

    def series(self, window):
        return [self.series_coefficient(d) for d in range(window + 1)]

    def shifted(self, c):
        """Twisting the whole resolution by (-c) multiplies Q by λ^c."""
        return HilbertNumerator({j + c: v for j, v in self.coeffs.items()},
                                self.n)

    def vanishing_order_at_one(self):
        k = 0
        while k <= len(self.coeffs) + 1:
            if self.derivative_at_one(k) != 0:
                return k
            k += 1
        return k

    def __eq__(self, other):
        return (isinstance(other, HilbertNumerator)
                and self.coeffs == other.coeffs and self.n == other.n)

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for j in sorted(self.coeffs):
            c = self.coeffs[j]
            if j == 0:
                body = str(abs(c))
            else:
                tpow = "t" if j == 1 else f"t^{j}"
                body = tpow if abs(c) == 1 else f"{abs(c)}*{tpow}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    def __repr__(self):
        return f"HilbertNumerator({self}, n={self.n})"


def hilbert_numerator(arg, n=None):
    """Q(λ) = Σ_{i,j} (-1)^i β_{ij} λ^j from a finite free complex or table."""
    if isinstance(arg, ChainComplex):
        betti = BettiTable.from_complex(arg)
        n = arg.modules[0].n
    elif isinstance(arg, BettiTable):
        betti = arg
        if n is None:
            raise ValueError("hilbert_numerator from a table needs n")
    else:
        raise TypeError("expected ChainComplex or BettiTable")
    coeffs = {}
    for (i, j), v in betti.entries.items():
        coeffs[j] = coeffs.get(j, 0) + (-1) ** i * v
    return HilbertNumerator(coeffs, n)


def hilbert_from_groebner(ideal, window):
    """Hilbert function of S/I in degrees 0..window by lead-term counting."""
    gbasis = groebner.groebner(ideal)
    return groebner.hilbert_function_quotient(gbasis, window)


def q_vanishing(q, order):
    """[Q(1)=0, Q'(1)=0, ...] up to the requested number of derivatives."""
    return [q.derivative_at_one(k) == 0 for k in range(order)]


# ---------------------------------------------------------------------------
# minimal resolutions
# ---------------------------------------------------------------------------

def _prune_presentation(pres, relations):
    """Cancel unit entries: relations with a constant coordinate eliminate
    the corresponding generator.  Returns (module, relations) minimal at
    homological step zero."""
    n = pres.n
    twists = list(pres.twists)
    rels = [v for v in relations if not v.is_zero()]
    zero_exp = (0,) * n
    while True:
        hit = None
        for ri, r in enumerate(rels):
            for (pos, exp), c in r.terms.items():
                if exp == zero_exp:
                    hit = (ri, pos, c)
                    break
            if hit:
                break
        if hit is None:
            break
        ri, pos, c = hit
        r = rels[ri]
        others = rels[:ri] + rels[ri + 1:]
        new_rels = []
        for v in others:
            comp = v.component(pos)
            if comp:
                v = v - r.mul_poly(comp.scale(1 / c))
            new_rels.append(v)
        # drop the generator `pos`
        def drop(v):
            return Vec(n, {(p if p < pos else p - 1, e): cc
                           for (p, e), cc in v.terms.items() if p != pos})
        rels = [w for w in (drop(v) for v in new_rels) if not w.is_zero()]
        del twists[pos]
    return GradedFreeModule(n, twists), rels


def minimal_resolution(m, max_length=None):
    """Minimal graded free resolution of a finitely presented module.

    Built by iterated syzygies, taking a minimal generating set at every
    step (so no differential entry has a constant term).  Returns the
    complex F_len -> ... -> F_0 and its Betti table.
    """
    n = m.n
    cap = max(n, max_length if max_length is not None else 0) + 1
    f0, rels = _prune_presentation(m.presentation, m.relations)
    modules = [f0]
    maps = []
    current = groebner.SubmoduleGens(f0, rels, check=False)
    while len(maps) < cap:
        mg = groebner.minimal_generators(current)
        if not mg.vectors:
            break
        degs = [v.homogeneous_degree(current.ambient) for v in mg.vectors]
        nxt = GradedFreeModule(n, degs)
        maps.append(ModuleMap.from_columns(nxt, modules[-1], mg.vectors))
        modules.append(nxt)
        current = groebner.syzygies(mg)
    else:
        raise AssertionError("resolution exceeded the Hilbert bound")
    cc = ChainComplex(modules, maps)
    return cc, BettiTable.from_complex(cc)


# ---------------------------------------------------------------------------
# mapping cones
# ---------------------------------------------------------------------------

class ChainMap:
    """A chain map alpha_i : A_i -> B_i, verified to commute."""

    __slots__ = ("source", "target", "maps")

    def __init__(self, source, target, maps, check=True):
        self.source = source
        self.target = target
        self.maps = list(maps)
        if len(self.maps) != len(source.modules):
            raise DimensionMismatch("need one component per source module")
        if check:
            for i in range(1, len(self.maps)):
                right = compose(self.maps[i - 1], source.differential(i))
                if i > target.length:
                    # the target has ended: the square commutes iff alpha
                    # kills the source differential
                    if not right.is_zero():
                        raise ValueError(
                            f"chain map does not commute at square {i}")
                    continue
                left = compose(target.differential(i), self.maps[i])
                diff_ok = all(
                    (a - b).is_zero()
                    for ra, rb in zip(left.rows, right.rows)
                    for a, b in zip(ra, rb))
                if not diff_ok:
                    raise ValueError(f"chain map does not commute at square {i}")


def mapping_cone(alpha):
    """Cone C_i = A_{i-1} ⊕ B_i with d(a, b) = (-d_A a, alpha(a) + d_B b)."""
    A, B = alpha.source, alpha.target
    n = B.modules[0].n
    length = max(A.length + 1, B.length)
    empty = GradedFreeModule(n, [])

    def a_mod(i):
        return A.modules[i] if 0 <= i <= A.length else empty

    def b_mod(i):
        return B.modules[i] if 0 <= i <= B.length else empty

    modules = [a_mod(i - 1).direct_sum(b_mod(i)) for i in range(length + 1)]
    maps = []
    z = Polynomial.zero(n)
    for i in range(1, length + 1):
        src, tgt = modules[i], modules[i - 1]
        rows = [[z] * src.rank for _ in range(tgt.rank)]
        ar_t, br_t = a_mod(i - 2).rank, b_mod(i - 1).rank
        ar_s, br_s = a_mod(i - 1).rank, b_mod(i).rank
        if ar_t and ar_s:                      # -d_A : A_{i-1} -> A_{i-2}
            dA = A.differential(i - 1)
            for r in range(ar_t):
                for cidx in range(ar_s):
                    rows[r][cidx] = -dA.rows[r][cidx]
        if ar_s:                               # alpha_{i-1} : A_{i-1} -> B_{i-1}
            al = alpha.maps[i - 1]
            for r in range(br_t):
                for cidx in range(ar_s):
                    rows[ar_t + r][cidx] = al.rows[r][cidx]
        if br_s and br_t:                      # d_B : B_i -> B_{i-1}
            dB = B.differential(i)
            for r in range(br_t):
                for cidx in range(br_s):
                    rows[ar_t + r][ar_s + cidx] = dB.rows[r][cidx]
        maps.append(ModuleMap(src, tgt, rows))
    return ChainComplex(modules, maps)


def exactness_audit(cc, positions=None, left_exact=True):
    """Verify kernel(d_i) = image(d_{i+1}) at interior positions.

    With ``left_exact`` the top differential must also be injective.
    Returns (ok, list of failing positions).
    """
    failures = []
    top = cc.length
    if positions is None:
        positions = range(1, top)
    for i in positions:
        ker = groebner.kernel(cc.differential(i))
        im = groebner.SubmoduleGens(cc.modules[i],
                                    cc.differential(i + 1).columns(),
                                    check=False)
        if not groebner.equal(ker, im):
            failures.append(i)
    if left_exact and top >= 1:
        if groebner.kernel(cc.differential(top)).vectors:
            failures.append(top)
    return (not failures), failures


# ---------------------------------------------------------------------------
# codimension-3 numerical conditions on twist data
# ---------------------------------------------------------------------------

class NumericalReport:
    """Evaluation of the three closed-form conditions on (n,t,c,d,a,b)."""

    __slots__ = ("n", "t", "c", "d", "a", "b", "inferred_c",
                 "cond1", "cond2", "cond3")

    def __init__(self, n, t, c, d, a, b, inferred_c, cond1, cond2, cond3):
        self.n, self.t, self.c, self.d = n, t, c, d
        self.a, self.b = list(a), list(b)
        self.inferred_c = inferred_c
        self.cond1, self.cond2, self.cond3 = cond1, cond2, cond3

    def all_hold(self):
        return self.cond1[0] and self.cond2[0] and self.cond3[0]

    def to_dict(self):
        return {
            "n": self.n, "t": self.t, "c": self.c, "d": self.d,
            "a": self.a, "b": self.b, "inferred_c": self.inferred_c,
            "condition1": {"holds": self.cond1[0], "left": self.cond1[1],
                           "right": self.cond1[2]},
            "condition2": {"holds": self.cond2[0], "left": self.cond2[1],
                           "right": self.cond2[2]},
            "condition3": {"holds": self.cond3[0], "left": self.cond3[1],
                           "right": self.cond3[2]},
        }

    def __repr__(self):
        return (f"NumericalReport(c={self.c}, 1:{self.cond1[0]} "
                f"2:{self.cond2[0]} 3:{self.cond3[0]})")


def _rhs2(n, t, c, d):
    return (n * n - (2 + d) * n + c + d + binomial(n - 2, t - 1)
            + binomial(n - 1, t) * t)


def _rhs3(n, t, c, d):
    return (n ** 3 - (3 + 2 * d) * n ** 2 + (d * d + 4 * d + 1) * n
            - c * c - d * d + binomial(n - 1, t) * (t + 1) ** 2
            - binomial(n - 2, t) * (2 * t + 1)
            - 2 * binomial(n - 3, t - 1))


def numerical_conditions(n, t, c, d, a, b, solve_c=False):
    """Closed-form rank and twist conditions forcing codimension exactly 3.

    With ``solve_c`` the shift c is inferred from the second condition and
    the third is then evaluated at the inferred value.
    """
    a, b = list(a), list(b)
    p, q = len(a), len(b)
    left1, right1 = q, p + binomial(n - 1, t) + n - 2
    sum_diff = sum(b) - sum(a)
    inferred_c = None
    if solve_c:
        inferred_c = sum_diff - _rhs2(n, t, 0, d)
        c = inferred_c
    left2, right2 = sum_diff, _rhs2(n, t, c, d)
    sq_diff = sum(x * x for x in b) - sum(x * x for x in a)
    left3, right3 = sq_diff, _rhs3(n, t, c, d)
    return NumericalReport(
        n, t, c, d, a, b, inferred_c,
        (left1 == right1, left1, right1),
        (left2 == right2, left2, right2),
        (left3 == right3, left3, right3),
    )


def numerator_from_shape(n, t, c, d, a, b):
    """Q(λ) assembled directly from the cone shape with β_i = C(n, t+i)."""
    coeffs = {0: 1}

    def bump(j, v):
        coeffs[j] = coeffs.get(j, 0) + v

    bump(n - 1 + c - d, -n)
    bump(n + c - d, 1)
    for bi in b:
        bump(bi + c, 1)
    for ai in a:
        bump(ai + c, -1)
    sign_t = (-1) ** t
    for i in range(t + 1, n + 1):
        bump(i + c, sign_t * (-1) ** i * binomial(n, i))
    return HilbertNumerator(coeffs, n)


# ---------------------------------------------------------------------------
# Ext patterns against S(-n)
# ---------------------------------------------------------------------------

def fp_dimension(fp):
    """Krull dimension of a presented module from lead terms; -1 if zero."""
    gbasis = groebner.groebner(
        groebner.SubmoduleGens(fp.presentation, fp.relations, check=False))
    n = fp.n
    per_pos = {p: [] for p in range(fp.presentation.rank)}
    for pos, exp in gbasis.leads:
        per_pos[pos].append(exp)
    best = -1
    for p in range(fp.presentation.rank):
        amb = GradedFreeModule(n, [0])
        gens = groebner.SubmoduleGens(
            amb, [Vec(n, {(0, e): _field_one(fp, gbasis)}) for e in per_pos[p]],
            check=False)
        dim = groebner.krull_dim(gens)
        best = max(best, dim)
    return best


def _field_one(fp, gbasis):
    for v in gbasis.vectors:
        for c in v.terms.values():
            return c / c
    for r in fp.relations:
        for c in r.terms.values():
            return c / c
    from fractions import Fraction
    return Fraction(1)


def fp_hilbert_function(fp, lo, hi):
    """Graded dimensions of a presented module on degrees lo..hi."""
    gbasis = groebner.groebner(
        groebner.SubmoduleGens(fp.presentation, fp.relations, check=False))
    num = groebner.quotient_numerator(gbasis)
    hn = HilbertNumerator(num, fp.n)
    return {d: hn.series_coefficient(d) for d in range(lo, hi + 1)}


class ExtEntry:
    __slots__ = ("dims", "finite_length", "dimension")

    def __init__(self, dims, finite_length, dimension):
        self.dims = dims
        self.finite_length = finite_length
        self.dimension = dimension

    def total(self):
        return sum(self.dims.values())

    def __repr__(self):
        return (f"ExtEntry(dims={self.dims}, finite={self.finite_length})")


def cohomology_pattern(m, max_len=None):
    """Graded dimensions of Ext^j(M, S(-n)) for j >= 1.

    The minimal resolution is dualized with Hom(-, S(-n)) and each
    cohomology is presented as a subquotient; only Hilbert-level data is
    reported.  By local duality this is the pattern of the local
    cohomologies of M (at i = n - j), each entry flagged when finite length.
    """
    cc, _ = minimal_resolution(m, max_len)
    n = m.n
    L = cc.length
    out = {}
    for j in range(1, L + 1):
        dual_j = cc.differential(j).dual()       # phi_j^* : F*_{j-1} -> F*_j
        im = groebner.SubmoduleGens(dual_j.target, dual_j.columns(),
                                    check=False)
        if j < L:
            dual_next = cc.differential(j + 1).dual()
            ker = groebner.kernel(dual_next)
        else:
            one = _field_one(m, groebner.groebner(
                groebner.SubmoduleGens(m.presentation, m.relations,
                                       check=False)))
            units = [Vec(n, {(p, (0,) * n): one})
                     for p in range(dual_j.target.rank)]
            ker = groebner.SubmoduleGens(dual_j.target, units, check=False)
        fp = subquotient_presentation(ker, im, label=f"Ext^{j}")
        dim = fp_dimension(fp)
        if dim < 0:
            out[j] = ExtEntry({}, True, dim)
            continue
        if dim == 0:
            # finite length: Hilb is a Laurent polynomial, obtained exactly
            # by dividing the numerator by (1-λ)^n
            gbasis = groebner.groebner(groebner.SubmoduleGens(
                fp.presentation, fp.relations, check=False))
            num = groebner.quotient_numerator(gbasis)
            for _ in range(n):
                num = _divide_by_one_minus_lambda(num)
            dims = {d: v for d, v in num.items() if v}
        else:
            tw = fp.presentation.twists
            lo, hi = min(tw), max(tw) + 3 * n
            dims = {d: v for d, v in fp_hilbert_function(fp, lo, hi).items()
                    if v}
        out[j] = ExtEntry(dims, dim <= 0, dim)
    return out


def _divide_by_one_minus_lambda(coeffs):
    """Exact quotient N/(1-λ) for Laurent polynomials with N(1) = 0."""
    if not coeffs:
        return {}
    lo, hi = min(coeffs), max(coeffs)
    out = {}
    run = 0
    for j in range(lo, hi + 1):
        run += coeffs.get(j, 0)
        if run:
            out[j] = run
    if run:
        raise ArithmeticError("numerator does not vanish at 1")
    return out
