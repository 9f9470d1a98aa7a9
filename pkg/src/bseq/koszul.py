"""Koszul complex of x1..xn: bases e_I, signs, syzygy modules E_s, duals.

Basis elements of K_s are indexed by size-s subsets of [n] = {1..n} in a
fixed colexicographic order (deterministic output everywhere).  K_s has
twists s; shifting by (t) subtracts t.  Duals are taken against S(-n), so
K_s* has twists n-s and e*_I pairs with e_I.
"""

from functools import lru_cache
from typing import NamedTuple

from .rings import (
    RATIONALS,
    ParseError,
    Polynomial,
    binomial,
    parse_polynomial,
)
from .modules import FPModule, GradedFreeModule, ModuleMap, Vec
from . import groebner

__all__ = [
    "subsets",
    "subset_position",
    "sigma",
    "koszul_module",
    "koszul_differential",
    "SyzygyModule",
    "E",
    "Summand",
    "KoszulVector",
    "generate_A",
    "generate_B",
    "dual_pair",
    "selfduality_check",
    "parse_koszul_vector",
    "format_koszul_vector",
]


@lru_cache(maxsize=None)
def subsets(n, s):
    """Size-s subsets of {1..n} as sorted tuples, in colex order."""
    import itertools
    subs = list(itertools.combinations(range(1, n + 1), s))
    subs.sort(key=lambda I: tuple(reversed(I)))
    return tuple(subs)


@lru_cache(maxsize=None)
def subset_position(n, s):
    return {I: i for i, I in enumerate(subsets(n, s))}


def sigma(J, K):
    """Wedge-reordering sign: (-1)^#{(j,k) in J x K : j > k}."""
    J, K = tuple(J), tuple(K)
    if set(J) & set(K):
        raise ValueError(f"overlapping subsets {J} and {K}")
    inv = sum(1 for j in J for k in K if j > k)
    return -1 if inv % 2 else 1


def koszul_module(n, s, shift=0):
    """K_s(shift) = S(-s+shift)^C(n,s) with subset labels."""
    subs = subsets(n, s)
    labels = ["e[" + ",".join(map(str, I)) + "]" for I in subs]
    return GradedFreeModule(n, [s - shift] * len(subs), labels)


def koszul_differential(n, s, shift=0, field=RATIONALS):
    """∂_s : K_s -> K_{s-1}, e_I -> Σ_k (-1)^{k+1} x_{i_k} e_{I∖i_k}."""
    if not 1 <= s <= n + 1:
        raise ValueError(f"koszul differential out of range: s={s}, n={n}")
    src = koszul_module(n, s, shift)
    tgt = koszul_module(n, s - 1, shift)
    pos = subset_position(n, s - 1)
    z = Polynomial.zero(n)
    rows = [[z] * src.rank for _ in range(tgt.rank)]
    for j, I in enumerate(subsets(n, s)):
        for k, ik in enumerate(I):
            J = tuple(x for x in I if x != ik)
            coeff = field.one if k % 2 == 0 else -field.one
            rows[pos[J]][j] = rows[pos[J]][j] + Polynomial.variable(
                n, ik, field).scale(coeff)
    return ModuleMap(src, tgt, rows)


class SyzygyModule(NamedTuple):
    """E_s = Im ∂_s realized inside K_{s-1}, with its Koszul presentation."""

    n: int
    s: int
    shift: int
    fp: FPModule                    # coker(∂_{s+1}: K_{s+1} -> K_s)
    ambient: GradedFreeModule       # K_{s-1}(shift)
    gens: groebner.SubmoduleGens    # columns of ∂_s, i.e. Im ∂_s
    diff: ModuleMap                 # ∂_s (shifted)

    @property
    def rank(self):
        return binomial(self.n - 1, self.s - 1)


def E(n, s, shift=0, field=RATIONALS):
    """The s-th syzygy module of the residue field, rank C(n-1, s-1)."""
    if not 1 <= s <= n:
        raise ValueError(f"E out of range: s={s}, n={n}")
    d_s = koszul_differential(n, s, shift, field)
    if s + 1 <= n:
        rel_cols = koszul_differential(n, s + 1, shift, field).columns()
    else:
        rel_cols = []
    fp = FPModule(d_s.source, rel_cols, label=f"E({n},{s},{shift})")
    gens = groebner.SubmoduleGens(d_s.target, d_s.columns(), check=False)
    return SyzygyModule(n, s, shift, fp, d_s.target, gens, d_s)


# ---------------------------------------------------------------------------
# Koszul vectors: elements of direct sums of (shifted, possibly dual) K_s
# ---------------------------------------------------------------------------

class Summand(NamedTuple):
    s: int
    shift: int = 0
    dual: bool = False


class KoszulVector:
    """Finite map (summand, subset) -> coefficient polynomial."""

    __slots__ = ("n", "summands", "coeffs")

    def __init__(self, n, summands, coeffs):
        self.n = n
        self.summands = tuple(Summand(*s) for s in summands)
        cleaned = {}
        for (si, I), p in coeffs.items():
            I = tuple(I)
            if len(I) != self.summands[si].s:
                raise ValueError(
                    f"subset {I} has wrong size for summand {self.summands[si]}")
            if p:
                cleaned[(si, I)] = p
        self.coeffs = cleaned

    # -- ambient ------------------------------------------------------
    def free_module(self):
        twists = []
        labels = []
        for sm in self.summands:
            star = "*" if sm.dual else ""
            for I in subsets(self.n, sm.s):
                if sm.dual:
                    twists.append(self.n - sm.s + sm.shift)
                else:
                    twists.append(sm.s - sm.shift)
                labels.append(f"e{star}[" + ",".join(map(str, I)) + "]")
        return GradedFreeModule(self.n, twists, labels)

    def _offsets(self):
        offs = []
        total = 0
        for sm in self.summands:
            offs.append(total)
            total += len(subsets(self.n, sm.s))
        return offs

    def to_vec(self):
        offs = self._offsets()
        terms = {}
        for (si, I), p in self.coeffs.items():
            pos = offs[si] + subset_position(self.n, self.summands[si].s)[I]
            for exp, c in p.terms.items():
                terms[(pos, exp)] = c
        return Vec(self.n, terms)

    def to_functional(self, field=RATIONALS):
        """A 1-row map (primal ambient) -> S(-n); all summands must be dual."""
        if not all(sm.dual for sm in self.summands):
            raise ValueError("functional requires dual summands")
        primal = KoszulVector(
            self.n, [Summand(sm.s, sm.shift, False) for sm in self.summands], {})
        source = primal.free_module()
        target = GradedFreeModule(self.n, [self.n])
        z = Polynomial.zero(self.n)
        row = [z] * source.rank
        offs = self._offsets()
        shift = None
        for (si, I), p in self.coeffs.items():
            pos = offs[si] + subset_position(self.n, self.summands[si].s)[I]
            row[pos] = row[pos] + p
        for j, p in enumerate(row):
            if p.is_zero():
                continue
            deg = p.homogeneous_degree()
            if deg is None:
                raise ValueError("inhomogeneous functional entry")
            this = deg - source.twists[j] + self.n
            if shift is None:
                shift = this
            elif shift != this:
                raise ValueError("functional entries disagree on degree shift")
        return ModuleMap(source, target, [row], shift if shift is not None else 0)

    # -- algebra --------------------------------------------------------
    def _same_ambient(self, other):
        if self.n != other.n or self.summands != other.summands:
            raise ValueError("Koszul ambients differ")

    def __add__(self, other):
        self._same_ambient(other)
        coeffs = dict(self.coeffs)
        for k, p in other.coeffs.items():
            coeffs[k] = coeffs[k] + p if k in coeffs else p
        return KoszulVector(self.n, self.summands, coeffs)

    def __sub__(self, other):
        self._same_ambient(other)
        coeffs = dict(self.coeffs)
        for k, p in other.coeffs.items():
            coeffs[k] = coeffs[k] - p if k in coeffs else -p
        return KoszulVector(self.n, self.summands, coeffs)

    def __neg__(self):
        return KoszulVector(self.n, self.summands,
                            {k: -p for k, p in self.coeffs.items()})

    def mul_poly(self, p):
        return KoszulVector(self.n, self.summands,
                            {k: q * p for k, q in self.coeffs.items()})

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return (isinstance(other, KoszulVector) and self.n == other.n
                and self.summands == other.summands
                and self.coeffs == other.coeffs)

    def __str__(self):
        return format_koszul_vector(self)

    def __repr__(self):
        return f"KoszulVector({format_koszul_vector(self)!r})"


def dual_pair(v, w):
    """⟨v, w⟩ = Σ_I v_I · w_I for a primal/dual pair over matching summands."""
    if v.n != w.n or len(v.summands) != len(w.summands):
        raise ValueError("dual_pair: ambient mismatch")
    for a, b in zip(v.summands, w.summands):
        if (a.s, a.shift) != (b.s, b.shift) or a.dual or not b.dual:
            raise ValueError("dual_pair: ambient mismatch")
    acc = Polynomial.zero(v.n)
    for k, p in v.coeffs.items():
        q = w.coeffs.get(k)
        if q is not None:
            acc = acc + p * q
    return acc


# ---------------------------------------------------------------------------
# the generator families of functionals
# ---------------------------------------------------------------------------

def generate_A(n, t, field=RATIONALS):
    """Generators of the degree-lifting functionals on K_{t+1} killing E_{t+2}.

    One element per size-(n-t) subset L, in colex order of L:
    Σ_j (-1)^{j+1} σ(L∖{i_j}, ([n]∖L)∪{i_j}) x_{i_j} e*_{([n]∖L)∪{i_j}}.
    """
    if not 0 <= t <= n - 1:
        raise ValueError(f"t out of range: {t}")
    full = set(range(1, n + 1))
    summand = Summand(t + 1, 0, True)
    out = []
    for L in subsets(n, n - t):
        comp = tuple(sorted(full - set(L)))
        coeffs = {}
        for j, ij in enumerate(L):
            rest = tuple(x for x in L if x != ij)
            I = tuple(sorted(comp + (ij,)))
            sign = sigma(rest, I)
            if j % 2 == 1:
                sign = -sign
            x = Polynomial.variable(n, ij, field).scale(
                field.one if sign > 0 else -field.one)
            coeffs[(0, I)] = coeffs.get((0, I), Polynomial.zero(n)) + x
        out.append(KoszulVector(n, [summand], coeffs))
    return out


def generate_B(n, field=RATIONALS):
    """B_ij = (-1)^i x_j e*_{[n]∖i} - (-1)^j x_i e*_{[n]∖j}, i < j; kills E_n."""
    if n < 2:
        raise ValueError("generate_B needs n >= 2")
    summand = Summand(n - 1, 0, True)
    out = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            Ii = tuple(x for x in range(1, n + 1) if x != i)
            Ij = tuple(x for x in range(1, n + 1) if x != j)
            si = field.one if i % 2 == 0 else -field.one
            sj = field.one if j % 2 == 0 else -field.one
            coeffs = {
                (0, Ii): Polynomial.variable(n, j, field).scale(si),
                (0, Ij): Polynomial.variable(n, i, field).scale(-sj),
            }
            out.append(KoszulVector(n, [summand], coeffs))
    return out


def b_index(n):
    """(i, j) labels aligned with generate_B output order."""
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def selfduality_check(n, i, window=None):
    """E_i and Im(∂*_{n-i+1}) agree as graded modules, Hilbert-level.

    Both live in ambients with twists i-1 under duality against S(-n), so
    the comparison needs no extra twist.  Checks graded Hilbert functions in
    degrees up to 2n (by default) and minimal generator counts.
    """
    if not 1 <= i <= n:
        raise ValueError(f"i out of range: {i}")
    if window is None:
        window = 2 * n
    primal = E(n, i).gens
    dual_diff = koszul_differential(n, n - i + 1).dual()
    dual_im = groebner.SubmoduleGens(dual_diff.target, dual_diff.columns(),
                                     check=False)
    hf1 = groebner.hilbert_function_submodule(primal, window)
    hf2 = groebner.hilbert_function_submodule(dual_im, window)
    if hf1 != hf2:
        return False
    b0_primal = len(groebner.minimal_generators(primal).vectors)
    b0_dual = len(groebner.minimal_generators(dual_im).vectors)
    return b0_primal == b0_dual


# ---------------------------------------------------------------------------
# text form: "x6^5*e[3] - x1^2*e*[1,3,4,5,6]"
# ---------------------------------------------------------------------------

def format_koszul_vector(v, order="grevlex"):
    if v.is_zero():
        return "0"
    chunks = []
    for si, sm in enumerate(v.summands):
        star = "*" if sm.dual else ""
        for I in subsets(v.n, sm.s):
            p = v.coeffs.get((si, I))
            if p is None:
                continue
            tag = f"e{star}[" + ",".join(map(str, I)) + "]"
            for exp, c in p.sorted_terms(order):
                mono = "*".join(
                    f"x{k + 1}^{e}" if e > 1 else f"x{k + 1}"
                    for k, e in enumerate(exp) if e)
                cs = str(c)
                neg = cs.startswith("-")
                if neg:
                    cs = cs[1:]
                parts = []
                if cs != "1" or not mono:
                    parts.append(cs)
                if mono:
                    parts.append(mono)
                body = "*".join(parts + [tag])
                if not chunks:
                    chunks.append(("-" if neg else "") + body)
                else:
                    chunks.append(("- " if neg else "+ ") + body)
    return " ".join(chunks)


def parse_koszul_vector(text, n, summands, field=RATIONALS):
    """Parse the Koszul term grammar; summands are matched by subset size."""
    summands = [Summand(*s) for s in summands]
    by_size = {}
    for idx, sm in enumerate(summands):
        key = (sm.s, sm.dual)
        if key in by_size:
            raise ValueError("ambiguous summands: equal size and duality")
        by_size[key] = idx
    coeffs = {}
    pos = 0
    text = text.strip()
    if text == "0":
        return KoszulVector(n, summands, {})
    first = True
    while pos < len(text):
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        sign = 1
        if text[pos] == "+":
            pos += 1
        elif text[pos] == "-":
            sign = -1
            pos += 1
        elif not first:
            raise ParseError("expected '+' or '-'", text, pos)
        while pos < len(text) and text[pos].isspace():
            pos += 1
        e_at = _find_basis_tag(text, pos)
        if e_at is None:
            raise ParseError("expected a basis element e[...]", text, pos)
        coeff_src = text[pos:e_at].rstrip()
        if coeff_src.endswith("*"):
            coeff_src = coeff_src[:-1]
        coeff = (parse_polynomial(coeff_src, n, field) if coeff_src
                 else Polynomial.constant(n, field.one))
        pos = e_at + 1
        dual = False
        if pos < len(text) and text[pos] == "*":
            dual = True
            pos += 1
        if pos >= len(text) or text[pos] != "[":
            raise ParseError("expected '[' after basis tag", text, pos)
        close = text.find("]", pos)
        if close < 0:
            raise ParseError("unterminated subset", text, pos)
        try:
            I = tuple(int(x) for x in text[pos + 1:close].split(","))
        except ValueError:
            raise ParseError("bad subset", text, pos) from None
        if list(I) != sorted(set(I)) or not all(1 <= x <= n for x in I):
            raise ParseError("subset must be strictly increasing within 1..n",
                             text, pos)
        pos = close + 1
        key = (len(I), dual)
        if key not in by_size:
            raise ParseError(
                f"no summand holds a size-{len(I)} {'dual ' if dual else ''}element",
                text, pos)
        si = by_size[key]
        if sign < 0:
            coeff = -coeff
        k = (si, I)
        coeffs[k] = coeffs[k] + coeff if k in coeffs else coeff
        first = False
    return KoszulVector(n, summands, coeffs)


def _find_basis_tag(text, start):
    """Index of the 'e' beginning the basis tag of the current term."""
    i = start
    while i < len(text):
        if text[i] == "e" and i + 1 < len(text) and text[i + 1] in "[*":
            if text[i + 1] == "*" and (i + 2 >= len(text) or text[i + 2] != "["):
                i += 1
                continue
            return i
        if text[i] in "+-":
            return None
        i += 1
    return None
