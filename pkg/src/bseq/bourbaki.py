"""Verification and assembly of long Bourbaki sequences from b-sequences.

A problem bundles the presentation U -> M (a Koszul syzygy module, possibly
plus a shifted top one), a family of vectors beta_i in U outside Ker eps, a
functional phi : U -> S(-n), and a candidate monomorphism f : F -> G with
rank G = #beta.  The two kernel conditions are decided with Gröbner bases;
a successful pair assembles into an audited exact sequence ending in the
ideal Im phi, and a mapping cone over the Koszul tails resolves S/I.
"""

import json
import os

from .rings import (
    RATIONALS,
    Polynomial,
    binomial,
    format_polynomial,
    lex_key,
    parse_polynomial,
)
from .modules import (
    ChainComplex,
    FPModule,
    GradedFreeModule,
    ModuleMap,
    Vec,
    compose,
    direct_sum,
    homogeneity_check,
)
from . import groebner, koszul, resolution

__all__ = [
    "InvalidProblem",
    "AssemblyError",
    "BSequenceProblem",
    "BourbakiSequence",
    "NonTrivialityReport",
    "problem_from_manifest",
    "problem_to_manifest",
    "load_map_json",
    "map_to_json",
    "verify_condition_a",
    "verify_condition_b",
    "rank_conditions",
    "nontriviality",
    "assemble",
    "cone_resolution",
    "synthesize_from_phi",
    "ideal_generators_sorted",
]


class InvalidProblem(ValueError):
    """The problem data violates a precondition of the verification."""


class AssemblyError(RuntimeError):
    """An exactness audit failed during sequence assembly."""


class BSequenceProblem:
    """Candidate b-sequence data (beta_1..beta_q, phi, f) over U -> M."""

    __slots__ = ("n", "t", "d", "c", "shape", "field",
                 "U", "summands", "block_ranks", "kere", "phi", "f", "G", "F",
                 "betas", "beta_map", "provenance", "_cache")

    def __init__(self, n, t, shape, betas, phi, f, d=0, c=None,
                 field=RATIONALS, provenance=None):
        if shape not in ("E_only", "E_plus_top"):
            raise InvalidProblem(f"unknown shape {shape!r}")
        if not 0 <= t <= n - 1:
            raise InvalidProblem(f"t out of range: {t}")
        self.n, self.t, self.d, self.shape = n, t, d, shape
        self.field = field
        self.summands = [koszul.Summand(t + 1, 0, False)]
        if shape == "E_plus_top":
            self.summands.append(koszul.Summand(n - 1, d, False))
        u_parts = [koszul.koszul_module(n, t + 1)]
        if shape == "E_plus_top":
            u_parts.append(koszul.koszul_module(n, n - 1, d))
        U = u_parts[0]
        for part in u_parts[1:]:
            U = U.direct_sum(part)
        self.U = U
        self.block_ranks = [p.rank for p in u_parts]
        self.kere = _kernel_of_eps(n, t, d, shape, field)
        self.betas = list(betas)
        if any(not b.is_homogeneous(U) for b in self.betas):
            raise InvalidProblem("inhomogeneous beta")
        self.phi = phi
        if phi.source != U or phi.target.rank != 1:
            raise InvalidProblem("phi must be a functional on U")
        ok, viol = homogeneity_check(phi)
        if not ok:
            raise InvalidProblem(f"phi not homogeneous: {viol}")
        inferred_c = phi.shift - n
        if c is not None and c != inferred_c:
            raise InvalidProblem(
                f"declared c={c} conflicts with phi degree shift {phi.shift}"
                f" = n + {inferred_c}")
        self.c = inferred_c
        self.f = f
        self.G = f.target
        self.F = f.source
        if self.G.rank != len(self.betas):
            raise InvalidProblem(
                f"|beta| = {len(self.betas)} must equal rank G = {self.G.rank}")
        degs = [b.homogeneous_degree(U) for b in self.betas]
        if list(self.G.twists) != degs:
            raise InvalidProblem(
                f"twists of G {list(self.G.twists)} must match beta degrees {degs}")
        ok, viol = homogeneity_check(f)
        if not ok:
            raise InvalidProblem(f"f not homogeneous: {viol}")
        self.beta_map = ModuleMap.from_columns(self.G, U, self.betas)
        self.provenance = provenance or {}
        self._cache = {}

    # cached heavy subobjects ------------------------------------------
    def ker_phi(self):
        if "ker_phi" not in self._cache:
            self._cache["ker_phi"] = groebner.kernel(self.phi)
        return self._cache["ker_phi"]

    def beta_span(self):
        if "beta_span" not in self._cache:
            self._cache["beta_span"] = groebner.SubmoduleGens(
                self.U, self.betas, check=False)
        return self._cache["beta_span"]

    def __repr__(self):
        return (f"BSequenceProblem(n={self.n}, t={self.t}, shape={self.shape}, "
                f"q={len(self.betas)})")


def _relation_map(n, t, d, shape, field):
    """The map whose image is Ker eps (Koszul differentials into U)."""
    if t + 2 <= n:
        rel = koszul.koszul_differential(n, t + 2, 0, field)
    else:
        rel = ModuleMap(GradedFreeModule(n, []),
                        koszul.koszul_module(n, t + 1), [])
    if shape == "E_plus_top":
        rel = direct_sum(rel, koszul.koszul_differential(n, n, d, field))
    return rel


def _kernel_of_eps(n, t, d, shape, field):
    """Generators of Ker eps: the next Koszul image(s) inside U."""
    rel = _relation_map(n, t, d, shape, field)
    return groebner.SubmoduleGens(rel.target, rel.columns(), check=False)


def relation_map(p):
    return _relation_map(p.n, p.t, p.d, p.shape, p.field)


# ---------------------------------------------------------------------------
# the two b-sequence conditions
# ---------------------------------------------------------------------------

class ConditionReport:
    __slots__ = ("name", "ok", "witness", "details")

    def __init__(self, name, ok, witness=None, details=None):
        self.name = name
        self.ok = ok
        self.witness = witness
        self.details = details or {}

    def to_dict(self):
        return {"condition": self.name, "holds": self.ok,
                "witness": self.witness, **self.details}

    def __repr__(self):
        return f"ConditionReport({self.name}, ok={self.ok})"


def verify_condition_a(p):
    """Ker(phi) = <beta_1..beta_q> + Ker eps, with a witness on failure."""
    kere_gb = groebner.groebner(p.kere)
    for i, b in enumerate(p.betas):
        if groebner.normal_form(b, kere_gb).is_zero():
            raise InvalidProblem(
                f"beta_{i + 1} lies in Ker eps; the family must avoid it")
    if "cond_a" in p._cache:
        return p._cache["cond_a"]
    ker_phi = p.ker_phi()
    rhs = groebner.submodule_sum(p.beta_span(), p.kere)
    rhs_gb = groebner.groebner(rhs)
    witness = None
    for v in ker_phi.vectors:
        if not groebner.normal_form(v, rhs_gb).is_zero():
            witness = f"kernel generator not in <beta> + Ker eps: {v}"
            break
    if witness is None:
        kphi_gb = groebner.groebner(ker_phi)
        for v in rhs.vectors:
            if not groebner.normal_form(v, kphi_gb).is_zero():
                witness = f"<beta> + Ker eps exceeds Ker phi at: {v}"
                break
    rep = ConditionReport(
        "a", witness is None, witness,
        {"ker_phi_gens": len(ker_phi.vectors),
         "rhs_gens": len(rhs.vectors)})
    p._cache["cond_a"] = rep
    return rep


def verify_condition_b(p):
    """The commutative-diagram condition for f against beta and Ker eps.

    Checks (1) Im(beta∘f) = <beta> ∩ Ker eps and (2) f carries Ker(beta∘f)
    onto Ker beta; together with injectivity of f this is the exactness of
    the top row.
    """
    if "cond_b" in p._cache:
        return p._cache["cond_b"]
    if groebner.kernel(p.f).vectors:
        raise InvalidProblem("f is not injective")
    bf = compose(p.beta_map, p.f)
    im_bf = groebner.SubmoduleGens(p.U, bf.columns(), check=False)
    inter = groebner.intersect(p.beta_span(), p.kere)
    surj = groebner.equal(im_bf, inter)
    witness = None
    if not surj:
        witness = "Im(beta∘f) differs from <beta> ∩ Ker eps"
    ker_bf = groebner.kernel(bf)
    f_ker = groebner.SubmoduleGens(
        p.G, [p.f.apply(v) for v in ker_bf.vectors], check=False)
    ker_b = groebner.kernel(p.beta_map)
    iso = groebner.equal(f_ker, ker_b)
    if not iso and witness is None:
        witness = "f(Ker beta∘f) differs from Ker beta"
    rep = ConditionReport(
        "b", surj and iso, witness,
        {"intersection_gens": len(inter.vectors),
         "ker_beta_gens": len(ker_b.vectors)})
    p._cache["cond_b"] = rep
    return rep


def rank_conditions(p, shape=None):
    """The applicable closed rank identity for the problem's shape."""
    shape = shape or p.shape
    rank_f, rank_g = p.F.rank, p.G.rank
    if shape == "E_plus_top":
        left, right = rank_f, rank_g - p.n + 2 - binomial(p.n - 1, p.t)
        name = "rank F = rank G - n + 2 - C(n-1,t)"
    else:
        left, right = rank_f, rank_g + 1 - binomial(p.n - 1, p.t)
        name = "rank Ker f1 = rank F1 + 1 - C(n-1,t)"
    return ConditionReport("rank", left == right, None,
                           {"identity": name, "left": left, "right": right})


def rank_additivity(p):
    """rank Ker(phi|_M) = rank(M) (+ rank N) - 1, via lead-term ranks."""
    r_kphi = groebner.submodule_rank(p.ker_phi())
    r_kere = groebner.submodule_rank(p.kere)
    left = r_kphi - r_kere
    right = binomial(p.n - 1, p.t) - 1
    if p.shape == "E_plus_top":
        right += p.n - 1
    return ConditionReport("rank_additivity", left == right, None,
                           {"left": left, "right": right})


class NonTrivialityReport:
    __slots__ = ("decomposes", "verdict", "nu0_gens", "nv0_gens", "mixed")

    def __init__(self, decomposes, nu0_gens, nv0_gens, mixed):
        self.decomposes = decomposes
        self.verdict = not decomposes
        self.nu0_gens = nu0_gens
        self.nv0_gens = nv0_gens
        self.mixed = mixed

    def to_dict(self):
        return {"decomposes": self.decomposes, "non_trivial": self.verdict,
                "n_cap_u0_gens": self.nu0_gens, "n_cap_v0_gens": self.nv0_gens,
                "mixed_support_betas": self.mixed}

    def __repr__(self):
        return f"NonTrivialityReport(non_trivial={self.verdict})"


def nontriviality(p):
    """Whether <beta> decomposes as (N ∩ U0) + (N ∩ V0); non-trivial iff not.

    Also lists which beta_i mix the two summands in the given basis.
    """
    if p.shape != "E_plus_top":
        raise InvalidProblem("non-triviality needs the U0 ⊕ V0 split")
    ru0 = p.block_ranks[0]
    one = p.field.one
    zero_exp = (0,) * p.n
    u0 = groebner.SubmoduleGens(
        p.U, [Vec(p.n, {(i, zero_exp): one}) for i in range(ru0)], check=False)
    v0 = groebner.SubmoduleGens(
        p.U, [Vec(p.n, {(i, zero_exp): one})
              for i in range(ru0, p.U.rank)], check=False)
    N = p.beta_span()
    nu0 = groebner.intersect(N, u0)
    nv0 = groebner.intersect(N, v0)
    dec = groebner.equal(N, groebner.submodule_sum(nu0, nv0))
    mixed = []
    for i, b in enumerate(p.betas):
        pos = b.positions()
        if any(q < ru0 for q in pos) and any(q >= ru0 for q in pos):
            mixed.append(i + 1)
    return NonTrivialityReport(dec, len(nu0.vectors), len(nv0.vectors), mixed)


# ---------------------------------------------------------------------------
# assembly
# ---------------------------------------------------------------------------

def ideal_generators_sorted(gb):
    """Reduced-GB generators of an ideal, ascending degree then lex-descending."""
    polys = [v.component(0) for v in gb.vectors]
    def keyfn(p):
        lead = max(p.terms, key=lex_key)
        return (p.homogeneous_degree(), tuple(-e for e in lead))
    return sorted(polys, key=keyfn)


class BourbakiSequence:
    """An audited exact sequence 0 -> F -> G -> M -> I(c) -> 0 (+ tail)."""

    __slots__ = ("problem", "free_complex", "beta_map", "module",
                 "ideal", "ideal_gb", "c", "audit")

    def __init__(self, problem, free_complex, beta_map, module, ideal,
                 ideal_gb, c, audit):
        self.problem = problem
        self.free_complex = free_complex
        self.beta_map = beta_map
        self.module = module
        self.ideal = ideal
        self.ideal_gb = ideal_gb
        self.c = c
        self.audit = audit

    @property
    def length(self):
        return self.free_complex.length + 2

    def ideal_strings(self):
        return [format_polynomial(p) for p in
                ideal_generators_sorted(self.ideal_gb)]

    def __repr__(self):
        return (f"BourbakiSequence(length {self.length}, "
                f"ideal gens {len(self.ideal_gb.vectors)}, c={self.c})")


def assemble(p, tail=None):
    """Assemble and audit the sequence; I = Im phi, shifted by c.

    The free-level audit checks phi(Ker eps) = 0, Im f = Ker(eps∘beta),
    condition (a) as exactness at M, injectivity of f, the rank additivity
    identity, and every spliced tail position.
    """
    rep_a = verify_condition_a(p)
    rep_b = verify_condition_b(p)
    if not rep_a.ok or not rep_b.ok:
        raise AssemblyError(
            f"conditions not satisfied: a={rep_a.ok} b={rep_b.ok}")
    audit = {"condition_a": rep_a.ok, "condition_b": rep_b.ok}

    # psi is well-defined: phi kills the presentation relations
    rel = relation_map(p)
    if not compose(p.phi, rel).is_zero():
        raise AssemblyError("phi does not vanish on Ker eps")
    audit["phi_kills_ker_eps"] = True

    # exactness at G: Im f = Ker(g) computed through the presentation
    ker_g = groebner.kernel(p.beta_map, target_relations=p.kere)
    im_f = groebner.SubmoduleGens(p.G, p.f.columns(), check=False)
    if not groebner.equal(ker_g, im_f):
        raise AssemblyError("exactness fails at G: Im f != Ker g")
    audit["exact_at_G"] = True
    audit["exact_at_M"] = rep_a.ok

    radd = rank_additivity(p)
    if not radd.ok:
        raise AssemblyError(
            f"rank additivity fails: {radd.details}")
    audit["rank_additivity"] = radd.ok

    if tail is None:
        modules = [p.G, p.F]
        maps = [p.f]
    else:
        # splice a resolution 0 -> T_k -> ... -> T_1 -> F -> 0 of the top
        # module: the sequence continues ... -> T_1 -> G with f ∘ tau
        if tail.modules[0] != p.F:
            raise AssemblyError("tail must resolve the top free module F")
        ok, failures = resolution.exactness_audit(tail)
        if not ok:
            raise AssemblyError(f"tail not exact at {failures}")
        tau = tail.differential(1)
        tau_im = groebner.SubmoduleGens(p.F, tau.columns(), check=False)
        one = p.field.one
        units = groebner.SubmoduleGens(
            p.F, [Vec(p.n, {(i, (0,) * p.n): one}) for i in range(p.F.rank)],
            check=False)
        if not groebner.contains(tau_im, units):
            raise AssemblyError("tail augmentation does not surject onto F")
        modules = [p.G] + tail.modules[1:]
        maps = [compose(p.f, tau)] + tail.maps[1:]
        audit["tail_exact"] = True
    free_complex = ChainComplex(modules, maps)
    if not free_complex.is_complex():
        raise AssemblyError("free part is not a complex after splicing")
    ok, failures = resolution.exactness_audit(free_complex)
    if not ok:
        raise AssemblyError(f"free part fails exactness at {failures}")

    module = FPModule(p.U, p.kere.vectors, label="M")
    entries = [p.phi.rows[0][j] for j in range(p.U.rank)]
    amb = GradedFreeModule(p.n, [0])
    ideal = groebner.SubmoduleGens(
        amb, [Vec(p.n, dict({(0, e): c for e, c in q.terms.items()}))
              for q in entries if q], check=False)
    ideal_gb = groebner.groebner(ideal)
    return BourbakiSequence(p, free_complex, p.beta_map, module, ideal,
                            ideal_gb, p.c, audit)


def _koszul_tail_complex(p):
    """Minimal resolution of M (⊕ N) by Koszul tails: B_0 = U upward."""
    n, t, d = p.n, p.t, p.d
    first_len = n - (t + 1)
    second_len = 1 if p.shape == "E_plus_top" else -1
    length = max(first_len, second_len if second_len > 0 else 0)
    mods = []
    for i in range(length + 1):
        parts = []
        if t + 1 + i <= n:
            parts.append(koszul.koszul_module(n, t + 1 + i))
        if p.shape == "E_plus_top" and n - 1 + i <= n:
            parts.append(koszul.koszul_module(n, n - 1 + i, d))
        mod = parts[0]
        for extra in parts[1:]:
            mod = mod.direct_sum(extra)
        mods.append(mod)
    maps = []
    for i in range(1, length + 1):
        src, tgt = mods[i], mods[i - 1]
        z = Polynomial.zero(n)
        rows = [[z] * src.rank for _ in range(tgt.rank)]
        c_off_s = c_off_t = 0
        if t + 1 + i <= n:
            dmap = koszul.koszul_differential(n, t + 1 + i, 0, p.field)
            for r in range(dmap.target.rank):
                for cidx in range(dmap.source.rank):
                    rows[r][cidx] = dmap.rows[r][cidx]
            c_off_s = dmap.source.rank
            c_off_t = dmap.target.rank
        if p.shape == "E_plus_top" and n - 1 + i <= n:
            dmap = koszul.koszul_differential(n, n - 1 + i, d, p.field)
            for r in range(dmap.target.rank):
                for cidx in range(dmap.source.rank):
                    rows[c_off_t + r][c_off_s + cidx] = dmap.rows[r][cidx]
        maps.append(ModuleMap(src, tgt, rows))
    return ChainComplex(mods, maps)


def cone_resolution(p, seq):
    """Free resolution of S/I as the cone over beta against the Koszul tails.

    The chain map lifts Ker phi -> M (+ N); the cone is twisted by (-c) and
    augmented by the row of phi so that F_0 = S.
    """
    B = _koszul_tail_complex(p)
    A = seq.free_complex
    alphas = [p.beta_map]
    prev = p.beta_map
    for i in range(1, A.length + 1):
        if i > B.length:
            empty = GradedFreeModule(p.n, [])
            zero = ModuleMap.zero(A.modules[i], empty)
            alphas.append(zero)
            prev = zero
            continue
        dB = B.differential(i)
        target_gens = groebner.SubmoduleGens(
            B.modules[i - 1], dB.columns(), check=False)
        need = compose(prev, A.differential(i))
        cols = []
        for j in range(need.source.rank):
            coeffs = groebner.lift(need.column(j), target_gens)
            if coeffs is None:
                raise AssemblyError("chain map lift failed; cone impossible")
            terms = {}
            for pos, q in enumerate(coeffs):
                for e, cc in q.terms.items():
                    terms[(pos, e)] = cc
            cols.append(Vec(p.n, terms))
        alpha_i = ModuleMap.from_columns(A.modules[i], B.modules[i], cols)
        alphas.append(alpha_i)
        prev = alpha_i
    chain = resolution.ChainMap(A, B, alphas)
    cone = resolution.mapping_cone(chain).twisted(-p.c)
    S = GradedFreeModule(p.n, [0])
    aug = ModuleMap(cone.modules[0], S, [list(p.phi.rows[0])])
    ok, viol = homogeneity_check(aug)
    if not ok:
        raise AssemblyError(f"augmentation not homogeneous: {viol}")
    return ChainComplex([S] + cone.modules, [aug] + cone.maps)


# ---------------------------------------------------------------------------
# synthetic instances (used by the property suite)
# ---------------------------------------------------------------------------

def synthesize_from_phi(n, t, shape, phi, d=0, field=RATIONALS):
    """Derive (beta, f) from a functional so that both conditions hold.

    beta spans Ker phi modulo Ker eps; G is free on the beta degrees; f is
    built from a minimal generating set of Ker(eps∘beta) and rejected when
    that kernel is not free (None is returned).  The provenance records
    whether <beta> needs fewer than rank G generators.
    """
    summands = [koszul.Summand(t + 1, 0, False)]
    u_parts = [koszul.koszul_module(n, t + 1)]
    if shape == "E_plus_top":
        summands.append(koszul.Summand(n - 1, d, False))
        u_parts.append(koszul.koszul_module(n, n - 1, d))
    U = u_parts[0]
    for part in u_parts[1:]:
        U = U.direct_sum(part)
    kere = _kernel_of_eps(n, t, d, shape, field)
    kere_gb = groebner.groebner(kere)
    kphi = groebner.kernel(phi)
    mg = groebner.minimal_generators(kphi)
    betas = [v for v in mg.vectors
             if not groebner.normal_form(v, kere_gb).is_zero()]
    if not betas:
        return None
    span_plus = groebner.submodule_sum(
        groebner.SubmoduleGens(U, betas, check=False), kere)
    if not groebner.equal(span_plus, kphi):
        return None
    degs = [b.homogeneous_degree(U) for b in betas]
    G = GradedFreeModule(n, degs)
    beta_map = ModuleMap.from_columns(G, U, betas)
    ker_g = groebner.kernel(beta_map, target_relations=kere)
    fg = groebner.minimal_generators(ker_g)
    fdegs = [v.homogeneous_degree(G) for v in fg.vectors]
    F = GradedFreeModule(n, fdegs)
    f = ModuleMap.from_columns(F, G, fg.vectors)
    if groebner.kernel(f).vectors:
        return None  # Ker g is not free at this size
    span = groebner.SubmoduleGens(U, betas, check=False)
    needed = len(groebner.minimal_generators(span).vectors)
    prov = {"synthetic": True, "beta_minimal_count": needed,
            "beta_redundant": needed < len(betas)}
    return BSequenceProblem(n, t, shape, betas, phi, f, d=d,
                            field=field, provenance=prov)


# ---------------------------------------------------------------------------
# manifests
# ---------------------------------------------------------------------------

def load_map_json(data, field=RATIONALS):
    """Map files: source/target twists plus row-major polynomial entries."""
    src = GradedFreeModule(_nvars(data), data["source_twists"])
    tgt = GradedFreeModule(_nvars(data), data["target_twists"])
    entries = data["entries"]
    if len(entries) != src.rank * tgt.rank:
        raise ValueError("entries length does not match the map shape")
    n = src.n
    rows = []
    it = iter(entries)
    for _ in range(tgt.rank):
        rows.append([parse_polynomial(next(it), n, field) for _ in range(src.rank)])
    return ModuleMap(src, tgt, rows, data.get("shift", 0))


def map_to_json(m):
    return {
        "n": m.source.n,
        "source_twists": list(m.source.twists),
        "target_twists": list(m.target.twists),
        "entries": [format_polynomial(p) for row in m.rows for p in row],
        "shift": m.shift,
    }


def _nvars(data):
    if "n" not in data:
        raise ValueError("map file needs the variable count n")
    return data["n"]


def phi_from_spec(n, t, d, shape, spec, field=RATIONALS):
    """Functional from manifest data: family coefficients or a raw vector."""
    dual_summands = [koszul.Summand(t + 1, 0, True)]
    if shape == "E_plus_top":
        dual_summands.append(koszul.Summand(n - 1, d, True))
    if "raw" in spec:
        vec = koszul.parse_koszul_vector(spec["raw"], n, dual_summands, field)
        return vec.to_functional(field), vec
    acc = koszul.KoszulVector(n, dual_summands, {})
    if spec.get("A"):
        fam = koszul.generate_A(n, t, field)
        pos = {L: i for i, L in enumerate(koszul.subsets(n, n - t))}
        for L, coeff in spec["A"]:
            L = tuple(L)
            if L not in pos:
                raise ValueError(f"unknown A-family subset {L}")
            member = fam[pos[L]].mul_poly(parse_polynomial(coeff, n, field))
            lifted = koszul.KoszulVector(
                n, dual_summands,
                {(0, I): q for (_, I), q in member.coeffs.items()})
            acc = acc + lifted
    if spec.get("B"):
        if shape != "E_plus_top":
            raise ValueError("B-family coefficients need the top summand")
        fam = koszul.generate_B(n, field)
        pos = {ij: k for k, ij in enumerate(koszul.b_index(n))}
        for i, j, coeff in spec["B"]:
            if (i, j) not in pos:
                raise ValueError(f"unknown B-family index ({i},{j})")
            member = fam[pos[(i, j)]].mul_poly(parse_polynomial(coeff, n, field))
            lifted = koszul.KoszulVector(
                n, dual_summands,
                {(1, I): q for (_, I), q in member.coeffs.items()})
            acc = acc + lifted
    return acc.to_functional(field), acc


def problem_from_manifest(data, field=RATIONALS, base_dir=None):
    """Build a problem from the JSON manifest schema."""
    n = data["n"]
    t = data["t"]
    shape = data["shape"]
    d = data.get("d", 0)
    c = data.get("c")
    summands = [koszul.Summand(t + 1, 0, False)]
    if shape == "E_plus_top":
        summands.append(koszul.Summand(n - 1, d, False))
    betas = [koszul.parse_koszul_vector(s, n, summands, field).to_vec()
             for s in data["beta"]]
    phi, phi_vec = phi_from_spec(n, t, d, shape, data["phi"], field)
    fdata = data["f"]
    if isinstance(fdata, str):
        path = fdata if base_dir is None else os.path.join(base_dir, fdata)
        with open(path, encoding="utf-8") as fh:
            fdata = json.load(fh)
    f = load_map_json(fdata, field)
    prov = {"phi_vector": koszul.format_koszul_vector(phi_vec)}
    return BSequenceProblem(n, t, shape, betas, phi, f, d=d, c=c,
                            field=field, provenance=prov)


def problem_to_manifest(p):
    """Normalized manifest (f inline, phi in raw form); reparses identically."""
    summands = [koszul.Summand(sm.s, sm.shift, True) for sm in p.summands]
    offs = [0]
    for sm in p.summands[:-1]:
        offs.append(offs[-1] + len(koszul.subsets(p.n, sm.s)))

    def vec_to_koszul(v):
        coeffs = {}
        for (pos, exp), cc in v.terms.items():
            si = 0
            while si + 1 < len(offs) and pos >= offs[si + 1]:
                si += 1
            I = koszul.subsets(p.n, p.summands[si].s)[pos - offs[si]]
            key = (si, I)
            poly = Polynomial(p.n, {exp: cc})
            coeffs[key] = coeffs[key] + poly if key in coeffs else poly
        return koszul.KoszulVector(
            p.n, [koszul.Summand(sm.s, sm.shift, False) for sm in p.summands],
            coeffs)

    phi_coeffs = {}
    for j, q in enumerate(p.phi.rows[0]):
        if q.is_zero():
            continue
        si = 0
        while si + 1 < len(offs) and j >= offs[si + 1]:
            si += 1
        I = koszul.subsets(p.n, p.summands[si].s)[j - offs[si]]
        phi_coeffs[(si, I)] = q
    phi_vec = koszul.KoszulVector(p.n, summands, phi_coeffs)
    return {
        "n": p.n, "t": p.t, "d": p.d, "c": p.c, "shape": p.shape,
        "beta": [koszul.format_koszul_vector(vec_to_koszul(b))
                 for b in p.betas],
        "phi": {"raw": koszul.format_koszul_vector(phi_vec)},
        "f": map_to_json(p.f),
    }
