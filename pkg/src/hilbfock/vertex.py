"""Chern-character operators, their orbifold analogues, and test oracles.

The degree-2k shift operator attached to a class is the normally ordered
expression

    -  sum_{l(lam)=k+2, |lam|=0} 1/lam!        a_lam(tau_*(alpha))
    +  sum_{l(lam)=k,   |lam|=0} (s(lam)-2)/24lam!  a_lam(tau_*(e alpha))
    +  canonical-class families with unevaluated universal weights,

with every lambda nonempty.  The canonical families are never evaluated:
either they vanish (K alpha = 0 and K^2 alpha = 0), or the computation happens
modulo an ideal containing K, where each family term provably lies in the
ideal subspace and is checked to vanish under reduction.  Anything else is
rejected.

The orbifold operator is the same expression without canonical families,
evaluated with the t-deformed bracket.
"""

from __future__ import annotations

from math import factorial

from .errors import EngineError, UnknownCoefficientsError
from .fock import FockVector
from .partitions import GenPartition, partitions_with_length
from .rational import ONE, Q, parse_q, qstr

MAIN = "main"
EULER = "euler"
K_IDEAL = "k_ideal"


class TermFamily:
    """One lambda-sum of an operator expression: all generalized partitions of
    a fixed length and weight zero, against a fixed coefficient class."""

    __slots__ = ("ell", "cls", "tag")

    def __init__(self, ell, cls, tag):
        self.ell = ell
        self.cls = cls
        self.tag = tag

    def weight_of(self, lam):
        """Rational weight of the lambda term; None for unevaluated families."""
        if self.tag == MAIN:
            return Q(-1, lam.sym_factor())
        if self.tag == EULER:
            return Q(lam.moment() - 2, 24 * lam.sym_factor())
        return None

    def __repr__(self):
        return f"TermFamily(ell={self.ell}, tag={self.tag})"


class OperatorExpression:
    """A degree-shift operator in normally ordered lambda-sum form."""

    __slots__ = ("k", "alpha", "families", "parity", "degree_shift")

    def __init__(self, model, k, alpha, families):
        self.k = k
        self.alpha = alpha
        self.families = families
        self.parity = model.class_parity(alpha)
        deg = model.class_degree(alpha)
        self.degree_shift = None if deg is None else 2 * k + deg

    @property
    def has_unknown_terms(self):
        return any(f.tag == K_IDEAL for f in self.families)

    def concrete_terms(self, max_weight, max_part=None):
        """Materialize the lambda terms that can act on vectors of weight up
        to max_weight: (weight-or-None, GenPartition, class, tag) tuples."""
        out = []
        for fam in self.families:
            for lam in _lambdas(fam.ell, max_weight, max_part):
                out.append((fam.weight_of(lam), lam, fam.cls, fam.tag))
        return out


def _lambdas(ell, max_ann_weight, max_part=None):
    """Nonempty generalized partitions with l(lam) = ell and |lam| = 0 whose
    annihilation side has weight <= max_ann_weight (and parts <= max_part)."""
    if ell < 2:
        return
    for w in range(1, max_ann_weight + 1):
        for pos_len in range(1, ell):
            neg_len = ell - pos_len
            for pos in partitions_with_length(w, pos_len):
                if max_part is not None and pos and pos[0] > max_part:
                    continue
                for neg in partitions_with_length(w, neg_len):
                    mult = {}
                    for r in neg:
                        mult[-r] = mult.get(-r, 0) + 1
                    for r in pos:
                        mult[r] = mult.get(r, 0) + 1
                    yield GenPartition(mult)


def chern_operator(model, k, alpha, include_canonical=True):
    """The operator cupping with the k-th Chern-character class of alpha.

    Canonical-class families are included (tagged, with unevaluated weights)
    exactly when their coefficient classes are nonzero.
    """
    families = []
    if not alpha.is_zero():
        families.append(TermFamily(k + 2, alpha, MAIN))
        e_alpha = model.mul(model.euler, alpha)
        if not e_alpha.is_zero():
            families.append(TermFamily(k, e_alpha, EULER))
        if include_canonical:
            k_alpha = model.mul(model.canonical, alpha)
            if not k_alpha.is_zero():
                families.append(TermFamily(k + 1, k_alpha, K_IDEAL))
            k2_alpha = model.mul(model.canonical, k_alpha)
            if not k2_alpha.is_zero():
                families.append(TermFamily(k, k2_alpha, K_IDEAL))
    return OperatorExpression(model, k, alpha, families)


def orbifold_operator(model, k, alpha):
    """The t-deformed analogue: no canonical-class families exist."""
    return chern_operator(model, k, alpha, include_canonical=False)


def _parts_multiset(mono):
    mult = {}
    for n, _ in mono:
        mult[n] = mult.get(n, 0) + 1
    return tuple(sorted(mult.items()))


def _submultisets(mult_items):
    """All nonempty submultisets as descending part tuples."""
    out = [()]
    for part, cnt in mult_items:
        out = [base + (part,) * t for base in out for t in range(cnt + 1)]
    return [tuple(sorted(s, reverse=True)) for s in out if s]


def apply_operator(fock, op, v, *, reduce=False, markers="forbid"):
    """Apply an OperatorExpression to a Fock vector.

    markers controls the canonical-class families with unknown weights:
      "forbid" - raise UnknownCoefficientsError if any are present;
      "check"  - allowed only modulo an ideal containing K: each family term
                 is applied with unit weight and must vanish under reduction;
      "collect"- return (result, marker_vectors) with the unit-weight term
                 values for the caller to account for.
    """
    collect = markers == "collect"
    marker_vecs = []
    if op.has_unknown_terms:
        if markers == "forbid":
            raise UnknownCoefficientsError(
                "unknown universal coefficients required (canonical class "
                "does not vanish; compute modulo an ideal containing it)")
        if markers == "check":
            model = fock.model
            if not model.has_ideal or not model.reduce_class(model.canonical).is_zero():
                raise UnknownCoefficientsError(
                    "unknown universal coefficients required (the restriction "
                    "ideal does not contain the canonical class)")

    groups = {}
    for mono, w in v.terms.items():
        groups.setdefault(_parts_multiset(mono), {})[mono] = w

    out = FockVector.zero()
    for parts, terms in groups.items():
        group = FockVector(terms)
        subsets = _submultisets(parts)
        for fam in op.families:
            if fam.ell < 2:
                continue
            for pos in subsets:
                neg_len = fam.ell - len(pos)
                if neg_len < 1:
                    continue
                w = sum(pos)
                for neg in partitions_with_length(w, neg_len):
                    mult = {}
                    for r in neg:
                        mult[-r] = mult.get(-r, 0) + 1
                    for r in pos:
                        mult[r] = mult.get(r, 0) + 1
                    lam = GenPartition(mult)
                    if fam.tag == K_IDEAL:
                        val = fock.apply_word_tau(lam.word(), fam.cls, group)
                        if val.is_zero():
                            continue
                        if collect:
                            marker_vecs.append(val)
                        elif not fock.reduce(val).is_zero():
                            raise EngineError(
                                "canonical-class marker term failed to vanish "
                                "under reduction; ideal is not K-closed")
                        continue
                    weight = fam.weight_of(lam)
                    if not weight:
                        continue
                    val = fock.apply_word_tau(lam.word(), fam.cls, group)
                    if not val.is_zero():
                        out = out + val.scaled(weight)
    if reduce:
        out = fock.reduce(out)
    if collect:
        return out, marker_vecs
    return out


def chern_class(fock, k, alpha, n, *, reduce=False, markers="forbid",
                orbifold=False):
    """G_k(alpha, n) (or its orbifold analogue): the operator applied to the
    level-n unit.  Level 0 gives 0 by convention."""
    if n <= 0:
        return FockVector.zero()
    build = orbifold_operator if orbifold else chern_operator
    op = build(fock.model, k, alpha)
    return apply_operator(fock, op, fock.unit(n), reduce=reduce, markers=markers)


def chern_class_partition_sums(fock, k, alpha, n):
    """Independent route to G_k(alpha, n): the closed creation-only partition
    sums (no canonical families; exact when K alpha = 0 = K^2 alpha).

    Used as a cross-check oracle against the operator route.
    """
    model = fock.model
    out = FockVector.zero()
    e_alpha = model.mul(model.euler, alpha)
    for j in range(0, k + 1):
        base = fock.unit(n - j - 1)
        if base.is_zero():
            continue
        for lam in partitions_with_length(j + 1, k - j + 1):
            sym = GenPartition.from_parts(lam).sym_factor()
            coeff = Q((-1) ** j, sym * factorial(j + 1))
            word = tuple(sorted(-r for r in lam))
            out = out + fock.apply_word_tau(word, alpha, base).scaled(coeff)
        if e_alpha.is_zero():
            continue
        for lam in partitions_with_length(j + 1, k - j - 1):
            gp = GenPartition.from_parts(lam)
            coeff = Q((-1) ** (j + 1) * (j + 1 + gp.moment() - 2),
                      24 * gp.sym_factor() * factorial(j + 1))
            word = tuple(sorted(-r for r in lam))
            out = out + fock.apply_word_tau(word, e_alpha, base).scaled(coeff)
    return out


# -- commutator oracles ---------------------------------------------------------


def lemma_ks_part_i(fock, ns, ms, alpha, beta):
    """Contraction formula for [a_{n_1}..a_{n_k}(tau alpha), a_{m_1}..a_{m_s}(tau beta)].

    Returns a function of a Fock vector computing rhs - lhs (zero iff the
    oracle matches on that vector)."""
    model = fock.model
    p = model.class_parity(alpha) * model.class_parity(beta)
    ab = model.mul(alpha, beta)

    def difference(v):
        av = fock.apply_word_tau(ns, alpha, fock.apply_word_tau(ms, beta, v))
        bv = fock.apply_word_tau(ms, beta, fock.apply_word_tau(ns, alpha, v))
        lhs = av - bv.scaled((-1) ** p)
        rhs = FockVector.zero()
        for t, nt in enumerate(ns):
            for j, mj in enumerate(ms):
                if nt != -mj:
                    continue
                word = ms[:j] + tuple(nu for u, nu in enumerate(ns) if u != t) + ms[j + 1:]
                rhs = rhs + fock.apply_word_tau(word, ab, v).scaled(fock.kappa * nt)
        return rhs - lhs

    return difference


def lemma_ks_part_ii(fock, ns, j, alpha):
    """Adjacent transposition inside a_{n_1}..a_{n_k}(tau alpha) with the
    Euler-class correction.  Returns the defect function of a vector."""
    model = fock.model
    e_alpha = model.mul(model.euler, alpha)

    def difference(v):
        lhs = fock.apply_word_tau(ns, alpha, v)
        swapped = ns[:j] + (ns[j + 1], ns[j]) + ns[j + 2:]
        rhs = fock.apply_word_tau(swapped, alpha, v)
        if ns[j] == -ns[j + 1]:
            rest = ns[:j] + ns[j + 2:]
            rhs = rhs + fock.apply_word_tau(rest, e_alpha, v).scaled(fock.kappa * ns[j])
        return rhs - lhs

    return difference


def nested_commutator_apply(fock, op_apply, op_parity, creations, v):
    """[[..[g, a_{-n_1}(c_1)], ..], a_{-n_i}(c_i)] applied to v.

    creations is a list of (n, class); op_apply computes g on a vector."""
    if not creations:
        return op_apply(v)
    model = fock.model
    head = creations[:-1]
    n, cls = creations[-1]
    par = model.class_parity(cls)
    head_par = (op_parity + sum(model.class_parity(c) for _, c in head)) % 2
    t1 = nested_commutator_apply(
        fock, op_apply, op_parity, head, fock.apply_heisenberg(-n, cls, v))
    t2 = fock.apply_heisenberg(
        -n, cls, nested_commutator_apply(fock, op_apply, op_parity, head, v))
    return t1 - t2.scaled((-1) ** (head_par * par))


def nonsense1_expansion(fock, op_apply, op_parity, creations):
    """The increasing-map expansion of g(a_{-n_1}(c_1)..a_{-n_b}(c_b)|0>) for
    an operator whose (k+2)-fold creation commutators vanish.

    creations is the list of (n_l, class_l); op_parity is the parity of g's
    cohomological degree.  Sum over i <= k+1 is implicit: maps with more
    entries give zero commutators, so all sizes up to b are included."""
    model = fock.model
    b = len(creations)
    pars = [model.class_parity(c) for _, c in creations]
    total = FockVector.zero()
    for size in range(0, b + 1):
        for sigma in _increasing_maps(b, size):
            chosen = set(sigma)
            rest = [l for l in range(b) if l not in chosen]
            sign_exp = op_parity * sum(pars[l] for l in rest)
            for jj in sigma:
                sign_exp += pars[jj] * sum(pars[l] for l in rest if l > jj)
            core = nested_commutator_apply(
                fock, op_apply, op_parity,
                [creations[l] for l in sigma], fock.vacuum())
            for l in reversed(rest):
                n, cls = creations[l]
                core = fock.apply_heisenberg(-n, cls, core)
            total = total + core.scaled((-1) ** (sign_exp % 2))
    return total


def _increasing_maps(b, size):
    from itertools import combinations
    return combinations(range(b), size)


def _signed_tuples(length, budget, max_mag):
    """All index tuples of the given length with entry magnitudes <= max_mag
    and total magnitude <= budget."""
    if length == 0:
        yield ()
        return
    for mag in range(1, min(budget - (length - 1), max_mag) + 1):
        for sign in (1, -1):
            for rest in _signed_tuples(length - 1, budget - mag, max_mag):
                yield (sign * mag,) + rest


def _class_reps(model):
    """Representative basis labels: unit, point, one element of every degree,
    and a second odd element so odd-odd pairs are exercised."""
    if model.dim <= 4:
        return list(range(model.dim))
    reps = {model.unit, model.point}
    for d in (1, 2, 3):
        found = [i for i in range(model.dim) if model.degrees[i] == d]
        if found:
            reps.add(found[0])
    odd = [i for i in range(model.dim) if model.parities[i] and i not in reps]
    if odd:
        reps.add(odd[0])
    return sorted(reps)


def _probe_vectors(fock, max_weight):
    """Deterministic family exercising the contraction paths: pool vectors,
    singly and doubly decorated pool vectors (odd pairs included)."""
    model = fock.model
    vecs = [fock.vacuum(), fock.unit(1)]
    reps = _class_reps(model)
    mid = max(2, max_weight - 3)
    for w in (mid, max_weight):
        vecs.append(fock.unit(w))
        for c in reps:
            for r in (1, 2):
                base = fock.unit(w - r)
                if base.is_zero():
                    continue
                vecs.append(fock.apply_heisenberg(-r, model.basis_class(c), base))
    odd = [i for i in reps if model.parities[i]]
    for c1 in odd:
        for c2 in odd:
            base = fock.apply_heisenberg(-1, model.basis_class(c2),
                                         fock.unit(max_weight - 3))
            v = fock.apply_heisenberg(-2, model.basis_class(c1), base)
            if not v.is_zero():
                vecs.append(v)
    uniq = []
    seen = set()
    for v in vecs:
        key = tuple(sorted(v.terms))
        if key and key not in seen:
            seen.add(key)
            uniq.append(v)
    return uniq


def verify_lemma_ks(model, part="both", ksum_max=5, weight_max=5,
                    bracket_scale=None, max_witnesses=5):
    """Sweep the transposition/contraction oracle over every instance with
    2 <= k+s <= ksum_max whose total index weight is at most weight_max, all
    representative label pairs, against the deterministic probe family."""
    from .fock import FockSpace
    fock = FockSpace(model, bracket_scale)
    vecs = _probe_vectors(fock, weight_max)
    reps = _class_reps(model)
    witnesses = []
    checked = 0

    def note(kind, **info):
        if len(witnesses) < max_witnesses:
            info["part"] = kind
            witnesses.append(info)

    shapes = {m: list(_signed_tuples(m, weight_max, weight_max))
              for m in range(2, ksum_max + 1)}
    weights = [v.constant_weight() for v in vecs]

    def viable(word_sum_neg, word_sum_pos, w):
        # final weight below zero kills both sides identically
        return w + word_sum_neg - word_sum_pos >= 0

    if part in ("i", "both"):
        for m, tuples in shapes.items():
            for combined in tuples:
                cre = -sum(i for i in combined if i < 0)
                ann = sum(i for i in combined if i > 0)
                todo = [vi for vi, w in enumerate(weights) if viable(cre, ann, w)]
                if not todo:
                    continue
                for k in range(1, m):
                    ns, ms = combined[:k], combined[k:]
                    for ca in reps:
                        alpha = model.basis_class(ca)
                        for cb in reps:
                            beta = model.basis_class(cb)
                            diff = lemma_ks_part_i(fock, ns, ms, alpha, beta)
                            for vi in todo:
                                checked += 1
                                if not diff(vecs[vi]).is_zero():
                                    note("i", ns=ns, ms=ms,
                                         alpha=model.basis[ca].name,
                                         beta=model.basis[cb].name)
                                    break
    if part in ("ii", "both"):
        for m, tuples in shapes.items():
            for ns in tuples:
                cre = -sum(i for i in ns if i < 0)
                ann = sum(i for i in ns if i > 0)
                todo = [vi for vi, w in enumerate(weights) if viable(cre, ann, w)]
                if not todo:
                    continue
                for j in range(m - 1):
                    for ca in reps:
                        alpha = model.basis_class(ca)
                        diff = lemma_ks_part_ii(fock, ns, j, alpha)
                        for vi in todo:
                            checked += 1
                            if not diff(vecs[vi]).is_zero():
                                note("ii", ns=ns, j=j, alpha=model.basis[ca].name)
                                break
    return {"ok": not witnesses, "instances_checked": checked,
            "witnesses": witnesses}


def verify_nonsense1(model, k_max=2, b_max=3, n_max=4, max_witnesses=5):
    """Sweep the increasing-map expansion against direct operator application
    for degree-shift operators with exactly vanishing higher commutators."""
    from itertools import product as iproduct

    from .fock import FockSpace
    fock = FockSpace(model)
    if not model.canonical.is_zero():
        raise UnknownCoefficientsError(
            "the expansion oracle needs exactly computable operators (K = 0)")
    labels = _class_reps(model)
    witnesses = []
    checked = 0
    for k in range(0, k_max + 1):
        for c0 in labels:
            op = chern_operator(model, k, model.basis_class(c0))

            def op_apply(v, _op=op):
                return apply_operator(fock, _op, v)

            for b in range(1, b_max + 1):
                for shape in _compositions(n_max, b):
                    for labs in iproduct(labels, repeat=b):
                        creations = [(n, model.basis_class(c))
                                     for n, c in zip(shape, labs)]
                        vec = fock.vacuum()
                        for n, cls in reversed(creations):
                            vec = fock.apply_heisenberg(-n, cls, vec)
                        if vec.is_zero():
                            continue
                        direct = op_apply(vec)
                        expanded = nonsense1_expansion(fock, op_apply, op.parity,
                                                       creations)
                        checked += 1
                        if direct != expanded:
                            if len(witnesses) < max_witnesses:
                                witnesses.append({
                                    "k": k, "alpha": model.basis[c0].name,
                                    "shape": shape,
                                    "labels": [model.basis[c].name for c in labs],
                                })
    return {"ok": not witnesses, "instances_checked": checked,
            "witnesses": witnesses}


def _compositions(n_max, b):
    """Ordered tuples of b positive integers with sum <= n_max."""
    if b == 0:
        yield ()
        return
    for first in range(1, n_max - b + 2):
        for rest in _compositions(n_max - first, b - 1):
            yield (first,) + rest


# -- the polynomial side of the affine-plane quotient ------------------------------


class SparsePolynomial:
    """Element of Q[q_1, q_2, ...]; monomials are sorted (var, exp) tuples."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {m: v for m, v in (terms or {}).items() if v}

    @classmethod
    def monomial(cls, exps, coeff=ONE):
        key = tuple(sorted((v, e) for v, e in exps.items() if e))
        return cls({key: Q(coeff)})

    @classmethod
    def one(cls):
        return cls({(): ONE})

    def is_zero(self):
        return not self.terms

    def items(self):
        return self.terms.items()

    def scaled(self, s):
        s = Q(s)
        if not s:
            return SparsePolynomial()
        return SparsePolynomial({m: v * s for m, v in self.terms.items()})

    def __add__(self, other):
        out = dict(self.terms)
        for m, v in other.terms.items():
            cur = out.get(m)
            val = v if cur is None else cur + v
            if val:
                out[m] = val
            elif cur is not None:
                del out[m]
        return SparsePolynomial(out)

    def __sub__(self, other):
        return self + other.scaled(-1)

    def __eq__(self, other):
        return isinstance(other, SparsePolynomial) and self.terms == other.terms

    def grading(self):
        """Degrees sum(i*e_i) present in the polynomial."""
        return {sum(v * e for v, e in m) for m in self.terms}

    def to_json(self):
        return {"terms": [
            {"coeff": qstr(self.terms[m]), "monomial": {str(v): e for v, e in m}}
            for m in sorted(self.terms)]}

    @classmethod
    def from_json(cls, obj):
        out = {}
        for item in obj["terms"]:
            key = tuple(sorted((int(v), int(e)) for v, e in item["monomial"].items()))
            out[key] = out.get(key, Q(0)) + parse_q(item["coeff"])
        return cls(out)

    def __repr__(self):
        bits = []
        for m in sorted(self.terms):
            mono = "*".join(f"q{v}^{e}" if e > 1 else f"q{v}" for v, e in m) or "1"
            bits.append(f"{qstr(self.terms[m])}*{mono}")
        return "SparsePolynomial(" + " + ".join(bits) + ")" if bits else "SparsePolynomial(0)"


def lehn_apply(k, poly):
    """The degree-preserving differential operator
    (-1)^k/(k+1)! sum q_{n_1+..+n_{k+1}} d_{n_1}..d_{n_{k+1}} with d_i = i d/dq_i.

    Only tuples supported on the exponents of poly act; the sum is finite.
    """
    lead = Q((-1) ** k, factorial(k + 1))
    out = SparsePolynomial()

    def rec(exps, factor, depth, total):
        nonlocal out
        if depth == k + 1:
            key = dict(exps)
            key[total] = key.get(total, 0) + 1
            out = out + SparsePolynomial.monomial(key, factor * lead)
            return
        for var in list(exps):
            e = exps.get(var)
            if not e:
                continue
            exps[var] = e - 1
            rec(exps, factor * var * e, depth + 1, total + var)
            exps[var] = e

    for mono, w in poly.terms.items():
        rec(dict(mono), w, 0, 0)
    return out


def phi_map(v, model):
    """Vector-space isomorphism with Q[q_1, q_2, ...]: unit-labelled
    a_{-n_1}(1)...a_{-n_k}(1)|0> goes to q_{n_1}...q_{n_k}."""
    unit = model.unit
    out = SparsePolynomial()
    for mono, w in v.terms.items():
        exps = {}
        for n, c in mono:
            if c != unit:
                raise EngineError("phi is defined on unit-labelled monomials only")
            exps[n] = exps.get(n, 0) + 1
        out = out + SparsePolynomial.monomial(exps, w)
    return out
