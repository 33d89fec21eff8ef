"""Heisenberg Fock space over a surface model.

Vectors are exact-rational combinations of normally ordered creation
monomials a_{-n_1}(c_1)...a_{-n_k}(c_k)|0> with basis-element labels.
Monomials are stored canonically: entries (n, c) sorted by n descending,
then label index ascending.  Reordering costs the Koszul sign of each
odd-odd transposition, and a repeated odd entry kills the monomial.

One normal-ordering engine serves both brackets: the Hilbert-scheme one,
[a_m(x), a_n(y)] = -m delta_{m,-n} int(xy), has bracket scale -1, and the
t-deformed orbifold one, t^{1/3} m delta_{m,-n} int(xy), has bracket scale
s = t^{1/3}.
"""

from __future__ import annotations

from itertools import combinations_with_replacement
from math import factorial

from .errors import EngineError, ModelError, WeightError
from .partitions import (PartitionFunction, enumerate_partition_functions,
                         unit_normalization)
from .rational import ONE, Q, parse_q, qstr


def mono_weight(mono):
    return sum(n for n, _ in mono)


class FockVector:
    """Sparse map from canonical creation monomials to rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {m: v for m, v in (terms or {}).items() if v}

    @classmethod
    def vacuum(cls):
        return cls({(): ONE})

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def monomial(cls, mono, coeff=ONE):
        return cls({tuple(mono): Q(coeff)})

    def is_zero(self):
        return not self.terms

    def items(self):
        return self.terms.items()

    def scaled(self, s):
        s = Q(s)
        if not s:
            return FockVector.zero()
        return FockVector({m: v * s for m, v in self.terms.items()})

    def __add__(self, other):
        out = dict(self.terms)
        for m, v in other.terms.items():
            cur = out.get(m)
            if cur is None:
                out[m] = v
            else:
                cur = cur + v
                if cur:
                    out[m] = cur
                else:
                    del out[m]
        return FockVector(out)

    def __sub__(self, other):
        return self + other.scaled(-1)

    def __neg__(self):
        return self.scaled(-1)

    def __eq__(self, other):
        return isinstance(other, FockVector) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted((m, qstr(v)) for m, v in self.terms.items())))

    def constant_weight(self):
        """The common weight of all monomials; WeightError if mixed, None if 0."""
        weights = {mono_weight(m) for m in self.terms}
        if not weights:
            return None
        if len(weights) > 1:
            raise WeightError(f"vector mixes weights {sorted(weights)}")
        return weights.pop()

    def to_json(self, model):
        out = []
        for mono in sorted(self.terms):
            out.append({
                "coeff": qstr(self.terms[mono]),
                "monomial": [[n, model.basis[c].name] for n, c in mono],
            })
        return out

    @classmethod
    def from_json(cls, model, obj):
        terms = {}
        for item in obj:
            mono = tuple((int(n), model.index_of(name)) for n, name in item["monomial"])
            terms[mono] = terms.get(mono, Q(0)) + parse_q(item["coeff"])
        return cls(terms)

    def __repr__(self):
        bits = []
        for mono in sorted(self.terms):
            word = "".join(f"a[-{n}]({c})" for n, c in mono) or "|0>"
            bits.append(f"{qstr(self.terms[mono])}*{word}")
        return "FockVector(" + " + ".join(bits) + ")" if bits else "FockVector(0)"


class FockSpace:
    """Normal-ordering engine bound to a model and a bracket scale."""

    def __init__(self, model, bracket_scale=None):
        self.model = model
        self.kappa = Q(bracket_scale) if bracket_scale is not None else Q(-1)
        if not self.kappa:
            raise EngineError("bracket scale must be nonzero")

    # -- elementary operators ----------------------------------------------------

    def create_raw(self, n, c, terms):
        """a_{-n}(e_c) on a raw term dict, n > 0."""
        parities = self.model.parities
        par = parities[c]
        key = (-n, c)
        out = {}
        for mono, w in terms.items():
            pos = 0
            odd_passed = 0
            dead = False
            for nj, cj in mono:
                kj = (-nj, cj)
                if kj < key:
                    pos += 1
                    odd_passed += parities[cj]
                    continue
                if kj == key and par:
                    dead = True
                break
            if dead:
                continue
            if par and odd_passed % 2:
                w = -w
            new = mono[:pos] + ((n, c),) + mono[pos:]
            cur = out.get(new)
            out[new] = w if cur is None else cur + w
        return {m: v for m, v in out.items() if v}

    def annihilate_raw(self, m, c, terms):
        """a_{m}(e_c) on a raw term dict, m > 0: commute rightward, kill |0>."""
        parities = self.model.parities
        pair_row = self.model.pairing[c]
        par = parities[c]
        kap_m = self.kappa * m
        out = {}
        for mono, w in terms.items():
            sign_w = w
            for pos, (nj, cj) in enumerate(mono):
                if nj == m:
                    pv = pair_row[cj]
                    if pv:
                        rest = mono[:pos] + mono[pos + 1:]
                        add = sign_w * kap_m * pv
                        cur = out.get(rest)
                        out[rest] = add if cur is None else cur + add
                if par and parities[cj]:
                    sign_w = -sign_w
        return {m_: v for m_, v in out.items() if v}

    def apply_basis_raw(self, idx, c, terms):
        """a_{idx}(e_c): idx < 0 creates, idx > 0 annihilates."""
        if idx < 0:
            return self.create_raw(-idx, c, terms)
        return self.annihilate_raw(idx, c, terms)

    # -- public operator application ------------------------------------------------

    def apply_heisenberg(self, n, cls, v):
        """a_n(cls) applied to v; n < 0 creation, n > 0 annihilation."""
        if n == 0:
            raise EngineError("Heisenberg index 0 is not an operator")
        out = {}
        for i, coeff in cls.items():
            part = self.apply_basis_raw(n, i, v.terms)
            for mono, w in part.items():
                cur = out.get(mono)
                val = w * coeff if cur is None else cur + w * coeff
                if val:
                    out[mono] = val
                elif cur is not None:
                    del out[mono]
        return FockVector(out)

    def apply_word_tau(self, indices, cls, v):
        """The operator a_{i_1}...a_{i_k}(tau_{k*}(cls)) applied to v.

        indices is the operator word left to right; the rightmost factor acts
        first.  k = 0 degenerates to multiplication by the integral of cls.
        """
        k = len(indices)
        if k == 0:
            return v.scaled(self.model.integrate(cls))
        out = {}
        for w, slots in self.model.diagonal_pushforward(cls, k):
            cur = v.terms
            for j in range(k - 1, -1, -1):
                cur = self.apply_basis_raw(indices[j], slots[j], cur)
                if not cur:
                    break
            for mono, ww in cur.items():
                add = w * ww
                prev = out.get(mono)
                val = add if prev is None else prev + add
                if val:
                    out[mono] = val
                elif prev is not None:
                    del out[mono]
        return FockVector(out)

    def apply_gen_partition(self, lam, cls, v):
        """a_lambda(tau_*(cls)) for a generalized partition lambda, with the
        fixed creation-before-annihilation operator order."""
        return self.apply_word_tau(lam.word(), cls, v)

    # -- distinguished vectors and bases ------------------------------------------------

    def vacuum(self):
        return FockVector.vacuum()

    def unit(self, n):
        """1_{-n}|0> = a_{-1}(1)^n / n!, the unit of the level-n component."""
        if n < 0:
            return FockVector.zero()
        mono = ((1, self.model.unit),) * n
        return FockVector({mono: Q(1, factorial(n))})

    def b_class(self, rho, n):
        """The Nakajima-style basis class attached to rho at level n."""
        model = self.model
        unit = model.unit
        cost = rho.cost(unit)
        if n < cost:
            return FockVector.zero()
        unit_parts = [1] * (n - cost)
        entries = []
        for c, parts in rho.parts.items():
            if c == unit:
                unit_parts.extend(r + 1 for r in parts)
            else:
                if model.parities[c] and len(set(parts)) != len(parts):
                    return FockVector.zero()
                entries.extend((r, c) for r in parts)
        entries.extend((r, unit) for r in unit_parts)
        mono = tuple(sorted(entries, key=lambda e: (-e[0], e[1])))
        return FockVector({mono: unit_normalization(unit_parts)})

    def enumerate_basis(self, n):
        """All admissible rho at level n over the working classes, in the
        deterministic (cost, key) order."""
        return enumerate_partition_functions(self.model, n)

    def expand_in_basis(self, v, n):
        """Exact coordinates of v in the level-n basis {b_rho(n)}.

        Monomial labels must lie in the working classes (reduce first when the
        model has an ideal); each monomial corresponds to exactly one rho.
        """
        model = self.model
        unit = model.unit
        pivots = model.ideal_pivots
        coords = {}
        for mono, w in v.terms.items():
            if mono_weight(mono) != n:
                raise WeightError(f"monomial of weight {mono_weight(mono)} at level {n}")
            unit_parts = []
            parts = {}
            for nj, cj in mono:
                if cj in pivots:
                    raise EngineError("vector is not reduced modulo the ideal")
                if cj == unit:
                    unit_parts.append(nj)
                    if nj >= 2:
                        parts.setdefault(unit, []).append(nj - 1)
                else:
                    parts.setdefault(cj, []).append(nj)
            rho = PartitionFunction(
                {c: tuple(sorted(p, reverse=True)) for c, p in parts.items()})
            coord = w / unit_normalization(unit_parts)
            cur = coords.get(rho)
            val = coord if cur is None else cur + coord
            if val:
                coords[rho] = val
            elif cur is not None:
                del coords[rho]
        return coords

    # -- ideal machinery ------------------------------------------------------------

    def reduce(self, v):
        """iota_n^*: kill every monomial containing an ideal-labelled factor."""
        pivots = self.model.ideal_pivots
        if not pivots:
            raise ModelError("model has no restriction ideal")
        return FockVector({mono: w for mono, w in v.terms.items()
                           if not any(c in pivots for _, c in mono)})

    def in_ideal(self, v):
        """Membership in I^[n]: every monomial carries an ideal label."""
        pivots = self.model.ideal_pivots
        return all(any(c in pivots for _, c in mono) for mono in v.terms)

    def annihilate_point(self, v):
        """-a_1([x]); sends b_rho(n+1) to b_rho(n)."""
        out = self.annihilate_raw(1, self.model.point, v.terms)
        return FockVector(out).scaled(-1)

    # -- bookkeeping -----------------------------------------------------------------

    def monomial_degree(self, mono):
        degs = self.model.degrees
        return sum(2 * (n - 1) + degs[c] for n, c in mono)

    def vector_degree(self, v):
        """Cohomological degree of a homogeneous vector (None for 0)."""
        degs = {self.monomial_degree(m) for m in v.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise WeightError(f"vector mixes degrees {sorted(degs)}")
        return degs.pop()

    def enumerate_monomials(self, n, working=None):
        """All canonical monomials of weight n with labels in the working set."""
        model = self.model
        if working is None:
            working = list(range(model.dim))
        working = sorted(working)
        parities = model.parities
        out = []

        def labels(t):
            for combo in combinations_with_replacement(working, t):
                ok = True
                for a, b in zip(combo, combo[1:]):
                    if a == b and parities[a]:
                        ok = False
                        break
                if ok:
                    yield combo

        def rec(remaining, max_part, acc):
            if remaining == 0:
                out.append(tuple(acc))
                return
            for m in range(min(max_part, remaining), 0, -1):
                for t in range(1, remaining // m + 1):
                    for lab in labels(t):
                        rec(remaining - m * t, m - 1,
                            acc + [(m, c) for c in lab])

        rec(n, n, [])
        return out


def heisenberg_witnesses(fock, max_weight=5, max_index=4):
    """Check the bracket relation on all basis label pairs, |m|,|n| <= max_index,
    against every monomial of weight <= max_weight; returns violation witnesses.
    """
    model = fock.model
    dim = model.dim
    parities = model.parities
    kappa = fock.kappa
    monos = [m for w in range(max_weight + 1) for m in fock.enumerate_monomials(w)]
    indices = [i for i in range(-max_index, max_index + 1) if i]
    single = {}

    def app(idx, c, mono):
        key = (idx, c, mono)
        res = single.get(key)
        if res is None:
            res = fock.apply_basis_raw(idx, c, {mono: ONE})
            single[key] = res
        return res

    def compose(idx, c, terms):
        out = {}
        for mono, w in terms.items():
            for m2, w2 in app(idx, c, mono).items():
                cur = out.get(m2)
                val = w * w2 if cur is None else cur + w * w2
                if val:
                    out[m2] = val
                elif cur is not None:
                    del out[m2]
        return out

    witnesses = []
    ops = [(m, i) for m in indices for i in range(dim)]
    for mono in monos:
        for oi in range(len(ops)):
            m, i = ops[oi]
            vm = app(m, i, mono)
            for oj in range(oi, len(ops)):
                n, j = ops[oj]
                lhs = compose(m, i, app(n, j, mono))
                rhs = compose(n, j, vm)
                sign = -1 if parities[i] and parities[j] else 1
                comm = dict(lhs)
                for mk, v in rhs.items():
                    cur = comm.get(mk)
                    val = -sign * v if cur is None else cur - sign * v
                    if val:
                        comm[mk] = val
                    elif cur is not None:
                        del comm[mk]
                expected = {}
                if m == -n:
                    c0 = kappa * m * model.pairing[i][j]
                    if c0:
                        expected = {mono: c0}
                if comm != expected:
                    witnesses.append({
                        "m": m, "alpha": model.basis[i].name,
                        "n": n, "beta": model.basis[j].name,
                        "monomial": [[p, model.basis[c].name] for p, c in mono],
                    })
                    if len(witnesses) >= 10:
                        return witnesses
    return witnesses
