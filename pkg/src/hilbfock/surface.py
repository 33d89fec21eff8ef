"""Finite graded super-commutative Frobenius algebras modelling H*(Xbar).

A SurfaceModel is a finite graded algebra with degrees in 0..4, a unit, a
point class normalizing the integration functional, distinguished Euler and
canonical classes, and an optional restriction ideal encoding a
quasi-projective open piece with surjective restriction.  Diagonal
pushforwards (the Kuenneth expansion of tau_{k*}) are computed from the dual
basis of the integration pairing and cached per basis element.
"""

from __future__ import annotations

import hashlib
import json

from .errors import ModelError
from .linalg import Echelon, row_add_scaled
from .rational import ONE, Q, parse_q, qstr


class BasisElement:
    __slots__ = ("name", "degree")

    def __init__(self, name, degree):
        self.name = name
        self.degree = int(degree)

    @property
    def parity(self):
        return self.degree % 2

    def __repr__(self):
        return f"BasisElement({self.name!r}, {self.degree})"


class GradedClass:
    """Sparse exact-rational coefficient vector over a model basis.

    Zero coefficients are never stored; instances are treated as immutable.
    """

    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        self.c = {i: Q(v) for i, v in (coeffs or {}).items() if v}

    def is_zero(self):
        return not self.c

    def items(self):
        return self.c.items()

    def get(self, i):
        return self.c.get(i, Q(0))

    def scaled(self, s):
        s = Q(s)
        if not s:
            return GradedClass()
        return GradedClass({i: v * s for i, v in self.c.items()})

    def __add__(self, other):
        out = dict(self.c)
        row_add_scaled(out, other.c, ONE)
        return GradedClass(out)

    def __sub__(self, other):
        out = dict(self.c)
        row_add_scaled(out, other.c, -ONE)
        return GradedClass(out)

    def __neg__(self):
        return self.scaled(-1)

    def __eq__(self, other):
        return isinstance(other, GradedClass) and self.c == other.c

    def __hash__(self):
        return hash(self.key())

    def key(self):
        return tuple(sorted((i, qstr(v)) for i, v in self.c.items()))

    def __repr__(self):
        return f"GradedClass({ {i: qstr(v) for i, v in sorted(self.c.items())} })"


class KunnethTensor:
    """Sum of decomposable tensors: list of (weight, k-tuple of basis indices)."""

    __slots__ = ("k", "terms")

    def __init__(self, k, terms):
        self.k = k
        self.terms = [(Q(w), tuple(f)) for w, f in terms if w]

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)


class SurfaceModel:
    def __init__(self, basis, products, unit, point, euler, canonical,
                 ideal=None, name=None):
        """products maps (i, j) basis index pairs to coefficient dicts; pairs
        may be partial: the unit row and the super-transpose are filled in,
        anything else missing is zero."""
        self.name = name or "model"
        self.basis = list(basis)
        self.dim = len(self.basis)
        self.unit = unit
        self.point = point
        self.degrees = [b.degree for b in self.basis]
        self.parities = [b.degree % 2 for b in self.basis]
        self._names = {b.name: i for i, b in enumerate(self.basis)}
        if len(self._names) != self.dim:
            raise ModelError("duplicate basis names")
        self.table = self._fill_table(products)
        self.euler = euler
        self.canonical = canonical
        self.ideal_gens = list(ideal or [])
        self.pairing = [[self._raw_integral(self.table[(i, j)]) for j in range(self.dim)]
                        for i in range(self.dim)]
        self.gram_inv = self._invert_pairing()
        self.ideal_pivots = self._saturate_ideal()
        self._tau = {}
        self.content_hash = hashlib.sha256(
            json.dumps(self.to_json(), sort_keys=True).encode()).hexdigest()

    # -- construction helpers -------------------------------------------------

    def _fill_table(self, products):
        table = {}
        for (i, j), coeffs in products.items():
            table[(i, j)] = {k: Q(v) for k, v in coeffs.items() if v}
        for i in range(self.dim):
            table.setdefault((self.unit, i), {i: ONE})
            table.setdefault((i, self.unit), {i: ONE})
        for (i, j) in list(table):
            if (j, i) not in table:
                sign = -1 if self.parities[i] and self.parities[j] else 1
                table[(j, i)] = {k: v * sign for k, v in table[(i, j)].items()}
        for i in range(self.dim):
            for j in range(self.dim):
                table.setdefault((i, j), {})
        return table

    def _raw_integral(self, coeffs):
        return coeffs.get(self.point, Q(0))

    def _invert_pairing(self):
        n = self.dim
        # Gauss-Jordan on the augmented matrix
        aug = [[self.pairing[i][j] for j in range(n)] + [ONE if j == i else Q(0) for j in range(n)]
               for i in range(n)]
        for col in range(n):
            piv = None
            for r in range(col, n):
                if aug[r][col]:
                    piv = r
                    break
            if piv is None:
                return None  # degenerate pairing; validate() reports it
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = Q(1) / aug[col][col]
            aug[col] = [v * inv for v in aug[col]]
            for r in range(n):
                if r != col and aug[r][col]:
                    f = aug[r][col]
                    aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
        return [row[n:] for row in aug]

    def _saturate_ideal(self):
        """Saturate the declared generators to a multiplicatively closed span
        and return the pivot basis indices; the span must be basis-aligned."""
        if not self.ideal_gens:
            return frozenset()
        ech = Echelon()
        queue = [dict(g.items()) for g in self.ideal_gens]
        while queue:
            row = queue.pop()
            if ech.insert(row) is None:
                continue
            for j in range(self.dim):
                prod = {}
                for i, v in row.items():
                    row_add_scaled(prod, self.table[(i, j)], v)
                if prod:
                    queue.append(prod)
        ech.back_reduce()
        pivots = set()
        for p, row in ech.rows.items():
            if len(row) != 1:
                raise ModelError(
                    "restriction ideal is not aligned with the basis; "
                    "supply an adapted basis (pivot %r has a mixed row)" % (p,))
            pivots.add(p)
        if self.unit in pivots:
            raise ModelError("restriction ideal contains the unit")
        return frozenset(pivots)

    # -- basic queries ---------------------------------------------------------

    @property
    def has_ideal(self):
        return bool(self.ideal_pivots)

    def index_of(self, name):
        try:
            return self._names[name]
        except KeyError:
            raise ModelError(f"unknown basis class {name!r}") from None

    def basis_class(self, i):
        return GradedClass({i: ONE})

    def class_from_json(self, obj):
        coeffs = {}
        for item in obj:
            coeffs[self.index_of(item["name"])] = parse_q(item["coeff"])
        return GradedClass(coeffs)

    def class_to_json(self, g):
        return [{"name": self.basis[i].name, "coeff": qstr(v)}
                for i, v in sorted(g.items())]

    def working_classes(self):
        """Basis indices labelling the quotient (all of them if projective)."""
        return [i for i in range(self.dim) if i not in self.ideal_pivots]

    def class_degree(self, g):
        """Degree of a homogeneous class, None for 0, ValueError if mixed."""
        degs = {self.degrees[i] for i in g.c}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("class is not homogeneous")
        return degs.pop()

    def class_parity(self, g):
        pars = {self.parities[i] for i in g.c}
        if len(pars) > 1:
            raise ValueError("class has mixed parity")
        return pars.pop() if pars else 0

    # -- ring operations -------------------------------------------------------

    def mul(self, a, b):
        out = {}
        for i, u in a.items():
            for j, v in b.items():
                prod = self.table.get((i, j))
                if prod is None:
                    raise ModelError("class does not fit this model's basis")
                if prod:
                    row_add_scaled(out, prod, u * v)
        return GradedClass(out)

    def integrate(self, a):
        """Coefficient of the point class (the integral is normalized so that
        the point class integrates to 1)."""
        return a.get(self.point)

    def pair(self, i, j):
        return self.pairing[i][j]

    # -- diagonal pushforward ----------------------------------------------------

    def tau_basis(self, b, k):
        """tau_{k*} of the b-th basis element as a list of (weight, slots)."""
        key = (b, k)
        cached = self._tau.get(key)
        if cached is not None:
            return cached
        if self.gram_inv is None:
            raise ModelError("degenerate Frobenius pairing")
        if k == 1:
            out = [(ONE, (b,))]
        elif k == 2:
            out = []
            for i in range(self.dim):
                ei = self.table[(b, i)]
                if not ei:
                    continue
                for j in range(self.dim):
                    g = self.gram_inv[i][j]
                    if g:
                        for u, cu in ei.items():
                            out.append((g * cu, (u, j)))
            out = _collect(out)
        else:
            out = []
            for w, slots in self.tau_basis(b, k - 1):
                for w2, pair in self.tau_basis(slots[0], 2):
                    out.append((w * w2, pair + slots[1:]))
            out = _collect(out)
        self._tau[key] = out
        return out

    def diagonal_pushforward(self, a, k):
        """tau_{k*}(a) for k >= 1, as a KunnethTensor."""
        if k < 1:
            raise ValueError("k must be positive")
        terms = []
        for b, coeff in a.items():
            for w, slots in self.tau_basis(b, k):
                terms.append((w * coeff, slots))
        return KunnethTensor(k, _collect(terms))

    def euler_from_pairing(self):
        """m(tau_{2*}(1)): the class the normal-ordering calculus sees as the
        Euler class.  Equals chi(X)[x] for any graded nondegenerate pairing."""
        out = GradedClass()
        for w, (i, j) in self.tau_basis(self.unit, 2):
            out = out + GradedClass(self.table[(i, j)]).scaled(w)
        return out

    # -- ideal reduction --------------------------------------------------------

    def reduce_class(self, a):
        """Representative of iota^*(a): drop the adapted ideal coordinates."""
        if not self.has_ideal:
            raise ModelError("model has no restriction ideal")
        return GradedClass({i: v for i, v in a.items() if i not in self.ideal_pivots})

    def with_ideal(self, gens, suffix="quot"):
        """Same algebra with a replacement restriction ideal.

        gens: iterable of GradedClass or basis indices."""
        classes = [g if isinstance(g, GradedClass) else self.basis_class(g)
                   for g in gens]
        return SurfaceModel(
            self.basis,
            {ij: dict(coeffs) for ij, coeffs in self.table.items()},
            self.unit, self.point, self.euler, self.canonical,
            ideal=classes, name=f"{self.name}+{suffix}")

    def without_ideal(self):
        return SurfaceModel(
            self.basis,
            {ij: dict(coeffs) for ij, coeffs in self.table.items()},
            self.unit, self.point, self.euler, self.canonical,
            ideal=[], name=f"{self.name}-bar")

    # -- validation ---------------------------------------------------------------

    def validate(self, check_euler=False):
        """Return (errors, warnings); empty errors means the model is usable."""
        errors = []
        warnings = []
        deg = self.degrees
        if any(d < 0 or d > 4 for d in deg):
            errors.append("basis degrees must lie in 0..4")
        if deg[self.unit] != 0:
            errors.append("unit must have degree 0")
        if deg[self.point] != 4:
            errors.append("point class must have degree 4")
        if sum(1 for d in deg if d == 0) != 1:
            errors.append("exactly one degree-0 basis element expected")

        for (i, j), coeffs in self.table.items():
            d = deg[i] + deg[j]
            for k, v in coeffs.items():
                if deg[k] != d:
                    errors.append(
                        f"product {self.basis[i].name}*{self.basis[j].name} "
                        f"is not homogeneous of degree {d}")
                    break
            if d > 4 and coeffs:
                errors.append(
                    f"product {self.basis[i].name}*{self.basis[j].name} "
                    "exceeds the top degree but is nonzero")

        for i in range(self.dim):
            if self.table[(self.unit, i)] != {i: ONE}:
                errors.append(f"unit law fails at {self.basis[i].name}")
                break

        for i in range(self.dim):
            for j in range(self.dim):
                sign = -1 if self.parities[i] and self.parities[j] else 1
                ij = self.table[(i, j)]
                ji = {k: v * sign for k, v in self.table[(j, i)].items()}
                if ij != ji:
                    errors.append(
                        f"super-commutativity fails at "
                        f"({self.basis[i].name}, {self.basis[j].name})")

        for i in range(self.dim):
            if self.parities[i] and self.table[(i, i)]:
                errors.append(f"odd class {self.basis[i].name} has nonzero square")

        assoc_witness = self._associativity_witness()
        if assoc_witness:
            errors.append("associativity fails at (%s, %s, %s)" % assoc_witness)

        if self.gram_inv is None:
            errors.append("Frobenius pairing degenerate")

        try:
            ce = self.class_degree(self.canonical)
            if ce not in (None, 2):
                errors.append("canonical class must have degree 2")
        except ValueError:
            errors.append("canonical class is not homogeneous")
        try:
            ee = self.class_degree(self.euler)
            if ee not in (None, 4):
                errors.append("Euler class must have degree 4")
        except ValueError:
            errors.append("Euler class is not homogeneous")

        if check_euler:
            b1 = sum(1 for d in deg if d == 1)
            b2 = sum(1 for d in deg if d == 2)
            chi = Q(2 - 2 * b1 + b2)
            if self.integrate(self.euler) != chi:
                warnings.append(
                    f"Euler number {qstr(self.integrate(self.euler))} differs from "
                    f"2 - 2*b1 + b2 = {qstr(chi)}")
            if self.gram_inv is not None and self.euler != self.euler_from_pairing():
                warnings.append(
                    "declared Euler class differs from the diagonal self-intersection "
                    "m(tau_2*(1)); the transposition calculus sees the latter")
        return errors, warnings

    def _associativity_witness(self):
        for i in range(self.dim):
            gi = self.basis_class(i)
            for j in range(self.dim):
                gj = self.basis_class(j)
                ij = self.mul(gi, gj)
                for k in range(self.dim):
                    gk = self.basis_class(k)
                    if self.mul(ij, gk) != self.mul(gi, self.mul(gj, gk)):
                        return (self.basis[i].name, self.basis[j].name,
                                self.basis[k].name)
        return None

    # -- serialization ---------------------------------------------------------------

    def to_json(self):
        products = []
        for i in range(self.dim):
            for j in range(self.dim):
                coeffs = self.table[(i, j)]
                if coeffs and not (i == self.unit or j == self.unit):
                    products.append({
                        "left": self.basis[i].name,
                        "right": self.basis[j].name,
                        "result": [{"name": self.basis[k].name, "coeff": qstr(v)}
                                   for k, v in sorted(coeffs.items())],
                    })
        return {
            "name": self.name,
            "basis": [{"name": b.name, "degree": b.degree} for b in self.basis],
            "products": products,
            "unit": self.basis[self.unit].name,
            "point": self.basis[self.point].name,
            "euler": self.class_to_json(self.euler),
            "canonical": self.class_to_json(self.canonical),
            "ideal": [self.class_to_json(g) for g in self.ideal_gens],
        }

    @classmethod
    def from_json(cls, obj):
        basis = [BasisElement(b["name"], b["degree"]) for b in obj["basis"]]
        names = {b.name: i for i, b in enumerate(basis)}

        def idx(name):
            try:
                return names[name]
            except KeyError:
                raise ModelError(f"unknown basis class {name!r}") from None

        products = {}
        for p in obj.get("products", []):
            coeffs = {idx(t["name"]): parse_q(t["coeff"]) for t in p["result"]}
            products[(idx(p["left"]), idx(p["right"]))] = coeffs
        model = cls.__new__(cls)

        def cls_from(items):
            return GradedClass({idx(t["name"]): parse_q(t["coeff"]) for t in items})

        SurfaceModel.__init__(
            model, basis, products, idx(obj["unit"]), idx(obj["point"]),
            cls_from(obj.get("euler", [])), cls_from(obj.get("canonical", [])),
            ideal=[cls_from(g) for g in obj.get("ideal", [])],
            name=obj.get("name"))
        return model

    def __repr__(self):
        return f"SurfaceModel({self.name!r}, dim={self.dim}, ideal={sorted(self.ideal_pivots)})"


def _collect(terms):
    acc = {}
    for w, slots in terms:
        if w:
            acc[slots] = acc.get(slots, Q(0)) + w
    return [(w, slots) for slots, w in acc.items() if w]


def validate_model(model, check_euler=False):
    """Diagnostics list for the spec-facing validation entry point."""
    errors, warnings = model.validate(check_euler=check_euler)
    return errors + [f"warning: {w}" for w in warnings]
