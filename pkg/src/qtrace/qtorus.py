"""Exact arithmetic in quantum tori with n-th root generators.

Scalars are integer-coefficient Laurent polynomials in a formal variable h,
where h^(2*n^2) plays the role of q, h^(2*n) of q^(1/n), and h^2 of omega.
Every constant that appears in the constructions downstream is an integer
power of h, so all arithmetic is exact.

Torus elements are finite sums of normal-ordered monomials in generators
X_i^(1/n) that omega-commute according to an antisymmetric integer matrix P:

    X_i^(a/n) X_j^(b/n) = omega^(P[i][j]*a*b) X_j^(b/n) X_i^(a/n)

Monomial exponents are stored as integers in units of 1/n.  The canonical
form of an element is the increasing-index normal order, which makes
equality a dictionary comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping


class RootScalar:
    """Laurent polynomial in h with integer coefficients."""

    __slots__ = ("_t",)

    def __init__(self, terms: Mapping[int, int] | None = None):
        t = {}
        if terms:
            for k, c in terms.items():
                if c:
                    t[int(k)] = int(c)
        self._t = t

    @staticmethod
    def zero() -> "RootScalar":
        return RootScalar()

    @staticmethod
    def one() -> "RootScalar":
        return RootScalar({0: 1})

    @staticmethod
    def h_power(k: int, coeff: int = 1) -> "RootScalar":
        return RootScalar({k: coeff})

    @staticmethod
    def from_int(c: int) -> "RootScalar":
        return RootScalar({0: c})

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def __add__(self, other):
        other = _as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        t = dict(self._t)
        for k, c in other._t.items():
            c2 = t.get(k, 0) + c
            if c2:
                t[k] = c2
            else:
                t.pop(k, None)
        return RootScalar(t)

    __radd__ = __add__

    def __neg__(self):
        return RootScalar({k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        other = _as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        t: dict[int, int] = {}
        for k1, c1 in self._t.items():
            for k2, c2 in other._t.items():
                k = k1 + k2
                c = t.get(k, 0) + c1 * c2
                if c:
                    t[k] = c
                else:
                    t.pop(k, None)
        return RootScalar(t)

    __rmul__ = __mul__

    def inverse(self) -> "RootScalar":
        """Inverse, defined only for monomials with unit coefficient."""
        if len(self._t) != 1:
            raise ValueError("only h-monomials are invertible")
        ((k, c),) = self._t.items()
        if c not in (1, -1):
            raise ValueError("only unit coefficients are invertible")
        return RootScalar({-k: c})

    def __eq__(self, other):
        other = _as_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        return self._t == other._t

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def at_one(self) -> int:
        """Evaluate at h = 1."""
        return sum(self._t.values())

    def evaluate(self, h_value: float) -> float:
        if h_value == 0:
            raise ValueError("h must be nonzero")
        return sum(c * h_value**k for k, c in self._t.items())

    def __repr__(self):
        if not self._t:
            return "0"
        parts = []
        for k in sorted(self._t):
            c = self._t[k]
            if k == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(f"h^{k}")
            elif c == -1:
                parts.append(f"-h^{k}")
            else:
                parts.append(f"{c}*h^{k}")
        return " + ".join(parts).replace("+ -", "- ")


def _as_scalar(x) -> RootScalar:
    if isinstance(x, RootScalar):
        return x
    if isinstance(x, int):
        return RootScalar({0: x})
    return NotImplemented


ZERO = RootScalar.zero()
ONE = RootScalar.one()


def q_power(n: int, num: int, den: int = 1, coeff: int = 1) -> RootScalar:
    """q^(num/den) as an exact power of h, for q = h^(2*n^2).

    Raises if the exponent 2*n^2*num/den is not an integer.
    """
    k2 = 2 * n * n * num
    if k2 % den:
        raise ValueError(f"q^({num}/{den}) is not an integer power of h")
    return RootScalar({k2 // den: coeff})


@dataclass(frozen=True)
class QuantumTorusSpec:
    """Root order n, generator count N, antisymmetric N x N matrix P."""

    n: int
    N: int
    P: tuple[tuple[int, ...], ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("root order must be >= 2")
        if len(self.P) != self.N or any(len(row) != self.N for row in self.P):
            raise ValueError("P must be N x N")
        for i in range(self.N):
            if self.P[i][i] != 0:
                raise ValueError("P must have zero diagonal")
            for j in range(i):
                if self.P[i][j] != -self.P[j][i]:
                    raise ValueError("P must be antisymmetric")
        if self.names and len(self.names) != self.N:
            raise ValueError("names must match generator count")

    def name(self, i: int) -> str:
        return self.names[i] if self.names else f"X{i}"


def make_spec(n: int, P: Iterable[Iterable[int]], names: Iterable[str] = ()) -> QuantumTorusSpec:
    P = tuple(tuple(int(x) for x in row) for row in P)
    return QuantumTorusSpec(n=n, N=len(P), P=P, names=tuple(names))


def scalar_spec(n: int) -> QuantumTorusSpec:
    """The zero torus: no generators, elements are plain scalars."""
    return QuantumTorusSpec(n=n, N=0, P=())


class TorusElement:
    """Sum of normal-ordered monomials with RootScalar coefficients.

    A monomial key e (length-N integer tuple) denotes
    X_0^(e[0]/n) X_1^(e[1]/n) ... multiplied in increasing index order.
    """

    __slots__ = ("spec", "_terms")

    def __init__(self, spec: QuantumTorusSpec, terms: Mapping[tuple, RootScalar] | None = None):
        self.spec = spec
        t = {}
        if terms:
            for e, c in terms.items():
                if not isinstance(c, RootScalar):
                    c = RootScalar({0: int(c)})
                if not c.is_zero():
                    e = tuple(int(x) for x in e)
                    if len(e) != spec.N:
                        raise ValueError("monomial length mismatch")
                    t[e] = c
        self._terms = t

    @property
    def terms(self) -> dict[tuple, RootScalar]:
        return dict(self._terms)

    @staticmethod
    def zero(spec) -> "TorusElement":
        return TorusElement(spec)

    @staticmethod
    def scalar(spec, c) -> "TorusElement":
        c = _as_scalar(c)
        return TorusElement(spec, {(0,) * spec.N: c})

    @staticmethod
    def one(spec) -> "TorusElement":
        return TorusElement.scalar(spec, 1)

    @staticmethod
    def monomial(spec, e, coeff=ONE) -> "TorusElement":
        return TorusElement(spec, {tuple(e): _as_scalar(coeff)})

    @staticmethod
    def generator(spec, i: int, num: int = None) -> "TorusElement":
        """X_i^(num/n); num defaults to n (a whole power)."""
        if num is None:
            num = spec.n
        e = [0] * spec.N
        e[i] = num
        return TorusElement.monomial(spec, e)

    def is_zero(self) -> bool:
        return not self._terms

    def is_scalar(self) -> bool:
        zero_e = (0,) * self.spec.N
        return all(e == zero_e for e in self._terms)

    def scalar_part(self) -> RootScalar:
        return self._terms.get((0,) * self.spec.N, ZERO)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        t = dict(self._terms)
        for e, c in other._terms.items():
            c2 = t.get(e, ZERO) + c
            if c2.is_zero():
                t.pop(e, None)
            else:
                t[e] = c2
        return TorusElement(self.spec, t)

    __radd__ = __add__

    def __neg__(self):
        return TorusElement(self.spec, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return normal_product(self, other)

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return normal_product(other, self)

    def _coerce(self, other):
        if isinstance(other, TorusElement):
            if other.spec is not self.spec and other.spec != self.spec:
                raise ValueError("torus spec mismatch")
            return other
        if isinstance(other, (int, RootScalar)):
            return TorusElement.scalar(self.spec, other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, RootScalar)):
            other = TorusElement.scalar(self.spec, other)
        if not isinstance(other, TorusElement):
            return NotImplemented
        return self.spec == other.spec and self._terms == other._terms

    def __hash__(self):
        return hash((self.spec, frozenset((e, c) for e, c in self._terms.items())))

    def inverse(self) -> "TorusElement":
        """Inverse of a single monomial with an invertible coefficient."""
        if len(self._terms) != 1:
            raise ValueError("only monomials are invertible")
        ((e, c),) = self._terms.items()
        inv_e = tuple(-x for x in e)
        # h-exponent picked so that (c^-1 h^k X^-e)(c X^e) = 1
        P = self.spec.P
        k = -2 * sum(
            P[j][i] * e[j] * (-e[i]) for j in range(self.spec.N) for i in range(j)
        )
        return TorusElement(self.spec, {inv_e: c.inverse() * RootScalar({k: 1})})

    def at_one(self) -> dict[tuple, int]:
        """Specialization h = 1: commutative monomial -> integer coefficient."""
        out = {}
        for e, c in self._terms.items():
            v = c.at_one()
            if v:
                out[e] = v
        return out

    def evaluate(self, h_value: float, gen_values) -> float:
        """Numeric value at h = h_value and X_i = gen_values[i] > 0."""
        n = self.spec.n
        total = 0.0
        for e, c in self._terms.items():
            m = c.evaluate(h_value)
            for i, ei in enumerate(e):
                if ei:
                    m *= gen_values[i] ** (ei / n)
            total += m
        return total

    def map_exponents(self, target_spec, index_map) -> "TorusElement":
        """Reindex monomials into another spec via generator index map."""
        t = {}
        for e, c in self._terms.items():
            e2 = [0] * target_spec.N
            for i, ei in enumerate(e):
                if ei:
                    e2[index_map[i]] += ei
            e2 = tuple(e2)
            c2 = t.get(e2, ZERO) + c
            if c2.is_zero():
                t.pop(e2, None)
            else:
                t[e2] = c2
        return TorusElement(target_spec, t)

    def __repr__(self):
        if not self._terms:
            return "0"
        n = self.spec.n
        parts = []
        for e in sorted(self._terms):
            c = self._terms[e]
            factors = []
            for i, ei in enumerate(e):
                if ei:
                    factors.append(f"{self.spec.name(i)}^({ei}/{n})")
            body = "*".join(factors) if factors else "1"
            parts.append(f"({c!r})*{body}")
        return " + ".join(parts)


def _monomial_product_h_exponent(spec: QuantumTorusSpec, e: tuple, f: tuple) -> int:
    """h-exponent from normal-ordering X^e (normal) times X^f (normal).

    Each swap of X_j^(e_j/n) past X_i^(f_i/n) with i < j contributes
    omega^(P[j][i]*e_j*f_i) = h^(2*P[j][i]*e_j*f_i).
    """
    P = spec.P
    k = 0
    for j in range(spec.N):
        ej = e[j]
        if not ej:
            continue
        Pj = P[j]
        for i in range(j):
            if f[i]:
                k += Pj[i] * ej * f[i]
    return 2 * k


def normal_product(a: TorusElement, b: TorusElement) -> TorusElement:
    """Product in the quantum torus, returned in canonical normal order."""
    if a.spec != b.spec:
        raise ValueError("torus spec mismatch")
    spec = a.spec
    t: dict[tuple, RootScalar] = {}
    for e, ce in a._terms.items():
        for f, cf in b._terms.items():
            k = _monomial_product_h_exponent(spec, e, f)
            g = tuple(x + y for x, y in zip(e, f))
            c = ce * cf
            if k:
                c = c * RootScalar({k: 1})
            c2 = t.get(g, ZERO) + c
            if c2.is_zero():
                t.pop(g, None)
            else:
                t[g] = c2
    return TorusElement(spec, t)


def weyl_order(word, spec: QuantumTorusSpec) -> TorusElement:
    """Weyl quantum ordering of a word [(index, exponent-in-1/n-units), ...].

    Returns h^(-sum_{a<b} P[i_a][i_b] m_a m_b) times the normal-ordered
    product of the letters; invariant under permutations of the word.
    """
    P = spec.P
    k = 0
    letters = list(word)
    for a in range(len(letters)):
        ia, ma = letters[a]
        for b in range(a + 1, len(letters)):
            ib, mb = letters[b]
            k -= P[ia][ib] * ma * mb
    out = TorusElement.scalar(spec, RootScalar({k: 1}))
    for i, m in letters:
        out = normal_product(out, TorusElement.generator(spec, i, m))
    return out


def weyl_monomial(spec: QuantumTorusSpec, e, coeff=ONE) -> TorusElement:
    """Weyl ordering of the commutative monomial X^e, times coeff."""
    e = tuple(int(x) for x in e)
    P = spec.P
    k = 0
    for i in range(spec.N):
        if not e[i]:
            continue
        for j in range(i + 1, spec.N):
            if e[j]:
                k -= P[i][j] * e[i] * e[j]
    return TorusElement(spec, {e: _as_scalar(coeff) * RootScalar({k: 1})})


def weyl_lift(commutative_terms: Mapping[tuple, int], spec: QuantumTorusSpec) -> TorusElement:
    """Weyl-lift a commutative polynomial term by term."""
    out = TorusElement.zero(spec)
    for e, c in commutative_terms.items():
        out = out + weyl_monomial(spec, e, RootScalar({0: int(c)}))
    return out


class TorusMatrix:
    """Rectangular matrix with TorusElement entries, left-to-right products."""

    __slots__ = ("spec", "rows", "cols", "entries")

    def __init__(self, spec: QuantumTorusSpec, entries):
        rows = []
        for row in entries:
            r = []
            for x in row:
                if isinstance(x, (int, RootScalar)):
                    x = TorusElement.scalar(spec, x)
                if x.spec != spec:
                    raise ValueError("entry spec mismatch")
                r.append(x)
            rows.append(tuple(r))
        self.spec = spec
        self.entries = tuple(rows)
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else 0
        if any(len(r) != self.cols for r in self.entries):
            raise ValueError("ragged matrix")

    @staticmethod
    def identity(spec, size: int) -> "TorusMatrix":
        return TorusMatrix(
            spec,
            [[TorusElement.one(spec) if i == j else TorusElement.zero(spec) for j in range(size)] for i in range(size)],
        )

    @staticmethod
    def diagonal(spec, diag) -> "TorusMatrix":
        size = len(diag)
        return TorusMatrix(
            spec,
            [[diag[i] if i == j else TorusElement.zero(spec) for j in range(size)] for i in range(size)],
        )

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "TorusMatrix") -> "TorusMatrix":
        return mat_mul(self, other)

    def __mul__(self, other):
        if isinstance(other, (int, RootScalar, TorusElement)):
            return self.map(lambda x: x * other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, RootScalar, TorusElement)):
            return self.map(lambda x: other * x)
        return NotImplemented

    def __add__(self, other):
        if not isinstance(other, TorusMatrix):
            return NotImplemented
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("shape mismatch")
        return TorusMatrix(
            self.spec,
            [[self.entries[i][j] + other.entries[i][j] for j in range(self.cols)] for i in range(self.rows)],
        )

    def __sub__(self, other):
        return self + other.map(lambda x: -x)

    def map(self, f) -> "TorusMatrix":
        return TorusMatrix(self.spec, [[f(x) for x in row] for row in self.entries])

    def transpose(self) -> "TorusMatrix":
        return TorusMatrix(self.spec, [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def __eq__(self, other):
        if not isinstance(other, TorusMatrix):
            return NotImplemented
        return (
            self.spec == other.spec
            and (self.rows, self.cols) == (other.rows, other.cols)
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.spec, self.entries))

    def is_zero(self) -> bool:
        return all(x.is_zero() for row in self.entries for x in row)

    def __repr__(self):
        return "TorusMatrix([\n" + "\n".join("  [" + ", ".join(repr(x) for x in row) + "]," for row in self.entries) + "\n])"


def mat_mul(A: TorusMatrix, B: TorusMatrix) -> TorusMatrix:
    """Noncommutative matrix product, factor order A then B."""
    if A.spec != B.spec:
        raise ValueError("torus spec mismatch")
    if A.cols != B.rows:
        raise ValueError("dimension mismatch")
    out = []
    for i in range(A.rows):
        row = []
        for j in range(B.cols):
            acc = TorusElement.zero(A.spec)
            for k in range(A.cols):
                a = A.entries[i][k]
                b = B.entries[k][j]
                if a.is_zero() or b.is_zero():
                    continue
                acc = acc + normal_product(a, b)
            row.append(acc)
        out.append(row)
    return TorusMatrix(A.spec, out)


def kron(A: TorusMatrix, B: TorusMatrix) -> TorusMatrix:
    """Kronecker product; pair indices ordered with the second factor fastest."""
    if A.spec != B.spec:
        raise ValueError("torus spec mismatch")
    out = []
    for i1 in range(A.rows):
        for i2 in range(B.rows):
            row = []
            for j1 in range(A.cols):
                a = A.entries[i1][j1]
                for j2 in range(B.cols):
                    row.append(normal_product(a, B.entries[i2][j2]))
            out.append(row)
    return TorusMatrix(A.spec, out)


def specialize(a: TorusElement, h_value=1):
    """Classical or numeric specialization of a torus element.

    At h_value == 1 returns the commutative polynomial as a dict from
    exponent tuples (1/n units) to integer coefficients.
    """
    if h_value == 0:
        raise ValueError("h must be nonzero")
    if h_value == 1:
        return a.at_one()
    raise ValueError("numeric evaluation needs generator values; use TorusElement.equals/evaluate")


def equals(a: TorusElement, b: TorusElement) -> bool:
    if a.spec != b.spec:
        raise ValueError("torus spec mismatch")
    return a == b
