"""Cyclic words, the divergence and Jacobian cocycles, and the coboundary
complexes.

The trace space in n letters is the free associative algebra modulo
commutators, spanned by cyclic words; the canonical representative of a
cyclic class is the lexicographically least rotation.  The divergence j
of a tangential derivation and the Jacobian J of a tangential
automorphism land here, and the additive delta and cbh-twisted
delta-tilde differentials make the spaces into complexes whose degree-2
acyclicity powers the Duflo-series extraction.

J is computed as F(u·) j(u) with F(z) = (e^z - 1)/z and u = log g, which
is the unique solution of the defining flow condition J(id) = 0,
(d/dt) J(e^{tu} g) = j(u) + u·J(g); the two cocycle identities are
property-tested rather than assumed.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .free_lie import LieElement, group_mul_many
from .series import NCSeries, OneVarSeries, Word, frac_from_str, frac_to_str, word_key
from .tangential import StrandMap, TangAut, TangDer, taut_log

ZERO = Fraction(0)
ONE = Fraction(1)


def canonical_rotation(w: Word) -> Word:
    return min(w[i:] + w[:i] for i in range(len(w))) if w else w


class TraceElement:
    """Element of the cyclic-word space in letters 1..n."""

    __slots__ = ("letters", "cap", "terms")

    def __init__(self, letters: int, cap: int, terms=None):
        clean: dict[Word, Fraction] = {}
        if terms:
            for w, c in (terms.items() if hasattr(terms, "items") else terms):
                w = canonical_rotation(tuple(w))
                if len(w) > cap:
                    continue
                if any(not (1 <= x <= letters) for x in w):
                    raise ValueError(f"letter out of range in {w}")
                c = Fraction(c)
                if c:
                    acc = clean.get(w, ZERO) + c
                    if acc:
                        clean[w] = acc
                    else:
                        del clean[w]
        object.__setattr__(self, "letters", letters)
        object.__setattr__(self, "cap", cap)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):
        raise AttributeError("TraceElement is immutable")

    @classmethod
    def zero(cls, letters: int, cap: int) -> "TraceElement":
        return cls(letters, cap)

    def zero_like(self) -> "TraceElement":
        return TraceElement(self.letters, self.cap)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "TraceElement") -> "TraceElement":
        if self.letters != other.letters:
            raise ValueError("letter counts differ")
        cap = min(self.cap, other.cap)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            acc = terms.get(w, ZERO) + c
            if acc:
                terms[w] = acc
            else:
                del terms[w]
        return TraceElement(self.letters, cap, terms)

    def __neg__(self):
        return TraceElement(self.letters, self.cap, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, q) -> "TraceElement":
        q = Fraction(q)
        if not q:
            return self.zero_like()
        return TraceElement(self.letters, self.cap, {w: q * c for w, c in self.terms.items()})

    def __rmul__(self, q):
        if isinstance(q, (int, Fraction)):
            return self.scale(q)
        return NotImplemented

    def coeff(self, w: Word) -> Fraction:
        return self.terms.get(canonical_rotation(tuple(w)), ZERO)

    def degree_part(self, d: int) -> "TraceElement":
        return TraceElement(self.letters, self.cap, {w: c for w, c in self.terms.items() if len(w) == d})

    def valuation(self) -> int:
        if not self.terms:
            return self.cap + 1
        return min(len(w) for w in self.terms)

    def with_cap(self, cap: int) -> "TraceElement":
        return TraceElement(self.letters, cap, self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, TraceElement)
            and self.letters == other.letters
            and self.cap == other.cap
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.letters, self.cap, frozenset(self.terms.items())))

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda it: word_key(it[0]))

    def __repr__(self):
        bits = [f"{c}*<{''.join(map(str, w))}>" for w, c in self.sorted_items()[:10]]
        return " + ".join(bits) + (" + ..." if len(self.terms) > 10 else "") if bits else "0"

    def coface(self, phi: StrandMap, variant: str = "additive") -> "TraceElement":
        """Image under the trace map induced by the letter substitution of phi."""
        if phi.target != self.letters:
            raise ValueError("strand map target mismatch")
        from .tangential import _fiber_images

        images = [z.to_ncseries() for z in _fiber_images(phi, self.cap, variant)]
        out = TraceElement(phi.source, self.cap)
        for w, c in self.terms.items():
            rep = NCSeries(self.letters, self.cap, {w: c})
            out = out + trace_project(rep.substitute(images))
        return out

    def to_payload(self) -> dict:
        return {
            "letters": self.letters,
            "cap": self.cap,
            "cyclic": True,
            "terms": [[list(w), frac_to_str(c)] for w, c in self.sorted_items()],
        }

    @classmethod
    def from_payload(cls, payload: dict) -> "TraceElement":
        if not payload.get("cyclic"):
            raise ValueError("expected a cyclic-word payload")
        return cls(
            payload["letters"],
            payload["cap"],
            {tuple(w): frac_from_str(c) for w, c in payload["terms"]},
        )


def trace_project(z: NCSeries) -> TraceElement:
    """Canonical projection onto cyclic words (kills all commutators)."""
    return TraceElement(z.letters, z.cap, dict(z.terms))


def partial_letter(z: NCSeries, k: int) -> NCSeries:
    """The map with z = eps(z)·1 + sum_k x_k·(partial_k z): strip a leading k."""
    if not 1 <= k <= z.letters:
        raise ValueError("letter out of range")
    return NCSeries(z.letters, z.cap, {w[1:]: c for w, c in z.terms.items() if w and w[0] == k})


def divergence(u: TangDer) -> TraceElement:
    """j(u) = < sum_k x_k · partial_k(u_k) >."""
    out = NCSeries.zero(u.letters, u.cap)
    for k in range(1, u.letters + 1):
        uk = u.parts[k - 1].to_ncseries()
        out = out + NCSeries.letter(u.letters, u.cap, k) * partial_letter(uk, k)
    return trace_project(out)


def trace_act(agent, t: TraceElement) -> TraceElement:
    """Action on cyclic words: act on any representative, project back."""
    if agent.letters != t.letters:
        raise ValueError("letter counts differ")
    cap = min(agent.cap, t.cap)
    out = TraceElement(t.letters, cap)
    for w, c in t.terms.items():
        rep = NCSeries(t.letters, cap, {w: c})
        if isinstance(agent, TangAut):
            out = out + trace_project(agent.apply_series(rep))
        elif isinstance(agent, TangDer):
            out = out + trace_project(agent.act_series(rep))
        else:
            raise TypeError(f"cannot act by {type(agent).__name__}")
    return out


def jacobian(g: TangAut) -> TraceElement:
    """J(g) = F(u·) j(u) with u = log g and F(z) = (e^z - 1)/z."""
    u = taut_log(g)
    term = divergence(u)
    acc = term
    m = 1
    while not term.is_zero() and m <= g.cap:
        term = trace_act(u, term)
        m += 1
        if not term.is_zero():
            acc = acc + term.scale(Fraction(1, _factorial(m)))
    return acc


def _factorial(m: int) -> int:
    out = 1
    for i in range(2, m + 1):
        out *= i
    return out


def _delta_faces(n: int) -> list[tuple[StrandMap, int]]:
    """Faces and signs of the differential from arity n to n+1."""
    faces: list[tuple[StrandMap, int]] = []
    # drop the first strand
    faces.append((StrandMap(n + 1, n, {ell: ell - 1 for ell in range(2, n + 2)}), -1))
    sign = 1
    for i in range(1, n + 1):
        fibers = []
        for k in range(1, n + 1):
            if k < i:
                fibers.append((k,))
            elif k == i:
                fibers.append((i, i + 1))
            else:
                fibers.append((k + 1,))
        faces.append((StrandMap.from_fibers(fibers, n + 1), sign))
        sign = -sign
    # drop the last strand
    faces.append((StrandMap(n + 1, n, {ell: ell for ell in range(1, n + 1)}), sign))
    return faces


def delta(t: TraceElement, variant: str = "additive") -> TraceElement:
    """Coboundary into one more letter; variant 'cbh' gives the twisted one."""
    out = TraceElement(t.letters + 1, t.cap)
    for phi, sign in _delta_faces(t.letters):
        out = out + t.coface(phi, variant).scale(sign)
    return out


def delta_additive(t: TraceElement) -> TraceElement:
    return delta(t, "additive")


def delta_cbh(t: TraceElement) -> TraceElement:
    return delta(t, "cbh")


def one_var_trace(r: OneVarSeries, letters: int, cap: int) -> TraceElement:
    """<r(x_1)> inside the n-letter trace space."""
    return TraceElement(letters, cap, {(1,) * d: c for d, c in r.coeffs.items() if 1 <= d <= cap})


class CoboundaryError(ValueError):
    def __init__(self, degree: int, message: str):
        self.degree = degree
        super().__init__(f"{message} (degree {degree})")


def solve_coboundary(c: TraceElement, variant: str = "additive") -> OneVarSeries:
    """Find r in u^2 k[[u]] with delta(<r>) = c; unique by the kernel computation.

    The coefficient of the cyclic word x^{d-1} y in delta(u^d) is d, which
    pins r degree by degree; the candidate is then re-verified exactly and
    any mismatch reports its first obstructed degree.
    """
    if c.letters != 2:
        raise ValueError("coboundary solving happens in the two-letter trace space")
    cap = c.cap
    if c.coeff((1,)) or c.coeff((2,)):
        raise CoboundaryError(1, "degree-1 part is not a coboundary")
    coeffs: dict[int, Fraction] = {}
    residual = c
    for d in range(2, cap + 1):
        probe = residual.coeff((1,) * (d - 1) + (2,))
        rd = probe / d
        if rd:
            coeffs[d] = rd
            step = delta(one_var_trace(OneVarSeries(cap, {d: rd}), 1, cap), variant)
            residual = residual - step
        if not residual.degree_part(d).is_zero():
            raise CoboundaryError(d, "input is not a coboundary of a one-variable series")
    if not residual.is_zero():
        raise CoboundaryError(residual.valuation(), "input is not a coboundary")
    return OneVarSeries(cap, coeffs)


def solve_coboundary_multi(c: TraceElement) -> OneVarSeries:
    """Find r with c = < r(x_1+...+x_n) - sum_i r(x_i) >, n letters, additive."""
    n, cap = c.letters, c.cap
    coeffs: dict[int, Fraction] = {}
    for d in range(2, cap + 1):
        probe = c.coeff((1,) * (d - 1) + (2,))
        if probe:
            coeffs[d] = probe / d
    r = OneVarSeries(cap, coeffs)
    if c != coboundary_value_multi(r, n, cap):
        raise CoboundaryError(0, "input is not of the required coboundary form")
    return r


def coboundary_value_multi(r: OneVarSeries, letters: int, cap: int) -> TraceElement:
    """< r(x_1+...+x_n) - sum r(x_i) > as a trace element."""
    phi_sum = StrandMap.from_fibers([tuple(range(1, letters + 1))], letters)
    base = one_var_trace(r, 1, cap)
    out = base.coface(phi_sum)
    for i in range(1, letters + 1):
        out = out - TraceElement(letters, cap, {(i,) * d: v for d, v in r.coeffs.items()})
    return out


def coboundary_value_cbh(r: OneVarSeries, letters: int, cap: int) -> TraceElement:
    """< r(log(e^{x_1}...e^{x_n})) - sum r(x_i) >."""
    gens = [LieElement.generator(letters, cap, i) for i in range(1, letters + 1)]
    z = group_mul_many(gens).to_ncseries()
    powers = NCSeries.one(letters, cap)
    out = NCSeries.zero(letters, cap)
    for d in range(1, cap + 1):
        powers = powers * z
        v = r.coeff(d)
        if v:
            out = out + powers.scale(v)
        if powers.is_zero():
            break
    t = trace_project(out)
    for i in range(1, letters + 1):
        t = t - TraceElement(letters, cap, {(i,) * d: v for d, v in r.coeffs.items()})
    return t


def trace_basis(letters: int, d: int) -> list[Word]:
    """Canonical cyclic words of length d, deterministically ordered."""
    seen = sorted({canonical_rotation(w) for w in product(range(1, letters + 1), repeat=d)})
    return seen


def trace_coords(t: TraceElement, d: int, basis: list[Word] | None = None) -> list[Fraction]:
    basis = trace_basis(t.letters, d) if basis is None else basis
    return [t.terms.get(w, ZERO) for w in basis]


def delta_exactness_dims(d: int, cap: int) -> tuple[int, int]:
    """(dim ker(delta at two letters), dim im(delta from one letter)) in degree d."""
    from .linalg import kernel_basis, matrix_rank

    basis2 = trace_basis(2, d)
    basis3 = trace_basis(3, d)
    rows = []
    for w in basis2:
        img = delta(TraceElement(2, cap, {w: ONE}))
        rows.append(trace_coords(img, d, basis3))
    # kernel of the map needs columns indexed by basis2: transpose
    mat = [[rows[j][i] for j in range(len(basis2))] for i in range(len(basis3))]
    ker = len(kernel_basis(mat, len(basis2)))
    img1 = delta(TraceElement(1, cap, {(1,) * d: ONE}))
    im = 0 if img1.is_zero() else matrix_rank([trace_coords(img1, d, basis2)])
    return ker, im
