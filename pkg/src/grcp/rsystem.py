"""R-systems (P, Q, psi), covariant representations and finite-rank operators.

The coefficient ring R is always a subspace of an ambient graded algebra A
closed under A's product, so ring elements are plain vectors over A's
labels.  Module elements are vectors over the module's own basis labels.
Modules come in two kinds: subspaces of A (coordinates by linear solve) and
balanced tensor products, realized as the free tensor space modulo the
balancing relations with reduced representatives.

Operators on Q are dicts from Q-basis labels to Q-vectors; two operators
are equal exactly when these matrices agree.
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Callable, Hashable, Sequence
from dataclasses import dataclass, field

from grcp.errors import CapacityError, InconsistencyError, PreconditionError
from grcp.exactlin import Echelon, Vector, kernel, label_key
from grcp.graded import GradedAlgebra, Subspace, _kernel_in, _tagged, ideal_witness, perp_ideal
from grcp.report import Verdict, failed, passed

DEFAULT_CAP = 5000


# ---------------------------------------------------------------------------
# bimodules


class Bimodule:
    """A finite-rank R-bimodule; subclasses supply the two actions on labels."""

    name = "M"
    labels: list

    def left_label(self, r: Vector, m: Hashable) -> Vector:
        raise NotImplementedError

    def right_label(self, m: Hashable, r: Vector) -> Vector:
        raise NotImplementedError

    def fmt_label(self, m: Hashable) -> str:
        return str(m)

    def left(self, r: Vector, m: Vector) -> Vector:
        out = Vector()
        for lab, c in m.items():
            out = out.axpy(c, self.left_label(r, lab))
        return out

    def right(self, m: Vector, r: Vector) -> Vector:
        out = Vector()
        for lab, c in m.items():
            out = out.axpy(c, self.right_label(lab, r))
        return out

    def gen(self, m: Hashable) -> Vector:
        return Vector.unit(m)

    def fmt(self, m: Vector) -> str:
        if not m:
            return "0"
        return " + ".join(
            self.fmt_label(k) if c == 1 else f"{c}*{self.fmt_label(k)}" for k, c in m.sorted_items()
        ).replace("+ -", "- ")

    @property
    def dim(self) -> int:
        return len(self.labels)


class EmbeddedModule(Bimodule):
    """A subspace M of A with r.m and m.r computed in A.

    When every basis vector of M is a single label of A those labels are
    used directly; otherwise the basis is indexed 0, 1, ...
    """

    def __init__(self, A: GradedAlgebra, M: Subspace, name: str = "M"):
        self.A = A
        self.M = M
        self.name = name
        simple = all(len(b) == 1 and next(iter(b.values())) == 1 for b in M.basis)
        self.labels = [next(iter(b)) for b in M.basis] if simple else list(range(M.dim))
        self._vec = dict(zip(self.labels, M.basis))
        self._ech = Echelon(track=True)
        for b in M.basis:
            self._ech.add(b)

    def embed(self, m: Vector) -> Vector:
        out = Vector()
        for lab, c in m.items():
            out = out.axpy(c, self._vec[lab])
        return out

    def coords(self, x: Vector) -> Vector:
        combo = self._ech.express(x)
        if combo is None:
            raise PreconditionError(f"{self.A.fmt(x)} is not in {self.name}")
        return Vector({self.labels[i]: c for i, c in combo.items()})

    def left_label(self, r, m):
        return self.coords(self.A.mul(r, self._vec[m]))

    def right_label(self, m, r):
        return self.coords(self.A.mul(self._vec[m], r))

    def fmt_label(self, m):
        return self.A.fmt(self._vec[m])


class TensorModule(Bimodule):
    """X (x)_R Y: free pairs modulo (x r) (x) y - x (x) (r y).

    Reduced echelon form of the relations gives each class a canonical
    representative supported on the non-pivot pairs, which are the labels.
    """

    def __init__(self, X: Bimodule, Y: Bimodule, R: Subspace, name: str = "", cap: int = DEFAULT_CAP):
        free = len(X.labels) * len(Y.labels)
        if free * max(1, R.dim) > cap:
            raise CapacityError(f"tensor product needs {free} free pairs and {free * R.dim} relations (cap {cap})")
        self.X, self.Y, self.R = X, Y, R
        self.name = name or f"{X.name}(x){Y.name}"
        rel = Echelon()
        for x in X.labels:
            for r in R.basis:
                xr = X.right_label(x, r)
                for y in Y.labels:
                    ry = Y.left_label(r, y)
                    v = Vector({(a, y): c for a, c in xr.items()}) - Vector({(x, b): c for b, c in ry.items()})
                    rel.add(v)
        self._rel = rel
        self.labels = [(x, y) for x in X.labels for y in Y.labels if (x, y) not in rel.rows]

    def reduce(self, v: Vector) -> Vector:
        return self._rel.reduce(v)

    def tensor(self, x: Vector, y: Vector) -> Vector:
        return self.reduce(Vector({(a, b): ca * cb for a, ca in x.items() for b, cb in y.items()}))

    def left_label(self, r, m):
        x, y = m
        return self.reduce(Vector({(a, y): c for a, c in self.X.left_label(r, x).items()}))

    def right_label(self, m, r):
        x, y = m
        return self.reduce(Vector({(x, b): c for b, c in self.Y.right_label(y, r).items()}))

    def fmt_label(self, m):
        return f"{self.X.fmt_label(m[0])}(x){self.Y.fmt_label(m[1])}"


# ---------------------------------------------------------------------------
# systems


@dataclass
class RSystem:
    """(P, Q, psi) over R, a subring of the ambient algebra A."""

    A: GradedAlgebra
    R: Subspace
    P: Bimodule
    Q: Bimodule
    psi_label: Callable[[Hashable, Hashable], Vector]
    name: str = "system"
    power: int = 1
    base: RSystem | None = field(default=None, repr=False)
    prev: RSystem | None = field(default=None, repr=False)

    def __post_init__(self):
        self._psi_cache: dict = {}

    def psi(self, p: Vector, q: Vector) -> Vector:
        out = Vector()
        for a, ca in p.items():
            for b, cb in q.items():
                key = (a, b)
                val = self._psi_cache.get(key)
                if val is None:
                    val = self.psi_label(a, b)
                    self._psi_cache[key] = val
                out = out.axpy(ca * cb, val)
        return out

    def with_psi(self, psi_label: Callable[[Hashable, Hashable], Vector], name: str | None = None) -> RSystem:
        return RSystem(self.A, self.R, self.P, self.Q, psi_label, name or self.name + "'", self.power)

    def mul(self, r: Vector, s: Vector) -> Vector:
        return self.A.mul(r, s)


def check_system(sys: RSystem) -> Verdict:
    """Bimodule axioms and the bimodule / balancing properties of psi on bases."""
    name = "system"
    A, R, P, Q = sys.A, sys.R, sys.P, sys.Q
    try:
        for M in (P, Q):
            for m in M.labels:
                mv = M.gen(m)
                for r in R.basis:
                    rm = M.left(r, mv)
                    mr = M.right(mv, r)
                    for s in R.basis:
                        rs = A.mul(r, s)
                        if M.left(rs, mv) != M.left(r, M.left(s, mv)):
                            return failed(name, f"(rs)m != r(sm) in {M.name}", m=M.fmt_label(m))
                        if M.right(mv, rs) != M.right(mr, s):
                            return failed(name, f"m(rs) != (mr)s in {M.name}", m=M.fmt_label(m))
                        if M.right(rm, s) != M.left(r, M.right(mv, s)):
                            return failed(name, f"(rm)s != r(ms) in {M.name}", m=M.fmt_label(m))
        for p in P.labels:
            pv = P.gen(p)
            for q in Q.labels:
                qv = Q.gen(q)
                val = sys.psi(pv, qv)
                if val not in R:
                    return failed(name, "psi leaves R", p=P.fmt_label(p), q=Q.fmt_label(q), value=A.fmt(val))
                for r in R.basis:
                    if sys.psi(P.left(r, pv), qv) != A.mul(r, val):
                        return failed(name, "psi(rp, q) != r psi(p, q)", p=P.fmt_label(p), q=Q.fmt_label(q), r=A.fmt(r))
                    if sys.psi(pv, Q.right(qv, r)) != A.mul(val, r):
                        return failed(name, "psi(p, qr) != psi(p, q) r", p=P.fmt_label(p), q=Q.fmt_label(q), r=A.fmt(r))
                    if sys.psi(P.right(pv, r), qv) != sys.psi(pv, Q.left(r, qv)):
                        return failed(name, "psi is not balanced", p=P.fmt_label(p), q=Q.fmt_label(q), r=A.fmt(r))
    except PreconditionError as exc:
        return failed(name, f"module not closed: {exc}")
    return passed(name, f"rank P = {P.dim}, rank Q = {Q.dim}, dim R = {R.dim}")


def realization_system(A: GradedAlgebra, R: Subspace, I: Subspace, J: Subspace) -> RSystem:
    """(J, I, psi) with psi(j (x) i) = j i."""
    P = EmbeddedModule(A, J, "J")
    Q = EmbeddedModule(A, I, "I")

    def psi(p, q):
        return A.mul(P.embed(P.gen(p)), Q.embed(Q.gen(q)))

    return RSystem(A, R, P, Q, psi, name=f"({P.name},{Q.name},psi)")


def ring_as_module(A: GradedAlgebra, R: Subspace) -> EmbeddedModule:
    return EmbeddedModule(A, R, "R")


def tensor_power_system(sys: RSystem, n: int, cap: int = DEFAULT_CAP) -> RSystem:
    """(P^n, Q^n, psi^n) with P^n = P (x) P^(n-1) and Q^n = Q^(n-1) (x) Q."""
    base = sys.base or sys
    if sys.power != 1:
        raise PreconditionError("tensor powers are taken of the base system")
    if n < 0:
        raise PreconditionError("n must be nonnegative")
    if n == 0:
        Rm = ring_as_module(sys.A, sys.R)

        def psi0(a, b):
            return sys.A.mul(Rm.embed(Rm.gen(a)), Rm.embed(Rm.gen(b)))

        return RSystem(sys.A, sys.R, Rm, Rm, psi0, name=sys.name + "^0", power=0, base=base)
    if n == 1:
        return sys
    prev = tensor_power_system(sys, n - 1, cap)
    P = TensorModule(base.P, prev.P, sys.R, name=f"P^{n}", cap=cap)
    Q = TensorModule(prev.Q, base.Q, sys.R, name=f"Q^{n}", cap=cap)

    def psi_n(pl, ql):
        p, x = pl
        y, q = ql
        inner = prev.psi(prev.P.gen(x), prev.Q.gen(y))
        return base.psi(base.P.right(base.P.gen(p), inner), base.Q.gen(q))

    return RSystem(sys.A, sys.R, P, Q, psi_n, name=f"{sys.name}^{n}", power=n, base=base, prev=prev)


# ---------------------------------------------------------------------------
# covariant representations


@dataclass
class CovariantRep:
    """(S, T, sigma) from (P, Q, psi) into the algebra B."""

    sys: RSystem
    B: GradedAlgebra
    S: Callable[[Hashable], Vector]
    T: Callable[[Hashable], Vector]
    sigma: Callable[[Vector], Vector]
    name: str = "rep"

    def S_vec(self, p: Vector) -> Vector:
        out = Vector()
        for a, c in p.items():
            out = out.axpy(c, self.S(a))
        return out

    def T_vec(self, q: Vector) -> Vector:
        out = Vector()
        for a, c in q.items():
            out = out.axpy(c, self.T(a))
        return out


def inclusion_rep(sys: RSystem) -> CovariantRep:
    """S, T and sigma are the inclusions of P, Q and R into A."""
    P, Q = sys.P, sys.Q
    return CovariantRep(
        sys, sys.A,
        S=lambda p: P.embed(P.gen(p)),
        T=lambda q: Q.embed(Q.gen(q)),
        sigma=lambda r: r,
        name="inclusion",
    )


def check_covariant_rep(rep: CovariantRep) -> Verdict:
    """Conditions (i)-(v) on bases; (i) and (ii) hold by construction."""
    name = "covariant-rep"
    sys, B = rep.sys, rep.B
    A, R, P, Q = sys.A, sys.R, sys.P, sys.Q
    sig = {i: rep.sigma(r) for i, r in enumerate(R.basis)}
    for i, r in enumerate(R.basis):
        for j, s in enumerate(R.basis):
            if rep.sigma(A.mul(r, s)) != B.mul(sig[i], sig[j]):
                return failed(name, "(iii) sigma is not multiplicative", r=A.fmt(r), s=A.fmt(s))
    for i, r in enumerate(R.basis):
        for p in P.labels:
            pv = P.gen(p)
            if rep.S_vec(P.right(pv, r)) != B.mul(rep.S(p), sig[i]):
                return failed(name, "(iv) S(pr) != S(p) sigma(r)", p=P.fmt_label(p), r=A.fmt(r))
            if rep.S_vec(P.left(r, pv)) != B.mul(sig[i], rep.S(p)):
                return failed(name, "(iv) S(rp) != sigma(r) S(p)", p=P.fmt_label(p), r=A.fmt(r))
        for q in Q.labels:
            qv = Q.gen(q)
            if rep.T_vec(Q.right(qv, r)) != B.mul(rep.T(q), sig[i]):
                return failed(name, "(iv) T(qr) != T(q) sigma(r)", q=Q.fmt_label(q), r=A.fmt(r))
            if rep.T_vec(Q.left(r, qv)) != B.mul(sig[i], rep.T(q)):
                return failed(name, "(iv) T(rq) != sigma(r) T(q)", q=Q.fmt_label(q), r=A.fmt(r))
    for p in P.labels:
        for q in Q.labels:
            lhs = rep.sigma(sys.psi(P.gen(p), Q.gen(q)))
            if lhs != B.mul(rep.S(p), rep.T(q)):
                return failed(name, "(v) sigma(psi(p, q)) != S(p) T(q)", p=P.fmt_label(p), q=Q.fmt_label(q))
    return passed(name, "(i)-(v) hold on bases")


def rep_tensor_power(rep: CovariantRep, n: int, cap: int = DEFAULT_CAP) -> CovariantRep:
    """(S^n, T^n, sigma) on the n-th tensor power system; S^0 = T^0 = sigma."""
    sys_n = tensor_power_system(rep.sys, n, cap)
    if n == 1:
        return rep
    if n == 0:
        Rm = sys_n.P
        return CovariantRep(sys_n, rep.B, S=lambda a: rep.sigma(Rm.embed(Rm.gen(a))),
                            T=lambda a: rep.sigma(Rm.embed(Rm.gen(a))), sigma=rep.sigma, name=rep.name + "^0")
    prev = rep_tensor_power(rep, n - 1, cap)
    B = rep.B
    cache_s: dict = {}
    cache_t: dict = {}

    def S(pl):
        if pl not in cache_s:
            p, x = pl
            cache_s[pl] = B.mul(rep.S(p), prev.S(x))
        return cache_s[pl]

    def T(ql):
        if ql not in cache_t:
            y, q = ql
            cache_t[ql] = B.mul(prev.T(y), rep.T(q))
        return cache_t[ql]

    return CovariantRep(sys_n, B, S, T, rep.sigma, name=f"{rep.name}^{n}")


# ---------------------------------------------------------------------------
# finite-rank operators


@dataclass
class FiniteRankOp:
    """sum of theta_{q_i, p_i}; ``matrix`` is its action on the Q basis."""

    sys: RSystem
    terms: list[tuple[Vector, Vector]]

    @property
    def matrix(self) -> dict:
        if not hasattr(self, "_matrix"):
            self._matrix = {x: self.apply(self.sys.Q.gen(x)) for x in self.sys.Q.labels}
        return self._matrix

    def apply(self, x: Vector) -> Vector:
        """theta_{q,p}(x) = q psi(p (x) x), summed."""
        out = Vector()
        for q, p in self.terms:
            out = out + self.sys.Q.right(q, self.sys.psi(p, x))
        return out

    def adjoint_apply(self, y: Vector) -> Vector:
        """theta_{p,q}(y) = psi(y (x) q) p, summed."""
        out = Vector()
        for q, p in self.terms:
            out = out + self.sys.P.left(self.sys.psi(y, q), p)
        return out

    def is_zero(self) -> bool:
        return all(not v for v in self.matrix.values())

    def same_operator(self, other: FiniteRankOp | dict) -> bool:
        m = other.matrix if isinstance(other, FiniteRankOp) else other
        return all(self.matrix[x] == m.get(x, Vector()) for x in self.sys.Q.labels)

    def compose(self, other: FiniteRankOp) -> FiniteRankOp:
        """theta_{q1,p1} theta_{q2,p2} = theta_{q1 psi(p1, q2), p2}."""
        sys = self.sys
        terms = [(sys.Q.right(q1, sys.psi(p1, q2)), p2) for q1, p1 in self.terms for q2, p2 in other.terms]
        return FiniteRankOp(sys, terms)

    def __add__(self, other: FiniteRankOp) -> FiniteRankOp:
        return FiniteRankOp(self.sys, self.terms + other.terms)

    def fmt(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"theta[{self.sys.Q.fmt(q)}, {self.sys.P.fmt(p)}]" for q, p in self.terms)


def rank_one(sys: RSystem, q: Vector, p: Vector, verify: bool = True) -> FiniteRankOp:
    op = FiniteRankOp(sys, [(q, p)] if q and p else [])
    if verify:
        adjoint_witness = check_adjoint(op)
        if adjoint_witness is not None:
            raise InconsistencyError(f"adjoint identity fails at {adjoint_witness}")
    return op


def check_adjoint(op: FiniteRankOp):
    """psi(p', theta_{q,p}(x)) = psi(theta_{p,q}(p'), x) on bases; None or witness."""
    sys = op.sys
    for pp in sys.P.labels:
        pv = sys.P.gen(pp)
        adj = op.adjoint_apply(pv)
        for x in sys.Q.labels:
            xv = sys.Q.gen(x)
            if sys.psi(pv, op.apply(xv)) != sys.psi(adj, xv):
                return (pp, x)
    return None


def _flat(matrix: dict) -> Vector:
    return _tagged(matrix.items())


def _theta_grid(sys: RSystem):
    """Rank-one generators theta_{x,y} over the Q x P basis grid."""
    return [(x, y) for x in sys.Q.labels for y in sys.P.labels]


def _grid_op(sys: RSystem, combo: Vector, grid) -> FiniteRankOp:
    terms = []
    for i, c in sorted(combo.items()):
        x, y = grid[i]
        terms.append((sys.Q.gen(x) * c, sys.P.gen(y)))
    return FiniteRankOp(sys, terms)


def _grid_span(sys: RSystem) -> tuple[list, Echelon]:
    cached = getattr(sys, "_grid_cache", None)
    if cached is None:
        grid = _theta_grid(sys)
        ech = Echelon(track=True)
        for x, y in grid:
            op = FiniteRankOp(sys, [(sys.Q.gen(x), sys.P.gen(y))])
            ech.add(_flat(op.matrix))
        cached = (grid, ech)
        sys._grid_cache = cached
    return cached


def finite_rank_solve(sys: RSystem, matrix: dict) -> FiniteRankOp | None:
    """A combination of basis thetas with the given matrix, or None."""
    grid, ech = _grid_span(sys)
    combo = ech.express(_flat(matrix))
    if combo is None:
        return None
    return _grid_op(sys, combo, grid)


@dataclass
class FSWitness:
    Theta: FiniteRankOp
    Phi: FiniteRankOp  # in the span of the adjoints theta_{p,q}; acts on P via adjoint_apply


def check_fs(sys: RSystem, Qs: Sequence[Vector] | None = None, Ps: Sequence[Vector] | None = None) -> FSWitness | None:
    """Theta in F_P(Q) fixing every q in Qs and Phi in F_Q(P) fixing every p in Ps.

    Defaults to the full bases.  Exact: solves the linear systems over the
    rank-one generators of the whole basis grid.
    """
    Qs = [sys.Q.gen(x) for x in sys.Q.labels] if Qs is None else list(Qs)
    Ps = [sys.P.gen(y) for y in sys.P.labels] if Ps is None else list(Ps)
    grid = _theta_grid(sys)
    eq = Echelon(track=True)
    ep = Echelon(track=True)
    for x, y in grid:
        op = FiniteRankOp(sys, [(sys.Q.gen(x), sys.P.gen(y))])
        eq.add(_tagged((i, op.apply(q)) for i, q in enumerate(Qs)))
        ep.add(_tagged((i, op.adjoint_apply(p)) for i, p in enumerate(Ps)))
    cq = eq.express(_tagged(enumerate(Qs)))
    cp = ep.express(_tagged(enumerate(Ps)))
    if cq is None or cp is None:
        return None
    return FSWitness(_grid_op(sys, cq, grid), _grid_op(sys, cp, grid))


@dataclass
class DeltaGamma:
    delta: dict  # matrix on Q
    gamma: dict  # matrix on P
    adjoint: bool


def delta_gamma(sys: RSystem, r: Vector) -> DeltaGamma:
    """Delta(r) q = r q and Gamma(r) p = p r, with the adjoint relation checked."""
    P, Q = sys.P, sys.Q
    d = {x: Q.left(r, Q.gen(x)) for x in Q.labels}
    g = {y: P.right(P.gen(y), r) for y in P.labels}
    ok = all(
        sys.psi(P.gen(y), d[x]) == sys.psi(g[y], Q.gen(x)) for y in P.labels for x in Q.labels
    )
    if not ok:
        raise InconsistencyError("Gamma(r) is not adjoint to Delta(r)")
    return DeltaGamma(d, g, ok)


def kernel_delta(sys: RSystem) -> Subspace:
    Q = sys.Q
    return Subspace(_kernel_in(sys.R.basis, lambda r: _tagged((x, Q.left(r, Q.gen(x))) for x in Q.labels)), "ker Delta")


def pi_map(rep: CovariantRep, op: FiniteRankOp, check: bool = True, samples: int = 20,
           rng: random.Random | None = None) -> Vector:
    """pi_{T,S}(sum theta_{q_i,p_i}) = sum T(q_i) S(p_i).

    With ``check``, ``samples`` random formal sums whose operator is zero
    are mapped too; a nonzero image raises InconsistencyError.
    """
    B = rep.B
    out = Vector()
    for q, p in op.terms:
        out = out + B.mul(rep.T_vec(q), rep.S_vec(p))
    if check:
        for combo in null_combinations(rep.sys, samples, rng or random.Random(0)):
            val = pi_map(rep, combo, check=False)
            if val:
                raise InconsistencyError(f"pi is not well defined: {combo.fmt()} is zero but maps to {B.fmt(val)}")
    return out


def null_combinations(sys: RSystem, count: int, rng: random.Random) -> list[FiniteRankOp]:
    """Random formal sums of basis thetas whose operator matrix vanishes."""
    grid, _ = _grid_span(sys)
    images = [_flat(FiniteRankOp(sys, [(sys.Q.gen(x), sys.P.gen(y))]).matrix) for x, y in grid]
    null = kernel(images)
    out = []
    if not null:
        return out
    F = sys.A.field
    for _ in range(count):
        combo = Vector()
        for v in null:
            combo = combo.axpy(F(rng.randint(-3, 3)), Vector({k: F(c) for k, c in v.items()}))
        out.append(_grid_op(sys, combo, grid))
    return out


# ---------------------------------------------------------------------------
# compatible ideals


@dataclass
class CompatibleReport:
    compatible: bool
    faithful: bool
    operators: dict = field(default_factory=dict)  # index of J basis -> FiniteRankOp
    witness: Vector | None = None
    message: str = ""


def compatible_ideal_check(sys: RSystem, J: Subspace) -> CompatibleReport:
    """J inside Delta^-1(F_P(Q)) and J meeting ker Delta only in 0."""
    w = ideal_witness(sys.A, sys.R, J)
    if w is not None:
        raise PreconditionError(f"not a two-sided ideal of R: {w[0]} product {sys.A.fmt(w[3])}")
    ops = {}
    for i, x in enumerate(J.basis):
        op = finite_rank_solve(sys, delta_gamma(sys, x).delta)
        if op is None:
            return CompatibleReport(False, False, ops, x, f"Delta({sys.A.fmt(x)}) is not finite rank")
        ops[i] = op
    meet = J & kernel_delta(sys)
    if not meet.is_zero():
        return CompatibleReport(True, False, ops, meet.basis[0], f"{sys.A.fmt(meet.basis[0])} is in ker Delta")
    return CompatibleReport(True, True, ops)


def delta_preimage_of_F(sys: RSystem) -> Subspace:
    """Delta^-1(F_P(Q)) as a subspace of R."""
    _, ech = _grid_span(sys)
    Q = sys.Q

    def residue(r):
        return ech.reduce(_flat({x: Q.left(r, Q.gen(x)) for x in Q.labels}))

    return Subspace(_kernel_in(sys.R.basis, residue), "Delta^-1(F)")


@dataclass
class CanonicalIdeal:
    J: Subspace
    preimage: Subspace
    ker: Subspace
    ker_perp: Subspace
    certified: bool


def canonical_max_ideal(sys: RSystem) -> CanonicalIdeal:
    """J = Delta^-1(F_P(Q)) meet (ker Delta)^perp, certified when J meets ker Delta in 0."""
    pre = delta_preimage_of_F(sys)
    ker = kernel_delta(sys)
    kp = perp_ideal(sys.A, sys.R, ker, check=False)
    J = pre & kp
    return CanonicalIdeal(J, pre, ker, kp, (J & ker).is_zero())


def check_cp_invariant(rep: CovariantRep, J: Subspace) -> Verdict:
    """pi_{T,S}(Delta(x)) = sigma(x) for a basis of J."""
    name = "cp-invariance"
    sys = rep.sys
    for x in J.basis:
        op = finite_rank_solve(sys, delta_gamma(sys, x).delta)
        if op is None:
            return failed(name, "Delta(x) is not finite rank", x=sys.A.fmt(x))
        lhs = pi_map(rep, op, check=False)
        rhs = rep.sigma(x)
        if lhs != rhs:
            v = failed(name, "pi(Delta(x)) != sigma(x)", x=sys.A.fmt(x), pi=rep.B.fmt(lhs), sigma=rep.B.fmt(rhs))
            v.data = {"x": x, "pi": lhs, "sigma": rhs}
            return v
    return passed(name, f"checked on a basis of J (dim {J.dim})")


def toeplitz_graded_span(rep: CovariantRep, t: int, cap: int = 2) -> Subspace:
    """Degree-t part of R<S,T,sigma>: span of T^m(q) S^n(p) with m - n = t, m, n <= cap."""
    B = rep.B
    vecs = []
    for m in range(0, cap + 1):
        n = m - t
        if n < 0 or n > cap:
            continue
        rm = rep_tensor_power(rep, m)
        rn = rep_tensor_power(rep, n)
        for q, p in itertools.product(rm.sys.Q.labels, rn.sys.P.labels):
            vecs.append(B.mul(rm.T(q), rn.S(p)))
    return Subspace(vecs, f"Toeplitz span {t}")


def scalar_system(A: GradedAlgebra) -> RSystem:
    """R = P = Q = the degree-0 part of A with psi the multiplication."""
    R = A.span_of_degree(0)
    M = EmbeddedModule(A, R, "K")

    def psi(a, b):
        return A.mul(M.embed(M.gen(a)), M.embed(M.gen(b)))

    return RSystem(A, R, M, M, psi, name="(K,K,mult)")


def sorted_labels(labels) -> list:
    return sorted(labels, key=label_key)
