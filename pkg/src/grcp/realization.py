"""Realizing a graded algebra as a Cuntz-Pimsner ring of a system (J, I, psi).

The verifier checks the four structural conditions on (R, I, J) inside A,
the identity relating the canonical ideal to IJ meet R, and then the
hypotheses under which the inclusion representation induces a graded
isomorphism onto the subring generated by R, I and J: FS, covariance,
Cuntz-Pimsner invariance for the canonical ideal, generation, and
injectivity on R (which makes the induced map injective by graded
uniqueness).  Everything is computed inside the algebra's degree window.
"""

from __future__ import annotations

import random
from collections.abc import Callable, Hashable
from dataclasses import dataclass, field

from grcp.errors import InconsistencyError, PreconditionError, UnsupportedInstance
from grcp.exactlin import Echelon, Vector
from grcp.graded import (
    GradedAlgebra,
    Subspace,
    SubspaceSpec,
    _kernel_in,
    _tagged,
    check_graded_local_units,
    check_strongly_graded,
    left_annihilator,
    perp_ideal,
    product_containment,
    span_products,
    subring_generated,
)
from grcp.report import (
    CERTIFIED,
    FAIL,
    INCONCLUSIVE,
    NOT_APPLICABLE,
    PASS,
    Report,
    Verdict,
    combine,
    failed,
    passed,
)


@dataclass
class RealizationData:
    """A graded algebra with R in degree 0, I in degree 1 and J in degree -1."""

    A: GradedAlgebra
    R: Subspace
    I: Subspace
    J: Subspace
    name: str = ""

    def __post_init__(self):
        for attr in ("R", "I", "J"):
            val = getattr(self, attr)
            if isinstance(val, SubspaceSpec):
                setattr(self, attr, val.materialize(self.A))
        self.name = self.name or self.A.name


def trivial_data(A: GradedAlgebra) -> RealizationData:
    """R = A (trivially graded), I = J = 0.

    Needs the windowed basis to be closed under products, i.e. A is
    finite-dimensional and fits in its window.
    """
    labels = A.labels()
    known = set(labels)
    for a in labels:
        for b in labels:
            stray = next((k for k in A.mul(A.gen(a), A.gen(b)) if k not in known), None)
            if stray is not None:
                raise UnsupportedInstance(f"{A.fmt(a)} {A.fmt(b)} leaves the window; A must be finite-dimensional")
    T = A.trivially_graded()
    return RealizationData(T, Subspace([T.gen(x) for x in T.labels()], "A"), Subspace(), Subspace(), T.name)


# ---------------------------------------------------------------------------
# conditions


def _homogeneity(A: GradedAlgebra, X: Subspace, n: int, what: str) -> Verdict | None:
    for x in X.basis:
        stray = sorted({A.degree(k) for k in x} - {n})
        if stray:
            v = failed("condition-1", f"{what} is not inside degree {n}", element=A.fmt(x), degree=stray[0])
            v.data = {"kind": "degree", "x": x, "degree": n}
            return v
    return None


def check_condition_1(data: RealizationData) -> Verdict:
    """R a subring of A_0; RI, IR in I; RJ, JR in J; JI in R."""
    A, R, I, J = data.A, data.R, data.I, data.J
    for X, n, what in ((R, 0, "R"), (I, 1, "I"), (J, -1, "J")):
        bad = _homogeneity(A, X, n, what)
        if bad is not None:
            return bad
    rules = (
        ("RR in R", R, R, R), ("RI in I", R, I, I), ("IR in I", I, R, I),
        ("RJ in J", R, J, J), ("JR in J", J, R, J), ("JI in R", J, I, R),
    )
    for rule, X, Y, Z in rules:
        w = product_containment(A, X, Y, Z)
        if w is not None:
            x, y, p = w
            v = failed("condition-1", f"{rule} fails", left=A.fmt(x), right=A.fmt(y), product=A.fmt(p))
            v.data = {"kind": "product", "rule": rule, "x": x, "y": y, "target": Z}
            return v
    return passed("condition-1", "RI, IR in I; RJ, JR in J; JI in R")


def _fixing_element(A: GradedAlgebra, gens: list[Vector], samples: list[Vector], side: str) -> Vector | None:
    """An element a of span(gens) with a x = x (side 'left') or x a = x for all samples."""
    ech = Echelon(track=True)
    for g in gens:
        if side == "left":
            ech.add(_tagged((i, A.mul(g, x)) for i, x in enumerate(samples)))
        else:
            ech.add(_tagged((i, A.mul(x, g)) for i, x in enumerate(samples)))
    combo = ech.express(_tagged(enumerate(samples)))
    if combo is None:
        return None
    out = Vector()
    for i, c in combo.items():
        out = out.axpy(c, gens[i])
    return out


def check_condition_2(data: RealizationData, I_samples=None, J_samples=None) -> Verdict:
    """a in IJ with a i = i on I_samples and b in IJ with j b = j on J_samples."""
    A = data.A
    Is = list(data.I.basis if I_samples is None else I_samples)
    Js = list(data.J.basis if J_samples is None else J_samples)
    IJ = span_products(A, data.I, data.J, "IJ")
    a = _fixing_element(A, IJ.basis, Is, "left")
    if a is None:
        v = failed("condition-2", "no a in IJ with a i = i for the I samples", samples=", ".join(map(A.fmt, Is)))
        v.data = {"kind": "left", "samples": Is}
        return v
    b = _fixing_element(A, IJ.basis, Js, "right")
    if b is None:
        v = failed("condition-2", "no b in IJ with j b = j for the J samples", samples=", ".join(map(A.fmt, Js)))
        v.data = {"kind": "right", "samples": Js}
        return v
    v = passed("condition-2", "left and right fixing elements found in IJ", a=A.fmt(a), b=A.fmt(b))
    v.data = {"a": a, "b": b}
    return v


def check_condition_3(data: RealizationData) -> Verdict:
    """r in ann_R(I)^perp, a in IJ, r - a in ann_{A_0}(I) imply a in R."""
    A, R, I, J = data.A, data.R, data.I, data.J
    IJ = span_products(A, I, J, "IJ")
    if IJ <= R:
        return passed("condition-3", "IJ inside R, so the condition is automatic")
    ann = left_annihilator(A, R, I)
    perp = perp_ideal(A, R, ann, check=False)
    # unknowns: coefficients on perp.basis, then on IJ.basis; constraint (r - a) i = 0
    k = perp.dim
    cols = list(perp.basis) + [-y for y in IJ.basis]
    images = [_tagged((i, A.mul(x, y)) for i, y in enumerate(I.basis)) for x in cols]
    for s in kernel_of_images(images):
        r = _combine(perp.basis, Vector({i: c for i, c in s.items() if i < k}))
        a = _combine(IJ.basis, Vector({i - k: c for i, c in s.items() if i >= k}))
        if a not in R:
            v = failed("condition-3", "a is not in R although r - a annihilates I", r=A.fmt(r), a=A.fmt(a))
            v.data = {"r": r, "a": a}
            return v
    return passed("condition-3", "every admissible a lies in R")


def _combine(vecs: list[Vector], coeffs: Vector) -> Vector:
    out = Vector()
    for k, c in coeffs.items():
        out = out.axpy(c, vecs[k])
    return out


def check_condition_4(data: RealizationData) -> Verdict:
    """ann_R(I) meet ann_R(I)^perp is zero."""
    A, R, I = data.A, data.R, data.I
    ann = left_annihilator(A, R, I)
    meet = ann & perp_ideal(A, R, ann, check=False)
    if not meet.is_zero():
        x = meet.basis[0]
        v = failed("condition-4", "ann_R(I) meets its perp", element=A.fmt(x))
        v.data = {"x": x}
        return v
    return passed("condition-4", f"ann_R(I) has dim {ann.dim} and meets its perp in 0")


CONDITIONS = (check_condition_1, check_condition_2, check_condition_3, check_condition_4)


def replay_witness(data: RealizationData, verdict: Verdict) -> bool:
    """Re-evaluate a failing verdict's witness; True when the violation is real."""
    A, R, I, J = data.A, data.R, data.I, data.J
    d = verdict.data
    if verdict.name == "condition-1":
        if d["kind"] == "degree":
            return any(A.degree(k) != d["degree"] for k in d["x"])
        return A.mul(d["x"], d["y"]) not in d["target"]
    if verdict.name == "condition-2":
        IJ = span_products(A, I, J)
        side = d["kind"]
        # no element of IJ fixes the samples: the affine system is inconsistent
        return _fixing_element(A, IJ.basis, d["samples"], side) is None and bool(d["samples"])
    if verdict.name == "condition-3":
        r, a = d["r"], d["a"]
        ann = left_annihilator(A, R, I)
        r_ok = all(not A.mul(r, y) and not A.mul(y, r) for y in ann.basis) and r in R
        kills = all(not A.mul(r - a, i) for i in I.basis)
        return r_ok and a in span_products(A, I, J) and kills and a not in R
    if verdict.name == "condition-4":
        x = d["x"]
        in_ann = x in R and all(not A.mul(x, i) for i in I.basis)
        ann = left_annihilator(A, R, I)
        in_perp = all(not A.mul(x, y) and not A.mul(y, x) for y in ann.basis)
        return bool(x) and in_ann and in_perp
    raise ValueError(f"no replay for {verdict.name}")


# ---------------------------------------------------------------------------
# the identity and the full verification


@dataclass
class IdentitySides:
    left: Subspace
    right: Subspace

    @property
    def equal(self) -> bool:
        return self.left == self.right


def identity_sides(data: RealizationData) -> IdentitySides:
    """Left: Delta^-1(F_J(I)) meet (ker Delta)^perp from the system; right: IJ meet R."""
    from grcp.rsystem import delta_preimage_of_F, kernel_delta, realization_system

    sys = realization_system(data.A, data.R, data.I, data.J)
    ker = kernel_delta(sys)
    left = delta_preimage_of_F(sys) & perp_ideal(data.A, data.R, ker, check=False)
    right = span_products(data.A, data.I, data.J) & data.R
    return IdentitySides(left, right)


def check_ideal_identity(data: RealizationData) -> Verdict:
    sides = identity_sides(data)
    A = data.A
    fmt = lambda S: "{" + ", ".join(A.fmt(b) for b in S.basis) + "}"
    if sides.equal:
        v = passed("identity", f"both sides have dim {sides.left.dim}", span=fmt(sides.left))
    else:
        v = failed("identity", "canonical ideal differs from IJ meet R", left=fmt(sides.left), right=fmt(sides.right))
    v.data = {"left": sides.left, "right": sides.right}
    return v


@dataclass
class RealizationReport:
    name: str
    verdicts: list[Verdict] = field(default_factory=list)
    certificate: str = CERTIFIED
    generated_dim: int = 0
    saturated: bool = True
    canonical_ideal: Subspace | None = None

    def verdict(self, name: str) -> Verdict | None:
        return next((v for v in self.verdicts if v.name == name), None)

    def to_report(self, job: str, instance: dict | None = None) -> Report:
        inst = {"name": self.name}
        inst.update(instance or {})
        return Report(job, inst, list(self.verdicts), self.certificate)


def _skipped(name: str, why: str) -> Verdict:
    return Verdict(name, NOT_APPLICABLE, f"skipped: {why}")


def verify_realization(data: RealizationData, seed: int = 0, pi_samples: int = 20) -> RealizationReport:
    from grcp import rsystem as rs

    A = data.A
    rep = RealizationReport(data.name)
    add = rep.verdicts.append
    conds = [check(data) for check in CONDITIONS]
    for v in conds:
        add(v)
    structural = conds[0].ok
    if all(v.ok for v in conds):
        add(check_ideal_identity(data))
    else:
        add(_skipped("identity", "conditions (1)-(4) do not all hold"))

    if structural:
        sys = rs.realization_system(A, data.R, data.I, data.J)
        add(rs.check_system(sys))
        fs = rs.check_fs(sys)
        add(passed("fs", "fixing operators found for the full bases", theta=fs.Theta.fmt())
            if fs else failed("fs", "no finite-rank operator fixes the bases of I and J"))
        inc = rs.inclusion_rep(sys)
        add(rs.check_covariant_rep(inc))
        canon = rs.canonical_max_ideal(sys)
        rep.canonical_ideal = canon.J
        span = "{" + ", ".join(A.fmt(b) for b in canon.J.basis) + "}"
        add(passed("canonical-ideal", "meets ker Delta in 0", ideal=span) if canon.certified
            else failed("canonical-ideal", "meets ker Delta nontrivially", ideal=span))
        add(rs.check_cp_invariant(inc, canon.J))
        try:
            rs.pi_map(inc, rs.FiniteRankOp(sys, []), samples=pi_samples, rng=random.Random(seed))
            add(passed("pi-well-defined", f"{pi_samples} null combinations map to 0"))
        except InconsistencyError as exc:
            add(failed("pi-well-defined", str(exc)))
    else:
        for name in ("system", "fs", "covariant-rep", "canonical-ideal", "cp-invariance", "pi-well-defined"):
            add(_skipped(name, "condition (1) fails"))

    gen = subring_generated(A, [data.R, data.I, data.J])
    rep.generated_dim = gen.dim
    rep.saturated = gen.saturated
    msg = f"dim {gen.dim} after {gen.steps} steps"
    if gen.truncated_products:
        msg += f", {gen.truncated_products} products left the window"
    add(Verdict("generation", PASS if gen.saturated else INCONCLUSIVE, msg))
    zero_in_R = next((r for r in data.R.basis if not r), None)
    add(passed("injective-on-R", "sigma is the inclusion, so graded uniqueness makes the induced map injective")
        if zero_in_R is None else failed("injective-on-R", "R basis contains zero"))
    rep.certificate = combine(rep.verdicts, gen.saturated)
    return rep


# ---------------------------------------------------------------------------
# the A_0, A_1, A_-1 specialization and graded injectivity


def _power_spans(A: GradedAlgebra, sign: int) -> list[tuple[int, Subspace, Subspace]]:
    """(n, A_{sign n}, span of (A_sign)^n) for 2 <= n within the window."""
    out = []
    base = A.span_of_degree(sign)
    power = base
    n = 1
    while (n + 1) * sign in A.window:
        n += 1
        power = span_products(A, power, base)
        out.append((n, A.span_of_degree(sign * n), power))
    return out


def check_grcp1(A: GradedAlgebra, seed: int = 0) -> Report:
    """Powers, local units and the annihilator for R = A_0, I = A_1, J = A_{-1}, then the full verification."""
    report = Report("check-grcp1", {"algebra": A.name, "window": f"{A.window.min_deg}..{A.window.max_deg}"})
    data = RealizationData(A, A.span_of_degree(0), A.span_of_degree(1), A.span_of_degree(-1), A.name)
    v1 = passed("grcp1-powers", "A_n = A_1^n and A_-n = A_-1^n in the window")
    for sign in (1, -1):
        for n, comp, power in _power_spans(A, sign):
            if not comp <= power:
                missing = next(b for b in comp.basis if b not in power)
                v1 = failed("grcp1-powers", f"A_{sign * n} is not spanned by products of degree {sign} elements",
                            element=A.fmt(missing))
                break
        if not v1.ok:
            break
    report.add(v1)
    c2 = check_condition_2(data)
    v2 = Verdict("grcp1-local-units", c2.status, c2.message, dict(c2.witness))
    report.add(v2)
    c4 = check_condition_4(data)
    report.add(Verdict("grcp1-annihilator", c4.status, c4.message, dict(c4.witness)))
    if all(v.ok for v in report.verdicts):
        full = verify_realization(data, seed)
        for v in full.verdicts:
            report.add(v)
        report.certificate = combine(report.verdicts, full.saturated)
    else:
        report.certificate = combine(report.verdicts)
    return report


def _graded_map_matrix(A: GradedAlgebra, B: GradedAlgebra, phi: Callable[[Hashable], Vector], n: int):
    basis = A.basis(n)
    images = []
    for lab in basis:
        img = phi(lab)
        d = B.degree_of(img) if img else n
        if d != n:
            raise PreconditionError(f"phi is not graded: {A.fmt(lab)} has degree {n} but its image is not")
        images.append(img)
    return basis, images


def check_grcp2(A: GradedAlgebra, phi: Callable[[Hashable], Vector], B: GradedAlgebra | None = None,
                local_unit_limit: int = 14) -> Verdict:
    """Injectivity of a graded map from a strongly graded algebra with graded local units.

    Not applicable when A fails the hypotheses in the window or phi is not
    injective on A_0; otherwise every windowed component's kernel is
    computed and must vanish.
    """
    name = "grcp2"
    B = B or A
    per_degree = {n: _graded_map_matrix(A, B, phi, n) for n in A.window.degrees()}
    sg = check_strongly_graded(A)
    if not sg.ok:
        return Verdict(name, NOT_APPLICABLE, "A is not strongly graded in the window", {"degrees": f"{sg.witness[0]},{sg.witness[1]}"})
    xs = [A.gen(lab) for lab in A.labels()]
    if check_graded_local_units(A, xs, local_unit_limit) is None:
        return Verdict(name, NOT_APPLICABLE, "no graded local unit for the windowed basis")
    basis0, images0 = per_degree[0]
    ker0 = kernel_of_images(images0)
    if ker0:
        elem = _combine([A.gen(lab) for lab in basis0], ker0[0])
        return Verdict(name, NOT_APPLICABLE, "phi is not injective on A_0", {"kernel": A.fmt(elem)})
    for n, (basis, images) in sorted(per_degree.items()):
        ker = kernel_of_images(images)
        if ker:
            elem = _combine([A.gen(lab) for lab in basis], ker[0])
            return failed(name, f"nonzero kernel in degree {n}", element=A.fmt(elem))
    dims = ",".join(str(len(per_degree[n][0])) for n in sorted(per_degree))
    return passed(name, "windowed kernel is zero in every degree", dims=dims)


def kernel_of_images(images: list[Vector]) -> list[Vector]:
    """Coefficient vectors (keyed by position) of combinations of images equal to 0."""
    return _kernel_in([Vector.unit(i) for i in range(len(images))], lambda e: _combine(images, e))


def verify_steinberg(G, H, fld=None, seed: int = 0) -> Report:
    """H-triple checks on a finite graded groupoid, then the full realization verification."""
    from grcp.exactlin import QQ
    from grcp.steinberg import steinberg_realization_data

    sr = steinberg_realization_data(G, H, fld or QQ, require=False)
    report = Report("check-steinberg", {"groupoid": G.name, "arrows": len(G)})
    for v in sr.checks:
        report.add(v)
    report.add(sr.remark)
    if any(v.status == FAIL for v in sr.checks):
        report.certificate = combine(report.verdicts)
        return report
    full = verify_realization(sr.data, seed)
    for v in full.verdicts:
        report.add(v)
    report.certificate = combine(report.verdicts, full.saturated)
    return report
