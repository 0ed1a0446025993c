"""Random Hom-Lie algebras built from constructions that are valid by design,
and the regression checks run over them.

Nothing is rejection-sampled from raw structure constants.  Every family
below is a Hom-Lie algebra for structural reasons (Yau twists of Lie
algebras by endomorphisms, two-step nilpotent algebras with central
derived part, zero-alpha algebras, direct sums and quotients), and each
instance is still run through the validator.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from pathlib import Path

import numpy as np

from .algebra import (
    HomLieAlgebra,
    abelian,
    direct_sum,
    heisenberg,
    nilpotent_alpha_cover,
    nilpotent_alpha_example,
    quotient,
    sl2,
    validate,
    yau_twist,
)
from .exactlin import GF, QQ, Field, Subspace, rank

MODES = ("identity", "surjective", "nilpotent", "zero", "arbitrary")


@dataclass(frozen=True)
class CorpusSpec:
    count: int = 25
    dims: tuple[int, int] = (1, 6)
    field: str | int = "Q"
    alpha_mode: str = "identity"
    seed: int = 0

    def __post_init__(self):
        if self.alpha_mode not in MODES:
            raise ValueError(f"alpha mode must be one of {', '.join(MODES)}")
        lo, hi = self.dims
        if not 1 <= lo <= hi:
            raise ValueError("dimension range must satisfy 1 <= min <= max")
        if self.count < 0:
            raise ValueError("count must be non-negative")

    @property
    def F(self) -> Field:
        return QQ if self.field in ("Q", "QQ", "rational") else GF(int(self.field))

    def to_json(self):
        return {"count": self.count, "dims": list(self.dims), "field": str(self.field),
                "alpha_mode": self.alpha_mode, "seed": self.seed}


# ---------------------------------------------------------------------------
# random pieces


def _ints(rng, shape, lo=-2, hi=2):
    return rng.integers(lo, hi + 1, size=shape)


def _invertible(rng, F, n):
    while True:
        m = F.array(_ints(rng, (n, n)))
        if rank(m, F) == n:
            return m


def _nilpotent(rng, F, n):
    """Strictly triangular after a random permutation of the basis."""
    m = np.tril(_ints(rng, (n, n)), -1)
    p = rng.permutation(n)
    return F.array(m[np.ix_(p, p)])


def _alpha_for_mode(rng, F, n, mode):
    if mode == "identity":
        return F.eye(n)
    if mode == "surjective":
        return _invertible(rng, F, n)
    if mode == "nilpotent":
        return _nilpotent(rng, F, n)
    if mode == "zero":
        return F.zeros((n, n))
    return F.array(_ints(rng, (n, n)))


# ---------------------------------------------------------------------------
# families; each returns a valid algebra of dimension at most d or None


def fam_abelian(rng, F, d, mode):
    n = d
    return abelian(n, _alpha_for_mode(rng, F, n, mode), F)


def _symplectic_similitude(rng, F, m):
    """A (2m x 2m) with omega(Au, Av) = c omega(u, v) for the form pairing x_i with y_i."""
    c = int(rng.choice([1, -1, 2, 3]))
    A = np.zeros((2 * m, 2 * m), dtype=np.int64)
    perm = rng.permutation(m)
    for i in range(m):
        k1, k2 = _ints(rng, 2)
        j = perm[i]
        # block sending (x_i, y_i) to (x_j, y_j) with determinant c
        blk = np.array([[1, k1], [0, 1]]) @ np.array([[c, 0], [k2, 1]])
        A[np.ix_([j, m + j], [i, m + i])] = blk
    return A, c


def fam_heisenberg(rng, F, d, mode):
    if d < 3:
        return None
    m = int(rng.integers(1, (d - 1) // 2 + 1))
    n = 2 * m + 1
    H = heisenberg(m, field=F)
    phi = np.zeros((n, n), dtype=np.int64)
    if mode == "identity":
        return H
    if mode in ("surjective", "arbitrary"):
        A, c = _symplectic_similitude(rng, F, m)
        phi[: 2 * m, : 2 * m] = A
        phi[2 * m, 2 * m] = c
        phi[2 * m, : 2 * m] = _ints(rng, 2 * m)
        if mode == "arbitrary" and rng.random() < 0.5:
            phi[2 * m, 2 * m] = 0
            phi[: 2 * m, : 2 * m] = 0
            phi[2 * m, : 2 * m] = _ints(rng, 2 * m)
    elif mode == "nilpotent":
        # x -> span(y, z), y -> span(z), z -> 0: the image of V is isotropic
        phi[m: 2 * m, :m] = _ints(rng, (m, m))
        phi[2 * m, : 2 * m] = _ints(rng, 2 * m)
    else:
        return HomLieAlgebra(F, H.table, F.zeros((n, n)), H.basis_names, "H0")
    return yau_twist(H, F.array(phi))


def fam_sl2(rng, F, d, mode):
    if d < 3 or mode == "nilpotent":
        return None
    L = sl2(F)
    if mode == "identity":
        return L
    if mode == "zero":
        return HomLieAlgebra(F, L.table, F.zeros((3, 3)), L.basis_names, "sl2_0")
    c = F.scalar(int(rng.choice([1, -1, 2, 3])))
    phi = F.zeros((3, 3))
    phi[0, 0], phi[1, 1], phi[2, 2] = c, F.inv(c), F.one
    if rng.random() < 0.5:
        swap = F.array([[0, 1, 0], [1, 0, 0], [0, 0, -1]])
        phi = F.matmul(swap, phi)
    return yau_twist(L, phi)


def _polynomial_in(F, D, coeffs):
    n = D.shape[0]
    out = F.zeros((n, n))
    power = F.eye(n)
    for c in coeffs:
        out = F.add(out, F.mul(power, F.scalar(int(c))))
        power = F.matmul(power, D)
    return out


def semidirect_vt(rng, F, k, mode):
    """V + t with [v_i, t] = -D v_i, V abelian, alpha = P(D) on V and t -> t + w."""
    n = k + 1
    D = F.array(_ints(rng, (k, k), -1, 1))
    br = {}
    for i in range(k):
        br[(i, k)] = list(F.neg(np.concatenate([D[:, i], F.zeros(1)])))
    if mode == "identity":
        P = F.eye(k)
    else:
        while True:
            P = _polynomial_in(F, D, _ints(rng, 3))
            if mode != "surjective" or rank(P, F) == k:
                break
    alpha = F.zeros((n, n))
    alpha[:k, :k] = P
    alpha[k, k] = F.one
    if mode != "identity":
        alpha[:k, k] = F.array(_ints(rng, k))
    names = [f"v{i + 1}" for i in range(k)] + ["t"]
    return HomLieAlgebra.from_brackets(F, n, br, alpha, names, name=f"V{k}xt")


def fam_semidirect(rng, F, d, mode):
    if d < 2 or mode in ("nilpotent", "zero"):
        return None
    return semidirect_vt(rng, F, int(rng.integers(1, d)), mode)


def _lie_seed(rng, F, d):
    """A Lie algebra (alpha = id) of dimension at most d."""
    choice = int(rng.integers(0, 4))
    if choice == 1 and d >= 3:
        return heisenberg(1, field=F)
    if choice == 2 and d >= 3:
        return sl2(F)
    if choice == 3 and d >= 2:
        return semidirect_vt(rng, F, int(rng.integers(1, d)), "identity")
    return abelian(int(rng.integers(1, d + 1)), field=F)


def fam_shift(rng, F, d, mode):
    """g + g twisted by the shift (a, b) -> (0, a); alpha is nilpotent."""
    if d < 2 or mode not in ("nilpotent", "arbitrary"):
        return None
    g = _lie_seed(rng, F, d // 2)
    G = direct_sum(g, g)
    n = g.dim
    phi = F.zeros((2 * n, 2 * n))
    phi[n:, :n] = F.eye(n)
    L = yau_twist(G, phi)
    return HomLieAlgebra(F, L.table, L.alpha, L.basis_names, f"shift({g.name})")


def fam_two_step(rng, F, d, mode):
    """V + W with [V, V] in W central, alpha = lam on V, lam^2 on W, plus f: V -> W."""
    if d < 3:
        return None
    v = int(rng.integers(2, d))
    w = int(min(d - v, v * (v - 1) // 2))
    if w < 1:
        return None
    n = v + w
    pairs = list(combinations(range(v), 2))
    br = {}
    for (i, j) in pairs:
        val = _ints(rng, w, -1, 1)
        if np.any(val):
            br[(i, j)] = [0] * v + list(val)
    if mode == "identity":
        lam, f = 1, np.zeros((w, v), dtype=np.int64)
    elif mode == "nilpotent":
        lam, f = 0, _ints(rng, (w, v))
    elif mode == "zero":
        lam, f = 0, np.zeros((w, v), dtype=np.int64)
    elif mode == "surjective":
        lam, f = int(rng.choice([1, -1, 2])), _ints(rng, (w, v))
    else:
        lam, f = int(rng.choice([0, 1, 2])), _ints(rng, (w, v))
    alpha = np.zeros((n, n), dtype=np.int64)
    alpha[:v, :v] = lam * np.eye(v, dtype=np.int64)
    alpha[v:, v:] = lam * lam * np.eye(w, dtype=np.int64)
    alpha[v:, :v] = f
    return HomLieAlgebra.from_brackets(F, n, {k: F.array(x) for k, x in br.items()}, F.array(alpha),
                                       name=f"N{v},{w}")


def fam_zero_alpha(rng, F, d, mode):
    """Any skew bracket is Hom-Lie once alpha = 0."""
    if mode != "zero":
        return None
    n = d
    br = {}
    for i, j in combinations(range(n), 2):
        if rng.random() < 0.5:
            br[(i, j)] = F.array(_ints(rng, n, -1, 1))
    return HomLieAlgebra.from_brackets(F, n, br, F.zeros((n, n)), name=f"Z{n}")


def fam_named(rng, F, d, mode):
    if mode != "arbitrary" or d < 3:
        return None
    if d >= 4 and rng.random() < 0.5:
        return nilpotent_alpha_cover(F)
    return nilpotent_alpha_example(F)


FAMILIES = {
    "abelian": fam_abelian,
    "heisenberg": fam_heisenberg,
    "sl2": fam_sl2,
    "semidirect": fam_semidirect,
    "shift": fam_shift,
    "two_step": fam_two_step,
    "zero_alpha": fam_zero_alpha,
    "named": fam_named,
}


def _single(rng, F, d, mode):
    names = list(FAMILIES)
    while True:
        fam = names[int(rng.integers(0, len(names)))]
        L = FAMILIES[fam](rng, F, d, mode)
        if L is not None and L.dim <= d:
            return fam, L


def random_algebra(rng, F, lo, hi, mode):
    """(family, algebra) with lo <= dim <= hi, possibly a direct sum or a quotient."""
    for _ in range(200):
        d = int(rng.integers(lo, hi + 1))
        r = rng.random()
        if r < 0.2 and d >= 2:
            fam1, A = _single(rng, F, d - 1, mode)
            if A.dim < d:
                fam2, B = _single(rng, F, d - A.dim, mode)
                fam, L = f"sum({fam1},{fam2})", direct_sum(A, B)
            else:
                fam, L = fam1, A
        elif r < 0.3:
            fam1, A = _single(rng, F, min(hi + 1, 8), mode)
            Z = A.alpha_center
            if Z.dim == 0 or Z.dim == A.dim:
                fam, L = fam1, A
            else:
                L, _ = quotient(A, Z)
                fam = f"quotient({fam1})"
        else:
            fam, L = _single(rng, F, d, mode)
        if lo <= L.dim <= hi and validate(L).valid:
            return fam, L
    raise RuntimeError("generator failed to produce an algebra in range")


def generate(spec: CorpusSpec):
    """Deterministic list of (index, family, algebra)."""
    F = spec.F
    lo, hi = spec.dims
    out = []
    mode_index = MODES.index(spec.alpha_mode)
    for i in range(spec.count):
        rng = np.random.default_rng([spec.seed, mode_index, i])
        fam, L = random_algebra(rng, F, lo, hi, spec.alpha_mode)
        out.append((i, fam, L))
    return out


# ---------------------------------------------------------------------------
# checks


def instance_checks(L: HomLieAlgebra, witness: bool = True) -> dict:
    """Every applicable identity, as name -> bool."""
    from .capability import is_capable
    from .homology import chain_complex, complex_defects, homology
    from .tensorext import exterior_product, psi_gamma_map, tensor_square, uce_check

    checks = {"valid": validate(L).valid}
    t = tensor_square(L)
    e = exterior_product(t)
    checks["tensor_certificates"] = t.ok
    checks["exterior_certificates"] = e.ok
    cx = chain_complex(L, max_degree=3)
    checks["complex_ok"] = not complex_defects(cx)
    h = homology(L, up_to=2, complex_=cx)
    checks["hopf_oracle"] = h.dims[2] == e.lam.kernel.dim
    checks["h1_abelianization"] = h.dims[1] == L.dim - L.derived.dim
    if L.alpha_surjective:
        from .algebra import abelianization
        from .tensorext import gamma

        g = gamma(abelianization(L)[0]).dim
        checks["gamma_identity"] = t.lam.kernel.dim == h.dims[2] + g
        checks["psi_certificates"] = psi_gamma_map(L, t).ok
    if L.is_perfect:
        checks["perfect_products_agree"] = uce_check(L, multiplier_dim=h.dims[2]).ok
    cap = is_capable(L, t, e, witness=False)
    for k, v in cap.criteria_consistency.items():
        checks[f"capability_{k}"] = v
    for k, v in cap.center_checks.items():
        checks[f"center_{k}"] = v
    if witness and (L.is_abelian or L.alpha_is_zero or (not L.is_perfect and not L.alpha_surjective)):
        checks["witness"] = _witness_ok(L, e)
    return checks


def _witness_ok(L, e) -> bool:
    from .capability import capability_witness

    try:
        w = capability_witness(L, e=e)
    except Exception:
        return False
    return w is not None and w.ok


def _run_one(args):
    from .serialize import algebra_from_json

    i, fam, doc, witness = args

    L = algebra_from_json(doc)
    try:
        checks = instance_checks(L, witness=witness)
    except Exception as exc:  # a hard error in a pipeline is a failed instance
        checks = {"exception": False}
        return i, fam, L.dim, checks, f"{type(exc).__name__}: {exc}"
    return i, fam, L.dim, checks, None


@dataclass
class CorpusSummary:
    spec: CorpusSpec
    instances: list = dc_field(default_factory=list)
    totals: dict = dc_field(default_factory=dict)
    failures: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self):
        return {
            "spec": self.spec.to_json(),
            "count": len(self.instances),
            "ok": self.ok,
            "totals": {k: dict(sorted(v.items())) for k, v in sorted(self.totals.items())},
            "failures": self.failures,
            "instances": self.instances,
        }


def run_corpus(spec: CorpusSpec, jobs: int = 1, dump_dir=None, witness: bool = True) -> CorpusSummary:
    from .serialize import algebra_to_json, dumps

    items = generate(spec)
    args = [(i, fam, algebra_to_json(L), witness) for i, fam, L in items]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, args))
    else:
        results = [_run_one(a) for a in args]
    results.sort(key=lambda r: r[0])
    summary = CorpusSummary(spec)
    docs = {i: doc for i, _, doc, _ in args}
    for i, fam, dim, checks, err in results:
        failed = sorted(k for k, v in checks.items() if not v)
        summary.instances.append({"id": i, "family": fam, "dim": dim, "failed": failed})
        for k, v in checks.items():
            bucket = summary.totals.setdefault(k, {"pass": 0, "fail": 0})
            bucket["pass" if v else "fail"] += 1
        if failed:
            record = {"id": i, "family": fam, "failed": failed, "algebra": docs[i]}
            if err:
                record["error"] = err
            summary.failures.append({k: record[k] for k in ("id", "family", "failed")})
            if dump_dir is not None:
                path = Path(dump_dir)
                path.mkdir(parents=True, exist_ok=True)
                name = f"corpus-{spec.alpha_mode}-{spec.seed}-{i}.json"
                (path / name).write_text(dumps(record) + "\n")
    return summary


# ---------------------------------------------------------------------------
# extensions and pairs


@dataclass
class ExtensionCase:
    name: str
    K: HomLieAlgebra
    M: Subspace
    section: np.ndarray | None


def split_extensions(F: Field = QQ, seed: int = 0, count: int = 12):
    """Split extensions with a morphic section: direct sums and V + t."""
    out = []
    H1 = heisenberg(1, field=F)
    out.append(_sum_case("H1+ab1", H1, abelian(1, field=F)))
    i = 0
    while len(out) < count:
        rng = np.random.default_rng([seed, 101, i])
        i += 1
        if i % 2:
            _, A = random_algebra(rng, F, 1, 3, "identity" if i % 4 == 1 else "surjective")
            _, B = random_algebra(rng, F, 1, 2, "arbitrary")
            out.append(_sum_case(f"sum{i}", A, B))
        else:
            k = int(rng.integers(1, 4))
            L = semidirect_vt(rng, F, k, "arbitrary" if i % 4 == 0 else "surjective")
            # alpha(t) = t keeps t -> t a morphism from span{t}
            alpha = L.alpha.copy()
            alpha[:k, k] = F.zeros(k)
            L = HomLieAlgebra(F, L.table, alpha, L.basis_names, L.name)
            if not validate(L).valid:
                continue
            M = Subspace.span(F, F.eye(k + 1)[:k], k + 1)
            sec = F.zeros((k + 1, 1))
            sec[k, 0] = F.one
            out.append(ExtensionCase(f"vt{i}", L, M, sec))
    return out


def _sum_case(name, A, B):
    F = A.field
    K = direct_sum(A, B)
    n = K.dim
    M = Subspace.span(F, F.eye(n)[A.dim:], n)
    sec = F.zeros((n, A.dim))
    sec[: A.dim, :] = F.eye(A.dim)
    return ExtensionCase(name, K, M, sec)


def nonsplit_extensions(F: Field = QQ, seed: int = 0, count: int = 12):
    """Central and derived-ideal extensions without a supplied section."""
    out = [
        ExtensionCase("H1/center", heisenberg(1, field=F), heisenberg(1, field=F).center, None),
        ExtensionCase("H2/center", heisenberg(2, field=F), heisenberg(2, field=F).center, None),
    ]
    K4 = nilpotent_alpha_cover(F)
    out.append(ExtensionCase("K4/alpha_center", K4, K4.alpha_center, None))
    i = 0
    while len(out) < count:
        rng = np.random.default_rng([seed, 202, i])
        i += 1
        mode = MODES[i % len(MODES)]
        _, K = random_algebra(rng, F, 2, 5, mode)
        M = K.derived if i % 2 else K.alpha_center
        if M.dim == 0 or M.dim == K.dim:
            M = K.derived if M is K.alpha_center else K.alpha_center
        if M.dim == 0 or M.dim == K.dim:
            continue
        out.append(ExtensionCase(f"{K.name or 'K'}#{i}", K, M, None))
    return out


def extension_checks(case: ExtensionCase) -> dict:
    from .homology import six_term_check
    from .tensorext import build_extension, exterior_sequence_check

    ext = build_extension(case.K, case.M, case.section)
    s2 = exterior_sequence_check(case.K, case.M, ext=ext)
    s6 = six_term_check(case.K, case.M, ext=ext)
    out = {f"ext_seq_{k}": v for k, v in s2.checks.items()}
    out.update({f"six_{k}": v for k, v in s6.checks.items()})
    return out


def surjective_pairs(F: Field = QQ, seed: int = 0, count: int = 25):
    """Pairs of surjective-alpha algebras, starting with H(1) and ab(1)."""
    pairs = [(heisenberg(1, field=F), abelian(1, field=F)),
             (abelian(1, field=F), abelian(1, field=F)),
             (sl2(F), abelian(1, field=F))]
    i = 0
    while len(pairs) < count:
        rng = np.random.default_rng([seed, 303, i])
        mode = "identity" if i % 2 else "surjective"
        _, A = random_algebra(rng, F, 1, 3, mode)
        _, B = random_algebra(rng, F, 1, 3, "surjective")
        i += 1
        if A.alpha_surjective and B.alpha_surjective:
            pairs.append((A, B))
    return pairs
