"""Command-line front end.

Every subcommand reads an algebra in the JSON format of ``homlie.serialize``
and prints a stable-key-ordered JSON document (``--format json``, the
default) or an indented ``key: value`` listing (``--format text``).

Exit codes: 0 success, 1 the algebra or a checked identity failed,
2 unusable input (parse errors, dimension guard, unsupported field).
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .algebra import AlgebraError, HomLieAlgebra, Morphism, abelianization, validate
from .exactlin import Subspace
from .serialize import ParseError, algebra_from_json, dumps, load_json, matrix_to_json

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

CONVENTIONS = {
    "indices": "0-based",
    "alpha": "alpha[i] holds the coordinates of alpha(e_i)",
    "rationals": "p/q strings",
    "wedge_basis": "lexicographic index tuples i1 < ... < in",
    "tensor_basis": "m_a * n_b at position a * dim N + b",
    "d2": "d2(x ^ y) = [x, y]",
}


class InputError(Exception):
    """Input that cannot be processed; exit code 2."""


def max_dim() -> int:
    raw = os.environ.get("HOMLIE_MAX_DIM", "8")
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"HOMLIE_MAX_DIM must be an integer, got {raw!r}") from None


def _read_algebra(path) -> HomLieAlgebra:
    doc = load_json(path)
    # dumped corpus failures wrap the algebra
    if isinstance(doc, dict) and "algebra" in doc and "dim" not in doc:
        doc = doc["algebra"]
    return algebra_from_json(doc)


def _load_checked(path) -> HomLieAlgebra:
    L = _read_algebra(path)
    if L.dim > max_dim():
        raise InputError(f"dimension {L.dim} exceeds HOMLIE_MAX_DIM={max_dim()}")
    rep = validate(L)
    if not rep.valid:
        raise _Invalid(_violations(L, rep))
    return L


class _Invalid(Exception):
    def __init__(self, violations):
        super().__init__("not a Hom-Lie algebra")
        self.violations = violations


def _violations(L, rep) -> list:
    names = L.basis_names
    out = []
    for kind, items in (("skew", rep.skew), ("hom_jacobi", rep.jacobi),
                        ("multiplicativity", rep.multiplicativity)):
        for idx in items:
            out.append(f"{kind}: ({', '.join(names[i] for i in idx)})")
    return out


# ---------------------------------------------------------------------------
# output


def _text(obj, indent=0) -> list:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(obj)}")
    return lines


def _flat(v) -> bool:
    if isinstance(v, dict):
        return not v
    return all(not isinstance(x, (dict, list)) or (isinstance(x, list) and _flat(x)) for x in v)


def _scalar(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{}"
    return str(v)


def emit(doc, fmt: str, out=None):
    out = out or sys.stdout
    if fmt == "text":
        out.write("\n".join(_text(doc)) + "\n")
    else:
        out.write(dumps(doc) + "\n")


# ---------------------------------------------------------------------------
# commands; each returns (document, exit code)


def cmd_validate(args):
    L = _read_algebra(args.path)
    rep = validate(L)
    doc = rep.to_json()
    doc["dim"] = L.dim
    doc["violations"] = _violations(L, rep)
    return doc, EXIT_OK if rep.valid else EXIT_FAIL


def report_document(L: HomLieAlgebra) -> dict:
    from .capability import is_capable
    from .corpus import instance_checks
    from .homology import homology
    from .tensorext import exterior_product, gamma, tensor_square

    t = tensor_square(L)
    e = exterior_product(t)
    h = homology(L, up_to=3)
    cap = is_capable(L, t, e)
    ker = e.lam.kernel.dim
    doc = {
        "dim": L.dim,
        "Z": L.center.dim,
        "Z_alpha": L.alpha_center.dim,
        "derived": L.derived.dim,
        "abelianization": L.dim - L.derived.dim,
        "H1": h.dims[1],
        "H2": h.dims[2],
        "H3": h.dims[3],
        "J2": t.lam.kernel.dim,
        "Gamma": gamma(abelianization(L)[0]).dim,
        "Z_star": cap.z_star.dim,
        "Z_wedge": cap.z_wedge.dim,
        "capable": cap.capable,
        "hopf_oracle": {"H2": h.dims[2], "ker_lambda": ker, "agree": h.dims[2] == ker},
        "alpha": {"surjective": L.alpha_surjective, "zero": L.alpha_is_zero,
                  "identity": L.alpha_is_identity, "nilpotent": L.alpha_nilpotent},
        "perfect": L.is_perfect,
        "abelian": L.is_abelian,
        "conventions": CONVENTIONS,
        "checks": dict(sorted(instance_checks(L, witness=True).items())),
    }
    if L.name:
        doc["name"] = L.name
    return doc


def cmd_report(args):
    L = _load_checked(args.path)
    doc = report_document(L)
    ok = doc["hopf_oracle"]["agree"] and all(doc["checks"].values())
    return doc, EXIT_OK if ok else EXIT_FAIL


def cmd_center(args):
    from .capability import exterior_center, tensor_center

    L = _load_checked(args.path)
    doc = {}
    for key, S in (("center", L.center), ("alpha_center", L.alpha_center), ("derived", L.derived),
                   ("tensor_center", tensor_center(L)), ("exterior_center", exterior_center(L))):
        doc[key] = {"dim": S.dim, "basis": S.to_json()}
    return doc, EXIT_OK


def cmd_tensor(args):
    from .tensorext import tensor_square

    t = tensor_square(_load_checked(args.path))
    return t.to_json(), EXIT_OK if t.ok else EXIT_FAIL


def cmd_exterior(args):
    from .tensorext import exterior_square

    e = exterior_square(_load_checked(args.path))
    return e.to_json(), EXIT_OK if e.ok else EXIT_FAIL


def cmd_gamma(args):
    from .tensorext import gamma, psi_gamma_map

    L = _load_checked(args.path)
    Lab, _ = abelianization(L)
    G = gamma(Lab)
    F = L.field
    doc = {"dim": G.dim, "source_dim": Lab.dim, "basis": G.labels,
           "alpha": matrix_to_json(F, G.alpha_gamma)}
    code = EXIT_OK
    if L.alpha_surjective:
        psi = psi_gamma_map(L)
        doc["psi"] = {"certificates": dict(sorted(psi.certificates.items())),
                      "matrix": matrix_to_json(F, psi.morphism.matrix)}
        code = EXIT_OK if psi.ok else EXIT_FAIL
    return doc, code


def cmd_homology(args):
    from .homology import chain_complex, complex_defects, homology

    L = _load_checked(args.path)
    if args.n < 1:
        raise InputError("--n must be at least 1")
    cx = chain_complex(L, max_degree=args.n)
    doc = homology(L, up_to=args.n, complex_=cx).to_json(witnesses=args.witness)
    defects = complex_defects(cx)
    doc["complex_defects"] = defects
    return doc, EXIT_FAIL if defects else EXIT_OK


def cmd_multiplier(args):
    from .homology import OracleMismatch, multiplier

    L = _load_checked(args.path)
    try:
        m = multiplier(L)
    except OracleMismatch as exc:
        return {"error": str(exc)}, EXIT_FAIL
    return {
        "dim": m.dim,
        "homology_dim": m.homology_dim,
        "exterior_kernel_dim": m.exterior_kernel_dim,
        "exterior_dim": m.exterior_dim,
        "basis": Subspace.span(L.field, m.witness, m.exterior_dim).to_json() if m.dim else [],
    }, EXIT_OK


def cmd_capability(args):
    from .capability import is_capable

    L = _load_checked(args.path)
    try:
        rep = is_capable(L, witness=args.witness)
    except AlgebraError as exc:
        return {"error": str(exc)}, EXIT_FAIL
    doc = rep.to_json()
    doc.pop("witness", None)
    ok = rep.consistent
    if args.witness:
        doc["witness"] = rep.witness.to_json() if rep.witness is not None else None
        ok = ok and (rep.witness is None or rep.witness.ok)
    return doc, EXIT_OK if ok else EXIT_FAIL


def _ideal(L: HomLieAlgebra, spec: str) -> Subspace:
    named = {"center": lambda: L.center, "alpha_center": lambda: L.alpha_center,
             "derived": lambda: L.derived}
    if spec in named:
        return named[spec]()
    doc = load_json(spec)
    vectors = doc.get("basis") if isinstance(doc, dict) else doc
    if not isinstance(vectors, list):
        raise ParseError("ideal file must be a list of vectors or an object with a basis")
    F = L.field
    rows = [F.array(v) for v in vectors]
    if any(r.shape != (L.dim,) for r in rows):
        raise ParseError(f"ideal vectors must have length {L.dim}")
    return Subspace.span(F, np.stack(rows) if rows else F.zeros((0, L.dim)), L.dim)


def _standard_section(K: HomLieAlgebra, M: Subspace):
    """The complement-coordinate lift, if it is a morphism from K/M."""
    from .algebra import quotient

    Q, _ = quotient(K, M)
    comp = list(M.complement_indices())
    sec = K.field.eye(K.dim)[:, comp]
    if Morphism(Q, K, sec, check=False).defect() is not None:
        raise InputError("the complement of the ideal is not a subalgebra; pass --section")
    return sec


def cmd_sequence(args):
    from .homology import six_term_check
    from .tensorext import build_extension, exterior_sequence_check

    K = _load_checked(args.path)
    M = _ideal(K, args.ideal)
    section = None
    if args.section:
        doc = load_json(args.section)
        if not isinstance(doc, list):
            raise ParseError("section must list the images of the quotient basis")
        cols = [K.field.array(c) for c in doc]
        section = np.stack(cols, axis=1) if cols else K.field.zeros((K.dim, 0))
    elif args.split:
        section = _standard_section(K, M)
    try:
        ext = build_extension(K, M, section)
    except AlgebraError as exc:
        raise InputError(str(exc)) from None
    s2 = exterior_sequence_check(K, M, ext=ext)
    s6 = six_term_check(K, M, ext=ext)
    doc = {"split": section is not None, "exterior_sequence": s2.to_json(), "six_term": s6.to_json(),
           "ok": s2.ok and s6.ok}
    return doc, EXIT_OK if doc["ok"] else EXIT_FAIL


def _dims(text: str):
    sep = ".." if ".." in text else "-"
    try:
        a, b = (int(x) for x in text.split(sep))
    except ValueError:
        raise argparse.ArgumentTypeError("dims must look like A..B") from None
    return a, b


def cmd_corpus(args):
    from .corpus import MODES, CorpusSpec, run_corpus

    lo, hi = args.dims
    if hi > max_dim():
        raise InputError(f"dimension {hi} exceeds HOMLIE_MAX_DIM={max_dim()}")
    field = args.field if args.field in ("Q", "QQ", "rational") else int(args.field)
    modes = MODES if args.alpha == "all" else (args.alpha,)
    runs = []
    ok = True
    for mode in modes:
        try:
            spec = CorpusSpec(count=args.count, dims=(lo, hi), field=field, alpha_mode=mode, seed=args.seed)
            summary = run_corpus(spec, jobs=args.jobs, dump_dir=args.dump, witness=not args.no_witness)
        except ValueError as exc:
            raise InputError(str(exc)) from None
        doc = summary.to_json()
        if not args.instances:
            doc.pop("instances")
        runs.append(doc)
        ok = ok and summary.ok
    doc = runs[0] if len(runs) == 1 else {"ok": ok, "runs": runs}
    return doc, EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="homlie", description="Exact computations with Hom-Lie algebras.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    sub = p.add_subparsers(dest="command", required=True)

    def algebra_cmd(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("path", help="algebra JSON file")
        sp.set_defaults(func=func)
        return sp

    algebra_cmd("validate", cmd_validate, "check the Hom-Lie axioms")
    algebra_cmd("report", cmd_report, "full analysis of one algebra")
    algebra_cmd("center", cmd_center, "center, alpha-center, tensor and exterior centers")
    algebra_cmd("tensor", cmd_tensor, "non-abelian tensor square")
    algebra_cmd("exterior", cmd_exterior, "non-abelian exterior square")
    algebra_cmd("gamma", cmd_gamma, "quadratic functor of the abelianization")
    sp = algebra_cmd("homology", cmd_homology, "homology with trivial coefficients")
    sp.add_argument("--n", type=int, default=2, help="highest degree (default 2)")
    sp.add_argument("--witness", action="store_true", help="include cycle representatives")
    algebra_cmd("multiplier", cmd_multiplier, "Schur multiplier, computed two ways")
    sp = algebra_cmd("capability", cmd_capability, "capability and exterior center")
    sp.add_argument("--witness", action="store_true", help="construct K with K / Z_alpha(K) = L")
    sp = algebra_cmd("sequence", cmd_sequence, "exact sequences of K -> K / M")
    sp.add_argument("--ideal", default="center",
                    help="center, alpha_center, derived or a JSON file of spanning vectors")
    sp.add_argument("--split", action="store_true", help="treat the extension as split")
    sp.add_argument("--section", help="JSON list of images of the quotient basis in K")

    sp = sub.add_parser("corpus", parents=[common], help="randomized regression corpus")
    sp.add_argument("--count", type=int, default=25)
    sp.add_argument("--dims", type=_dims, default=(1, 5), help="dimension range A..B")
    sp.add_argument("--alpha", default="identity",
                    choices=("identity", "surjective", "nilpotent", "zero", "arbitrary", "all"))
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--field", default="Q", help="Q or a prime p")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--dump", help="directory for failing instances")
    sp.add_argument("--no-witness", action="store_true", help="skip witness constructions")
    sp.add_argument("--instances", action="store_true", help="list every instance in the summary")
    sp.set_defaults(func=cmd_corpus)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        doc, code = args.func(args)
    except _Invalid as exc:
        doc, code = {"error": str(exc), "violations": exc.violations}, EXIT_FAIL
    except (ParseError, InputError) as exc:
        doc, code = {"error": str(exc)}, EXIT_INPUT
    except AlgebraError as exc:
        # unsupported input such as characteristic 2 for tensor products
        doc, code = {"error": str(exc)}, EXIT_INPUT
    emit(doc, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
