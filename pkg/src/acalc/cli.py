"""Command-line front end: ``acalc SUBCOMMAND ALGEBRA ...``.

Exit status is 0 on success, 1 on domain errors (non-invertible elements,
degenerate operators, log-domain violations, ...) and 2 on parse or usage
errors. ``--format json`` prints one document with the keys ``command``,
``algebra``, ``inputs``, ``results`` and ``diagnostics``.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Optional, TextIO

import numpy as np

from .algebra import Algebra, Element, classify, format_element, norm_bound
from .construct import canonical_isomorphism, extend
from .errors import AlgebraError, NoIsomorphismError, ParseError
from .expr import FieldExpr, eval_element, parse_expr
from .functions import exp
from .linear import (ConstCoeffOperator, analyze_degenerate, fit_ivp, solve_by_factors,
                     solve_cauchy_euler, solve_cc, solve_via_product, wronskian)
from .linear.cauchy_euler import CauchyEulerProblem, characteristic_equation
from .picard import (Segment, acr_check, pde_consequence_check, picard_solve, rk4_oracle,
                     trajectory_difference)
from .specfile import SpecDocument, _base_poly, field_from_text, load_spec, operator_from_equation

DIGITS = 15


def num(x: float) -> float:
    return float(f"{float(x):.{DIGITS}g}")


def element_json(x: Element) -> dict:
    return {"coords": [num(c) for c in x.coords], "expr": format_element(x, DIGITS)}


def jsonable(v):
    if isinstance(v, Element):
        return element_json(v)
    if isinstance(v, dict):
        return {k: jsonable(u) for k, u in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(u) for u in v]
    if isinstance(v, (bool, str)) or v is None:
        return v
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return num(v)
    return str(v)


def text_value(v) -> str:
    if isinstance(v, Element):
        return format_element(v, DIGITS)
    if isinstance(v, float):
        return f"{v:.{DIGITS}g}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(text_value(u) for u in v) + "]"
    return str(v)


@dataclass
class Report:
    command: str
    algebra: Optional[str] = None
    inputs: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    diagnostics: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)

    def as_json(self) -> dict:
        results = dict(self.results)
        for name, (header, rows) in self.tables.items():
            results[name] = [dict(zip(header, row)) for row in rows]
        return {"command": self.command, "algebra": self.algebra,
                "inputs": jsonable(self.inputs), "results": jsonable(results),
                "diagnostics": list(self.diagnostics)}

    def as_text(self) -> str:
        out = [f"{self.command}" + (f" [{self.algebra}]" if self.algebra else "")]
        for k, v in self.results.items():
            if isinstance(v, dict):
                out.append(f"{k}:")
                for kk, vv in v.items():
                    out.append(f"  {kk}: {text_value(vv)}")
            elif isinstance(v, list) and v and isinstance(v[0], (dict, Element)):
                out.append(f"{k}:")
                for item in v:
                    if isinstance(item, dict):
                        out.append("  " + ", ".join(f"{a}={text_value(b)}" for a, b in item.items()))
                    else:
                        out.append(f"  {text_value(item)}")
            else:
                out.append(f"{k}: {text_value(v)}")
        for name, (header, rows) in self.tables.items():
            out.append(f"{name}:")
            cells = [[str(h) for h in header]] + [[text_value(c) for c in row] for row in rows]
            widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
            for r in cells:
                out.append("  " + "  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
        for d in self.diagnostics:
            out.append(f"note: {d}")
        return "\n".join(out)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# shared helpers


def _doc(args) -> SpecDocument:
    return load_spec(args.spec) if args.spec else SpecDocument()


def _element(A: Algebra, text: str) -> Element:
    return eval_element(text, A)


def _sample_points(A: Algebra, args, default=(0.0, 1.0, 5)) -> list:
    pts = []
    if getattr(args, "at", None):
        pts += [_element(A, s) for s in args.at]
    if getattr(args, "sample", None):
        a, b, n = args.sample
        n = int(n)
        if n < 1:
            raise UsageError("--sample needs n >= 1")
        pts += [A.scalar(t) for t in np.linspace(float(a), float(b), n)]
    if not pts and default is not None:
        a, b, n = default
        pts = [A.scalar(t) for t in np.linspace(a, b, n)]
    return pts


def _equation(doc: SpecDocument, A: Algebra, text: str):
    if text in doc.odes:
        d = doc.odes[text]
        if d.algebra != A:
            raise ParseError(f"ode {text!r} is defined over {d.algebra.name}, not {A.name}")
        return d.operator if d.operator is not None else d.problem
    return operator_from_equation(A, text)


def _operator(doc, A, text) -> ConstCoeffOperator:
    op = _equation(doc, A, text)
    if isinstance(op, CauchyEulerProblem):
        raise UsageError("equation is of Cauchy-Euler form; use the cauchy-euler command")
    return op


def _field(doc: SpecDocument, A: Algebra, text: str) -> FieldExpr:
    if text in doc.fields:
        return doc.fields[text].field
    if "=" in text:
        return field_from_text(A, text)
    return FieldExpr.parse(A, text)


def _degeneracy(rep: Report, L: ConstCoeffOperator):
    r = analyze_degenerate(L)
    rep.results["degenerate"] = True
    rep.results["leading_kind"] = r.leading_kind.value
    rep.results["operator_is_zero_divisor"] = r.operator_is_zd
    rep.results["annihilator"] = list(r.annihilator_basis)
    if r.witness_ivp is not None:
        rep.results["witness_ivp"] = {"point": r.witness_ivp.point,
                                      "data": list(r.witness_ivp.data)}


def _basis(L: ConstCoeffOperator, method: str, roots, A: Algebra):
    if method == "extension":
        return solve_cc(L)
    if method == "product":
        return solve_via_product(L)
    if not roots:
        raise UsageError("--method factors needs --roots")
    B = solve_by_factors([_element(A, r) for r in roots])
    M = L.monic()
    if B.operator.order != M.order or any(
            not a.isclose(b, 1e-9) for a, b in zip(B.operator.coeffs, M.coeffs)):
        raise UsageError(f"roots give {B.operator}, which is not {M}")
    return B


# ---------------------------------------------------------------------------
# subcommands


def cmd_info(args, rep: Report, doc: SpecDocument, A: Algebra):
    rep.results["name"] = A.name
    rep.results["dim"] = A.dim
    rep.results["basis"] = list(A.basis_labels)
    rep.results["unity"] = A.one()
    rows = []
    for i in range(A.dim):
        for j in range(i, A.dim):
            v = A.basis(i) * A.basis(j)
            rows.append((A.basis_labels[i], A.basis_labels[j], v))
    rep.tables["products"] = (("left", "right", "value"), rows)
    rep.results["norm_bound"] = norm_bound(A)
    try:
        psi = canonical_isomorphism(A)
        rep.results["splitting"] = {"target": psi.target.name,
                                    "matrix": [[num(c) for c in r] for r in psi.matrix]}
    except NoIsomorphismError:
        rep.diagnostics.append("no canonical splitting into copies of R and C")


def cmd_classify(args, rep, doc, A):
    x = _element(A, args.expr)
    rep.inputs["expr"] = args.expr
    c = classify(x, tol=args.tol)
    rep.results["value"] = x
    rep.results["kind"] = c.kind.value
    if c.inverse is not None:
        rep.results["inverse"] = c.inverse
    if c.annihilator_basis is not None:
        rep.results["annihilator"] = list(c.annihilator_basis)


def cmd_eval(args, rep, doc, A):
    rep.inputs["expr"] = args.expr
    rep.results["value"] = _element(A, args.expr)


def _solve_common(args, rep, doc, A):
    L = _operator(doc, A, args.equation)
    rep.inputs["equation"] = args.equation
    rep.results["operator"] = str(L)
    if L.is_degenerate:
        _degeneracy(rep, L)
        raise AlgebraError("degenerate operator: leading coefficient "
                           f"{format_element(L.leading)} is not a unit")
    B = _basis(L, args.method, args.roots, A)
    rep.results["provenance"] = B.provenance.value
    if B.extension is not None:
        rep.results["extension"] = {"modulus": str(B.extension.modulus),
                                    "carrier": B.extension.carrier.name,
                                    "carrier_basis": list(B.extension.carrier.basis_labels)}
    return L, B


def cmd_solve(args, rep, doc, A):
    L, B = _solve_common(args, rep, doc, A)
    W, c = wronskian(B, A.zero())
    rep.results["wronskian_at_0"] = W
    rep.results["wronskian_kind"] = c.kind.value
    pts = _sample_points(A, args)
    rows, worst = [], 0.0
    for z in pts:
        rows.append([z] + list(B.evaluate(z)))
        worst = max(worst, B.residual(z))
    header = ("zeta",) + tuple(f"f{i + 1}" for i in range(B.size))
    rep.tables["samples"] = (header, rows)
    rep.results["max_residual"] = worst


def cmd_ivp(args, rep, doc, A):
    L, B = _solve_common(args, rep, doc, A)
    z0 = _element(A, args.at0)
    data = [_element(A, d) for d in args.data]
    rep.inputs.update({"at": z0, "data": data})
    coeffs = fit_ivp(B, z0, data)
    rep.results["coefficients"] = list(coeffs)
    sol = B.combine(coeffs)
    rep.results["check"] = [sol(z0, j) for j in range(L.order)]
    pts = _sample_points(A, args)
    rep.tables["samples"] = (("zeta", "w"), [[z, sol(z)] for z in pts])


def cmd_cauchy_euler(args, rep, doc, A):
    P = _equation(doc, A, args.equation)
    if isinstance(P, ConstCoeffOperator):
        raise UsageError("equation has constant coefficients; use the solve command")
    rep.inputs["equation"] = args.equation
    rep.results["transformed"] = str(P.transformed)
    rep.results["characteristic"] = str(characteristic_equation(P))
    S = solve_cauchy_euler(P)
    rep.results["fast_path"] = S.fast_path
    if S.fast_path:
        rep.results["exponents"] = list(S.exponents)
    rep.results["domains"] = list(S.domains)
    pts = _sample_points(A, args, default=(0.5, 2.0, 4))
    header = ("z",) + tuple(f"w{i + 1}" for i in range(S.size))
    rep.tables["samples"] = (header, [[z] + list(S.evaluate(z)) for z in pts])


def cmd_picard(args, rep, doc, A):
    f = _field(doc, A, args.field)
    start = _element(A, args.start)
    end = _element(A, args.to)
    w0 = [_element(A, s) for s in args.w0]
    if len(w0) != f.size:
        raise UsageError(f"field has {f.size} components but {len(w0)} initial values given")
    seg = Segment(start, end, args.panels)
    rep.inputs.update({"field": list(f.source), "from": start, "to": end, "w0": w0,
                       "panels": args.panels, "tol": args.tol, "max_iter": args.max_iter})
    res = picard_solve(f, seg, w0, tol=args.tol, max_iter=args.max_iter)
    rk = rk4_oracle(f, seg, w0, args.rk4_steps)
    rep.results["converged"] = res.converged
    rep.results["iterations"] = res.iterations
    rep.results["final_delta"] = res.final_delta
    rep.results["residual"] = res.residual
    rep.results["end"] = res.trajectory.end_state
    rep.results["rk4_end"] = rk.end_state
    rep.results["rk4_gap"] = trajectory_difference(res.trajectory, rk)
    if not res.converged:
        rep.diagnostics.append(f"Picard iteration did not converge in {res.iterations} sweeps "
                               f"(last change {res.final_delta:.3g})")
    n = max(2, args.rows)
    idx = np.unique(np.linspace(0, len(res.trajectory) - 1, n).round().astype(int))
    header = ("t", "zeta") + tuple(f.variables)
    rows = [[float(res.trajectory.t[i]), res.trajectory.point(i)] + res.trajectory.state(i)
            for i in idx]
    rep.tables["samples"] = (header, rows)


def _relation(A: Algebra, items) -> dict:
    rel = {}
    for it in items:
        if "=" not in it:
            raise UsageError(f"relation term {it!r} must look like LABEL,LABEL=COEFF")
        word, coeff = it.split("=", 1)
        idx = []
        for w in word.split(","):
            w = w.strip()
            if w in A.basis_labels:
                idx.append(A.basis_labels.index(w))
            elif w.isdigit() and int(w) < A.dim:
                idx.append(int(w))
            else:
                raise ParseError(f"unknown basis label {w!r} in relation")
        rel[tuple(idx)] = float(coeff)
    return rel


def cmd_verify(args, rep, doc, A):
    node = parse_expr(args.function)
    from .expr import algebra_env, check_names, evaluate
    env = algebra_env(A)
    check_names(node, set(env) | {"z"})

    def f(z):
        e = dict(env)
        e["z"] = z
        v = evaluate(node, e, A)
        return v if isinstance(v, Element) else A.scalar(float(v))

    p = _element(A, args.at0)
    rep.inputs.update({"function": args.function, "at": p, "h": args.h})
    r = acr_check(f, p, h=args.h)
    rep.results["derivative"] = r.derivative
    rep.results["cr_residuals"] = list(r.residuals)
    rep.results["cr_relative"] = r.relative
    rep.results["cr_flagged"] = r.flagged
    if r.flagged:
        rep.diagnostics.append("function fails the algebra Cauchy-Riemann equations at this point")
    if args.relation:
        rel = _relation(A, args.relation)
        rep.inputs["relation"] = {",".join(A.basis_labels[i] for i in k): v for k, v in rel.items()}
        rep.results["pde_residual"] = pde_consequence_check(f, p, rel, h=args.pde_h)


def cmd_special(args, rep, doc, A):
    p = _base_poly(A, args.poly, 0)
    E = extend(A, p)
    rep.inputs.update({"poly": args.poly, "order": args.order})
    rep.results["modulus"] = str(E.modulus)
    rep.results["carrier"] = E.carrier.name
    rep.results["carrier_basis"] = list(E.carrier.basis_labels)
    k = E.k
    pts = _sample_points(A, args, default=None) or [A.zero()]
    rows = []
    for z in pts:
        val = (k ** args.order) * exp(k * E.embed(z))
        rows.append([z] + E.components(val))
    header = ("zeta",) + tuple(f"f{i + 1}" for i in range(E.module_rank))
    rep.tables["components"] = (header, rows)


COMMANDS = {
    "info": cmd_info,
    "classify": cmd_classify,
    "eval": cmd_eval,
    "solve": cmd_solve,
    "ivp": cmd_ivp,
    "cauchy-euler": cmd_cauchy_euler,
    "picard": cmd_picard,
    "verify": cmd_verify,
    "special-functions": cmd_special,
}


def build_parser() -> argparse.ArgumentParser:
    def common_options(defaults: bool) -> argparse.ArgumentParser:
        # subcommand copies must not overwrite values given before the subcommand
        p = _Parser(add_help=False)
        p.add_argument("--spec", metavar="FILE", help="specification file to load",
                       default=None if defaults else argparse.SUPPRESS)
        p.add_argument("--format", choices=("text", "json"),
                       default="text" if defaults else argparse.SUPPRESS)
        return p

    common = common_options(False)
    parser = _Parser(prog="acalc", description="Calculus over commutative real algebras.",
                     parents=[common_options(True)])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_):
        p = sub.add_parser(name, help=help_, parents=[common])
        p.add_argument("algebra", help="algebra name (builtin or from --spec)")
        return p

    def sample(p):
        p.add_argument("--sample", nargs=3, metavar=("A", "B", "N"),
                       help="N real sample points from A to B")
        p.add_argument("--at", action="append", metavar="Z", help="sample point (repeatable)")

    add("info", "describe an algebra")
    p = add("classify", "zero, unit or zero divisor")
    p.add_argument("expr")
    p.add_argument("--tol", type=float, default=1e-10)
    p = add("eval", "evaluate an expression")
    p.add_argument("expr")
    for name, help_ in (("solve", "fundamental solution set"),
                        ("ivp", "initial value problem")):
        p = add(name, help_)
        p.add_argument("equation", help="ode name from --spec or an equation like \"w''+w=0\"")
        p.add_argument("--method", choices=("extension", "product", "factors"),
                       default="extension")
        p.add_argument("--roots", nargs="+", metavar="ALPHA")
        sample(p)
        if name == "ivp":
            p.add_argument("--from", dest="at0", default="0", metavar="Z0")
            p.add_argument("--data", nargs="+", required=True, metavar="C")
    p = add("cauchy-euler", "Cauchy-Euler equation via z = exp(zeta)")
    p.add_argument("equation")
    sample(p)
    p = add("picard", "Picard iteration with an RK4 cross-check")
    p.add_argument("field", help="field name from --spec or \"w' = expr\"")
    p.add_argument("--w0", nargs="+", required=True)
    p.add_argument("--from", dest="start", default="0")
    p.add_argument("--to", required=True)
    p.add_argument("--panels", type=int, default=256)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=60)
    p.add_argument("--rk4-steps", type=int, default=512)
    p.add_argument("--rows", type=int, default=5, help="trajectory rows to print")
    p = add("verify", "Cauchy-Riemann and PDE checks by finite differences")
    p.add_argument("function", help="expression in z")
    p.add_argument("--at", dest="at0", default="0")
    p.add_argument("--h", type=float, default=1e-4)
    p.add_argument("--pde-h", type=float, default=1e-3)
    p.add_argument("--relation", nargs="+", metavar="WORD=B",
                   help="terms like 1,1=1 j,j=-1")
    p = add("special-functions", "components of k^j exp(k zeta) in ALG[x]/<p>")
    p.add_argument("poly", help="monic polynomial in x over the algebra")
    p.add_argument("--order", type=int, default=0)
    sample(p)
    return parser


def _inputs(args) -> dict:
    skip = {"command", "format", "algebra"}
    return {k: v for k, v in vars(args).items() if k not in skip and v is not None}


def run_command(argv, stdout: Optional[TextIO] = None) -> int:
    out = stdout if stdout is not None else sys.stdout
    fmt = "json" if "--format=json" in argv or (
        "--format" in argv and argv.index("--format") + 1 < len(argv)
        and argv[argv.index("--format") + 1] == "json") else "text"
    rep = Report(command=argv[0] if argv else "")
    status = 0
    try:
        try:
            args = build_parser().parse_args(argv)
        except SystemExit as e:  # --help
            return int(e.code or 0)
        rep.command = args.command
        rep.algebra = args.algebra
        rep.inputs = _inputs(args)
        doc = _doc(args)
        rep.diagnostics.extend(doc.diagnostics)
        A = doc.algebra(args.algebra)
        COMMANDS[args.command](args, rep, doc, A)
    except (ParseError, UsageError) as e:
        rep.diagnostics.append(f"error: {e}")
        status = 2
    except AlgebraError as e:
        rep.diagnostics.append(f"error: {e}")
        status = 1
    except (ValueError, OSError) as e:
        rep.diagnostics.append(f"error: {e}")
        status = 2
    if fmt == "json":
        out.write(json.dumps(rep.as_json(), indent=2) + "\n")
    else:
        out.write(rep.as_text() + "\n")
    return status


def main(argv=None):
    sys.exit(run_command(sys.argv[1:] if argv is None else list(argv)))


if __name__ == "__main__":
    main()
