"""Command line front end: ``tensoreig <command> ...``.

Exit status is 0 on success, 2 when the result is degenerate or
near-degenerate (infinite line families, multiple roots, critical targets,
degenerate stationary points) and 1 on errors.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import cubic3, io
from .eigen.degree import CriticalTarget, DegreeMismatch, LeadingFormVanishes, brouwer_degree, global_degree
from .eigen.lines import EigenLine, bezout_count, search_eigenlines
from .odeflow import infinity_spectrum, ray_solution, unbounded_certificate
from .tensor_core import Form, HomogeneousMap, gradient_map, potential
from .upoly import parse_poly, real_roots

OK, FAILED, DEGENERATE = 0, 1, 2


@dataclass
class RunConfig:
    command: str
    args: dict = field(default_factory=dict)
    input: str | None = None
    seed: int = 0
    restarts: int | None = None
    tol: float | None = None
    format: str = "text"
    field: str | None = None

    def __post_init__(self):
        if self.tol is not None and not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if self.format == "structured":
            self.format = "json"
        if self.format not in ("text", "json"):
            raise ValueError("format must be 'text', 'json' or 'structured'")


def _load(path: str):
    text = sys.stdin.read() if path == "-" else Path(path).read_text()
    return io.parse_input(text)


def _as_map(obj) -> HomogeneousMap:
    return gradient_map(obj) if isinstance(obj, Form) else obj


def _line(line: EigenLine) -> dict:
    return {"rep": line.rep, "eigenvalue": line.eigenvalue, "lambda_class": line.lambda_class,
            "normalized": line.normalized, "real": line.is_real, "simple": line.simple,
            "residual": line.residual}


def _num(x, exact: bool):
    return x if exact else float(x)


def _roots(rep, exact: bool) -> dict:
    return {"count": rep.count, "multiple": rep.multiple,
            "intervals": [[_num(a, exact), _num(b, exact)] for a, b in rep.intervals],
            "roots": rep.refined}


# -- commands -------------------------------------------------------------

def _count(cfg: RunConfig):
    n, m = cfg.args["n"], cfg.args["m"]
    c = bezout_count(n, m)
    return OK, {"n": n, "m": m, "count": c}, f"{c}\n"


def _solve(cfg: RunConfig):
    Q = _as_map(_load(cfg.input))
    field = cfg.field or ("real" if Q.is_real else "complex")
    if field == "real" and not Q.is_real:
        raise ValueError("real eigenlines requested for a complex map")
    search = search_eigenlines(Q, seed=cfg.seed, restarts=cfg.restarts, tol=cfg.tol)
    lines = search.real_lines() if field == "real" else search.lines
    if not search.complete and not search.possibly_infinite:
        raise RuntimeError(f"eigenline search found {len(search.lines)} of {search.expected} lines")
    degenerate = search.possibly_infinite or not search.all_simple
    report = {"n": Q.n, "m": Q.m, "field": field, "bezout_count": search.expected,
              "complex_line_count": len(search.lines), "possibly_infinite": search.possibly_infinite,
              "line_count": len(lines), "lines": [_line(l) for l in lines]}
    text = [f"bezout count: {search.expected}", f"complex lines found: {len(search.lines)}",
            f"{field} lines: {len(lines)}"]
    if search.possibly_infinite:
        text.append("warning: the eigenlines appear to form an infinite family")
    for l in lines:
        text.append(f"  {io.format_number(l.eigenvalue):>22}  {l.lambda_class:<11} "
                    + " ".join(io.format_number(v) for v in l.rep) + ("" if l.simple else "  (multiple)"))
    return (DEGENERATE if degenerate else OK), report, "\n".join(text) + "\n"


def cubic_report(rep: cubic3.CubicReport) -> dict:
    f = rep.form
    cls = rep.classification
    out = {
        "canonical": {"alpha2": f.alpha2, "alpha3": f.alpha3, "beta2": f.beta2, "beta3": f.beta3,
                      "basis": f.basis, "scale": f.scale, "exact": f.exact},
        "classification": {"tag": cls.tag, "subcase": cls.subcase, "expected_lines": cls.expected_lines,
                           "infinite": cls.infinite, "mirrored": cls.mirrored,
                           "near_degenerate": cls.near_degenerate},
        "rho": None if rep.rho is None else [_num(c, f.exact) for c in rep.rho.coeffs],
        "rho_roots": None if rep.roots is None else _roots(rep.roots, f.exact),
        "quadric": None if rep.quadric is None else io.serialize(rep.quadric)["form"]["terms"],
        "quartic_real_roots": rep.quartic_real_roots,
        "real_line_count": rep.real_line_count,
        "eigenlines": [_line(l) for l in rep.eigenlines],
        "critical_profile": [{"point": p.point, "type": p.stationary_type, "index": p.index, "value": p.value}
                             for p in rep.critical_profile],
        "maxima_count": rep.maxima_count, "minima_count": rep.minima_count, "saddle_count": rep.saddle_count,
        "ph_check": None if rep.ph_check is None else {"index_sum": rep.ph_check.index_sum,
                                                        "expected": rep.ph_check.expected,
                                                        "pass": rep.ph_check.passed},
    }
    return out


def _cubic3(cfg: RunConfig):
    obj = _load(cfg.input)
    if isinstance(obj, HomogeneousMap):
        obj = cubic3.CubicCanonicalForm.from_map(obj) if _is_canonical(obj) else potential(obj)
    rep = cubic3.analyze(obj, seed=cfg.seed, tol=cfg.tol or 1e-9)
    cls = rep.classification
    tag = cls.tag + (f"/{cls.subcase}" if cls.subcase else "")
    text = [f"classification: {tag}" + (" (near-degenerate)" if cls.near_degenerate else ""),
            "canonical parameters: " + ", ".join(f"{k}={io.format_number(v)}" for k, v in
                                                zip(("alpha2", "alpha3", "beta2", "beta3"), rep.form.params))]
    if rep.rho is not None:
        text.append(f"rho: {rep.rho if rep.form.exact else rep.rho.to_numpy()[::-1].tolist()}")
        text.append(f"real roots of rho: {rep.roots.count}")
    if rep.quadric is not None:
        text.append("infinite family on the quadric " + _quadric_text(rep.quadric) + " = 0")
    text.append(f"real_line_count: {'infinite' if rep.real_line_count is None else rep.real_line_count}")
    for l in rep.eigenlines:
        text.append("  " + " ".join(io.format_number(v) for v in l.rep))
    text.append(f"maxima_count: {rep.maxima_count}")
    text.append(f"minima_count: {rep.minima_count}")
    text.append(f"saddle_count: {rep.saddle_count}")
    if rep.ph_check is not None:
        text.append(f"index sum: {rep.ph_check.index_sum} (expected {rep.ph_check.expected})")
    return (DEGENERATE if rep.degenerate else OK), cubic_report(rep), "\n".join(text) + "\n"


def _is_canonical(Q: HomogeneousMap) -> bool:
    try:
        cubic3.CubicCanonicalForm.from_map(Q)
        return True
    except ValueError:
        return False


def _quadric_text(q: Form) -> str:
    parts = []
    for e, c in q.terms.items():
        mono = "*".join(f"x{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
        parts.append(f"{io.format_number(c)}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


def _sturm(cfg: RunConfig):
    p = parse_poly(cfg.args["poly"])
    kw = {}
    if cfg.args.get("range"):
        kw["range"] = tuple(Fraction(v) for v in cfg.args["range"])
    if cfg.args.get("width"):
        kw["width"] = Fraction(cfg.args["width"])
    rep = real_roots(p, **kw)
    report = {"polynomial": str(p), **_roots(rep, True), "gcd": str(rep.gcd)}
    text = [f"count {rep.count}"]
    for (a, b), r in zip(rep.intervals, rep.refined):
        text.append(f"  [{a}, {b}]  ~ {io.format_number(r)}")
    if rep.multiple:
        text.append(f"multiple roots: gcd(p, p') = {rep.gcd}")
    return (DEGENERATE if rep.multiple else OK), report, "\n".join(text) + "\n"


def _degree(cfg: RunConfig):
    P = _as_map(_load(cfg.input))
    try:
        if cfg.args.get("global_") or not cfg.args.get("target"):
            rep = global_degree(P, samples=cfg.args.get("samples") or 3, seed=cfg.seed, restarts=cfg.restarts)
            report = {"mode": "global", "degree": rep.degree, "samples": rep.samples,
                      "solutions_per_sample": rep.solutions_per_sample}
        else:
            y = [float(Fraction(v)) for v in cfg.args["target"]]
            rep = brouwer_degree(P, y, seed=cfg.seed, restarts=cfg.restarts)
            report = {"mode": "target", "target": y, "degree": rep.degree, "radius": rep.radius,
                      "solutions": rep.solutions, "signs": rep.signs}
    except (LeadingFormVanishes, CriticalTarget, DegreeMismatch) as exc:
        return DEGENERATE, {"degenerate": type(exc).__name__, "message": str(exc)}, f"degenerate: {exc}\n"
    return OK, report, f"degree {rep.degree}\n"


def _ray(cfg: RunConfig):
    Q = _as_map(_load(cfg.input))
    c = [Fraction(v) for v in cfg.args["line"]]
    y0 = Fraction(cfg.args.get("y0") or "1")
    ray = ray_solution(Q, c, y0)
    report = {"c": ray.c, "alpha": ray.alpha, "m": ray.m, "y0": ray.y0, "blow_up_time": ray.blow_up_time,
              "closed_form": f"phi(t) = y0*(1 - alpha*{ray.m - 1}*y0^{ray.m - 1}*t)^(-1/{ray.m - 1})"}
    T = "none" if ray.blow_up_time is None else io.format_number(ray.blow_up_time)
    text = f"alpha {io.format_number(ray.alpha)}\nblow-up time {T}\n"
    return OK, report, text


def _infinity(cfg: RunConfig):
    P = _as_map(_load(cfg.input))
    if cfg.args.get("line"):
        lines = [np.array([float(Fraction(v)) for v in cfg.args["line"]])]
        cert = None
    else:
        cert = unbounded_certificate(P, seed=cfg.seed)
        lines = cert.real_lines
    points = []
    text = []
    for l in lines:
        ip = infinity_spectrum(P, l)
        points.append({"direction": ip.direction, "alpha": ip.alpha, "spectrum": ip.spectrum})
        text.append(" ".join(io.format_number(v) for v in ip.direction) + "  spectrum "
                    + " ".join(io.format_number(v) for v in ip.spectrum))
    report = {"points": points}
    if cert is not None:
        report["certificate"] = None if not cert.found else {"c": cert.c, "alpha": cert.alpha}
        report["all_nilpotent"] = cert.all_nilpotent
        text.append("unbounded solution certified along " + " ".join(io.format_number(v) for v in cert.c)
                    if cert.found else "no unbounded-solution certificate")
    return OK, report, "\n".join(text) + "\n"


COMMANDS = {"count": _count, "solve": _solve, "cubic3": _cubic3, "sturm": _sturm, "degree": _degree,
            "ode ray": _ray, "ode infinity": _infinity}


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute one command; returns (exit code, rendered output)."""
    try:
        code, report, text = COMMANDS[cfg.command](cfg)
    except Exception as exc:  # reported, not raised: the CLI maps it to exit 1
        report = {"command": cfg.command, "error": type(exc).__name__, "message": str(exc)}
        if cfg.format == "json":
            return FAILED, io.dumps(report)
        return FAILED, f"error: {type(exc).__name__}: {exc}\n"
    if cfg.format == "json":
        return code, io.dumps({"command": cfg.command, "exit_code": code, **report})
    return code, text


class _Parser(argparse.ArgumentParser):
    # usage errors exit with 1; status 2 is reserved for degenerate results
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(FAILED, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--restarts", type=int)
    common.add_argument("--tol", type=float)
    common.add_argument("--format", choices=("text", "json", "structured"), default="text")
    common.add_argument("--field", choices=("real", "complex"))

    parser = _Parser(prog="tensoreig", description="Eigenlines of homogeneous polynomial maps.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("count", parents=[common], help="Bezout count of eigenlines")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)
    p = sub.add_parser("solve", parents=[common], help="enumerate eigenlines of a map or gradient of a form")
    p.add_argument("file")
    p = sub.add_parser("cubic3", parents=[common], help="analyze a harmonic cubic on R^3")
    p.add_argument("file")
    p = sub.add_parser("sturm", parents=[common], help="real roots of a univariate polynomial")
    p.add_argument("poly")
    p.add_argument("--range", nargs=2, metavar=("A", "B"))
    p.add_argument("--width")
    p = sub.add_parser("degree", parents=[common], help="Brouwer degree")
    p.add_argument("file")
    p.add_argument("--target", nargs="+")
    p.add_argument("--global", dest="global_", action="store_true")
    p.add_argument("--samples", type=int)
    ode = sub.add_parser("ode", help="ray solutions and stationary points at infinity")
    osub = ode.add_subparsers(dest="ode_command", required=True)
    p = osub.add_parser("ray", parents=[common])
    p.add_argument("file")
    p.add_argument("--line", nargs="+", required=True)
    p.add_argument("--y0")
    p = osub.add_parser("infinity", parents=[common])
    p.add_argument("file")
    p.add_argument("--line", nargs="+")
    return parser


def _protect_negative_poly(argv: list[str]) -> list[str]:
    # "-1*t^3+..." would otherwise be taken for an option
    out = list(argv)
    if out and out[0] == "sturm":
        for i, tok in enumerate(out[1:], 1):
            if out[i - 1] in ("--range", "--width", "--seed", "--restarts", "--tol", "--format", "--field"):
                continue
            if len(tok) > 1 and tok[0] == "-" and (tok[1].isdigit() or tok[1] in "t.(["):
                out[i] = " " + tok
                break
    return out


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    ns = vars(build_parser().parse_args(_protect_negative_poly(argv)))
    command = ns.pop("command")
    if command == "ode":
        command = f"ode {ns.pop('ode_command')}"
    try:
        cfg = RunConfig(command, input=ns.pop("file", None), seed=ns.pop("seed"), restarts=ns.pop("restarts"),
                        tol=ns.pop("tol"), format=ns.pop("format"), field=ns.pop("field"), args=ns)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAILED
    code, out = run(cfg)
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
