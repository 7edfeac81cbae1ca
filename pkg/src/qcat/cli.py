"""``qcat`` command line: every model, metric and diagnostic as JSON (or CSV).

Output documents carry ``schema_version``, ``command``, ``params``,
``payload`` and ``tolerances``. Numbers are printed at 12 significant digits
so identical inputs give byte-identical output. Exit codes: 0 success,
2 domain or usage error, 3 internal invariant breach.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass

import numpy as np

from . import diagnostics, metric, model, observables
from .errors import DomainError, QcatError
from .polyring import DEFAULT_TOL

SCHEMA = "qcat/1"
DIGITS = 12


@dataclass(frozen=True)
class Tolerances:
    division: float = DEFAULT_TOL
    reality: float = diagnostics.REALITY_TOL
    nullspace: float = observables.NULL_TOL
    layer_band: float = diagnostics.LAYER_BAND

    @classmethod
    def resolve(cls, tol: float | None) -> "Tolerances":
        if tol is None and os.environ.get("QCAT_TOL"):
            try:
                tol = float(os.environ["QCAT_TOL"])
            except ValueError as exc:
                raise DomainError(f"QCAT_TOL is not a number: {os.environ['QCAT_TOL']!r}") from exc
        if tol is None:
            return cls()
        if not (tol > 0 and math.isfinite(tol)):
            raise DomainError(f"tolerance must be positive, got {tol}")
        return cls(tol, tol, tol, tol)


def num(x):
    """Round to 12 significant digits; non-finite values become strings."""
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, complex) or np.iscomplexobj(x):
        return [num(x.real), num(x.imag)]
    x = float(x)
    if not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    y = float(f"{x:.{DIGITS}g}")
    return 0.0 if y == 0.0 else y


def fmt(x) -> str:
    x = num(x)
    return x if isinstance(x, str) else f"{x:.{DIGITS}g}"


def matrix_payload(m) -> dict:
    m = np.asarray(m)
    if np.iscomplexobj(m) and np.any(m.imag != 0):
        return {"dtype": "complex", "matrix": [[num(complex(x)) for x in row] for row in m]}
    return {"dtype": "real", "matrix": [[num(x) for x in row] for row in np.real(m)]}


def parse_matrix(payload: dict) -> np.ndarray:
    """Inverse of :func:`matrix_payload`."""
    if payload["dtype"] == "complex":
        return np.array([[complex(*x) for x in row] for row in payload["matrix"]])
    return np.array(payload["matrix"], dtype=float)


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise DomainError(f"cannot parse number list {text!r}") from exc


# -- commands ---------------------------------------------------------------


def cmd_hamiltonian(args, tols):
    if args.variant == "chain":
        h = model.build_chain(args.n, args.lam)
    elif args.variant == "qc":
        h = model.build_qc_limit(args.n)
    else:
        if args.coeffs is None:
            raise DomainError("--variant multiparam needs --coeffs A,B,...")
        h = model.build_multiparam(args.n, args.lam, _floats(args.coeffs))
    return matrix_payload(h)


def cmd_metric(args, tols):
    if args.form == "poly":
        mp = metric.metric_poly(args.n, tols.division)
        entries = [
            [[num(c) for c in mp[a, b].coeffs] or [0.0] for b in range(args.n)]
            for a in range(args.n)
        ]
        return {"form": "poly", "variable": "z = sqrt(1 - lambda)", "entries": entries}
    if args.lam is None:
        raise DomainError("--form numeric needs --lambda")
    theta = metric.metric_at(args.n, args.lam)
    w = np.linalg.eigvalsh(theta)
    out = {"form": "numeric"}
    out.update(matrix_payload(theta))
    out.update(min_eig=num(w.min()), positive_definite=bool(w.min() > 0))
    return out


def _scan_lambdas(args) -> np.ndarray:
    if args.steps < 2:
        raise DomainError("--steps must be >= 2")
    return np.linspace(args.lambda_min, args.lambda_max, args.steps)


def _scan_row_dict(row) -> dict:
    d = {
        "lambda": num(row.lam),
        "energies": None if row.energies is None else [num(complex(e)) for e in row.energies.values],
        "all_real": row.all_real,
        "near_ep": row.near_ep,
        "theta_min_eig": None if row.theta_min_eig is None else num(row.theta_min_eig),
        "theta_cond": None if row.theta_cond is None else num(row.theta_cond),
    }
    if row.error:
        d["error"] = row.error
    return d


def scan_csv(n: int, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["lambda"]
    for k in range(n):
        header += [f"e{k}_re", f"e{k}_im"]
    w.writerow(header + ["all_real", "theta_min_eig", "theta_cond", "error"])
    for r in rows:
        line = [fmt(r.lam)]
        if r.energies is None:
            line += [""] * (2 * n)
        else:
            for e in r.energies.values:
                line += [fmt(e.real), fmt(e.imag)]
        line.append("" if r.all_real is None else str(r.all_real).lower())
        line.append("" if r.theta_min_eig is None else fmt(r.theta_min_eig))
        line.append("" if r.theta_cond is None else fmt(r.theta_cond))
        line.append(r.error or "")
        w.writerow(line)
    return buf.getvalue()


def cmd_scan(args, tols):
    rows = diagnostics.spectrum_scan(args.n, _scan_lambdas(args), tols.reality, args.dps)
    return rows


def cmd_observables(args, tols):
    if (args.z is None) == (not args.z_independent):
        raise DomainError("give exactly one of --z or --z-independent")
    if args.z_independent:
        basis = observables.solve_z_independent(args.n, tol=tols.nullspace)
    else:
        if not 0.0 <= args.z < 1.0:
            raise DomainError(f"--z must lie in [0, 1), got {args.z}")
        theta = metric.metric_poly(args.n).at_z(args.z)
        basis = observables.solve_at(theta, tols.nullspace)
    out = {
        "mode": "z_independent" if args.z_independent else "fixed_z",
        "dim": basis.dim,
        "basis": [matrix_payload(b)["matrix"] for b in basis.basis],
        "real_spectrum": [observables.reality_check(b, tols.reality) for b in basis.basis],
    }
    if args.n == 3 and args.z_independent:
        out["f_pattern"] = [
            observables.f_pattern_residual(b) < tols.nullspace for b in basis.basis
        ]
    if args.n == 2 and not args.z_independent:
        out["rule_residuals"] = [num(observables.n2_rule_residual(b, args.z)) for b in basis.basis]
    return out


def cmd_ketkets(args, tols):
    kk = metric.ketkets(args.n, tols.division)
    rows = []
    for i, row in enumerate(kk.rows):
        idx = kk.energy_index(i)
        rows.append(
            {
                "ladder_index": idx,
                "energy_over_r": 2 * idx + 1 - args.n,
                "components": [[num(c) for c in p.coeffs] for p in row],
            }
        )
    return {"basis": "u^(d-m) v^m, m = 0..d", "degree": args.n - 1, "rows": rows}


def cmd_coeffmats(args, tols):
    cm = metric.coefficient_matrices(args.n)
    mats = []
    for j in range(1, args.n + 1):
        m = cm[j]
        trip = [
            [i + 1, k + 1, num(m[i, k])]
            for i in range(args.n)
            for k in range(args.n)
            if abs(m[i, k]) > 1e-12
        ]
        mats.append({"j": j, "triplets": trip})
    return {"index_base": 1, "mats": mats}


def cmd_ep_report(args, tols):
    rep = diagnostics.ep_collapse_report(args.n, _floats(args.lambdas), args.dps)
    return {
        "rows": [{k: num(v) for k, v in asdict(r).items()} for r in rep.rows],
        "spread_decreasing": rep.spread_decreasing,
        "cosine_increasing": rep.cosine_increasing,
        "theta_decreasing": rep.theta_decreasing,
    }


def cmd_domain(args, tols):
    coeffs = [c for c in (args.A, args.B, args.C, args.D) if c is not None]
    spec = diagnostics.layer_spec(args.n, args.mu, args.nu)
    lo, hi = spec.bounds
    out = {
        "combo": [num(c) for c in spec.combo],
        "value": num(diagnostics.layer_value(spec, coeffs)),
        "bounds": [num(lo), num(hi)],
        "classification": diagnostics.layer_check(spec, coeffs, tols.layer_band),
    }
    if args.cross_validate:
        if args.n != 4:
            raise DomainError("cross-validation is implemented for N = 4 only")
        rng = np.random.default_rng(args.seed)
        pts = rng.uniform(-args.range, args.range, size=(args.samples, 2))
        rep = diagnostics.layer_cross_validate(pts, args.lambda_small, tol=tols.reality)
        out["cross_validation"] = {
            "lambda": num(rep.lam),
            "margin": num(rep.margin),
            "checked": rep.checked,
            "disagreements": [
                {"coeffs": [num(c) for c in s.coeffs], "layer": s.layer, "all_real": s.all_real}
                for s in rep.disagreements
            ],
        }
    return out


COMMANDS = {
    "hamiltonian": cmd_hamiltonian,
    "metric": cmd_metric,
    "scan": cmd_scan,
    "observables": cmd_observables,
    "ketkets": cmd_ketkets,
    "coeffmats": cmd_coeffmats,
    "ep-report": cmd_ep_report,
    "domain": cmd_domain,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="override every tolerance")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--n", type=int, required=True, help="matrix dimension N")

    p = _Parser(prog="qcat", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("hamiltonian", parents=[common], help="dense Hamiltonian matrix")
    s.add_argument("--lambda", dest="lam", type=float, default=0.0)
    s.add_argument("--variant", choices=["chain", "qc", "multiparam"], default="chain")
    s.add_argument("--coeffs", default=None, help="comma list A,B,... (innermost first)")

    s = sub.add_parser("metric", parents=[common], help="metric as z-polynomial or matrix")
    s.add_argument("--lambda", dest="lam", type=float, default=None)
    s.add_argument("--form", choices=["poly", "numeric"], default="poly")

    s = sub.add_parser("scan", parents=[common], help="spectral reality scan over lambda")
    s.add_argument("--lambda-min", type=float, required=True)
    s.add_argument("--lambda-max", type=float, required=True)
    s.add_argument("--steps", type=int, required=True)
    s.add_argument("--format", choices=["json", "csv"], default="json")
    s.add_argument("--dps", type=int, default=diagnostics.SCAN_DPS)

    s = sub.add_parser("observables", parents=[common], help="admissible observables")
    s.add_argument("--z", type=float, default=None)
    s.add_argument("--z-independent", action="store_true")

    sub.add_parser("ketkets", parents=[common], help="left eigenvectors as (u, v) polynomials")
    sub.add_parser("coeffmats", parents=[common], help="expansion matrices M(1)..M(N)")

    s = sub.add_parser("ep-report", parents=[common], help="collapse indicators toward the EP")
    s.add_argument("--lambdas", required=True, help="comma list, decreasing")
    s.add_argument("--dps", type=int, default=diagnostics.SCAN_DPS)

    s = sub.add_parser("domain", parents=[common], help="layer inequality classification")
    for name in ("A", "B", "C", "D"):
        s.add_argument(f"--{name}", type=float, default=None)
    s.add_argument("--mu", type=float, default=None)
    s.add_argument("--nu", type=float, default=None)
    s.add_argument("--cross-validate", action="store_true")
    s.add_argument("--lambda-small", type=float, default=1e-3)
    s.add_argument("--samples", type=int, default=40)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--range", type=float, default=2.0)
    return p


def _params(args) -> dict:
    skip = {"command", "out", "tol"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip:
            continue
        out["lambda" if k == "lam" else k] = num(v) if isinstance(v, float) else v
    return out


def _document(command, params, tols, **body) -> str:
    doc = {"schema_version": SCHEMA, "command": command, "params": params}
    doc.update(body)
    doc["tolerances"] = {k: num(v) for k, v in asdict(tols).items()}
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        err = {"schema_version": SCHEMA, "error": {"type": "UsageError", "message": str(exc)}}
        sys.stdout.write(json.dumps(err, indent=2) + "\n")
        return 2
    params = _params(args)
    try:
        tols = Tolerances.resolve(args.tol)
        result = COMMANDS[args.command](args, tols)
    except DomainError as exc:
        code, err = 2, exc
    except QcatError as exc:
        code, err = 3, exc
    else:
        if args.command == "scan":
            ok = any(r.error is None for r in result)
            if args.format == "csv":
                text = scan_csv(args.n, result)
            else:
                text = _document(args.command, params, tols, payload={"rows": [_scan_row_dict(r) for r in result]})
            _emit(text, args.out)
            return 0 if ok else 3
        _emit(_document(args.command, params, tols, payload=result), args.out)
        return 0
    tols = Tolerances()
    text = _document(
        args.command, params, tols, error={"type": type(err).__name__, "message": str(err)}
    )
    _emit(text, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
