"""Command-line front end.

Every command prints one JSON document to stdout (or CSV with
``--format csv``). Exit codes: 0 success, 2 argument error, 3 domain,
resource or state-file error.

Relative ``--out`` and ``--figure`` paths are resolved against
``$MIXQ_OUTPUT_DIR`` when it is set.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .coherence import (
    DephasingSpec,
    coherence_spectrum,
    collective_dephasing,
    collective_rotation,
    mq_signal,
)
from .core import (
    DEFAULT_MAX_QUBITS,
    Bipartition,
    DensityMatrix,
    Operator,
    PAULI,
    embed,
    entropy,
    qubit_cap,
)
from .discord import DiscordSettings, ProjectiveBasis, discord
from .dqc1 import dqc1_exact, dqc1_sampled, random_unitary
from .entanglement import (
    THRESHOLD_CURVES,
    PolarizationModel,
    analytic_cat_threshold,
    cat_family,
    cat_threshold_curve,
    cat_threshold_table,
    crossing_analysis,
    ppt_check,
    threshold_bisect,
    werner_family,
)
from .errors import ArgumentError, MixqError
from .io import read_operator, read_state, state_document, write_state
from .states import (
    BELL_VECTORS,
    DEFAULT_POLARIZATION,
    ThermalSpec,
    bell_mixture,
    cat_state,
    deviation_state,
    pseudo_pure,
    random_density,
    thermal_state,
    werner,
    zeeman_hamiltonian,
)

OUTPUT_DIR_ENV = "MIXQ_OUTPUT_DIR"
STATE_FAMILIES = (
    "bell",
    "werner",
    "cat",
    "bell-mixture",
    "deviation",
    "thermal",
    "maximally-mixed",
    "random",
)
EXIT_OK, EXIT_ARGS, EXIT_DOMAIN = 0, 2, 3


def resolve_path(path: str) -> Path:
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def parse_cut(text: str, n_qubits: int) -> Bipartition:
    try:
        side_a = [int(q) for q in text.split(",") if q.strip()]
    except ValueError:
        raise ArgumentError(f"--cut expects comma-separated qubit indices, got {text!r}") from None
    return Bipartition.of(side_a, n_qubits)


def build_state(args) -> tuple[DensityMatrix, dict]:
    """Construct the state selected by --state/--state-file and its provenance."""
    if getattr(args, "state_file", None):
        rho, meta = read_state(args.state_file)
        return rho, {"source": str(args.state_file), **meta}
    family = args.state
    eps, n = args.epsilon, args.n
    meta = {"family": family}
    if family == "bell":
        rho = DensityMatrix.from_pure(BELL_VECTORS[0])
    elif family == "werner":
        eps = 0.25 if eps is None else eps
        rho = werner(eps)
        meta["epsilon"] = eps
    elif family == "cat":
        n = n or 3
        eps = 1.0 if eps is None else eps
        rho = pseudo_pure(n, eps, cat_state(n))
        meta.update(n=n, epsilon=eps)
    elif family == "bell-mixture":
        weights = [float(w) for w in (args.weights or "0.25,0.25,0.25,0.25").split(",")]
        rho = bell_mixture(weights)
        meta["weights"] = weights
    elif family == "deviation":
        n = n or 2
        eps = DEFAULT_POLARIZATION if eps is None else eps
        rho = deviation_state(n, eps, args.sign)
        meta.update(n=n, epsilon=eps, sign=args.sign)
    elif family == "thermal":
        n = n or 2
        h = zeeman_hamiltonian(n)
        beta = args.beta if args.beta is not None else DEFAULT_POLARIZATION / np.linalg.norm(h.data, 2)
        rho = thermal_state(ThermalSpec(h, beta, n), first_order=args.first_order)
        meta.update(
            n=n,
            beta=beta,
            hamiltonian="zeeman: sum_k (1 + 0.1 k) sigma_z^k / 2",
            first_order=args.first_order,
        )
    elif family == "maximally-mixed":
        n = n or 2
        rho = DensityMatrix.maximally_mixed(n)
        meta["n"] = n
    elif family == "random":
        n = n or 2
        rho = random_density(n, args.seed)
        meta.update(n=n, seed=args.seed)
    else:
        raise ArgumentError(f"unknown state family {family!r}")
    return rho, meta


def build_unitary(args) -> tuple[Operator, dict]:
    if args.u == "file":
        if not args.u_file:
            raise ArgumentError("--u file requires --u-file")
        u = read_operator(args.u_file)
        return u, {"u": "file", "u_file": args.u_file}
    n = args.n
    if n < 1:
        raise ArgumentError("--n must be at least 1")
    if args.u == "identity":
        u = Operator.identity(n)
    elif args.u == "random":
        u = random_unitary(2**n, args.seed)
    else:
        u = embed(PAULI[args.u[-1]], [0], n)
    return u, {"u": args.u, "n": n}


# ---------------------------------------------------------------- commands


def cmd_state_make(args):
    rho, meta = build_state(args)
    summary = {
        "n_qubits": rho.n_qubits,
        "purity": rho.purity(),
        "entropy": entropy(rho),
        "metadata": meta,
    }
    if args.out:
        path = write_state(resolve_path(args.out), rho, meta)
        return {**summary, "path": str(path)}, [summary | {"path": str(path)}]
    doc = state_document(rho, meta)
    rows = [
        {"row": i, "col": j, "re": e["re"], "im": e["im"]}
        for k, e in enumerate(doc["entries"])
        for i, j in [divmod(k, 2**rho.n_qubits)]
    ]
    return doc, rows


def cmd_ppt(args):
    rho, meta = build_state(args)
    report = ppt_check(rho, parse_cut(args.cut, rho.n_qubits))
    doc = report.as_dict() | {"state": meta}
    return doc, [report.as_dict()]


def cmd_threshold(args):
    if args.table:
        table = cat_threshold_table(range(args.n_min, args.n_max + 1), args.tol)
        rows = [{"n": n, "epsilon_c": e, "analytic": analytic_cat_threshold(n)} for n, e in table]
        doc = {"family": "cat", "tol": args.tol, "table": rows}
        if args.figure:
            from .plotting import threshold_figure

            doc["figure"] = str(threshold_figure(table, resolve_path(args.figure)))
        return doc, rows
    if args.family == "werner":
        fam, analytic = werner_family(), 1 / 3
    else:
        fam, analytic = cat_family(args.n, args.balanced), analytic_cat_threshold(args.n)
    eps_c = threshold_bisect(fam, args.tol)
    doc = {
        "family": fam.name,
        "cut": [sorted(fam.cut.side_a), sorted(fam.cut.side_b)],
        "tol": args.tol,
        "epsilon_c": eps_c,
        "analytic": analytic,
    }
    return doc, [{k: v for k, v in doc.items() if k != "cut"}]


def cmd_crossing(args):
    if args.curve == "cat":
        curve = cat_threshold_curve(args.numeric_max, args.tol)
    else:
        curve = THRESHOLD_CURVES[args.curve]()
    if args.c is not None:
        model = PolarizationModel(args.c, curve, args.form)
    else:
        model = PolarizationModel.calibrated(args.calibrate_value, args.calibrate_n, curve, args.form)
    report = crossing_analysis(model, args.n_max, args.n_min)
    doc = {"model": {"form": model.form, "c": model.c, "curve": curve.name}, **report.as_dict()}
    if args.figure:
        from .plotting import crossing_figure

        doc["figure"] = str(crossing_figure(report, resolve_path(args.figure)))
    return doc, report.rows


def cmd_discord(args):
    rho, meta = build_state(args)
    cut = parse_cut(args.cut, rho.n_qubits)
    settings = DiscordSettings(args.grid_density, args.refine_iters, ProjectiveBasis(args.theta, args.phi))
    report = discord(rho, cut, settings)
    doc = report.as_dict() | {"state": meta}
    row = report.as_dict()
    b = row.pop("basis_argmax")
    return doc, [row | {"theta_argmax": b["theta"], "phi_argmax": b["phi"]}]


def _complex_doc(z: complex) -> dict:
    return {"re": float(z.real) + 0.0, "im": float(z.imag) + 0.0}


def cmd_dqc1_exact(args):
    u, meta = build_unitary(args)
    est = dqc1_exact(u, args.epsilon, args.sign, args.literal)
    trace = np.trace(u.data) / u.dim
    doc = _complex_doc(est) | {
        "direct_trace": _complex_doc(trace),
        "epsilon": args.epsilon,
        "unitary": meta,
    }
    return doc, [_complex_doc(est) | {"direct_re": trace.real, "direct_im": trace.imag}]


def cmd_dqc1_sample(args):
    u, meta = build_unitary(args)
    re, im = dqc1_sampled(u, args.epsilon, args.shots, args.seed, args.sign)
    exact = dqc1_exact(u, args.epsilon, args.sign)
    doc = {
        "re": re.as_dict(),
        "im": im.as_dict(),
        "exact": _complex_doc(exact),
        "epsilon": args.epsilon,
        "unitary": meta,
    }
    rows = [{"quadrature": q} | r.as_dict() for q, r in (("re", re), ("im", im))]
    return doc, rows


def cmd_spectrum(args):
    rho, meta = build_state(args)
    if args.rotate:
        rho = collective_rotation(rho, args.rotate)
    if args.dephase:
        rho = collective_dephasing(rho, DephasingSpec(args.dephase))
    spec = coherence_spectrum(rho)
    doc = spec.as_dict() | {"state": meta, "rotate": args.rotate, "dephase": args.dephase}
    return doc, [{"order": p, "weight": w} for p, w in spec.weights.items()]


def cmd_signal(args):
    sig = mq_signal(args.n, args.epsilon, args.samples)
    doc = sig.as_dict() | {"epsilon": args.epsilon}
    if args.figure:
        from .plotting import mq_figure

        doc["figure"] = str(mq_figure(sig, resolve_path(args.figure)))
    rows = [
        {"index": i, "phi": float(sig.phi[i]), "signal": float(sig.signal[i]),
         "order": int(sig.orders[i]), "amplitude": float(sig.amplitudes[i])}
        for i in range(args.samples)
    ]
    return doc, rows


# ------------------------------------------------------------------ parser


def _state_options(p: argparse.ArgumentParser, required: bool = False):
    src = p.add_mutually_exclusive_group(required=required)
    src.add_argument("--state", choices=STATE_FAMILIES, help="named state family")
    src.add_argument("--state-file", help="JSON state file")
    p.add_argument("--n", type=int, default=None, help="qubit count (family default if omitted)")
    p.add_argument("--epsilon", type=float, default=None, help="family parameter epsilon")
    p.add_argument("--weights", help="bell-mixture weights, comma separated")
    p.add_argument("--beta", type=float, default=None,
                   help="thermal inverse temperature; unset means beta*||H|| = 1e-5")
    p.add_argument("--first-order", action="store_true", help="thermal: use (1 - beta H) form")
    p.add_argument("--sign", type=int, choices=(-1, 1), default=-1,
                   help="deviation sign: -1 gives 1 - eps sigma_z")
    p.add_argument("--seed", type=int, default=0, help="seed for random states")


def _fig_option(p):
    p.add_argument("--figure", help="also render a PNG figure to this path")


def make_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json", help="output format")
    common.add_argument("--cap", type=int, default=DEFAULT_MAX_QUBITS, help="dense qubit cap")

    parser = argparse.ArgumentParser(prog="mixq", description=__doc__.splitlines()[0], formatter_class=fmt)
    parser.add_argument("--version", action="version", version=f"mixq {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    state = sub.add_parser("state", help="state construction").add_subparsers(dest="action", required=True)
    p = state.add_parser("make", parents=[common], formatter_class=fmt, help="build and optionally save a state")
    _state_options(p, required=True)
    p.add_argument("--out", help="write a state file here instead of printing entries")
    p.set_defaults(func=cmd_state_make)

    ent = sub.add_parser("entangle", help="entanglement analysis").add_subparsers(dest="action", required=True)
    p = ent.add_parser("ppt", parents=[common], formatter_class=fmt, help="partial-transpose test")
    _state_options(p, required=True)
    p.add_argument("--cut", default="0", help="side-A qubits, comma separated")
    p.set_defaults(func=cmd_ppt)

    p = ent.add_parser("threshold", parents=[common], formatter_class=fmt, help="bisect a PPT threshold")
    p.add_argument("--family", choices=("werner", "cat"), default="werner", help="state family")
    p.add_argument("--n", type=int, default=3, help="cat family qubit count")
    p.add_argument("--balanced", action="store_true", help="cat family: balanced cut instead of 1|rest")
    p.add_argument("--tol", type=float, default=1e-9, help="bisection tolerance")
    p.add_argument("--table", action="store_true", help="cat thresholds for n-min..n-max")
    p.add_argument("--n-min", type=int, default=2, help="first table row")
    p.add_argument("--n-max", type=int, default=8, help="last table row")
    _fig_option(p)
    p.set_defaults(func=cmd_threshold)

    p = ent.add_parser("crossing", parents=[common], formatter_class=fmt,
                       help="polarization vs threshold crossing")
    p.add_argument("--curve", choices=tuple(THRESHOLD_CURVES), default="separability-bound",
                   help="threshold curve to cross")
    p.add_argument("--form", choices=("n_exp2", "exp2"), default="n_exp2",
                   help="polarization form: c*n*2^-n or c*2^-n")
    p.add_argument("--c", type=float, default=None, help="explicit scale c (overrides calibration)")
    p.add_argument("--calibrate-value", type=float, default=DEFAULT_POLARIZATION,
                   help="polarization fixed at --calibrate-n")
    p.add_argument("--calibrate-n", type=int, default=2, help="calibration qubit count")
    p.add_argument("--n-min", type=int, default=2, help="smallest n scanned")
    p.add_argument("--n-max", type=int, default=30, help="largest n scanned")
    p.add_argument("--numeric-max", type=int, default=8, help="cat curve: bisect up to this n")
    p.add_argument("--tol", type=float, default=1e-10, help="cat curve bisection tolerance")
    _fig_option(p)
    p.set_defaults(func=cmd_crossing)

    p = sub.add_parser("discord", parents=[common], formatter_class=fmt, help="quantum discord report")
    _state_options(p, required=True)
    p.add_argument("--cut", default="0", help="side-A (unmeasured) qubits; the rest must be one qubit")
    p.add_argument("--grid-density", type=int, default=64, help="theta points (phi gets twice as many)")
    p.add_argument("--refine-iters", type=int, default=200, help="compass-search iterations")
    p.add_argument("--theta", type=float, default=0.0, help="basis for J_at_basis")
    p.add_argument("--phi", type=float, default=0.0, help="basis for J_at_basis")
    p.set_defaults(func=cmd_discord)

    dq = sub.add_parser("dqc1", help="one-clean-qubit trace estimation").add_subparsers(dest="action", required=True)
    for name, func in (("exact", cmd_dqc1_exact), ("sample", cmd_dqc1_sample)):
        p = dq.add_parser(name, parents=[common], formatter_class=fmt)
        p.add_argument("--u", choices=("identity", "random", "sigmax", "sigmaz", "file"), default="identity",
                       help="unitary on the register")
        p.add_argument("--u-file", help="operator JSON (state-file layout)")
        p.add_argument("--n", type=int, default=3, help="register qubits")
        p.add_argument("--epsilon", type=float, default=1.0, help="clean-qubit polarization")
        p.add_argument("--sign", type=int, choices=(-1, 1), default=-1, help="polarization sign")
        p.add_argument("--seed", type=int, default=0, help="seed for --u random and sampling")
        if name == "exact":
            p.add_argument("--literal", action="store_true", help="final basis change then sigma_z readout")
        else:
            p.add_argument("--shots", type=int, default=10000, help="clean-qubit measurements")
        p.set_defaults(func=func)

    co = sub.add_parser("coherence", help="multiple-quantum coherence").add_subparsers(dest="action", required=True)
    p = co.add_parser("spectrum", parents=[common], formatter_class=fmt, help="coherence-order weights")
    _state_options(p, required=True)
    p.add_argument("--rotate", type=float, default=0.0, help="collective rotation angle first")
    p.add_argument("--dephase", type=float, default=0.0, help="collective dephasing sigma")
    p.set_defaults(func=cmd_spectrum)

    p = co.add_parser("signal", parents=[common], formatter_class=fmt, help="encode/rotate/decode signal")
    p.add_argument("--n", type=int, default=4, help="qubits in the cat state")
    p.add_argument("--epsilon", type=float, default=1.0, help="pseudo-pure polarization")
    p.add_argument("--samples", type=int, default=64, help="phi samples (power of two)")
    _fig_option(p)
    p.set_defaults(func=cmd_signal)
    return parser


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _scalar(v):
    if isinstance(v, (dict, list, tuple)):
        return json.dumps(v, default=_json_default)
    return v


def render(doc: dict, rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, default=_json_default)
    buf = io.StringIO()
    fields = list(dict.fromkeys(k for r in rows for k in r))
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow({k: _scalar(v) for k, v in r.items()})
    return buf.getvalue().rstrip("\n")


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        with qubit_cap(args.cap):
            doc, rows = args.func(args)
    except ArgumentError as exc:
        print(f"mixq: error: {exc}", file=stderr)
        return EXIT_ARGS
    except MixqError as exc:
        print(f"mixq: error: {exc}", file=stderr)
        return EXIT_DOMAIN
    print(render(doc, rows, args.format), file=stdout)
    return EXIT_OK


def main():
    sys.exit(run())
