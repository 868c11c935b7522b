"""Command line interface: measure, sweep, threshold and verify.

State files are JSON: {"dims": [...], "kind": "pure"|"mixed",
"amplitudes"|"matrix": ...} with every complex number written as a
[real, imag] pair, row-major over the product basis.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from pathlib import Path

import numpy as np

from . import states
from .bloch import bloch_decompose
from .measures import (
    discord_pure,
    discord_qubit,
    equality_verdict,
    k_matrix,
    min_general_nondegenerate,
    min_pure,
    min_qubit,
)
from .oracle import SearchConfig, discord_direct, min_direct
from .qcore import DensityOperator, DimensionProfile, PureState
from .states import FamilySpec, family, haar_pure, random_mixed

# |N - D| below this counts as equality in reports and sweep rows.
TOL_EQ = 1e-6
VERIFY_THRESHOLD = 1e-5

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2
EXIT_IO = 3


class StateFormatError(ValueError):
    """Raised for unparseable or inconsistent state input."""


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def _bool(x: bool) -> str:
    return "true" if x else "false"


# ---------------------------------------------------------------------------
# state sources

_FIXED_STATES = {
    "bell": states.bell,
    "w3": states.w3,
    "w3-flipped": states.w3_flipped,
    "wt3": states.w3_flipped,
    "ghz-minus": states.ghz_minus,
    "ghzminus": states.ghz_minus,
    "ghz1": states.ghz_1,
    "ghz-1": states.ghz_1,
}


def named_state(name: str) -> PureState:
    key = name.strip().lower()
    if key in _FIXED_STATES:
        return _FIXED_STATES[key]()
    m = re.fullmatch(r"ghz(\d+)", key)
    if m:
        return states.ghz(int(m.group(1)))
    raise StateFormatError(
        f"unknown state {name!r}; use bell, ghz<n>, w3, w3-flipped, ghz-minus or ghz1"
    )


def _complex_pair(item) -> complex:
    if not (isinstance(item, (list, tuple)) and len(item) == 2):
        raise StateFormatError("complex entries must be [real, imag] pairs")
    return complex(float(item[0]), float(item[1]))


def load_state_file(path: str) -> tuple[PureState | None, DensityOperator]:
    """Parse a JSON state file into (pure state or None, density operator)."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise StateFormatError(f"invalid JSON in {path}: {exc}") from exc
    try:
        dims = [int(d) for d in doc["dims"]]
        kind = doc["kind"]
    except (KeyError, TypeError, ValueError) as exc:
        raise StateFormatError(f"{path}: state file needs 'dims' and 'kind'") from exc
    try:
        if kind == "pure":
            vec = np.array([_complex_pair(a) for a in doc["amplitudes"]])
            psi = PureState.from_vector(vec, dims)
            return psi, psi.to_density()
        if kind == "mixed":
            mat = np.array([[_complex_pair(a) for a in row] for row in doc["matrix"]])
            return None, DensityOperator.from_matrix(mat, dims)
    except StateFormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise StateFormatError(f"{path}: {exc}") from exc
    raise StateFormatError(f"{path}: kind must be 'pure' or 'mixed', got {kind!r}")


def _resolve_state(args) -> tuple[PureState | None, DensityOperator]:
    if getattr(args, "state", None):
        psi = named_state(args.state)
        return psi, psi.to_density()
    if getattr(args, "file", None):
        return load_state_file(args.file)
    raise StateFormatError("provide a state via --state or --file")


def _search_config(args, seed: int) -> SearchConfig:
    return SearchConfig(
        grid_points=args.grid_points,
        restarts=args.restarts,
        seed=seed,
        tol=args.tol,
    )


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("MINLAB_SEED", "0"))


# ---------------------------------------------------------------------------
# measure

def _compute_report(psi, rho, l: int, cfg: SearchConfig) -> dict:
    profile = rho.profile
    d_l = profile.dim(l)
    data = bloch_decompose(rho)
    eta = np.linalg.eigvalsh(k_matrix(data, profile, l).entries)[::-1]
    s_norm = float(np.linalg.norm(data.coherent[l]))
    verdict = equality_verdict(data, l)

    if psi is not None:
        n_val, n_method = min_pure(psi, l), "pure-closed-form"
        d_val, d_method = discord_pure(psi, l), "pure-closed-form"
    else:
        if d_l == 2:
            n_val, n_method = min_qubit(rho, l), "qubit-closed-form"
        else:
            try:
                n_val, n_method = min_general_nondegenerate(rho, l), "eigenbasis-closed-form"
            except ValueError:
                n_val, n_method = min_direct(rho, l, cfg).value, "direct-search"
        if all(d == 2 for d in profile.dims):
            d_val, d_method = discord_qubit(rho, l), "qubit-closed-form"
        else:
            d_val, d_method = discord_direct(rho, l, cfg).value, "direct-search"

    return {
        "dims": list(profile.dims),
        "l": l,
        "N": float(n_val),
        "D": float(d_val),
        "method_N": n_method,
        "method_D": d_method,
        "K_eigenvalues": [float(x) for x in eta],
        "s_norm": s_norm,
        "verdict": {
            "case": verdict.case,
            "commutator_norm": verdict.commutator_norm,
            "eigen_condition": verdict.eigen_condition,
            "triply_degenerate": verdict.triply_degenerate,
            "predicted_equal": verdict.predicted_equal,
        },
        "tol_eq": TOL_EQ,
        "observed_equal": bool(abs(float(n_val) - float(d_val)) < TOL_EQ),
    }


def cmd_measure(args) -> int:
    psi, rho = _resolve_state(args)
    l = args.l
    rho.profile.check_subsystem(l)
    cfg = _search_config(args, _seed(args))
    report = _compute_report(psi, rho, l, cfg)
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
        return EXIT_OK
    label = args.state if args.state else args.file
    print(f"state: {label}  dims: {'x'.join(str(d) for d in report['dims'])}  l={l}")
    print(f"N = {_fmt(report['N'])}    ({report['method_N']})")
    print(f"D = {_fmt(report['D'])}    ({report['method_D']})")
    print("K eigenvalues: " + ", ".join(_fmt(x) for x in report["K_eigenvalues"]))
    print(f"||s|| = {_fmt(report['s_norm'])}")
    v = report["verdict"]
    print(
        f"equality: case={v['case']} predicted_equal={_bool(v['predicted_equal'])} "
        f"observed_equal={_bool(report['observed_equal'])}"
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep

def parse_grid(text: str) -> list[float]:
    """Parse 'start:end:step', inclusive of both ends when step divides the range."""
    parts = text.split(":")
    if len(parts) != 3:
        raise StateFormatError(f"grid must be start:end:step, got {text!r}")
    try:
        start, end, step = (float(p) for p in parts)
    except ValueError as exc:
        raise StateFormatError(f"grid must be numeric, got {text!r}") from exc
    if step <= 0 or end < start:
        raise StateFormatError("grid needs step > 0 and end >= start")
    count = int(math.floor((end - start) / step + 1e-9))
    points = [start + i * step for i in range(count + 1)]
    if points and abs(points[-1] - end) <= 1e-9 * max(1.0, step):
        points[-1] = end
    return points


def sweep_rows(family_name: str, points: list[float], l: int) -> list[dict]:
    rows = []
    for p in points:
        rho = family(FamilySpec(family_name, p))
        data = bloch_decompose(rho)
        eta = np.linalg.eigvalsh(k_matrix(data, rho.profile, l).entries)[::-1]
        verdict = equality_verdict(data, l)
        n_val = min_qubit(rho, l)
        d_val = discord_qubit(rho, l)
        rows.append(
            {
                "p": p,
                "N": n_val,
                "D": d_val,
                "eta": [float(x) for x in eta],
                "s_norm": float(np.linalg.norm(data.coherent[l])),
                "case": verdict.case,
                "predicted_equal": verdict.predicted_equal,
                "observed_equal": bool(abs(n_val - d_val) < TOL_EQ),
            }
        )
    return rows


SWEEP_HEADER = "p,N,D,eta1,eta2,eta3,s_norm,case,predicted_equal,observed_equal"

_PLOT_STUB = """#!/usr/bin/env python3
\"\"\"Plot the N and D columns of a sweep CSV against p.\"\"\"
import csv
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else {csv_name!r}
p, n, d = [], [], []
with open(path) as fh:
    for row in csv.DictReader(fh):
        p.append(float(row["p"]))
        n.append(float(row["N"]))
        d.append(float(row["D"]))
plt.plot(p, n, "--", label="N")
plt.plot(p, d, "-", label="D")
plt.xlabel("p")
plt.legend()
plt.show()
"""


def render_sweep_csv(rows: list[dict]) -> str:
    lines = [SWEEP_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                [
                    _fmt(r["p"]),
                    _fmt(r["N"]),
                    _fmt(r["D"]),
                    _fmt(r["eta"][0]),
                    _fmt(r["eta"][1]),
                    _fmt(r["eta"][2]),
                    _fmt(r["s_norm"]),
                    r["case"],
                    _bool(r["predicted_equal"]),
                    _bool(r["observed_equal"]),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def cmd_sweep(args) -> int:
    points = parse_grid(args.grid)
    rows = sweep_rows(args.family, points, args.l)
    text = render_sweep_csv(rows)
    if args.out is None:
        sys.stdout.write(text)
        return EXIT_OK
    out = Path(args.out)
    out.write_text(text, encoding="utf-8", newline="\n")
    stub = out.with_name(out.stem + ".plot.py")
    stub.write_text(_PLOT_STUB.format(csv_name=out.name), encoding="utf-8")
    print(f"wrote {out} and {stub}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# threshold

def _equality_criterion(family_name: str, l: int):
    """Signed criterion f(p): >= 0 exactly where the equality cases predict N = D."""

    def f(p: float) -> float:
        data = bloch_decompose(family(FamilySpec(family_name, p)))
        profile = data.dims()
        K = k_matrix(data, profile, l).entries
        s = data.coherent[l]
        eta = np.linalg.eigvalsh(K)
        s_sq = float(s @ s)
        if math.sqrt(s_sq) > 1e-9:
            shat = s / math.sqrt(s_sq)
            eta_s = float(shat @ K @ shat)
            return s_sq + eta_s - float(eta[-1])
        return -(float(eta[-1]) - float(eta[0]))

    return f


def find_equality_boundaries(family_name: str, l: int, tol: float, scan_points: int = 401):
    """Bisect the equality criterion's sign changes over p in [0, 1]."""
    f = _equality_criterion(family_name, l)
    grid = np.linspace(0.0, 1.0, scan_points)
    values = [f(p) for p in grid]
    boundaries = []
    for i in range(len(grid) - 1):
        if (values[i] > 0.0) != (values[i + 1] > 0.0):
            lo, hi = float(grid[i]), float(grid[i + 1])
            flo = values[i]
            while hi - lo > tol:
                mid = 0.5 * (lo + hi)
                fmid = f(mid)
                if (flo > 0.0) != (fmid > 0.0):
                    hi = mid
                else:
                    lo, flo = mid, fmid
            boundaries.append(0.5 * (lo + hi))
    all_equal = all(v >= -1e-12 for v in values)
    return boundaries, all_equal


def cmd_threshold(args) -> int:
    boundaries, all_equal = find_equality_boundaries(args.family, args.l, args.tol)
    if args.json:
        print(
            json.dumps(
                {
                    "family": args.family,
                    "l": args.l,
                    "tol": args.tol,
                    "boundaries": boundaries,
                    "equal_everywhere": bool(all_equal and not boundaries),
                },
                sort_keys=True,
            )
        )
        return EXIT_OK
    if boundaries:
        for b in boundaries:
            print(_fmt(b))
    elif all_equal:
        print("no boundaries: equality holds on the whole grid")
    else:
        print("no boundaries: no sign change found")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify

def _parse_profile(text: str) -> DimensionProfile:
    dims = [int(tok) for tok in re.split(r"[x,]", text) if tok]
    return DimensionProfile(dims)


def verify_report(count: int, profile_texts: list[str], seed: int, cfg: SearchConfig) -> tuple[str, bool]:
    """Closed forms against the direct search; returns (report text, passed)."""
    lines = [f"verify: count={count} seed={seed} threshold={VERIFY_THRESHOLD:g}"]
    passed = True
    for pi, text in enumerate(profile_texts):
        profile = _parse_profile(text)
        label = "x".join(str(d) for d in profile.dims)
        all_qubits = all(d == 2 for d in profile.dims)
        for l in range(1, profile.n + 1):
            dev_n_pure = 0.0
            dev_d_pure = 0.0
            for i in range(count):
                psi = haar_pure(profile, (seed, pi, l, 0, i))
                rho = psi.to_density()
                dev_n_pure = max(dev_n_pure, abs(min_pure(psi, l) - min_direct(rho, l, cfg).value))
                dev_d_pure = max(
                    dev_d_pure, abs(discord_pure(psi, l) - discord_direct(rho, l, cfg).value)
                )
            ok = dev_n_pure < VERIFY_THRESHOLD and dev_d_pure < VERIFY_THRESHOLD
            passed &= ok
            lines.append(
                f"profile {label} l={l} pure  "
                f"max|N_closed-N_direct|={dev_n_pure:.3e} "
                f"max|D_closed-D_direct|={dev_d_pure:.3e} {'pass' if ok else 'FAIL'}"
            )

            dev_n_mixed = 0.0
            dev_d_mixed = None
            skipped = 0
            for i in range(count):
                rho = random_mixed(profile, 2, (seed, pi, l, 1, i))
                direct = min_direct(rho, l, cfg).value
                if profile.dim(l) == 2:
                    closed = min_qubit(rho, l)
                else:
                    try:
                        closed = min_general_nondegenerate(rho, l)
                    except ValueError:
                        skipped += 1
                        continue
                dev_n_mixed = max(dev_n_mixed, abs(closed - direct))
                if all_qubits:
                    dev = abs(discord_qubit(rho, l) - discord_direct(rho, l, cfg).value)
                    dev_d_mixed = dev if dev_d_mixed is None else max(dev_d_mixed, dev)
            ok = dev_n_mixed < VERIFY_THRESHOLD and (
                dev_d_mixed is None or dev_d_mixed < VERIFY_THRESHOLD
            )
            passed &= ok
            d_part = "n/a" if dev_d_mixed is None else f"{dev_d_mixed:.3e}"
            skip_part = f" skipped={skipped}" if skipped else ""
            lines.append(
                f"profile {label} l={l} mixed "
                f"max|N_closed-N_direct|={dev_n_mixed:.3e} "
                f"max|D_closed-D_direct|={d_part}{skip_part} {'pass' if ok else 'FAIL'}"
            )
    lines.append(f"overall: {'PASS' if passed else 'FAIL'}")
    return "\n".join(lines) + "\n", passed


def cmd_verify(args) -> int:
    seed = _seed(args)
    cfg = _search_config(args, seed)
    report, passed = verify_report(args.count, args.profiles, seed, cfg)
    if args.out is not None:
        Path(args.out).write_text(report, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(report)
    return EXIT_OK if passed else EXIT_NUMERICAL


# ---------------------------------------------------------------------------
# parser

def _add_search_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=None, help="RNG seed (default: $MINLAB_SEED or 0)")
    p.add_argument("--grid-points", type=int, default=128, help="coarse search samples")
    p.add_argument("--restarts", type=int, default=6, help="independent search restarts")
    p.add_argument("--tol", type=float, default=1e-10, help="search convergence tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minlab",
        description="Measurement-induced nonlocality and geometric discord calculator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="compute N and D for one state")
    p.add_argument("--state", help="named state: bell, ghz<n>, w3, w3-flipped, ghz-minus, ghz1")
    p.add_argument("--file", help="JSON state file")
    p.add_argument("--l", type=int, default=1, help="measured subsystem (1-based)")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    _add_search_flags(p)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("sweep", help="sweep a family over p and emit CSV")
    p.add_argument("--family", required=True, choices=sorted(states.FAMILY_COMPONENTS))
    p.add_argument("--grid", default="0:1:0.01", help="start:end:step, both ends inclusive")
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--out", help="CSV output path (default: stdout)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("threshold", help="bisect the equality-region boundaries of a family")
    p.add_argument("--family", required=True, choices=sorted(states.FAMILY_COMPONENTS))
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--tol", type=float, default=1e-4, help="bisection tolerance")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("verify", help="closed forms vs direct search on random states")
    p.add_argument("--count", type=int, default=20, help="samples per profile and kind")
    p.add_argument(
        "--profiles",
        nargs="+",
        default=["2x2", "2x2x2"],
        help="profiles like 2x2x2 or 2,3",
    )
    p.add_argument("--out", help="write the report to a file instead of stdout")
    _add_search_flags(p)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except StateFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except Exception as exc:  # numerical failure
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
