"""Command-line front end and artifact writers.

Verbs: classify, bounds, simulate, sweep.  Options come from flags and an
optional ``key=value`` config file; flags win.  Artifacts are written
atomically (temp file in the same directory, then rename), so an
interrupted run leaves either the previous file or none.

Exit codes: 0 success, 2 usage or validation failure, 3 numerical overflow
before any artifact was written.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence

from .bounds import BoundReport, classify_at_step, e1_bounds, e2_bounds, e3_step_bound
from .equilibrium import (
    BOUNDARY_TOL,
    EigenPair,
    StabilityClass,
    eigenvalues_2x2,
    equilibria,
    jacobian_continuous,
    jacobian_discrete,
)
from .model import ModelKind, ModelParams, State, derived_quantities
from .regions import Axis, DEFAULT_CELLS, GridSpec, sweep as run_sweep_grid
from .simulate import (
    BURN_IN_FRACTION,
    CONVERGENCE_THRESHOLD,
    DIVERGENCE_GUARD,
    MIN_PEAK_RUN,
    PEAK_RATIO_BAND,
    Verdict,
    diagnose,
    iterate,
)

__all__ = [
    "EXIT_OK",
    "EXIT_USAGE",
    "EXIT_NUMERIC",
    "UsageError",
    "ArtifactKind",
    "RunArtifact",
    "Command",
    "parse",
    "run",
    "main",
]

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3

_FLOAT_FMT = "%.17g"


class UsageError(Exception):
    """Bad verb, flag, config key, or option value; maps to exit code 2."""


class ArtifactKind(Enum):
    CLASSIFICATION_JSON = "CLASSIFICATION_JSON"
    TRAJECTORY_CSV = "TRAJECTORY_CSV"
    REGION_CSV = "REGION_CSV"
    BOUNDS_JSON = "BOUNDS_JSON"


@dataclass(frozen=True)
class RunArtifact:
    kind: ArtifactKind
    path: str
    checksum: str  # sha256 hex digest of the written bytes


@dataclass(frozen=True)
class Command:
    """A fully resolved invocation.  Fields not used by the verb stay None."""

    verb: str
    kind: Optional[ModelKind] = None
    r: Optional[float] = None
    K: Optional[float] = None
    alpha: Optional[float] = None
    gamma: Optional[float] = None
    c: Optional[float] = None
    h: Optional[float] = None
    steps: Optional[int] = None
    N0: Optional[float] = None
    P0: Optional[float] = None
    axis: Optional[Axis] = None
    x_lo: Optional[float] = None
    x_hi: Optional[float] = None
    x_cells: Optional[int] = None
    beta_lo: Optional[float] = None
    beta_hi: Optional[float] = None
    beta_cells: Optional[int] = None
    out: Optional[str] = None
    diagnostics_out: Optional[str] = None
    boundaries_out: Optional[str] = None
    tol: Optional[float] = None
    convergence_threshold: Optional[float] = None
    peak_band: Optional[float] = None
    burn_in: Optional[float] = None
    min_peaks: Optional[int] = None
    guard: Optional[float] = None

    def params(self) -> ModelParams:
        return ModelParams(self.r, self.K, self.alpha, self.gamma, self.c)

    def to_argv(self) -> list[str]:
        """Canonical flag list; parsing it reproduces this Command exactly."""
        argv = [self.verb]

        def fnum(v: float) -> str:
            return repr(float(v))

        pairs: list[tuple[str, Optional[object], Callable[[object], str]]] = [
            ("--model", self.kind, lambda k: k.value),
            ("--r", self.r, fnum),
            ("--K", self.K, fnum),
            ("--alpha", self.alpha, fnum),
            ("--gamma", self.gamma, fnum),
            ("--c", self.c, fnum),
            ("--h", self.h, fnum),
            ("--steps", self.steps, str),
            ("--N0", self.N0, fnum),
            ("--P0", self.P0, fnum),
            ("--axis", self.axis, lambda a: a.value),
            ("--x-lo", self.x_lo, fnum),
            ("--x-hi", self.x_hi, fnum),
            ("--x-cells", self.x_cells, str),
            ("--beta-lo", self.beta_lo, fnum),
            ("--beta-hi", self.beta_hi, fnum),
            ("--beta-cells", self.beta_cells, str),
            ("--out", self.out, str),
            ("--diagnostics-out", self.diagnostics_out, str),
            ("--boundaries-out", self.boundaries_out, str),
            ("--tol", self.tol, fnum),
            ("--convergence-threshold", self.convergence_threshold, fnum),
            ("--peak-band", self.peak_band, fnum),
            ("--burn-in", self.burn_in, fnum),
            ("--min-peaks", self.min_peaks, str),
            ("--guard", self.guard, fnum),
        ]
        for flag, value, fmt in pairs:
            if value is not None:
                argv.extend([flag, fmt(value)])
        return argv


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


_PARAM_OPTS: list[tuple[str, str, Callable]] = [
    ("model", "model", str),
    ("r", "r", float),
    ("K", "K", float),
    ("alpha", "alpha", float),
    ("gamma", "gamma", float),
    ("c", "c", float),
]
_TAIL_OPTS: list[tuple[str, str, Callable]] = [
    ("tol", "tol", float),
    ("out", "out", str),
]
_OPTIONS: dict[str, list[tuple[str, str, Callable]]] = {
    "classify": _PARAM_OPTS + [("h", "h", float)] + _TAIL_OPTS,
    "bounds": _PARAM_OPTS + [("h", "h", float)] + _TAIL_OPTS,
    "simulate": _PARAM_OPTS
    + [
        ("h", "h", float),
        ("steps", "steps", int),
        ("N0", "N0", float),
        ("P0", "P0", float),
        ("convergence-threshold", "convergence_threshold", float),
        ("peak-band", "peak_band", float),
        ("burn-in", "burn_in", float),
        ("min-peaks", "min_peaks", int),
        ("guard", "guard", float),
        ("diagnostics-out", "diagnostics_out", str),
    ]
    + _TAIL_OPTS,
    "sweep": [
        ("model", "model", str),
        ("r", "r", float),
        ("K", "K", float),
        ("gamma", "gamma", float),
        ("c", "c", float),
        ("h", "h", float),
        ("axis", "axis", str),
        ("x-lo", "x_lo", float),
        ("x-hi", "x_hi", float),
        ("x-cells", "x_cells", int),
        ("beta-lo", "beta_lo", float),
        ("beta-hi", "beta_hi", float),
        ("beta-cells", "beta_cells", int),
        ("boundaries-out", "boundaries_out", str),
    ]
    + _TAIL_OPTS,
}

_REQUIRED: dict[str, list[str]] = {
    "classify": ["model", "r", "K", "alpha", "gamma", "c", "h"],
    "bounds": ["model", "r", "K", "alpha", "gamma", "c"],
    "simulate": ["model", "r", "K", "alpha", "gamma", "c", "h"],
    "sweep": ["model", "r", "K", "gamma", "axis", "x-lo", "x-hi", "beta-lo", "beta-hi"],
}


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="pp-stability-lab",
        description="Stability analysis and simulation of stepped predator-prey models.",
        allow_abbrev=False,
    )
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")
    for verb, opts in _OPTIONS.items():
        p = sub.add_parser(verb, allow_abbrev=False)
        p.add_argument("--config", default=None, help="key=value file; flags override it")
        for key, dest, conv in opts:
            p.add_argument(f"--{key}", dest=dest, type=conv, default=None)
    return parser


def _read_config(path: str) -> dict[str, str]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path!r}: {exc}") from exc
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def _require(ns: argparse.Namespace, verb: str) -> None:
    dest_by_key = {key: dest for key, dest, _ in _OPTIONS[verb]}
    for key in _REQUIRED[verb]:
        if getattr(ns, dest_by_key[key]) is None:
            raise UsageError(f"missing required option for {verb}: --{key}")


def _positive(name: str, value: float) -> float:
    if not (math.isfinite(value) and value > 0.0):
        raise UsageError(f"option --{name} must be positive and finite, got {value!r}")
    return float(value)


def _model_kind(raw: str) -> ModelKind:
    for kind in ModelKind:
        if raw == kind.value:
            return kind
    choices = ", ".join(k.value for k in ModelKind)
    raise UsageError(f"invalid value for --model: {raw!r} (choose from {choices})")


def parse(argv: Sequence[str]) -> Command:
    """Resolve flags plus optional config file into a Command."""
    parser = _build_parser()
    ns = parser.parse_args(list(argv))
    verb = ns.verb
    opts = _OPTIONS[verb]
    if ns.config is not None:
        known = {key: (dest, conv) for key, dest, conv in opts}
        for key, raw in _read_config(ns.config).items():
            if key not in known:
                raise UsageError(f"unknown config key {key!r} for verb {verb!r}")
            dest, conv = known[key]
            if getattr(ns, dest) is None:  # flags override file values
                try:
                    setattr(ns, dest, conv(raw))
                except ValueError as exc:
                    raise UsageError(
                        f"invalid value for config key {key!r}: {raw!r}"
                    ) from exc
    _require(ns, verb)

    kind = _model_kind(ns.model)
    tol = _positive("tol", ns.tol) if ns.tol is not None else BOUNDARY_TOL

    if verb in ("classify", "bounds", "simulate"):
        try:
            params = ModelParams(ns.r, ns.K, ns.alpha, ns.gamma, ns.c)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        h = _positive("h", ns.h) if ns.h is not None else None
        if verb == "simulate":
            steps = ns.steps if ns.steps is not None else 1000
            if not isinstance(steps, int) or steps < 1:
                raise UsageError(f"option --steps must be an integer >= 1, got {steps!r}")
            if ns.N0 is not None and not (math.isfinite(ns.N0) and ns.N0 >= 0.0):
                raise UsageError(f"option --N0 must be finite and >= 0, got {ns.N0!r}")
            if ns.P0 is not None and not (math.isfinite(ns.P0) and ns.P0 >= 0.0):
                raise UsageError(f"option --P0 must be finite and >= 0, got {ns.P0!r}")
            conv = (
                _positive("convergence-threshold", ns.convergence_threshold)
                if ns.convergence_threshold is not None
                else CONVERGENCE_THRESHOLD
            )
            band = (
                _positive("peak-band", ns.peak_band)
                if ns.peak_band is not None
                else PEAK_RATIO_BAND
            )
            burn = ns.burn_in if ns.burn_in is not None else BURN_IN_FRACTION
            if not (0.0 <= burn < 1.0):
                raise UsageError(f"option --burn-in must lie in [0, 1), got {burn!r}")
            peaks = ns.min_peaks if ns.min_peaks is not None else MIN_PEAK_RUN
            if not isinstance(peaks, int) or peaks < 1:
                raise UsageError(f"option --min-peaks must be an integer >= 1, got {peaks!r}")
            guard = (
                _positive("guard", ns.guard) if ns.guard is not None else DIVERGENCE_GUARD
            )
            return Command(
                verb=verb,
                kind=kind,
                r=params.r,
                K=params.K,
                alpha=params.alpha,
                gamma=params.gamma,
                c=params.c,
                h=h,
                steps=steps,
                N0=ns.N0,
                P0=ns.P0,
                out=ns.out,
                diagnostics_out=ns.diagnostics_out,
                tol=tol,
                convergence_threshold=conv,
                peak_band=band,
                burn_in=float(burn),
                min_peaks=peaks,
                guard=guard,
            )
        return Command(
            verb=verb,
            kind=kind,
            r=params.r,
            K=params.K,
            alpha=params.alpha,
            gamma=params.gamma,
            c=params.c,
            h=h,
            out=ns.out,
            tol=tol,
        )

    # sweep
    axis_raw = ns.axis
    if axis_raw == Axis.H.value:
        axis = Axis.H
    elif axis_raw == Axis.C.value:
        axis = Axis.C
    else:
        raise UsageError(f"invalid value for --axis: {axis_raw!r} (choose from h, c)")
    if axis is Axis.H:
        if ns.h is not None:
            raise UsageError("--h is the swept axis here; use --x-lo/--x-hi instead")
        if ns.c is None:
            raise UsageError("missing required option for sweep along h: --c")
    else:
        if ns.c is not None:
            raise UsageError("--c is the swept axis here; use --x-lo/--x-hi instead")
        if ns.h is None:
            raise UsageError("missing required option for sweep along c: --h")
    x_cells = ns.x_cells if ns.x_cells is not None else DEFAULT_CELLS
    beta_cells = ns.beta_cells if ns.beta_cells is not None else DEFAULT_CELLS
    cmd = Command(
        verb=verb,
        kind=kind,
        r=ns.r,
        K=ns.K,
        gamma=ns.gamma,
        c=ns.c,
        h=ns.h,
        axis=axis,
        x_lo=ns.x_lo,
        x_hi=ns.x_hi,
        x_cells=x_cells,
        beta_lo=ns.beta_lo,
        beta_hi=ns.beta_hi,
        beta_cells=beta_cells,
        out=ns.out,
        boundaries_out=ns.boundaries_out,
        tol=tol,
    )
    _grid_from_command(cmd)  # surface range/positivity errors at parse time
    return cmd


def _grid_from_command(cmd: Command) -> GridSpec:
    try:
        return GridSpec(
            kind=cmd.kind,
            x_axis=cmd.axis,
            x_range=(cmd.x_lo, cmd.x_hi, cmd.x_cells),
            beta_range=(cmd.beta_lo, cmd.beta_hi, cmd.beta_cells),
            r=cmd.r,
            K=cmd.K,
            gamma=cmd.gamma,
            c=cmd.c,
            h=cmd.h,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _write_atomic(path: str, data: bytes) -> str:
    """Write bytes via temp file + rename; returns the sha256 hex digest."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=os.path.basename(path) + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise
    return hashlib.sha256(data).hexdigest()


def _write_json(path: str, payload: object) -> str:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    return _write_atomic(path, text.encode("utf-8"))


def _complex_pair(eigs: EigenPair) -> list[dict[str, float]]:
    return [
        {"re": eigs.lambda1.real, "im": eigs.lambda1.imag},
        {"re": eigs.lambda2.real, "im": eigs.lambda2.imag},
    ]


def _class_dict(cls: Optional[StabilityClass]) -> Optional[dict[str, object]]:
    if cls is None:
        return None
    return {"variant": cls.variant.value, "oscillatory": cls.oscillatory}


def _report_dict(
    report: BoundReport,
    kind: ModelKind,
    params: ModelParams,
    h: Optional[float],
    index: int,
) -> dict[str, object]:
    point = equilibria(params)[index].point
    eigen: dict[str, object] = {
        "continuous": _complex_pair(eigenvalues_2x2(jacobian_continuous(kind, params, point)))
    }
    if h is not None:
        eigen["stepped"] = _complex_pair(
            eigenvalues_2x2(jacobian_discrete(kind, params, h, point))
        )
    return {
        "equilibrium": report.equilibrium,
        "case": report.case_tag.value,
        "h_upper_bounds": [list(pair) for pair in report.h_upper_bounds],
        "conditions": [list(pair) for pair in report.conditions],
        "reported_values": [list(pair) for pair in report.reported_values],
        "eigenvalues": eigen,
        "classification": {
            "closed_form": _class_dict(report.classification_closed_form),
            "oracle": _class_dict(report.classification_oracle),
            "continuous": _class_dict(report.classification_continuous),
        },
        "agreement": report.agreement,
        "annotations": list(report.annotations),
    }


def _run_bounds_like(cmd: Command) -> list[RunArtifact]:
    params = cmd.params()
    kind = cmd.kind
    if cmd.h is not None:
        reports = classify_at_step(kind, params, cmd.h, cmd.tol)
    else:
        reports = [
            e1_bounds(kind, params, tol=cmd.tol),
            e2_bounds(kind, params, tol=cmd.tol),
            e3_step_bound(params, kind=kind, tol=cmd.tol),
        ]
    q = derived_quantities(params)
    payload = {
        "command": {"argv": cmd.to_argv()},
        "model": kind.value,
        "params": {
            "r": params.r,
            "K": params.K,
            "alpha": params.alpha,
            "gamma": params.gamma,
            "c": params.c,
        },
        "h": cmd.h,
        "derived": {"theta": q.theta, "T": q.T, "D": q.D, "beta": q.beta},
        "equilibria": [
            {"label": eq.label, "N": eq.point.N, "P": eq.point.P, "feasible": eq.feasible}
            for eq in equilibria(params)
        ],
        "reports": [
            _report_dict(rep, kind, params, cmd.h, i) for i, rep in enumerate(reports)
        ],
    }
    out = cmd.out or (cmd.verb + ".json")
    digest = _write_json(out, payload)
    return [RunArtifact(ArtifactKind.BOUNDS_JSON, out, digest)]


def _trajectory_csv(t, n, p) -> bytes:
    lines = ["t,N,P"]
    fmt = _FLOAT_FMT + "," + _FLOAT_FMT + "," + _FLOAT_FMT
    for row in zip(t.tolist(), n.tolist(), p.tolist()):
        lines.append(fmt % row)
    return ("\n".join(lines) + "\n").encode("utf-8")


def _run_simulate(cmd: Command) -> list[RunArtifact]:
    params = cmd.params()
    e3 = equilibria(params)[2].point
    n0 = cmd.N0 if cmd.N0 is not None else 0.9 * e3.N
    p0 = cmd.P0 if cmd.P0 is not None else 0.9 * e3.P
    traj = iterate(cmd.kind, params, cmd.h, State(n0, p0), cmd.steps, guard=cmd.guard)

    out = cmd.out or "trajectory.csv"
    digest = _write_atomic(out, _trajectory_csv(traj.t, traj.N, traj.P))
    artifacts = [RunArtifact(ArtifactKind.TRAJECTORY_CSV, out, digest)]

    try:
        diag = diagnose(
            traj,
            convergence_threshold=cmd.convergence_threshold,
            peak_ratio_band=cmd.peak_band,
            burn_in_fraction=cmd.burn_in,
            min_peak_run=cmd.min_peaks,
        )
        verdict = diag.verdict.value
        target = diag.target
        final_error = diag.final_error
        amplitudes = list(diag.peak_amplitudes)
    except ValueError:
        # Too few samples to extract peaks (early overflow stop or a very
        # short run); still emit a well-formed sidecar.
        verdict = Verdict.INCONCLUSIVE.value
        target = e3
        scale = max(1.0, abs(e3.N), abs(e3.P))
        final_error = max(abs(float(traj.N[-1]) - e3.N), abs(float(traj.P[-1]) - e3.P)) / scale
        amplitudes = []
    sidecar_path = cmd.diagnostics_out or (os.path.splitext(out)[0] + ".diagnostics.json")
    sidecar = {
        "command": {"argv": cmd.to_argv()},
        "verdict": verdict,
        "target": {"N": target.N, "P": target.P},
        "final_error": final_error,
        "peak_amplitudes": amplitudes,
        "events": [[index, kind] for index, kind in traj.events],
        "thresholds": {
            "convergence_threshold": cmd.convergence_threshold,
            "peak_ratio_band": cmd.peak_band,
            "burn_in_fraction": cmd.burn_in,
            "min_peak_run": cmd.min_peaks,
            "divergence_guard": cmd.guard,
        },
    }
    digest = _write_json(sidecar_path, sidecar)
    artifacts.append(RunArtifact(ArtifactKind.CLASSIFICATION_JSON, sidecar_path, digest))
    return artifacts


def _run_sweep(cmd: Command) -> list[RunArtifact]:
    grid = _grid_from_command(cmd)
    region_map = run_sweep_grid(grid, cmd.tol)

    lines = ["x,beta,label"]
    row_fmt = _FLOAT_FMT + "," + _FLOAT_FMT + ",%s"
    for i, x in enumerate(region_map.x_values.tolist()):
        for j, beta in enumerate(region_map.beta_values.tolist()):
            lines.append(row_fmt % (x, beta, region_map.cells[i, j].value))
    out = cmd.out or "regions.csv"
    digest = _write_atomic(out, ("\n".join(lines) + "\n").encode("utf-8"))
    artifacts = [RunArtifact(ArtifactKind.REGION_CSV, out, digest)]

    lines = ["x,beta,label"]
    for curve in region_map.boundary_curves:
        for x, beta in zip(curve.x.tolist(), curve.beta.tolist()):
            lines.append(row_fmt % (x, beta, curve.name))
    boundaries_path = cmd.boundaries_out or (os.path.splitext(out)[0] + ".boundaries.csv")
    digest = _write_atomic(boundaries_path, ("\n".join(lines) + "\n").encode("utf-8"))
    artifacts.append(RunArtifact(ArtifactKind.REGION_CSV, boundaries_path, digest))
    return artifacts


def run(cmd: Command) -> tuple[int, list[RunArtifact]]:
    """Execute a Command; returns (exit code, artifacts written)."""
    try:
        if cmd.verb in ("classify", "bounds"):
            artifacts = _run_bounds_like(cmd)
        elif cmd.verb == "simulate":
            artifacts = _run_simulate(cmd)
        elif cmd.verb == "sweep":
            artifacts = _run_sweep(cmd)
        else:
            raise UsageError(f"unknown verb: {cmd.verb!r}")
    except OverflowError:
        return EXIT_NUMERIC, []
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return EXIT_OK, artifacts


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cmd = parse(sys.argv[1:] if argv is None else argv)
        code, artifacts = run(cmd)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if code == EXIT_NUMERIC:
        print("error: numerical overflow before any artifact was written", file=sys.stderr)
        return code
    for artifact in artifacts:
        print(f"{artifact.kind.value}\t{artifact.path}\tsha256:{artifact.checksum}")
    return code


if __name__ == "__main__":
    sys.exit(main())
