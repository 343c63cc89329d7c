"""Command-line interface: simulate, verify, search-com, project.

All commands exchange data through plain files: a single JSON config in,
CSV/JSON artifacts out. Every output file starts with a header block
carrying the tool version, a hash of the effective configuration, and
the seed, so results can be traced back to their inputs. Floats are
serialized with 17 significant digits, which round-trips binary64
exactly.

Exit codes: 0 success, 2 validation problem, 3 singularity,
4 I/O failure. Failures also emit a machine-readable JSON error object
on stderr.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .com_analysis import search_com
from .dynamics import conserved_quantities
from .errors import (
    ProjectionSingularityError,
    SingularityError,
    StepRejectionError,
    ValidationError,
)
from .families import (
    PolygonPairParams,
    RESIDUAL_TOLERANCE,
    _eulerian_raw,
    _lagrangian_raw,
    complementary_polygon_pair,
    complementary_six_body,
    eulerian_beta_squared,
    eulerian_hyperbolic,
    lagrangian_elliptic,
    lagrangian_omega_squared,
    residual_profile,
)
from .geometry import SPHERE, ManifoldPoint, hopf, stereographic
from .integrators import IntegratorConfig, TrajectoryRecord, integrate

TRAJECTORY_COLUMNS = "t,body_index,w,x,y,z,vw,vx,vy,vz"

# Published configuration schema (documented in the README). "simulate"
# and "search-com" read these top-level keys; the family record is
# shared by both and by "verify".
CONFIG_KEYS = {
    "simulate": {
        "required": ["family", "t_end", "sampling", "outputs"],
        "optional": ["integrator", "seed", "stereographic_pole"],
    },
    "search-com": {
        "required": ["family", "outputs"],
        "optional": ["n_samples", "window", "tol", "seed", "mode", "samples_per_window"],
    },
}
FAMILY_FIELDS = {
    "lagrangian": {"required": ["m", "r"], "optional": ["y", "z", "sign", "omega"]},
    "eulerian": {"required": ["m", "eta"], "optional": ["sign", "beta"]},
    "six_body": {"required": ["m", "alpha", "beta"], "optional": []},
    "polygon_pair": {
        "required": ["n", "m", "mass", "alpha", "beta"],
        "optional": ["phase_a", "phase_b"],
    },
}
OUTPUT_KINDS = (
    "trajectory_csv",
    "conservation_json",
    "hopf_csv",
    "stereographic_csv",
    "com_report_json",
)


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def config_hash(config: dict) -> str:
    canon = json.dumps(config, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _emit_error(kind: str, message: str, fields=None, code: int = 2) -> int:
    payload = {"error": {"type": kind, "message": message}}
    if fields:
        payload["error"]["fields"] = fields
    print(json.dumps(payload), file=sys.stderr)
    return code


# ---------------------------------------------------------------------------
# Family construction from config records.


def _check_fields(record: dict, spec: dict, prefix: str) -> list:
    problems = []
    for key in spec["required"]:
        if key not in record:
            problems.append({"field": f"{prefix}{key}", "message": "missing required field"})
    known = set(spec["required"]) | set(spec["optional"]) | {"kind"}
    for key in record:
        if key not in known:
            problems.append({"field": f"{prefix}{key}", "message": "unknown field"})
    return problems


def build_family(record: dict, allow_override: bool = False):
    """Build an OrbitFamily from a config record.

    Returns (family, override_used). With ``allow_override`` a
    "lagrangian" record may carry an explicit ``omega`` (and "eulerian"
    a ``beta``) that bypasses the closed-form frequency; the family is
    then built WITHOUT construction-time validation so its residual can
    be measured and reported.
    """
    if not isinstance(record, dict):
        raise ValidationError("family record must be a JSON object", field="family")
    kind = record.get("kind")
    if kind not in FAMILY_FIELDS:
        raise ValidationError(
            f"unknown family kind {kind!r}; expected one of {sorted(FAMILY_FIELDS)}",
            field="family.kind",
        )
    problems = _check_fields(record, FAMILY_FIELDS[kind], "family.")
    if problems:
        raise ValidationError(
            "; ".join(f"{p['field']}: {p['message']}" for p in problems),
            field=problems[0]["field"],
        )

    if kind == "lagrangian":
        m, r = float(record["m"]), float(record["r"])
        z = float(record.get("z", 0.0))
        default_y2 = 1.0 - r * r - z * z
        y = float(record.get("y", np.sqrt(max(default_y2, 0.0))))
        sign = int(record.get("sign", 1))
        if "omega" in record:
            if not allow_override:
                raise ValidationError(
                    "explicit omega is only accepted by `verify` (residual probe)",
                    field="family.omega",
                )
            return _lagrangian_raw(m, r, y, z, float(record["omega"])), True
        return lagrangian_elliptic(m, r, y, z, sign), False
    if kind == "eulerian":
        m, eta = float(record["m"]), float(record["eta"])
        sign = int(record.get("sign", 1))
        if "beta" in record:
            if not allow_override:
                raise ValidationError(
                    "explicit beta is only accepted by `verify` (residual probe)",
                    field="family.beta",
                )
            return _eulerian_raw(m, eta, float(record["beta"]), beta_variant="override"), True
        return eulerian_hyperbolic(m, eta, sign), False
    if kind == "six_body":
        return complementary_six_body(
            float(record["m"]), float(record["alpha"]), float(record["beta"])
        ), False
    params = PolygonPairParams(
        n=int(record["n"]),
        m=int(record["m"]),
        mass=float(record["mass"]),
        alpha=float(record["alpha"]),
        beta=float(record["beta"]),
        phase_a=float(record.get("phase_a", 0.0)),
        phase_b=float(record.get("phase_b", 0.0)),
    )
    return complementary_polygon_pair(params), False


# ---------------------------------------------------------------------------
# File writers and readers.


def _header_lines(meta: dict) -> list[str]:
    return [
        f"# curvednbody {meta.get('version', __version__)}",
        f"# config_hash: {meta.get('config_hash', 'none')}",
        f"# seed: {meta.get('seed', 0)}",
    ]


def write_trajectory_csv(path, record: TrajectoryRecord, meta: dict) -> None:
    state0 = record.states[0]
    lines = _header_lines(meta)
    lines.append(f"# sigma: {state0.sigma}")
    lines.append("# masses: " + ",".join(fmt(m) for m in state0.masses))
    lines.append(TRAJECTORY_COLUMNS)
    for t, state in zip(record.times, record.states):
        for i in range(state.n_bodies):
            row = [fmt(t), str(i)]
            row.extend(fmt(v) for v in state.positions[i])
            row.extend(fmt(v) for v in state.velocities[i])
            lines.append(",".join(row))
    Path(path).write_text("\n".join(lines) + "\n")


def read_trajectory_csv(path) -> dict:
    """Parse a trajectory CSV back into arrays (bit-exact round trip)."""
    text = Path(path).read_text()
    sigma, masses = SPHERE, None
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("sigma:"):
                sigma = int(body.split(":", 1)[1])
            elif body.startswith("masses:"):
                masses = np.array([float(x) for x in body.split(":", 1)[1].split(",")])
            continue
        if line.startswith("t,"):
            continue
        rows.append([float(x) for x in line.split(",")])
    if not rows:
        raise ValidationError(f"trajectory file {path} contains no data rows")
    data = np.array(rows)
    n_bodies = int(np.max(data[:, 1])) + 1
    if len(data) % n_bodies != 0:
        raise ValidationError(f"trajectory file {path} has incomplete body blocks")
    n_samples = len(data) // n_bodies
    times = data[::n_bodies, 0]
    positions = data[:, 2:6].reshape(n_samples, n_bodies, 4)
    velocities = data[:, 6:10].reshape(n_samples, n_bodies, 4)
    if masses is None:
        masses = np.ones(n_bodies)
    return {
        "times": times,
        "positions": positions,
        "velocities": velocities,
        "masses": masses,
        "sigma": sigma,
        "n_bodies": n_bodies,
    }


def write_conservation_json(path, record: TrajectoryRecord, meta: dict) -> None:
    payload = {
        "header": dict(meta),
        "times": [float(t) for t in record.times],
        "energy": [c.energy for c in record.conserved],
        "angular_momentum": [[float(x) for x in c.angular_momentum] for c in record.conserved],
        "constraint_drift": [float(d) for d in record.constraint_drift],
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def _write_projection_csv(path, times, bodies, projector, meta: dict, label: str) -> None:
    lines = _header_lines(meta)
    lines.append(f"t,body_index,{label}1,{label}2,{label}3")
    bad_rows = []
    row_no = len(lines) + 1
    for k, t in enumerate(times):
        for i in range(bodies.shape[1]):
            try:
                p3 = projector(ManifoldPoint(bodies[k, i], SPHERE))
            except ProjectionSingularityError:
                bad_rows.append(row_no)
                row_no += 1
                continue
            lines.append(",".join([fmt(t), str(i)] + [fmt(v) for v in p3]))
            row_no += 1
    if bad_rows:
        raise ProjectionSingularityError(
            f"projection hit its pole on rows {bad_rows[:20]}"
            + (" (truncated)" if len(bad_rows) > 20 else ""),
            rows=bad_rows,
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_gnuplot_script(path, csv_path, n_bodies: int, meta: dict, title: str) -> None:
    lines = _header_lines(meta)
    lines.append("set datafile separator ','")
    lines.append(f"set title '{title}'")
    terms = []
    for b in range(n_bodies):
        terms.append(
            f"  '{csv_path}' using ($2=={b}?$3:1/0):($2=={b}?$4:1/0):($2=={b}?$5:1/0) "
            f"with points title 'body {b}'"
        )
    lines.append("splot \\")
    lines.append(", \\\n".join(terms))
    lines.append("pause -1")
    Path(path).write_text("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# Commands.


def _load_config(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config is not valid JSON: {exc}")


def _validate_config(config: dict, command: str) -> None:
    spec = CONFIG_KEYS[command]
    problems = []
    for key in spec["required"]:
        if key not in config:
            problems.append({"field": key, "message": "missing required field"})
    known = set(spec["required"]) | set(spec["optional"])
    for key in config:
        if key not in known:
            problems.append({"field": key, "message": "unknown field"})
    outputs = config.get("outputs", {})
    if not isinstance(outputs, dict):
        problems.append({"field": "outputs", "message": "must be an object of kind -> path"})
    else:
        for key in outputs:
            if key not in OUTPUT_KINDS:
                problems.append(
                    {"field": f"outputs.{key}", "message": f"unknown output kind; expected {OUTPUT_KINDS}"}
                )
    if isinstance(config.get("family"), dict):
        kind = config["family"].get("kind")
        if kind in FAMILY_FIELDS:
            problems.extend(_check_fields(config["family"], FAMILY_FIELDS[kind], "family."))
        else:
            problems.append({"field": "family.kind", "message": "missing or unknown family kind"})
    elif "family" in config:
        problems.append({"field": "family", "message": "must be an object"})
    if problems:
        raise ValidationError(
            "config validation failed: "
            + "; ".join(f"{p['field']}: {p['message']}" for p in problems),
            field=[p["field"] for p in problems],
        )


def _resolve_outputs(config: dict, out_dir) -> dict:
    base = Path(out_dir) if out_dir else Path(".")
    base.mkdir(parents=True, exist_ok=True)
    paths = {}
    for kind, rel in config.get("outputs", {}).items():
        p = base / rel
        p.parent.mkdir(parents=True, exist_ok=True)
        paths[kind] = p
    return paths


def cmd_simulate(args) -> int:
    config = _load_config(args.config)
    _validate_config(config, "simulate")
    family, _ = build_family(config["family"])
    integ = config.get("integrator", {})
    int_config = IntegratorConfig(
        method=integ.get("method", "rk4"),
        step=float(integ.get("step", 1e-3)),
        projection_tolerance=float(integ.get("projection_tolerance", 1e-12)),
        max_constraint_drift=float(integ.get("max_constraint_drift", 1e-6)),
    )
    seed = int(args.seed if args.seed is not None else config.get("seed", 0))
    meta = {"version": __version__, "config_hash": config_hash(config), "seed": seed}
    outputs = _resolve_outputs(config, args.out_dir)

    record = integrate(
        family.state_at(0.0), float(config["t_end"]), int_config, float(config["sampling"])
    )

    if "trajectory_csv" in outputs:
        write_trajectory_csv(outputs["trajectory_csv"], record, meta)
    if "conservation_json" in outputs:
        write_conservation_json(outputs["conservation_json"], record, meta)
    positions = np.array([s.positions for s in record.states])
    if "hopf_csv" in outputs:
        _write_projection_csv(outputs["hopf_csv"], record.times, positions, hopf, meta, "h")
    if "stereographic_csv" in outputs:
        pole = ManifoldPoint(
            np.array(config.get("stereographic_pole", [0.0, 0.0, 0.0, 1.0]), dtype=float), SPHERE
        )
        _write_projection_csv(
            outputs["stereographic_csv"],
            record.times,
            positions,
            lambda p: stereographic(p, pole),
            meta,
            "s",
        )
    print(
        json.dumps(
            {
                "status": "ok",
                "samples": len(record.times),
                "t_end": float(record.times[-1]),
                "energy_drift": float(np.max(np.abs(record.energies() - record.energies()[0]))),
                "outputs": {k: str(v) for k, v in outputs.items()},
            }
        )
    )
    return 0


def _parse_family_spec(args) -> dict:
    if args.config:
        config = _load_config(args.config)
        return config.get("family", config)
    if not args.kind:
        raise ValidationError("verify needs a family kind or --config", field="kind")
    record = {"kind": args.kind}
    for token in args.params:
        if "=" not in token:
            raise ValidationError(f"expected key=value, got {token!r}", field=token)
        key, value = token.split("=", 1)
        if key in ("n", "m") and record["kind"] == "polygon_pair":
            record[key] = int(value)
        elif key == "sign":
            record[key] = int(value)
        else:
            record[key] = float(value)
    return record


def cmd_verify(args) -> int:
    record = _parse_family_spec(args)
    family, overridden = build_family(record, allow_override=True)
    times = np.linspace(0.0, 1.0, 11)
    residuals = residual_profile(family, times)
    worst = float(np.max(residuals))
    state0 = family.state_at(0.0)
    cons = conserved_quantities(state0)

    print(f"family: {family.kind.value}")
    p = family.params
    for key in p.__dataclass_fields__:
        value = getattr(p, key)
        if isinstance(value, float):
            print(f"  {key} = {fmt(value)}")
        else:
            print(f"  {key} = {value}")
    if family.kind.value == "lagrangian" and not overridden:
        print(f"  omega^2 = {fmt(lagrangian_omega_squared(p.m, p.r))}")
    if family.kind.value == "eulerian" and not overridden:
        print(f"  beta^2 = {fmt(eulerian_beta_squared(p.eta, p.m))}")
    print(f"max residual over t in [0, 1]: {worst:.3e} (tolerance {RESIDUAL_TOLERANCE:g})")
    print(f"energy h = {fmt(cons.energy)}")
    print(
        "angular momentum (c_wx, c_wy, c_wz, c_xy, c_xz, c_yz) = ("
        + ", ".join(fmt(x) for x in cons.angular_momentum)
        + ")"
    )
    ok = worst <= RESIDUAL_TOLERANCE
    print("PASS" if ok else "FAIL")
    return 0 if ok else 2


def cmd_search_com(args) -> int:
    config = _load_config(args.config)
    _validate_config(config, "search-com")
    family, _ = build_family(config["family"])
    seed = int(args.seed if args.seed is not None else config.get("seed", 0))
    tol = float(args.tolerance if args.tolerance is not None else config.get("tol", 1e-6))
    meta = {"version": __version__, "config_hash": config_hash(config), "seed": seed}

    import warnings as _warnings

    with _warnings.catch_warnings(record=True) as caught:
        _warnings.simplefilter("always")
        report = search_com(
            family,
            n_samples=int(config.get("n_samples", 10000)),
            window=float(config.get("window", 50.0)),
            tol=tol,
            seed=seed,
            samples_per_window=int(config.get("samples_per_window", 512)),
            mode=config.get("mode"),
        )
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)

    outputs = _resolve_outputs(config, args.out_dir)
    payload = {"header": dict(meta), **report.to_dict()}
    if "com_report_json" in outputs:
        Path(outputs["com_report_json"]).write_text(json.dumps(payload, indent=2) + "\n")
    print(
        json.dumps(
            {
                "status": "ok",
                "mode": report.mode,
                "counts": report.counts,
                "survivors": len(report.survivors),
                "resonance_warning": report.resonance_warning is not None,
            }
        )
    )
    if report.mode == "action":
        return 0 if not report.survivors else 1
    return 0 if report.survivors else 1


def cmd_project(args) -> int:
    data = read_trajectory_csv(args.trajectory)
    if data["sigma"] != SPHERE:
        raise ValidationError("projection commands need an S3 trajectory (sigma = +1)")
    meta = {
        "version": __version__,
        "config_hash": config_hash(
            {"mode": args.mode, "input": str(args.trajectory), "pole": args.pole}
        ),
        "seed": args.seed if args.seed is not None else 0,
    }
    out_dir = Path(args.out_dir) if args.out_dir else Path(".")
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.trajectory).stem
    csv_path = out_dir / f"{stem}_{args.mode}.csv"
    gp_path = out_dir / f"{stem}_{args.mode}.gp"

    if args.mode == "hopf":
        projector = hopf
    else:
        pole_coords = (
            np.array([float(x) for x in args.pole.split(",")])
            if args.pole
            else np.array([0.0, 0.0, 0.0, 1.0])
        )
        pole = ManifoldPoint(pole_coords, SPHERE)
        projector = lambda p: stereographic(p, pole)  # noqa: E731

    _write_projection_csv(
        csv_path, data["times"], data["positions"], projector, meta, args.mode[0]
    )
    write_gnuplot_script(gp_path, csv_path.name, data["n_bodies"], meta, f"{args.mode} projection")
    print(json.dumps({"status": "ok", "csv": str(csv_path), "gnuplot": str(gp_path)}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curvednbody",
        description="simulate and verify N-body motion on the 3-sphere and hyperbolic 3-space",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out-dir", default=None, help="directory for output files")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument(
            "--tolerance", type=float, default=None, help="override the search tolerance"
        )

    p_sim = sub.add_parser("simulate", help="integrate a family and write trajectory artifacts")
    p_sim.add_argument("--config", required=True)
    common(p_sim)
    p_sim.set_defaults(func=cmd_simulate)

    p_ver = sub.add_parser("verify", help="residual-check a closed-form family")
    p_ver.add_argument("kind", nargs="?", help="family kind (lagrangian, eulerian, six_body, polygon_pair)")
    p_ver.add_argument("params", nargs="*", help="key=value family parameters")
    p_ver.add_argument("--config", default=None)
    common(p_ver)
    p_ver.set_defaults(func=cmd_verify)

    p_com = sub.add_parser("search-com", help="search for centre-of-mass-like points")
    p_com.add_argument("--config", required=True)
    common(p_com)
    p_com.set_defaults(func=cmd_search_com)

    p_proj = sub.add_parser("project", help="project a trajectory CSV (hopf or stereographic)")
    p_proj.add_argument("trajectory", help="trajectory CSV produced by simulate")
    p_proj.add_argument("--mode", choices=("hopf", "stereographic"), required=True)
    p_proj.add_argument("--pole", default=None, help="stereographic pole as 'w,x,y,z'")
    common(p_proj)
    p_proj.set_defaults(func=cmd_project)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SingularityError as exc:
        message = f"{exc} [kind={exc.kind}, pair={exc.pair}, time={exc.time}]"
        return _emit_error("singularity", message, code=3)
    except ProjectionSingularityError as exc:
        return _emit_error("projection-singularity", str(exc), code=3)
    except StepRejectionError as exc:
        return _emit_error("step-rejection", str(exc), code=2)
    except ValidationError as exc:
        fields = exc.field if isinstance(exc.field, list) else ([exc.field] if exc.field else None)
        return _emit_error("validation", str(exc), fields=fields, code=2)
    except OSError as exc:
        return _emit_error("io", str(exc), code=4)


if __name__ == "__main__":
    sys.exit(main())
