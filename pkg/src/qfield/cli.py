"""Command-line front end: figure/table data files and the verify suites.

Every emitted file carries a metadata block (geometry, truncation,
quadrature order, splitter coefficients, omega) so a run can be
reproduced from its output alone. CSV numbers are printed with 17
significant digits and '\\n' line endings; repeated runs with the same
configuration are byte-identical.

Set ``QFIELD_NUM_THREADS`` to cap the BLAS/OpenMP thread pools.
"""

from __future__ import annotations

import argparse
import cmath
import json
import os
import re
import sys
from dataclasses import dataclass

import numpy as np

from . import verify as verify_mod
from .amplitudes import (
    FieldConfiguration,
    TwoPortFieldConfiguration,
    coherent_state_ratio,
    number_state_ratio,
)
from .beamsplitter import SplitterCoefficients
from .geometry import BeamGeometry
from .modespace import (
    ModeBasis,
    ModeVector,
    default_quadrature_order,
    functional_product,
    mode_vector_from_csv,
    mode_vector_from_json,
)
from .observables import (
    detection_probability_ratio,
    photon_number_correlation,
    r_closed_form,
    r_functional,
    r_surface,
    two_point_correlation,
)
from .verify import closed_form_ratio

_CONFIG_KEYS = ("w0", "k", "n_max", "quad_order", "splitter", "omega", "out", "format")
_PRESET = re.compile(r"^tem(\d)(\d)$")

_thread_limiter = None


def _apply_thread_cap() -> None:
    """Honor QFIELD_NUM_THREADS by clamping the native thread pools."""
    global _thread_limiter
    raw = os.environ.get("QFIELD_NUM_THREADS")
    if raw is None:
        return
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise ValueError(f"QFIELD_NUM_THREADS must be a positive integer, got {raw!r}")
    from threadpoolctl import threadpool_limits

    _thread_limiter = threadpool_limits(limits=n)


# ------------------------------------------------------------- config


@dataclass(frozen=True)
class RunConfig:
    """Resolved run parameters: defaults < config file < explicit flags."""

    w0: float
    k: float
    n_max: int
    quad_order: int | None
    splitter: SplitterCoefficients
    omega: float | None
    out: str | None
    format: str

    @property
    def geom(self) -> BeamGeometry:
        return BeamGeometry(w0=self.w0, k=self.k)

    @property
    def basis(self) -> ModeBasis:
        return ModeBasis(self.geom, self.n_max)

    @property
    def resolved_quad_order(self) -> int:
        if self.quad_order is not None:
            return self.quad_order
        return default_quadrature_order(self.n_max)

    @property
    def resolved_omega(self) -> float:
        return self.geom.omega if self.omega is None else self.omega


def parse_splitter(spec) -> SplitterCoefficients:
    if isinstance(spec, SplitterCoefficients):
        return spec
    if spec == "5050":
        return SplitterCoefficients.balanced()
    if isinstance(spec, str):
        parts = spec.split(",")
    else:
        parts = list(spec)
    if len(parts) != 4:
        raise ValueError(
            f"splitter must be '5050' or 'rho_re,rho_im,tau_re,tau_im', got {spec!r}"
        )
    rr, ri, tr, ti = (float(p) for p in parts)
    return SplitterCoefficients(rho=complex(rr, ri), tau=complex(tr, ti))


def resolve_config(args: argparse.Namespace) -> RunConfig:
    data: dict = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            doc = json.load(fh)
        if not isinstance(doc, dict):
            raise ValueError("config file must hold a single JSON object")
        unknown = sorted(set(doc) - set(_CONFIG_KEYS))
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        data.update(doc)
    for key in _CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            data[key] = flag
    data.setdefault("w0", 1.0)
    data.setdefault("k", 30.0)
    data.setdefault("n_max", args.n_max_default)
    data.setdefault("quad_order", getattr(args, "quad_default", None))
    data.setdefault("splitter", "5050")
    data.setdefault("omega", None)
    data.setdefault("out", None)
    data.setdefault("format", "csv")
    if data["format"] not in ("csv", "json"):
        raise ValueError(f"format must be csv or json, got {data['format']!r}")
    return RunConfig(
        w0=float(data["w0"]),
        k=float(data["k"]),
        n_max=int(data["n_max"]),
        quad_order=None if data["quad_order"] is None else int(data["quad_order"]),
        splitter=parse_splitter(data["splitter"]),
        omega=None if data["omega"] is None else float(data["omega"]),
        out=data["out"],
        format=data["format"],
    )


# ---------------------------------------------------------- mode specs


def _split_terms(spec: str) -> list[str]:
    parts, cur, depth = [], [], 0
    for ch in spec:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "+" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def _rebase(v: ModeVector, basis: ModeBasis) -> ModeVector:
    entries = {}
    for mu, c in zip(v.basis.indices(), v.coeffs):
        if c == 0:
            continue
        if mu.n > basis.n_max or mu.m > basis.n_max:
            raise ValueError(
                f"mode file uses tem{mu.n}{mu.m}, outside the requested n_max = {basis.n_max}"
            )
        entries[(mu.n, mu.m)] = c
    return basis.vector(entries)


def parse_mode_spec(spec: str, basis: ModeBasis) -> ModeVector:
    """A mode vector from a preset combination or a file.

    Accepts ``temNM`` presets with optional complex coefficients, joined
    by top-level '+' (e.g. ``0.6*tem00+0.8j*tem10``), or a path ending in
    .json/.csv holding a serialized mode vector.
    """
    spec = spec.strip()
    if spec.endswith(".json"):
        with open(spec) as fh:
            return _rebase(mode_vector_from_json(json.load(fh), basis.geom), basis)
    if spec.endswith(".csv"):
        with open(spec) as fh:
            return _rebase(mode_vector_from_csv(fh.read(), basis.geom), basis)
    entries: dict[tuple[int, int], complex] = {}
    for term in _split_terms(spec):
        coef_str, _, name = term.rpartition("*")
        try:
            coef = complex(coef_str.strip().strip("()")) if coef_str else 1.0 + 0.0j
        except ValueError:
            raise ValueError(f"bad coefficient {coef_str!r} in mode spec {spec!r}") from None
        hit = _PRESET.match(name.strip())
        if hit is None:
            raise ValueError(f"bad mode term {name!r}: expected temNM (single digits) or a file")
        n, m = int(hit.group(1)), int(hit.group(2))
        if n > basis.n_max or m > basis.n_max:
            raise ValueError(f"tem{n}{m} is outside the requested n_max = {basis.n_max}")
        entries[(n, m)] = entries.get((n, m), 0.0) + coef
    if not entries:
        raise ValueError("empty mode spec")
    return basis.vector(entries)


def _parse_point(spec: str) -> tuple[float, float, float]:
    parts = spec.split(",")
    if len(parts) != 3:
        raise ValueError(f"point must be 'x,y,z', got {spec!r}")
    x, y, z = (float(p) for p in parts)
    return (x, y, z)


# --------------------------------------------------------------- output


def _g(x) -> str:
    return "%.17g" % float(x)


def _metadata(cfg: RunConfig, **extra) -> dict:
    md = {
        "w0": cfg.w0,
        "k": cfg.k,
        "n_max": cfg.n_max,
        "quad_order": cfg.resolved_quad_order,
        "rho": cfg.splitter.rho,
        "tau": cfg.splitter.tau,
        "omega": cfg.resolved_omega,
    }
    md.update(extra)
    return md


def _md_value_text(v) -> str:
    if isinstance(v, complex):
        sign = "+" if v.imag >= 0 else "-"
        return f"{_g(v.real)}{sign}{_g(abs(v.imag))}j"
    if isinstance(v, float):
        return _g(v)
    return str(v)


def _md_value_json(v):
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


def _csv_document(md: dict, header: list[str], rows: list[list]) -> str:
    lines = [f"# {k} = {_md_value_text(v)}" for k, v in md.items()]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(str(c) if isinstance(c, (int, str)) else _g(c) for c in row))
    return "\n".join(lines) + "\n"


def _json_document(md: dict, payload: dict) -> str:
    doc = {"metadata": {k: _md_value_json(v) for k, v in md.items()}}
    doc.update(payload)
    return json.dumps(doc, indent=2) + "\n"


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        with open(cfg.out, "w", newline="\n") as fh:
            fh.write(text)


# ----------------------------------------------------------- subcommands


def cmd_fig2(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    if not cfg.splitter.is_balanced() and not args.allow_unbalanced:
        raise ValueError(
            "the closed-form reference column assumes a 50:50 splitter; "
            "pass --allow-unbalanced to proceed with these coefficients"
        )
    if args.steps < 1:
        raise ValueError("steps must be >= 1")
    grid = np.linspace(args.xi_min, args.xi_max, args.steps)
    surface = r_surface(
        grid, grid, cfg.geom, cfg.basis, cfg.splitter, quad_order=cfg.quad_order
    )
    closed = np.array([[r_closed_form(x1, x2) for x2 in grid] for x1 in grid])
    diff = np.abs(surface.values - closed)
    md = _metadata(
        cfg, command="fig2", xi_min=float(args.xi_min), xi_max=float(args.xi_max), steps=args.steps
    )
    if cfg.format == "csv":
        rows = [
            [grid[i], grid[j], surface.values[i, j], closed[i, j], diff[i, j]]
            for i in range(len(grid))
            for j in range(len(grid))
        ]
        text = _csv_document(md, ["xi1", "xi2", "R", "closed_form", "abs_difference"], rows)
    else:
        text = _json_document(
            md,
            {
                "xi1": grid.tolist(),
                "xi2": grid.tolist(),
                "R": surface.values.tolist(),
                "closed_form": closed.tolist(),
                "abs_difference": diff.tolist(),
                "max_abs_difference": float(np.max(diff)) if diff.size else 0.0,
            },
        )
    _emit(cfg, text)
    return 0


def cmd_table1(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    basis = cfg.basis
    psi = parse_mode_spec(args.psi, basis)
    phi = parse_mode_spec(args.phi, basis)
    field = FieldConfiguration(psi, omega=cfg.omega)
    A = functional_product(psi, phi)
    B = functional_product(phi, phi)
    phase = cmath.exp(-1j * field.omega * args.t)
    rows = []
    worst = 0.0
    for N in range(4):
        got = number_state_ratio(field, phi, N, args.t)
        want = closed_form_ratio(N, A, B, phase)
        err = abs(got - want)
        worst = max(worst, err / max(1.0, abs(want)))
        rows.append([N, got.real, got.imag, abs(got) ** 2, want.real, want.imag, err])
    if worst > 1e-10:
        raise ArithmeticError(
            f"number-state ratios deviate from the closed forms by {worst:.3e}"
        )
    md = _metadata(cfg, command="table1", t=float(args.t))
    header = ["N", "re_ratio", "im_ratio", "abs_ratio_sq", "re_closed", "im_closed", "abs_difference"]
    if cfg.format == "csv":
        text = _csv_document(md, header, rows)
    else:
        text = _json_document(md, {"columns": header, "rows": rows})
    _emit(cfg, text)
    return 0


def _field_from_spec(args, cfg: RunConfig, spec: str) -> FieldConfiguration:
    v = parse_mode_spec(spec, cfg.basis)
    if getattr(args, "physical", False):
        return FieldConfiguration.from_physical(v, omega=cfg.omega)
    return FieldConfiguration(v, omega=cfg.omega)


def cmd_amplitude(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    field = _field_from_spec(args, cfg, args.psi)
    phi = parse_mode_spec(args.phi, cfg.basis)
    md = _metadata(cfg, command="amplitude", t=float(args.t))
    if args.alpha is not None:
        alpha = complex(args.alpha)
        val = coherent_state_ratio(field, phi, alpha, args.t)
        header = ["alpha_re", "alpha_im", "re_ratio", "im_ratio", "abs_ratio_sq"]
        rows = [[alpha.real, alpha.imag, val.real, val.imag, abs(val) ** 2]]
    else:
        val = number_state_ratio(field, phi, args.n, args.t)
        header = ["N", "re_ratio", "im_ratio", "abs_ratio_sq"]
        rows = [[args.n, val.real, val.imag, abs(val) ** 2]]
    if cfg.format == "csv":
        text = _csv_document(md, header, rows)
    else:
        text = _json_document(md, {"columns": header, "rows": rows})
    _emit(cfg, text)
    return 0


def cmd_r_functional(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    cfg2 = TwoPortFieldConfiguration(
        _field_from_spec(args, cfg, args.psi1), _field_from_spec(args, cfg, args.psi2)
    )
    phi = parse_mode_spec(args.phi, cfg.basis)
    R = r_functional(cfg2, phi, cfg.splitter)
    md = _metadata(cfg, command="r-functional")
    if cfg.format == "csv":
        text = _csv_document(md, ["R"], [[R]])
    else:
        text = _json_document(md, {"R": R})
    _emit(cfg, text)
    return 0


def cmd_correlation(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    phi = parse_mode_spec(args.phi, cfg.basis)
    md = _metadata(cfg, command="correlation", kind=args.kind)
    if args.kind == "field":
        p1 = _parse_point(args.point1)
        p2 = _parse_point(args.point2)
        val = two_point_correlation(phi, p1, p2, cfg.splitter, omega=cfg.omega)
        header = ["x1", "y1", "z1", "x2", "y2", "z2", "correlation"]
        rows = [[*p1, *p2, val]]
        payload = {"point1": list(p1), "point2": list(p2), "correlation": val}
    else:
        phi1 = parse_mode_spec(args.phi1, cfg.basis)
        phi2 = parse_mode_spec(args.phi2, cfg.basis)
        val = photon_number_correlation(phi, phi1, phi2, cfg.splitter)
        header = ["correlation"]
        rows = [[val]]
        payload = {"correlation": val}
    if cfg.format == "csv":
        text = _csv_document(md, header, rows)
    else:
        text = _json_document(md, payload)
    _emit(cfg, text)
    return 0


def cmd_detect_prob(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    cfg2 = TwoPortFieldConfiguration(
        _field_from_spec(args, cfg, args.psi1), _field_from_spec(args, cfg, args.psi2)
    )
    phi1 = parse_mode_spec(args.phi1, cfg.basis)
    phi2 = parse_mode_spec(args.phi2, cfg.basis)
    val = detection_probability_ratio(args.n1, args.n2, cfg2, phi1, phi2, omega=cfg.omega)
    md = _metadata(cfg, command="detect-prob")
    if cfg.format == "csv":
        text = _csv_document(md, ["N1", "N2", "ratio"], [[args.n1, args.n2, val]])
    else:
        text = _json_document(md, {"N1": args.n1, "N2": args.n2, "ratio": val})
    _emit(cfg, text)
    return 0


def _run_verify(args: argparse.Namespace, suite: str) -> int:
    cfg = resolve_config(args)
    results = verify_mod.run_suite(
        suite, geom=cfg.geom, splitter=cfg.splitter, n_max=cfg.n_max
    )
    doc = verify_mod.report(suite, results)
    doc["metadata"] = {k: _md_value_json(v) for k, v in _metadata(cfg).items()}
    _emit(cfg, json.dumps(doc, indent=2) + "\n")
    return 0 if doc["pass"] else 1


def cmd_verify(args: argparse.Namespace) -> int:
    return _run_verify(args, args.suite)


def cmd_oracle_verify(args: argparse.Namespace) -> int:
    return _run_verify(args, "oracle")


# ----------------------------------------------------------------- parser


def _add_common(p: argparse.ArgumentParser, n_max: int, quad: int | None = None) -> None:
    p.add_argument("--config", help="JSON config file; explicit flags override its fields")
    p.add_argument("--out", help="output path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), help="output format (default csv)")
    p.add_argument("--n-max", dest="n_max", type=int, help=f"basis truncation (default {n_max})")
    p.add_argument("--quad-order", dest="quad_order", type=int, help="Gauss-Hermite order")
    p.add_argument("--splitter", help="'5050' or 'rho_re,rho_im,tau_re,tau_im'")
    p.add_argument("--omega", type=float, help="field frequency (default: geometry omega = k)")
    p.add_argument("--w0", type=float, help="waist radius (default 1)")
    p.add_argument("--k", type=float, help="wave number (default 30)")
    p.set_defaults(n_max_default=n_max, quad_default=quad)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qfield",
        description="Beam-mode quantum field toolkit: figure/table data and self-checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fig2", help="R surface over a displaced-mode grid, with closed form")
    p.add_argument("--xi-min", type=float, default=-3.0)
    p.add_argument("--xi-max", type=float, default=3.0)
    p.add_argument("--steps", type=int, default=41)
    p.add_argument(
        "--allow-unbalanced",
        action="store_true",
        help="acknowledge that the closed-form column is a 50:50 reference only",
    )
    _add_common(p, n_max=14, quad=48)
    p.set_defaults(func=cmd_fig2)

    p = sub.add_parser("table1", help="number-state amplitude ratios N = 0..3 vs closed forms")
    p.add_argument("--psi", required=True, help="field configuration, e.g. '0.5*tem00+0.2*tem10'")
    p.add_argument("--phi", default="tem00", help="photon mode (default tem00)")
    p.add_argument("--t", type=float, default=0.0)
    _add_common(p, n_max=4)
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("amplitude", help="one number-state or coherent amplitude ratio")
    p.add_argument("--psi", required=True)
    p.add_argument("--phi", default="tem00")
    p.add_argument("--n", type=int, default=1, help="photon count (ignored with --alpha)")
    p.add_argument("--alpha", help="coherent amplitude, e.g. '0.2+0.1j'")
    p.add_argument("--t", type=float, default=0.0)
    p.add_argument("--physical", action="store_true", help="psi is a physical field profile")
    _add_common(p, n_max=4)
    p.set_defaults(func=cmd_amplitude)

    p = sub.add_parser("r-functional", help="R for a two-port field configuration")
    p.add_argument("--psi1", required=True)
    p.add_argument("--psi2", required=True)
    p.add_argument("--phi", default="tem00")
    p.add_argument("--physical", action="store_true")
    _add_common(p, n_max=4)
    p.set_defaults(func=cmd_r_functional)

    p = sub.add_parser("correlation", help="cross-port field or photon-number correlation")
    p.add_argument("--phi", default="tem00", help="input photon mode")
    p.add_argument("--kind", choices=("field", "photon-number"), default="field")
    p.add_argument("--point1", default="0.3,0,0", help="x,y,z of the first detector")
    p.add_argument("--point2", default="0,-0.4,0", help="x,y,z of the second detector")
    p.add_argument("--phi1", default="tem00", help="port-1 counter mode (photon-number kind)")
    p.add_argument("--phi2", default="tem00", help="port-2 counter mode (photon-number kind)")
    _add_common(p, n_max=2)
    p.set_defaults(func=cmd_correlation)

    p = sub.add_parser("detect-prob", help="joint N1/N2 detection probability ratio")
    p.add_argument("--n1", type=int, required=True)
    p.add_argument("--n2", type=int, required=True)
    p.add_argument("--psi1", required=True)
    p.add_argument("--psi2", required=True)
    p.add_argument("--phi1", default="tem00")
    p.add_argument("--phi2", default="tem00")
    p.add_argument("--physical", action="store_true")
    _add_common(p, n_max=4)
    p.set_defaults(func=cmd_detect_prob)

    p = sub.add_parser("verify", help="run an invariant suite, emit a JSON report")
    p.add_argument("--suite", choices=verify_mod.SUITE_NAMES, default="all")
    _add_common(p, n_max=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="dense Fock-space oracle utilities")
    osub = p.add_subparsers(dest="oracle_command", required=True)
    ov = osub.add_parser("verify", help="run the oracle suite only")
    _add_common(ov, n_max=1)
    ov.set_defaults(func=cmd_oracle_verify)

    return parser


def main(argv=None) -> int:
    try:
        _apply_thread_cap()
        args = _build_parser().parse_args(argv)
        return args.func(args)
    except (ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
