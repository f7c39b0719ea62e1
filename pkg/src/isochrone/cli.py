"""Command-line surface: analyze, portrait, paper-verify.

Spec files are TOML or JSON with exactly one of:

    Q + a       the factored family (Q term triples or canonical text; a as
                rational strings)
    H           a raw polynomial with H(0,0) = 0
    thm2        {p, c, h} for the generalized construction

plus an optional [settings] table (integration_rtol, root_tol,
boundary_grid, ceiling, commutant_degree, trajectories, seed).  Reports are
deterministic JSON (report_version 1); portraits are self-contained SVG 1.1
or RFC-4180 CSV.  The ISOCHRONE_SEED environment variable overrides the
portrait sampling seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from . import centerlab, claims, commutant, trig
from .errors import IsochroneError, NotACenterError, SpecParseError
from .polyalg import BivarPoly, poly_from_text, poly_from_triples, poly_to_text
from .system import (
    FactoredSystem,
    UniformSystem,
    build_eq2,
    build_thm2,
    darboux_report,
    vector_field,
)

TWO_PI = 2.0 * math.pi

REPORT_VERSION = 1

SVG_COLORS = {
    "trajectory": "#1f77b4",
    "boundary": "#d62728",
    "circle": "#2ca02c",
    "ray": "#9467bd",
    "axes": "#bbbbbb",
}


@dataclass
class Settings:
    integration_rtol: float = 1e-10
    root_tol: float = 1e-12
    boundary_grid: int = 720
    ceiling: float = 1e6
    commutant_degree: Optional[int] = None
    trajectories: int = 12
    seed: int = 0


@dataclass
class SystemSpec:
    """Parsed system specification: exactly one construction form."""

    kind: str  # "eq2" | "h" | "thm2"
    factored: Optional[FactoredSystem] = None
    uniform: Optional[UniformSystem] = None
    settings: Settings = field(default_factory=Settings)
    echo: dict = field(default_factory=dict)

    @property
    def H(self) -> BivarPoly:
        return self.factored.H if self.factored is not None else self.uniform.H


def _parse_poly(value) -> BivarPoly:
    try:
        if isinstance(value, str):
            return poly_from_text(value)
        return poly_from_triples(value)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise SpecParseError(f"bad polynomial value {value!r}: {exc}") from None


def parse_spec_data(data: dict) -> SystemSpec:
    forms = [key for key in ("Q", "H", "thm2") if key in data]
    if len(forms) != 1:
        raise SpecParseError(
            f"exactly one of Q/H/thm2 must be present, found {forms or 'none'}"
        )
    settings = Settings()
    for key, val in (data.get("settings") or {}).items():
        if not hasattr(settings, key):
            raise SpecParseError(f"unknown setting {key!r}")
        cur = getattr(settings, key)
        setattr(settings, key, type(cur)(val) if cur is not None else int(val))
    try:
        if "Q" in data:
            if "a" not in data:
                raise SpecParseError("factored form requires the radial list 'a'")
            Q = _parse_poly(data["Q"])
            a = [Fraction(str(v)) for v in data["a"]]
            sys_ = build_eq2(Q, a)
            echo = {"form": "eq2", "Q": poly_to_text(Q), "a": [str(c) for c in a],
                    "H": poly_to_text(sys_.H)}
            return SystemSpec("eq2", factored=sys_, settings=settings, echo=echo)
        if "H" in data:
            H = _parse_poly(data["H"])
            uni = UniformSystem(H)
            return SystemSpec(
                "h", uniform=uni, settings=settings,
                echo={"form": "h", "H": poly_to_text(H)},
            )
        sub = data["thm2"]
        p = _parse_poly(sub["p"])
        c = Fraction(str(sub.get("c", "1")))
        h = _parse_poly(sub["h"])
        uni = build_thm2(p, c, h)
        echo = {"form": "thm2", "p": poly_to_text(p), "c": str(c),
                "h": poly_to_text(h), "H": poly_to_text(uni.H)}
        return SystemSpec("thm2", uniform=uni, settings=settings, echo=echo)
    except SpecParseError:
        raise
    except (IsochroneError, ValueError, KeyError, TypeError) as exc:
        raise SpecParseError(f"invalid system specification: {exc}") from None


def load_spec(path: str) -> SystemSpec:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise SpecParseError(f"cannot read {path}: {exc}") from None
    if path.endswith(".json"):
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise SpecParseError(f"{path}: JSON parse error: {exc}") from None
    else:
        try:
            import tomllib as toml  # Python >= 3.11
        except ImportError:
            import tomli as toml
        try:
            data = toml.loads(raw.decode("utf-8"))
        except toml.TOMLDecodeError as exc:
            raise SpecParseError(f"{path}: TOML parse error: {exc}") from None
    return parse_spec_data(data)


# -- analyze -----------------------------------------------------------------


def analyze(spec: SystemSpec) -> Tuple[dict, int]:
    """Full analysis report and process exit code (0 ok, 2 center test failed)."""
    st = spec.settings
    report: dict = {"report_version": REPORT_VERSION, "system": spec.echo,
                    "settings": {"integration_rtol": st.integration_rtol,
                                 "root_tol": st.root_tol,
                                 "boundary_grid": st.boundary_grid,
                                 "ceiling": st.ceiling}}
    exit_code = 0
    H = spec.H
    sys_for_ode = spec.factored if spec.kind == "eq2" else spec.uniform

    report["isochronous_deviation"] = {
        "value": centerlab.isochronicity_check(sys_for_ode, samples=6, tol=st.integration_rtol),
        "tolerance": st.integration_rtol,
    }

    if spec.kind == "eq2":
        s = spec.factored
        center = centerlab.is_center(s)
        report["is_center"] = center
        report["center_method"] = "mean-condition"
        report["darboux"] = darboux_report(s).to_json()
        if center:
            rep = centerlab.classify(s, boundary_grid=st.boundary_grid,
                                     root_tol=st.root_tol)
            report["center"] = rep.to_json()
            report["conserved_drift"] = _conserved_drift(s, st)
        else:
            report["center"] = None
            report["conserved_drift"] = None
            exit_code = 2
        if s.degenerate:
            # the pure rotation is symmetric about every line
            axes, reversible = None, True
        else:
            axes = _reversibility_axes_eq2(s)
            reversible = bool(axes)
    else:
        report["is_center"] = True if spec.kind == "thm2" else None
        report["center_method"] = "construction" if spec.kind == "thm2" else "unknown"
        report["center"] = None
        report["darboux"] = None
        report["conserved_drift"] = None
        if H.is_zero:
            axes, reversible = None, True
        else:
            axes = trig.symmetry_axes_of_polynomial(H)
            reversible = bool(axes)

    report["reversibility"] = {"axes": axes, "reversible": reversible}

    if H.is_zero:
        report["commutant"] = None
        report["form7"] = None
        report["form8"] = None
        report["counterexample"] = False
        return report, exit_code

    degs = commutant.admissible_top_degrees(UniformSystem(H))
    n_max = st.commutant_degree or max(degs)
    basis = commutant.commutant_nullspace(vector_field(UniformSystem(H)), n_max)
    report["commutant"] = {"admissible_top_degrees": sorted(degs), **basis.to_json()}
    f7 = commutant.check_form7(H)
    f8 = commutant.check_form8(H)
    report["form7"] = f7.to_json()
    report["form8"] = f8.to_json()
    report["counterexample"] = bool(
        report.get("is_center")
        and basis.dimension == 1
        and basis.contains_self
        and not f7.matches
        and not f8.matches
        and axes == []
    )
    return report, exit_code


def _reversibility_axes_eq2(s: FactoredSystem) -> List[float]:
    t = trig.restrict_to_circle(s.Q, homogeneous_required=True)
    if t.is_zero or t.is_constant:
        return []
    return trig.symmetry_axes(t)


def _conserved_drift(s: FactoredSystem, st: Settings) -> Optional[dict]:
    if s.degenerate:
        return None
    phi = centerlab.conserved_quantity(s)
    worst = 0.0
    # tight tolerance: the conserved quantity's radial derivative amplifies
    # absolute trajectory error near the origin
    for rho0 in (0.08, 0.15, 0.25):
        try:
            _, xs, ys = centerlab.cartesian_trajectory(
                s, rho0, 0.0, t1=TWO_PI, n_samples=121, tol=1e-12, atol=1e-14
            )
            vals = [phi(x, y) for x, y in zip(xs, ys)]
        except IsochroneError:
            continue
        worst = max(worst, max(vals) - min(vals))
    return {"value": worst, "tolerance": 1e-7}


def cmd_analyze(args) -> int:
    try:
        spec = load_spec(args.spec_file)
    except SpecParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        report, code = analyze(spec)
    except NotACenterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


# -- portrait ----------------------------------------------------------------


def _portrait_data(spec: SystemSpec, n_traj: int, rho_max: Optional[float], seed: int):
    """Trajectories, boundary polyline pieces, circles and rays for a portrait."""
    st = spec.settings
    boundary: List[Tuple[float, float]] = []
    circles: List[float] = []
    rays: List[float] = []
    if spec.kind == "eq2" and centerlab.is_center(spec.factored) and not spec.factored.degenerate:
        rep = centerlab.classify(spec.factored, boundary_grid=max(st.boundary_grid, 180))
        boundary = rep.boundary_samples
        circles = rep.invariant_circles
        rays = rep.asymptote_directions
    finite_rb = [r for _, r in boundary]
    if rho_max is not None:
        lim = rho_max
    elif finite_rb:
        lim = min(3.0 * min(finite_rb), max(finite_rb))
    else:
        lim = 2.0
    rng = np.random.default_rng(seed)
    if finite_rb:
        radii = np.sort(rng.uniform(0.15, 0.92, n_traj)) * min(finite_rb)
    else:
        radii = np.sort(rng.uniform(0.1, 0.9, n_traj)) * lim
    trajectories = []
    for rho0 in radii:
        thetas, rhos, escaped, _ = centerlab.polar_trajectory(
            spec.factored if spec.kind == "eq2" else spec.uniform,
            float(rho0), 0.0, TWO_PI, n_samples=481,
            tol=max(st.integration_rtol, 1e-9), ceiling=st.ceiling,
        )
        trajectories.append((thetas, rhos, escaped))
    return trajectories, boundary, circles, rays, lim


def _svg_portrait(trajectories, boundary, circles, rays, lim: float) -> str:
    size = 640.0
    scale = size / (2.0 * lim)

    def pt(theta: float, rho: float) -> str:
        x = size / 2 + rho * math.cos(theta) * scale
        y = size / 2 - rho * math.sin(theta) * scale
        return f"{x:.2f},{y:.2f}"

    out = io.StringIO()
    out.write(
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{size:.0f}" height="{size:.0f}" viewBox="0 0 {size:.0f} {size:.0f}">\n'
    )
    out.write(f'<rect width="{size:.0f}" height="{size:.0f}" fill="white"/>\n')
    c = SVG_COLORS
    out.write(
        f'<line x1="0" y1="{size/2:.1f}" x2="{size:.0f}" y2="{size/2:.1f}" '
        f'stroke="{c["axes"]}" stroke-width="1"/>\n'
        f'<line x1="{size/2:.1f}" y1="0" x2="{size/2:.1f}" y2="{size:.0f}" '
        f'stroke="{c["axes"]}" stroke-width="1"/>\n'
    )
    for rho in circles:
        out.write(
            f'<circle cx="{size/2:.1f}" cy="{size/2:.1f}" r="{rho * scale:.2f}" '
            f'fill="none" stroke="{c["circle"]}" stroke-width="1.5"/>\n'
        )
    for theta in rays:
        out.write(
            f'<line x1="{size/2:.1f}" y1="{size/2:.1f}" '
            f'x2="{size/2 + 2 * lim * math.cos(theta) * scale:.2f}" '
            f'y2="{size/2 - 2 * lim * math.sin(theta) * scale:.2f}" '
            f'stroke="{c["ray"]}" stroke-width="1" stroke-dasharray="2,3"/>\n'
        )
    # boundary: split into contiguous pieces at grid gaps (asymptote windows)
    if boundary:
        gaps = [
            idx + 1
            for idx, ((t0, _), (t1, _)) in enumerate(zip(boundary, boundary[1:]))
            if t1 - t0 > 3.0 * TWO_PI / max(len(boundary), 1)
        ]
        pieces = []
        start = 0
        for g in gaps:
            pieces.append(boundary[start:g])
            start = g
        pieces.append(boundary[start:])
        for piece in pieces:
            pts = " ".join(pt(t, min(r, 4 * lim)) for t, r in piece)
            if pts:
                out.write(
                    f'<polyline points="{pts}" fill="none" stroke="{c["boundary"]}" '
                    f'stroke-width="1.5" stroke-dasharray="6,4"/>\n'
                )
    for thetas, rhos, _ in trajectories:
        pts = " ".join(pt(t, r) for t, r in zip(thetas, rhos) if r <= 4 * lim)
        if pts:
            out.write(
                f'<polyline points="{pts}" fill="none" stroke="{c["trajectory"]}" '
                'stroke-width="1"/>\n'
            )
    out.write("</svg>\n")
    return out.getvalue()


def cmd_portrait(args) -> int:
    try:
        spec = load_spec(args.spec_file)
    except SpecParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    env_seed = os.environ.get("ISOCHRONE_SEED")
    if env_seed is not None:
        seed = int(env_seed)
    elif args.seed is not None:
        seed = args.seed
    else:
        seed = spec.settings.seed
    trajectories, boundary, circles, rays, lim = _portrait_data(
        spec, args.trajectories, args.range, seed
    )
    if args.format == "svg":
        text = _svg_portrait(trajectories, boundary, circles, rays, lim)
        out = args.out or "portrait.svg"
        with open(out, "w") as fh:
            fh.write(text)
    else:
        out = args.out or "portrait.csv"
        with open(out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["trajectory", "theta", "rho"])
            for idx, (thetas, rhos, _) in enumerate(trajectories):
                for t, r in zip(thetas, rhos):
                    w.writerow([idx, f"{t:.12g}", f"{r:.12g}"])
    print(out)
    return 0


# -- paper-verify ------------------------------------------------------------


def cmd_paper_verify(args) -> int:
    results = claims.run_claims()
    all_passed = all(r.passed for r in results)
    if args.json:
        print(json.dumps(
            {"all_passed": all_passed, "claims": [r.to_json() for r in results]},
            indent=2, sort_keys=True,
        ))
    else:
        width = max(len(r.name) for r in results)
        for r in results:
            mark = "PASS" if r.passed else "FAIL"
            print(f"{r.name:<{width}}  {mark}  {r.detail}")
        print(f"\n{'all claims verified' if all_passed else 'SOME CLAIMS FAILED'}")
    return 0 if all_passed else 1


# -- entry point ---------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    # usage errors are config errors (exit 1); exit 2 is reserved for
    # analysis preconditions
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(
        prog="isochrone",
        description="Analysis of uniformly isochronous planar polynomial systems",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="full JSON analysis of a system spec")
    a.add_argument("spec_file")
    a.add_argument("--out", help="write the JSON report here instead of stdout")
    a.set_defaults(func=cmd_analyze)

    p = sub.add_parser("portrait", help="render a phase portrait (SVG or CSV)")
    p.add_argument("spec_file")
    p.add_argument("--format", choices=("svg", "csv"), default="svg")
    p.add_argument("--out", help="output path (default portrait.<format>)")
    p.add_argument("--trajectories", type=int, default=12)
    p.add_argument("--range", type=float, default=None, help="view radius rho_max")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_portrait)

    v = sub.add_parser(
        "paper-verify",
        help="re-verify every published claim about the bundled counterexample",
    )
    v.add_argument("--json", action="store_true", help="machine-readable results")
    v.set_defaults(func=cmd_paper_verify)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
