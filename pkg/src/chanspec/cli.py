"""Command-line front end. Every command writes plain data files into --out."""
from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io
from .errors import ChanspecError, SpecError, VerificationError
from .graph import GraphSpec, assemble, decompose, parse_spec
from .limitset import (
    AnalyticFamily,
    TraceConfig,
    analytic_circles,
    density_integral,
    family_from_subsets,
    trace_limit_set,
)
from .pencil import (
    BRUTE_CAP,
    brute_char_poly,
    counting_bound,
    cycle_cover_support,
    family_of,
    identity_check,
    subset_label,
)
from .presets import get_preset
from .spectra import (
    SpectrumConfig,
    eigenvalues,
    eigenvector,
    localization_report,
    resolvent_grid,
    sector_statistics,
    spectrum_of_family,
    tube_count,
)

log = logging.getLogger("chanspec")

COMMANDS = ("decompose", "spectrum", "limitset", "density", "localize", "verify", "resolvent")


@dataclass
class Target:
    name: str
    spec: GraphSpec | None
    family: AnalyticFamily
    default_n: int


def load_target(args) -> Target:
    if bool(args.input) == bool(args.preset):
        raise SpecError("give exactly one of --input or --preset")
    if args.preset:
        p = get_preset(args.preset)
        if p.kind == "graph":
            spec = p.graph()
            return Target(p.name, spec, family_from_subsets(family_of(spec)), p.default_n)
        return Target(p.name, None, p.family(), p.default_n)
    path = Path(args.input)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc.strerror}") from None
    spec = parse_spec(text)
    return Target(spec.name or path.stem, spec, family_from_subsets(family_of(spec)), 30)


def _need_graph(t: Target, command: str) -> GraphSpec:
    if t.spec is None:
        raise SpecError(f"{command} needs a channel graph; preset {t.name} is an analytic family")
    return t.spec


def _n(args, t: Target) -> int:
    n = args.n if args.n is not None else t.default_n
    if n < 1:
        raise SpecError("--n must be at least 1")
    return n


def _spectrum(args, t: Target, n: int, precision: int | None = None):
    cfg = SpectrumConfig(precision=precision or args.precision, seed=args.seed, grid=args.grid or 400)
    if t.spec is not None:
        return eigenvalues(t.spec, n, cfg)
    return spectrum_of_family(t.family, n, cfg)


def _pairs(p):
    return [c.to_pair() for c in p.coeffs]


# commands -----------------------------------------------------------------------------


def cmd_decompose(args, t: Target, out: Path):
    spec = _need_graph(t, "decompose")
    dec = decompose(spec)
    fam = family_of(spec)
    fam.check_invariants()
    cover = cycle_cover_support(dec)
    single = all(len(b) == 1 for b in dec.junctions)
    doc = {
        "name": t.name,
        "h": dec.h,
        "k": dec.k,
        "junction_blocks": [list(b) for b in dec.junctions],
        "channels": [c.to_json() for c in spec.channels],
        "dimension": {"per_n": sum(c.e for c in spec.channels), "junction_vertices": len(spec.junction_vertices)},
        "subset_coefficients": [
            {"subset": subset_label(s), "coefficients": _pairs(p), "degree": p.degree} for s, p in fam.nonzero()
        ],
        "support_size": len(fam.support()),
        "cycle_cover_support": sorted((subset_label(s) for s in cover), key=lambda x: (len(x), x)),
        "counting_bound": counting_bound(dec.h, len(spec.junction_vertices)) if single else None,
    }
    io.write_json(out / "decomposition.json", doc)
    print(f"{t.name}: h={dec.h} k={dec.k} nonzero subsets {len(fam.support())} of {2 ** dec.h}")


def cmd_spectrum(args, t: Target, out: Path):
    n = _n(args, t)
    res = _spectrum(args, t, n)
    io.write_csv(out / "eigenvalues.csv", res.rows(), io.EIGEN_COLUMNS)
    doc = {
        "name": t.name,
        "n": n,
        "count": res.count(),
        "precision_used": res.precision_used,
        "thresholds": res.thresholds,
        "classes": {k: sum(c.kind == k for c in res.classes) for k in ("arc", "isolated", "unclassified")},
        "max_arc_distance": res.max_arc_distance(),
        "isolated": [p.to_json() for p in res.limit_set.isolated_points],
    }
    io.write_json(out / "spectrum.json", doc)
    print(f"{t.name}: {res.count()} eigenvalues at n={n} ({res.precision_used} bits)")


def cmd_limitset(args, t: Target, out: Path):
    ls = trace_limit_set(t.family, TraceConfig(grid=args.grid or 800))
    io.write_limit_set(out, ls)
    io.write_json(out / "circles.json", [d.to_json() for d in analytic_circles(t.family)])
    print(f"{t.name}: {len(ls.arcs)} arcs, {len(ls.isolated_points)} isolated points")


def cmd_density(args, t: Target, out: Path):
    ls = trace_limit_set(t.family, TraceConfig(grid=args.grid or 800))
    eps = args.epsilon if args.epsilon is not None else 0.1
    res = _spectrum(args, t, _n(args, t)) if args.n is not None else None
    arcs = []
    for k, arc in enumerate(ls.arcs):
        lo, hi = (0.0, arc.length) if arc.closed else (arc.arclength[1], arc.arclength[-2])
        entry = {
            "arc": k,
            "pair": list(arc.pair),
            "closed": arc.closed,
            "length": arc.length,
            "density_integral": density_integral(arc, lo, hi) if hi > lo else 0.0,
            "theta_span_over_2pi": arc.theta_span / (2 * math.pi),
        }
        if res is not None and hi > lo:
            try:
                entry["tube_count"] = tube_count(res, arc, lo, hi, eps)
            except ValueError as exc:
                entry["tube_count"] = None
                entry["tube_note"] = str(exc)
        arcs.append(entry)
    doc = {"name": t.name, "epsilon": eps, "arcs": arcs}
    if res is not None:
        doc["n"] = res.n
        if args.sectors:
            step = 2 * math.pi / args.sectors
            stats = sector_statistics(res, eps, [(k * step, (k + 1) * step) for k in range(args.sectors)])
            doc["sectors"] = [s.__dict__ for s in stats]
    io.write_json(out / "density.json", doc)
    print(f"{t.name}: densities for {len(arcs)} arcs")


def _parse_complex(text: str) -> complex:
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError:
        raise SpecError(f"cannot read eigenvalue {text!r}; use re,im") from None
    if len(parts) == 1:
        parts.append(0.0)
    return complex(parts[0], parts[1])


def cmd_localize(args, t: Target, out: Path):
    spec = _need_graph(t, "localize")
    n = _n(args, t)
    bits = max(args.precision, 128)
    res = _spectrum(args, t, n, bits)
    roots = res.roots.roots
    if args.eigenvalue:
        want = _parse_complex(args.eigenvalue)
        target = min(roots, key=lambda r: abs(r.z - want))
    else:
        iso = [(res.limit_set.isolated_points[c.target].margin, r) for r, c in zip(roots, res.classes) if c.kind == "isolated"]
        target = max(iso, key=lambda mr: mr[0])[1] if iso else roots[0]
    pair = eigenvector(spec, n, target.value, bits=bits, seed=args.seed)
    rep = localization_report(spec, n, pair)
    doc = rep.to_json()
    doc["residual"] = pair.residual
    io.write_json(out / "localization.json", doc)
    print(f"{t.name}: eigenvalue {target.z:.10g}, residual {pair.residual:.3g}")


def cmd_verify(args, t: Target, out: Path):
    spec = _need_graph(t, "verify")
    n = args.n if args.n is not None else 3
    checks = []

    def check(name, passed, value=None, threshold=None):
        checks.append({"check": name, "passed": bool(passed), "value": value, "threshold": threshold})

    fam = family_of(spec)
    try:
        fam.check_invariants()
        check("subset coefficient degrees", True)
    except ChanspecError as exc:
        check("subset coefficient degrees", False, str(exc))
    rep = identity_check(spec, n, bits=max(args.precision, 128), seed=args.seed, family=fam)
    check("determinant identity", rep.max_deviation <= 1e-8, rep.max_deviation, 1e-8)
    mat = assemble(spec, n)
    if mat.dimension <= BRUTE_CAP:
        brute = brute_char_poly(mat)
        pencil_poly = fam.expanded(n)
        worst = 0.0
        for k in range(max(len(brute.coeffs), len(pencil_poly.coeffs))):
            a = brute.coeffs[k].to_complex() if k < len(brute.coeffs) else 0
            b = pencil_poly.coeffs[k].to_complex() if k < len(pencil_poly.coeffs) else 0
            scale = max(abs(a), abs(b), 1e-300)
            worst = max(worst, abs(a - b) / scale if (a or b) else 0.0)
        check("characteristic polynomial", worst <= 1e-10, worst, 1e-10)
    dec = decompose(spec)
    support = fam.support()
    check("support within cycle covers", support <= cycle_cover_support(dec), len(support))
    if all(len(b) == 1 for b in dec.junctions):
        bound = counting_bound(dec.h, len(spec.junction_vertices))
        check("support counting bound", len(support) <= bound, len(support), bound)
    res = eigenvalues(spec, n, SpectrumConfig(precision=max(args.precision, 128), seed=args.seed))
    check("eigenvalue count", res.count() == mat.dimension, res.count(), mat.dimension)
    total = complex(np.sum(res.values()))
    trace = mat.trace().to_complex()
    rel = abs(total - trace) / max(1.0, float(np.sum(np.abs(res.values()))))
    check("trace identity", rel <= 1e-8, rel, 1e-8)
    passed = all(c["passed"] for c in checks)
    io.write_json(out / "verify.json", {"name": t.name, "n": n, "passed": passed, "checks": checks, "identity": rep.to_json()})
    for c in checks:
        print(f"{'PASS' if c['passed'] else 'FAIL'} {c['check']}")
    if not passed:
        raise VerificationError(f"{sum(not c['passed'] for c in checks)} verification check(s) failed")


def cmd_resolvent(args, t: Target, out: Path):
    spec = _need_graph(t, "resolvent")
    n = _n(args, t)
    res = _spectrum(args, t, n)
    z = res.values()
    pad = 1.0
    size = args.grid or 60
    xs = np.linspace(z.real.min() - pad, z.real.max() + pad, size)
    ys = np.linspace(z.imag.min() - pad, z.imag.max() + pad, size)
    grid = resolvent_grid(spec, n, xs, ys, seed=args.seed)
    io.write_csv(out / "resolvent.csv", grid.rows(), io.RESOLVENT_COLUMNS)
    print(f"{t.name}: resolvent grid {size}x{size}, {len(grid.skipped)} points skipped")


HANDLERS = {
    "decompose": cmd_decompose,
    "spectrum": cmd_spectrum,
    "limitset": cmd_limitset,
    "density": cmd_density,
    "localize": cmd_localize,
    "verify": cmd_verify,
    "resolvent": cmd_resolvent,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="chanspec", description="Spectra of channel-lengthened graph matrices")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", help="graph spec JSON file")
    ap.add_argument("--preset", help="named fixture (see README)")
    ap.add_argument("--n", type=int, help="lengthening factor")
    ap.add_argument("--precision", type=int, default=53, choices=(53, 128, 256, 512), help="mantissa bits")
    ap.add_argument("--grid", type=int, help="grid resolution (tracing or resolvent)")
    ap.add_argument("--out", default="out", help="output directory")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--epsilon", type=float, help="tube width / annulus half-width")
    ap.add_argument("--sectors", type=int, help="number of equal angular sectors for density statistics")
    ap.add_argument("--eigenvalue", help="re,im of the eigenvalue to localize")
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.grid is not None and args.grid < 4:
            raise SpecError("--grid must be at least 4")
        t = load_target(args)
        HANDLERS[args.command](args, t, Path(args.out))
    except ChanspecError as exc:
        print(f"chanspec: error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
