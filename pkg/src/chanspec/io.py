"""CSV and JSON writers. Floats are written with repr so reruns are byte-identical."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .limitset import LimitSet


def _clean(obj):
    """Replace non-finite floats with strings (JSON has no inf/nan) and complex with pairs."""
    if isinstance(obj, float):
        if math.isfinite(obj):
            return obj
        return "nan" if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, complex):
        return [_clean(obj.real), _clean(obj.imag)]
    if isinstance(obj, Mapping):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        return _clean(obj.item())
    return obj


def write_json(path: Path, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_clean(obj), indent=2) + "\n")
    return path


def write_csv(path: Path, rows: Iterable[Mapping], columns: Sequence[str]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(row[c]) for c in columns])
    return path


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


EIGEN_COLUMNS = ("re", "im", "multiplicity", "residual", "class", "class_dist")
RESOLVENT_COLUMNS = ("re", "im", "log10_norm")
ARC_COLUMNS = ("arc", "r", "s", "re", "im", "arclength", "theta", "rho")


def arc_rows(ls: LimitSet):
    for k, arc in enumerate(ls.arcs):
        for z, s, th, rho in zip(arc.points, arc.arclength, arc.theta, arc.rho):
            yield {
                "arc": k,
                "r": arc.pair[0],
                "s": arc.pair[1],
                "re": float(z.real),
                "im": float(z.imag),
                "arclength": float(s),
                "theta": float(th),
                "rho": float(rho),
            }


def write_limit_set(out: Path, ls: LimitSet) -> list[Path]:
    out = Path(out)
    return [
        write_json(out / "arcs.json", [a.to_json() for a in ls.arcs]),
        write_csv(out / "arcs.csv", arc_rows(ls), ARC_COLUMNS),
        write_json(out / "isolated.json", [p.to_json() for p in ls.isolated_points]),
        write_json(
            out / "limitset.json",
            {
                "bounding_box": list(ls.bounding_box),
                "cell": ls.cell,
                "expansions": ls.expansions,
                "touches_boundary": ls.touches_boundary,
                "arc_count": len(ls.arcs),
                "singular_points": [[z.real, z.imag] for z in ls.singular_points],
                "degenerate_pairs": [list(p) for p in ls.degenerate_pairs],
            },
        ),
    ]
