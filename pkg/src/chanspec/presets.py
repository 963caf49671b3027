"""Named fixtures: channel graphs and directly specified analytic families."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Fr
from typing import Callable

from .errors import SpecError
from .graph import ChannelSpec, GraphSpec
from .limitset.family import AnalyticFamily


# graphs ----------------------------------------------------------------------------


def h2k1(alpha=(2, -1), beta=(2, 3), gamma=5) -> GraphSpec:
    """Two loops on one junction vertex; isolated eigenvalue near gamma."""
    return GraphSpec.build(
        ["J"],
        {("J", "J"): gamma},
        [ChannelSpec("J", "J", 1, a, b) for a, b in zip(alpha, beta)],
        "h2k1",
    )


def h3k1() -> GraphSpec:
    """Three loops with alpha = [1, i, -i], beta = [1, 3/2, 3/2], gamma = 3."""
    alpha = [1, (0, 1), (0, -1)]
    beta = [1, Fr(3, 2), Fr(3, 2)]
    return GraphSpec.build(
        ["J"], {("J", "J"): 3}, [ChannelSpec("J", "J", 1, a, b) for a, b in zip(alpha, beta)], "h3k1"
    )


def h2k2(coupling=None) -> GraphSpec:
    """Two junctions (diagonals -2, 2) joined by channels in both directions.

    ``coupling`` adds junction-to-junction edges of that weight both ways.
    """
    weights = {("J1", "J1"): -2, ("J2", "J2"): 2}
    if coupling is not None:
        weights[("J1", "J2")] = coupling
        weights[("J2", "J1")] = coupling
    channels = [
        ChannelSpec("J1", "J2", 1, Fr(-6, 5), Fr(13, 10)),
        ChannelSpec("J2", "J1", 1, Fr(6, 5), Fr(13, 10)),
    ]
    return GraphSpec.build(["J1", "J2"], weights, channels, "h2k2" if coupling is None else "h2k2-weak")


def three() -> GraphSpec:
    """Three channels through junctions u, v, w with an extra edge u -> w; only 3 of 8 subsets survive."""
    weights = {("u", "u"): -2, ("v", "v"): 2, ("u", "w"): 1}
    channels = [
        ChannelSpec("w", "u", 1, (0, Fr(1, 2)), 1),
        ChannelSpec("u", "v", 1, (0, Fr(-1, 2)), 1),
        ChannelSpec("v", "w", 1, Fr(3, 2), 1),
    ]
    return GraphSpec.build(["u", "v", "w"], weights, channels, "three")


def cycle(a=0, b=0, c=1, d=0, e=1) -> GraphSpec:
    """Two junction vertices v1, vn with one channel v1 -> vn (alpha 0, beta 1).

    a, d are the junction diagonals, b the edge v1 -> vn and c the edge
    vn -> v1. The characteristic polynomial is
    z^L (z^2 - (a + d) z + ad - bc) - c with L = n e, so the defaults give
    z^(L + 2) - 1.
    """
    weights = {("v1", "v1"): a, ("vn", "vn"): d, ("v1", "vn"): b, ("vn", "v1"): c}
    return GraphSpec.build(["v1", "vn"], weights, [ChannelSpec("v1", "vn", e, 0, 1)], "cycle")


def chords(h: int) -> GraphSpec:
    """A 2h-cycle of junction vertices with a channel from vertex i to i+1 for i = 1..h.

    Every subset of channels yields a nonzero coefficient.
    """
    if h < 1:
        raise SpecError("chords needs h >= 1")
    ids = [f"x{i}" for i in range(1, 2 * h + 1)]
    weights = {(ids[i], ids[(i + 1) % (2 * h)]): 1 for i in range(2 * h)}
    channels = [ChannelSpec(ids[i], ids[i + 1], 1, i + 1, 1) for i in range(h)]
    return GraphSpec.build(ids, weights, channels, f"chords{h}")


# analytic families -----------------------------------------------------------------


def two_circles(a=1, b=-1, alpha=1, beta=1, gamma=1) -> AnalyticFamily:
    """(z - a)^n (z - b)^n + alpha (z - a)^n + beta (z - b)^n + gamma."""
    return AnalyticFamily.build(
        [(a, 1), (b, 1)],
        [("ab", [1], (1, 1)), ("a", [alpha], (1, 0)), ("b", [beta], (0, 1)), ("1", [gamma], (0, 0))],
        "limset",
    )


def circle_and_oval(a, alpha=1, gamma=1, name="limset2") -> AnalyticFamily:
    """(z - a)^n (z + a)^n + alpha (z - a)^n + gamma."""
    return AnalyticFamily.build(
        [(a, 1), (-a, 1)],
        [("f1", [1], (1, 1)), ("f2", [alpha], (1, 0)), ("f3", [gamma], (0, 0))],
        name,
    )


def tworings() -> AnalyticFamily:
    """w^2 + a1(z) w + a0(z) at w = z^n, a1 = -z^2 - z + 9/2, a0 = z^3 - z^2/2 - 4z + 2."""
    return AnalyticFamily.build(
        [(0, 1)],
        [
            ("w2", [1], (2,)),
            ("w1", [Fr(9, 2), -1, -1], (1,)),
            ("w0", [2, -4, Fr(-1, 2), 1], (0,)),
        ],
        "tworings",
    )


def interlock() -> AnalyticFamily:
    """w^2 - 4w - 8z + 3 at w = z^n; the two rings are closest near z = -1."""
    return AnalyticFamily.build(
        [(0, 1)],
        [("w2", [1], (2,)), ("w1", [-4], (1,)), ("w0", [3, -8], (0,))],
        "interlock",
    )


def lemniscate(c=Fr(7, 10)) -> AnalyticFamily:
    """(z^2 - 1)^n - c; the tie set is the figure-eight |z^2 - 1| = 1."""
    return AnalyticFamily.build([(1, 1), (-1, 1)], [("w", [1], (1, 1)), ("1", [-c], (0, 0))], "lemniscate")


# registry --------------------------------------------------------------------------


@dataclass(frozen=True)
class Preset:
    name: str
    kind: str  # "graph" or "family"
    build: Callable
    default_n: int
    description: str

    def graph(self) -> GraphSpec:
        if self.kind != "graph":
            raise SpecError(f"preset {self.name} is an analytic family, not a channel graph")
        return self.build()

    def family(self) -> AnalyticFamily:
        if self.kind != "family":
            raise SpecError(f"preset {self.name} is a channel graph; build its family with family_from_subsets")
        return self.build()


PRESETS: dict[str, Preset] = {
    p.name: p
    for p in [
        Preset("h2k1", "graph", h2k1, 30, "two loops, alpha=[2,-1], beta=[2,3], gamma=5"),
        Preset("h3k1", "graph", h3k1, 30, "three loops, alpha=[1,i,-i], beta=[1,3/2,3/2], gamma=3"),
        Preset("h2k2", "graph", h2k2, 30, "two junctions, alpha=-1.2,1.2, beta=1.3, gamma=-2,2"),
        Preset("h2k2-weak", "graph", lambda: h2k2(Fr(1, 100)), 100, "h2k2 with junction cross edges 1e-2"),
        Preset("three", "graph", three, 3, "three channels, junctions u, v, w"),
        Preset("cycle", "graph", cycle, 10, "bare cycle, z^(n+2) - 1"),
        Preset("chords3", "graph", lambda: chords(3), 2, "6-cycle with 3 channel chords"),
        Preset("chords4", "graph", lambda: chords(4), 2, "8-cycle with 4 channel chords"),
        Preset("limset", "family", two_circles, 40, "((z-1)^n + 1)((z+1)^n + 1)"),
        Preset("limset2-a-half", "family", lambda: circle_and_oval(Fr(1, 2), name="limset2-a-half"), 40, "a = 1/2"),
        Preset(
            "limset2-a-three-halves",
            "family",
            lambda: circle_and_oval(Fr(3, 2), name="limset2-a-three-halves"),
            40,
            "a = 3/2",
        ),
        Preset("tworings", "family", tworings, 40, "two rings near |z|=1 plus a root near 1/2"),
        Preset("interlock", "family", interlock, 20, "two interlocking rings"),
        Preset("lemniscate", "family", lemniscate, 40, "(z^2-1)^n = 0.7"),
    ]
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise SpecError(f"unknown preset {name!r}; choose from {', '.join(sorted(PRESETS))}") from None
