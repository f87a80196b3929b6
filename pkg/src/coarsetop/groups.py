"""Finite ball models of finitely generated groups.

Only families whose word problem is solved by a canonical normal form are
supported: free abelian, free, direct products, free products, the amalgam
of two copies of Z^2 over a common Z factor, and the lamplighter group.
Each model multiplies and inverts normal forms and reports exact word
length, so the global word metric on a ball is computed from normal forms
rather than from paths inside the window.

For families whose balls are convex in the Cayley graph (``convex_balls``)
the word metric agrees with the induced path metric of the ball subgraph
and BFS backs all distance queries; the lamplighter uses an explicit
distance table instead. Both metrics are exposed on the ball.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import BadSubgroupSpecError, WindowTooLargeError
from .metric import FiniteMetricSpace, SubsetMask


class GroupModel:
    """Base class; subclasses provide normal forms and word length."""

    family: str = "abstract"
    convex_balls: bool = False

    def identity(self):
        raise NotImplementedError

    def generators(self) -> list[tuple[str, object]]:
        """(name, normal form) pairs for the standard generating set."""
        raise NotImplementedError

    def mul(self, g, h):
        raise NotImplementedError

    def inv(self, g):
        raise NotImplementedError

    def length(self, g) -> int:
        raise NotImplementedError

    def sortkey(self, g):
        """Total order on normal forms used for deterministic ids."""
        return repr(g)

    def label(self, g) -> str:
        return repr(g)

    def ball_size_estimate(self, radius: int) -> Optional[int]:
        return None

    def parse_word(self, text: str):
        """Normal form of a word like "a b^-1 a^2" in the generator names."""
        gens = dict(self.generators())
        out = self.identity()
        for token in text.split():
            if "^" in token:
                name, p = token.split("^", 1)
                power = int(p)
            else:
                name, power = token, 1
            if name not in gens:
                raise BadSubgroupSpecError(f"unknown generator {name!r} in word {text!r}")
            step = gens[name] if power > 0 else self.inv(gens[name])
            for _ in range(abs(power)):
                out = self.mul(out, step)
        return out


class FreeAbelian(GroupModel):
    """Z^n with the standard basis; normal forms are integer tuples."""

    convex_balls = True

    def __init__(self, n: int):
        self.n = n
        self.family = f"Z^{n}"

    def identity(self):
        return (0,) * self.n

    def generators(self):
        names = ["a", "b", "c", "d", "e"][: self.n] if self.n <= 5 else [f"e{i}" for i in range(self.n)]
        out = []
        for i, name in enumerate(names):
            v = [0] * self.n
            v[i] = 1
            out.append((name, tuple(v)))
        return out

    def mul(self, g, h):
        return tuple(a + b for a, b in zip(g, h))

    def inv(self, g):
        return tuple(-a for a in g)

    def length(self, g):
        return sum(abs(a) for a in g)

    def sortkey(self, g):
        return g

    def label(self, g):
        return str(tuple(g))

    def ball_size_estimate(self, radius):
        # exact L1 ball count via Vandermonde-type sum
        total = 0
        for k in range(min(self.n, radius) + 1):
            total += (
                2**k
                * _binom(self.n, k)
                * _binom(radius, k)
            )
        return total


def _binom(n, k):
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


class FreeGroup(GroupModel):
    """F_k with a free basis; normal forms are tuples of nonzero signed letters."""

    convex_balls = True

    def __init__(self, k: int):
        self.k = k
        self.family = f"F_{k}"

    def identity(self):
        return ()

    def generators(self):
        names = ["a", "b", "c", "d", "e"][: self.k] if self.k <= 5 else [f"x{i}" for i in range(self.k)]
        return [(name, (i + 1,)) for i, name in enumerate(names)]

    def mul(self, g, h):
        g = list(g)
        for x in h:
            if g and g[-1] == -x:
                g.pop()
            else:
                g.append(x)
        return tuple(g)

    def inv(self, g):
        return tuple(-x for x in reversed(g))

    def length(self, g):
        return len(g)

    def sortkey(self, g):
        return (len(g), g)

    def label(self, g):
        if not g:
            return "e"
        names = dict((i + 1, name) for i, (name, _) in enumerate(self.generators()))
        parts = []
        for x in g:
            parts.append(names[abs(x)] + ("'" if x < 0 else ""))
        return "".join(parts)

    def ball_size_estimate(self, radius):
        k = self.k
        if k == 1:
            return 2 * radius + 1
        return 1 + 2 * k * ((2 * k - 1) ** radius - 1) // (2 * k - 2)


class DirectProduct(GroupModel):
    """Direct product with the union of factor generators and the L1 sum metric."""

    def __init__(self, factors: Sequence[GroupModel], family: Optional[str] = None):
        self.factors = list(factors)
        self.family = family or " x ".join(f.family for f in self.factors)
        self.convex_balls = all(f.convex_balls for f in self.factors)

    def identity(self):
        return tuple(f.identity() for f in self.factors)

    def generators(self):
        out = []
        for i, f in enumerate(self.factors):
            for name, g in f.generators():
                v = list(self.identity())
                v[i] = g
                out.append((f"{name}{i}" if _name_clash(self.factors) else name, tuple(v)))
        return out

    def mul(self, g, h):
        return tuple(f.mul(a, b) for f, a, b in zip(self.factors, g, h))

    def inv(self, g):
        return tuple(f.inv(a) for f, a in zip(self.factors, g))

    def length(self, g):
        return sum(f.length(a) for f, a in zip(self.factors, g))

    def sortkey(self, g):
        return tuple(f.sortkey(a) for f, a in zip(self.factors, g))

    def label(self, g):
        return "(" + ", ".join(f.label(a) for f, a in zip(self.factors, g)) + ")"

    def ball_size_estimate(self, radius):
        # crude upper bound: product of factor balls
        sizes = [f.ball_size_estimate(radius) for f in self.factors]
        if any(s is None for s in sizes):
            return None
        out = 1
        for s in sizes:
            out *= s
        return out


def _name_clash(factors) -> bool:
    names = [name for f in factors for name, _ in f.generators()]
    return len(names) != len(set(names))


class FreeProduct(GroupModel):
    """Free product with alternating syllable normal form."""

    def __init__(self, factors: Sequence[GroupModel], family: Optional[str] = None):
        self.factors = list(factors)
        self.family = family or " * ".join(f.family for f in self.factors)
        self.convex_balls = all(f.convex_balls for f in self.factors)

    def identity(self):
        return ()

    def generators(self):
        out = []
        for i, f in enumerate(self.factors):
            for name, g in f.generators():
                out.append((f"{name}{i}" if _name_clash(self.factors) else name, ((i, g),)))
        return out

    def mul(self, g, h):
        out = list(g)
        for syl in h:
            i, x = syl
            if out and out[-1][0] == i:
                merged = self.factors[i].mul(out[-1][1], x)
                out.pop()
                if merged != self.factors[i].identity():
                    out.append((i, merged))
            else:
                out.append((i, x))
        return tuple(out)

    def inv(self, g):
        return tuple((i, self.factors[i].inv(x)) for i, x in reversed(g))

    def length(self, g):
        return sum(self.factors[i].length(x) for i, x in g)

    def sortkey(self, g):
        return (self.length(g), tuple((i, self.factors[i].sortkey(x)) for i, x in g))

    def label(self, g):
        if not g:
            return "e"
        return "".join(self.factors[i].label(x) for i, x in g)


def amalgam_z2_z_z2() -> GroupModel:
    """The amalgam Z^2 *_Z Z^2 of two planes glued along a common axis.

    With presentation <x, y | [x,y]> *_{y=y} <z, y | [z,y]> the shared
    generator y is central, so coset-representative normal forms reduce to
    pairs (free word in x,z; power of y), and the word length over the
    generators {x, y, z} splits as the sum of the two parts.
    """
    free = FreeGroup(2)
    line = FreeAbelian(1)
    model = DirectProduct([free, line], family="Z2*_Z*Z2")

    def generators():
        fe = free.identity()
        le = line.identity()
        return [
            ("x", ((1,), le)),
            ("z", ((2,), le)),
            ("y", (fe, (1,))),
        ]

    model.generators = generators  # type: ignore[method-assign]
    return model


class Lamplighter(GroupModel):
    """Z_2 wr Z with generators t (move) and s (toggle at the cursor).

    Normal forms are (frozenset of lit positions, cursor). Word length is
    |lit| plus the shortest walk from 0 visiting every lit position and
    ending at the cursor.
    """

    family = "lamplighter"
    convex_balls = False

    def identity(self):
        return (frozenset(), 0)

    def generators(self):
        return [("t", (frozenset(), 1)), ("s", (frozenset([0]), 0))]

    def mul(self, g, h):
        s1, c1 = g
        s2, c2 = h
        return (s1 ^ frozenset(p + c1 for p in s2), c1 + c2)

    def inv(self, g):
        s, c = g
        return (frozenset(p - c for p in s), -c)

    def length(self, g):
        s, c = g
        if not s:
            return abs(c)
        lo = min(min(s), 0, c)
        hi = max(max(s), 0, c)
        left_first = (0 - lo) + (hi - lo) + abs(hi - c)
        right_first = (hi - 0) + (hi - lo) + abs(c - lo)
        return len(s) + min(left_first, right_first)

    def sortkey(self, g):
        s, c = g
        return (c, tuple(sorted(s)))

    def label(self, g):
        s, c = g
        return f"(lit={sorted(s)}, pos={c})"


@dataclass
class BallModel:
    """All elements of word length <= radius, with both metrics and a partial action."""

    model: GroupModel
    radius: int
    elements: list
    index: dict
    space: FiniteMetricSpace
    cayley_adjacency: list[list[int]]

    def element_id(self, g) -> Optional[int]:
        return self.index.get(g)

    def act_left(self, g, x: int) -> Optional[int]:
        """Id of g * elements[x], or None when the product leaves the window."""
        return self.index.get(self.model.mul(g, self.elements[x]))

    def act_right(self, x: int, g) -> Optional[int]:
        return self.index.get(self.model.mul(self.elements[x], g))

    def action_table(self, g) -> list[Optional[int]]:
        return [self.act_left(g, x) for x in range(len(self.elements))]

    def induced_space(self) -> FiniteMetricSpace:
        """The ball with the path metric of its own Cayley subgraph."""
        return FiniteMetricSpace(
            len(self.elements),
            adjacency=self.cayley_adjacency,
            labels=self.space.labels,
            radial=self.space.radial,
            window_radius=self.radius,
            basepoint=self.index[self.model.identity()],
        )


def build_ball(model: GroupModel, radius: int, max_vertices: int = 200_000) -> BallModel:
    """Enumerate the word-metric ball by BFS over generator moves.

    Element ids are assigned in (word length, normal-form sort key) order,
    so identical inputs always produce identical spaces.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    est = model.ball_size_estimate(radius)
    if est is not None and est > max_vertices:
        raise WindowTooLargeError(est, max_vertices)
    gens = [g for _, g in model.generators()]
    steps = []
    for g in gens:
        steps.append(g)
        inv = model.inv(g)
        if inv != g:
            steps.append(inv)
    layers = [[model.identity()]]
    seen = {model.identity()}
    count = 1
    for _ in range(radius):
        frontier = []
        for g in layers[-1]:
            for s in steps:
                h = model.mul(g, s)
                if h not in seen and model.length(h) <= radius:
                    seen.add(h)
                    frontier.append(h)
                    count += 1
                    if count > max_vertices:
                        raise WindowTooLargeError(count, max_vertices)
        layers.append(sorted(frontier, key=model.sortkey))
    elements = [g for layer in layers for g in layer]
    index = {g: i for i, g in enumerate(elements)}
    n = len(elements)
    adj = [[] for _ in range(n)]
    for i, g in enumerate(elements):
        for s in steps:
            j = index.get(model.mul(g, s))
            if j is not None and j != i:
                adj[i].append(j)
    adj = [sorted(set(a)) for a in adj]
    radial = [model.length(g) for g in elements]
    labels = list(elements)  # normal forms; model.label renders them
    if model.convex_balls:
        space = FiniteMetricSpace(
            n, adjacency=adj, labels=labels, radial=radial, window_radius=radius, basepoint=0
        )
    else:
        table = [
            [model.length(model.mul(model.inv(g), h)) for h in elements] for g in elements
        ]
        space = FiniteMetricSpace(
            n, table=table, labels=labels, radial=radial, window_radius=radius, basepoint=0
        )
    return BallModel(model, radius, elements, index, space, adj)


# -- subgroup traces ----------------------------------------------------------------


def subgroup_trace(ball: BallModel, spec) -> SubsetMask:
    """Mask of ball elements lying in the specified subgroup.

    Spec forms:
      {"cyclic": word-or-nf}            powers of one element
      {"factor": i}                     a factor of a direct product
      {"sublattice": {"k": 2, "coords": [0]}}   k Z^m inside Z^n
      {"generators": [words]}           in-window BFS over the listed generators
    """
    model = ball.model
    if not isinstance(spec, dict) or len(spec) != 1:
        raise BadSubgroupSpecError(f"spec must be a single-key dict, got {spec!r}")
    kind, value = next(iter(spec.items()))
    if kind == "cyclic":
        g = model.parse_word(value) if isinstance(value, str) else value
        if g == model.identity():
            raise BadSubgroupSpecError("cyclic generator is the identity")
        ids = set()
        for step in (g, model.inv(g)):
            cur = model.identity()
            visited = set()
            while cur not in visited:
                visited.add(cur)
                i = ball.index.get(cur)
                if i is None:
                    break
                ids.add(i)
                cur = model.mul(cur, step)
        return SubsetMask(len(ball.elements), ids)
    if kind == "factor":
        if not isinstance(model, DirectProduct):
            raise BadSubgroupSpecError("factor spec requires a direct product model")
        i = int(value)
        if not 0 <= i < len(model.factors):
            raise BadSubgroupSpecError(f"factor index {i} out of range")
        idents = [f.identity() for f in model.factors]
        return SubsetMask(
            len(ball.elements),
            (
                t
                for t, g in enumerate(ball.elements)
                if all(g[j] == idents[j] for j in range(len(model.factors)) if j != i)
            ),
        )
    if kind == "sublattice":
        if not isinstance(model, FreeAbelian):
            raise BadSubgroupSpecError("sublattice spec requires a free abelian model")
        k = int(value.get("k", 1))
        coords = set(value.get("coords", range(model.n)))
        def member(g):
            return all(
                (g[j] % k == 0) if j in coords else (g[j] == 0) for j in range(model.n)
            )
        return SubsetMask(len(ball.elements), (t for t, g in enumerate(ball.elements) if member(g)))
    if kind == "generators":
        gens = [model.parse_word(w) if isinstance(w, str) else w for w in value]
        steps = []
        for g in gens:
            steps.append(g)
            steps.append(model.inv(g))
        seen = {ball.index[model.identity()]}
        frontier = [model.identity()]
        while frontier:
            nxt = []
            for g in frontier:
                for s in steps:
                    h = model.mul(g, s)
                    i = ball.index.get(h)
                    if i is not None and i not in seen:
                        seen.add(i)
                        nxt.append(h)
            frontier = nxt
        return SubsetMask(len(ball.elements), seen)
    raise BadSubgroupSpecError(f"unknown spec kind {kind!r}")


@dataclass
class CommensurabilityReport:
    """Windowed Hausdorff distances between two subgroup traces, per radius."""

    radii: list[int]
    distances: list[float]
    verdict: str  # "bounded" | "growing" | "inconclusive"


def commensurability_probe(
    model: GroupModel, H_spec, K_spec, radii: Sequence[int], max_vertices: int = 200_000
) -> CommensurabilityReport:
    """Per-radius Hausdorff distance between the traces of H and K.

    "bounded" requires the distance to be constant over the last three
    radii; a strictly increasing tail reads "growing"; anything else is
    inconclusive.
    """
    from .metric import hausdorff_distance

    radii = sorted(radii)
    distances = []
    for R in radii:
        ball = build_ball(model, R, max_vertices=max_vertices)
        H = subgroup_trace(ball, H_spec)
        K = subgroup_trace(ball, K_spec)
        distances.append(hausdorff_distance(ball.space, H, K))
    verdict = trend_verdict(distances)
    return CommensurabilityReport(list(radii), distances, verdict)


def trend_verdict(values: Sequence) -> str:
    """Three-valued trend over a monotone schedule family.

    "bounded" = identical value at the last three entries; "growing" =
    strictly increasing over the last three; otherwise "inconclusive".
    The tool never certifies asymptotics, it reports the windowed trend.
    """
    if len(values) < 3:
        return "inconclusive"
    a, b, c = values[-3], values[-2], values[-1]
    if a == b == c:
        return "bounded"
    if a < b < c:
        return "growing"
    return "inconclusive"


__all__ = [
    "GroupModel",
    "FreeAbelian",
    "FreeGroup",
    "DirectProduct",
    "FreeProduct",
    "Lamplighter",
    "amalgam_z2_z_z2",
    "BallModel",
    "build_ball",
    "subgroup_trace",
    "CommensurabilityReport",
    "commensurability_probe",
    "trend_verdict",
]
