"""Star decompositions via orientations with prescribed out-degrees.

A k-star decomposition with j(v) stars centered at each vertex v exists
exactly when the graph has an orientation with out-degree j(v)*k at every v,
which in turn is a max-flow feasibility question on the network

    source -> v            capacity j(v)*k
    v -> edge-node e       capacity 1     (for each edge e incident to v)
    e -> sink              capacity 1

feasible iff the max flow saturates all edge-nodes (= Nd/2).  When
infeasible, the residual min cut yields a vertex set U with
e[U] > sum_v j(v)*k over U, certifying that no such decomposition exists.
The brute-force subset check over all 2^N sets provides the independent
oracle for small graphs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from pathlib import Path

from .graph import GraphError, SimpleGraph, edges_within

__all__ = [
    "ProfileError",
    "StarProfile",
    "Orientation",
    "Star",
    "StarDecomposition",
    "Witness",
    "balanced_profile",
    "orient_with_outdegrees",
    "orient_with_outdegree_bounds",
    "stars_from_orientation",
    "decompose",
    "verify_decomposition",
    "check_condition_U",
    "brute_force_condition",
    "write_decomposition",
    "read_decomposition",
]


class ProfileError(ValueError):
    pass


@dataclass(frozen=True)
class StarProfile:
    """Prescribed number of stars j(v) per vertex, for stars of k edges."""

    k: int
    j_of: tuple[int, ...]

    def __post_init__(self):
        if self.k < 1:
            raise ProfileError("star size k must be >= 1")
        if any(j < 0 for j in self.j_of):
            raise ProfileError("star counts must be nonnegative")

    @property
    def N(self) -> int:
        return len(self.j_of)

    def quota(self, v: int) -> int:
        return self.j_of[v] * self.k

    def total_quota(self) -> int:
        return self.k * sum(self.j_of)


def balanced_profile(N: int, d: int, k: int, A) -> StarProfile:
    """Profile with s+1 stars on A and s elsewhere, s = floor(d/2k).

    Requires Nd/(2k) integral and |A| = N*r/(2k) exactly (r = d - 2sk).
    """
    if (N * d) % (2 * k) != 0:
        raise ProfileError(f"Nd/(2k) = {N * d}/{2 * k} is not an integer")
    s = d // (2 * k)
    r = d - 2 * s * k
    A = frozenset(A)
    if A and (min(A) < 0 or max(A) >= N):
        raise ProfileError("A contains out-of-range vertex ids")
    want = N * r // (2 * k)
    if N * r % (2 * k) != 0 or len(A) != want:
        raise ProfileError(f"|A| must equal N*r/(2k) = {N * r / (2 * k)}, got {len(A)}")
    return StarProfile(k=k, j_of=tuple(s + 1 if v in A else s for v in range(N)))


@dataclass(frozen=True)
class Orientation:
    """tail[e] is the endpoint of edge e chosen as its star center side."""

    tails: tuple[int, ...]


@dataclass(frozen=True)
class Star:
    center: int
    edge_ids: tuple[int, ...]


@dataclass(frozen=True)
class StarDecomposition:
    stars: tuple[Star, ...]


@dataclass(frozen=True)
class Witness:
    """A subset violating e[U] <= sum over U of j(v)*k."""

    U: frozenset
    lhs: int  # e[U]
    rhs: int  # sum of quotas over U

    def to_dict(self) -> dict:
        return {"U": sorted(self.U), "lhs": self.lhs, "rhs": self.rhs}


class _Dinic:
    """Max flow by BFS levels + DFS blocking flows; deterministic order."""

    def __init__(self, n: int):
        self.n = n
        self.head: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, u: int, v: int, cap: int) -> int:
        eid = len(self.to)
        self.head[u].append(eid)
        self.to.append(v)
        self.cap.append(cap)
        self.head[v].append(eid + 1)
        self.to.append(u)
        self.cap.append(0)
        return eid

    def _bfs(self, s: int, t: int) -> bool:
        self.level = [-1] * self.n
        self.level[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for eid in self.head[u]:
                v = self.to[eid]
                if self.cap[eid] > 0 and self.level[v] < 0:
                    self.level[v] = self.level[u] + 1
                    q.append(v)
        return self.level[t] >= 0

    def _dfs(self, u: int, t: int, pushed: int) -> int:
        if u == t:
            return pushed
        while self.it[u] < len(self.head[u]):
            eid = self.head[u][self.it[u]]
            v = self.to[eid]
            if self.cap[eid] > 0 and self.level[v] == self.level[u] + 1:
                got = self._dfs(v, t, min(pushed, self.cap[eid]))
                if got:
                    self.cap[eid] -= got
                    self.cap[eid ^ 1] += got
                    return got
            self.it[u] += 1
        return 0

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        while self._bfs(s, t):
            self.it = [0] * self.n
            while True:
                got = self._dfs(s, t, 1 << 60)
                if not got:
                    break
                flow += got
        return flow

    def reachable(self, s: int) -> set[int]:
        seen = {s}
        q = deque([s])
        while q:
            u = q.popleft()
            for eid in self.head[u]:
                v = self.to[eid]
                if self.cap[eid] > 0 and v not in seen:
                    seen.add(v)
                    q.append(v)
        return seen


def _orient(G: SimpleGraph, profile: StarProfile, exact: bool) -> Orientation | Witness:
    N, m = G.N, len(G.edges)
    if profile.N != N:
        raise ProfileError("profile size does not match graph")
    total = profile.total_quota()
    if exact and total != m:
        raise ProfileError(f"sum of j(v)*k = {total} must equal the edge count {m}")
    if not exact and total < m:
        raise ProfileError(f"sum of j(v)*k = {total} must be >= the edge count {m}")

    # node ids: 0 = source, 1..N = vertices, N+1..N+m = edge nodes, N+m+1 = sink
    src, snk = 0, N + m + 1
    net = _Dinic(N + m + 2)
    for v in range(N):
        net.add_edge(src, 1 + v, profile.quota(v))
    vertex_arcs: list[tuple[int, int, int]] = []  # (arc id, vertex, edge id)
    for eid, (u, v) in enumerate(G.edges):
        for w in (u, v):
            arc = net.add_edge(1 + w, 1 + N + eid, 1)
            vertex_arcs.append((arc, w, eid))
        net.add_edge(1 + N + eid, snk, 1)

    if net.max_flow(src, snk) == m:
        tails = [-1] * m
        for arc, w, eid in vertex_arcs:
            if net.cap[arc] == 0:  # saturated: w supplies this edge
                tails[eid] = w
        return Orientation(tails=tuple(tails))

    # Min cut: the unreachable vertex layer violates the subset condition.
    reach = net.reachable(src)
    U = frozenset(v for v in range(N) if 1 + v not in reach)
    lhs = edges_within(G, U)
    rhs = sum(profile.quota(v) for v in U)
    if lhs <= rhs:
        raise AssertionError("min cut failed to produce a violating subset")
    return Witness(U=U, lhs=lhs, rhs=rhs)


def orient_with_outdegrees(G: SimpleGraph, profile: StarProfile) -> Orientation | Witness:
    """Orientation with out-degree exactly j(v)*k at every v, or a Witness."""
    return _orient(G, profile, exact=True)


def orient_with_outdegree_bounds(G: SimpleGraph, profile: StarProfile) -> Orientation | Witness:
    """Orientation with out-degree at most j(v)*k; needs total quota >= Nd/2."""
    return _orient(G, profile, exact=False)


def stars_from_orientation(
    G: SimpleGraph, orientation: Orientation, profile: StarProfile
) -> StarDecomposition:
    """Group each vertex's outgoing edges (ascending edge id) into k-stars."""
    out: list[list[int]] = [[] for _ in range(G.N)]
    for eid, tail in enumerate(orientation.tails):
        out[tail].append(eid)
    stars = []
    for v in range(G.N):
        if len(out[v]) != profile.quota(v):
            raise ProfileError(
                f"vertex {v} has out-degree {len(out[v])}, profile demands {profile.quota(v)}"
            )
        ids = sorted(out[v])
        for i in range(0, len(ids), profile.k):
            stars.append(Star(center=v, edge_ids=tuple(ids[i : i + profile.k])))
    return StarDecomposition(stars=tuple(stars))


def decompose(G: SimpleGraph, k: int, profile: StarProfile) -> StarDecomposition | Witness:
    """Full pipeline: orient, then extract stars; or return the Witness."""
    if profile.k != k:
        raise ProfileError("profile star size does not match k")
    result = orient_with_outdegrees(G, profile)
    if isinstance(result, Witness):
        return result
    deco = stars_from_orientation(G, result, profile)
    ok, why = verify_decomposition(G, k, profile, deco)
    if not ok:
        raise AssertionError(f"constructed decomposition failed verification: {why}")
    return deco


def verify_decomposition(
    G: SimpleGraph, k: int, profile: StarProfile, D: StarDecomposition
) -> tuple[bool, str | None]:
    """Check edge partition, incidence, star sizes and per-vertex counts.

    Returns (True, None) or (False, first violation found).
    """
    used = [False] * len(G.edges)
    counts = [0] * G.N
    for star in D.stars:
        if len(star.edge_ids) != k:
            return False, f"star at {star.center} has {len(star.edge_ids)} edges, expected {k}"
        counts[star.center] += 1
        for eid in star.edge_ids:
            if not 0 <= eid < len(G.edges):
                return False, f"unknown edge id {eid}"
            if used[eid]:
                return False, f"edge {eid} covered twice"
            used[eid] = True
            if star.center not in G.edges[eid]:
                return False, f"edge {eid} not incident to center {star.center}"
    if not all(used):
        return False, f"edge {used.index(False)} not covered"
    for v in range(G.N):
        if counts[v] != profile.j_of[v]:
            return False, f"vertex {v} centers {counts[v]} stars, profile demands {profile.j_of[v]}"
    return True, None


def check_condition_U(G: SimpleGraph, profile: StarProfile, U) -> tuple[bool, bool]:
    """Evaluate the subset inequality for U and its complement form.

    holds_U:  e[U]  <= sum_{v in U}  j(v)*k
    holds_Uc: e[Uc] <= d*|Uc| - sum_{v in Uc} j(v)*k
    Under the equality profile sum the two are equivalent for every U.
    """
    U = frozenset(U)
    Uc = frozenset(range(G.N)) - U
    holds_U = edges_within(G, U) <= sum(profile.quota(v) for v in U)
    holds_Uc = edges_within(G, Uc) <= G.d * len(Uc) - sum(profile.quota(v) for v in Uc)
    return holds_U, holds_Uc


_BRUTE_CAP = 24


def brute_force_condition(G: SimpleGraph, profile: StarProfile):
    """Check e[U] <= sum_U j(v)*k for all 2^N subsets.

    Returns True, or the Witness for the lexicographically first violating U
    (ordering by the sorted vertex tuple).  Capped at N <= 24.
    """
    if G.N > _BRUTE_CAP:
        raise GraphError(f"N = {G.N} exceeds the brute-force cap {_BRUTE_CAP}")
    if profile.N != G.N:
        raise ProfileError("profile size does not match graph")
    inc = G.incident_edges()

    def rec(members: list[int], start: int, lhs: int, rhs: int):
        # lhs counts edges inside `members`; extend in lexicographic order.
        if lhs > rhs:
            return Witness(U=frozenset(members), lhs=lhs, rhs=rhs)
        for v in range(start, G.N):
            inside = sum(
                1 for eid in inc[v] if (G.edges[eid][0] in members or G.edges[eid][1] in members)
            )
            members.append(v)
            got = rec(members, v + 1, lhs + inside, rhs + profile.quota(v))
            members.pop()
            if got is not None:
                return got
        return None

    found = rec([], 0, 0, 0)
    return True if found is None else found


def write_decomposition(path: str | Path, D: StarDecomposition) -> None:
    """One line per star: "center: e1 e2 ... ek" (1-based ids)."""
    lines = [
        f"{star.center + 1}: " + " ".join(str(e + 1) for e in star.edge_ids)
        for star in D.stars
    ]
    Path(path).write_text("\n".join(lines) + "\n")


def read_decomposition(path: str | Path) -> StarDecomposition:
    stars = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            center_s, rest = line.split(":", 1)
            center = int(center_s) - 1
            ids = tuple(int(tok) - 1 for tok in rest.split())
        except ValueError as exc:
            raise GraphError(f"line {lineno}: malformed star line {raw!r}") from exc
        stars.append(Star(center=center, edge_ids=ids))
    return StarDecomposition(stars=tuple(stars))
