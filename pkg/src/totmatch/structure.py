"""Structural decomposition and bounded-subdeterminant recognition.

Given a target bound on the maximum subdeterminant, either produce a small
hitting set Z such that G - Z is a disjoint union of paths, or certify that
the bound is exceeded. The certificates are constructive lower bounds: a
high-degree vertex, a near-pencil product over a suitable vertex set D, a
family of vertex-disjoint cycles, or an explicit submatrix witness.

On top of the decomposition sits `recognize`: value-preserving reductions
(deleting bare-path components, contracting long degree-2 runs) shrink the
graph to a core whose per-component maximum subdeterminants are computed
exactly and multiplied.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .errors import InputError, PreconditionError, SizeCapError
from .graphs import (Graph, Subgraph, classify_paths_and_cycles, components,
                     delete_vertices, induced_subgraph)
from .subdet import (DEFAULT_PRINCIPAL_CAP, ElementColoring, SubdetResult,
                     _is_forest, max_subdet_brute, max_subdet_principal,
                     witness_determinant)

# Hard cap on the element count of a single shrunken-core component fed to
# the full-mode search. Recognition is meant for small bounds, where the
# early-exit threshold keeps the search shallow; larger cores are reported
# as a resource error rather than attempted.
RECOGNIZE_CORE_CAP = 28

# A degree-2 run of this many vertices can be contracted to a single vertex
# without changing the maximum subdeterminant (6 removed vertices and edges;
# 6 is divisible by both 2 and 3, which the case analysis needs).
CONTRACTION_RUN = 7


# ---------------------------------------------------------------------------
# Certificates


@dataclass(frozen=True)
class DegreeCertificate:
    """A vertex of degree d proves a lower bound of d - 1 (near-pencil on
    the vertex and its incident edges)."""

    vertex: int
    degree: int

    kind = "degree_exceeds"

    def lower_bound(self, g: Graph) -> int:
        if not (1 <= self.vertex <= g.n) or g.degree(self.vertex) != self.degree:
            raise InputError("degree certificate does not match the graph")
        return self.degree - 1


@dataclass(frozen=True)
class NearPencilCertificate:
    """A vertex set D, each member with >= 2 neighbors outside D, proves a
    lower bound of prod_{v in D} (d_H(v) - 1)."""

    vertices: tuple[int, ...]

    kind = "too_many_high_degree_vertices"

    def lower_bound(self, g: Graph) -> int:
        return near_pencil_lower_bound(g, self.vertices)


@dataclass(frozen=True)
class CycleCertificate:
    """k vertex-disjoint cycles prove a lower bound of 2^k."""

    cycles: tuple[tuple[int, ...], ...]

    kind = "too_many_disjoint_cycles"

    def lower_bound(self, g: Graph) -> int:
        seen: set[int] = set()
        for cyc in self.cycles:
            if len(cyc) < 3:
                raise InputError("certificate cycle shorter than 3 vertices")
            for i, v in enumerate(cyc):
                w = cyc[(i + 1) % len(cyc)]
                if w not in g.neighbors(v):
                    raise InputError(f"certificate cycle edge {v}-{w} missing")
            if seen.intersection(cyc):
                raise InputError("certificate cycles are not vertex-disjoint")
            seen.update(cyc)
        return 2 ** len(self.cycles)


@dataclass(frozen=True)
class SubdetCertificate:
    """An explicit square submatrix of M(core) with |det| = value.

    `core` is the graph obtained from the input by value-preserving
    reductions (bare-path component deletion, degree-2 run contraction), so
    the witness determinant is a lower bound on the input's maximum
    subdeterminant as well. The core is embedded in the certificate so the
    determinant can be recomputed independently.
    """

    core: Graph
    witness: ElementColoring
    value: int

    kind = "subdeterminant_found"

    def lower_bound(self, g: Graph) -> int:
        if witness_determinant(self.core, self.witness) != self.value:
            raise InputError("submatrix witness does not match claimed value")
        return self.value


Certificate = Union[DegreeCertificate, NearPencilCertificate,
                    CycleCertificate, SubdetCertificate]


def verify_certificate(g: Graph, cert: Certificate, bound: int) -> bool:
    """True iff the certificate is valid for g and proves a value > bound."""
    try:
        return cert.lower_bound(g) > bound
    except (InputError, PreconditionError):
        return False


# ---------------------------------------------------------------------------
# Outcome and decomposition types


@dataclass(frozen=True)
class DeltaOutcome:
    kind: str  # "exact" or "exceeds"
    value: Optional[int] = None  # set when exact
    certificate: Optional[Certificate] = None  # set when exceeds

    def __post_init__(self):
        if self.kind not in ("exact", "exceeds"):
            raise InputError(f"unknown outcome kind {self.kind!r}")
        if self.kind == "exact" and self.value is None:
            raise InputError("exact outcome needs a value")
        if self.kind == "exceeds" and self.certificate is None:
            raise InputError("exceeds outcome needs a certificate")


@dataclass(frozen=True)
class Decomposition:
    """Z = X ∪ Y with G - Z a disjoint union of paths.

    X is the set of vertices of degree >= 3, Y hits every cycle of G - X
    (minimum-id vertex per cycle). `residual` is G - Z with back-references
    to host ids; `attachments` lists, for each residual path component (in
    classification order), its edges into Z as (path vertex, Z vertex)
    host-id pairs.
    """

    Z: tuple[int, ...]
    X: tuple[int, ...]
    Y: tuple[int, ...]
    cut_size: int
    residual: Subgraph
    attachments: tuple[tuple[tuple[int, int], ...], ...]


# ---------------------------------------------------------------------------
# Near-pencil lower bound (block-diagonal principal submatrix)


def near_pencil_lower_bound(g: Graph, D) -> int:
    """prod_{v in D} (d_H(v) - 1), where H keeps only the edges between D
    and its complement. This is a lower bound on the maximum subdeterminant:
    rows/columns for each v in D together with its outside edges select a
    block-diagonal principal submatrix whose blocks are near-pencils.

    Every v in D must have >= 2 neighbors outside D. D = empty set gives 1.
    """
    dset = set()
    for v in D:
        if not (1 <= int(v) <= g.n):
            raise InputError(f"vertex {v} out of range")
        dset.add(int(v))
    product = 1
    for v in sorted(dset):
        outside = sum(1 for u in g.neighbors(v) if u not in dset)
        if outside < 2:
            raise PreconditionError(
                f"vertex {v} has {outside} neighbors outside D, needs >= 2")
        product *= outside - 1
    return product


# ---------------------------------------------------------------------------
# Decomposition


def compute_decomposition(g: Graph, bound: int) -> Union[Decomposition, DeltaOutcome]:
    """Hitting set Z with G - Z a union of paths, or an exceeds certificate.

    Certificates are tried in order: (a) a vertex of degree > bound + 1;
    (b) if 2^|X| > bound^7 for X the degree->=3 vertices, a near-pencil
    vertex set D with 2^|D| > bound, found via a greedy vertex-disjoint
    K_{1,3} packing and a proper 3-coloring of the remaining paths/cycles;
    (c) more than log2(bound) vertex-disjoint cycles in G - X. Otherwise Z
    is X plus one vertex per remaining cycle.
    """
    if bound < 1:
        raise InputError("bound must be >= 1")

    # (a) single high-degree vertex.
    for v in range(1, g.n + 1):
        if g.degree(v) > bound + 1:
            return DeltaOutcome(
                kind="exceeds",
                certificate=DegreeCertificate(vertex=v, degree=g.degree(v)))

    X = tuple(v for v in range(1, g.n + 1) if g.degree(v) >= 3)

    # (b) too many degree->=3 vertices: 2^|X| > bound^7 forces a near-pencil
    # set D with 2^|D| > bound (counting: |X| <= 4p + 3|D|).
    if 2 ** len(X) > bound ** 7:
        return DeltaOutcome(kind="exceeds",
                            certificate=_near_pencil_certificate(g, X, bound))

    rest = delete_vertices(g, X)
    classification = classify_paths_and_cycles(rest.graph)
    host_cycles = tuple(
        tuple(rest.host_vertex(v) for v in cyc) for cyc in classification.cycles)

    # (c) too many disjoint cycles outside X: 2^k > bound.
    if 2 ** len(host_cycles) > bound:
        return DeltaOutcome(kind="exceeds",
                            certificate=CycleCertificate(cycles=host_cycles))

    Y = tuple(sorted(min(cyc) for cyc in host_cycles))
    Z = tuple(sorted(X + Y))
    zset = set(Z)
    residual = delete_vertices(g, Z)
    cut_size = sum(1 for (u, v, _w) in g.edges if (u in zset) != (v in zset))

    attachments = []
    for path in classify_paths_and_cycles(residual.graph).paths:
        hooks = []
        for v in path:
            host = residual.host_vertex(v)
            hooks.extend((host, w) for w in g.neighbors(host) if w in zset)
        attachments.append(tuple(sorted(hooks)))
    return Decomposition(Z=Z, X=X, Y=Y, cut_size=cut_size,
                         residual=residual, attachments=tuple(attachments))


def _near_pencil_certificate(g: Graph, X: tuple[int, ...],
                             bound: int) -> NearPencilCertificate:
    """Near-pencil set D with 2^|D| > bound, given 2^|X| > bound^7.

    Greedy maximal vertex-disjoint K_{1,3} packing: if it has p stars and
    2^p > bound, the p centers work (each keeps its 3 leaves outside D).
    Otherwise the unpacked graph has maximum degree <= 2; properly 3-color
    its paths and cycles and take, among unpacked vertices of degree >= 3
    in g, the largest color class: a stable set keeping all neighbors
    outside D. Counting gives |X| <= 4p + 3|D|, so one case must fire.
    """
    covered = [False] * (g.n + 1)
    centers = []
    for v in range(1, g.n + 1):
        if covered[v]:
            continue
        free = [u for u in g.neighbors(v) if not covered[u]]
        if len(free) >= 3:
            centers.append(v)
            covered[v] = True
            for u in free[:3]:
                covered[u] = True
    if 2 ** len(centers) > bound:
        return NearPencilCertificate(vertices=tuple(centers))

    unpacked = delete_vertices(g, [v for v in range(1, g.n + 1) if covered[v]])
    classification = classify_paths_and_cycles(unpacked.graph)
    color = {}
    for path in classification.paths:
        for i, v in enumerate(path):
            color[unpacked.host_vertex(v)] = i % 2
    for cyc in classification.cycles:
        for i, v in enumerate(cyc):
            host = unpacked.host_vertex(v)
            color[host] = i % 2
            if len(cyc) % 2 and i == len(cyc) - 1:
                color[host] = 2
    classes = [[], [], []]
    for v, c in color.items():
        if g.degree(v) >= 3:
            classes[c].append(v)
    best = max(classes, key=len)
    if 2 ** len(best) <= bound:
        raise AssertionError("packing/coloring argument yielded no certificate")
    return NearPencilCertificate(vertices=tuple(sorted(best)))


# ---------------------------------------------------------------------------
# Value-preserving reductions


def contract_degree2_run(g: Graph) -> Optional[Graph]:
    """Contract one run of 7 consecutive degree-2 vertices to a single
    degree-2 vertex joined to the two former outer neighbors. Preserves the
    maximum subdeterminant. Returns None when no eligible run exists.

    A run v1..v7 with outer neighbors v0, v8 is eligible only if v0 and v8
    lie outside the run and differ (otherwise contraction would need a
    parallel edge or a loop; a 7- or 8-cycle is therefore left alone).
    """
    run = _find_degree2_run(g)
    if run is None:
        return None
    v0, inner, v8 = run
    dropped = set(inner[1:])  # inner[0] survives as the contracted vertex
    w = inner[0]
    new_edges = []
    for (u, v, wt) in g.edges:
        if u in dropped or v in dropped:
            if {u, v} == {inner[-1], v8}:
                new_edges.append((w, v8, wt))
            continue
        new_edges.append((u, v, wt))
    keep = [v for v in range(1, g.n + 1) if v not in dropped]
    relabel = {old: i + 1 for i, old in enumerate(keep)}
    return Graph.build(
        len(keep),
        [(relabel[u], relabel[v], wt) for (u, v, wt) in new_edges],
        vertex_weights=[g.vertex_weight(v) for v in keep])


def _find_degree2_run(g: Graph) -> Optional[tuple[int, list[int], int]]:
    """First eligible (v0, [v1..v7], v8) in scan order: start vertex
    ascending, then the smaller-id outer neighbor first."""
    for v1 in range(1, g.n + 1):
        if g.degree(v1) != 2:
            continue
        for v0 in g.neighbors(v1):
            run = [v1]
            prev = v0
            while len(run) < CONTRACTION_RUN:
                nxt = next((u for u in g.neighbors(run[-1]) if u != prev), None)
                if nxt is None or g.degree(nxt) != 2 or nxt in run or nxt == v0:
                    run = None
                    break
                prev = run[-1]
                run.append(nxt)
            if run is None:
                continue
            v8 = next(u for u in g.neighbors(run[-1]) if u != run[-2])
            if v8 not in run and v8 != v0:
                return v0, run, v8
    return None


def shrink_to_core(g: Graph, bound: int) -> Graph:
    """Delete components that are bare paths (they contribute a factor of 1),
    then contract degree-2 runs until none of length 7 remains."""
    if bound < 1:
        raise InputError("bound must be >= 1")
    keep: list[int] = []
    for sub in components(g):
        h = sub.graph
        if _is_forest(h) and h.max_degree() <= 2:
            continue  # a bare path: totally unimodular, factor 1
        keep.extend(sub.vertex_ids)
    core = induced_subgraph(g, keep).graph
    while (contracted := contract_degree2_run(core)) is not None:
        core = contracted
    return core


# ---------------------------------------------------------------------------
# Recognition


def recognize(g: Graph, bound: int) -> DeltaOutcome:
    """Exact maximum subdeterminant when it is <= bound, else an exceeds
    certificate. Pipeline: decomposition (certificates for hopeless inputs),
    shrink to core, per-component subdeterminant (principal mode on forest
    components, full mode with early exit otherwise), product across
    components.
    """
    if bound < 1:
        raise InputError("bound must be >= 1")
    decomposition = compute_decomposition(g, bound)
    if isinstance(decomposition, DeltaOutcome):
        return decomposition

    core = shrink_to_core(g, bound)
    product = 1
    done: list[tuple[Subgraph, SubdetResult]] = []
    for sub in components(core):
        comp = sub.graph
        if comp.num_elements > RECOGNIZE_CORE_CAP:
            raise SizeCapError(
                f"shrunken core component has {comp.num_elements} elements, "
                f"recognition cap is {RECOGNIZE_CORE_CAP}",
                size=comp.num_elements, cap=RECOGNIZE_CORE_CAP)
        if _is_forest(comp):
            res = max_subdet_principal(comp, cap=DEFAULT_PRINCIPAL_CAP)
        else:
            res = max_subdet_brute(comp, early_exit=bound,
                                   cap=RECOGNIZE_CORE_CAP)
        if not res.exhaustive:
            # Early exit fired: this single component already beats the bound.
            return DeltaOutcome(
                kind="exceeds",
                certificate=SubdetCertificate(core=comp, witness=res.witness,
                                              value=res.value))
        product *= res.value
        done.append((sub, res))
        if product > bound:
            return DeltaOutcome(
                kind="exceeds",
                certificate=SubdetCertificate(
                    core=core, witness=_lift_witnesses(core, done),
                    value=product))
    return DeltaOutcome(kind="exact", value=product)


def _lift_witnesses(core: Graph,
                    parts: list[tuple[Subgraph, SubdetResult]]) -> ElementColoring:
    """Combine per-component witnesses into one coloring of the core. The
    constraint matrix is block-diagonal across components, so the combined
    submatrix determinant is the product of the parts."""
    red: list = []
    cyan: list = []
    for sub, res in parts:
        for source, sink in ((res.witness.red, red), (res.witness.cyan, cyan)):
            for elem in source:
                if elem.kind == "v":
                    sink.append(core.elements()[sub.host_vertex(elem.index) - 1])
                else:
                    sink.append(core.elements()[core.n + sub.host_edge(elem.index) - 1])
    return ElementColoring(red=tuple(red), cyan=tuple(cyan))


# ---------------------------------------------------------------------------
# Serialization


def certificate_to_json(cert: Certificate) -> dict:
    if isinstance(cert, DegreeCertificate):
        return {"kind": cert.kind, "vertex": cert.vertex, "degree": cert.degree}
    if isinstance(cert, NearPencilCertificate):
        return {"kind": cert.kind, "vertices": list(cert.vertices)}
    if isinstance(cert, CycleCertificate):
        return {"kind": cert.kind, "cycles": [list(c) for c in cert.cycles]}
    if isinstance(cert, SubdetCertificate):
        from .graphs import format_graph
        return {"kind": cert.kind,
                "value": cert.value,
                "red": [str(e) for e in cert.witness.red],
                "cyan": [str(e) for e in cert.witness.cyan],
                "core": format_graph(cert.core)}
    raise InputError(f"unknown certificate type {type(cert).__name__}")


def format_certificate(cert: Certificate) -> str:
    data = certificate_to_json(cert)
    lines = [f"certificate: {data.pop('kind')}"]
    for key, value in data.items():
        if key == "core":
            lines.append("core: |")
            lines.extend("  " + ln for ln in value.rstrip("\n").splitlines())
        elif isinstance(value, list):
            lines.append(f"{key}: " + " ".join(
                str(tuple(x)) if isinstance(x, list) else str(x) for x in value))
        else:
            lines.append(f"{key}: {value}")
    return "\n".join(lines)
