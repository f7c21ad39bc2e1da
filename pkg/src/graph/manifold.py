"""Operations on the decorated dual graph: validation, stars, gluing ingestion"""
import logging
from collections import Counter, defaultdict
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from src import errors
from src.graph.models import (
    Edge,
    EdgeId,
    GluingDatum,
    GraphManifoldData,
    OrientedEdge,
    ValidationResult,
    Vertex,
    VertexId,
    Violation,
)
from src.rational import sign

logger = logging.getLogger(__name__)

_ERRORS_BY_CODE = {
    cls.code: cls
    for cls in (
        errors.EmptyGraph,
        errors.DisconnectedGraph,
        errors.NonPositiveB,
        errors.DuplicateId,
        errors.UnknownVertex,
    )
}


def to_multigraph(data: GraphManifoldData) -> nx.MultiGraph:
    """Dual graph as a networkx MultiGraph; edges are keyed by edge id"""
    graph = nx.MultiGraph()
    graph.add_nodes_from(data.vertex_ids)
    for edge in data.edges:
        graph.add_edge(edge.ends[0], edge.ends[1], key=edge.id, b=edge.b)
    return graph


def validate(data: GraphManifoldData) -> ValidationResult:
    """
    Check the structural invariants of a dual graph

    :param data: decorated graph
    :return: every violation found, in a stable order
    """
    violations: List[Violation] = []

    if not data.vertices:
        violations.append(Violation(code=errors.EmptyGraph.code, message="graph has no vertices"))
        return ValidationResult(violations=violations)

    for kind, ids in (("vertex", data.vertex_ids), ("edge", [e.id for e in data.edges])):
        for token, count in sorted(Counter(ids).items()):
            if count > 1:
                violations.append(Violation(
                    code=errors.DuplicateId.code,
                    message=f"{kind} id '{token}' occurs {count} times",
                ))

    known = set(data.vertex_ids)
    dangling = False
    for edge in data.edges:
        if edge.b < 1:
            violations.append(Violation(
                code=errors.NonPositiveB.code,
                message=f"edge '{edge.id}' has b={edge.b}; intersection numbers are >= 1",
            ))
        for end in edge.ends:
            if end not in known:
                dangling = True
                violations.append(Violation(
                    code=errors.UnknownVertex.code,
                    message=f"edge '{edge.id}' references unknown vertex '{end}'",
                ))

    graph = to_multigraph(data)
    if not dangling and not nx.is_connected(graph):
        components = nx.number_connected_components(graph)
        violations.append(Violation(
            code=errors.DisconnectedGraph.code,
            message=f"dual graph has {components} connected components",
        ))

    return ValidationResult(violations=violations)


def ensure_valid(data: GraphManifoldData) -> None:
    """Raise the first validation violation as its error class"""
    result = validate(data)
    if result.valid:
        return
    first = result.first()
    raise _ERRORS_BY_CODE[first.code](
        first.message, details=[v.model_dump() for v in result.violations]
    )


def oriented_edges(edge: Edge) -> Tuple[OrientedEdge, OrientedEdge]:
    forward = OrientedEdge(edge=edge.id, tail=edge.ends[0], head=edge.ends[1], direction=1)
    return forward, forward.reverse()


def oriented_star(data: GraphManifoldData, v: VertexId) -> List[OrientedEdge]:
    """
    The set of oriented edges initiating at v

    A self-loop at v contributes both of its orientations.
    """
    if v not in set(data.vertex_ids):
        raise errors.UnknownVertex(f"vertex '{v}' is not in the graph")
    return [w for edge in data.edges for w in oriented_edges(edge) if w.tail == v]


def stars(data: GraphManifoldData) -> Dict[VertexId, List[OrientedEdge]]:
    result: Dict[VertexId, List[OrientedEdge]] = {v: [] for v in data.vertex_ids}
    for edge in data.edges:
        for w in oriented_edges(edge):
            result[w.tail].append(w)
    return result


def negate_charges(data: GraphManifoldData) -> GraphManifoldData:
    """Global orientation flip of M: every charge changes sign"""
    return GraphManifoldData(
        vertices=[Vertex(id=v.id, charge=-v.charge) for v in data.vertices],
        edges=list(data.edges),
    )


def relabel(
    data: GraphManifoldData,
    vertex_map: Mapping[VertexId, VertexId],
    edge_map: Mapping[EdgeId, EdgeId],
    vertex_order: Optional[Sequence[int]] = None,
    edge_order: Optional[Sequence[int]] = None,
) -> GraphManifoldData:
    """Rename and reorder vertices and edges without touching the decoration"""
    vertex_order = vertex_order if vertex_order is not None else range(len(data.vertices))
    edge_order = edge_order if edge_order is not None else range(len(data.edges))
    vertices = [data.vertices[i] for i in vertex_order]
    edges = [data.edges[i] for i in edge_order]
    return GraphManifoldData(
        vertices=[Vertex(id=vertex_map[v.id], charge=v.charge) for v in vertices],
        edges=[
            Edge(
                id=edge_map[e.id],
                ends=(vertex_map[e.ends[0]], vertex_map[e.ends[1]]),
                b=e.b,
                bw_sign=e.bw_sign,
            )
            for e in edges
        ],
    )


def _check_gluing(datum: GluingDatum) -> None:
    if datum.determinant != -1:
        raise errors.BadDeterminant(
            f"gluing of edge '{datum.edge}' has determinant {datum.determinant}, expected -1"
        )
    if datum.matrix[0][1] == 0:
        raise errors.FiberMatch(
            f"gluing of edge '{datum.edge}' matches the fibers (b_w = 0)"
        )


def ingest_gluing(
    vertices: Sequence[VertexId],
    edges: Sequence[Tuple[EdgeId, Tuple[VertexId, VertexId]]],
    gluings: Sequence[GluingDatum],
) -> GraphManifoldData:
    """
    Reduce raw gluing matrices to charges and intersection numbers

    For the gluing [[alpha, beta], [gamma, delta]] of an edge oriented tail -> head,
    f_{-w} = alpha f_w + beta s_w, so b_w = beta and the tail gains alpha/beta.
    Inverting, f_w = -delta f_{-w} + beta s_{-w}, so the head gains -delta/beta.
    The sections of a block are assumed to sum to zero in its homology.

    :param vertices: vertex ids in manifest order
    :param edges: (edge id, (tail, head)) pairs in manifest order
    :param gluings: one gluing datum per edge
    :return: the reduced graph manifold data
    """
    by_edge: Dict[EdgeId, GluingDatum] = {}
    for datum in gluings:
        if datum.edge in by_edge:
            raise errors.DuplicateId(f"edge '{datum.edge}' has more than one gluing")
        by_edge[datum.edge] = datum

    charges: Dict[VertexId, Fraction] = defaultdict(Fraction)
    reduced: List[Edge] = []
    for edge_id, (tail, head) in edges:
        datum = by_edge.get(edge_id)
        if datum is None:
            raise errors.MissingGluing(f"edge '{edge_id}' has no gluing matrix")
        _check_gluing(datum)
        (alpha, beta), (_, delta) = datum.matrix
        charges[tail] += Fraction(alpha, beta)
        charges[head] += Fraction(-delta, beta)
        reduced.append(Edge(id=edge_id, ends=(tail, head), b=abs(beta), bw_sign=sign(beta)))

    unused = set(by_edge) - {edge_id for edge_id, _ in edges}
    if unused:
        raise errors.BadManifest(f"gluings given for unknown edges: {sorted(unused)}")

    logger.debug(f"Ingested {len(reduced)} gluings into charges {dict(charges)}")
    return GraphManifoldData(
        vertices=[Vertex(id=v, charge=charges[v]) for v in vertices],
        edges=reduced,
    )


def change_sections(
    gluings: Sequence[GluingDatum],
    shifts: Mapping[str, int],
) -> List[GluingDatum]:
    """
    Apply the section changes s_w -> s_w + m_w f_w to gluing matrices

    ``shifts`` maps oriented edge keys ("e:+" for the tail side, "e:-" for the head side)
    to m_w. The reduced data is unchanged when the shifts sum to zero over every star.
    """
    changed = []
    for datum in gluings:
        near = shifts.get(f"{datum.edge}:+", 0)
        far = shifts.get(f"{datum.edge}:-", 0)
        (alpha, beta), (gamma, delta) = datum.matrix
        # [[1, 0], [far, 1]] . G . [[1, 0], [-near, 1]]
        alpha, gamma = alpha - beta * near, gamma - delta * near
        gamma, delta = gamma + far * alpha, delta + far * beta
        changed.append(GluingDatum(edge=datum.edge, matrix=((alpha, beta), (gamma, delta))))
    return changed
