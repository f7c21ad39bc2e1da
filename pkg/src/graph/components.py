"""
Graph of signed components

Vertices are equivalent when a path joins them along which consecutive charges have a
strictly positive product. The quotient by this relation is the graph of signed components;
a 2-coloring of it defines the sign function s used on the diagonal of H_M.
"""
import logging
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import networkx as nx
from networkx.algorithms import bipartite
from networkx.utils import UnionFind
from pydantic import BaseModel, ConfigDict, Field

from src.graph.models import EdgeId, GraphManifoldData, VertexId
from src.rational import Rational, sign

logger = logging.getLogger(__name__)

ClassId = str


class SignedComponents(BaseModel):
    """Partition of V into signed classes and the resulting sign function"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    classes: Dict[ClassId, List[VertexId]] = Field(
        ..., description="Class id (smallest member) -> sorted members"
    )
    class_of: Dict[VertexId, ClassId]
    sigma: Dict[ClassId, int] = Field(..., description="Common charge sign of each class")
    e0_edges: List[EdgeId] = Field(..., description="Edges joining distinct classes")
    bipartite: bool
    parts: Optional[Tuple[List[ClassId], List[ClassId]]] = Field(
        None, description="Partition (P, N) of the classes, absent when s vanishes"
    )
    s: Dict[VertexId, int]
    charges: Dict[VertexId, Rational] = Field(
        ..., description="Charges in the orientation the sign function was built for"
    )
    orientation_flipped: bool = False
    parity_conflict: bool = Field(
        False, description="Some class lies on the side opposite to its charge sign"
    )

    @property
    def orientation(self) -> int:
        """-1 when every charge was negated, +1 otherwise"""
        return -1 if self.orientation_flipped else 1

    def part_sign(self, class_id: ClassId) -> int:
        """+1 for P, -1 for N, 0 when no parts exist"""
        if self.parts is None:
            return 0
        return 1 if class_id in self.parts[0] else -1


def compute_classes(data: GraphManifoldData) -> Dict[ClassId, List[VertexId]]:
    """
    Equivalence classes of vertices joined through positive charge products

    :param data: validated graph data
    :return: classes keyed by their lexicographically smallest member
    """
    charges = data.charges
    forest = UnionFind(data.vertex_ids)
    for edge in data.edges:
        v, w = edge.ends
        if charges[v] * charges[w] > 0:
            forest.union(v, w)

    classes: Dict[ClassId, List[VertexId]] = {}
    for members in forest.to_sets():
        ordered = sorted(members)
        classes[ordered[0]] = ordered
    return dict(sorted(classes.items()))


def factor_graph(
    data: GraphManifoldData, classes: Dict[ClassId, List[VertexId]]
) -> Tuple[List[EdgeId], nx.MultiGraph]:
    """E_0 and the factor multigraph on class ids"""
    class_of = {v: u for u, members in classes.items() for v in members}
    graph = nx.MultiGraph()
    graph.add_nodes_from(classes)
    e0: List[EdgeId] = []
    for edge in data.edges:
        u, u_prime = class_of[edge.ends[0]], class_of[edge.ends[1]]
        if u != u_prime:
            e0.append(edge.id)
            graph.add_edge(u, u_prime, key=edge.id)
    return e0, graph


def _class_signs(
    classes: Dict[ClassId, List[VertexId]], charges: Dict[VertexId, Fraction]
) -> Dict[ClassId, int]:
    return {u: sign(charges[members[0]]) for u, members in classes.items()}


def sign_function(
    data: GraphManifoldData,
    classes: Dict[ClassId, List[VertexId]],
    e0: List[EdgeId],
    graph: nx.MultiGraph,
) -> SignedComponents:
    """
    Complete the signed components with the bipartition and the sign function

    If no class is positive but some is negative, all charges are negated first
    (a change of orientation of M).
    """
    charges = dict(data.charges)
    sigma = _class_signs(classes, charges)
    is_bipartite = nx.is_bipartite(graph)
    class_of = {v: u for u, members in classes.items() for v in members}
    zero = {v: 0 for v in data.vertex_ids}

    def result(s, parts=None, flipped=False, conflict=False) -> SignedComponents:
        return SignedComponents(
            classes=classes,
            class_of=class_of,
            sigma=sigma,
            e0_edges=e0,
            bipartite=is_bipartite,
            parts=parts,
            s=s,
            charges=charges,
            orientation_flipped=flipped,
            parity_conflict=conflict,
        )

    if all(k == 0 for k in charges.values()):
        logger.debug("All charges vanish; s is identically zero")
        return result(zero)
    if not is_bipartite:
        logger.info("Graph of signed components is not bipartite; s is identically zero")
        return result(zero)

    flipped = False
    if not any(value > 0 for value in sigma.values()):
        charges = {v: -k for v, k in charges.items()}
        sigma = {u: -value for u, value in sigma.items()}
        flipped = True
        logger.info("No positive class; orientation of M reversed")

    anchor = min(u for u, value in sigma.items() if value > 0)
    # the factor graph is connected, so the coloring is unique up to a swap
    coloring = bipartite.color(graph)
    positive_color = coloring[anchor]
    p_side = sorted(u for u in classes if coloring[u] == positive_color)
    n_side = sorted(u for u in classes if coloring[u] != positive_color)
    misplaced = [u for u in n_side if sigma[u] > 0] + [u for u in p_side if sigma[u] < 0]
    conflict = bool(misplaced)
    if conflict:
        logger.warning(f"Classes on the side opposite to their charge sign: {sorted(misplaced)}")

    s = {v: 1 if class_of[v] in p_side else -1 for v in data.vertex_ids}
    return result(s, parts=(p_side, n_side), flipped=flipped, conflict=conflict)


def signed_components(data: GraphManifoldData) -> SignedComponents:
    classes = compute_classes(data)
    e0, graph = factor_graph(data, classes)
    components = sign_function(data, classes, e0, graph)
    logger.info(
        f"Signed components: {len(classes)} classes, |E0|={len(e0)}, "
        f"bipartite={components.bipartite}, flipped={components.orientation_flipped}"
    )
    return components
