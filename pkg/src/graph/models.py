from fractions import Fraction
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from src.rational import Rational

VertexId = str
EdgeId = str


class Vertex(BaseModel):
    """A block M_v of the decomposition together with its charge k_v"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    id: VertexId = Field(..., description="Opaque vertex token, unique within a manifest")
    charge: Rational = Field(Fraction(0), description="Charge k_v of the block")


class Edge(BaseModel):
    """A JSJ torus T_e joining two (possibly equal) blocks"""
    model_config = ConfigDict(frozen=True)

    id: EdgeId = Field(..., description="Opaque edge token, unique within a manifest")
    ends: Tuple[VertexId, VertexId] = Field(
        ..., description="Endpoints; equal for a self-loop"
    )
    b: int = Field(..., description="Intersection number b_e = |b_w|")
    bw_sign: Literal[1, -1] = Field(
        1, description="Sign of b_w for the orientation ends[0] -> ends[1]"
    )

    @property
    def is_loop(self) -> bool:
        return self.ends[0] == self.ends[1]

    @property
    def signed_b(self) -> int:
        """b_w = b_{-w} as a signed integer"""
        return self.bw_sign * self.b


class OrientedEdge(BaseModel):
    """An element w of W. direction +1 runs ends[0] -> ends[1]"""
    model_config = ConfigDict(frozen=True)

    edge: EdgeId
    tail: VertexId
    head: VertexId
    direction: Literal[1, -1]

    @property
    def key(self) -> str:
        return f"{self.edge}:{'+' if self.direction == 1 else '-'}"

    def reverse(self) -> "OrientedEdge":
        return OrientedEdge(
            edge=self.edge, tail=self.head, head=self.tail, direction=-self.direction
        )


class GraphManifoldData(BaseModel):
    """Decorated dual graph of a graph manifold"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    vertices: List[Vertex] = Field(default_factory=list)
    edges: List[Edge] = Field(default_factory=list)

    @property
    def vertex_ids(self) -> List[VertexId]:
        return [v.id for v in self.vertices]

    @property
    def charges(self) -> dict:
        return {v.id: v.charge for v in self.vertices}

    def edge(self, edge_id: EdgeId) -> Edge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise KeyError(edge_id)


class GluingDatum(BaseModel):
    """
    Gluing matrix of one JSJ torus

    Rows express (f_{-w}, s_{-w}) in the near-side basis (f_w, s_w), where w runs from
    ends[0] to ends[1] of the edge.
    """
    model_config = ConfigDict(frozen=True)

    edge: EdgeId
    matrix: Tuple[Tuple[int, int], Tuple[int, int]]

    @property
    def determinant(self) -> int:
        (alpha, beta), (gamma, delta) = self.matrix
        return alpha * delta - beta * gamma


class Violation(BaseModel):
    model_config = ConfigDict(frozen=True)

    code: str
    message: str


class ValidationResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    violations: List[Violation] = Field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def first(self) -> Optional[Violation]:
        return self.violations[0] if self.violations else None
