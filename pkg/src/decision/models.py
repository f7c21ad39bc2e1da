from typing import Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from src.graph.models import EdgeId, VertexId
from src.linalg.matrix import Inertia
from src.rational import Rational

Strictness = Literal["strict", "weak"]


class CECertificate(BaseModel):
    """Solution {a, gamma} of the compatibility equation"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a: Dict[VertexId, Rational] = Field(..., description="Positive weight per vertex")
    gamma: Dict[EdgeId, Rational] = Field(..., description="Edge value, |gamma_e| <= 1")
    strictness: Strictness = Field(
        ..., description="strict: every |gamma_e| < 1; weak: every |gamma_e| <= 1"
    )


class BoundaryClass(BaseModel):
    """Classes c_w^+ and c_w^- on T_e, as coefficients in the basis (f_w, f_{-w})"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    c_plus: Tuple[Rational, Rational]
    c_minus: Tuple[Rational, Rational]


class BoundaryClasses(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    classes: Dict[str, BoundaryClass] = Field(
        ..., description="Per oriented edge key ('e:+' / 'e:-')"
    )
    scale: int = Field(..., ge=1, description="Least N making every coefficient integral")
    a: Dict[VertexId, Rational] = Field(..., description="The certificate's a multiplied by scale")


class MatrixPayload(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    labels: List[VertexId]
    rows: List[List[Rational]]


class ComponentsPayload(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    classes: Dict[str, List[VertexId]]
    e0_edges: List[EdgeId]
    bipartite: bool
    parts: Optional[Tuple[List[str], List[str]]] = None
    s: Dict[VertexId, int]
    orientation_flipped: bool
    parity_conflict: bool


class AnalysisReport(BaseModel):
    """Verdicts together with the evidence each one rests on"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    verdict_npc: bool = Field(..., description="M admits a metric of non-positive curvature")
    verdict_vf: bool = Field(..., description="M is virtually fibered over the circle")
    inertia: Inertia
    hm_is_zero: bool
    supersingular: bool
    hm: MatrixPayload
    components: ComponentsPayload
    kernel_basis: List[List[Rational]] = Field(default_factory=list)
    kernel_witness: Optional[List[Rational]] = None
    certificate: Optional[CECertificate] = None
    boundary_classes: Optional[BoundaryClasses] = None
    notes: List[str] = Field(default_factory=list)
