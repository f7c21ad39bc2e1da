from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, StrictInt, model_validator

from src.decision.models import AnalysisReport
from src.rational import Rational

SCHEMA_VERSION = 1

GluingMatrix = Tuple[Tuple[StrictInt, StrictInt], Tuple[StrictInt, StrictInt]]


class ManifestVertex(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", arbitrary_types_allowed=True)

    id: str = Field(..., min_length=1)
    charge: Optional[Rational] = Field(
        None, description="Exact charge; absent in gluing-form manifests"
    )


class ManifestEdge(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    id: str = Field(..., min_length=1)
    ends: Tuple[str, str]
    b: Optional[StrictInt] = Field(None, description="Intersection number (reduced form)")
    bw_sign: Optional[Literal[1, -1]] = Field(None, description="Sign of b_w (reduced form)")
    gluing: Optional[GluingMatrix] = Field(
        None, description="Rows (f_-w, s_-w) in the basis (f_w, s_w) (gluing form)"
    )


class Manifest(BaseModel):
    """A graph manifold in reduced form or in gluing form, never both"""
    model_config = ConfigDict(frozen=True, extra="forbid", arbitrary_types_allowed=True)

    schema_version: Literal[1] = SCHEMA_VERSION
    vertices: List[ManifestVertex]
    edges: List[ManifestEdge] = Field(default_factory=list)

    @property
    def form(self) -> Literal["reduced", "gluing"]:
        if any(e.gluing is not None for e in self.edges):
            return "gluing"
        if self.edges or any(v.charge is not None for v in self.vertices):
            return "reduced"
        return "gluing"

    @model_validator(mode="after")
    def _one_form(self) -> "Manifest":
        if self.form == "gluing":
            if any(v.charge is not None for v in self.vertices):
                raise ValueError("gluing-form manifests carry no charges")
            for e in self.edges:
                if e.gluing is None or e.b is not None or e.bw_sign is not None:
                    raise ValueError(f"edge '{e.id}' mixes reduced and gluing data")
        else:
            for v in self.vertices:
                if v.charge is None:
                    raise ValueError(f"vertex '{v.id}' has no charge")
            for e in self.edges:
                if e.b is None:
                    raise ValueError(f"edge '{e.id}' has no intersection number b")
        return self


class ReportEnvelope(BaseModel):
    """Report payload plus provenance; only ``report`` is deterministic"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    input_digest: str = Field(..., description="sha256 of the input manifest bytes")
    tool_version: str
    report: AnalysisReport
    elapsed_ms: float = Field(..., ge=0.0)
