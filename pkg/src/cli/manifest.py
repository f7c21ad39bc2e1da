"""Reading and writing manifests"""
import json
import logging
from pathlib import Path
from typing import List, Tuple

from pydantic import ValidationError

from src import errors
from src.cli.models import Manifest, ManifestEdge, ManifestVertex
from src.graph.manifold import ingest_gluing
from src.graph.models import Edge, GluingDatum, GraphManifoldData, Vertex

logger = logging.getLogger(__name__)


def _raise_from_validation(exc: ValidationError) -> None:
    details = [
        {"loc": ".".join(str(p) for p in err["loc"]), "type": err["type"], "msg": err["msg"]}
        for err in exc.errors()
    ]
    rational = [d for d in details if d["type"] == "bad_rational"]
    if rational:
        raise errors.BadRational(f"{rational[0]['loc']}: {rational[0]['msg']}", details) from exc
    raise errors.BadManifest(f"manifest does not match the schema ({len(details)} errors)", details) from exc


def parse_manifest(text: str) -> Manifest:
    """
    Parse manifest JSON text

    :raises BadRational: for malformed rationals such as "1/0"
    :raises BadManifest: for any other schema violation
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise errors.BadManifest(f"manifest is not valid JSON: {exc}") from exc
    try:
        return Manifest.model_validate(raw)
    except ValidationError as exc:
        _raise_from_validation(exc)


def dump_manifest(manifest: Manifest) -> str:
    """Canonical JSON text: two-space indent, no null fields, trailing newline"""
    payload = manifest.model_dump(mode="json", exclude_none=True)
    return json.dumps(payload, indent=2) + "\n"


def load_manifest(path: Path) -> Tuple[Manifest, bytes]:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise errors.BadManifest(f"cannot read {path}: {exc.strerror}") from exc
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise errors.BadManifest(f"{path} is not UTF-8") from exc
    return parse_manifest(text), raw


def gluings_of(manifest: Manifest) -> List[GluingDatum]:
    return [GluingDatum(edge=e.id, matrix=e.gluing) for e in manifest.edges]


def to_graph_data(manifest: Manifest) -> GraphManifoldData:
    """Reduce a manifest of either form to graph manifold data"""
    if manifest.form == "gluing":
        logger.info(f"Ingesting {len(manifest.edges)} gluing matrices")
        return ingest_gluing(
            [v.id for v in manifest.vertices],
            [(e.id, e.ends) for e in manifest.edges],
            gluings_of(manifest),
        )
    return GraphManifoldData(
        vertices=[Vertex(id=v.id, charge=v.charge) for v in manifest.vertices],
        edges=[
            Edge(id=e.id, ends=e.ends, b=e.b, bw_sign=e.bw_sign or 1)
            for e in manifest.edges
        ],
    )


def from_graph_data(data: GraphManifoldData) -> Manifest:
    """Reduced-form manifest; bw_sign is written only when it is -1"""
    return Manifest(
        vertices=[ManifestVertex(id=v.id, charge=v.charge) for v in data.vertices],
        edges=[
            ManifestEdge(
                id=e.id,
                ends=e.ends,
                b=e.b,
                bw_sign=e.bw_sign if e.bw_sign == -1 else None,
            )
            for e in data.edges
        ],
    )


def ingest_manifest(manifest: Manifest) -> str:
    """Canonical text of the reduced-form manifest, as the ingest command writes it"""
    return dump_manifest(from_graph_data(to_graph_data(manifest)))
