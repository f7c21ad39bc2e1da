"""
Oracle harness behind the ``selftest`` command

breadth 0 replays the six worked examples; every further unit of breadth widens the
exhaustive suite and adds 25 seeded random instances and matrices.
"""
import itertools
import logging
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict

from src import errors
from src.cli.generator import generate
from src.cli.manifest import (
    dump_manifest,
    from_graph_data,
    gluings_of,
    ingest_manifest,
    parse_manifest,
    to_graph_data,
)
from src.config import AnalysisSettings
from src.decision.analyzer import ManifoldAnalyzer
from src.decision.certificates import (
    boundary_classes,
    certificate_energy,
    verify_ce,
    witness_from_certificate,
)
from src.decision.models import AnalysisReport, CECertificate
from src.graph.components import signed_components
from src.graph.manifold import (
    change_sections,
    ingest_gluing,
    negate_charges,
    relabel,
    stars,
)
from src.graph.models import Edge, GraphManifoldData, Vertex
from src.linalg.hm import build_hm
from src.linalg.matrix import (
    RationalMatrix,
    float_inertia,
    inertia,
    laplacian_identity_rhs,
)
from src.rational import Rational

logger = logging.getLogger(__name__)

SEPARATION = 1e-6


class SelfTestFailure(BaseModel):
    model_config = ConfigDict(frozen=True)

    suite: str
    message: str
    replay: Optional[str] = None


class WorkedExample(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    name: str
    data: GraphManifoldData
    hm: List[List[Rational]]
    verdict_npc: bool
    verdict_vf: bool
    certificate: Optional[CECertificate] = None


def reduced_data(
    charges: Sequence, edges: Sequence[Tuple[int, int, int]] = ()
) -> GraphManifoldData:
    """Data with vertices v0, v1, ... and edges e0, e1, ... given as (i, j, b)"""
    return GraphManifoldData(
        vertices=[Vertex(id=f"v{i}", charge=Fraction(k)) for i, k in enumerate(charges)],
        edges=[
            Edge(id=f"e{n}", ends=(f"v{i}", f"v{j}"), b=b) for n, (i, j, b) in enumerate(edges)
        ],
    )


def worked_examples() -> List[WorkedExample]:
    one = Fraction(1)
    return [
        WorkedExample(
            name="A", data=reduced_data([1, -1], [(0, 1, 1)]),
            hm=[[one, 0], [0, one]], verdict_npc=False, verdict_vf=False,
        ),
        WorkedExample(
            name="B", data=reduced_data([1, 1], [(0, 1, 2)]),
            hm=[[one, Fraction(-1, 2)], [Fraction(-1, 2), one]],
            verdict_npc=False, verdict_vf=False,
        ),
        WorkedExample(
            name="C", data=reduced_data([1, 1], [(0, 1, 1)]),
            hm=[[one, -one], [-one, one]], verdict_npc=False, verdict_vf=True,
            certificate=CECertificate(a={"v0": 1, "v1": 1}, gamma={"e0": 1}, strictness="weak"),
        ),
        WorkedExample(
            name="D", data=reduced_data([0], [(0, 0, 1)]),
            hm=[[Fraction(-2)]], verdict_npc=True, verdict_vf=True,
            certificate=CECertificate(a={"v0": 1}, gamma={"e0": 0}, strictness="strict"),
        ),
        WorkedExample(
            name="E", data=reduced_data([4], [(0, 0, 1)]),
            hm=[[Fraction(2)]], verdict_npc=False, verdict_vf=False,
        ),
        WorkedExample(
            name="F", data=reduced_data([2], [(0, 0, 1)]),
            hm=[[Fraction(0)]], verdict_npc=False, verdict_vf=True,
            certificate=CECertificate(a={"v0": 1}, gamma={"e0": 1}, strictness="weak"),
        ),
    ]


def exhaustive_instances(
    max_vertices: int = 3,
    max_edges: int = 4,
    b_values: Sequence[int] = (1, 2),
    k_values: Sequence[int] = (-2, -1, 0, 1, 2),
) -> Iterator[GraphManifoldData]:
    """Every connected decorated multigraph within the bounds, loops and parallels included"""
    for n in range(1, max_vertices + 1):
        slots = [(i, j) for i in range(n) for j in range(i, n)]
        for m in range(n - 1, max_edges + 1):
            for shape in itertools.combinations_with_replacement(slots, m):
                graph = nx.MultiGraph()
                graph.add_nodes_from(range(n))
                graph.add_edges_from(shape)
                if not nx.is_connected(graph):
                    continue
                for bs in itertools.product(b_values, repeat=m):
                    for ks in itertools.product(k_values, repeat=n):
                        yield reduced_data(
                            ks, [(i, j, b) for (i, j), b in zip(shape, bs)]
                        )


def random_symmetric(rng: np.random.Generator, n: int) -> RationalMatrix:
    """Entries in [-5, 5] with denominators at most 4"""
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            d = int(rng.integers(1, 5))
            rows[i][j] = rows[j][i] = Fraction(int(rng.integers(-5 * d, 5 * d + 1)), d)
    return RationalMatrix.from_rows(rows)


def random_unimodular(rng: np.random.Generator, n: int, steps: int = 6) -> np.ndarray:
    """Product of integer elementary matrices"""
    s = np.array([[Fraction(int(i == j)) for j in range(n)] for i in range(n)], dtype=object)
    s = s.reshape(n, n)
    if n < 2:
        return s
    for _ in range(steps):
        i, j = (int(x) for x in rng.choice(n, size=2, replace=False))
        s[:, j] = s[:, j] + int(rng.integers(-2, 3)) * s[:, i]
    return s


def balanced_shifts(
    data: GraphManifoldData, rng: np.random.Generator
) -> Dict[str, int]:
    """Section changes summing to zero over every star"""
    shifts: Dict[str, int] = {}
    for star in stars(data).values():
        if not star:
            continue
        values = [int(rng.integers(-3, 4)) for _ in star[:-1]]
        values.append(-sum(values))
        shifts.update({w.key: m for w, m in zip(star, values)})
    return shifts


def _random_rational(rng: np.random.Generator) -> Fraction:
    return Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 4)))


class SelfTest:
    """Runs the oracle suites and collects counterexamples"""

    def __init__(self, settings: Optional[AnalysisSettings] = None):
        settings = settings or AnalysisSettings()
        self.analyzer = ManifoldAnalyzer(settings)
        self.fast = ManifoldAnalyzer(settings.model_copy(update={"certify": False}))
        self.failures: List[SelfTestFailure] = []

    def _fail(self, suite: str, message: str, data: Optional[GraphManifoldData] = None,
              matrix: Optional[RationalMatrix] = None) -> None:
        replay = None
        if data is not None:
            replay = dump_manifest(from_graph_data(data))
        elif matrix is not None:
            replay = repr(matrix)
        logger.error(f"[{suite}] {message}")
        self.failures.append(SelfTestFailure(suite=suite, message=message, replay=replay))

    def run(self, breadth: int = 1) -> List[SelfTestFailure]:
        self.failures = []
        self.check_worked_examples()
        if breadth >= 1:
            self.check_exhaustive(max_edges=min(breadth + 1, 4))
            self.check_random_instances(25 * breadth)
            self.check_random_matrices(25 * breadth)
        logger.info(f"Selftest breadth {breadth}: {len(self.failures)} failures")
        return self.failures

    def check_worked_examples(self) -> None:
        for example in worked_examples():
            report = self.analyzer.decide(example.data)
            if report.hm.rows != example.hm:
                self._fail("examples", f"{example.name}: H_M = {report.hm.rows}", example.data)
            if (report.verdict_npc, report.verdict_vf) != (example.verdict_npc, example.verdict_vf):
                self._fail(
                    "examples",
                    f"{example.name}: verdicts NPC={report.verdict_npc} VF={report.verdict_vf}",
                    example.data,
                )
            if example.certificate is not None:
                if not verify_ce(example.data, example.certificate):
                    self._fail("examples", f"{example.name}: reference certificate", example.data)
                if report.certificate is None or not verify_ce(example.data, report.certificate):
                    self._fail("examples", f"{example.name}: no verifying certificate", example.data)
                elif report.certificate.strictness != example.certificate.strictness:
                    self._fail(
                        "examples",
                        f"{example.name}: {report.certificate.strictness} certificate",
                        example.data,
                    )

    def check_exhaustive(self, max_edges: int) -> None:
        rng = np.random.default_rng(0)
        count = 0
        for data in exhaustive_instances(max_edges=max_edges):
            count += 1
            report = self.fast.decide(data)
            self._check_npc_implies_vf(data, report)
            if report.inertia.n_minus == 0 and report.verdict_vf and not report.verdict_npc:
                self._check_supersingular_branch(data)
            if report.inertia.n_minus == 0 and report.kernel_witness is not None:
                self._check_quadratic_identity(data, report, rng)
        logger.info(f"Exhaustive suite: {count} instances up to {max_edges} edges")

    def check_random_instances(self, count: int) -> None:
        for seed in range(count):
            rng = np.random.default_rng(1000 + seed)
            n_vertices = int(rng.integers(1, 5))
            n_edges = n_vertices - 1 + int(rng.integers(0, 4))
            denominator = int(rng.integers(1, 3))
            manifest = generate(n_vertices, n_edges, seed, charge_denominator=denominator)
            data = to_graph_data(manifest)
            try:
                report = self.analyzer.decide(data)
            except errors.FiberForgeError as exc:
                self._fail("random", f"seed {seed}: {exc.code} {exc.message}", data)
                continue
            self._check_npc_implies_vf(data, report)
            self._check_certificate(data, report)
            self._check_relabeling(data, report, rng)
            self._check_negation(data)
            if report.inertia.n_minus == 0 and report.kernel_witness is not None:
                self._check_quadratic_identity(data, report, rng)
            self._check_gluing(n_vertices, n_edges, seed, rng)

    def check_random_matrices(self, count: int) -> None:
        for seed in range(count):
            rng = np.random.default_rng(5000 + seed)
            h = random_symmetric(rng, int(rng.integers(1, 9)))
            exact = inertia(h)
            approx, separation = float_inertia(h)
            if separation >= SEPARATION and approx != exact:
                self._fail("float-oracle", f"exact {exact} vs floating {approx}", matrix=h)
            s = random_unimodular(rng, h.n)
            if inertia(h.congruent(s)) != exact:
                self._fail("sylvester", f"congruence changed the inertia {exact}", matrix=h)

    def _check_npc_implies_vf(self, data: GraphManifoldData, report: AnalysisReport) -> None:
        if report.verdict_npc and not report.verdict_vf:
            self._fail("npc-implies-vf", "NPC but not virtually fibered", data)

    def _check_supersingular_branch(self, data: GraphManifoldData) -> None:
        cert = self.analyzer.decide(data).certificate
        if cert is None or cert.strictness != "weak" or not verify_ce(data, cert):
            self._fail("supersingular", "no verifying weak certificate", data)
            return
        if any(g not in (-1, 0, 1) for g in cert.gamma.values()):
            self._fail("supersingular", f"gamma outside the P/N/E0 assignment: {cert.gamma}", data)
        h = build_hm(data, signed_components(data))
        if witness_from_certificate(h, cert) is None:
            self._fail("supersingular", "certificate weights are not a kernel vector", data)

    def _check_quadratic_identity(
        self, data: GraphManifoldData, report: AnalysisReport, rng: np.random.Generator
    ) -> None:
        h = RationalMatrix.from_rows(report.hm.rows, report.hm.labels)
        l = report.kernel_witness
        for _ in range(20):
            x = [_random_rational(rng) for _ in range(h.n)]
            if h.quadratic_form(x) != laplacian_identity_rhs(h, l, x):
                self._fail("quadratic-identity", f"fails at x = {x}", data)
                return

    def _check_certificate(self, data: GraphManifoldData, report: AnalysisReport) -> None:
        cert = report.certificate
        if cert is None:
            if report.verdict_vf and not report.verdict_npc:
                self._fail("certificate", "supersingular instance without certificate", data)
            return
        if not verify_ce(data, cert):
            self._fail("certificate", "attached certificate does not verify", data)
            return
        if cert.strictness == "strict" and max((abs(g) for g in cert.gamma.values()), default=0) >= 1:
            self._fail("certificate", "strict certificate with |gamma| = 1", data)
        scaled = cert.model_copy(update={"a": {v: Fraction(3, 2) * x for v, x in cert.a.items()}})
        if not verify_ce(data, scaled):
            self._fail("certificate", "scaling a broke the certificate", data)
        flipped = data.model_copy(update={
            "edges": [e.model_copy(update={"bw_sign": -e.bw_sign}) for e in data.edges]
        })
        for variant in (data, flipped):
            try:
                boundary_classes(variant, cert)
            except errors.IdentityViolation as exc:
                self._fail("boundary", exc.message, variant)
        sc = signed_components(data)
        energy = certificate_energy(data, sc, cert)
        if energy is not None:
            h = build_hm(data, sc)
            if h.quadratic_form([cert.a[v] for v in h.labels]) != energy:
                self._fail("energy", f"a^T H a differs from {energy}", data)

    def _check_relabeling(
        self, data: GraphManifoldData, report: AnalysisReport, rng: np.random.Generator
    ) -> None:
        # with a parity conflict the inertia depends on which class anchors P
        compare_inertia = not report.components.parity_conflict
        expected = (report.verdict_npc, report.verdict_vf, report.inertia if compare_inertia else None)
        for _ in range(10):
            vertex_order = [int(i) for i in rng.permutation(len(data.vertices))]
            edge_order = [int(i) for i in rng.permutation(len(data.edges))]
            vertex_map = {v.id: f"x{i}" for i, v in enumerate(data.vertices[j] for j in vertex_order)}
            edge_map = {e.id: f"f{i}" for i, e in enumerate(data.edges[j] for j in edge_order)}
            permuted = relabel(data, vertex_map, edge_map, vertex_order, edge_order)
            other = self.fast.decide(permuted)
            observed = (other.verdict_npc, other.verdict_vf, other.inertia if compare_inertia else None)
            if observed != expected:
                self._fail("relabel", "verdicts changed under relabeling", data)
                return

    def _check_negation(self, data: GraphManifoldData) -> None:
        sc, sc_negated = signed_components(data), signed_components(negate_charges(data))
        if sc.parity_conflict or sc_negated.parity_conflict:
            return
        if build_hm(data, sc) != build_hm(negate_charges(data), sc_negated):
            self._fail("negation", "H_M changed under charge negation", data)

    def _check_gluing(
        self, n_vertices: int, n_edges: int, seed: int, rng: np.random.Generator
    ) -> None:
        manifest = generate(n_vertices, n_edges, seed, gluing=True)
        data = to_graph_data(manifest)
        vertices = [v.id for v in manifest.vertices]
        edges = [(e.id, e.ends) for e in manifest.edges]
        shifted = ingest_gluing(
            vertices, edges, change_sections(gluings_of(manifest), balanced_shifts(data, rng))
        )
        if shifted != data:
            self._fail("gluing", "balanced section change altered the reduced data", data)
        reduced = parse_manifest(ingest_manifest(manifest))
        first = self.fast.decide(data).model_dump(mode="json")
        second = self.fast.decide(to_graph_data(reduced)).model_dump(mode="json")
        if first != second:
            self._fail("gluing", "gluing form and its ingested reduced form disagree", data)


def run_selftest(breadth: int = 1, settings: Optional[AnalysisSettings] = None) -> List[SelfTestFailure]:
    return SelfTest(settings).run(breadth)
