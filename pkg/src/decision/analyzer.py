import logging
from typing import List, Optional

from src import errors
from src.config import AnalysisSettings, get_settings
from src.decision.certificates import (
    boundary_classes,
    construct_certificate_supersingular,
    default_seeds,
    search_certificate,
)
from src.decision.models import (
    AnalysisReport,
    CECertificate,
    ComponentsPayload,
    MatrixPayload,
)
from src.graph.components import SignedComponents, signed_components
from src.graph.manifold import ensure_valid
from src.graph.models import GraphManifoldData
from src.linalg.hm import block_decompose, build_hm
from src.linalg.matrix import RationalMatrix, inertia, kernel_basis, supersingular_witness

logger = logging.getLogger(__name__)


class ManifoldAnalyzer:
    """Decide NPC metrics and virtual fibration from the matrix H_M"""

    def __init__(self, settings: Optional[AnalysisSettings] = None):
        self.settings = settings or get_settings()

    def decide(self, data: GraphManifoldData) -> AnalysisReport:
        """
        Analyze one graph manifold

        Verdicts rest on H_M alone:
        - NPC iff H_M has a negative eigenvalue, or H_M is zero and s vanishes
        - virtually fibered iff H_M has a negative eigenvalue or is supersingular
        Certificates are attached as supplementary evidence.

        :param data: decorated dual graph
        :return: verdicts, matrix data and certificates
        """
        ensure_valid(data)
        sc = signed_components(data)
        h = build_hm(data, sc)
        block_decompose(h, sc)

        counts = inertia(h)
        basis = kernel_basis(h)
        if len(basis) != counts.n_zero:
            raise AssertionError(
                f"kernel dimension {len(basis)} disagrees with n_zero={counts.n_zero}"
            )
        witness = supersingular_witness(h, basis)
        hm_is_zero = h.is_zero()
        supersingular = witness is not None

        # a zero H_M built with a nonvanishing s forces |gamma_e| = 1 on an internal edge
        s_vanishes = not any(sc.s.values())
        verdict_npc = counts.n_minus > 0 or (hm_is_zero and s_vanishes)
        verdict_vf = counts.n_minus > 0 or supersingular
        logger.info(
            f"Inertia {counts.n_plus}/{counts.n_zero}/{counts.n_minus}, "
            f"supersingular={supersingular}: NPC={verdict_npc}, VF={verdict_vf}"
        )

        notes = self._verdict_notes(counts.n_minus, hm_is_zero and s_vanishes, supersingular, sc)
        certificate = None
        boundary = None
        if self.settings.certify and verdict_vf:
            certificate = self._certify(data, sc, h, verdict_npc, witness, notes)
            if certificate is not None:
                boundary = boundary_classes(data, certificate)
                notes.append(
                    f"boundary classes integral after scaling a by {boundary.scale}"
                )

        return AnalysisReport(
            verdict_npc=verdict_npc,
            verdict_vf=verdict_vf,
            inertia=counts,
            hm_is_zero=hm_is_zero,
            supersingular=supersingular,
            hm=MatrixPayload(labels=h.labels, rows=h.rows()),
            components=ComponentsPayload(
                classes=sc.classes,
                e0_edges=sc.e0_edges,
                bipartite=sc.bipartite,
                parts=sc.parts,
                s=sc.s,
                orientation_flipped=sc.orientation_flipped,
                parity_conflict=sc.parity_conflict,
            ),
            kernel_basis=basis,
            kernel_witness=witness,
            certificate=certificate,
            boundary_classes=boundary,
            notes=notes,
        )

    def _certify(
        self,
        data: GraphManifoldData,
        sc: SignedComponents,
        h: RationalMatrix,
        verdict_npc: bool,
        witness,
        notes: List[str],
    ) -> Optional[CECertificate]:
        if not verdict_npc:
            # PSD and supersingular: the signed components carry parts
            try:
                certificate = construct_certificate_supersingular(data, sc, witness)
            except errors.VerificationFailed as exc:
                logger.error(f"Kernel witness certificate failed verification: {exc}")
                notes.append(f"certificate construction failed verification: {exc.message}")
                return None
            notes.append("weak certificate: a = |kernel witness|, gamma from the P/N/E0 split")
            return certificate

        certificate = search_certificate(
            data,
            max_iters=self.settings.max_iters,
            seeds=default_seeds(data, h, self.settings.seed_denominator),
            min_step=self.settings.min_step,
        )
        if certificate is None:
            notes.append(
                f"certificate: none found within {self.settings.max_iters} iterations; "
                "the verdict rests on H_M"
            )
        elif certificate.strictness == "strict":
            notes.append("strict certificate found by the exact LP search")
        else:
            notes.append("only a weak certificate was found; the verdict rests on H_M")
        return certificate

    @staticmethod
    def _verdict_notes(
        n_minus: int, zero_npc: bool, supersingular: bool, sc: SignedComponents
    ) -> List[str]:
        notes = []
        if n_minus > 0:
            notes.append(f"NPC and VF: H_M has {n_minus} negative eigenvalue(s)")
        elif zero_npc:
            notes.append("NPC and VF: H_M is the zero matrix and s vanishes")
        elif supersingular:
            notes.append("VF, not NPC: H_M is PSD and annihilates a nowhere-zero tuple")
        else:
            notes.append("neither: H_M is PSD, nonzero and not supersingular")
        if not sc.bipartite:
            notes.append("graph of signed components is not bipartite; s is identically zero")
        if sc.orientation_flipped:
            notes.append("orientation of M reversed so that a positive class lies in P")
        if sc.parity_conflict:
            notes.append("a charged class lies on the side opposite to its sign (parity conflict)")
        return notes


_analyzer = None


def get_analyzer(settings: Optional[AnalysisSettings] = None) -> ManifoldAnalyzer:
    """Get or create the analyzer; explicit settings always build a fresh one"""
    global _analyzer
    if settings is not None:
        return ManifoldAnalyzer(settings)
    if _analyzer is None:
        _analyzer = ManifoldAnalyzer()
    return _analyzer


def decide(data: GraphManifoldData) -> AnalysisReport:
    return get_analyzer().decide(data)
