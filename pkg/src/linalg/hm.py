import logging
from fractions import Fraction
from typing import List, Tuple

import numpy as np

from src import errors
from src.graph.components import ClassId, SignedComponents
from src.graph.models import GraphManifoldData
from src.linalg.matrix import RationalMatrix

logger = logging.getLogger(__name__)


def build_hm(data: GraphManifoldData, sc: SignedComponents) -> RationalMatrix:
    """
    The matrix H_M, rows and columns in vertex order

    h_vv = s(v) k_v - sum over self-loops at v of 2/b_e
    h_vv' = -sum over edges joining v, v' of 1/b_e when k_v k_v' > 0, else 0

    Charges are taken from ``sc`` so a reversed orientation is honoured.
    """
    labels = data.vertex_ids
    index = {v: i for i, v in enumerate(labels)}
    k = sc.charges
    h = np.full((len(labels), len(labels)), Fraction(0), dtype=object)
    for v in labels:
        h[index[v], index[v]] = sc.s[v] * k[v]
    for edge in data.edges:
        v, w = edge.ends
        if v == w:
            h[index[v], index[v]] -= Fraction(2, edge.b)
        elif k[v] * k[w] > 0:
            h[index[v], index[w]] -= Fraction(1, edge.b)
            h[index[w], index[v]] -= Fraction(1, edge.b)
    return RationalMatrix(h, labels)


def block_decompose(
    h: RationalMatrix, sc: SignedComponents
) -> List[Tuple[ClassId, RationalMatrix]]:
    """Split H_M into the diagonal blocks H_u of the signed classes"""
    for i, v in enumerate(h.labels):
        for j, w in enumerate(h.labels):
            if sc.class_of[v] != sc.class_of[w] and h[i, j] != 0:
                raise errors.CrossBlockNonzero(
                    f"h[{v}, {w}] = {h[i, j]} joins the distinct classes "
                    f"{sc.class_of[v]} and {sc.class_of[w]}"
                )
    return [(u, h.submatrix(members)) for u, members in sc.classes.items()]
