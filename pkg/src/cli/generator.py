import logging
import math
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from src import errors
from src.cli.models import Manifest, ManifestEdge, ManifestVertex

logger = logging.getLogger(__name__)

RationalRange = Tuple[Fraction, Fraction]
IntRange = Tuple[int, int]


def parse_range(text: str, integral: bool = False) -> Tuple:
    """Parse "LO..HI" into a pair; LO and HI are integers or p/q rationals"""
    lo, sep, hi = text.partition("..")
    if not sep:
        raise errors.BadManifest(f"range '{text}' is not of the form LO..HI")
    try:
        bounds = (Fraction(lo.strip()), Fraction(hi.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise errors.BadRational(f"range '{text}' has a malformed bound") from exc
    if bounds[0] > bounds[1]:
        raise errors.BadManifest(f"range '{text}' is empty")
    if integral:
        if any(x.denominator != 1 for x in bounds):
            raise errors.BadManifest(f"range '{text}' must have integer bounds")
        return int(bounds[0]), int(bounds[1])
    return bounds


def _unimodular_gluing(rng: np.random.Generator, beta: int, shift: int) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    """A primitive gluing matrix with top-right entry beta and determinant -1"""
    modulus = abs(beta)
    alpha = int(rng.integers(-3 * modulus, 3 * modulus + 1))
    if math.gcd(alpha, beta) != 1:
        alpha = 1
    # alpha * delta = -1 (mod |beta|)
    delta = (-pow(alpha, -1, modulus)) % modulus if modulus > 1 else 0
    gamma = (alpha * delta + 1) // beta
    return (alpha, beta), (gamma + shift * alpha, delta + shift * beta)


class ManifestGenerator:
    """Seeded random manifests: a random spanning tree plus extra edges"""

    def __init__(
        self,
        charge_range: RationalRange = (Fraction(-2), Fraction(2)),
        b_range: IntRange = (1, 3),
        charge_denominator: int = 1,
    ):
        if b_range[0] < 1 or b_range[0] > b_range[1]:
            raise errors.InfeasibleShape(f"b range {b_range} must lie in the positive integers")
        if charge_denominator < 1:
            raise errors.InfeasibleShape("charge denominator must be positive")
        low = math.ceil(charge_range[0] * charge_denominator)
        high = math.floor(charge_range[1] * charge_denominator)
        if low > high:
            raise errors.InfeasibleShape(
                f"no charge with denominator {charge_denominator} lies in {charge_range}"
            )
        self.charge_numerators = (low, high)
        self.charge_denominator = charge_denominator
        self.b_range = b_range

    def _shape(
        self, rng: np.random.Generator, n_vertices: int, n_edges: int
    ) -> List[Tuple[str, str]]:
        ends = []
        for child in range(1, n_vertices):
            parent = int(rng.integers(0, child))
            ends.append((f"v{parent}", f"v{child}"))
        for _ in range(n_edges - (n_vertices - 1)):
            v, w = rng.integers(0, n_vertices, size=2)
            ends.append((f"v{int(v)}", f"v{int(w)}"))
        order = rng.permutation(len(ends))
        return [ends[int(i)] for i in order]

    def generate(
        self, n_vertices: int, n_edges: int, seed: int, gluing: bool = False
    ) -> Manifest:
        """
        Generate a connected manifest

        :param n_vertices: number of blocks, at least 1
        :param n_edges: number of tori, at least n_vertices - 1
        :param seed: seed of the numpy generator; equal arguments give equal manifests
        :param gluing: emit gluing matrices instead of charges and intersection numbers
        :raises InfeasibleShape: when no connected graph has this shape
        """
        if n_vertices < 1:
            raise errors.InfeasibleShape("a manifest needs at least one vertex")
        if n_edges < n_vertices - 1:
            raise errors.InfeasibleShape(
                f"{n_edges} edges cannot connect {n_vertices} vertices"
            )
        rng = np.random.default_rng(seed)
        shape = self._shape(rng, n_vertices, n_edges)
        bs = [int(rng.integers(self.b_range[0], self.b_range[1] + 1)) for _ in shape]
        vertex_ids = [f"v{i}" for i in range(n_vertices)]

        if gluing:
            edges = []
            for i, (ends, b) in enumerate(zip(shape, bs)):
                beta = b if rng.integers(0, 2) else -b
                shift = int(rng.integers(-2, 3))
                edges.append(ManifestEdge(
                    id=f"e{i}", ends=ends, gluing=_unimodular_gluing(rng, beta, shift)
                ))
            manifest = Manifest(vertices=[ManifestVertex(id=v) for v in vertex_ids], edges=edges)
        else:
            low, high = self.charge_numerators
            charges = [
                Fraction(int(rng.integers(low, high + 1)), self.charge_denominator)
                for _ in vertex_ids
            ]
            manifest = Manifest(
                vertices=[ManifestVertex(id=v, charge=k) for v, k in zip(vertex_ids, charges)],
                edges=[
                    ManifestEdge(id=f"e{i}", ends=ends, b=b)
                    for i, (ends, b) in enumerate(zip(shape, bs))
                ],
            )
        logger.info(
            f"Generated {manifest.form} manifest: {n_vertices} vertices, {n_edges} edges, seed {seed}"
        )
        return manifest


def generate(
    n_vertices: int,
    n_edges: int,
    seed: int,
    charge_range: Optional[RationalRange] = None,
    b_range: Optional[IntRange] = None,
    charge_denominator: int = 1,
    gluing: bool = False,
) -> Manifest:
    generator = ManifestGenerator(
        charge_range=charge_range or (Fraction(-2), Fraction(2)),
        b_range=b_range or (1, 3),
        charge_denominator=charge_denominator,
    )
    return generator.generate(n_vertices, n_edges, seed, gluing=gluing)
