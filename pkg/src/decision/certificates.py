"""
Certificates for the compatibility equation

    k_v a_v = sum over w = (v, e) in the star of v of gamma_e a_{e(v)} / b_e

A self-loop at v lies twice in the star of v and so contributes 2 gamma_e a_v / b_e.
"""
import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src import errors
from src.decision.models import BoundaryClass, BoundaryClasses, CECertificate, Strictness
from src.graph.components import SignedComponents
from src.graph.manifold import oriented_edges, stars
from src.graph.models import EdgeId, GraphManifoldData, VertexId
from src.linalg.matrix import RationalMatrix
from src.linalg.simplex import solve_lp
from src.rational import lcm_of_denominators, sign

logger = logging.getLogger(__name__)

Pair = Tuple[Fraction, Fraction]


def ce_residuals(
    data: GraphManifoldData, a: Dict[VertexId, Fraction], gamma: Dict[EdgeId, Fraction]
) -> Dict[VertexId, Fraction]:
    """Right-hand side minus left-hand side of the equation at every vertex"""
    edges = {e.id: e for e in data.edges}
    charges = data.charges
    residuals = {}
    for v, star in stars(data).items():
        rhs = sum(
            (gamma[w.edge] * a[w.head] / edges[w.edge].b for w in star), Fraction(0)
        )
        residuals[v] = rhs - charges[v] * a[v]
    return residuals


def verify_ce(data: GraphManifoldData, cert: CECertificate) -> bool:
    """
    Exact check of a certificate: positivity, the bound on gamma, and every equation

    :raises IndexMismatch: when the certificate's keys differ from the graph's ids
    """
    if set(cert.a) != set(data.vertex_ids) or set(cert.gamma) != {e.id for e in data.edges}:
        raise errors.IndexMismatch(
            "certificate indexes do not match the graph's vertices and edges"
        )
    if any(value <= 0 for value in cert.a.values()):
        return False
    bound_ok = (lambda g: abs(g) < 1) if cert.strictness == "strict" else (lambda g: abs(g) <= 1)
    if not all(bound_ok(g) for g in cert.gamma.values()):
        return False
    return all(r == 0 for r in ce_residuals(data, cert.a, cert.gamma).values())


def _classify(gamma: Dict[EdgeId, Fraction]) -> Optional[Strictness]:
    worst = max((abs(g) for g in gamma.values()), default=Fraction(0))
    if worst < 1:
        return "strict"
    if worst == 1:
        return "weak"
    return None


def construct_certificate_supersingular(
    data: GraphManifoldData, sc: SignedComponents, witness: Sequence[Fraction]
) -> CECertificate:
    """
    Weak certificate from a nowhere-zero kernel vector of a PSD H_M

    a_v = |l_v|; gamma_e = +1 on edges inside P-classes, -1 inside N-classes and 0 on E_0,
    read in the orientation the sign function was built for.
    """
    a = {v: abs(Fraction(x)) for v, x in zip(data.vertex_ids, witness)}
    e0 = set(sc.e0_edges)
    gamma = {}
    for edge in data.edges:
        if edge.id in e0:
            gamma[edge.id] = Fraction(0)
        else:
            gamma[edge.id] = Fraction(sc.orientation * sc.part_sign(sc.class_of[edge.ends[0]]))
    cert = CECertificate(a=a, gamma=gamma, strictness="weak")
    if not verify_ce(data, cert):
        raise errors.VerificationFailed(
            "kernel witness did not yield a solution of the compatibility equation",
            details=[{v: str(r)} for v, r in ce_residuals(data, a, gamma).items() if r != 0],
        )
    logger.info("Weak certificate built from the kernel witness")
    return cert


def minimize_gamma(
    data: GraphManifoldData, a: Dict[VertexId, Fraction]
) -> Optional[Tuple[Fraction, Dict[EdgeId, Fraction]]]:
    """
    For fixed a, the least t with a solution gamma of the equation and |gamma_e| <= t

    The equation is linear in gamma, so this is the exact LP
    min t s.t. the |V| equations and -t <= gamma_e <= t, with gamma_e = g+_e - g-_e.

    :return: (t, gamma), or None when no gamma solves the equation for this a
    """
    edge_ids = [e.id for e in data.edges]
    column = {edge_id: i for i, edge_id in enumerate(edge_ids)}
    n_edges = len(edge_ids)
    b = {e.id: e.b for e in data.edges}
    charges = data.charges

    a_eq, b_eq = [], []
    for v, star in stars(data).items():
        row = [Fraction(0)] * (2 * n_edges + 1)
        for w in star:
            coeff = a[w.head] / b[w.edge]
            row[column[w.edge]] += coeff
            row[n_edges + column[w.edge]] -= coeff
        a_eq.append(row)
        b_eq.append(charges[v] * a[v])

    a_ub, b_ub = [], []
    for i in range(n_edges):
        for direction in (1, -1):
            row = [Fraction(0)] * (2 * n_edges + 1)
            row[i] = Fraction(direction)
            row[n_edges + i] = Fraction(-direction)
            row[-1] = Fraction(-1)
            a_ub.append(row)
            b_ub.append(Fraction(0))

    c = [Fraction(0)] * (2 * n_edges) + [Fraction(1)]
    result = solve_lp(c, a_eq, b_eq, a_ub, b_ub)
    if result.status != "optimal":
        return None
    x = result.x
    gamma = {edge_id: x[i] - x[n_edges + i] for i, edge_id in enumerate(edge_ids)}
    return result.objective, gamma


def default_seeds(
    data: GraphManifoldData,
    h: Optional[RationalMatrix] = None,
    denominator: int = 64,
) -> List[Dict[VertexId, Fraction]]:
    """All-ones, then |eigenvector| of the least eigenvalue of H_M when available"""
    seeds = [{v: Fraction(1) for v in data.vertex_ids}]
    if h is not None and h.n:
        _, vectors = np.linalg.eigh(h.to_float())
        direction = np.abs(vectors[:, 0])
        top = float(direction.max())
        if top > 0:
            floor = Fraction(1, denominator)
            seeds.append({
                v: max(Fraction(float(x) / top).limit_denominator(denominator), floor)
                for v, x in zip(h.labels, direction)
            })
    return seeds


def search_certificate(
    data: GraphManifoldData,
    max_iters: int = 200,
    seeds: Optional[Iterable[Dict[VertexId, Fraction]]] = None,
    min_step: Fraction = Fraction(1, 64),
) -> Optional[CECertificate]:
    """
    Best-effort search for a certificate with the least max |gamma_e|

    Each seed and each candidate a costs one iteration. Coordinate descent multiplies one
    a_v at a time by 1+step or 1/(1+step); step halves after a sweep without progress.

    :return: the best certificate found if its gamma is bounded by 1, else None
    """
    best_t: Optional[Fraction] = None
    best_a: Optional[Dict[VertexId, Fraction]] = None
    best_gamma: Dict[EdgeId, Fraction] = {}
    iters = 0

    def consider(a: Dict[VertexId, Fraction]) -> bool:
        nonlocal best_t, best_a, best_gamma, iters
        iters += 1
        solved = minimize_gamma(data, a)
        if solved is None:
            return False
        t, gamma = solved
        logger.debug(f"a-update {iters}: max|gamma| = {t}")
        if best_t is None or t < best_t:
            best_t, best_a, best_gamma = t, dict(a), gamma
            return True
        return False

    for seed in seeds if seeds is not None else default_seeds(data):
        if iters >= max_iters:
            break
        consider(seed)
        if best_t is not None and best_t < 1:
            break

    step = Fraction(1)
    while best_t is not None and best_t >= 1 and iters < max_iters and step >= min_step:
        improved = False
        for v in data.vertex_ids:
            for factor in (1 + step, 1 / (1 + step)):
                if iters >= max_iters or best_t < 1:
                    break
                candidate = dict(best_a)
                candidate[v] = candidate[v] * factor
                improved |= consider(candidate)
        if not improved:
            step /= 2

    if best_t is None:
        logger.info(f"Certificate search found no solution in {iters} iterations")
        return None
    strictness = _classify(best_gamma)
    logger.info(f"Certificate search: max|gamma| = {best_t} after {iters} iterations")
    if strictness is None:
        return None
    cert = CECertificate(a=best_a, gamma=best_gamma, strictness=strictness)
    if not verify_ce(data, cert):
        raise errors.VerificationFailed("LP solution failed exact verification")
    return cert


def search_certificate_strict(
    data: GraphManifoldData,
    max_iters: int = 200,
    seeds: Optional[Iterable[Dict[VertexId, Fraction]]] = None,
    min_step: Fraction = Fraction(1, 64),
) -> Optional[CECertificate]:
    """A strict certificate (every |gamma_e| < 1), or None when the search is exhausted"""
    cert = search_certificate(data, max_iters=max_iters, seeds=seeds, min_step=min_step)
    if cert is None or cert.strictness != "strict":
        return None
    return cert


def wedge(x: Pair, y: Pair, b_w: int) -> Fraction:
    """x ^_w y for coefficients in the basis (f_w, f_{-w}), where f_w ^_w f_{-w} = b_w"""
    return (x[0] * y[1] - x[1] * y[0]) * b_w


def _boundary_pair(b_w: int, gamma_prime: Fraction, a_near: Fraction, a_far: Fraction):
    plus = (1 + gamma_prime) / (2 * b_w)
    minus = (1 - gamma_prime) / (2 * b_w)
    return (plus * a_far, plus * a_near), (-minus * a_far, minus * a_near)


def boundary_classes(data: GraphManifoldData, cert: CECertificate) -> BoundaryClasses:
    """
    Homology classes c_w^+ and c_w^- on every torus, scaled to be integral

    With b_w signed and gamma'_e = sgn(b_w) gamma_e:
      c_w^+ = (1 + gamma'_e) / (2 b_w) (a_v f_{-w} + a_{e(v)} f_w)
      c_w^- = (1 - gamma'_e) / (2 b_w) (a_v f_{-w} - a_{e(v)} f_w)

    :raises IdentityViolation: when the boundary identities fail
    """
    def compute(a: Dict[VertexId, Fraction]) -> Dict[str, BoundaryClass]:
        classes = {}
        for edge in data.edges:
            gamma_prime = sign(edge.signed_b) * cert.gamma[edge.id]
            for w in oriented_edges(edge):
                plus, minus = _boundary_pair(edge.signed_b, gamma_prime, a[w.tail], a[w.head])
                classes[w.key] = BoundaryClass(c_plus=plus, c_minus=minus)
        return classes

    unscaled = compute(cert.a)
    scale = lcm_of_denominators(
        x for c in unscaled.values() for pair in (c.c_plus, c.c_minus) for x in pair
    )
    a = {v: scale * value for v, value in cert.a.items()}
    classes = compute(a)
    _check_boundary_identities(data, classes, a)
    return BoundaryClasses(classes=classes, scale=scale, a=a)


def _check_boundary_identities(
    data: GraphManifoldData, classes: Dict[str, BoundaryClass], a: Dict[VertexId, Fraction]
) -> None:
    edges = {e.id: e for e in data.edges}
    f_w, charges = (Fraction(1), Fraction(0)), data.charges
    for v, star in stars(data).items():
        total = Fraction(0)
        for w in star:
            b_w = edges[w.edge].signed_b
            c = classes[w.key]
            c_w = (c.c_plus[0] + c.c_minus[0], c.c_plus[1] + c.c_minus[1])
            if wedge(f_w, c_w, b_w) != a[v]:
                raise errors.IdentityViolation(
                    f"f_w ^ c_w = {wedge(f_w, c_w, b_w)} differs from a_{v} = {a[v]} on {w.key}"
                )
            # ^_{-w} = -^_w
            total += -wedge((Fraction(0), Fraction(1, b_w)), c_w, b_w)

            opposite = classes[w.reverse().key]
            if opposite.c_plus != c.c_plus[::-1] or opposite.c_minus != (
                -c.c_minus[1], -c.c_minus[0]
            ):
                raise errors.IdentityViolation(f"c_w and c_(-w) disagree on {w.key}")
        if total != charges[v] * a[v]:
            raise errors.IdentityViolation(
                f"boundary sum {total} differs from k_v a_v = {charges[v] * a[v]} at {v}"
            )


def certificate_energy(
    data: GraphManifoldData, sc: SignedComponents, cert: CECertificate
) -> Optional[Fraction]:
    """
    -2 sum over e outside E_0 of (1 - sgn(e) gamma_e) a_e+ a_e- / b_e

    For any solution of the equation on a graph with parts (P, N) this equals a^T H_M a.
    None when the signed components carry no parts.
    """
    if sc.parts is None:
        return None
    e0 = set(sc.e0_edges)
    total = Fraction(0)
    for edge in data.edges:
        if edge.id in e0:
            continue
        gamma = sc.orientation * cert.gamma[edge.id]
        side = sc.part_sign(sc.class_of[edge.ends[0]])
        total += (1 - side * gamma) * cert.a[edge.ends[0]] * cert.a[edge.ends[1]] / edge.b
    return -2 * total


def witness_from_certificate(
    h: RationalMatrix, cert: CECertificate
) -> Optional[List[Fraction]]:
    """The certificate's a when it is annihilated by H_M, as happens for PSD H_M"""
    a = [cert.a[v] for v in h.labels]
    if all(x == 0 for x in h.matvec(a)):
        return a
    return None
