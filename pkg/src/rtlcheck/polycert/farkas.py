"""
Farkas certificates: checking them, and a Fourier-Motzkin projection that
produces them.

A certificate for ``P |= c`` is a nonnegative combination of the constraints of
P whose coefficients are those of c and whose bound is at most the bound of c.
Checking one is exact rational arithmetic; finding one is the job of an
untrusted procedure such as :func:`fm_project`.
"""

import itertools
import logging
from fractions import Fraction
from typing import Mapping, Sequence

from rtlcheck.errors import UsageError
from rtlcheck.polycert.constraints import Constraint, FarkasCert, Polyhedron

logger = logging.getLogger(__name__)


def combine(p: Polyhedron, cert: FarkasCert) -> Constraint:
    """
    The constraint ``sum(lambda_i * P_i)``

    Raises
    ------
    UsageError
        if the certificate names a constraint P does not have
    """
    result = Constraint.of({}, 0)
    for i, q in cert.lambdas:
        if not 0 <= i < len(p):
            raise UsageError(f"certificate index {i} out of range for {len(p)} constraints")
        result = result + p[i].scale(q)
    return result


def check_entailment(p: Polyhedron, c: Constraint, cert: FarkasCert) -> bool:
    """
    Check that a certificate proves that every point of P satisfies c

    Examples
    --------
    >>> p = Polyhedron.of([Constraint.of({1: 1, 2: 1}, 1), Constraint.of({1: 1, 2: -1}, 2)])
    >>> c = Constraint.of({1: 1}, Fraction(3, 2))
    >>> check_entailment(p, c, FarkasCert.of({0: Fraction(1, 2), 1: Fraction(1, 2)}))
    True
    >>> check_entailment(p, c, FarkasCert.of({0: Fraction(1, 2), 1: Fraction(1, 3)}))
    False
    """
    combined = combine(p, cert)
    return combined.coeffs == c.coeffs and combined.bound <= c.bound


def check_inclusion(p: Polyhedron, q: Polyhedron, certs: Sequence[FarkasCert]) -> bool:
    """
    Check that P is included in Q, given one certificate per constraint of Q

    Raises
    ------
    UsageError
        if the number of certificates differs from the number of constraints of Q
    """
    if len(certs) != len(q):
        raise UsageError(f"{len(q)} certificates expected, got {len(certs)}")
    return all(check_entailment(p, c, cert) for c, cert in zip(q, certs))


def fm_project(p: Polyhedron, v: int) -> tuple[Polyhedron, list[FarkasCert]]:
    """
    Eliminate a variable by Fourier-Motzkin.

    Constraints without v are kept as they are, with a unit certificate. Every
    pair of a constraint with a positive coefficient a_i on v and one with a
    negative coefficient a_j gives the combination with multipliers
    -a_j / (a_i - a_j) and a_i / (a_i - a_j), which cancels v. No redundancy
    is removed.

    Parameters
    ----------
    p : Polyhedron
        the polyhedron
    v : int
        the variable to eliminate

    Returns
    -------
    tuple[Polyhedron, list[FarkasCert]]
        the projection, which contains the exact projection of P, and a
        certificate of each of its constraints against P

    Examples
    --------
    >>> p = Polyhedron.of([Constraint.of({1: 1, 2: 1}, 1), Constraint.of({1: 1, 2: -1}, 2)])
    >>> projected, certs = fm_project(p, 2)
    >>> print(projected)
    0: x1 <= 3/2
    >>> print(certs[0])
    (0: 1/2, 1: 1/2)
    """
    zero = [i for i, c in enumerate(p) if c.coeff(v) == 0]
    positive = [i for i, c in enumerate(p) if c.coeff(v) > 0]
    negative = [i for i, c in enumerate(p) if c.coeff(v) < 0]

    constraints = [p[i] for i in zero]
    certs = [FarkasCert.unit(i) for i in zero]
    for i, j in itertools.product(positive, negative):
        a_i, a_j = p[i].coeff(v), p[j].coeff(v)
        cert = FarkasCert.of({i: -a_j / (a_i - a_j), j: a_i / (a_i - a_j)})
        constraints.append(combine(p, cert))
        certs.append(cert)

    logger.debug(
        f"eliminating x{v}: {len(zero)} kept, {len(positive)}x{len(negative)} combined"
    )
    return Polyhedron.of(constraints), certs


def compose(outer: FarkasCert, inner: Sequence[FarkasCert]) -> FarkasCert:
    """
    Certificate against P of a constraint certified by ``outer`` against a
    polyhedron whose i-th constraint is certified by ``inner[i]`` against P.
    """
    lambdas: dict[int, Fraction] = {}
    for k, mu in outer.lambdas:
        for i, q in inner[k].lambdas:
            lambdas[i] = lambdas.get(i, Fraction(0)) + mu * q
    return FarkasCert.of(lambdas)


def fm_project_all(p: Polyhedron, variables: Sequence[int]) -> tuple[Polyhedron, list[FarkasCert]]:
    """
    Eliminate several variables in sequence, every certificate of the result
    referring to the constraints of the original polyhedron.
    """
    current = p
    certs = [FarkasCert.unit(i) for i in range(len(p))]
    for v in variables:
        current, step = fm_project(current, v)
        certs = [compose(cert, certs) for cert in step]
    return current, certs


def grid_check(
    p: Polyhedron,
    q: Polyhedron,
    box: Mapping[int, tuple[int, int]] | tuple[int, int],
) -> bool:
    """
    Brute-force inclusion test on the integer points of a box

    Parameters
    ----------
    p, q : Polyhedron
        the polyhedra
    box : Mapping[int, tuple[int, int]] | tuple[int, int]
        inclusive range of each variable, or one range for all of them

    Returns
    -------
    bool
        True iff every integer point of the box in P is in Q
    """
    variables = sorted(p.variables | q.variables)
    if isinstance(box, tuple):
        box = {v: box for v in variables}
    ranges = [range(box[v][0], box[v][1] + 1) for v in variables]
    for values in itertools.product(*ranges):
        point = dict(zip(variables, values))
        if p.contains(point) and not q.contains(point):
            return False
    return True
