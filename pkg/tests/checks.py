"""Property checks shared by the unit and acceptance suites."""

from __future__ import annotations

import math

from logiso import SimpleFunction, log_fnorm

TOL = 1e-9


def norm(f: SimpleFunction, space) -> float:
    return log_fnorm(f, space).value


def fnorm_axiom_failures(space, f: SimpleFunction, g: SimpleFunction, alpha) -> list[str]:
    """Names of the F-norm axioms violated by this sample (empty when all hold)."""
    failures = []
    nf, ng = norm(f, space), norm(g, space)
    if f.is_zero != (nf == 0) or nf < 0:
        failures.append("positivity")
    if abs(alpha) <= 1 and norm(f.scale(alpha), space) > nf + TOL:
        failures.append("balanced")
    shrink = [norm(f.scale(2.0**-j), space) for j in range(1, 41)]
    if any(b > a + TOL for a, b in zip([nf] + shrink, shrink)) or shrink[-1] > TOL:
        failures.append("continuity")
    if norm(f + g, space) > nf + ng + TOL:
        failures.append("triangle")
    return failures


def submultiplicative_gap(space, f, g) -> float:
    return norm(f * g, space) - norm(f, space) - norm(g, space)


def isclose(a, b) -> bool:
    return math.isclose(a, b, rel_tol=TOL, abs_tol=TOL)
