"""Shared samplers and small utilities for the test suite."""

from __future__ import annotations

import numpy as np

from eqo import (
    QuadraticGenerator,
    assemble_generator,
    logdet_branch_gap,
    transfer_matrix,
)
from eqo.linalg import SingularMatrix, mat_det


def disk(rng) -> complex:
    """One sample uniform in the closed complex unit disk."""
    return complex(np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform()))


def disk_matrix(n, rng, radius=1.0) -> np.ndarray:
    return radius * np.array([[disk(rng) for _ in range(n)] for _ in range(n)])


def symmetric_disk_matrix(n, rng, radius=1.0) -> np.ndarray:
    m = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(i, n):
            m[i, j] = m[j, i] = radius * disk(rng)
    return m


def random_generator(n, rng, norm_cap=None) -> QuadraticGenerator:
    """Random generator with entries uniform in the unit disk.

    With ``norm_cap`` the assembled R is rescaled (only downward) so its
    spectral norm does not exceed the cap.
    """
    g = assemble_generator(
        symmetric_disk_matrix(n, rng), disk_matrix(n, rng), symmetric_disk_matrix(n, rng)
    )
    if norm_cap is not None:
        nr = np.linalg.norm(g.R, 2)
        if nr > norm_cap:
            g = g.scaled(norm_cap / nr)
    return g


def guarded_generator(rng, *, n_choices=(1, 2, 3), norm_cap=1.5, det_floor=0.02,
                      branch_safe=False, max_tries=500):
    """Rejection-sample a generator whose decomposition is well-conditioned.

    Guards: |det T22| >= det_floor, and (optionally) a determinant path that
    does not wind across the principal log cut.  Returns (generator, counts)
    where counts records how many draws each guard rejected.
    """
    counts = {"det": 0, "branch": 0}
    for _ in range(max_tries):
        n = int(rng.choice(n_choices))
        g = random_generator(n, rng, norm_cap=norm_cap)
        t = transfer_matrix(g)
        if abs(mat_det(t.T22)) < det_floor:
            counts["det"] += 1
            continue
        if branch_safe:
            try:
                gap = logdet_branch_gap(g, steps=200)
            except SingularMatrix:
                counts["branch"] += 1
                continue
            if gap > 0.5:
                counts["branch"] += 1
                continue
        return g, counts
    raise RuntimeError(f"no admissible generator in {max_tries} draws")
