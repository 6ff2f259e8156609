"""Shared test helpers: random basis transport of a (module, filtration) pair."""
from __future__ import annotations

from phinmod.filtration import Filtration
from phinmod.linalg import Subspace, inv, mat_mul, mat_vec, sample_invertible
from phinmod.modules import PhiNModule


def transport(mod: PhiNModule, fil: Filtration, seed: int):
    """Conjugate by one random invertible matrix per slot and push the flag."""
    desc, shape, r = mod.desc, mod.shape, mod.rank
    f = shape.f
    gs = [sample_invertible(desc, r, seed + 101 * i) for i in range(f)]
    gs_inv = [inv(g) for g in gs]
    phi = tuple(
        mat_mul(gs[(i + 1) % f], mat_mul(mod.phi[i], gs_inv[i])) for i in range(f)
    )
    nmat = tuple(mat_mul(gs[i], mat_mul(mod.nmat[i], gs_inv[i])) for i in range(f))
    moved = PhiNModule(desc, shape, r, phi, nmat)
    steps = []
    for (i, j) in shape.sigmas():
        sig = fil.sigma_steps(i, j)
        steps.append(
            tuple(
                (jump, Subspace.from_vectors(desc, r, [mat_vec(gs[i], g) for g in v.gens]))
                for jump, v in sig
            )
        )
    return moved, Filtration(desc, shape, r, tuple(steps))
