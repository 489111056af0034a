"""Discrete fractional p-Laplacian on an interval mesh.

For piecewise-constant functions on a uniform cell mesh, extended by
zero outside (a, b), the Gagliardo double integral with kernel
|x - y|^(-(1+sigma)) splits into pairwise cell-cell weights K[i][j] and
exterior tail weights T[i].  Both have closed forms through the second
antiderivative of the kernel,

    Q(t) = t^(1-sigma) / (sigma * (1 - sigma)),   t >= 0,

namely, for cells [a1, b1] and [a2, b2] with b1 <= a2,

    K = Q(a2-a1) - Q(a2-b1) - Q(b2-a1) + Q(b2-b1),

and for the tail of cell [a1, b1] past the right endpoint b,

    Q(b-a1) - Q(b-b1),

symmetrically on the left.  The diagonal vanishes: a function constant
on a cell has no self-interaction.  Adjacent cells are fine because
1 + sigma < 2 keeps the pair integral convergent.

The energy carried by a vector u of nodal values is

    seminorm_energy(u) = (1/p) * [ sum_{i!=j} K[i][j] |u_i-u_j|^p
                                   + 2 * sum_i T[i] |u_i|^p ],

and apply_operator returns its exact gradient, the discrete operator

    A(u)_i = 2 * sum_{j!=i} K[i][j] op(u_i-u_j, p) + 2 T[i] op(u_i, p)

with op the signed power.  pairing(A(u), u) = p * seminorm_energy(u)
by p-homogeneity.
"""

from dataclasses import dataclass

import numpy as np

from .core import Mesh1D, MeshMismatchError, odd_power


class KernelError(ValueError):
    """Raised for inadmissible kernel orders or non-uniform meshes."""


@dataclass(frozen=True)
class KernelMatrix:
    """Pairwise weights K (symmetric, zero diagonal), tails T, order sigma."""

    K: np.ndarray
    T: np.ndarray
    sigma: float
    mesh: Mesh1D

    @property
    def n(self):
        return self.mesh.n

    @classmethod
    def from_sigma(cls, mesh, sigma):
        """Assemble the weights for kernel |x-y|^(-(1+sigma)) on mesh."""
        sigma = float(sigma)
        if not 0.0 < sigma < 1.0 - 1e-12:
            raise KernelError(
                "kernel order sigma must lie in (0, 1), got sigma=%g" % sigma)
        edges = mesh.cell_edges
        widths = np.diff(edges)
        if not np.allclose(widths, widths[0], rtol=1e-12, atol=0.0):
            raise KernelError("kernel assembly needs a uniform mesh")

        def Q(t):
            # second antiderivative of t^(-(1+sigma)), zero at 0
            t = np.maximum(t, 0.0)
            return t ** (1.0 - sigma) / (sigma * (1.0 - sigma))

        lo = edges[:-1]
        hi = edges[1:]
        # ordered so that cell j sits right of cell i; symmetrize after
        A1 = lo[:, None]
        B1 = hi[:, None]
        A2 = lo[None, :]
        B2 = hi[None, :]
        K = Q(A2 - A1) - Q(A2 - B1) - Q(B2 - A1) + Q(B2 - B1)
        K = np.triu(K, k=1)
        K = K + K.T
        T = (Q(mesh.b - lo) - Q(mesh.b - hi)) + (Q(hi - mesh.a) - Q(lo - mesh.a))
        return cls(K=K, T=T, sigma=sigma, mesh=mesh)


def assemble_kernel(mesh, params):
    """KernelMatrix for the problem's kernel order sigma = p*s."""
    return KernelMatrix.from_sigma(mesh, params.p * params.s)


def _check_values(kern, u):
    u = np.asarray(u, dtype=float)
    if u.shape != (kern.n,):
        raise MeshMismatchError(
            "expected %d nodal values, got shape %r" % (kern.n, u.shape))
    return u


def seminorm_energy(kern, u, p):
    """(1/p) times the discrete Gagliardo p-seminorm to the p-th power."""
    u = _check_values(kern, u)
    diff = np.abs(u[:, None] - u[None, :])
    pair = float(np.sum(kern.K * diff ** p))
    tail = 2.0 * float(np.dot(kern.T, np.abs(u) ** p))
    return (pair + tail) / p


def apply_operator(kern, u, p):
    """Discrete fractional p-Laplacian; exact gradient of seminorm_energy."""
    u = _check_values(kern, u)
    D = u[:, None] - u[None, :]
    S = np.sign(D) * np.abs(D) ** (p - 1.0)
    return 2.0 * np.sum(kern.K * S, axis=1) + 2.0 * kern.T * odd_power(u, p)


def seminorm_energy_and_operator(kern, u, p):
    """Energy and its gradient together, sharing the pairwise powers."""
    u = _check_values(kern, u)
    D = u[:, None] - u[None, :]
    absD = np.abs(D)
    P1 = absD ** (p - 1.0)
    pair = float(np.sum(kern.K * (P1 * absD)))
    absu = np.abs(u)
    up1 = absu ** (p - 1.0)
    tail = 2.0 * float(np.dot(kern.T, up1 * absu))
    energy = (pair + tail) / p
    grad = (2.0 * np.sum(kern.K * np.sign(D) * P1, axis=1)
            + 2.0 * kern.T * np.sign(u) * up1)
    return energy, grad


def pairing(au, phi):
    """Duality pairing of an operator output with a test vector."""
    au = np.asarray(au, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if au.shape != phi.shape:
        raise MeshMismatchError(
            "pairing of mismatched shapes %r and %r" % (au.shape, phi.shape))
    return float(np.dot(au, phi))
