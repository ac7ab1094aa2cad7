"""Independent brute-force oracles used to pin expected values.

Everything here is deliberately written against raw numpy arrays with
explicit index loops or full-space kron products, so it shares no code
path with the library implementations it checks.
"""

import functools

import numpy as np


def kron_all(mats):
    return functools.reduce(np.kron, mats)


def embed(op, axis, n):
    mats = [np.eye(2, dtype=complex)] * n
    mats[axis] = op
    return kron_all(mats)


def bits_of(index, n):
    return [(index >> (n - 1 - q)) & 1 for q in range(n)]


def partial_trace_index_sum(rho, n, keep_axes):
    """Reduced matrix by explicit summation over traced-out bitstrings."""
    keep_axes = list(keep_axes)
    traced = [q for q in range(n) if q not in keep_axes]
    k = len(keep_axes)
    out = np.zeros((2**k, 2**k), dtype=complex)
    for r in range(2**k):
        rbits = bits_of(r, k)
        for c in range(2**k):
            cbits = bits_of(c, k)
            for t in range(2 ** len(traced)):
                tbits = bits_of(t, len(traced)) if traced else []
                row = [0] * n
                col = [0] * n
                for axis, b in zip(keep_axes, rbits):
                    row[axis] = b
                for axis, b in zip(keep_axes, cbits):
                    col[axis] = b
                for axis, b in zip(traced, tbits):
                    row[axis] = b
                    col[axis] = b
                i = int("".join(map(str, row)), 2)
                j = int("".join(map(str, col)), 2)
                out[r, c] += rho[i, j]
    return out


def dephase_block_zero(rho, axis, basis, n):
    """Dephasing by zeroing off-diagonal blocks in the measurement basis.

    ``basis`` is the 2x2 unitary whose columns are the measured-qubit
    eigenvectors.  The state is rotated so that basis becomes computational,
    entries connecting different eigenvalues of the measured qubit are
    zeroed, and the rotation is undone.
    """
    v = embed(basis, axis, n)
    rot = v.conj().T @ rho @ v
    dim = rho.shape[0]
    for i in range(dim):
        for j in range(dim):
            if bits_of(i, n)[axis] != bits_of(j, n)[axis]:
                rot[i, j] = 0.0
    return v @ rot @ v.conj().T


def entropy_bits(mat):
    """-sum p log2 p over eigenvalues, dropping numerical zeros."""
    eigs = np.linalg.eigvalsh(mat)
    p = eigs[eigs > 1e-12]
    return float(-(p * np.log2(p)).sum()) if p.size else 0.0


def binary_entropy_exact(p):
    total = 0.0
    for q in (p, 1.0 - p):
        if q > 0.0:
            total -= q * np.log2(q)
    return total


def projection_probability(psi, projector_full):
    """<psi| P |psi> with an explicitly built full-space projector."""
    return float(np.real(np.vdot(psi, projector_full @ psi)))


def random_pure(rng, n):
    amps = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return amps / np.linalg.norm(amps)


def random_density(rng, n, rank=None):
    dim = 2**n
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    mat = g @ g.conj().T
    return mat / np.trace(mat)


def random_unitary(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diag(r) / np.abs(np.diag(r)))
