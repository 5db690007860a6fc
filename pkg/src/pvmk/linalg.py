"""Dense Hermitian helpers built on a cyclic Jacobi eigensolver.

Eigenvalues come from plane rotations applied in a fixed row-major sweep
order with an absolute off-diagonal threshold, so repeated runs on the same
input give bit-identical results.  Complex Hermitian matrices are reduced
to real symmetric ones through the doubling embedding [[X, -Y], [Y, X]] for
H = X + iY, which carries each eigenvalue of H twice.

Matrices with dtype ``object`` hold exact entries (ints / Fractions); the
helpers here convert them to floats only where a spectral quantity is
genuinely needed.
"""

from __future__ import annotations

import numpy as np

JACOBI_THRESHOLD = 1e-13
_MAX_SWEEPS = 80


def is_exact_matrix(a) -> bool:
    a = np.asarray(a)
    return a.dtype == object or np.issubdtype(a.dtype, np.integer)


def adjoint(a):
    return np.asarray(a).conj().T


def to_complex(a) -> np.ndarray:
    a = np.asarray(a)
    if a.dtype == object:
        flat = np.array([complex(x) for x in a.ravel()], dtype=np.complex128)
        return flat.reshape(a.shape)
    return np.asarray(a, dtype=np.complex128)


def max_abs(a) -> float:
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    if a.dtype == object:
        return float(max(abs(x) for x in a.ravel()))
    return float(np.abs(a).max())


def hermitian_defect(a) -> float:
    a = np.asarray(a)
    if a.dtype == object:
        return max_abs(a - a.T.conj())
    c = to_complex(a)
    return max_abs(c - c.conj().T)


def embed_stack(stack: np.ndarray) -> np.ndarray:
    """Complex Hermitian stack (B,n,n) -> real symmetric stack (B,2n,2n)."""
    x = stack.real
    y = stack.imag
    top = np.concatenate([x, -y], axis=2)
    bot = np.concatenate([y, x], axis=2)
    return np.concatenate([top, bot], axis=1)


def _jacobi_stack(mats, want_vectors: bool = False):
    """Cyclic Jacobi on a stack of real symmetric matrices.

    Returns (eigs, rot) where eigs[b, i] is an eigenvalue of mats[b] and,
    when requested, rot[b, i, :] is the corresponding unit eigenvector.
    Sweep order is row-major over the upper triangle; a pair rotates only
    while its off-diagonal entry exceeds the threshold.
    """
    a = np.array(mats, dtype=np.float64)
    if a.ndim == 2:
        a = a[None, ...]
    nb, n, _ = a.shape
    rot = np.broadcast_to(np.eye(n), (nb, n, n)).copy() if want_vectors else None
    if n <= 1:
        return a[:, range(n), range(n)].copy(), rot
    rows = np.arange(n)
    for _sweep in range(_MAX_SWEEPS):
        offmax = np.abs(a).copy()
        offmax[:, rows, rows] = 0.0
        if offmax.max() <= JACOBI_THRESHOLD:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[:, p, q]
                live = np.abs(apq) > JACOBI_THRESHOLD
                if not live.any():
                    continue
                theta = 0.5 * np.arctan2(2.0 * apq, a[:, q, q] - a[:, p, p])
                c = np.where(live, np.cos(theta), 1.0)
                s = np.where(live, np.sin(theta), 0.0)
                rp = c[:, None] * a[:, p, :] - s[:, None] * a[:, q, :]
                rq = s[:, None] * a[:, p, :] + c[:, None] * a[:, q, :]
                a[:, p, :] = rp
                a[:, q, :] = rq
                cp = c[:, None] * a[:, :, p] - s[:, None] * a[:, :, q]
                cq = s[:, None] * a[:, :, p] + c[:, None] * a[:, :, q]
                a[:, :, p] = cp
                a[:, :, q] = cq
                a[:, p, q] = np.where(live, 0.0, a[:, p, q])
                a[:, q, p] = np.where(live, 0.0, a[:, q, p])
                if rot is not None:
                    vp = c[:, None] * rot[:, p, :] - s[:, None] * rot[:, q, :]
                    vq = s[:, None] * rot[:, p, :] + c[:, None] * rot[:, q, :]
                    rot[:, p, :] = vp
                    rot[:, q, :] = vq
    else:  # pragma: no cover - quadratic convergence makes this unreachable
        raise ArithmeticError("Jacobi did not converge within the sweep limit")
    return a[:, rows, rows].copy(), rot


def _as_real_sym_stack(mats) -> np.ndarray:
    """Stack of Hermitian matrices -> real symmetric stack (embedding if complex)."""
    stack = np.stack([to_complex(m) for m in mats])
    if stack.size and np.abs(stack.imag).max() > 0.0:
        return embed_stack(stack)
    return stack.real.astype(np.float64, copy=False)


def spectral_norms_stack(mats) -> np.ndarray:
    """Operator norms of a sequence of Hermitian matrices (batched Jacobi)."""
    real = _as_real_sym_stack(mats)
    eigs, _ = _jacobi_stack(real)
    if eigs.shape[1] == 0:
        return np.zeros(eigs.shape[0])
    return np.abs(eigs).max(axis=1)


def spectral_norm(mat) -> float:
    """Operator norm of a Hermitian matrix (largest absolute eigenvalue)."""
    return float(spectral_norms_stack([mat])[0])


def operator_norm(mat) -> float:
    """Operator norm of a general matrix (largest singular value)."""
    m = to_complex(mat)
    if hermitian_defect(m) <= 1e-12 * max(1.0, max_abs(m)):
        return spectral_norm(m)
    gram = m.conj().T @ m
    eigs, _ = _jacobi_stack(_as_real_sym_stack([gram]))
    top = float(eigs[0].max(initial=0.0))
    return float(np.sqrt(max(top, 0.0)))


def eigendecomposition(mat) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and matching unit eigenvectors (columns).

    ``mat`` must be Hermitian.  Complex inputs go through the real
    embedding, whose doubled spectrum is harmless to the callers here
    (extrema, spectral functions); eigenvectors are mapped back to complex.
    """
    m = to_complex(mat)
    complex_input = np.abs(m.imag).max() > 0.0 if m.size else False
    real = embed_stack(m[None])[0] if complex_input else m.real.astype(np.float64)
    eigs, rot = _jacobi_stack(real, want_vectors=True)
    w = eigs[0]
    vecs = rot[0]
    order = np.argsort(w, kind="stable")
    w = w[order]
    vecs = vecs[order]
    n = m.shape[0]
    if complex_input:
        cols = (vecs[:, :n] + 1j * vecs[:, n:]).T
        norms = np.sqrt((np.abs(cols) ** 2).sum(axis=0))
        norms[norms == 0.0] = 1.0
        return w, cols / norms
    return w, vecs.T


def top_eigenpair(mat) -> tuple[float, np.ndarray]:
    """(eigenvalue of largest magnitude, its unit eigenvector)."""
    w, vecs = eigendecomposition(mat)
    i = int(np.argmax(np.abs(w)))
    return float(w[i]), vecs[:, i]


def min_eigenvalue(mat) -> float:
    w, _ = _jacobi_stack(_as_real_sym_stack([mat]))
    return float(w[0].min())


def sym_matrix_function(mat: np.ndarray, fn) -> np.ndarray:
    """fn applied to the spectrum of a real symmetric matrix."""
    w, vecs = eigendecomposition(np.asarray(mat, dtype=np.float64))
    return (vecs * fn(w)[None, :]) @ vecs.T


def gram_rank(vectors, rel_tol: float = 1e-10) -> int:
    """Rank of the span of the given vectors via their Gram spectrum."""
    cols = np.stack([to_complex(np.asarray(v)).ravel() for v in vectors], axis=1)
    gram = cols.conj().T @ cols
    w, _ = _jacobi_stack(_as_real_sym_stack([gram]))
    w = w[0]
    cutoff = max(w.max(initial=0.0) * rel_tol, 1e-12)
    # embedding doubles multiplicities for genuinely complex Grams
    count = int((w > cutoff).sum())
    if gram.size and np.abs(to_complex(gram).imag).max() > 0.0:
        count //= 2
    return count
