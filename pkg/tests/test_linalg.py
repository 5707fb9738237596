import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from biortho.exceptions import ConvergenceFailure, PairingAmbiguous, SingularBasis
from biortho.linalg import eig_general, gram, hessenberg, left_from_right, pair_left_right, schur

from conftest import random_complex, sx_igz


def _match(a, b):
    """Max distance from each of ``a`` to the nearest of ``b`` (oracle comparison)."""
    return np.abs(a[:, None] - b[None, :]).min(axis=1).max()


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_eigenvalues_match_lapack(n, seed):
    m = random_complex(np.random.default_rng(seed), n)
    spec = eig_general(m)
    ref = np.linalg.eigvals(m)
    assert _match(spec.eigenvalues, ref) <= 1e-9 * max(1, np.linalg.norm(m))
    assert _match(ref, spec.eigenvalues) <= 1e-9 * max(1, np.linalg.norm(m))
    r = m @ spec.right_vectors - spec.right_vectors * spec.eigenvalues
    assert np.linalg.norm(r, axis=0).max() <= 1e-10 * np.linalg.norm(m)
    assert np.allclose(np.linalg.norm(spec.right_vectors, axis=0), 1.0)


def test_hessenberg_and_schur_factorisations(rng):
    a = random_complex(rng, 9)
    h, q = hessenberg(a)
    assert np.allclose(np.tril(h, -2), 0)
    assert np.allclose(q @ h @ q.conj().T, a)
    assert np.allclose(q.conj().T @ q, np.eye(9))
    t, z = schur(a)
    assert np.allclose(np.tril(t, -1), 0)
    assert np.allclose(z @ t @ z.conj().T, a, atol=1e-12 * np.linalg.norm(a))


def test_ordering_descending_real_then_imag():
    d = np.diag([1 + 2j, 3.0, 1 - 1j, -2.0])
    vals = eig_general(d).eigenvalues
    assert np.allclose(vals, [3.0, 1 + 2j, 1 - 1j, -2.0])


def test_closed_form_small_cases():
    assert eig_general(np.array([[2.5j]])).eigenvalues[0] == 2.5j
    vals = eig_general(sx_igz(0.6)).eigenvalues
    assert np.allclose(vals, [0.8, -0.8], atol=1e-14)


def test_defective_matrix_is_flagged_upstream():
    # Jordan block: eigenvectors collapse, left_from_right must refuse them.
    spec = eig_general(np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(SingularBasis):
        left_from_right(spec.right_vectors)


def test_left_vectors_are_biorthonormal(rng):
    m = random_complex(rng, 7)
    u = eig_general(m).right_vectors
    v = left_from_right(u)
    assert np.allclose(v.conj().T @ u, np.eye(7), atol=1e-12)
    # columns of v are eigenvectors of M^H
    lam = eig_general(m).eigenvalues
    assert np.allclose(m.conj().T @ v, v * lam.conj(), atol=1e-9)


def test_pairing_with_adjoint_spectrum(rng):
    m = random_complex(rng, 6)
    sk = eig_general(m)
    sd = eig_general(m.conj().T)
    perm = pair_left_right(sk, sd)
    assert np.allclose(sd.eigenvalues[perm], sk.eigenvalues.conj())
    with pytest.raises(PairingAmbiguous):
        pair_left_right(eig_general(np.diag([1.0, 1.0 + 1e-12, 3.0])), eig_general(np.diag([1.0, 1.0, 3.0])))


def test_gram_is_hermitian(rng):
    u = random_complex(rng, 4)
    g = gram(u)
    assert np.allclose(g, g.conj().T)
    assert np.allclose(g, u.conj().T @ u)
    assert np.allclose(gram([u[:, 0], u[:, 1]]), u[:, :2].conj().T @ u[:, :2])


def test_convergence_failure_with_tiny_budget(rng):
    with pytest.raises(ConvergenceFailure):
        schur(random_complex(rng, 8), max_iter_per_eig=0)
