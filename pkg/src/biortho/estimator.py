"""Scikit-learn style front end to :func:`~biortho.system.build_system`."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_square
from .exceptions import ShapeMismatch, ZeroState
from .system import DEFAULT_TOLERANCES, build_system

__all__ = ["BiorthogonalEigensystem"]


class BiorthogonalEigensystem(TransformerMixin, BaseEstimator):
    """Fit a complex Hamiltonian into its biorthonormal eigenbasis.

    ``fit`` diagonalises ``K``; ``transform`` maps ambient row vectors to
    expansion coefficients ``c_n = <chi_n|psi>`` and ``inverse_transform``
    maps coefficients back.

    Parameters
    ----------
    eig_tol, inv_tol, deg_tol, ep_tol, sym_tol, system_tol, reality_tol : float
        Tolerances forwarded to :func:`~biortho.system.build_system`.

    Attributes
    ----------
    system_ : BiorthogonalSystem
    kappa_ : ndarray of shape (n_features,)
    phi_, chi_ : ndarray of shape (n_features, n_features)
        Right eigenvectors and their biorthogonal partners as columns.
    n_features_in_ : int

    Examples
    --------
    >>> import numpy as np
    >>> K = np.array([[-0.6j, 1], [1, 0.6j]])
    >>> est = BiorthogonalEigensystem().fit(K)
    >>> np.round(est.kappa_.real, 12)
    array([ 0.8, -0.8])
    """

    def __init__(
        self,
        eig_tol=DEFAULT_TOLERANCES["eig_tol"],
        inv_tol=DEFAULT_TOLERANCES["inv_tol"],
        deg_tol=DEFAULT_TOLERANCES["deg_tol"],
        ep_tol=DEFAULT_TOLERANCES["ep_tol"],
        sym_tol=DEFAULT_TOLERANCES["sym_tol"],
        system_tol=DEFAULT_TOLERANCES["system_tol"],
        reality_tol=DEFAULT_TOLERANCES["reality_tol"],
    ):
        self.eig_tol = eig_tol
        self.inv_tol = inv_tol
        self.deg_tol = deg_tol
        self.ep_tol = ep_tol
        self.sym_tol = sym_tol
        self.system_tol = system_tol
        self.reality_tol = reality_tol

    def fit(self, K, y=None):
        K = check_square(K, "K")
        self.system_ = build_system(K, **self.get_params())
        self.kappa_ = self.system_.kappa
        self.phi_ = self.system_.phi
        self.chi_ = self.system_.chi
        self.n_features_in_ = K.shape[0]
        return self

    def _rows(self, X, name):
        check_is_fitted(self)
        X = np.asarray(X, dtype=complex)
        if X.ndim == 1:
            X = X[None, :]
        if X.ndim != 2 or X.shape[1] != self.n_features_in_:
            raise ShapeMismatch(f"{name} must have {self.n_features_in_} columns, got shape {X.shape}")
        if not np.all(np.isfinite(X)):
            raise ValueError(f"{name} contains non-finite entries")
        return X

    def transform(self, X):
        """Coefficients of each row: ``C = X conj(chi)``."""
        return self._rows(X, "X") @ np.asarray(self.chi_).conj()

    def inverse_transform(self, C):
        """Ambient rows ``X = C phi^T``."""
        return self._rows(C, "C") @ np.asarray(self.phi_).T

    def predict_proba(self, X):
        """Biorthogonal transition probabilities ``|c_n|^2 / sum |c|^2`` per row."""
        w = np.abs(self.transform(X)) ** 2
        tot = w.sum(axis=1, keepdims=True)
        if np.any(tot == 0):
            raise ZeroState("zero state has no probabilities")
        return w / tot

    def predict(self, X):
        """Index of the most probable eigenstate per row."""
        return np.argmax(self.predict_proba(X), axis=1)
