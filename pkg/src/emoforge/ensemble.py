"""Soft-voting ensembles: unweighted mean of member probability rows."""

from __future__ import annotations

import numpy as np

from .errors import ParameterError


def ensemble_predict_proba(members: list, X) -> np.ndarray:
    """Average predict_proba over members fitted on the same feature space."""
    if not members:
        raise ParameterError("ensemble needs at least one member")
    total = None
    for member in members:
        proba = member.predict_proba(X)
        total = proba.copy() if total is None else total + proba
    return total / len(members)


def ensemble_predict(members: list, X) -> np.ndarray:
    return np.argmax(ensemble_predict_proba(members, X), axis=1)


class SoftVotingEnsemble:
    """Bundle of fitted members exposing the shared classifier interface."""

    def __init__(self, members: list):
        if len(members) < 2:
            raise ParameterError("a voting ensemble needs at least two members")
        self.members = list(members)

    def predict_proba(self, X) -> np.ndarray:
        return ensemble_predict_proba(self.members, X)

    def predict(self, X) -> np.ndarray:
        return np.argmax(self.predict_proba(X), axis=1)
