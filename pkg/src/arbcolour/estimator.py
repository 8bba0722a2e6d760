"""Estimator-style wrapper: ``fit`` on an edge list, ``predict`` colours."""
from __future__ import annotations

from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .harness import RunConfig, Session


class ImplicitColouring(BaseEstimator):
    """Proper vertex colouring of a dynamic graph, answered per query.

    ``fit(X)`` takes an ``(m, 2)`` integer edge array.  The graph can then
    be edited with :meth:`insert_edge` / :meth:`delete_edge`; every
    :meth:`predict` reflects the current graph.
    """

    def __init__(
        self,
        engine: str = "dispatcher",
        inner: str = "auto-min",
        seed: int = 0,
        delta: float = 3,
        base_threshold: Optional[int] = None,
        rebuild_period: Optional[int] = None,
        direct_threshold: Optional[int] = None,
        partition_seed: int = 0,
        repartition_period: Optional[int] = None,
    ):
        self.engine = engine
        self.inner = inner
        self.seed = seed
        self.delta = delta
        self.base_threshold = base_threshold
        self.rebuild_period = rebuild_period
        self.direct_threshold = direct_threshold
        self.partition_seed = partition_seed
        self.repartition_period = repartition_period

    def _config(self) -> RunConfig:
        return RunConfig(**self.get_params())

    def fit(self, X, y=None, n_vertices: Optional[int] = None):
        edges = check_array(X, dtype=np.int64, ensure_min_samples=0, ensure_2d=True)
        if edges.shape[1] != 2:
            raise ValueError(f"expected an (m, 2) edge array, got shape {edges.shape}")
        if len(edges) and edges.min() < 0:
            raise ValueError("vertex ids must be non-negative")
        top = int(edges.max()) + 1 if len(edges) else 0
        n = top if n_vertices is None else n_vertices
        if n < max(1, top):
            raise ValueError(f"n_vertices={n_vertices} too small for vertex id {top - 1}")
        config = self._config()
        session = Session(n, config)
        g = session.graph
        # bulk load: insert without per-edge orientation upkeep, then peel once
        session.provider.detach()
        for u, v in edges.tolist():
            g.insert_edge(u, v)
        session.provider.rebuild()
        g.subscribe(session.provider.notify_update)
        self.session_ = session
        self.engine_ = session.engines[config.engine]
        self.n_vertices_ = n
        return self

    def insert_edge(self, u: int, v: int):
        check_is_fitted(self, "session_")
        self.session_.graph.insert_edge(u, v)
        return self

    def delete_edge(self, u: int, v: int):
        check_is_fitted(self, "session_")
        self.session_.graph.delete_edge(u, v)
        return self

    def query(self, v: int):
        """Structured label of one vertex."""
        check_is_fitted(self, "session_")
        return self.engine_.label(int(v))

    def predict(self, X=None) -> np.ndarray:
        """Colours of the vertex ids in ``X`` (all vertices when omitted)."""
        check_is_fitted(self, "session_")
        if X is None:
            return np.array([self.engine_.colour(v) for v in range(self.n_vertices_)], dtype=np.int64)
        ids = check_array(np.asarray(X).reshape(-1, 1), dtype=np.int64, ensure_min_samples=0).ravel()
        return np.array([self.engine_.colour(int(v)) for v in ids], dtype=np.int64)

    def fit_predict(self, X, y=None, n_vertices: Optional[int] = None) -> np.ndarray:
        return self.fit(X, n_vertices=n_vertices).predict()

    @property
    def graph_(self):
        check_is_fitted(self, "session_")
        return self.session_.graph
