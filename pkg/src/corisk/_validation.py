"""Input checks shared by the estimators."""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from sklearn.utils.validation import check_array

from .parser import FilingText, text_from_string


def check_documents(X) -> list[FilingText]:
    """Coerce an iterable of markup strings or FilingText objects into a list of FilingText."""
    if isinstance(X, (str, FilingText)):
        raise ValueError("expected an iterable of documents, got a single document; wrap it in a list")
    if isinstance(X, np.ndarray):
        X = X.ravel().tolist()
    docs = []
    for i, doc in enumerate(X):
        if isinstance(doc, FilingText):
            docs.append(doc)
        elif isinstance(doc, str):
            docs.append(text_from_string(doc))
        else:
            raise TypeError(f"document {i}: expected str or FilingText, got {type(doc).__name__}")
    return docs


def check_count_matrix(X) -> np.ndarray:
    """Dense non-negative integer document-term matrix."""
    X = check_array(X, accept_sparse=("csr", "csc", "coo"), dtype=None)
    if sp.issparse(X):
        X = X.toarray()
    X = np.asarray(X)
    if X.size and (X.min() < 0 or not np.all(np.equal(np.mod(X, 1), 0))):
        raise ValueError("document-term matrix must hold non-negative integer counts")
    return X.astype(np.int64)
