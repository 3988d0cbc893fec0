"""Criteria hierarchies and pairwise-judgment weighting.

Weights come from the principal right eigenvector of each reciprocal
judgment matrix (power iteration), consistency is summarized by the
classical consistency ratio, and global criterion importance is the product
of local weights along the root path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, MatrixError

#: Random consistency index RI(n), the mean consistency index of random
#: reciprocal matrices with entries on the 1/9..9 judgment grid.  These are
#: the classical published simulation constants; estimate_random_index()
#: re-derives them by the same Monte Carlo procedure.
RANDOM_INDEX = {
    1: 0.0,
    2: 0.0,
    3: 0.58,
    4: 0.90,
    5: 1.12,
    6: 1.24,
    7: 1.32,
    8: 1.41,
    9: 1.45,
    10: 1.49,
}

#: Warn above this consistency ratio; judgments stay usable either way.
CR_WARNING_THRESHOLD = 0.1

_SAATY_GRID = [1.0 / k for k in range(9, 1, -1)] + [float(k) for k in range(1, 10)]

RECIPROCITY_RTOL = 1e-9


class PairwiseMatrix:
    """A positive reciprocal judgment matrix.

    Accepts any positive ratios; judgments off the 1..9 grid are legal and
    only noted (see ``scale_notes``).
    """

    def __init__(self, values):
        a = np.array(values, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise MatrixError("judgment matrix must be square")
        n = a.shape[0]
        if n < 1:
            raise MatrixError("judgment matrix must have at least one row")
        if not np.all(a > 0):
            raise MatrixError("judgments must be positive ratios")
        if not np.allclose(np.diag(a), 1.0, rtol=RECIPROCITY_RTOL, atol=0):
            raise MatrixError("diagonal judgments must equal 1")
        recip = np.abs(a * a.T - 1.0)
        if not np.all(recip <= RECIPROCITY_RTOL * np.maximum(1.0, np.abs(a * a.T))):
            i, j = np.unravel_index(np.argmax(recip), recip.shape)
            raise MatrixError(
                f"matrix is not reciprocal: a[{j},{i}]={a[j, i]:.9g} is not 1/a[{i},{j}]={a[i, j]:.9g}"
            )
        self.values = a
        self.values.setflags(write=False)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @classmethod
    def from_judgments(cls, n: int, upper: list[float]) -> "PairwiseMatrix":
        """Rebuild from the row-major upper triangle; reciprocals are implied."""
        expected = n * (n - 1) // 2
        if len(upper) != expected:
            raise MatrixError(
                f"expected {expected} upper-triangle judgments for n={n}, got {len(upper)}"
            )
        a = np.ones((n, n))
        k = 0
        for i in range(n):
            for j in range(i + 1, n):
                v = float(upper[k])
                if v <= 0:
                    raise MatrixError(f"judgment {i},{j} must be positive, got {v}")
                a[i, j] = v
                a[j, i] = 1.0 / v
                k += 1
        return cls(a)

    def to_judgments(self) -> list[float]:
        n = self.n
        return [float(self.values[i, j]) for i in range(n) for j in range(i + 1, n)]

    def scale_notes(self) -> list[str]:
        """Notes for judgments outside the usual 1..9 grid (and reciprocals)."""
        notes = []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                v = self.values[i, j]
                if not any(math.isclose(v, g, rel_tol=1e-9) for g in _SAATY_GRID):
                    notes.append(
                        f"judgment a[{i},{j}]={v:.6g} is off the 1..9 scale grid"
                    )
        return notes


def derive_weights(matrix: PairwiseMatrix, method: str = "eigenvector") -> np.ndarray:
    """Priority vector of a judgment matrix, normalized to sum 1.

    The default is the principal right eigenvector via power iteration
    (uniform start, stop when successive normalized iterates differ by less
    than 1e-12 in max norm, cap 10000 iterations).  ``method="geometric"``
    gives the row geometric-mean alternative for sensitivity studies.
    """
    a = matrix.values
    n = matrix.n
    if n == 1:
        return np.ones(1)
    if method == "geometric":
        g = np.exp(np.mean(np.log(a), axis=1))
        return g / g.sum()
    if method != "eigenvector":
        raise ValueError(f"unknown prioritization method {method!r}")
    v = np.full(n, 1.0 / n)
    residual = math.inf
    for _ in range(10_000):
        w = a @ v
        nxt = w / w.sum()
        residual = float(np.max(np.abs(nxt - v)))
        v = nxt
        if residual < 1e-12:
            return v
    raise ConvergenceError(
        f"power iteration did not converge in 10000 iterations (residual {residual:.3e})",
        residual,
    )


@dataclass(frozen=True)
class Consistency:
    lambda_max: float
    ci: float
    cr: float


def consistency_ratio(matrix: PairwiseMatrix) -> Consistency:
    """lambda_max, CI = (lambda_max - n)/(n - 1) and CR = CI/RI(n).

    For n <= 2 a reciprocal matrix is always consistent, so CR is 0 when CI
    vanishes and flagged +inf otherwise (RI is 0 there).
    """
    n = matrix.n
    if n < 2:
        raise MatrixError("consistency is defined for n >= 2")
    if n > max(RANDOM_INDEX):
        raise MatrixError(f"no random-index constant for n={n} (max {max(RANDOM_INDEX)})")
    v = derive_weights(matrix)
    lambda_max = float((matrix.values @ v).sum())
    ci = (lambda_max - n) / (n - 1)
    ri = RANDOM_INDEX[n]
    if ri == 0.0:
        cr = 0.0 if ci < 1e-9 else math.inf
    else:
        cr = ci / ri
    return Consistency(lambda_max, ci, cr)


def estimate_random_index(n: int, samples: int = 50_000, seed: int = 0) -> float:
    """Re-derive RI(n): mean CI of random reciprocal matrices on the judgment grid.

    Entries above the diagonal are drawn uniformly from
    {1/9, ..., 1/2, 1, 2, ..., 9}; lambda_max comes from a dense eigensolver.
    Published tables derived this way (with differing sample sizes) agree to
    a few hundredths, which bounds the fidelity to expect here.
    """
    if n < 3:
        return 0.0
    rng = np.random.default_rng(seed)
    grid = np.array(_SAATY_GRID)
    iu = np.triu_indices(n, k=1)
    mats = np.ones((samples, n, n))
    draws = grid[rng.integers(0, len(grid), size=(samples, len(iu[0])))]
    mats[:, iu[0], iu[1]] = draws
    mats[:, iu[1], iu[0]] = 1.0 / draws
    lam = np.linalg.eigvals(mats).real.max(axis=1)
    return float(np.mean((lam - n) / (n - 1)))


BRANCH = "branch"
QUANTITATIVE = "quantitative"
QUALITATIVE = "qualitative"
_LEAF_KINDS = (QUANTITATIVE, QUALITATIVE)


@dataclass
class CriterionNode:
    """A node of the criteria tree; branch nodes carry a judgment matrix.

    ``local_weight``/``global_weight`` are filled in by :func:`synthesize`.
    """

    id: str
    label: str
    kind: str
    children: list["CriterionNode"] = field(default_factory=list)
    matrix: PairwiseMatrix | None = None
    local_weight: float | None = None
    global_weight: float | None = None

    @property
    def is_leaf(self) -> bool:
        return self.kind in _LEAF_KINDS


@dataclass
class Hierarchy:
    """The criteria tree descending from the overall goal."""

    root: CriterionNode

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        seen: set[str] = set()

        def walk(node: CriterionNode) -> None:
            if node.id in seen:
                raise MatrixError(f"duplicate criterion id {node.id!r}")
            seen.add(node.id)
            if node.kind == BRANCH:
                if len(node.children) < 2:
                    raise MatrixError(
                        f"branch {node.id!r} needs at least two children"
                    )
                if node.matrix is None or node.matrix.n != len(node.children):
                    raise MatrixError(
                        f"branch {node.id!r} needs a judgment matrix over its "
                        f"{len(node.children)} children"
                    )
                for child in node.children:
                    walk(child)
            elif node.kind in _LEAF_KINDS:
                if node.children:
                    raise MatrixError(f"leaf {node.id!r} cannot have children")
            else:
                raise MatrixError(f"unknown criterion kind {node.kind!r} at {node.id!r}")

        walk(self.root)

    def leaves(self) -> list[CriterionNode]:
        out: list[CriterionNode] = []

        def walk(node: CriterionNode) -> None:
            if node.is_leaf:
                out.append(node)
            else:
                for child in node.children:
                    walk(child)

        walk(self.root)
        return out

    def nodes(self) -> list[CriterionNode]:
        out: list[CriterionNode] = []

        def walk(node: CriterionNode) -> None:
            out.append(node)
            for child in node.children:
                walk(child)

        walk(self.root)
        return out

    def node(self, node_id: str) -> CriterionNode:
        for n in self.nodes():
            if n.id == node_id:
                return n
        raise KeyError(node_id)


def synthesize(hierarchy: Hierarchy, method: str = "eigenvector") -> dict[str, float]:
    """Fill local/global weights on every node and return the leaf weight map.

    Global weight is the product of local weights along the root path; leaf
    weights therefore sum to 1.
    """
    root = hierarchy.root
    root.local_weight = 1.0
    root.global_weight = 1.0
    leaf_weights: dict[str, float] = {}

    def walk(node: CriterionNode) -> None:
        if node.is_leaf:
            leaf_weights[node.id] = node.global_weight
            return
        try:
            weights = derive_weights(node.matrix, method=method)
        except (MatrixError, ConvergenceError) as exc:
            raise type(exc)(
                f"judgment matrix at node {node.id!r}: {exc}", *getattr(exc, "args", [])[1:]
            ) from exc
        for child, w in zip(node.children, weights):
            child.local_weight = float(w)
            child.global_weight = node.global_weight * float(w)
            walk(child)

    walk(root)
    total = sum(leaf_weights.values())
    if abs(total - 1.0) > 1e-6:
        raise MatrixError(f"leaf weights sum to {total!r}, expected 1")
    return leaf_weights
