"""Portable additive decision-tree ensemble scoring (logistic link).

Models are plain JSON (see `load_model`), validated hard at load: feature
names must match the acoustic extractor's schema exactly, and every tree
must be a well-formed single-root DAG-free tree.  Split rule: go left iff
feature < threshold; ties route right.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from pneumoscreen.audio.features import FEATURE_NAMES
from pneumoscreen.errors import (
    DimensionMismatch,
    EmptyRecording,
    MalformedModel,
    SchemaMismatch,
)


@dataclass(frozen=True)
class TreeNode:
    # internal: feature/threshold/left/right set; leaf: value set
    feature: Optional[int] = None
    threshold: Optional[float] = None
    left: Optional[int] = None
    right: Optional[int] = None
    value: Optional[float] = None

    @property
    def is_leaf(self) -> bool:
        return self.value is not None


@dataclass(frozen=True)
class Tree:
    nodes: tuple[TreeNode, ...]  # node 0 is the root


@dataclass(frozen=True)
class TreeEnsembleModel:
    feature_count: int
    feature_names: tuple[str, ...]
    base_score: float
    trees: tuple[Tree, ...]
    training_info: Optional[dict] = None


def _parse_node(raw: dict, feature_count: int) -> TreeNode:
    if "leaf" in raw:
        return TreeNode(value=float(raw["leaf"]))
    try:
        feature = int(raw["feature"])
        threshold = float(raw["threshold"])
        left = int(raw["left"])
        right = int(raw["right"])
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedModel(f"bad node {raw!r}: {exc}") from exc
    if not (0 <= feature < feature_count):
        raise MalformedModel(f"feature index {feature} out of range")
    return TreeNode(feature=feature, threshold=threshold, left=left, right=right)


def _validate_tree(tree: Tree) -> None:
    n = len(tree.nodes)
    if n == 0:
        raise MalformedModel("empty tree")
    seen: set[int] = set()
    stack = [0]
    while stack:
        i = stack.pop()
        if not (0 <= i < n):
            raise MalformedModel(f"dangling child index {i}")
        if i in seen:
            raise MalformedModel(f"node {i} reachable twice (cycle or DAG)")
        seen.add(i)
        node = tree.nodes[i]
        if not node.is_leaf:
            stack.append(node.left)
            stack.append(node.right)


def load_model(data: bytes | str) -> TreeEnsembleModel:
    """Load and validate the portable JSON model format."""
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedModel(f"not valid JSON: {exc}") from exc
    feature_count = int(raw.get("feature_count", -1))
    if feature_count != len(FEATURE_NAMES):
        raise SchemaMismatch(
            f"feature_count {feature_count}, expected {len(FEATURE_NAMES)}"
        )
    names = tuple(raw.get("feature_names", ()))
    if names != FEATURE_NAMES:
        raise SchemaMismatch("feature_names do not match the extractor schema")
    link = raw.get("link", "logistic")
    if link != "logistic":
        raise MalformedModel(f"unsupported link {link!r}")
    trees = []
    for t in raw.get("trees", []):
        tree = Tree(
            nodes=tuple(_parse_node(n, feature_count) for n in t.get("nodes", []))
        )
        _validate_tree(tree)
        trees.append(tree)
    return TreeEnsembleModel(
        feature_count=feature_count,
        feature_names=names,
        base_score=float(raw.get("base_score", 0.0)),
        trees=tuple(trees),
        training_info=raw.get("training_info"),
    )


def _walk(tree: Tree, z: np.ndarray) -> float:
    node = tree.nodes[0]
    while not node.is_leaf:
        if z[node.feature] < node.threshold:
            node = tree.nodes[node.left]
        else:
            node = tree.nodes[node.right]
    return node.value


def sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def score(model: TreeEnsembleModel, z) -> float:
    """Probability for one feature vector: sigmoid(base + sum of leaves)."""
    values = np.asarray(getattr(z, "values", z), dtype=float)
    if values.shape != (model.feature_count,):
        raise DimensionMismatch(
            f"expected {model.feature_count} features, got {values.shape}"
        )
    if np.any(np.isnan(values)):
        raise DimensionMismatch("NaN in feature vector")
    # fsum keeps the margin independent of tree order
    raw = math.fsum([model.base_score] + [_walk(t, values) for t in model.trees])
    return sigmoid(raw)


@dataclass(frozen=True)
class CoughScore:
    per_segment: tuple[float, ...]
    recording_level: float

    def to_dict(self) -> dict:
        return {
            "per_segment": list(self.per_segment),
            "recording_level": self.recording_level,
        }


def score_recording(
    model: TreeEnsembleModel, segments: Sequence, aggregation: str = "mean"
) -> CoughScore:
    """Score every segment and aggregate (mean by default, or max)."""
    if not segments:
        raise EmptyRecording("no segments to score")
    per_segment = tuple(score(model, z) for z in segments)
    if aggregation == "mean":
        level = float(np.mean(per_segment))
    elif aggregation == "max":
        level = float(np.max(per_segment))
    else:
        raise ValueError(f"unknown aggregation {aggregation!r}")
    return CoughScore(per_segment=per_segment, recording_level=level)
