"""Experiment configuration files.

A config is a flat ``key = value`` text file. ``#`` starts a comment,
lists are written ``[a, b, c]``, and relative paths are resolved against
the directory holding the config file. Only the four input files are
required::

    positive_reviews = reviews-positive.txt
    negative_reviews = reviews-negative.txt
    positive_words   = words-positive.txt
    negative_words   = words-negative.txt

Optional keys and their defaults::

    budgets            = [100, 200, 500]   # WOA dim; even, >= 2
    agents             = 30
    max_iter           = 100
    lb                 = 0
    ub                 = auto              # auto = larger pool size; or a number such as 4000
    classifiers        = [random_tree, random_forest, rbf_network]
    k                  = 10                # cross-validation folds
    stratified         = true
    seeds              = [0]
    metrics_mode       = standard          # or paper-literal
    checkpoints        = [1, 10, 50]
    output_dir         = results
    trees              = 100               # random forest size
    bootstrap          = true
    feature_sample     = auto              # auto = ceil(sqrt(d))
    max_depth          = none
    min_leaf           = 1
    rbf_centers        = 10
    fitness_classifier = random_tree
    holdout            = 0.2               # held-out fraction for the wrapper fitness
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Optional

from .classifiers import CLASSIFIERS
from .errors import ConfigError
from .evaluation import MODES

FILE_KEYS = ("positive_reviews", "negative_reviews", "positive_words", "negative_words")


@dataclass(frozen=True)
class ExperimentConfig:
    positive_reviews: Path
    negative_reviews: Path
    positive_words: Path
    negative_words: Path
    budgets: tuple = (100, 200, 500)
    agents: int = 30
    max_iter: int = 100
    lb: float = 0.0
    ub: Optional[float] = None
    classifiers: tuple = CLASSIFIERS
    k: int = 10
    stratified: bool = True
    seeds: tuple = (0,)
    metrics_mode: str = "standard"
    checkpoints: tuple = (1, 10, 50)
    output_dir: Path = Path("results")
    trees: int = 100
    bootstrap: bool = True
    feature_sample: Optional[int] = None
    max_depth: Optional[int] = None
    min_leaf: int = 1
    rbf_centers: int = 10
    fitness_classifier: str = "random_tree"
    holdout: float = 0.2
    source: Optional[Path] = field(default=None, compare=False)

    def validate(self) -> "ExperimentConfig":
        where = f"{self.source}: " if self.source else ""

        def bad(msg):
            raise ConfigError(where + msg)

        if not self.budgets:
            bad("budgets: at least one budget is required")
        for b in self.budgets:
            if b < 2 or b % 2:
                bad(f"budgets: budget must be even and >= 2, got {b}")
        if not self.seeds:
            bad("seeds: at least one seed is required")
        if self.agents < 1:
            bad(f"agents: must be >= 1, got {self.agents}")
        if self.max_iter < 0:
            bad(f"max_iter: must be >= 0, got {self.max_iter}")
        if self.ub is not None and not self.lb < self.ub:
            bad(f"ub: must exceed lb={self.lb}, got {self.ub}")
        if self.k < 2:
            bad(f"k: must be >= 2, got {self.k}")
        if self.metrics_mode not in MODES:
            bad(f"metrics_mode: expected one of {', '.join(MODES)}, got {self.metrics_mode!r}")
        for name in self.classifiers:
            if name not in CLASSIFIERS:
                bad(f"classifiers: unknown classifier {name!r} (known: {', '.join(CLASSIFIERS)})")
        if self.fitness_classifier not in CLASSIFIERS:
            bad(f"fitness_classifier: unknown classifier {self.fitness_classifier!r}")
        if not 0.0 < self.holdout < 1.0:
            bad(f"holdout: must lie in (0, 1), got {self.holdout}")
        for key, value in (("trees", self.trees), ("min_leaf", self.min_leaf), ("rbf_centers", self.rbf_centers)):
            if value < 1:
                bad(f"{key}: must be >= 1, got {value}")
        if self.feature_sample is not None and self.feature_sample < 1:
            bad(f"feature_sample: must be >= 1, got {self.feature_sample}")
        for key in FILE_KEYS:
            path = getattr(self, key)
            if not Path(path).is_file():
                bad(f"{key}: file not found: {path}")
        return self


def _split_list(raw):
    raw = raw.strip()
    if not (raw.startswith("[") and raw.endswith("]")):
        raise ValueError("expected a list like [a, b]")
    inner = raw[1:-1].strip()
    return [item.strip() for item in inner.split(",")] if inner else []


def _bool(raw):
    low = raw.lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"expected true/false, got {raw!r}")


def _optional(conv, sentinel):
    def parse(raw):
        return None if raw.lower() == sentinel else conv(raw)
    return parse


def _int_list(raw):
    return tuple(int(x) for x in _split_list(raw))


def _str_list(raw):
    return tuple(x for x in _split_list(raw) if x)


PARSERS = {
    "positive_reviews": str, "negative_reviews": str,
    "positive_words": str, "negative_words": str,
    "budgets": _int_list, "agents": int, "max_iter": int,
    "lb": float, "ub": _optional(float, "auto"),
    "classifiers": _str_list, "k": int, "stratified": _bool,
    "seeds": _int_list, "metrics_mode": str, "checkpoints": _int_list,
    "output_dir": str, "trees": int, "bootstrap": _bool,
    "feature_sample": _optional(int, "auto"), "max_depth": _optional(int, "none"),
    "min_leaf": int, "rbf_centers": int, "fitness_classifier": str, "holdout": float,
}
PATH_KEYS = FILE_KEYS + ("output_dir",)
assert set(PARSERS) == {f.name for f in fields(ExperimentConfig)} - {"source"}


def parse_config(text: str, base_dir=".", source=None) -> ExperimentConfig:
    """Parse config text; raises ``ConfigError`` naming the line on any problem."""
    base_dir = Path(base_dir)
    label = source or "<config>"
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{label}:{lineno}: expected 'key = value', got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in PARSERS:
            raise ConfigError(f"{label}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{label}:{lineno}: duplicate key {key!r}")
        try:
            value = PARSERS[key](raw)
        except ValueError as exc:
            raise ConfigError(f"{label}:{lineno}: bad value for {key!r}: {exc}") from None
        if key in PATH_KEYS:
            value = base_dir / value
        values[key] = value

    missing = [k for k in FILE_KEYS if k not in values]
    if missing:
        raise ConfigError(f"{label}: missing required key(s): {', '.join(missing)}")
    if "output_dir" not in values:
        values["output_dir"] = base_dir / "results"
    return ExperimentConfig(source=Path(source) if source else None, **values).validate()


def validate_config(path) -> ExperimentConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except (OSError, UnicodeDecodeError) as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None
    return parse_config(text, path.parent, path)
