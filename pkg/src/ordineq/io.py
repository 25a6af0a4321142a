"""Reading count files, microdata files and analysis configurations."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .comparison import CRITERIA
from .errors import ConfigError, OrdineqError, ParseError
from .measures import DEFAULT_GRID_STEP
from .posterior import DEFAULT_DRAWS, CountData, WeightedMicrodata

DEFAULT_ALPHAS = (0.1, 0.9)


def _rows(path: Path, required: list[str], optional: list[str]):
    """Yield (line_number, row_dict) for a delimited file with a header."""
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise ParseError(path, 0, f"cannot open file: {exc.strerror}") from exc
    with fh:
        first = fh.readline()
        fh.seek(0)
        delimiter = ","
        if "," not in first:
            delimiter = next((d for d in "\t;|" if d in first), ",")
        reader = csv.reader(fh, delimiter=delimiter)
        header = next(reader, None)
        if header is None:
            raise ParseError(path, 1, "file is empty")
        header = [h.strip().lower() for h in header]
        missing = [c for c in required if c not in header]
        if missing:
            raise ParseError(path, 1, f"header must contain {','.join(required)}; missing {','.join(missing)}")
        unknown = [c for c in header if c not in required and c not in optional]
        if unknown:
            raise ParseError(path, 1, f"unexpected column(s) {','.join(unknown)}")
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise ParseError(path, line, f"expected {len(header)} fields, got {len(row)}")
            yield line, {h: c.strip() for h, c in zip(header, row)}


def _int(path, line, text, what):
    try:
        return int(text)
    except ValueError:
        raise ParseError(path, line, f"{what} {text!r} is not an integer") from None


def load_counts(path) -> tuple[CountData, list[str]]:
    """Read a ``category,count[,label]`` file.

    Categories must be exactly 1..K once sorted. Returns the counts and one
    label per category (the category number when no label column exists).
    """
    path = Path(path)
    seen: dict[int, tuple[int, int, str]] = {}
    for line, row in _rows(path, ["category", "count"], ["label"]):
        cat = _int(path, line, row["category"], "category")
        n = _int(path, line, row["count"], "count")
        if n < 0:
            raise ParseError(path, line, f"count {n} is negative")
        if cat in seen:
            raise ParseError(path, line, f"duplicate category {cat} (first seen on line {seen[cat][0]})")
        seen[cat] = (line, n, row.get("label") or str(cat))
    if not seen:
        raise ParseError(path, 1, "no data rows")
    cats = sorted(seen)
    for expected, cat in enumerate(cats, start=1):
        if cat != expected:
            raise ParseError(path, seen[cat][0], f"categories must be 1..K without gaps; found {cat} where {expected} was expected")
    if len(cats) < 2:
        raise ParseError(path, seen[cats[0]][0], "need at least 2 categories")
    counts = np.array([seen[c][1] for c in cats])
    if counts.sum() < 1:
        raise ParseError(path, 1, "total count must be at least 1")
    return CountData(counts), [seen[c][2] for c in cats]


def write_counts(path, data: CountData, labels=None) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["category", "count"] + (["label"] if labels is not None else []))
        for k, n in enumerate(data.counts, start=1):
            w.writerow([k, int(n)] + ([labels[k - 1]] if labels is not None else []))


def load_microdata(path, default_group: str = "all", n_categories: int | None = None) -> dict[str, WeightedMicrodata]:
    """Read a ``unit_id,category,weight[,group]`` file.

    Returns one dataset per value of the group column, in order of first
    appearance, or a single dataset under ``default_group``. K is inferred
    from the whole file so every group shares it.
    """
    path = Path(path)
    groups: dict[str, tuple[list[int], list[float]]] = {}
    first_line: dict[int, int] = {}
    ids: set[str] = set()
    for line, row in _rows(path, ["unit_id", "category", "weight"], ["group"]):
        cat = _int(path, line, row["category"], "category")
        if cat < 1 or (n_categories is not None and cat > n_categories):
            raise ParseError(path, line, f"category {cat} outside 1..{n_categories or 'K'}")
        try:
            weight = float(row["weight"])
        except ValueError:
            raise ParseError(path, line, f"weight {row['weight']!r} is not a number") from None
        if not np.isfinite(weight) or weight <= 0:
            raise ParseError(path, line, f"weight must be positive, got {row['weight']}")
        uid = row["unit_id"]
        if not uid:
            raise ParseError(path, line, "empty unit_id")
        group = row.get("group", "") or default_group
        key = f"{group}\x00{uid}"
        if key in ids:
            raise ParseError(path, line, f"duplicate unit_id {uid!r}")
        ids.add(key)
        first_line.setdefault(cat, line)
        cats, weights = groups.setdefault(group, ([], []))
        cats.append(cat)
        weights.append(weight)
    if not groups:
        raise ParseError(path, 1, "no data rows")
    K = n_categories or max(first_line)
    if K < 2:
        raise ParseError(path, 1, "need at least 2 categories")
    return {g: WeightedMicrodata(np.array(c), np.array(w), K) for g, (c, w) in groups.items()}


# --------------------------------------------------------------------------
# configuration

@dataclass(frozen=True)
class Group:
    name: str
    data: CountData | WeightedMicrodata
    label: str = ""
    prior: float | tuple[float, ...] | None = None
    category_labels: tuple[str, ...] | None = None

    @property
    def K(self) -> int:
        return self.data.K


@dataclass(frozen=True)
class Comparison:
    x: str
    y: str
    criteria: tuple[str, ...] = CRITERIA


@dataclass
class AnalysisConfig:
    groups: dict[str, Group]
    draws: int = DEFAULT_DRAWS
    seed: int = 0
    alphas: tuple[float, ...] = DEFAULT_ALPHAS
    gld_grid_step: float = DEFAULT_GRID_STEP
    prior: float = 1.0
    comparisons: list[Comparison] = field(default_factory=list)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if not self.groups:
            raise ConfigError("at least one group is required")
        if isinstance(self.draws, bool) or not isinstance(self.draws, int) or self.draws < 1:
            raise ConfigError(f"draws must be a positive integer, got {self.draws!r}")
        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError(f"seed must be a nonnegative integer, got {self.seed!r}")
        if not (0 < self.gld_grid_step <= 0.5):
            raise ConfigError(f"gld_grid_step must lie in (0, 0.5], got {self.gld_grid_step}")
        for a in self.alphas:
            if not (0 <= a < 1):
                raise ConfigError(f"CF alpha must lie in [0, 1), got {a}")
        if len(set(self.alphas)) != len(self.alphas):
            raise ConfigError("alphas must be distinct")
        if not self.prior > 0:
            raise ConfigError(f"prior must be positive, got {self.prior}")
        for g in self.groups.values():
            if g.prior is None:
                continue
            prior = (g.prior,) if np.isscalar(g.prior) else tuple(g.prior)
            if not all(v > 0 for v in prior):
                raise ConfigError(f"group {g.name!r}: prior must be positive, got {g.prior}")
            if len(prior) not in (1, g.K):
                raise ConfigError(f"group {g.name!r}: prior has {len(prior)} entries for K={g.K}")
        seen = set()
        for c in self.comparisons:
            for name in (c.x, c.y):
                if name not in self.groups:
                    raise ConfigError(f"comparison refers to unknown group {name!r}")
            if c.x == c.y:
                raise ConfigError(f"comparison of group {c.x!r} with itself")
            if (c.x, c.y) in seen:
                raise ConfigError(f"comparison {c.x!r} vs {c.y!r} listed twice")
            seen.add((c.x, c.y))
            if not c.criteria:
                raise ConfigError(f"comparison {c.x!r} vs {c.y!r} has no criteria")
            for crit in c.criteria:
                if crit not in CRITERIA:
                    raise ConfigError(f"unknown criterion {crit!r}; expected one of {', '.join(CRITERIA)}")
            if len(set(c.criteria)) != len(c.criteria):
                raise ConfigError(f"comparison {c.x!r} vs {c.y!r} repeats a criterion")
            kx, ky = self.groups[c.x].K, self.groups[c.y].K
            if kx != ky:
                raise ConfigError(f"groups {c.x!r} (K={kx}) and {c.y!r} (K={ky}) have different category counts")


_TOP_KEYS = {"groups", "draws", "seed", "alphas", "gld_grid_step", "prior", "comparisons"}
_GROUP_KEYS = {"counts", "microdata", "group", "categories", "label", "prior"}
_COMPARISON_KEYS = {"x", "y", "criteria"}


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise ConfigError(f"duplicate key {k!r} in configuration")
        out[k] = v
    return out


def _check_keys(obj, allowed, where):
    if not isinstance(obj, dict):
        raise ConfigError(f"{where} must be an object")
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(unknown)}")


def _number(value, what, kind=float):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{what} must be a number, got {value!r}")
    if kind is int and value != int(value):
        raise ConfigError(f"{what} must be an integer, got {value!r}")
    return kind(value)


def _load_group(name: str, entry: dict, base: Path, cache: dict) -> Group:
    where = f"group {name!r}"
    _check_keys(entry, _GROUP_KEYS, where)
    has_counts, has_micro = "counts" in entry, "microdata" in entry
    if has_counts == has_micro:
        raise ConfigError(f"{where} needs exactly one of 'counts' or 'microdata'")
    prior = entry.get("prior")
    if prior is not None:
        prior = tuple(_number(v, f"{where} prior") for v in prior) if isinstance(prior, list) \
            else _number(prior, f"{where} prior")
    cat_labels = None
    if has_counts:
        for key in ("group", "categories"):
            if key in entry:
                raise ConfigError(f"{where}: {key!r} applies to microdata groups only")
        src = entry["counts"]
        if isinstance(src, list):
            try:
                data = CountData(np.array([_number(v, f"{where} count", int) for v in src]))
            except OrdineqError as exc:
                raise ConfigError(f"{where}: {exc}") from exc
        elif isinstance(src, str):
            data, labels = load_counts(base / src)
            cat_labels = tuple(labels)
        else:
            raise ConfigError(f"{where}: 'counts' must be a file path or a list of integers")
        if data.N < 1:
            raise ConfigError(f"{where}: total count must be at least 1")
    else:
        if prior is not None:
            raise ConfigError(f"{where}: 'prior' applies to count groups only")
        src = entry["microdata"]
        if not isinstance(src, str):
            raise ConfigError(f"{where}: 'microdata' must be a file path")
        K = entry.get("categories")
        if K is not None:
            K = _number(K, f"{where} categories", int)
        key = (str(base / src), K)
        if key not in cache:
            cache[key] = load_microdata(base / src, n_categories=K)
        sets = cache[key]
        wanted = entry.get("group")
        if wanted is None:
            if len(sets) != 1:
                raise ConfigError(f"{where}: {src} holds groups {', '.join(sets)}; choose one with 'group'")
            wanted = next(iter(sets))
        if wanted not in sets:
            raise ConfigError(f"{where}: group {wanted!r} not found in {src}")
        data = sets[wanted]
    label = entry.get("label", name)
    if not isinstance(label, str):
        raise ConfigError(f"{where}: label must be a string")
    if isinstance(prior, tuple) and len(prior) != data.K:
        raise ConfigError(f"{where}: prior has {len(prior)} entries for K={data.K}")
    return Group(name, data, label, prior, cat_labels)


def parse_config(obj: dict, base_dir=".") -> AnalysisConfig:
    base = Path(base_dir)
    _check_keys(obj, _TOP_KEYS, "configuration")
    groups_spec = obj.get("groups")
    if not isinstance(groups_spec, dict) or not groups_spec:
        raise ConfigError("'groups' must be a non-empty object mapping names to datasets")
    cache: dict = {}
    groups = {name: _load_group(name, entry, base, cache) for name, entry in groups_spec.items()}
    comparisons = []
    comp_spec = obj.get("comparisons", [])
    if not isinstance(comp_spec, list):
        raise ConfigError("'comparisons' must be a list")
    for i, c in enumerate(comp_spec):
        _check_keys(c, _COMPARISON_KEYS, f"comparison #{i + 1}")
        if "x" not in c or "y" not in c:
            raise ConfigError(f"comparison #{i + 1} needs 'x' and 'y'")
        crit = c.get("criteria", list(CRITERIA))
        if not isinstance(crit, list):
            raise ConfigError(f"comparison #{i + 1}: 'criteria' must be a list")
        comparisons.append(Comparison(str(c["x"]), str(c["y"]), tuple(crit)))
    alphas = obj.get("alphas", list(DEFAULT_ALPHAS))
    if not isinstance(alphas, list):
        raise ConfigError("'alphas' must be a list")
    return AnalysisConfig(
        groups=groups,
        draws=_number(obj.get("draws", DEFAULT_DRAWS), "draws", int),
        seed=_number(obj.get("seed", 0), "seed", int),
        alphas=tuple(_number(a, "alpha") for a in alphas),
        gld_grid_step=_number(obj.get("gld_grid_step", DEFAULT_GRID_STEP), "gld_grid_step"),
        prior=_number(obj.get("prior", 1.0), "prior"),
        comparisons=comparisons,
    )


def load_config(path) -> AnalysisConfig:
    """Read a JSON configuration; data paths resolve relative to the file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read configuration: {exc.strerror}") from exc
    try:
        obj = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise ParseError(path, exc.lineno, f"invalid JSON: {exc.msg}") from exc
    try:
        return parse_config(obj, path.parent)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
