"""Methods x benchmarks grid with per-method Average and Top 1 rows."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .corpus import build_vocabulary, load_corpus_dir
from .evaluation import format_result
from .pipeline import Model, Params, check_method, evaluate_alignment, evaluate_dictionary, train

log = logging.getLogger(__name__)


class BenchmarkError(RuntimeError):
    pass


@dataclass(frozen=True)
class Row:
    name: str
    kind: str       # "align" or "dict"
    src: str
    tgt: str
    files: dict[str, str]

    @property
    def metric(self) -> str:
        return "1-AER" if self.kind == "align" else "P@1"


def top1_credit(values: list[float]) -> list[float]:
    """One point per row for the best method, split evenly between ties."""
    finite = [v for v in values if v == v]
    if not finite:
        return [0.0] * len(values)
    best = max(finite)
    winners = [i for i, v in enumerate(values) if v == best]
    return [1.0 / len(winners) if i in winners else 0.0 for i in range(len(values))]


def _fmt_count(x: float) -> str:
    return f"{x:g}"


def format_table(rows: list[Row], methods: list[str], cells: dict[tuple[int, int], float]) -> str:
    """Tab-separated table: one line per benchmark direction, then Average and Top 1."""
    lines = ["\t".join(["benchmark", "src", "tgt", *methods])]
    credit = [0.0] * len(methods)
    for r, row in enumerate(rows):
        values = [cells[r, m] for m in range(len(methods))]
        for m, c in enumerate(top1_credit(values)):
            credit[m] += c
        lines.append("\t".join([row.name, row.src, row.tgt, *(f"{v:.4f}" for v in values)]))
    avg = [sum(cells[r, m] for r in range(len(rows))) / len(rows) for m in range(len(methods))]
    lines.append("\t".join(["Average", "", "", *(f"{v:.4f}" for v in avg)]))
    lines.append("\t".join(["Top 1", "", "", *map(_fmt_count, credit)]))
    return "\n".join(lines) + "\n"


def _resolve(base: Path, p: str) -> str:
    q = Path(p)
    return str(q if q.is_absolute() else base / q)


def load_config(path: str | Path) -> dict[str, Any]:
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not cfg or not cfg.get("methods") or not cfg.get("benchmarks"):
        raise BenchmarkError(f"{path}: config needs 'corpus', 'methods' and 'benchmarks'")
    if "corpus" not in cfg:
        raise BenchmarkError(f"{path}: config needs 'corpus'")
    base = path.parent
    cfg["corpus"] = _resolve(base, cfg["corpus"])
    if cfg.get("doc_keys"):
        cfg["doc_keys"] = _resolve(base, cfg["doc_keys"])
    for b in cfg["benchmarks"]:
        for key in ("gold", "src_text", "tgt_text", "dictionary"):
            if key in b:
                b[key] = _resolve(base, b[key])
    return cfg


def _rows(cfg) -> list[Row]:
    rows = []
    for b in cfg["benchmarks"]:
        kind = b.get("type")
        if kind not in ("align", "dict"):
            raise BenchmarkError(f"benchmark {b.get('name')!r}: type must be 'align' or 'dict'")
        needed = ("gold", "src_text", "tgt_text") if kind == "align" else ("dictionary",)
        missing = [k for k in needed if k not in b]
        if missing:
            raise BenchmarkError(f"benchmark {b.get('name')!r}: missing {missing}")
        rows.append(Row(b.get("name", kind), kind, b["src"], b["tgt"], {k: b[k] for k in needed}))
    return rows


def run_benchmark(cfg: dict[str, Any]) -> tuple[str, list[str]]:
    """Train what each cell needs, evaluate every cell, return (table, result rows)."""
    rows = _rows(cfg)
    corpus = load_corpus_dir(cfg["corpus"], doc_keys=cfg.get("doc_keys"))
    vocab = build_vocabulary(corpus, cfg.get("min_count", 2))
    defaults = {k: cfg[k] for k in ("seed", "threads") if k in cfg}

    methods = []
    for i, spec in enumerate(cfg["methods"]):
        method = spec.get("method")
        name = spec.get("name", method)
        mode = spec.get("mode", "bilingual")
        langs = spec.get("langs", "all")
        try:
            check_method(method, mode)
        except ValueError as exc:
            raise BenchmarkError(f"method entry {i} ({name}): {exc}") from None
        params = Params.from_dict({**defaults, **spec})
        methods.append((name, method, mode, langs, params))

    cache: dict[tuple, Model] = {}

    def model_for(idx: int, src: str, tgt: str) -> Model:
        name, method, mode, langs, params = methods[idx]
        if method == "model1":
            key_langs = (src, tgt)
        elif mode == "multilingual":
            key_langs = tuple(corpus.languages if langs == "all" else
                              (langs.split(",") if isinstance(langs, str) else langs))
        else:
            key_langs = tuple(sorted((src, tgt)))
        key = (idx, key_langs)
        if key not in cache:
            log.info("training %s on %s", name, ",".join(key_langs))
            cache[key] = train(corpus, vocab, method, key_langs, mode, params)
        return cache[key]

    cells: dict[tuple[int, int], float] = {}
    results: list[str] = []
    for r, row in enumerate(rows):
        for m, (name, *_rest) in enumerate(methods):
            try:
                model = model_for(m, row.src, row.tgt)
                if row.kind == "align":
                    value = evaluate_alignment(model, row.src, row.tgt, row.files["gold"],
                                               row.files["src_text"], row.files["tgt_text"])
                    results.append(format_result(row.name, row.src, row.tgt, name, "1-AER", value))
                else:
                    value, coverage = evaluate_dictionary(model, row.src, row.tgt,
                                                          row.files["dictionary"])
                    results.append(format_result(row.name, row.src, row.tgt, name, "P@1", value))
                    results.append(format_result(row.name, row.src, row.tgt, name, "coverage",
                                                 coverage))
            except Exception as exc:
                raise BenchmarkError(f"cell {row.name} {row.src}->{row.tgt} / {name}: {exc}") \
                    from exc
            cells[r, m] = value
    table = format_table(rows, [m[0] for m in methods], cells)
    return table, results
