"""Command-line orchestration: score, evaluate, stress, hubness, explain,
synth, validate-store.

Exit codes: 0 success, 1 runtime failure, 2 usage or configuration error.
All randomness flows from one --seed flag; per-word seeds are derived from it
and a stable hash of the word, so results do not depend on scheduling or the
--jobs worker count. Output rows are written in canonical (lexicographic)
order and floats carry 15 significant digits, which makes repeated runs
byte-identical.
"""
from __future__ import annotations

import argparse
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import metrics as m
from ._util import fmt15, word_seed
from .errors import (
    ConfigError,
    DomainError,
    FormatError,
    SemshiftError,
    ValidationError,
)
from .evaluation import EvalResult, aggregate, evaluate_run
from .hubness import hubness_report
from .interpret import (
    asymmetry_record,
    lda_direction,
    top_discriminative_definitions,
)
from .spaces import SpaceConfig, SpaceKind, apply_space, stress_schedule
from .store import (
    ChangeScoreTable,
    EmbeddingStore,
    Metric,
    load_definition_set,
    load_embedding_store,
    load_gold_scores,
    read_results,
    write_results,
)
from .synth import build_graded_store

log = logging.getLogger("semshift")

# sentinel in the k column: k equals each word's definition count
K_PER_WORD = 0

_METRIC_CHOICES = {mt.value.lower(): mt for mt in Metric}
_SPACE_CHOICES = {sk.value.lower(): sk for sk in SpaceKind}


@dataclass
class RunSpec:
    store: Path
    metrics: list[Metric]
    spaces: list[SpaceKind]
    k: int | None  # None: per-word definition count for PCA/RAND
    defs: Path | None
    out: Path
    seed: int
    repetitions: int
    jobs: int


# ---------------------------------------------------------------------------
# per-word scoring (module level so process pools can pickle it)

_WORKER_STORES: dict[str, EmbeddingStore] = {}


def _cached_store(root: str) -> EmbeddingStore:
    store = _WORKER_STORES.get(root)
    if store is None:
        store = load_embedding_store(root)
        _WORKER_STORES[root] = store
    return store


def _metric_value(
    metric: Metric, a, b, master_seed: int, word: str, repetitions: int
) -> float:
    if metric is Metric.APD:
        return m.apd(a, b)
    if metric is Metric.PRT:
        return m.prt(a, b)
    if metric is Metric.AMD:
        return m.amd(a, b)
    if metric is Metric.AMD_1to2:
        return m.amd_directional(a, b).a_to_b
    if metric is Metric.AMD_2to1:
        return m.amd_directional(a, b).b_to_a
    if metric is Metric.SAMD:
        base = word_seed(master_seed, word, "sample")
        scores = [
            m.samd_greedy(a, b, base + rep)[0] for rep in range(repetitions)
        ]
        return float(np.mean(scores))
    raise ConfigError(f"unhandled metric {metric!r}")


def _project_word(
    store: EmbeddingStore,
    word: str,
    kind: SpaceKind,
    k: int | None,
    defs_root: str | None,
    master_seed: int,
):
    """Load one word's matrices and apply the requested space."""
    a, b = store.pair(word)
    defs_emb = None
    if kind is SpaceKind.DEF or (
        kind in (SpaceKind.PCA, SpaceKind.RAND) and k is None
    ):
        defs = load_definition_set(
            defs_root or store.root, word, expected_dim=store.dimension
        )
        if kind is SpaceKind.DEF:
            defs_emb = defs.embeddings
        if k is None:
            k = defs.k
    if kind is SpaceKind.RAND:
        config = SpaceConfig(
            kind=kind, k=k, seed=word_seed(master_seed, word, f"dims:{k}")
        )
    elif kind is SpaceKind.PCA:
        config = SpaceConfig(kind=kind, k=k)
    else:
        config = SpaceConfig(kind=kind)
    return apply_space(a.vectors, b.vectors, config, def_embeddings=defs_emb)


def _score_word(args: tuple) -> tuple[str, float | None, str | None]:
    (root, word, metric_name, space_name, k, defs_root, seed, repetitions) = args
    metric = Metric(metric_name)
    kind = SpaceKind(space_name)
    try:
        store = _cached_store(root)
        pair = _project_word(store, word, kind, k, defs_root, seed)
        value = _metric_value(metric, pair.a, pair.b, seed, word, repetitions)
        return word, value, None
    except (DomainError, ValidationError, FormatError) as exc:
        return word, None, str(exc)


def _map_words(tasks: list[tuple], jobs: int):
    if jobs <= 1:
        return [_score_word(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_score_word, tasks, chunksize=1))


def _score_table(
    store: EmbeddingStore,
    metric: Metric,
    kind: SpaceKind,
    k: int | None,
    defs: Path | None,
    seed: int,
    repetitions: int,
    jobs: int,
) -> ChangeScoreTable:
    tasks = [
        (
            str(store.root),
            word,
            metric.value,
            kind.value,
            k,
            str(defs) if defs else None,
            seed,
            repetitions,
        )
        for word in sorted(store.words)
    ]
    rows: dict[str, float] = {}
    for word, value, reason in _map_words(tasks, jobs):
        if reason is not None:
            log.warning(
                "skipping %r for %s/%s: %s", word, metric.value, kind.value, reason
            )
        else:
            rows[word] = value
    if kind is SpaceKind.FULL:
        k_col = store.dimension
    elif k is None:
        k_col = K_PER_WORD
    else:
        k_col = k
    return ChangeScoreTable(
        metric=metric,
        space=kind,
        k=k_col,
        seed=seed,
        rows=rows,
        repetitions=repetitions,
    )


def _check_defs_needed(spec: RunSpec, store: EmbeddingStore) -> None:
    needs_defs = SpaceKind.DEF in spec.spaces or (
        spec.k is None
        and any(s in (SpaceKind.PCA, SpaceKind.RAND) for s in spec.spaces)
    )
    if not needs_defs:
        return
    defs_root = spec.defs or store.root
    if not any(
        (Path(defs_root) / w / "definitions.txt").is_file() for w in store.words
    ):
        raise ConfigError(
            f"no definition sets found under {defs_root}; DEF space and the "
            "per-word k policy require them (or pass --k for PCA/RAND)"
        )


def cmd_score(spec: RunSpec) -> list[Path]:
    store = load_embedding_store(spec.store)
    _check_defs_needed(spec, store)
    spec.out.mkdir(parents=True, exist_ok=True)
    written = []
    for metric in spec.metrics:
        for kind in spec.spaces:
            table = _score_table(
                store, metric, kind, spec.k, spec.defs, spec.seed,
                spec.repetitions, spec.jobs,
            )
            name = (
                f"scores_{metric.value.lower()}_{kind.value.lower()}"
                f"_k{table.k}_seed{spec.seed}.csv"
            )
            path = spec.out / name
            write_results(table, path)
            log.info("wrote %s (%d words)", path, len(table.rows))
            written.append(path)
    return written


# ---------------------------------------------------------------------------
# evaluate

EVAL_HEADER = "file,metric,space,k,seed,rho,n_words,error"


def cmd_evaluate(
    results: list[Path],
    gold_path: Path,
    out: Path,
    group_by: list[str] | None = None,
) -> int:
    gold = load_gold_scores(gold_path)
    out.mkdir(parents=True, exist_ok=True)
    lines = [EVAL_HEADER]
    ok_results: list[EvalResult] = []
    failures = 0
    for path in results:
        try:
            table = read_results(path)
            res = evaluate_run(table, gold)
            ok_results.append(res)
            lines.append(
                f"{path},{res.metric.value},{res.space.value},{res.k},{res.seed},"
                f"{fmt15(res.rho)},{res.n_words},"
            )
        except SemshiftError as exc:
            failures += 1
            log.error("%s: %s", path, exc)
            lines.append(f"{path},,,,,,,{str(exc).replace(',', ';')}")
    eval_path = out / "evaluation.csv"
    eval_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    log.info("wrote %s", eval_path)
    if group_by and ok_results:
        rows = aggregate(ok_results, group_by)
        agg_lines = [",".join([*group_by, "mean_rho", "std_rho", "n_runs"])]
        for row in rows:
            keys = [
                getattr(row.group[k], "value", row.group[k]) for k in group_by
            ]
            agg_lines.append(
                ",".join(
                    [*map(str, keys), fmt15(row.mean_rho), fmt15(row.std_rho),
                     str(row.n_runs)]
                )
            )
        agg_path = out / "aggregate.csv"
        agg_path.write_text("\n".join(agg_lines) + "\n", encoding="utf-8")
        log.info("wrote %s", agg_path)
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# stress

STRESS_METRICS = (Metric.APD, Metric.PRT, Metric.AMD, Metric.SAMD)
STRESS_HEADER = "metric,space,k,seed,rho"


def cmd_stress(
    store_path: Path,
    gold_path: Path,
    out: Path,
    seed: int = 0,
    repetitions: int = 1,
    jobs: int = 1,
    floor: int = 4,
) -> Path:
    store = load_embedding_store(store_path)
    gold = load_gold_scores(gold_path)
    schedule = stress_schedule(store.dimension, floor)
    tables_dir = out / "tables"
    tables_dir.mkdir(parents=True, exist_ok=True)
    lines = [STRESS_HEADER]
    for kind in (SpaceKind.PCA, SpaceKind.RAND):
        for k in schedule:
            for metric in STRESS_METRICS:
                table = _score_table(
                    store, metric, kind, k, None, seed, repetitions, jobs
                )
                name = (
                    f"scores_{metric.value.lower()}_{kind.value.lower()}"
                    f"_k{k}_seed{seed}.csv"
                )
                write_results(table, tables_dir / name)
                try:
                    rho = evaluate_run(table, gold).rho
                except ValidationError as exc:
                    # a constant score column carries no rank signal; record
                    # zero retained correlation instead of aborting the sweep
                    log.warning(
                        "%s/%s k=%d: %s; recording rho=0",
                        metric.value, kind.value, k, exc,
                    )
                    rho = 0.0
                lines.append(
                    f"{metric.value},{kind.value},{k},{seed},{fmt15(rho)}"
                )
    path = out / "stress.csv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    log.info("wrote %s (%d rows)", path, len(lines) - 1)
    return path


# ---------------------------------------------------------------------------
# hubness

HUBNESS_HEADER = "word,space,dominant_share,unused_share,avg_load"


def cmd_hubness(
    store_path: Path,
    out: Path,
    kind: SpaceKind = SpaceKind.FULL,
    k: int | None = None,
    defs: Path | None = None,
    seed: int = 0,
) -> Path:
    store = load_embedding_store(store_path)
    out.mkdir(parents=True, exist_ok=True)
    lines = [HUBNESS_HEADER]
    for word in sorted(store.words):
        try:
            pair = _project_word(store, word, kind, k, _opt_str(defs), seed)
            stats = hubness_report(pair.a, pair.b)
        except (DomainError, ValidationError, FormatError) as exc:
            log.warning("skipping %r: %s", word, exc)
            continue
        lines.append(
            f"{word},{kind.value},{fmt15(stats.dominant_share)},"
            f"{fmt15(stats.unused_share)},{fmt15(stats.avg_load)}"
        )
    path = out / "hubness.csv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    log.info("wrote %s", path)
    return path


def _opt_str(p: Path | None) -> str | None:
    return str(p) if p is not None else None


# ---------------------------------------------------------------------------
# explain

ASYMMETRY_HEADER = "word,amd_1to2,amd_2to1,asymmetry,direction"


def _word_block(
    store: EmbeddingStore,
    word: str,
    m_top: int,
    defs_root: Path | None,
    kind: SpaceKind,
    k: int | None,
    seed: int,
    balance_eps: float,
    ridge: float | None = None,
) -> str:
    pair = _project_word(store, word, kind, k, _opt_str(defs_root), seed)
    record = asymmetry_record(word, pair.a, pair.b, balance_eps)
    out = [
        f"word: {word}",
        f"  amd_1to2  = {record.amd_1to2:.6f}",
        f"  amd_2to1  = {record.amd_2to1:.6f}",
        f"  asymmetry = {record.asymmetry:.6f}",
        f"  direction = {record.direction.value}",
    ]
    defs = load_definition_set(
        defs_root or store.root, word, expected_dim=store.dimension
    )
    if m_top > defs.k:
        raise ConfigError(f"-m {m_top} exceeds the definition count K={defs.k}")
    def_pair = _project_word(
        store, word, SpaceKind.DEF, None, _opt_str(defs_root), seed
    )
    direction = lda_direction(def_pair.a, def_pair.b, ridge=ridge)
    earlier, later = top_discriminative_definitions(direction, defs, m_top)
    out.append("  discriminative definitions:")
    for text, weight in later:
        out.append(f"    later   {weight:+.4f}  {text}")
    for text, weight in earlier:
        out.append(f"    earlier {weight:+.4f}  {text}")
    return "\n".join(out)


def cmd_explain(
    store_path: Path,
    word: str | None,
    m_top: int,
    defs: Path | None,
    kind: SpaceKind,
    k: int | None,
    out: Path | None,
    seed: int = 0,
    balance_eps: float = 0.0,
    ridge: float | None = None,
) -> int:
    store = load_embedding_store(store_path)
    if word is not None:
        if word not in store.words:
            raise ConfigError(f"word {word!r} not in store")
        print(
            _word_block(store, word, m_top, defs, kind, k, seed, balance_eps, ridge)
        )
        return 0
    # store-wide mode: asymmetry CSV plus an LDA text report
    if out is None:
        raise ConfigError("--out is required without --word")
    out.mkdir(parents=True, exist_ok=True)
    records = []
    for w in sorted(store.words):
        try:
            pair = _project_word(store, w, kind, k, _opt_str(defs), seed)
            records.append(asymmetry_record(w, pair.a, pair.b, balance_eps))
        except (DomainError, ValidationError, FormatError) as exc:
            log.warning("skipping %r: %s", w, exc)
    records.sort(key=lambda r: (-r.asymmetry, r.word))
    lines = [ASYMMETRY_HEADER]
    for r in records:
        lines.append(
            f"{r.word},{fmt15(r.amd_1to2)},{fmt15(r.amd_2to1)},"
            f"{fmt15(r.asymmetry)},{r.direction.value}"
        )
    (out / "asymmetry.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    log.info("wrote %s", out / "asymmetry.csv")
    blocks = []
    for w in sorted(store.words):
        try:
            blocks.append(
                _word_block(store, w, m_top, defs, kind, k, seed, balance_eps, ridge)
            )
        except (DomainError, ValidationError, FormatError, ConfigError) as exc:
            log.warning("no report for %r: %s", w, exc)
    if blocks:
        (out / "lda_report.txt").write_text(
            "\n\n".join(blocks) + "\n", encoding="utf-8"
        )
        log.info("wrote %s", out / "lda_report.txt")
    return 0


# ---------------------------------------------------------------------------
# validate

def cmd_validate(store_path: Path) -> int:
    store = load_embedding_store(store_path)
    warnings = 0
    for word in store.words:
        store.pair(word)
        txt = (store.root / word / "definitions.txt").is_file()
        emb = (store.root / word / "definitions.emb").is_file()
        if txt != emb:
            log.warning(
                "%r: definitions.%s present without definitions.%s",
                word,
                "txt" if txt else "emb",
                "emb" if txt else "txt",
            )
            warnings += 1
        elif txt:
            store.definitions(word)
    print(
        f"store OK: {len(store.words)} words, dimension {store.dimension}, "
        f"{warnings} warnings"
    )
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _parse_metrics(raw: list[str]) -> list[Metric]:
    names = [n for chunk in raw for n in chunk.split(",") if n]
    if not names or "all" in names:
        return list(Metric)
    try:
        return [_METRIC_CHOICES[n.lower()] for n in names]
    except KeyError as exc:
        raise ConfigError(
            f"unknown metric {exc.args[0]!r}; choose from "
            f"{', '.join(_METRIC_CHOICES)}"
        ) from exc


def _parse_spaces(raw: list[str]) -> list[SpaceKind]:
    names = [n for chunk in raw for n in chunk.split(",") if n]
    if not names or "all" in names:
        return list(SpaceKind)
    try:
        return [_SPACE_CHOICES[n.lower()] for n in names]
    except KeyError as exc:
        raise ConfigError(
            f"unknown space {exc.args[0]!r}; choose from "
            f"{', '.join(_SPACE_CHOICES)}"
        ) from exc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="semshift",
        description="Semantic change scores from diachronic usage embeddings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    score = sub.add_parser("score", help="per-word change scores as CSV tables")
    score.add_argument("store", type=Path)
    score.add_argument("--metric", action="append", default=[],
                       help="comma-separated metric names or 'all'")
    score.add_argument("--space", action="append", default=[],
                       help="comma-separated space names or 'all'")
    score.add_argument("--k", type=int, default=None,
                       help="fixed dimension for PCA/RAND "
                            "(default: per-word definition count)")
    score.add_argument("--defs", type=Path, default=None,
                       help="directory with <word>/definitions.{txt,emb} "
                            "(default: the store root)")
    score.add_argument("--out", type=Path, required=True)
    score.add_argument("--seed", type=int, default=0)
    score.add_argument("--repetitions", type=int, default=1)
    score.add_argument("--jobs", type=int, default=1)

    evaluate = sub.add_parser("evaluate", help="Spearman correlation vs gold")
    evaluate.add_argument("results", nargs="+", type=Path)
    evaluate.add_argument("--gold", type=Path, required=True)
    evaluate.add_argument("--out", type=Path, required=True)
    evaluate.add_argument("--group-by", default=None,
                          help="comma-separated keys (metric,space,k,seed)")

    stress = sub.add_parser(
        "stress", help="halving-schedule robustness sweep (PCA and RAND)"
    )
    stress.add_argument("store", type=Path)
    stress.add_argument("--gold", type=Path, required=True)
    stress.add_argument("--out", type=Path, required=True)
    stress.add_argument("--seed", type=int, default=0)
    stress.add_argument("--repetitions", type=int, default=1)
    stress.add_argument("--jobs", type=int, default=1)
    stress.add_argument("--floor", type=int, default=4)

    hub = sub.add_parser("hubness", help="nearest-neighbour hubness diagnostics")
    hub.add_argument("store", type=Path)
    hub.add_argument("--space", default="full")
    hub.add_argument("--k", type=int, default=None)
    hub.add_argument("--defs", type=Path, default=None)
    hub.add_argument("--out", type=Path, required=True)
    hub.add_argument("--seed", type=int, default=0)

    explain = sub.add_parser(
        "explain", help="directional asymmetry and discriminative definitions"
    )
    explain.add_argument("store", type=Path)
    explain.add_argument("--word", default=None)
    explain.add_argument("-m", "--top", type=int, default=3, dest="top")
    explain.add_argument("--defs", type=Path, default=None)
    explain.add_argument("--space", default="full")
    explain.add_argument("--k", type=int, default=None)
    explain.add_argument("--out", type=Path, default=None)
    explain.add_argument("--seed", type=int, default=0)
    explain.add_argument("--balance-eps", type=float, default=0.0)
    explain.add_argument("--ridge", type=float, default=None,
                         help="LDA scatter regularization (default: 1e-3 * trace/K)")

    synth = sub.add_parser("synth", help="write a synthetic graded-change store")
    synth.add_argument("--out", type=Path, required=True)
    synth.add_argument("--words", type=int, default=16)
    synth.add_argument("--d", type=int, default=64)
    synth.add_argument("--n", type=int, default=60)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--confound", type=float, default=0.35)
    synth.add_argument("--no-defs", action="store_true")

    validate = sub.add_parser("validate-store", help="eagerly validate a store")
    validate.add_argument("store", type=Path)

    return parser


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "score":
        spec = RunSpec(
            store=args.store,
            metrics=_parse_metrics(args.metric),
            spaces=_parse_spaces(args.space),
            k=args.k,
            defs=args.defs,
            out=args.out,
            seed=args.seed,
            repetitions=args.repetitions,
            jobs=args.jobs,
        )
        cmd_score(spec)
        return 0
    if args.command == "evaluate":
        group_by = args.group_by.split(",") if args.group_by else None
        return cmd_evaluate(args.results, args.gold, args.out, group_by)
    if args.command == "stress":
        cmd_stress(
            args.store, args.gold, args.out, args.seed, args.repetitions,
            args.jobs, args.floor,
        )
        return 0
    if args.command == "hubness":
        kind = _parse_spaces([args.space])[0]
        cmd_hubness(args.store, args.out, kind, args.k, args.defs, args.seed)
        return 0
    if args.command == "explain":
        kind = _parse_spaces([args.space])[0]
        return cmd_explain(
            args.store, args.word, args.top, args.defs, kind, args.k,
            args.out, args.seed, args.balance_eps, args.ridge,
        )
    if args.command == "synth":
        root, gold = build_graded_store(
            args.out, words=args.words, d=args.d, n=args.n, seed=args.seed,
            confound=args.confound, with_defs=not args.no_defs,
        )
        print(f"store: {root}\ngold:  {gold}")
        return 0
    if args.command == "validate-store":
        return cmd_validate(args.store)
    raise ConfigError(f"unknown command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=logging.INFO,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SemshiftError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
