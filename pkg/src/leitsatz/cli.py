"""Command-line pipeline: ingest, split, stats, enrich, summarize, score,
assign, serve, report.

Every subcommand reads one config file (flags override it), writes
deterministic artifacts into the output directory, and records a manifest
with input/artifact hashes. Timestamps appear only in manifests, so reruns
with identical inputs and seeds produce byte-identical artifacts.

Exit codes: 0 ok, 2 configuration error, 3 data error, 4 external service
failure.
"""

from __future__ import annotations

import argparse
import csv
import glob as globmod
import hashlib
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .config import PipelineConfig, load_config
from .corpus import (
    export_jsonl,
    filter_gold_outliers,
    ingest,
    length_stats,
    make_pairs,
    split_corpus,
    stats_table,
)
from .embeddings import FileEmbeddingProvider, RemoteEmbeddingProvider
from .entities import (
    DEFAULT_KINDS,
    audit_hallucinations,
    detect_entities,
    enrich,
    import_spans,
    special_tokens,
)
from .errors import ConfigError, DataError, TransportError
from .evalframe import (
    agreement_report,
    build_assignments,
    correlate_metrics_with_classes,
    fulfillment_report,
    import_verdicts,
    interpret_kappa,
    majority_verdicts,
    Assignment,
)
from .metrics import PRF, MetricsConfig, export_report_csv, export_report_json, score_corpus
from .summarize import (
    GenerationClient,
    GenerationParams,
    SummaryRecord,
    generate_summary,
    lexrank_summary,
    truncate_to_budget,
)
from .textproc import RemoteTokenCounter, WordTokenCounter


def _counter(cfg: PipelineConfig):
    if cfg.tokenizer.profile == "remote":
        return RemoteTokenCounter(base_url=cfg.tokenizer.base_url, timeout=cfg.tokenizer.timeout)
    return WordTokenCounter()


def _out_dir(cfg: PipelineConfig) -> Path:
    out = Path(cfg.paths.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_manifest(
    cfg: PipelineConfig,
    command: str,
    inputs: list[Path],
    artifacts: list[Path],
    seeds: dict | None = None,
) -> None:
    out = _out_dir(cfg)
    manifest = {
        "command": command,
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "package_version": __version__,
        "seeds": seeds or {},
        "inputs": [
            {"path": str(p), "sha256": _sha256(p)} for p in inputs if p.exists()
        ],
        "artifacts": [
            {"path": str(p), "sha256": _sha256(p)} for p in artifacts if p.exists()
        ],
    }
    path = out / f"manifest_{command}.json"
    path.write_text(json.dumps(manifest, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")


def _write_csv(path: Path, fieldnames: list[str], rows: list[dict]) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)


def _load_store(cfg: PipelineConfig, args) -> object:
    corpus_path = getattr(args, "corpus", None) or cfg.paths.corpus
    fmt = getattr(args, "format", None) or cfg.paths.corpus_format
    return ingest(corpus_path, fmt)


def _summary_files(cfg: PipelineConfig, args) -> list[Path]:
    given = getattr(args, "summaries", None)
    if given:
        files: list[Path] = []
        for chunk in given:
            for name in chunk.split(","):
                if name:
                    files.append(Path(name))
    else:
        files = [Path(p) for p in sorted(globmod.glob(str(_out_dir(cfg) / "summaries_*.jsonl")))]
    if not files:
        raise DataError("no summary files given and none found in the output directory")
    for f in files:
        if not f.exists():
            raise DataError(f"summary file does not exist: {f}")
    return files


def _load_summaries(files: list[Path]) -> list[SummaryRecord]:
    records: list[SummaryRecord] = []
    for file in files:
        with file.open("r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    raw = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise DataError(f"{file}:{lineno}: invalid JSON: {exc}") from exc
                try:
                    records.append(
                        SummaryRecord(
                            judgment_id=str(raw["judgment_id"]),
                            approach=str(raw["approach"]),
                            text=str(raw["text"]),
                            token_count=int(raw.get("token_count", 0)),
                            sentence_count=int(raw.get("sentence_count", 0)),
                            generation_params=raw.get("generation_params"),
                            empty=bool(raw.get("empty", False)),
                            error=raw.get("error"),
                        )
                    )
                except KeyError as exc:
                    raise DataError(f"{file}:{lineno}: missing field {exc.args[0]!r}") from None
    return records


def _write_summaries(path: Path, records: list[SummaryRecord]) -> None:
    with path.open("w", encoding="utf-8") as fh:
        for rec in sorted(records, key=lambda r: (r.judgment_id, r.approach)):
            fh.write(json.dumps(rec.to_dict(), ensure_ascii=False))
            fh.write("\n")


def cmd_ingest(cfg: PipelineConfig, args) -> None:
    store = _load_store(cfg, args)
    out = Path(args.out) if args.out else _out_dir(cfg) / "corpus.jsonl"
    export_jsonl(store, out)
    _write_manifest(cfg, "ingest", [Path(args.corpus or cfg.paths.corpus)], [out])
    print(f"ingested {len(store)} judgments -> {out}")


def cmd_split(cfg: PipelineConfig, args) -> None:
    store = _load_store(cfg, args)
    ratios = cfg.split.ratios
    if args.ratios:
        parts = args.ratios.split(",")
        if len(parts) != 3:
            raise ConfigError(f"--ratios needs three comma-separated numbers, got {args.ratios!r}")
        ratios = tuple(float(p) for p in parts)
    seed = cfg.split.seed if args.seed is None else args.seed
    split = split_corpus(store, ratios, seed)
    out = _out_dir(cfg) / "split.json"
    _write_json(
        out,
        {
            "seed": seed,
            "ratios": list(ratios),
            "sizes": list(split.sizes()),
            "train": sorted(split.train.judgment_ids),
            "valid": sorted(split.valid.judgment_ids),
            "test": sorted(split.test.judgment_ids),
        },
    )
    _write_manifest(cfg, "split", [Path(args.corpus or cfg.paths.corpus)], [out], {"split": seed})
    print(f"split {len(store)} judgments into {split.sizes()} -> {out}")


def cmd_stats(cfg: PipelineConfig, args) -> None:
    store = _load_store(cfg, args)
    counter = _counter(cfg)
    pairs, skip = make_pairs(store, cfg.corpus.reasons_heading)
    if not pairs:
        raise DataError("no judgments with a reasons section")
    threshold = cfg.corpus.max_gold_tokens if args.max_gold_tokens is None else args.max_gold_tokens
    exclusion = None
    if threshold:
        pairs, exclusion = filter_gold_outliers(pairs, threshold, counter)
        if not pairs:
            raise DataError(f"every gold text exceeds {threshold} tokens")
    texts_by_id = {
        p.judgment_id: (p.source if args.texts == "source" else p.gold) for p in pairs
    }
    rows = {"all": length_stats(list(texts_by_id.values()), counter)}
    split_file = Path(args.split_file) if args.split_file else _out_dir(cfg) / "split.json"
    if split_file.exists():
        split_data = json.loads(split_file.read_text(encoding="utf-8"))
        for name in ("train", "valid", "test"):
            ids = [i for i in split_data.get(name, []) if i in texts_by_id]
            if ids:
                rows[name] = length_stats([texts_by_id[i] for i in ids], counter)
    out_json = _out_dir(cfg) / "stats.json"
    out_csv = _out_dir(cfg) / "stats.csv"
    _write_json(
        out_json,
        {
            "texts": args.texts,
            "skipped": skip.to_dict(),
            "gold_outliers": exclusion.to_dict() if exclusion else None,
            "stats": stats_table(rows),
        },
    )
    _write_csv(
        out_csv,
        ["split", "min", "mean", "max", "std"],
        [{"split": name, **st.to_dict()} for name, st in rows.items()],
    )
    _write_manifest(cfg, "stats", [Path(args.corpus or cfg.paths.corpus)], [out_json, out_csv])
    print(f"length stats over {len(texts_by_id)} {args.texts} texts -> {out_csv}")


def cmd_enrich(cfg: PipelineConfig, args) -> None:
    store = _load_store(cfg, args)
    pairs, skip = make_pairs(store, cfg.corpus.reasons_heading)
    sources = {p.judgment_id: p.source for p in pairs}
    spans_path = args.spans or cfg.paths.spans
    if spans_path:
        spans_by_id = import_spans(spans_path, sources)
    else:
        spans_by_id = {jid: detect_entities(text) for jid, text in sources.items()}
    out = _out_dir(cfg) / "enriched.jsonl"
    with out.open("w", encoding="utf-8") as fh:
        for jid in sorted(sources):
            spans = spans_by_id.get(jid, [])
            fh.write(
                json.dumps(
                    {
                        "id": jid,
                        "text": enrich(sources[jid], spans),
                        "spans": [
                            {"start": s.start, "end": s.end, "kind": s.kind} for s in spans
                        ],
                    },
                    ensure_ascii=False,
                )
            )
            fh.write("\n")
    report = _out_dir(cfg) / "enrich_report.json"
    total = sum(len(s) for s in spans_by_id.values())
    _write_json(report, {"documents": len(sources), "spans": total, "skipped": skip.to_dict()})
    inputs = [Path(args.corpus or cfg.paths.corpus)]
    if spans_path:
        inputs.append(Path(spans_path))
    _write_manifest(cfg, "enrich", inputs, [out, report])
    print(f"enriched {len(sources)} documents with {total} spans -> {out}")


def _load_enriched(cfg: PipelineConfig, args) -> dict[str, str]:
    path = Path(args.enriched_file) if getattr(args, "enriched_file", None) else _out_dir(cfg) / "enriched.jsonl"
    if not path.exists():
        return {}
    texts: dict[str, str] = {}
    with path.open("r", encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                raw = json.loads(line)
                texts[str(raw["id"])] = str(raw["text"])
    return texts


def cmd_summarize(cfg: PipelineConfig, args) -> None:
    store = _load_store(cfg, args)
    counter = _counter(cfg)
    pairs, skip = make_pairs(store, cfg.corpus.reasons_heading)
    if not pairs:
        raise DataError("no judgments with a reasons section")
    approach = args.approach
    records: list[SummaryRecord] = []
    if approach == "lexrank":
        k = cfg.lexrank.k if args.k is None else args.k
        threshold = cfg.lexrank.threshold if args.threshold is None else args.threshold
        damping = cfg.lexrank.damping if args.damping is None else args.damping
        for pair in pairs:
            records.append(
                lexrank_summary(
                    pair.source,
                    k=k,
                    threshold=threshold,
                    damping=damping,
                    judgment_id=pair.judgment_id,
                    counter=counter,
                )
            )
    else:
        profile = cfg.generation.profile(args.endpoint or "")
        client = GenerationClient(
            base_url=profile.base_url, headers=profile.headers(), timeout=profile.timeout
        )
        tokens = list(special_tokens(DEFAULT_KINDS)) if approach == "model_enriched" else []
        enriched = _load_enriched(cfg, args) if approach == "model_enriched" else {}
        params = GenerationParams(
            max_new_tokens=cfg.budgets.max_new_tokens,
            decoding="greedy",
            endpoint=profile.name,
            special_tokens=tuple(tokens),
        )
        for pair in pairs:
            text = pair.source
            if approach == "model_enriched":
                text = enriched.get(pair.judgment_id) or enrich(
                    pair.source, detect_entities(pair.source)
                )
            text = truncate_to_budget(
                text,
                cfg.budgets.context_window,
                cfg.budgets.max_new_tokens,
                counter,
                profile.prompt_overhead,
            )
            records.append(
                generate_summary(
                    client,
                    text,
                    params,
                    approach=approach,
                    judgment_id=pair.judgment_id,
                    counter=counter,
                )
            )
    out = _out_dir(cfg) / f"summaries_{approach}.jsonl"
    _write_summaries(out, records)
    empties = sum(1 for r in records if r.empty)
    _write_manifest(cfg, f"summarize_{approach}", [Path(args.corpus or cfg.paths.corpus)], [out])
    note = f", {empties} empty" if empties else ""
    if skip.count:
        note += f", {skip.count} skipped"
    print(f"wrote {len(records)} {approach} summaries{note} -> {out}")


def cmd_score(cfg: PipelineConfig, args) -> None:
    files = _summary_files(cfg, args)
    summaries = _load_summaries(files)
    store = _load_store(cfg, args)
    golds = {j.id: j.gold_guiding_principles for j in store}
    metric_names = tuple((args.metrics or ",".join(cfg.metrics.enabled)).split(","))
    provider = None
    embedding_file = args.embedding_file or cfg.metrics.embedding_file
    embedding_url = args.embedding_url or cfg.metrics.embedding_url
    if embedding_file:
        provider = FileEmbeddingProvider(path=embedding_file)
    elif embedding_url:
        provider = RemoteEmbeddingProvider(base_url=embedding_url)
    report = score_corpus(
        summaries, golds, MetricsConfig(metrics=metric_names, embedding_provider=provider)
    )
    out_json = _out_dir(cfg) / "scores.json"
    out_csv = _out_dir(cfg) / "scores.csv"
    export_report_json(report, out_json)
    export_report_csv(report, out_csv)
    _write_manifest(cfg, "score", files + [Path(args.corpus or cfg.paths.corpus)], [out_json, out_csv])
    print(
        f"scored {len(summaries) - len(report.excluded)} summaries "
        f"({len(report.excluded)} excluded) on {', '.join(metric_names)} -> {out_csv}"
    )


def cmd_assign(cfg: PipelineConfig, args) -> None:
    files = _summary_files(cfg, args)
    summaries = _load_summaries(files)
    if args.reviewers:
        reviewers = [r for r in args.reviewers.split(",") if r]
    else:
        reviewers = sorted(cfg.service.reviewer_tokens)
    if not reviewers:
        raise ConfigError("no reviewers: pass --reviewers or configure service.reviewer_tokens")
    per_item = cfg.assignment.per_item if args.per_item is None else args.per_item
    seed = cfg.assignment.seed if args.seed is None else args.seed
    assignments = build_assignments(summaries, reviewers, per_item=per_item, seed=seed)
    out = _out_dir(cfg) / "assignments.json"
    _write_json(
        out,
        {
            "seed": seed,
            "per_item": per_item,
            "reviewers": reviewers,
            "assignments": [
                {
                    "judgment_id": a.judgment_id,
                    "approach": a.approach,
                    "reviewers": sorted(a.reviewer_ids),
                    "presentation_order_seed": a.presentation_order_seed,
                }
                for a in assignments
            ],
        },
    )
    loads: dict[str, int] = {r: 0 for r in reviewers}
    for a in assignments:
        for r in a.reviewer_ids:
            loads[r] += 1
    _write_manifest(cfg, "assign", files, [out], {"assignment": seed})
    print(f"assigned {len(assignments)} summaries to {len(reviewers)} reviewers {loads} -> {out}")


def load_assignments(path: str | Path) -> list[Assignment]:
    p = Path(path)
    if not p.exists():
        raise DataError(f"assignments file does not exist: {p}")
    data = json.loads(p.read_text(encoding="utf-8"))
    return [
        Assignment(
            judgment_id=str(a["judgment_id"]),
            approach=str(a["approach"]),
            reviewer_ids=frozenset(a["reviewers"]),
            presentation_order_seed=int(a["presentation_order_seed"]),
        )
        for a in data.get("assignments", [])
    ]


def cmd_serve(cfg: PipelineConfig, args) -> None:
    import uvicorn

    from .service import build_state, create_app

    files = _summary_files(cfg, args)
    summaries = _load_summaries(files)
    store = _load_store(cfg, args)
    pairs, _skip = make_pairs(store, cfg.corpus.reasons_heading)
    assignments = load_assignments(args.assignments or (_out_dir(cfg) / "assignments.json"))
    state = build_state(
        assignments=assignments,
        candidates={(r.judgment_id, r.approach): r.text for r in summaries},
        golds={j.id: j.gold_guiding_principles for j in store},
        excerpts={p.judgment_id: p.source for p in pairs},
        reviewer_tokens=cfg.service.resolved_reviewer_tokens(),
        admin_token=cfg.service.resolved_admin_token(),
        verdict_path=args.verdicts or (_out_dir(cfg) / "verdicts.jsonl"),
        show_excerpt=cfg.service.show_excerpt,
    )
    app = create_app(state)
    host = args.host or cfg.service.host
    port = cfg.service.port if args.port is None else args.port
    print(f"serving review backend on http://{host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


def cmd_report(cfg: PipelineConfig, args) -> None:
    verdict_path = Path(args.verdicts) if args.verdicts else _out_dir(cfg) / "verdicts.jsonl"
    store = import_verdicts(verdict_path)
    per_item = cfg.assignment.per_item if args.per_item is None else args.per_item
    out = _out_dir(cfg)
    artifacts: list[Path] = []
    inputs: list[Path] = [verdict_path]

    agreement = agreement_report(store, per_item=per_item)
    agreement_dict = agreement.to_dict()
    for row in agreement_dict["per_class"]:
        if row["kappa"] is not None:
            row["label"] = interpret_kappa(row["kappa"])
    agreement_json = out / "agreement.json"
    _write_json(agreement_json, agreement_dict)
    pairwise_csv = out / "agreement_pairwise.csv"
    reviewers = list(agreement.reviewers)
    _write_csv(
        pairwise_csv,
        ["reviewer"] + reviewers,
        [
            {
                "reviewer": r1,
                **{
                    r2: ("" if agreement.pairwise_value(r1, r2) is None else agreement.pairwise_value(r1, r2))
                    for r2 in reviewers
                },
            }
            for r1 in reviewers
        ],
    )
    classes_csv = out / "agreement_classes.csv"
    _write_csv(
        classes_csv,
        ["class", "aspect", "kappa", "pairwise_mean_kappa", "fulfilled", "not_fulfilled"],
        [
            {
                "class": row["class"],
                "aspect": row["aspect"],
                "kappa": row["kappa"],
                "pairwise_mean_kappa": row["pairwise_mean_kappa"],
                "fulfilled": row["fulfilled"],
                "not_fulfilled": row["not_fulfilled"],
            }
            for row in agreement_dict["per_class"]
        ],
    )
    artifacts += [agreement_json, pairwise_csv, classes_csv]

    fulfillment = fulfillment_report(store, per_item=per_item)
    fulfillment_json = out / "fulfillment.json"
    fulfillment_csv = out / "fulfillment.csv"
    _write_json(fulfillment_json, fulfillment.to_dict())
    _write_csv(
        fulfillment_csv,
        ["approach", "judgments"]
        + [f"class_{c}" for c in range(1, 8)]
        + ["mean_classes_fulfilled"],
        fulfillment.rows(),
    )
    artifacts += [fulfillment_json, fulfillment_csv]

    scores_path = Path(args.scores) if args.scores else out / "scores.json"
    if scores_path.exists():
        inputs.append(scores_path)
        scores_data = json.loads(scores_path.read_text(encoding="utf-8"))
        per_summary = {
            (row["judgment_id"], row["approach"], row["metric"]): PRF(
                precision=row["precision"], recall=row["recall"], f1=row["f1"]
            )
            for row in scores_data.get("per_summary", [])
        }
        majorities, _excluded = majority_verdicts(store, per_item)
        correlation_rows = correlate_metrics_with_classes(per_summary, majorities)
        correlation_csv = out / "correlation.csv"
        _write_csv(
            correlation_csv,
            ["metric", "component", "class", "n", "rho", "strength"],
            correlation_rows,
        )
        artifacts.append(correlation_csv)

    summary_files = None
    try:
        summary_files = _summary_files(cfg, args)
    except DataError:
        pass
    if summary_files and (args.corpus or Path(cfg.paths.corpus).exists()):
        summaries = _load_summaries(summary_files)
        corpus_store = _load_store(cfg, args)
        pairs, _skip = make_pairs(corpus_store, cfg.corpus.reasons_heading)
        sources = {p.judgment_id: p.source for p in pairs}
        audit_rows = []
        for rec in sorted(summaries, key=lambda r: (r.judgment_id, r.approach)):
            source = sources.get(rec.judgment_id)
            if source is None:
                continue
            audit = audit_hallucinations(rec.text, source)
            audit_rows.append(
                {
                    "judgment_id": rec.judgment_id,
                    "approach": rec.approach,
                    "entities": len(audit.generated_entities),
                    "supported": audit.supported,
                    "support_rate": audit.support_rate,
                    "unsupported": "; ".join(audit.unsupported),
                }
            )
        hallucination_csv = out / "hallucination.csv"
        _write_csv(
            hallucination_csv,
            ["judgment_id", "approach", "entities", "supported", "support_rate", "unsupported"],
            audit_rows,
        )
        inputs += summary_files
        artifacts.append(hallucination_csv)

    _write_manifest(cfg, "report", inputs, artifacts)
    print(f"wrote {len(artifacts)} report artifacts in {out}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="leitsatz",
        description="Produce and evaluate guiding-principle summaries of court judgments.",
    )
    parser.add_argument("--config", help="TOML config file", default=None)
    parser.add_argument("--out-dir", help="output directory override", default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--corpus", default=None, help="corpus path override")
        p.add_argument("--format", default=None, choices=["jsonl", "xml-dir"])

    p = sub.add_parser("ingest", help="validate a corpus and write its canonical form")
    common(p)
    p.add_argument("--out", default=None)

    p = sub.add_parser("split", help="partition the corpus into train/valid/test")
    common(p)
    p.add_argument("--ratios", default=None, help="e.g. 0.7,0.15,0.15")
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("stats", help="token length statistics per split")
    common(p)
    p.add_argument("--split-file", default=None)
    p.add_argument("--texts", choices=["source", "gold"], default="source")
    p.add_argument(
        "--max-gold-tokens",
        type=int,
        default=None,
        help="exclude judgments whose gold exceeds this many tokens (0 disables)",
    )

    p = sub.add_parser("enrich", help="wrap legal entities in tags")
    common(p)
    p.add_argument("--spans", default=None, help="imported span JSONL")

    p = sub.add_parser("summarize", help="produce candidate summaries")
    common(p)
    p.add_argument(
        "--approach", required=True, choices=["lexrank", "model_plain", "model_enriched"]
    )
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--damping", type=float, default=None)
    p.add_argument("--endpoint", default=None)
    p.add_argument("--enriched-file", default=None)

    p = sub.add_parser("score", help="score summaries against gold texts")
    common(p)
    p.add_argument("--summaries", action="append", default=None)
    p.add_argument("--metrics", default=None, help="e.g. rouge1,rouge2,rougeL,bertscore")
    p.add_argument("--embedding-url", default=None)
    p.add_argument("--embedding-file", default=None)

    p = sub.add_parser("assign", help="distribute summaries to reviewers")
    p.add_argument("--summaries", action="append", default=None)
    p.add_argument("--reviewers", default=None, help="comma-separated reviewer ids")
    p.add_argument("--per-item", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("serve", help="run the blinded review backend")
    common(p)
    p.add_argument("--summaries", action="append", default=None)
    p.add_argument("--assignments", default=None)
    p.add_argument("--verdicts", default=None, help="verdict store path")
    p.add_argument("--host", default=None)
    p.add_argument("--port", type=int, default=None)

    p = sub.add_parser("report", help="agreement, fulfillment, correlation, audits")
    common(p)
    p.add_argument("--verdicts", default=None)
    p.add_argument("--scores", default=None)
    p.add_argument("--summaries", action="append", default=None)
    p.add_argument("--per-item", type=int, default=None)

    return parser


HANDLERS = {
    "ingest": cmd_ingest,
    "split": cmd_split,
    "stats": cmd_stats,
    "enrich": cmd_enrich,
    "summarize": cmd_summarize,
    "score": cmd_score,
    "assign": cmd_assign,
    "serve": cmd_serve,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.out_dir:
            cfg.paths.out_dir = args.out_dir
        HANDLERS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except TransportError as exc:
        print(f"external service error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
