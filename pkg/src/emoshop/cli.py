"""Command-line entry points: catalog ingestion, SER training/evaluation,
policy inspection, usability summaries and the HTTP server."""
from __future__ import annotations

import json
from pathlib import Path

import click

from emoshop import evalkit
from emoshop.catalog import ingest_catalog
from emoshop.emotions import LABEL_ORDER, EmotionLabel, dominant_emotion


@click.group()
def main():
    """Emotion-aware shopping assistant engine."""


@main.command()
@click.option("--catalog", "catalog_path", required=True, type=click.Path(exists=True))
def ingest(catalog_path: str):
    """Validate a catalog file and report the record count."""
    catalog = ingest_catalog(catalog_path)
    click.echo(f"ok: {len(catalog)} products")


@main.group()
def ser():
    """Speech emotion recognition commands."""


@ser.command("train")
@click.option("--corpus", "corpus_dir", required=True, type=click.Path(exists=True))
@click.option("--out", "model_path", required=True, type=click.Path())
@click.option("--seed", default=0, show_default=True)
def ser_train(corpus_dir: str, model_path: str, seed: int):
    """Train the emotion classifier on a labeled corpus."""
    from emoshop.ser import load_corpus, train

    corpus = load_corpus(corpus_dir)
    model = train(corpus, seed=seed)
    model.save(model_path)
    click.echo(f"trained on {len(corpus)} clips -> {model_path}")


@ser.command("eval")
@click.option("--corpus", "corpus_dir", required=True, type=click.Path(exists=True))
@click.option("--folds", default=5, show_default=True)
@click.option("--seed", default=0, show_default=True)
def ser_eval(corpus_dir: str, folds: int, seed: int):
    """Cross-validated accuracy / precision / recall / F1."""
    from emoshop.ser import evaluate, load_corpus

    corpus = load_corpus(corpus_dir)
    report = evaluate(corpus, k=folds, seed=seed)
    click.echo(f"accuracy: {report.accuracy:.4f}  ({folds}-fold CV)")
    for label in LABEL_ORDER:
        click.echo(
            f"  {label.value:<11} P={report.precision[label]:.3f} "
            f"R={report.recall[label]:.3f} F1={report.f1[label]:.3f}"
        )


@ser.command("predict")
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--wav", "wav_path", required=True, type=click.Path(exists=True))
@click.option("--threshold", default=0.5, show_default=True)
def ser_predict(model_path: str, wav_path: str, threshold: float):
    """Score one WAV file and print the dominant emotion."""
    from emoshop.audio import read_wav
    from emoshop.ser import EmotionClassifier, extract_features, preprocess

    model = EmotionClassifier.load(model_path)
    clip = preprocess(read_wav(wav_path))
    scores = model.classify(extract_features(clip))
    for label in LABEL_ORDER:
        click.echo(f"{label.value:<11} {scores[label]:.4f}")
    click.echo(f"dominant: {dominant_emotion(scores, threshold=threshold).value}")


@main.group()
def policy():
    """Empathy policy commands."""


@policy.command("show")
@click.argument("emotion")
def policy_show(emotion: str):
    """Print the response directive for one emotion."""
    from emoshop.policy import directive_for

    directive = directive_for(EmotionLabel(emotion.lower()))
    click.echo(f"emotion:    {directive.emotion.value}")
    click.echo(f"goals:      {', '.join(g.value for g in directive.goals)}")
    click.echo(f"strategies: {', '.join(s.value for s in directive.strategies)}")
    click.echo(f"tone:       {directive.tone_guidance}")
    click.echo(f"fragment:   {directive.prompt_fragment or '(none)'}")


@main.group("eval")
def eval_group():
    """Usability evaluation commands."""


@eval_group.command("summarize")
@click.option("--tasks", "tasks_csv", required=True, type=click.Path(exists=True))
@click.option("--umux", "umux_csv", type=click.Path(exists=True))
@click.option("--emit-plots", "plots_dir", type=click.Path())
def eval_summarize(tasks_csv: str, umux_csv: str | None, plots_dir: str | None):
    """Print the per-task summary table, mean UMUX-Lite score and grade."""
    records = evalkit.load_task_records(tasks_csv)
    umux = evalkit.load_umux_records(umux_csv) if umux_csv else []
    table = evalkit.aggregate(records, umux)
    click.echo(evalkit.render_summary(table))
    flags = evalkit.check_message_budget(records)
    over = [task for task, flagged in flags.items() if flagged]
    if over:
        click.echo(f"Over message budget: {', '.join(over)}")
    if plots_dir:
        _emit_plots(table, Path(plots_dir))
        click.echo(f"plots written to {plots_dir}")


def _emit_plots(table, out_dir: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir.mkdir(parents=True, exist_ok=True)
    tasks = [row.task_id for row in table.rows]

    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    axes[0].bar(tasks, [row.avg_time_seconds for row in table.rows])
    axes[0].set_title("Average time per task (s)")
    axes[1].bar(tasks, [row.avg_messages for row in table.rows])
    axes[1].set_title("Average messages per task")
    fig.savefig(out_dir / "tasks.png")
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(5, 5))
    labels = [m for m, p in table.method_usage_pct.items() if p > 0]
    shares = [p for p in table.method_usage_pct.values() if p > 0]
    ax.pie(shares, labels=labels, autopct="%1.0f%%")
    ax.set_title("Methods used")
    fig.savefig(out_dir / "methods.png")
    plt.close(fig)


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True))
@click.option("--catalog", "catalog_path", type=click.Path(exists=True))
@click.option("--mock", is_flag=True, default=False, help="Force offline mock providers.")
@click.option("--port", default=None, type=int)
def serve(config_path: str | None, catalog_path: str | None, mock: bool, port: int | None):
    """Run the HTTP server."""
    import uvicorn

    from emoshop.dialogue import KeywordLlmProvider, ThreadStore
    from emoshop.imagesearch import ImageIndex
    from emoshop.policy import EmpathyPolicy
    from emoshop.server import AppDeps, ServerConfig, build_app
    from emoshop.speechio import FixedScorer, StaticStt, ToneTts, ClassifierScorer
    from emoshop.emotions import uniform_scores

    raw = json.loads(Path(config_path).read_text(encoding="utf-8")) if config_path else {}
    config = ServerConfig(
        bind=raw.get("bind", "127.0.0.1:8080"),
        catalog_path=catalog_path or raw.get("catalog_path", "catalog.json"),
        policy_path=raw.get("policy_path"),
        provider_mode="mock" if mock else raw.get("provider_mode", "mock"),
        classifier_path=raw.get("classifier_path"),
        emotion_threshold=raw.get("emotion_threshold", 0.5),
        max_products=raw.get("max_products", 3),
    )
    catalog = ingest_catalog(config.catalog_path)
    policy_obj = (
        EmpathyPolicy.from_file(config.policy_path)
        if config.policy_path
        else EmpathyPolicy()
    )
    if config.classifier_path:
        from emoshop.ser import EmotionClassifier

        scorer = ClassifierScorer(EmotionClassifier.load(config.classifier_path))
    else:
        scorer = FixedScorer(uniform_scores())

    if config.provider_mode == "live":
        from emoshop.providers_live import (
            HttpEmotionScorer,
            HttpLlmProvider,
            HttpSttProvider,
            HttpTtsProvider,
        )

        live = raw.get("live", {})
        llm = HttpLlmProvider(live["llm_url"], live.get("model", "gpt-4o"))
        stt = HttpSttProvider(live["stt_url"])
        tts = HttpTtsProvider(live["tts_url"], voice=live.get("voice", "default"))
        if "emotion_url" in live:
            scorer = HttpEmotionScorer(live["emotion_url"], language=live.get("language", "en"))
    else:
        llm = KeywordLlmProvider(catalog, max_products=config.max_products)
        stt = StaticStt()
        tts = ToneTts()

    image_root = raw.get("image_root")
    image_index = ImageIndex.build(
        catalog, image_root=image_root, cache_path=raw.get("image_cache_path")
    )
    deps = AppDeps(
        catalog=catalog,
        policy=policy_obj,
        llm=llm,
        stt=stt,
        tts=tts,
        scorer=scorer,
        image_index=image_index,
        store=ThreadStore(raw.get("thread_log_dir")),
        config=config,
    )
    app = build_app(deps)
    host, _, bind_port = config.bind.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=port or int(bind_port or 8080))


if __name__ == "__main__":
    main()
