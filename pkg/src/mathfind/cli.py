"""Command-line interface.

Verbs: ``index``, ``search``, ``autocomplete``, ``eval``, ``solve-wp``,
``serve``. Every flag can also come from a key=value config file
(``--config``); explicit flags win. The index directory defaults to the
``MATHFIND_INDEX`` environment variable.
"""

from __future__ import annotations

import json
import re
import sys
from pathlib import Path

import click

from . import __version__
from .engine import ENGINES, EngineSpec, FUSERS, RERANKERS, SearchEngine, build_stores, run_item_id, save_stores
from .errors import DuplicateDocId, MathfindError
from .evaluation.files import GradeScale, parse_qrels, parse_run
from .evaluation.report import compute_report, write_report
from .formula.parser import parse_latex
from .formula.translate import slt_to_opt
from .index.build import ExtractorConfig, read_collection
from .phoc.layout import SymbolBox
from .phoc.search import autocomplete as phoc_autocomplete
from .wordproblems.linear import solve_equation
from .wordproblems.states import aris_solve
from .evaluation.answers import answers_match


def _load_config(path: str | None) -> dict[str, str]:
    if not path:
        return {}
    values: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise click.ClickException(f"{path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        values[key.strip().replace("-", "_")] = value.strip()
    return values


def _setting(flag_value, config: dict[str, str], key: str, default, cast=str):
    if flag_value is not None:
        return flag_value
    if key in config:
        return cast(config[key])
    return default


@click.group()
@click.version_option(__version__)
def main():
    """Math-aware formula search and evaluation toolkit."""


@main.command("index")
@click.option("--collection", required=True, type=click.Path(exists=True), help="JSON-lines collection")
@click.option("--out", "out_dir", required=True, type=click.Path(), help="index directory")
@click.option("--force", is_flag=True, help="overwrite an existing index directory")
@click.option("--slt-window", type=int, default=None, help="max relation-path length for layout tuples")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def cmd_index(collection, out_dir, force, slt_window, config_path):
    """Build the sparse index and spatial store from a collection."""
    config = _load_config(config_path)
    window = _setting(slt_window, config, "slt_window", 1, int)
    out = Path(out_dir)
    if out.exists() and any(out.iterdir()) and not force:
        raise click.ClickException(f"{out} exists; use --force to overwrite")
    try:
        docs = list(read_collection(collection))
        index, store = build_stores(docs, ExtractorConfig(slt_window=window))
    except DuplicateDocId as err:
        click.echo(f"duplicate document id: {err}", err=True)
        sys.exit(2)
    except (OSError, ValueError) as err:
        raise click.ClickException(str(err))
    save_stores(index, store, out)
    if index.n_docs == 0:
        click.echo("warning: empty collection, index has no documents", err=True)
    click.echo(f"indexed {index.n_docs} documents, {len(index.terms)} terms -> {out}")


def _engine_spec(engine, rerank, k, fusion, components, weights, require_text) -> EngineSpec:
    parts = tuple(c.strip() for c in components.split(",") if c.strip()) if components else ()
    weight_values = tuple(float(w) for w in weights.split(",") if w.strip()) if weights else ()
    try:
        return EngineSpec(
            engine=engine,
            rerank=rerank,
            fusion=fusion,
            components=parts,
            weights=weight_values,
            k=k,
            require_text=require_text,
        )
    except MathfindError as err:
        raise click.ClickException(str(err))


@main.command("search")
@click.option("--index", "index_dir", envvar="MATHFIND_INDEX", required=True, type=click.Path(exists=True))
@click.option("--query", default=None, help="single query (formula and/or text)")
@click.option("--topics", type=click.Path(exists=True), default=None, help="TSV file: topic-id TAB query")
@click.option("--engine", type=click.Choice(ENGINES), default=None)
@click.option("--rerank", type=click.Choice(RERANKERS), default=None)
@click.option("--k", type=int, default=None)
@click.option("--fusion", type=click.Choice(FUSERS), default=None)
@click.option("--components", default=None, help="comma-separated engines for fusion")
@click.option("--weights", default=None, help="comma-separated weights for linear fusion")
@click.option("--require-text", is_flag=True, default=None, help="drop hits whose doc has no text match")
@click.option("--run", "run_path", type=click.Path(), default=None, help="write a TREC run file")
@click.option("--tag", default=None, help="override the run tag")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def cmd_search(index_dir, query, topics, engine, rerank, k, fusion, components, weights,
               require_text, run_path, tag, config_path):
    """Search the index and print hits or write a run file."""
    config = _load_config(config_path)
    spec = _engine_spec(
        _setting(engine, config, "engine", "slt"),
        _setting(rerank, config, "rerank", "none"),
        _setting(k, config, "k", 10, int),
        _setting(fusion, config, "fusion", "rrf"),
        _setting(components, config, "components", ""),
        _setting(weights, config, "weights", ""),
        bool(_setting(require_text, config, "require_text", False, lambda v: v.lower() == "true")),
    )
    if (query is None) == (topics is None):
        raise click.ClickException("provide exactly one of --query or --topics")

    engine_obj = SearchEngine.load(index_dir)
    run_tag = tag or spec.tag()
    queries: list[tuple[str, str]]
    if query is not None:
        queries = [("Q1", query)]
    else:
        queries = []
        for lineno, line in enumerate(Path(topics).read_text(encoding="utf-8").splitlines(), 1):
            if not line.strip():
                continue
            if "\t" not in line:
                raise click.ClickException(f"{topics}:{lineno}: expected topic-id TAB query")
            topic_id, text = line.split("\t", 1)
            queries.append((topic_id.strip(), text.strip()))

    lines = []
    for topic_id, text in queries:
        hits = engine_obj.search(text, spec)
        for rank, hit in enumerate(hits, start=1):
            lines.append(f"{topic_id} Q0 {run_item_id(hit, spec.doc_level)} {rank} {hit.score:.6f} {run_tag}")
    output = "\n".join(lines) + ("\n" if lines else "")
    if run_path:
        Path(run_path).write_text(output, encoding="utf-8")
        click.echo(f"wrote {len(lines)} result lines -> {run_path}")
    else:
        click.echo(output, nl=False)


@main.command("autocomplete")
@click.option("--index", "index_dir", envvar="MATHFIND_INDEX", required=True, type=click.Path(exists=True))
@click.option("--symbols", required=True, help="comma-separated symbol labels, e.g. 'a,+'")
@click.option("--k", type=int, default=10)
def cmd_autocomplete(index_dir, symbols, k):
    """Candidate formulas containing every entered symbol."""
    labels = [s.strip() for s in symbols.split(",") if s.strip()]
    if not labels:
        raise click.ClickException("no symbols given")
    engine_obj = SearchEngine.load(index_dir)
    boxes = [SymbolBox(label, i, 0.0, i + 1, 1.0) for i, label in enumerate(labels)]
    hits = phoc_autocomplete(boxes, engine_obj.phoc_store, k)
    for hit in hits:
        stored = engine_obj.index.formula(hit.doc_id, hit.formula_id)
        click.echo(f"{hit.doc_id}#{hit.formula_id}\t{hit.score:.6f}\t{stored.latex}")


@main.command("eval")
@click.option("--qrels", required=True, type=click.Path(exists=True))
@click.option("--run", "run_path", required=True, type=click.Path(exists=True))
@click.option("--metrics", default="ndcg_prime,map_prime,p_prime@10,bpref")
@click.option("--out", "out_path", type=click.Path(), default="report.tsv")
@click.option("--dedup-visual", type=click.Path(exists=True), default=None,
              help="TSV item TAB visual-id; dedup before scoring")
@click.option("--binarize-threshold", type=int, default=2)
def cmd_eval(qrels, run_path, metrics, out_path, dedup_visual, binarize_threshold):
    """Score a run against qrels and write report.tsv."""
    try:
        qrels_data = parse_qrels(qrels)
        run_data = parse_run(run_path)
    except MathfindError as err:
        raise click.ClickException(str(err))
    visual_map = None
    if dedup_visual:
        visual_map = {}
        for line in Path(dedup_visual).read_text(encoding="utf-8").splitlines():
            if line.strip():
                item, vid = line.split("\t", 1)
                visual_map[item] = vid
    scale = GradeScale(max_grade=max(binarize_threshold, 3), threshold=binarize_threshold)
    metric_list = [m.strip() for m in metrics.split(",") if m.strip()]
    try:
        rows = compute_report(run_data, qrels_data, metric_list, scale, visual_map)
    except MathfindError as err:
        raise click.ClickException(str(err))
    write_report(rows, out_path)
    for metric, topic, value in rows:
        if topic == "ALL":
            click.echo(f"{metric}\tALL\t{value:.12f}")


@main.command("solve-wp")
@click.option("--problems", required=True, type=click.Path(exists=True), help="JSON-lines problems")
@click.option("--mode", type=click.Choice(["aris", "equation"]), default="equation")
def cmd_solve_wp(problems, mode):
    """Solve word problems; emits id TAB predicted TAB correct? lines."""
    total = 0
    correct = 0
    for line in Path(problems).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        problem_id = str(obj["id"])
        expected = obj.get("answer")
        try:
            if mode == "equation":
                equation = slt_to_opt(parse_latex(obj["equation"]))
                values = solve_equation(equation)
                predicted = ", ".join(str(v) for v in values)
            else:
                sentences = [s.strip() for s in re.findall(r"[^.?]+[.?]", obj["question"]) if s.strip()]
                question = next(s for s in sentences if s.endswith("?"))
                script = [s for s in sentences if s.endswith(".")]
                predicted = str(aris_solve(script, question))
        except (MathfindError, KeyError, StopIteration) as err:
            predicted = f"error: {err}"
        verdict = ""
        if expected is not None:
            total += 1
            ok = answers_match(predicted, str(expected))
            correct += ok
            verdict = "yes" if ok else "no"
        click.echo(f"{problem_id}\t{predicted}\t{verdict}")
    if total:
        click.echo(f"accuracy\t{correct / total:.4f}\t({correct}/{total})")


@main.command("serve")
@click.option("--index", "index_dir", envvar="MATHFIND_INDEX", required=True, type=click.Path(exists=True))
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8765)
def cmd_serve(index_dir, host, port):
    """Run the HTTP JSON API over a built index."""
    import uvicorn

    from .api import create_app

    app = create_app(SearchEngine.load(index_dir))
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
