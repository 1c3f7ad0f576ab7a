"""Command line front end: serve, resolve, replay, sweep, plan, report."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .candidates import CandidateInstruction, TaskType
from .config import EngineConfig
from .harness import (
    SceneCache,
    SweepSpec,
    corpus_accuracy,
    heatmap_csv,
    load_corpus,
    load_scenario_file,
    replay as replay_scenario,
    report_json,
    sweep as run_sweep,
)
from .planner import build_plan, default_skill_library, load_skill_library, to_xml
from .resolvers import BaselineResolver, MockResolver, RemoteResolver


def _build_resolver(name: str, config: EngineConfig):
    name = (name or config.resolver_mode).lower()
    if name == "baseline":
        return BaselineResolver(extra_verbs=config.extra_verbs)
    if name == "mock":
        return MockResolver()
    if name == "remote":
        if not config.endpoint:
            raise SystemExit("remote resolver requires INTENBOT_LLM_ENDPOINT or config endpoint")
        return RemoteResolver(config.endpoint, timeout_ms=config.timeout_ms, model=config.model)
    raise SystemExit(f"unknown resolver {name!r}")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="engine config JSON file")
    parser.add_argument("--resolver", default="", help="mock | baseline | remote")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="intenbot")
    sub = parser.add_subparsers(dest="command", required=True)

    p_serve = sub.add_parser("serve", help="run the HTTP gateway")
    _add_common(p_serve)
    p_serve.add_argument("--static", default="frontend", help="playground asset directory")

    p_resolve = sub.add_parser("resolve", help="run one scenario and print the nine candidates")
    _add_common(p_resolve)
    p_resolve.add_argument("--scene", help="scene file (defaults to the scenario's scene_ref)")
    p_resolve.add_argument("--scenario", required=True, help="scenario JSON file")

    p_replay = sub.add_parser("replay", help="replay a corpus and print per-trial results")
    _add_common(p_replay)
    p_replay.add_argument("--corpus", required=True, help="scenario corpus JSONL")

    p_sweep = sub.add_parser("sweep", help="angle-range grid search over a corpus")
    _add_common(p_sweep)
    p_sweep.add_argument("--corpus", required=True)
    p_sweep.add_argument("--out", help="heatmap CSV output path")
    p_sweep.add_argument("--report", dest="report_path", help="JSON sweep report output path")

    p_plan = sub.add_parser("plan", help="compile an instruction JSON to behavior-tree XML")
    p_plan.add_argument("--instruction", required=True, help="instruction JSON file")
    p_plan.add_argument("--scene", required=True, help="scene JSON file")
    p_plan.add_argument("--skills", help="skill library JSON (defaults to built-in)")

    p_report = sub.add_parser("report", help="corpus accuracy and error breakdown as JSON")
    _add_common(p_report)
    p_report.add_argument("--corpus", required=True)
    p_report.add_argument("--out", help="JSON output path (stdout otherwise)")

    args = parser.parse_args(argv)
    config = EngineConfig.load(args.config if hasattr(args, "config") else None)

    if args.command == "serve":
        return _cmd_serve(args, config)
    if args.command == "resolve":
        return _cmd_resolve(args, config)
    if args.command == "replay":
        return _cmd_replay(args, config)
    if args.command == "sweep":
        return _cmd_sweep(args, config)
    if args.command == "plan":
        return _cmd_plan(args)
    if args.command == "report":
        return _cmd_report(args, config)
    parser.error(f"unknown command {args.command!r}")  # pragma: no cover
    return 2  # pragma: no cover


def _cmd_serve(args, config: EngineConfig) -> int:
    import uvicorn

    from .server import create_app

    static = Path(args.static) if args.static else None
    app = create_app(config, static_dir=static if static and static.is_dir() else None)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return 0


def _cmd_resolve(args, config: EngineConfig) -> int:
    scenario = load_scenario_file(args.scenario)
    scenes = SceneCache(Path(args.scenario).parent)
    if args.scene:
        scenario = type(scenario)(
            id=scenario.id,
            scene_ref=args.scene,
            transcripts=scenario.transcripts,
            events=scenario.events,
            ground_truth=scenario.ground_truth,
            tags=scenario.tags,
        )
    resolver = _build_resolver(args.resolver, config)
    trial = replay_scenario(scenario, config.angles, resolver, scenes)
    if trial.candidate_set is not None:
        for cand in trial.candidate_set.candidates:
            dest = f" -> {cand.destination}" if cand.destination else ""
            print(f"{cand.rank}. [{cand.task.value}] {', '.join(cand.targets) or '-'}{dest} | {cand.display_text}")
            print(f"   {cand.explanation}")
    if trial.passed:
        print(f"match: ground truth at rank {trial.match_rank}")
        return 0
    print(f"no match; error class {trial.error_class.value if trial.error_class else '-'}")
    return 1


def _cmd_replay(args, config: EngineConfig) -> int:
    corpus = load_corpus(args.corpus)
    scenes = SceneCache(Path(args.corpus).parent)
    resolver = _build_resolver(args.resolver, config)
    report = corpus_accuracy(corpus, config.angles, resolver, scenes)
    for trial in report.trials:
        status = f"rank {trial.match_rank}" if trial.passed else f"FAIL ({trial.error_class.value})"
        print(f"{trial.scenario_id}: {status}")
    print(f"accuracy: {report.accuracy:.4f} ({sum(t.passed for t in report.trials)}/{len(report.trials)})")
    return 0 if report.accuracy == 1.0 else 1


def _cmd_sweep(args, config: EngineConfig) -> int:
    corpus = load_corpus(args.corpus)
    scenes = SceneCache(Path(args.corpus).parent)
    resolver = _build_resolver(args.resolver or "baseline", config)
    result = run_sweep(corpus, resolver, SweepSpec(), config.angles, scenes)
    csv_text = heatmap_csv(result)
    if args.out:
        Path(args.out).write_text(csv_text, encoding="utf-8")
    else:
        print(csv_text, end="")
    (best, best_acc) = result.peaks[0]
    print(f"peak: gaze {best[0]:g} deg, pointing {best[1]:g} deg (accuracy {best_acc:.4f})")
    if args.report_path:
        doc = {
            "peaks": [
                {"gaze_deg": g, "point_deg": p, "accuracy": acc}
                for (g, p), acc in result.peaks[:10]
            ],
            "coarse_points": result.coarse_points,
            "fine_axis": result.fine_axis,
        }
        Path(args.report_path).write_text(json.dumps(doc, indent=2), encoding="utf-8")
    return 0


def _cmd_plan(args) -> int:
    raw = json.loads(Path(args.instruction).read_text(encoding="utf-8"))
    instr = CandidateInstruction(
        rank=int(raw.get("rank", 1)),
        task=TaskType.from_name(raw["task"]),
        targets=tuple(raw.get("targets", [])),
        destination=raw.get("destination"),
        display_text=raw.get("display_text", raw["task"]),
        explanation=raw.get("explanation", "cli"),
        attribute=raw.get("attribute"),
    )
    from .scene import load_scene

    scene = load_scene(Path(args.scene).read_bytes())
    lib = load_skill_library(args.skills) if args.skills else default_skill_library()
    print(to_xml(build_plan(instr, scene, lib)), end="")
    return 0


def _cmd_report(args, config: EngineConfig) -> int:
    corpus = load_corpus(args.corpus)
    scenes = SceneCache(Path(args.corpus).parent)
    resolver = _build_resolver(args.resolver, config)
    report = corpus_accuracy(corpus, config.angles, resolver, scenes)
    text = report_json(report)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        print(text)
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
