"""Scenario replay, top-9 accuracy, error taxonomy, and the angle-range sweep.

Scenarios are JSONL rows pairing an event log with a ground-truth
instruction; a trial counts as accurate when any of the nine candidates is
instruction-equivalent to the ground truth (same task, target id set, and
destination). Trials are independent, so sweeps may evaluate grid points in
any order.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from .baseline import SceneTooSmallError
from .candidates import CandidateInstruction, CandidateSet, TaskType
from .geometry import Ray, Vec3
from .resolvers import Resolver, ResolverError
from .scene import SceneGraph, load_scene, match_by_name
from .session import (
    HeadPose,
    MultimodalCommand,
    RingEvent,
    RingKind,
    SessionState,
    Snapshot,
    attach_transcript,
    finalize,
    handle_event,
    mark_presenting,
    retry,
)
from .targeting import AngleConfig, ModalityKind

HORIZONS = frozenset({"short", "long"})
VISIBILITIES = frozenset({"same", "hidden", "other_room"})
OCCUPATIONS = frozenset({"none", "stroop", "conversation"})

MAX_ATTEMPTS = 3  # one try plus two retries


class ScenarioError(Exception):
    pass


class ErrorClass(enum.Enum):
    VOICE_INPUT = "VoiceInput"
    POINTING = "Pointing"
    INTERPRETATION = "Interpretation"
    SEPARATION = "Separation"
    OTHER = "Other"


@dataclass(frozen=True)
class GroundTruth:
    task: TaskType
    targets: frozenset[str]
    destination: str | None = None
    attribute: str | None = None

    def matches(self, cand: CandidateInstruction) -> bool:
        return (
            cand.task is self.task
            and frozenset(cand.targets) == self.targets
            and cand.destination == self.destination
        )


@dataclass(frozen=True)
class Scenario:
    id: str
    scene_ref: str
    transcripts: tuple[str, ...]  # one per attempt; last repeats if retried further
    events: tuple[dict, ...]
    ground_truth: GroundTruth
    tags: dict[str, str] = field(default_factory=dict)

    def transcript_for_attempt(self, attempt: int) -> str:
        if not self.transcripts:
            return ""
        return self.transcripts[min(attempt, len(self.transcripts) - 1)]


@dataclass
class TrialResult:
    scenario_id: str
    match_rank: int | None
    attempts: int
    error_class: ErrorClass | None
    timings_ms: dict[str, float]
    word_count: int
    candidate_set: CandidateSet | None = None

    @property
    def passed(self) -> bool:
        return self.match_rank is not None


@dataclass
class CorpusReport:
    accuracy: float
    trials: list[TrialResult]
    by_tag: dict[str, dict[str, float]]
    error_counts: dict[str, int]


@dataclass(frozen=True)
class SweepSpec:
    coarse_start: float = 2.0
    coarse_stop: float = 32.0
    step: float = 3.0
    fine_margin: float = 3.0
    top_k_peaks: int = 2

    def coarse_points(self) -> list[float]:
        points = []
        value = self.coarse_start
        while value <= self.coarse_stop + 1e-9:
            points.append(value)
            value += self.step
        return points


@dataclass
class SweepResult:
    grid: dict[tuple[float, float], float]
    peaks: list[tuple[tuple[float, float], float]]
    coarse_points: list[float]
    fine_axis: list[float]

    @property
    def best(self) -> tuple[float, float]:
        return self.peaks[0][0]


# --- scenario (de)serialization ----------------------------------------------


def _ray_from_json(raw: dict) -> Ray:
    return Ray(Vec3.from_seq(raw["origin"]), Vec3.from_seq(raw["direction"]))


def snapshot_from_json(raw: dict) -> Snapshot:
    fingers = {
        ModalityKind(name): _ray_from_json(ray_raw)
        for name, ray_raw in raw.get("fingers", {}).items()
    }
    head_raw = raw.get("head", {})
    head = HeadPose(
        position=Vec3.from_seq(head_raw.get("position", raw["gaze"]["origin"])),
        facing=Vec3.from_seq(head_raw.get("facing", raw["gaze"]["direction"])),
    )
    return Snapshot(t=float(raw.get("t", 0)), gaze=_ray_from_json(raw["gaze"]), fingers=fingers, head=head)


def scenario_from_json(raw: dict) -> Scenario:
    gt_raw = raw["ground_truth"]
    gt = GroundTruth(
        task=TaskType.from_name(gt_raw["task"]),
        targets=frozenset(gt_raw.get("targets", [])),
        destination=gt_raw.get("destination"),
        attribute=gt_raw.get("attribute"),
    )
    transcripts = raw.get("transcripts")
    if transcripts is None:
        transcripts = [raw.get("transcript", "")]
    tags = dict(raw.get("tags", {}))
    for key, allowed in (("horizon", HORIZONS), ("visibility", VISIBILITIES), ("occupation", OCCUPATIONS)):
        if key in tags and tags[key] not in allowed:
            raise ScenarioError(f"scenario {raw.get('id')}: bad tag {key}={tags[key]!r}")
    return Scenario(
        id=str(raw["id"]),
        scene_ref=str(raw["scene"]),
        transcripts=tuple(str(t) for t in transcripts),
        events=tuple(raw["events"]),
        ground_truth=gt,
        tags=tags,
    )


def load_scenario_file(path: str | Path) -> Scenario:
    return scenario_from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def load_corpus(path: str | Path) -> list[Scenario]:
    scenarios = []
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        try:
            scenarios.append(scenario_from_json(json.loads(line)))
        except (KeyError, ValueError) as exc:
            raise ScenarioError(f"{path}:{line_no}: {exc}") from exc
    if not scenarios:
        raise ScenarioError(f"{path}: empty corpus")
    return scenarios


class SceneCache:
    """Loads scene files once per path; resolution relative to a base directory."""

    def __init__(self, base_dir: str | Path = "."):
        self.base_dir = Path(base_dir)
        self._cache: dict[str, SceneGraph] = {}

    def get(self, ref: str) -> SceneGraph:
        if ref not in self._cache:
            path = self._resolve(ref)
            self._cache[ref] = load_scene(path.read_bytes())
        return self._cache[ref]

    def _resolve(self, ref: str) -> Path:
        candidates = [Path(ref), self.base_dir / ref]
        candidates += [parent / ref for parent in self.base_dir.resolve().parents[:3]]
        for cand in candidates:
            if cand.is_file():
                return cand
        raise ScenarioError(f"scene file {ref!r} not found near {self.base_dir}")


# --- replay -------------------------------------------------------------------


def replay(
    scenario: Scenario,
    cfg: AngleConfig,
    resolver: Resolver,
    scenes: SceneCache | None = None,
) -> TrialResult:
    """Run the full pipeline on one scenario, honoring retry rounds.

    The event log may contain several touch..release rounds; each is one
    attempt (capped at three by the retry budget). Resolver errors fail the
    trial and are classed Other.
    """
    scenes = scenes or SceneCache()
    scene = scenes.get(scenario.scene_ref)
    state = SessionState()
    pending: Snapshot | None = None
    attempt = 0
    input_ms = 0.0
    resolve_ms = 0.0
    last_command: MultimodalCommand | None = None
    last_set: CandidateSet | None = None
    resolver_failed = False

    def capture(t: float) -> Snapshot:
        if pending is None:
            raise ScenarioError(f"scenario {scenario.id}: ring press with no snapshot record")
        return pending

    events = list(scenario.events)
    i = 0
    while i < len(events):
        raw = events[i]
        i += 1
        kind = raw.get("type")
        if kind == "snapshot":
            pending = snapshot_from_json(raw)
            continue
        if kind != "ring":
            raise ScenarioError(f"scenario {scenario.id}: unknown event type {kind!r}")
        event = RingEvent(kind=RingKind(raw["kind"]), t=float(raw["t"]))
        handle_event(state, event, capture)
        if event.kind is not RingKind.RELEASE:
            continue

        # One attempt: transcript, finalize, resolve, match.
        attach_transcript(state, scenario.transcript_for_attempt(attempt))
        if state.touch_t is not None and state.release_t is not None:
            input_ms += state.release_t - state.touch_t
        command = finalize(state, scene, cfg)
        last_command = command
        attempt += 1
        try:
            started = time.perf_counter()
            cset = resolver.resolve(command, scene)
            resolve_ms += (time.perf_counter() - started) * 1000.0
        except (ResolverError, SceneTooSmallError):
            resolver_failed = True
            last_set = None
            break
        last_set = cset
        rank = _match_rank(scenario.ground_truth, cset)
        word_count = len(scenario.transcript_for_attempt(attempt - 1).split())
        if rank is not None:
            return TrialResult(
                scenario_id=scenario.id,
                match_rank=rank,
                attempts=attempt,
                error_class=None,
                timings_ms={"input_ms": input_ms, "resolve_ms": resolve_ms},
                word_count=word_count,
                candidate_set=cset,
            )
        # No match: retry when the log has further rounds and budget remains.
        if i < len(events) and attempt < MAX_ATTEMPTS:
            mark_presenting(state)
            retry(state)
            pending = None
        else:
            break

    error_class = classify_error(
        scenario=scenario,
        scene=scene,
        command=last_command,
        candidate_set=last_set,
        resolver_failed=resolver_failed,
        attempt=max(attempt, 1),
    )
    return TrialResult(
        scenario_id=scenario.id,
        match_rank=None,
        attempts=max(attempt, 1),
        error_class=error_class,
        timings_ms={"input_ms": input_ms, "resolve_ms": resolve_ms},
        word_count=len(scenario.transcript_for_attempt(max(attempt - 1, 0)).split()),
        candidate_set=last_set,
    )


def _match_rank(gt: GroundTruth, cset: CandidateSet) -> int | None:
    ranks = [c.rank for c in cset.candidates if gt.matches(c)]
    return min(ranks) if ranks else None


# --- error taxonomy -----------------------------------------------------------


def classify_error(
    scenario: Scenario,
    scene: SceneGraph,
    command: MultimodalCommand | None,
    candidate_set: CandidateSet | None,
    resolver_failed: bool,
    attempt: int,
) -> ErrorClass:
    """Single class per failed trial, decided in a fixed order.

    1. VoiceInput: the transcript names something that grounds to nothing.
    2. Pointing: a ground-truth target the voice never named lies outside
       every ray cone.
    3. Separation: the ground-truth target set is covered by the union of
       same-task, same-destination candidates but by no single candidate.
    4. Interpretation: the evidence contains the target(s) yet no candidate
       is equivalent.
    5. Other: everything else, including resolver failures.
    """
    if resolver_failed or command is None or candidate_set is None:
        return ErrorClass.OTHER

    from .transcript import parse_transcript

    parsed = parse_transcript(command.transcript)
    gt = scenario.ground_truth

    # 1. An explicitly named phrase that cannot be grounded.
    if not command.is_non_voice:
        for phrase in parsed.target_phrases:
            if not match_by_name(scene, phrase):
                return ErrorClass.VOICE_INPUT

    evidence_ids = {po.object_id for snapshot in command.possible_objects for po in snapshot}
    named_ids: set[str] = set()
    for phrase in parsed.target_phrases:
        named_ids.update(o.id for o in match_by_name(scene, phrase))

    # 2. Implicit target outside every cone.
    for target in gt.targets:
        if target not in named_ids and target not in evidence_ids:
            return ErrorClass.POINTING

    # 3. Ground truth split across candidates.
    if len(gt.targets) >= 2:
        same_kind = [
            c
            for c in candidate_set.candidates
            if c.task is gt.task and c.destination == gt.destination
        ]
        union: set[str] = set()
        for cand in same_kind:
            union.update(cand.targets)
        single_covers = any(gt.targets <= frozenset(c.targets) for c in same_kind)
        if gt.targets <= union and not single_covers:
            return ErrorClass.SEPARATION

    # 4. Evidence (or voice) had it, candidates missed it.
    if gt.targets and all(t in evidence_ids or t in named_ids for t in gt.targets):
        return ErrorClass.INTERPRETATION
    if not gt.targets and gt.destination is not None and gt.destination in evidence_ids:
        return ErrorClass.INTERPRETATION

    return ErrorClass.OTHER


# --- corpus accuracy ------------------------------------------------------------


def corpus_accuracy(
    corpus: list[Scenario],
    cfg: AngleConfig,
    resolver: Resolver,
    scenes: SceneCache | None = None,
) -> CorpusReport:
    """Fraction of trials whose ground truth appears among the nine candidates."""
    if not corpus:
        raise ScenarioError("empty corpus")
    scenes = scenes or SceneCache()
    trials = [replay(s, cfg, resolver, scenes) for s in corpus]
    accuracy = sum(t.passed for t in trials) / len(trials)

    by_tag: dict[str, dict[str, float]] = {}
    for tag_key in ("horizon", "visibility", "occupation"):
        groups: dict[str, list[TrialResult]] = {}
        for scenario, trial in zip(corpus, trials):
            value = scenario.tags.get(tag_key)
            if value is not None:
                groups.setdefault(value, []).append(trial)
        if groups:
            by_tag[tag_key] = {
                value: sum(t.passed for t in ts) / len(ts) for value, ts in sorted(groups.items())
            }

    error_counts: dict[str, int] = {}
    for trial in trials:
        if trial.error_class is not None:
            error_counts[trial.error_class.value] = error_counts.get(trial.error_class.value, 0) + 1

    return CorpusReport(accuracy=accuracy, trials=trials, by_tag=by_tag, error_counts=error_counts)


# --- angle-range sweep -----------------------------------------------------------


def sweep(
    corpus: list[Scenario],
    resolver: Resolver,
    spec: SweepSpec | None = None,
    base_cfg: AngleConfig | None = None,
    scenes: SceneCache | None = None,
) -> SweepResult:
    """Coarse-to-fine grid search over (gaze range, pointing range).

    The coarse phase walks both axes jointly (gaze = pointing) from 2 to 32
    degrees in 3-degree steps; the fine phase evaluates the full 2-D grid,
    step 3, spanning the two best coarse points plus one step of margin.
    Peaks rank by accuracy, ties broken by smaller range sum (tighter cones
    are strictly more precise), then by gaze range.
    """
    spec = spec or SweepSpec()
    base_cfg = base_cfg or AngleConfig()
    scenes = scenes or SceneCache()

    def accuracy_at(gaze: float, point: float) -> float:
        cfg = AngleConfig.with_ranges(gaze, point, base=base_cfg)
        return corpus_accuracy(corpus, cfg, resolver, scenes).accuracy

    grid: dict[tuple[float, float], float] = {}
    coarse = spec.coarse_points()
    for value in coarse:
        grid[(value, value)] = accuracy_at(value, value)

    ranked_coarse = sorted(coarse, key=lambda v: (-grid[(v, v)], v))
    anchors = sorted(ranked_coarse[: spec.top_k_peaks])
    lo = max(spec.coarse_start, anchors[0] - spec.fine_margin)
    hi = min(spec.coarse_stop, anchors[-1] + spec.fine_margin)
    fine_axis = []
    value = lo
    while value <= hi + 1e-9:
        fine_axis.append(value)
        value += spec.step

    for gaze in fine_axis:
        for point in fine_axis:
            if (gaze, point) not in grid:
                grid[(gaze, point)] = accuracy_at(gaze, point)

    peaks = sorted(grid.items(), key=lambda kv: (-kv[1], kv[0][0] + kv[0][1], kv[0][0], kv[0][1]))
    return SweepResult(grid=grid, peaks=peaks, coarse_points=coarse, fine_axis=fine_axis)


def heatmap_csv(result: SweepResult) -> str:
    """Rows are gaze range, columns pointing range, cells accuracy (blank if unevaluated)."""
    gazes = sorted({g for g, _ in result.grid})
    points = sorted({p for _, p in result.grid})
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["gaze_deg\\point_deg"] + [f"{p:g}" for p in points])
    for g in gazes:
        row = [f"{g:g}"]
        for p in points:
            acc = result.grid.get((g, p))
            row.append("" if acc is None else f"{acc:.4f}")
        writer.writerow(row)
    return buf.getvalue()


def report_json(report: CorpusReport) -> str:
    doc = {
        "accuracy": report.accuracy,
        "trials": [
            {
                "scenario_id": t.scenario_id,
                "match_rank": t.match_rank,
                "attempts": t.attempts,
                "error_class": t.error_class.value if t.error_class else None,
                "timings_ms": t.timings_ms,
                "word_count": t.word_count,
            }
            for t in report.trials
        ],
        "by_tag": report.by_tag,
        "error_counts": report.error_counts,
    }
    return json.dumps(doc, indent=2)
