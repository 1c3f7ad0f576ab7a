"""Compile confirmed instructions into behavior-tree plans.

Plans are Sequence trees of skill actions, serialized to an XML document a
ROS bridge can transform mechanically (schema in docs/bt_schema.xsd).
Compilation is pure; the simulator keeps its state private.
"""

from __future__ import annotations

import io
import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path

from .candidates import CandidateInstruction, ConfirmedInstruction, TaskType, USER
from .scene import SceneGraph

BT_FORMAT = "4"
TRUTHY_STATES = frozenset({"on", "true", "yes", "open", "1", "present", "full"})


class PlanError(Exception):
    pass


class UnknownSkillError(PlanError):
    pass


class UnboundParamError(PlanError):
    pass


class BadInstructionError(PlanError):
    pass


@dataclass(frozen=True)
class SkillParam:
    name: str
    types: frozenset[str]  # subset of {object_id, room_id, pose, attribute}


@dataclass(frozen=True)
class Skill:
    name: str
    params: tuple[SkillParam, ...]
    description: str


@dataclass(frozen=True)
class SkillLibrary:
    skills: dict[str, Skill]

    def get(self, name: str) -> Skill | None:
        return self.skills.get(name)

    def sorted_skills(self) -> list[Skill]:
        return [self.skills[name] for name in sorted(self.skills)]


def _skill(name: str, params: list[tuple[str, set[str]]], description: str) -> Skill:
    return Skill(name, tuple(SkillParam(n, frozenset(t)) for n, t in params), description)


def default_skill_library() -> SkillLibrary:
    skills = [
        _skill(
            "NavigateTo",
            [("destination", {"object_id", "room_id", "pose"})],
            "Drive to an object, a room, or the user's pose.",
        ),
        _skill("Pick", [("object", {"object_id"})], "Grasp a portable object."),
        _skill(
            "Place",
            [("object", {"object_id"}), ("destination", {"object_id", "room_id"})],
            "Put a held object down at a destination.",
        ),
        _skill("Handover", [("object", {"object_id"})], "Hand a held object to the user."),
        _skill("CheckPresence", [("object", {"object_id"})], "Verify an object is where expected."),
        _skill(
            "CheckState",
            [("object", {"object_id"}), ("attribute", {"attribute"})],
            "Read a state attribute of an object and report it.",
        ),
        _skill("Dock", [], "Dock on the charging station the robot is at."),
    ]
    return SkillLibrary({s.name: s for s in skills})


def load_skill_library(path: str | Path) -> SkillLibrary:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    skills = {}
    for entry in raw["skills"]:
        params = [(p["name"], set(p["types"])) for p in entry.get("params", [])]
        skill = _skill(entry["name"], params, entry.get("description", ""))
        skills[skill.name] = skill
    if not skills:
        raise PlanError("skill library is empty")
    return SkillLibrary(skills)


def dump_skill_library(lib: SkillLibrary) -> str:
    doc = {
        "skills": [
            {
                "name": s.name,
                "params": [{"name": p.name, "types": sorted(p.types)} for p in s.params],
                "description": s.description,
            }
            for s in lib.sorted_skills()
        ]
    }
    return json.dumps(doc, indent=2)


# --- tree model -------------------------------------------------------------


@dataclass(frozen=True)
class BTNode:
    kind: str  # Sequence | Fallback | Action
    children: tuple["BTNode", ...] = ()
    skill: str | None = None
    bindings: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        if self.kind in ("Sequence", "Fallback"):
            if not self.children:
                raise PlanError(f"{self.kind} requires at least one child")
            if self.skill is not None:
                raise PlanError("composites carry no skill")
        elif self.kind == "Action":
            if self.skill is None:
                raise PlanError("actions require a skill name")
            if self.children:
                raise PlanError("actions carry no children")
        else:
            raise PlanError(f"unknown node kind {self.kind!r}")


def action(skill: str, **bindings: str) -> BTNode:
    return BTNode(kind="Action", skill=skill, bindings=tuple(bindings.items()))


def sequence(*children: BTNode) -> BTNode:
    return BTNode(kind="Sequence", children=tuple(children))


def fallback(*children: BTNode) -> BTNode:
    return BTNode(kind="Fallback", children=tuple(children))


@dataclass(frozen=True)
class BehaviorTree:
    root: BTNode
    id: str
    source_instruction: ConfirmedInstruction


# --- compilation ------------------------------------------------------------


def _require_object(scene: SceneGraph, ident: str) -> None:
    if scene.object_by_id(ident) is None:
        raise BadInstructionError(f"object {ident!r} not in scene")


def _find_dock(scene: SceneGraph) -> str:
    docks = sorted(o.id for o in scene.objects if "dock" in o.affordances)
    if not docks:
        raise BadInstructionError("no dock-affordance object in scene")
    return docks[0]


def build_plan(
    instr: ConfirmedInstruction, scene: SceneGraph, lib: SkillLibrary | None = None
) -> BehaviorTree:
    """Map one instruction to its skill sequence.

    Fetch visits and picks each target, then returns to the user and hands
    everything over. Move relocates each target to the destination. Checks
    navigate first so sensors are in range. Deterministic for a given
    instruction.
    """
    lib = lib or default_skill_library()
    steps: list[BTNode] = []
    task = instr.task

    if task is TaskType.FETCH:
        if not instr.targets:
            raise BadInstructionError("Fetch requires at least one target")
        for t in instr.targets:
            _require_object(scene, t)
            steps += [action("NavigateTo", destination=t), action("Pick", object=t)]
        steps.append(action("NavigateTo", destination=USER))
        steps += [action("Handover", object=t) for t in instr.targets]
    elif task is TaskType.MOVE:
        if not instr.targets:
            raise BadInstructionError("Move requires a target")
        if instr.destination is None:
            raise BadInstructionError("Move requires a destination")
        dest = instr.destination
        if dest != USER and scene.object_by_id(dest) is None and dest not in scene.room_ids:
            raise BadInstructionError(f"destination {dest!r} not in scene")
        for t in instr.targets:
            _require_object(scene, t)
            steps += [
                action("NavigateTo", destination=t),
                action("Pick", object=t),
                action("NavigateTo", destination=dest),
                action("Place", object=t, destination=dest),
            ]
    elif task is TaskType.CHECK_PRESENCE:
        if not instr.targets:
            raise BadInstructionError("CheckPresence requires a target")
        for t in instr.targets:
            _require_object(scene, t)
            steps += [action("NavigateTo", destination=t), action("CheckPresence", object=t)]
    elif task is TaskType.CHECK_STATE:
        if not instr.targets:
            raise BadInstructionError("CheckState requires a target")
        attr = instr.attribute
        if not attr:
            raise BadInstructionError("CheckState requires an attribute")
        for t in instr.targets:
            _require_object(scene, t)
            steps += [
                action("NavigateTo", destination=t),
                action("CheckState", object=t, attribute=attr),
            ]
    elif task is TaskType.GO_TO:
        dest = instr.destination or (instr.targets[0] if instr.targets else USER)
        if dest != USER and scene.object_by_id(dest) is None and dest not in scene.room_ids:
            raise BadInstructionError(f"destination {dest!r} not in scene")
        steps.append(action("NavigateTo", destination=dest))
    elif task is TaskType.DOCK:
        dock_id = instr.targets[0] if instr.targets else _find_dock(scene)
        _require_object(scene, dock_id)
        steps += [action("NavigateTo", destination=dock_id), action("Dock")]
    else:  # pragma: no cover - enum closed
        raise BadInstructionError(f"unsupported task {task!r}")

    root = sequence(*steps)
    _check_against_library(root, lib)
    return BehaviorTree(root=root, id="Main", source_instruction=instr)


def _check_against_library(node: BTNode, lib: SkillLibrary) -> None:
    if node.kind == "Action":
        skill = lib.get(node.skill)
        if skill is None:
            raise UnknownSkillError(f"skill {node.skill!r} not in library")
        bound = {k for k, _ in node.bindings}
        missing = {p.name for p in skill.params} - bound
        if missing:
            raise UnboundParamError(f"{node.skill}: unbound params {sorted(missing)}")
        return
    for child in node.children:
        _check_against_library(child, lib)


# --- XML --------------------------------------------------------------------


def _node_to_element(node: BTNode) -> ET.Element:
    if node.kind == "Action":
        el = ET.Element("Action", attrib={"skill": node.skill})
        for name, value in node.bindings:
            el.set(name, value)
        return el
    el = ET.Element(node.kind)
    for child in node.children:
        el.append(_node_to_element(child))
    return el


def to_xml(bt: BehaviorTree) -> str:
    """Deterministic XML; parse_xml(to_xml(bt)) reconstructs an equal tree."""
    root = ET.Element("root", attrib={"bt_format": BT_FORMAT})
    tree_el = ET.SubElement(root, "BehaviorTree", attrib={"ID": bt.id})
    tree_el.append(_node_to_element(bt.root))
    instr = bt.source_instruction
    ET.SubElement(
        root,
        "Instruction",
        attrib={
            "rank": str(instr.rank),
            "task": instr.task.value,
            "targets": " ".join(instr.targets),
            "destination": instr.destination or "",
            "attribute": instr.attribute or "",
            "display_text": instr.display_text,
            "explanation": instr.explanation,
        },
    )
    ET.indent(root, space="  ")
    buf = io.StringIO()
    buf.write('<?xml version="1.0" encoding="UTF-8"?>\n')
    buf.write(ET.tostring(root, encoding="unicode"))
    buf.write("\n")
    return buf.getvalue()


def _element_to_node(el: ET.Element) -> BTNode:
    if el.tag == "Action":
        attrs = dict(el.attrib)
        skill = attrs.pop("skill", None)
        if skill is None:
            raise PlanError("Action element lacks a skill attribute")
        return BTNode(kind="Action", skill=skill, bindings=tuple(attrs.items()))
    if el.tag in ("Sequence", "Fallback"):
        return BTNode(kind=el.tag, children=tuple(_element_to_node(c) for c in el))
    raise PlanError(f"unexpected element <{el.tag}>")


def parse_xml(text: str) -> BehaviorTree:
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise PlanError(f"not well-formed XML: {exc}") from exc
    if root.tag != "root":
        raise PlanError(f"expected <root>, got <{root.tag}>")
    tree_el = root.find("BehaviorTree")
    if tree_el is None or len(tree_el) != 1:
        raise PlanError("expected one <BehaviorTree> with one child")
    instr_el = root.find("Instruction")
    if instr_el is None:
        raise PlanError("expected an <Instruction> element")
    a = instr_el.attrib
    instr = CandidateInstruction(
        rank=int(a.get("rank", "1")),
        task=TaskType.from_name(a["task"]),
        targets=tuple(a.get("targets", "").split()) if a.get("targets") else (),
        destination=a.get("destination") or None,
        display_text=a.get("display_text", ""),
        explanation=a.get("explanation", ""),
        attribute=a.get("attribute") or None,
    )
    return BehaviorTree(root=_element_to_node(tree_el[0]), id=tree_el.get("ID", "Main"), source_instruction=instr)


# --- validation -------------------------------------------------------------


@dataclass(frozen=True)
class Finding:
    kind: str  # schema | unknown_skill | unbound_param
    message: str


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.findings

    def add(self, kind: str, message: str) -> None:
        self.findings.append(Finding(kind, message))


def validate_bt(xml_text: str, lib: SkillLibrary | None = None) -> ValidationReport:
    """Schema, skill, and binding checks; the report is empty iff valid."""
    lib = lib or default_skill_library()
    report = ValidationReport()
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError as exc:
        report.add("schema", f"not well-formed XML: {exc}")
        return report
    if root.tag != "root":
        report.add("schema", f"root element must be <root>, got <{root.tag}>")
        return report
    if root.get("bt_format") != BT_FORMAT:
        report.add("schema", f"bt_format must be {BT_FORMAT!r}")
    trees = root.findall("BehaviorTree")
    if len(trees) != 1:
        report.add("schema", f"expected exactly one <BehaviorTree>, got {len(trees)}")
        return report
    tree_el = trees[0]
    if not tree_el.get("ID"):
        report.add("schema", "<BehaviorTree> lacks an ID")
    if len(tree_el) != 1:
        report.add("schema", "<BehaviorTree> must have exactly one root node")
        return report
    _validate_element(tree_el[0], lib, report)
    return report


def _validate_element(el: ET.Element, lib: SkillLibrary, report: ValidationReport) -> None:
    if el.tag in ("Sequence", "Fallback"):
        if len(el) == 0:
            report.add("schema", f"<{el.tag}> requires at least one child")
        for child in el:
            _validate_element(child, lib, report)
        return
    if el.tag != "Action":
        report.add("schema", f"unexpected element <{el.tag}>")
        return
    skill_name = el.get("skill")
    if not skill_name:
        report.add("schema", "<Action> lacks a skill attribute")
        return
    skill = lib.get(skill_name)
    if skill is None:
        report.add("unknown_skill", f"skill {skill_name!r} not in library")
        return
    declared = {p.name for p in skill.params}
    bound = set(el.attrib) - {"skill"}
    for missing in sorted(declared - bound):
        report.add("unbound_param", f"{skill_name}: param {missing!r} is unbound")
    for extra in sorted(bound - declared):
        report.add("schema", f"{skill_name}: unknown attribute {extra!r}")


# --- simulation -------------------------------------------------------------


@dataclass(frozen=True)
class TraceEntry:
    node: str  # e.g. "CheckState(tv)"
    outcome: str  # Success | Failure
    detail: str | None = None


@dataclass
class ExecutionTrace:
    entries: list[TraceEntry] = field(default_factory=list)
    root_outcome: str = "Success"

    @property
    def succeeded(self) -> bool:
        return self.root_outcome == "Success"


def simulate(bt: BehaviorTree, scene: SceneGraph) -> ExecutionTrace:
    """Depth-first tick: Sequence fails fast, Fallback succeeds fast.

    Action outcomes come from scene state; CheckState consults the target's
    state attributes and reports the answer either way.
    """
    trace = ExecutionTrace()
    holding: set[str] = set()
    trace.root_outcome = "Success" if _tick(bt.root, scene, holding, trace) else "Failure"
    return trace


def _tick(node: BTNode, scene: SceneGraph, holding: set[str], trace: ExecutionTrace) -> bool:
    if node.kind == "Sequence":
        return all(_tick(child, scene, holding, trace) for child in node.children)
    if node.kind == "Fallback":
        return any(_tick(child, scene, holding, trace) for child in node.children)
    return _tick_action(node, scene, holding, trace)


def _tick_action(node: BTNode, scene: SceneGraph, holding: set[str], trace: ExecutionTrace) -> bool:
    bindings = dict(node.bindings)
    name = node.skill
    ok = True
    detail = None

    if name == "NavigateTo":
        dest = bindings.get("destination", "")
        ok = dest == USER or scene.object_by_id(dest) is not None or dest in scene.room_ids
        if not ok:
            detail = f"unknown destination {dest!r}"
    elif name == "Pick":
        obj = scene.object_by_id(bindings.get("object", ""))
        if obj is None:
            ok, detail = False, "object missing"
        elif "portable" not in obj.affordances:
            ok, detail = False, f"{obj.id} is not portable"
        else:
            holding.add(obj.id)
    elif name == "Place":
        ok = bindings.get("object") in holding
        if ok:
            holding.discard(bindings["object"])
        else:
            detail = "not holding object"
    elif name == "Handover":
        ok = bindings.get("object") in holding
        if ok:
            holding.discard(bindings["object"])
        else:
            detail = "not holding object"
    elif name == "CheckPresence":
        obj = scene.object_by_id(bindings.get("object", ""))
        ok = obj is not None
        detail = "present" if ok else "absent"
    elif name == "CheckState":
        obj = scene.object_by_id(bindings.get("object", ""))
        attr = bindings.get("attribute", "")
        if obj is None:
            ok, detail = False, "object missing"
        else:
            value = obj.state_attributes.get(attr)
            detail = value if value is not None else "unknown"
            ok = value is not None and value.lower() in TRUTHY_STATES
    elif name == "Dock":
        ok = any("dock" in o.affordances for o in scene.objects)
        if not ok:
            detail = "no dock in scene"
    else:
        ok, detail = False, f"skill {name!r} has no simulation"

    args = ",".join(v for _, v in node.bindings)
    trace.entries.append(TraceEntry(node=f"{name}({args})", outcome="Success" if ok else "Failure", detail=detail))
    return ok
