"""Five-part prompt assembly for remote disambiguation.

Sections are guidance, rules, input data, output format, and the skill
library. Static text lives in versioned asset files under ``prompts/``;
input data is rendered from the command and scene deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .planner import SkillLibrary, default_skill_library
from .scene import SceneGraph, serialize_for_prompt
from .session import MultimodalCommand

PROMPT_VERSION = "v1"

# The modality priority policy; tests assert this exact line is present.
PRIORITY_POLICY = (
    "Voice commands have the highest priority; gaze and finger-pointing are weighted equally."
)


class PromptError(Exception):
    pass


@dataclass(frozen=True)
class PromptBundle:
    guidance: str
    rules: str
    input_data: str
    output_format: str
    skill_library: str

    def __post_init__(self) -> None:
        for name in ("guidance", "rules", "input_data", "output_format", "skill_library"):
            if not getattr(self, name).strip():
                raise PromptError(f"prompt section {name!r} is empty")
        if PRIORITY_POLICY not in self.rules:
            raise PromptError("rules section lacks the modality priority policy")

    def as_system_text(self) -> str:
        return "\n\n".join(
            (
                "# Guidance\n" + self.guidance.strip(),
                "# Rules\n" + self.rules.strip(),
                "# Output format\n" + self.output_format.strip(),
                "# Skill library\n" + self.skill_library.strip(),
            )
        )

    def as_user_text(self) -> str:
        return "# Input data\n" + self.input_data.strip()


def _asset(name: str) -> str:
    return (
        resources.files("intenbot")
        .joinpath(f"prompts/{PROMPT_VERSION}/{name}.txt")
        .read_text(encoding="utf-8")
    )


def render_input_data(command: MultimodalCommand, scene: SceneGraph) -> str:
    """User position, per-snapshot possible objects with tiers, then the scene block."""
    pose = command.user_pose
    lines = [f"User position: ({pose.x:.2f}, {pose.y:.2f}, {pose.z:.2f})"]
    mode = "non-voice" if command.is_non_voice else "voice"
    lines.append(f'Voice transcript ({mode}): "{command.transcript}"')
    for i, (snap, possible) in enumerate(zip(command.snapshots, command.possible_objects), 1):
        fingers = ",".join(sorted(k.value for k in snap.fingers)) or "none"
        lines.append(f"Snapshot {i} (t={snap.t:.0f} ms, extended fingers: {fingers}):")
        if not possible:
            lines.append("  possible objects: none within range")
        for po in possible:
            lines.append(
                f"  - {po.object_id} via {po.modality.value}: offset {po.offset_deg:.2f} deg,"
                f" {po.tier.value} priority, {po.distance_m:.2f} m away"
            )
    lines.append("Scene objects:")
    lines.append(serialize_for_prompt(scene).rstrip())
    return "\n".join(lines) + "\n"


def assemble_prompt(
    command: MultimodalCommand,
    scene: SceneGraph,
    library: SkillLibrary | None = None,
) -> PromptBundle:
    """Deterministic bundle: same command and scene, byte-identical sections."""
    lib = library or default_skill_library()
    skill_lines = [_asset("skill_library").rstrip()]
    for skill in lib.sorted_skills():
        params = ", ".join(f"{p.name}:{'|'.join(sorted(p.types))}" for p in skill.params)
        skill_lines.append(f"  {skill.name}({params}): {skill.description}")
    return PromptBundle(
        guidance=_asset("guidance"),
        rules=_asset("rules"),
        input_data=render_input_data(command, scene),
        output_format=_asset("output_format"),
        skill_library="\n".join(skill_lines) + "\n",
    )
