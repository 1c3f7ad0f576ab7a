"""intenbot: multimodal intent engine.

Resolves imprecise gaze and finger-pointing rays against a scene graph,
fuses them with voice transcripts through pluggable resolvers into nine
ranked candidate instructions, compiles confirmed instructions to
behavior-tree plans, and ships the evaluation harness used to pick the
angle-range parameters.
"""

from .geometry import DegenerateError, Ray, Vec3, angular_offset
from .scene import (
    IntegrityError,
    ObjectNode,
    Relation,
    Room,
    SceneGraph,
    SchemaError,
    VersionError,
    dump_scene,
    load_scene,
    match_by_name,
    object_by_id,
    serialize_for_prompt,
)
from .targeting import (
    AngleConfig,
    ModalityKind,
    PossibleObject,
    Tier,
    resolve_ray,
    resolve_snapshot,
)
from .session import (
    EmptySceneError,
    HeadPose,
    MultimodalCommand,
    PhaseError,
    ProtocolError,
    RetryExhausted,
    RingEvent,
    RingKind,
    SessionPhase,
    SessionState,
    Snapshot,
    attach_transcript,
    finalize,
    handle_event,
    mark_presenting,
)
from .session import retry  # session-level retry bookkeeping
from .candidates import (
    CandidateInstruction,
    CandidateSet,
    ConfirmedInstruction,
    RankError,
    TaskType,
    USER,
    confirm,
    instructions_equivalent,
    page,
    validate_candidate_set,
)
from .baseline import SceneTooSmallError, baseline_rank
from .prompting import PRIORITY_POLICY, PromptBundle, assemble_prompt
from .resolvers import (
    BaselineResolver,
    MockResolver,
    RemoteResolver,
    ResolverProtocolError,
    ResolverTimeout,
    generate_candidates,
)
from .planner import (
    BadInstructionError,
    BehaviorTree,
    BTNode,
    Skill,
    SkillLibrary,
    UnboundParamError,
    UnknownSkillError,
    build_plan,
    default_skill_library,
    parse_xml,
    simulate,
    to_xml,
    validate_bt,
)
from .harness import (
    ErrorClass,
    Scenario,
    SweepResult,
    SweepSpec,
    TrialResult,
    classify_error,
    corpus_accuracy,
    load_corpus,
    replay,
    sweep,
)

__version__ = "0.1.0"
