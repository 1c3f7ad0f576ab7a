import random

import pytest

from intenbot.baseline import SceneTooSmallError, baseline_rank
from intenbot.candidates import (
    CandidateSet,
    RankError,
    TaskType,
    USER,
    confirm,
    page,
    validate_candidate_set,
)
from intenbot.geometry import Ray, Vec3
from intenbot.scene import load_scene
from intenbot.session import SessionPhase, SessionState
from intenbot.targeting import AngleConfig, ModalityKind, Tier

from genutil import make_command, random_scene, ray_near_object, scale_scene

U = Vec3(0, 0, 1.5)
SKY = Ray(U, Vec3(0, 0, 1))


def aimed(scene, oid, offset=2.0):
    return ray_near_object(random.Random(hash(oid) % 1000), U, scene.object_by_id(oid).position, offset)


def exact_aim(scene, oid, offset, origin=U):
    target = scene.object_by_id(oid).position
    base = (target - origin).normalized()
    from intenbot.geometry import perpendicular_to

    return Ray(origin, base.rotated_about(perpendicular_to(base), offset))


def test_named_unique_wine_rank1(home_scene):
    command = make_command(home_scene, "Bring me the wine", SKY)
    cset = baseline_rank(command, home_scene)
    top = cset.candidates[0]
    assert top.task is TaskType.FETCH and top.targets == ("wine",)
    assert validate_candidate_set(cset, home_scene) == []


def test_implicit_gaze_high_cola_rank1(home_scene):
    command = make_command(home_scene, "Bring me that", exact_aim(home_scene, "cola", 1.5, Vec3(3.0, 2.5, 1.5)))
    top = baseline_rank(command, home_scene).candidates[0]
    assert top.task is TaskType.FETCH and top.targets == ("cola",)


def test_non_voice_thumb_at_dock_rank1(home_scene):
    hand = Vec3(4.5, -1.0, 1.2)
    ray = exact_aim(home_scene, "charging_dock", 4.0, hand)
    command = make_command(home_scene, "", SKY, fingers={ModalityKind.THUMB_RIGHT: ray})
    top = baseline_rank(command, home_scene).candidates[0]
    assert top.task is TaskType.DOCK and top.targets == ("charging_dock",)


def test_check_plus_rays_on_bag(meeting_scene):
    # Same swing directions the shipped demo uses: casual gaze yawed 8 deg,
    # index finger pitched 3 deg off the bag.
    from intenbot.geometry import perpendicular_to

    u = Vec3(1.0, 1.0, 1.5)
    hand = Vec3(1.15, 0.9, 1.2)
    bag = meeting_scene.object_by_id("bag").position
    gaze_dir = (bag - u).normalized().rotated_about(Vec3(0, 0, 1), -8.0)
    finger_base = (bag - hand).normalized()
    finger_dir = finger_base.rotated_about(perpendicular_to(finger_base), -3.0)
    command = make_command(
        meeting_scene, "Check", Ray(u, gaze_dir),
        fingers={ModalityKind.INDEX_LEFT: Ray(hand, finger_dir)},
    )
    top = baseline_rank(command, meeting_scene).candidates[0]
    assert top.task is TaskType.CHECK_PRESENCE and top.targets == ("bag",)


def test_exactly_nine_unique_valid(home_scene):
    command = make_command(home_scene, "Bring me that", SKY)
    cset = baseline_rank(command, home_scene)
    assert len(cset.candidates) == 9
    assert validate_candidate_set(cset, home_scene) == []


def test_padding_flagged_in_explanation(home_scene):
    command = make_command(home_scene, "Bring me that", SKY)
    cset = baseline_rank(command, home_scene)
    assert any("(padding)" in c.explanation for c in cset.candidates)


def test_determinism(home_scene):
    command = make_command(home_scene, "Bring me that", exact_aim(home_scene, "cola", 2.0, Vec3(3, 2.5, 1.5)))
    assert baseline_rank(command, home_scene) == baseline_rank(command, home_scene)


def test_voice_priority_beats_rays(home_scene):
    # Voice names wine; rays point firmly at the cola.
    gaze = exact_aim(home_scene, "cola", 1.0, Vec3(3, 2.5, 1.5))
    command = make_command(home_scene, "Bring me the wine", gaze)
    top = baseline_rank(command, home_scene).candidates[0]
    assert "wine" in top.targets


def test_tier_dominance_without_voice(home_scene):
    # High-tier object candidates outrank low-tier-only ones in non-voice mode.
    origin = Vec3(9, 0.5, 1.5)  # dining table cluster: shakers sit degrees apart
    gaze = exact_aim(home_scene, "pepper_shaker", 1.0, origin)
    command = make_command(home_scene, "", gaze)
    cset = baseline_rank(command, home_scene)
    evidence = command.possible_objects[0]
    high_ids = {p.object_id for p in evidence if p.tier is Tier.HIGH}
    low_ids = {p.object_id for p in evidence if p.tier is Tier.LOW}
    assert high_ids and low_ids
    first_rank_of = {}
    for cand in cset.candidates:
        for t in cand.targets:
            first_rank_of.setdefault(t, cand.rank)
    for high in high_ids & set(first_rank_of):
        for low in low_ids & set(first_rank_of):
            assert first_rank_of[high] < first_rank_of[low]


def test_scaling_invariance(home_scene):
    origin = Vec3(3, 2.5, 1.5)
    gaze = exact_aim(home_scene, "cola", 2.0, origin)
    command = make_command(home_scene, "Bring me that", gaze)
    before = baseline_rank(command, home_scene)

    factor = 3.7
    big = scale_scene(home_scene, factor)
    scaled_gaze = Ray(origin.scaled(factor), gaze.direction)
    command_big = make_command(big, "Bring me that", scaled_gaze)
    after = baseline_rank(command_big, big)
    assert [c.equivalence_key() for c in before.candidates] == [
        c.equivalence_key() for c in after.candidates
    ]


def test_multi_snapshot_slot_binding(home_scene):
    u = Vec3(9, 1.0, 1.5)
    snap1 = exact_aim(home_scene, "pepper_shaker", 2.0, u)
    snap2 = exact_aim(home_scene, "sideboard", 2.0, u)
    command = make_command(
        home_scene, "Pepper shaker. Move.", snap1, extra_snapshots=[(snap2, {})]
    )
    top = baseline_rank(command, home_scene).candidates[0]
    assert top.task is TaskType.MOVE
    assert top.targets == ("pepper_shaker",)
    assert top.destination == "sideboard"


def test_move_to_named_room(home_scene):
    command = make_command(home_scene, "Move the pepper shaker to the dining room", SKY)
    top = baseline_rank(command, home_scene).candidates[0]
    assert top.task is TaskType.MOVE and top.destination == "dining_room"


def test_goto_gazed_destination(meeting_scene):
    u = Vec3(1.0, 1.0, 1.5)
    command = make_command(meeting_scene, "Come back", exact_aim(meeting_scene, "door_hall", 1.5, u))
    top = baseline_rank(command, meeting_scene).candidates[0]
    assert top.task is TaskType.GO_TO and top.destination == "door_hall"


def test_goto_user_without_evidence(home_scene):
    command = make_command(home_scene, "Come back", SKY)
    top = baseline_rank(command, home_scene).candidates[0]
    assert top.task is TaskType.GO_TO and top.destination == USER


def test_state_question_grounds_named_tv(home_scene):
    command = make_command(home_scene, "Is TV on?", SKY)
    top = baseline_rank(command, home_scene).candidates[0]
    assert top.task is TaskType.CHECK_STATE
    assert top.targets == ("tv_living",)
    assert top.attribute == "power"


def test_scene_too_small(repo_root):
    tiny = load_scene((repo_root / "scenes/tiny.json").read_bytes())
    command = make_command(tiny, "Bring me that", SKY)
    with pytest.raises(SceneTooSmallError):
        baseline_rank(command, tiny)


def test_argmax_invariance_sample(home_scene):
    rng = random.Random(5)
    for _ in range(25):
        target = rng.choice(["wine", "whiskey", "sculpture", "kettle", "teddy_bear"])
        origin = Vec3(rng.uniform(0, 18), rng.uniform(-3, 10), 1.5)
        distractor = home_scene.objects[rng.randrange(len(home_scene.objects))]
        gaze = ray_near_object(rng, origin, distractor.position, 10.0)
        label = home_scene.object_by_id(target).label
        command = make_command(home_scene, f"Bring me the {label}", gaze)
        top = baseline_rank(command, home_scene).candidates[0]
        assert target in top.targets


def test_random_rich_scenes_always_nine():
    rng = random.Random(11)
    from genutil import random_command

    for _ in range(50):
        scene = random_scene(rng, rich=True)
        command = random_command(rng, scene)
        cset = baseline_rank(command, scene)
        assert validate_candidate_set(cset, scene) == []


# --- page / confirm ------------------------------------------------------------


def nine(home_scene) -> CandidateSet:
    return baseline_rank(make_command(home_scene, "Bring me that", SKY), home_scene)


def test_page_boundaries(home_scene):
    cset = nine(home_scene)
    assert [c.rank for c in page(cset, 0)] == [1, 2, 3]
    assert [c.rank for c in page(cset, 2)] == [7, 8, 9]
    with pytest.raises(IndexError):
        page(cset, 3)
    with pytest.raises(IndexError):
        page(cset, -1)


def test_confirm_flow(home_scene):
    cset = nine(home_scene)
    state = SessionState(phase=SessionPhase.PRESENTING)
    chosen = confirm(state, cset, 1)
    assert chosen.rank == 1
    assert state.phase is SessionPhase.CONFIRMED
    with pytest.raises(Exception):
        confirm(state, cset, 1)  # second confirm: phase error


def test_confirm_rank_out_of_range(home_scene):
    cset = nine(home_scene)
    state = SessionState(phase=SessionPhase.PRESENTING)
    with pytest.raises(RankError):
        confirm(state, cset, 10)
