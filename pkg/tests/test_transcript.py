from intenbot.candidates import TaskType
from intenbot.transcript import parse_transcript


def test_empty_transcript():
    parsed = parse_transcript("")
    assert parsed.is_empty and parsed.task is None


def test_bring_me_that():
    parsed = parse_transcript("Bring me that")
    assert parsed.task is TaskType.FETCH
    assert parsed.pronoun_count == 1
    assert parsed.target_phrases == ()


def test_named_fetch():
    parsed = parse_transcript("Bring me the wine")
    assert parsed.task is TaskType.FETCH
    assert parsed.target_phrases == ("wine",)


def test_two_named_targets():
    parsed = parse_transcript("Bring me the sculpture and the speaker")
    assert parsed.target_phrases == ("sculpture", "speaker")


def test_noun_only_defaults_to_fetch_slot():
    parsed = parse_transcript("Whiskey")
    assert parsed.task is None
    assert parsed.target_phrases == ("whiskey",)


def test_move_with_destination():
    parsed = parse_transcript("Move the pepper shaker to the dining room")
    assert parsed.task is TaskType.MOVE
    assert parsed.target_phrases == ("pepper shaker",)
    assert parsed.destination_phrase == "dining room"


def test_move_verb_then_indicated_destination():
    parsed = parse_transcript("Pepper shaker. Move.")
    assert parsed.task is TaskType.MOVE
    assert parsed.target_phrases == ("pepper shaker",)
    assert parsed.destination_phrase is None


def test_fetch_with_destination_becomes_move():
    parsed = parse_transcript("Take the novel to the bedroom")
    assert parsed.task is TaskType.MOVE
    assert parsed.target_phrases == ("novel",)
    assert parsed.destination_phrase == "bedroom"


def test_bring_to_me_stays_fetch():
    parsed = parse_transcript("Bring the wine to me")
    assert parsed.task is TaskType.FETCH
    assert parsed.target_phrases == ("wine",)


def test_state_question():
    parsed = parse_transcript("Is TV on?")
    assert parsed.task is TaskType.CHECK_STATE
    assert parsed.attribute == "power"
    assert parsed.target_phrases == ("tv",)


def test_state_question_with_pronoun():
    parsed = parse_transcript("Is it on?")
    assert parsed.task is TaskType.CHECK_STATE
    assert parsed.pronoun_count == 1


def test_check_alone():
    parsed = parse_transcript("Check")
    assert parsed.task is TaskType.CHECK_PRESENCE
    assert parsed.target_phrases == ()


def test_come_back():
    parsed = parse_transcript("Come back")
    assert parsed.task is TaskType.GO_TO
    assert parsed.target_phrases == ()


def test_go_to_room():
    parsed = parse_transcript("Go to the kitchen")
    assert parsed.task is TaskType.GO_TO
    assert parsed.destination_phrase == "kitchen"


def test_dock_verb():
    parsed = parse_transcript("Dock")
    assert parsed.task is TaskType.DOCK


def test_number_words_are_not_names():
    parsed = parse_transcript("Bring me those two")
    assert parsed.target_phrases == ()
    assert parsed.pronoun_count == 1
