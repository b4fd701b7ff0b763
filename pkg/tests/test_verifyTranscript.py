import copy

import pytest

from src.adversary import AdversaryParams, run_strategy
from src.gridCore import ORIGIN, GridCoord
from src.harness import Certificate, GameParams, GameState, run_match
from src.refAlgos import GreedyFirstFit
from src.verifyTranscript import TranscriptVerifier, compare_labels, verify_transcript


@pytest.fixture(scope="module")
def boosted():
    """Transcript of a level-2 row boost against greedy."""
    params = AdversaryParams(T=1, n_budget=100000, kappa=2, L0=64, L1=4096)
    _, transcript = run_strategy("log-boost", GreedyFirstFit(), params, seed=0)
    return transcript


def check(header, events):
    return TranscriptVerifier(copy.deepcopy(header), copy.deepcopy(list(events))).validate_events()


def first_index(events, kind):
    return next(i for i, ev in enumerate(events) if ev.get("ev") == kind)


def test_valid_transcript(boosted):
    is_valid, errors = check(boosted.header, boosted.events)
    assert is_valid, errors


def test_file_round_trip(boosted, tmp_path):
    path = tmp_path / "boost.jsonl"
    boosted.write(path)
    assert verify_transcript(path) == (True, [])


def test_missing_file(tmp_path):
    is_valid, errors = verify_transcript(tmp_path / "absent.jsonl")
    assert not is_valid
    assert errors[0].startswith("cannot read transcript")


def test_color_out_of_range(boosted):
    events = copy.deepcopy(list(boosted.events))
    i = first_index(events, "label")
    events[i]["c"] = 4
    is_valid, errors = check(boosted.header, events)
    assert not is_valid
    assert f"event {i}: color 4 is not 1, 2 or 3" in errors


def test_commit_too_close(boosted):
    events = copy.deepcopy(list(boosted.events))
    i = first_index(events, "commit")
    events[i]["off"] = [2, 0]
    is_valid, errors = check(boosted.header, events)
    assert not is_valid
    assert any(e.startswith(f"event {i}: commit brings") for e in errors)


def test_wrong_budget_charge(boosted):
    events = copy.deepcopy(list(boosted.events))
    i = first_index(events, "reveal")
    events[i]["new"] += 1
    is_valid, errors = check(boosted.header, events)
    assert not is_valid
    assert errors == [f"event {i}: reveal charged {events[i]['new']} cells, ball adds {events[i]['new'] - 1}"]


def test_spent_mismatch(boosted):
    header = dict(boosted.header, spent=boosted.header["spent"] + 3)
    is_valid, errors = check(header, boosted.events)
    assert not is_valid
    assert errors[0].startswith("header reports")


def test_missing_certificate(boosted):
    is_valid, errors = check(boosted.header, boosted.events[:-1])
    assert not is_valid
    assert "transcript has no certificate" in errors


def test_malformed_event(boosted):
    events = copy.deepcopy(list(boosted.events))
    i = first_index(events, "reveal")
    del events[i]["xy"]
    is_valid, errors = check(boosted.header, events)
    assert not is_valid
    assert f"event {i}: reveal event lacks xy" in errors


def test_bad_header():
    is_valid, errors = TranscriptVerifier({"ev": "header", "params": {}}, []).validate_events()
    assert not is_valid
    assert len(errors) == 2


def test_survived_despite_improper_edge():
    def strategy(referee):
        fid = referee.new_fragment([GridCoord(x, 0) for x in range(3)])
        referee.reveal_all(fid, [GridCoord(x, 0) for x in range(3)])
        return Certificate.survived()

    _, transcript = run_match(GreedyFirstFit(), strategy, GameParams(T=1, n_budget=100))
    events = copy.deepcopy(list(transcript.events))
    labels = [i for i, ev in enumerate(events) if ev.get("ev") == "label"]
    events[labels[1]]["c"] = events[labels[0]]["c"]
    is_valid, errors = check(transcript.header, events)
    assert not is_valid
    assert any("although event" in e for e in errors)


class TestPublicCoordinates:
    def _transcript(self, offset, backdoor):
        params = GameParams(T=1, n_budget=1000, backdoor=backdoor)
        state = GameState(params)
        a = state.new_fragment([ORIGIN])
        b = state.new_fragment([ORIGIN])
        for fid in (a, b):
            view = state.reveal(fid, ORIGIN)
            state.submit_label(view.pending, 1)
        state.commit_placement(a, b, offset)
        events = list(state.events) + [Certificate.survived().to_dict()]
        return {"ev": "header", "params": params.to_dict()}, events

    def test_even_commit_accepted(self):
        header, events = self._transcript(GridCoord(4, 0), backdoor=True)
        assert check(header, events) == (True, [])

    def test_odd_commit_rejected_with_backdoor(self):
        header, events = self._transcript(GridCoord(5, 0), backdoor=False)
        assert check(header, events) == (True, [])
        header["params"]["backdoor"] = True
        is_valid, errors = check(header, events)
        assert not is_valid
        assert "odd parity" in errors[0]


class TestCompareLabels:
    def test_identical(self, boosted):
        assert compare_labels(list(boosted.events), list(boosted.events)) == []

    def test_first_difference_named(self, boosted):
        replayed = copy.deepcopy(list(boosted.events))
        i = first_index(replayed, "label")
        replayed[i]["c"] = 3 if replayed[i]["c"] != 3 else 1
        errors = compare_labels(list(boosted.events), replayed)
        assert len(errors) == 1
        assert errors[0].startswith(f"event {i}: replay labels node")

    def test_length_difference(self, boosted):
        events = list(boosted.events)
        shorter = [ev for ev in events if ev.get("ev") != "label"][:1]
        assert compare_labels(events, shorter)[0].startswith("replay produced 0 labels")
