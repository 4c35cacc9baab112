import random

from stablecover.baseline import update2
from stablecover.geometry import Point
from stablecover.sas_engine import Branch, EngineConfig, EngineState


def test_first_insert_forces_single_swap():
    state = EngineState(config=EngineConfig(m=1, epsilon=0.25))
    rep = update2(state, "insert", Point(3.0, 3.0))
    assert rep.branch is Branch.SINGLE_SWAP
    assert rep.alg_value == 1 and rep.churn == 2


def test_no_change_when_half_covered():
    state = EngineState(config=EngineConfig(m=1, epsilon=0.25))
    update2(state, "insert", Point(3.0, 3.0))
    rep = update2(state, "insert", Point(3.1, 3.0))
    assert rep.branch is Branch.NO_CHANGE and rep.churn == 0


def test_random_stream_two_stable_guarantees():
    rng = random.Random(23)
    state = EngineState(config=EngineConfig(m=3, epsilon=0.25))
    present = []
    for _ in range(100):
        if present and rng.random() < 0.25:
            p = present.pop(rng.randrange(len(present)))
            rep = update2(state, "delete", p)
        else:
            p = Point(rng.uniform(0, 40), rng.uniform(0, 40))
            present.append(p)
            rep = update2(state, "insert", p)
        assert rep.churn in (0, 2)
        assert rep.opt_value <= 2 * rep.alg_value
        assert len(state.disks) == 3
