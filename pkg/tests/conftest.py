import numpy as np
import pytest

from dohertylab import (
    DohertyConfig,
    synth_three_line,
    synth_transformer_combiner,
    synth_two_line,
    to_netlist,
)

# prototype operating point used throughout: symmetric split, 41.3 ohm
# device target into a 50 ohm system at 37 GHz
PROTO = DohertyConfig(alpha=1.0, r_opt=41.3, r_l=50.0, f0=37e9)


@pytest.fixture(scope="session")
def proto_cfg():
    return PROTO


@pytest.fixture(scope="session")
def two_line_net():
    return to_netlist(synth_two_line(PROTO))


@pytest.fixture(scope="session")
def three_line_net():
    return to_netlist(synth_three_line(PROTO))


@pytest.fixture(scope="session")
def tf_design():
    return synth_transformer_combiner(PROTO, n1=1.0, k1=0.7, n2=1.0)


@pytest.fixture(scope="session")
def tf_net(tf_design):
    return to_netlist(tf_design)


def assert_close(actual, expected, rel=0.0, abs_=0.0, msg=""):
    actual = complex(actual) if np.iscomplexobj(actual) else float(actual)
    err = abs(actual - expected)
    tol = max(abs_, rel * abs(expected))
    assert err <= tol, f"{msg} got {actual}, want {expected} (err {err:.3e} > tol {tol:.3e})"
