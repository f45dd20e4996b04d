"""Shared fixtures data and cached builders for the test suite."""

from functools import lru_cache

from tdcodes.circuit import synth_uc
from tdcodes.lattice import OPEN, PERIODIC, Lattice, LatticeSpec
from tdcodes.model import TdParams, build_model
from tdcodes.tableau import run

# Every instance of the main preparation check: (params, sizes).
INSTANCES = [
    ((0, 1, 2, 2), (4, 4)),
    ((0, 1, 2, 2), (5, 3)),
    ((0, 1, 2, 3), (2, 3, 3)),
    ((0, 1, 2, 3), (3, 3, 3)),
    ((1, 2, 3, 3), (3, 3, 2)),
    ((1, 2, 3, 3), (3, 3, 3)),
    ((0, 1, 2, 4), (2, 2, 2, 2)),
    ((1, 2, 3, 4), (2, 2, 2, 2)),
    ((2, 3, 4, 4), (2, 2, 2, 2)),
]

FAMILY = [inst for inst in INSTANCES if inst[0][0] == inst[0][1] - 1 and inst[0][2] == inst[0][1] + 1]


def inst_id(inst):
    (params, dims) = inst[:2]
    return "td" + "".join(map(str, params)) + "-" + "x".join(map(str, dims))


@lru_cache(maxsize=None)
def model_for(params, dims, open_dirs=()):
    boundary = tuple(OPEN if i in open_dirs else PERIODIC for i in range(len(dims)))
    lat = Lattice(LatticeSpec(len(dims), tuple(dims), boundary))
    return build_model(lat, TdParams(*params))


@lru_cache(maxsize=None)
def uc_for(params, dims, open_dirs=()):
    return synth_uc(model_for(params, dims, open_dirs))


@lru_cache(maxsize=None)
def uc_state(params, dims, open_dirs=()):
    return run(uc_for(params, dims, open_dirs)[0])
