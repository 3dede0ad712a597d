import json
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from algebra import GroupSpec
from instance import make_extrapolation, make_interpolation, make_summation


@pytest.fixture
def z2():
    return GroupSpec.cyclic(2)


@pytest.fixture
def z3():
    return GroupSpec.cyclic(3)


@pytest.fixture
def line_extrapolation():
    """Degree-1 extrapolation over F_3, optimum 2/3 with one query"""
    return make_extrapolation(3, 1)


@pytest.fixture
def line_interpolation():
    """Degree-1 interpolation over F_3, optimum 7/9 with one query"""
    return make_interpolation(3, 1)


@pytest.fixture
def parity_of_three():
    """Sum of three bits, optimum 1/2 with one query"""
    return make_summation(3, GroupSpec.cyclic(2))


@pytest.fixture
def instance_file(tmp_path):
    def write(document, name="instance.json"):
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return str(path)

    return write
