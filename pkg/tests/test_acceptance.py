"""Release gate: one test per numbered acceptance check, one line each."""

import pytest

from qprospect.acceptance import ALL_CRITERIA


@pytest.mark.parametrize(
    "criterion", ALL_CRITERIA, ids=[f.__name__ for f in ALL_CRITERIA]
)
def test_criterion(criterion):
    result = criterion()
    print(result.line())
    assert result.passed, result.line()
