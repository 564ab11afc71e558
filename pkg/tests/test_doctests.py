import doctest

import pytest

import wden.estimator
import wden.weights
import wden.kernel


@pytest.mark.parametrize("module", [wden.estimator, wden.weights, wden.kernel])
def test_docstring_examples(module):
    assert doctest.testmod(module).failed == 0
