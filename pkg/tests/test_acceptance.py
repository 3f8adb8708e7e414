import pytest

from quasiquantal.scenario import CRITERIA, run_criteria, verify


FAST = [1, 10, 11]


def test_criteria_are_numbered():
    assert sorted(CRITERIA) == list(range(1, 14))


@pytest.mark.parametrize('number', FAST)
def test_fast_criteria_pass(number):
    table = run_criteria([number])
    assert len(table) > 0
    assert (table['criterion'] == number).all()
    assert (table['verdict'] == 'PASS').all(), table.to_string()


@pytest.mark.slow
@pytest.mark.parametrize('number', [n for n in range(1, 14) if n not in FAST])
def test_remaining_criteria_pass(number):
    table = run_criteria([number])
    assert len(table) > 0
    assert (table['verdict'] == 'PASS').all(), table.to_string()


@pytest.mark.slow
def test_raised_caustic_threshold_fails_verify(capsys):
    assert verify(criteria=[2], caustic_threshold=10.0) == 1
    assert 'FAIL' in capsys.readouterr().out


def test_unknown_criterion():
    with pytest.raises(KeyError):
        run_criteria([0])


def test_verify_listing(capsys):
    assert verify(list_only=True) == 0
    assert 'Clebsch class solutions' in capsys.readouterr().out
