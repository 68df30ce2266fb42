"""Every bundled row, solved from scratch, agrees with its stored expectation."""
import pytest

from nichols_lattice import catalog


def _rows():
    out = []
    for e in catalog.all_rows():
        marks = []
        if e.id == "r3/row13b":
            marks.append(pytest.mark.xfail(strict=True, reason="stored family violates condition (7) after reflection"))
        out.append(pytest.param(e, id=e.id, marks=marks))
    return out


@pytest.mark.parametrize("entry", _rows())
def test_row_matches_solver(entry):
    check = catalog.check_row(entry)
    assert check.ok, check.summary()

