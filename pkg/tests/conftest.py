import sys
from fractions import Fraction
from pathlib import Path

import hypothesis.strategies as st
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from flatsurgery.exactnum import CNum, Scalar, field  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

F23 = field(2, 3)

small_fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)


@st.composite
def scalars(draw, spec=F23):
    return Scalar(spec, [draw(small_fracs) for _ in range(spec.degree)])


@st.composite
def nonzero_scalars(draw, spec=F23):
    x = draw(scalars(spec))
    return x if not x.is_zero() else Scalar.rational(Fraction(1), spec)


@st.composite
def cnums(draw, spec=F23):
    return CNum(draw(scalars(spec)), draw(scalars(spec)))


# acceptance criteria report: number -> (passed, detail)
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
