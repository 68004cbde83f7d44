"""The corpus of Pfaffian systems used by the property suites."""
from pathlib import Path

from edsaffine.pfaffian import EXAMPLE_B_CHART, PfaffianSystem, example_b_coframe, load_fixture

FIXTURES = Path(__file__).parent / "fixtures"

NAMES = sorted(p.stem for p in FIXTURES.glob("*.txt"))
RANDOM = [n for n in NAMES if n.startswith("random_integrable")]


def load(name):
    if name == "example_b_first_pair":
        w = example_b_coframe()
        return PfaffianSystem(EXAMPLE_B_CHART, [w[0], w[1]])
    return load_fixture(FIXTURES / f"{name}.txt")


ALL = NAMES + ["example_b_first_pair"]
