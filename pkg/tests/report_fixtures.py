from arrchess.core import RuleSet
from arrchess.selfplay import CellStats, Mode


def stats_fixture():
    return [
        CellStats("A", 6, Mode.RUN1, RuleSet.STANDARD, 10, 3, 2, 5),
        CellStats("A", 6, Mode.RUN1, RuleSet.ARR, 10, 3, 4, 3),
        CellStats("C", 6, Mode.RUN2, RuleSet.ARR, 4, 0, 0, 4, invalid=1, aborted=True),
    ]
