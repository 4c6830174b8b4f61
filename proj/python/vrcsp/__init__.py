"""Vehicle routing and crew scheduling.

Instances, plans and schedules travel as JSON text in the same format the
``vrcsp`` command-line tool reads and writes.
"""

import json

from . import _vrcsp
from ._vrcsp import (
    InfeasibleError,
    InputError,
    cost_stage1,
    cost_stage2,
    emit_lp,
    gantt_svg,
    generate,
    route,
    validate,
)

__all__ = [
    "InfeasibleError",
    "InputError",
    "cost_stage1",
    "cost_stage2",
    "emit_lp",
    "gantt_svg",
    "generate",
    "route",
    "schedule",
    "validate",
]


def schedule(instance, plan, **options):
    """Run the crew-scheduling search.

    Returns ``(schedule_json, stats)``; ``schedule_json`` is None when no
    feasible schedule was found. Options: alg, time_limit, max_iterations,
    seed, regulation ("l1", "l1l2", "l1l3"), crew_max, restarts.
    """
    text, stats = _vrcsp.schedule(instance, plan, **options)
    return text, json.loads(stats)
