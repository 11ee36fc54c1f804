"""Built-in case-study scenarios: offender monitoring, hospital triage,
and the judicial process."""

from .judicial import (
    JudicialParams,
    fold_domains,
    fold_mode,
    good_behaviour,
    judicial_complex,
    judicial_mode,
    judicial_phi,
    judicial_scenario,
    judicial_space,
    stable_domains,
)
from .offender import (
    offender_complex,
    offender_cover,
    offender_interventions,
    offender_phi,
    offender_scenario,
    offender_space,
    ramp,
)
from .triage import (
    BUSY_THRESHOLD,
    QUIET_THRESHOLD,
    TriageNode,
    TriageTree,
    load_tree,
    load_tree_file,
    triage_advance,
    triage_decide,
    validate_tree,
)

__all__ = [
    "JudicialParams",
    "fold_domains",
    "fold_mode",
    "good_behaviour",
    "judicial_complex",
    "judicial_mode",
    "judicial_phi",
    "judicial_scenario",
    "judicial_space",
    "stable_domains",
    "offender_complex",
    "offender_cover",
    "offender_interventions",
    "offender_phi",
    "offender_scenario",
    "offender_space",
    "ramp",
    "BUSY_THRESHOLD",
    "QUIET_THRESHOLD",
    "TriageNode",
    "TriageTree",
    "load_tree",
    "load_tree_file",
    "triage_advance",
    "triage_decide",
    "validate_tree",
]
