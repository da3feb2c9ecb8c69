"""Time-symmetric quantum counterfactual probabilities.

Thin Python layer over the C++ core: ABL, Born (predictive and
retrodictive) and Kastner's rule, plus the Monte Carlo postselection
oracle that checks them.
"""

from ._core import (
    Ket,
    Measurement,
    Scenario,
    TsqcError,
    TwoState,
    __version__,
    abl,
    born_predictive,
    born_retrodictive,
    counterfactual_report,
    generator,
    inner,
    kastner_rule,
    load_scenario,
    mixture_at_t,
    parse_scenario,
    quantum_raffle,
    random_scenario,
    run_pre_post_selected,
    three_holes,
    verify,
)

__all__ = [
    "Ket",
    "Measurement",
    "Scenario",
    "TsqcError",
    "TwoState",
    "__version__",
    "abl",
    "born_predictive",
    "born_retrodictive",
    "counterfactual_report",
    "generator",
    "inner",
    "kastner_rule",
    "load_scenario",
    "mixture_at_t",
    "parse_scenario",
    "quantum_raffle",
    "random_scenario",
    "run_pre_post_selected",
    "three_holes",
    "verify",
]
