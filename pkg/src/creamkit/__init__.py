"""creamkit: CREAM-based human reliability assessment for radiograph
interpretation tasks."""

from .extended import (DemandProfile, ExtendedResult, adjusted_cfp, analyze,
                       aggregate_failure_probability, assign_cff,
                       demand_profile, rank_critical)
from .hta import (CfAssignment, HtaParseError, TaskNode, TaskTree,
                  collect_assignments, parse_hta, serialize_hta, validate_hta)
from .screening import (CombinedScore, CpcAssessment, ScreeningResult,
                        determine_control_mode, make_assessment,
                        score_assessment, screen)
from .taxonomy import (CognitiveFunction, ControlMode, Effect, Taxonomy,
                       TaxonomyError, default_taxonomy, load_taxonomy,
                       nominal_cfp, serialize_taxonomy)
from .whatif import WhatIfDelta, best_improvement, single_cpc_sweep

__version__ = "0.1.0"
