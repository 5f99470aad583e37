"""modalkit: a finite-model workbench for propositional and quantified
modal logic over explicit Kripke models.

The package evaluates formulas on finite models, decides scheme validity by
exhaustive instantiation, pairs the classical axiom schemes with their frame
properties (and the Barcan schemes with domain monotonicity), and searches
bounded model spaces for countermodels with machine-checkable certificates.
"""

from .formula import (And, Box, BoundVar, Dia, Eq, Exists, Forall, Formula,
                      FORMATS, Iff, Imp, Not, Or, PredAtom, PropAtom,
                      RigidConst, SchemeVar, StrictImp, Term, bind_free,
                      const_names, free_vars, is_closed, is_propositional,
                      pred_symbols, prop_atoms, render, scheme_vars)
from .parser import ParseError, SourceSpan, parse
from .model import (DomainFrame, DomainMonotonicity, FlexiblePred, FoModel,
                    FRAME_PROPERTIES, Frame, ModelError, PropModel,
                    RigidPred, domain_frame_from_dict, domain_monotonicity,
                    frame_from_dict, frame_property, is_total,
                    load_domain_frame, load_frame, load_model,
                    model_from_dict, model_to_dict)
from .semantics import (ArityMismatch, BfReadings, Budget,
                        DEFAULT_EVAL_BUDGET, EvalError, NotPropositional,
                        ResourceLimit, UnboundScheme, UnboundVar,
                        UnknownSymbol, Verdict, bf_readings, evaluate,
                        fo_scheme_valid, frame_valid, meta_implies,
                        scheme_valid, valid)
from .correspondence import (AXIOM_IDS, AXIOM_PROPERTY, AXIOM_SCHEMES,
                             BF_SCHEME, CBF_SCHEME, axiom_report,
                             axiom_scheme, barcan_report, refute_on_frame)
from .search import (CONSTRAINT_NAMES, FO_WORLD_CEILING, PROP_WORLD_CEILING,
                     SearchResult, SearchSpec, barcan_sweep,
                     bf_agreement_sweep, enumerate_frames,
                     find_barcan_divergence, find_countermodel,
                     find_deduction_gap, find_fo_countermodel,
                     frame_from_mask, frame_mask)

__version__ = "0.1.0"

__all__ = [
    # formula
    "Formula", "Term", "PropAtom", "SchemeVar", "PredAtom", "BoundVar",
    "RigidConst", "Eq", "Not", "Box", "Dia", "And", "Or", "Imp", "Iff",
    "StrictImp", "Forall", "Exists", "FORMATS", "render", "parse",
    "prop_atoms", "scheme_vars", "pred_symbols", "const_names", "free_vars",
    "is_propositional", "is_closed", "bind_free",
    # parser
    "ParseError", "SourceSpan",
    # model
    "Frame", "PropModel", "DomainFrame", "FoModel", "FlexiblePred",
    "RigidPred", "ModelError", "FRAME_PROPERTIES", "frame_property",
    "is_total", "DomainMonotonicity", "domain_monotonicity",
    "model_from_dict", "frame_from_dict", "domain_frame_from_dict",
    "model_to_dict", "load_model", "load_frame", "load_domain_frame",
    # semantics
    "evaluate", "valid", "scheme_valid", "frame_valid", "meta_implies",
    "fo_scheme_valid", "bf_readings", "BfReadings", "Verdict", "Budget",
    "DEFAULT_EVAL_BUDGET", "EvalError", "UnboundScheme", "UnboundVar",
    "UnknownSymbol", "ArityMismatch", "NotPropositional", "ResourceLimit",
    # correspondence
    "AXIOM_IDS", "AXIOM_SCHEMES", "AXIOM_PROPERTY", "axiom_scheme",
    "BF_SCHEME", "CBF_SCHEME", "axiom_report", "barcan_report",
    "refute_on_frame",
    # search
    "SearchSpec", "SearchResult", "CONSTRAINT_NAMES", "PROP_WORLD_CEILING",
    "FO_WORLD_CEILING", "enumerate_frames", "frame_from_mask", "frame_mask",
    "find_countermodel", "find_fo_countermodel", "find_barcan_divergence",
    "find_deduction_gap", "barcan_sweep", "bf_agreement_sweep",
]
