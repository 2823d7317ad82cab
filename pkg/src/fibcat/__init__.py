"""Finite categories, indexed categories and their Grothendieck constructions,
fibred (co)limits, monoidal and tractable structure, and Dialectica-style closure."""
from .errors import *  # noqa: F401,F403
from .fincat import (FinCat, FinFunctor, FinNatTrans, ValidationReport, make_category,
                     poset_category, validate_category, validate_functor, validate_nat_trans)
from .indexed import IndexedCat, sections, validate_indexed
from .groth import grothendieck
from .fibcolim import fibred_colimit, fibred_limit

__version__ = "0.1.0"
