"""Normality and divisor class groups of monoids given by monomial relations."""

from .classgroup import class_group
from .criteria import is_normal
from .exact_linalg import AbelianGroupInvariants, smith_normal_form
from .presentation import Presentation, normalize, parse_presentation

__all__ = ["AbelianGroupInvariants", "Presentation", "class_group", "is_normal",
           "normalize", "parse_presentation", "smith_normal_form"]
__version__ = "0.1.0"
