"""
Theta-constant rank criteria for 2-normality of polarized abelian varieties
"""

__version__ = "1.0.0"

from thetanorm.core.runner import run_cli
from thetanorm.utils.exceptions import *

__all__ = ['run_cli']
