"""Constants shared across odhall."""

from .io import *
from .numerics import *
