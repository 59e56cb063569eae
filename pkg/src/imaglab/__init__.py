"""Imaginarity as a resource: measures, Kraus channels, decay and (de-)imaginary power."""
from .channels import KrausChannel, build
from .decay import DecayFormula, decay_closed_form, decay_numeric, verify_formula
from .measures import MeasureKind, measure
from .power import (PowerFormula, deimaginary_power_closed_form, deimaginary_power_numeric,
                    imaginary_power_estimate, verify_power_formula)

__version__ = "0.1.0"
