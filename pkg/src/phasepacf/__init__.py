"""Verblunsky coefficients (PACF) of ARMA and FARIMA processes from phase-coefficient series."""

from .models import ModelSpec, CoeffTable, coeff_table, validate, autocovariance
from .policy import TruncationPolicy
from .phase import BetaTable, beta, beta_table_for
from .verblunsky import PacfResult, PredictorTable, alpha, pacf, predictor_coeffs
from .oracle import levinson

__all__ = [
    "ModelSpec", "CoeffTable", "coeff_table", "validate", "autocovariance",
    "TruncationPolicy", "BetaTable", "beta", "beta_table_for",
    "PacfResult", "PredictorTable", "alpha", "pacf", "predictor_coeffs", "levinson",
]
