"""Pydantic models for ConeLab."""

from conelab.models.base import (
    CSV_COLUMNS,
    BootstrapCertificate,
    BootstrapInstance,
    DecayCertificate,
    ExponentEstimate,
    FlowReport,
    InequalityReport,
    MonotoneSeq,
    ResultRecord,
    RunReport,
    Series,
    StepRecord,
    SuiteResult,
    ThetaSeq,
    VerifiedInequality,
)

__all__ = [
    "CSV_COLUMNS",
    "BootstrapCertificate",
    "BootstrapInstance",
    "DecayCertificate",
    "ExponentEstimate",
    "FlowReport",
    "InequalityReport",
    "MonotoneSeq",
    "ResultRecord",
    "RunReport",
    "Series",
    "StepRecord",
    "SuiteResult",
    "ThetaSeq",
    "VerifiedInequality",
]
