"""Enumeration types for hybridfh data models."""

from enum import Enum


class Scheme(str, Enum):
    HYBRID = "hybrid"
    CENTRALIZED = "centralized"
    DISTRIBUTED = "distributed"


class GroupingMethod(str, Enum):
    KMEANS = "kmeans"
    LSF = "lsf"
    RANDOM = "random"
    EXHAUSTIVE = "exhaustive"


class AllocMode(str, Enum):
    EPA = "epa"
    OPA = "opa"


class ExperimentMode(str, Enum):
    CAPACITY_LIMITED = "capacity_limited"
    SERVE_ALL_K = "serve_all_K"


class SweepAxis(str, Enum):
    FH = "fh"
    L = "L"


class Objective(str, Enum):
    GEOMEAN = "geomean"
    GROUP_PRODUCTS = "group_products"
