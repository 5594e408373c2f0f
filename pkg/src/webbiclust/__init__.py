"""Coherent biclustering of user x page access matrices.

Pipeline: clickstream ingestion -> two-way K-means seeding -> greedy
ACV-maximizing seed growth -> genetic-algorithm optimization -> reports.
"""

from .ingest import AccessMatrix, ParseError, build_access_matrix, filter_sessions, parse_sessions
from .metrics import Bicluster, OverlapReport, acv, fitness, overlap_degree, pearson, volume
from .seeding import SeedingConfig, form_seeds, kmeans, two_way_seeds
from .greedy import StageTrace, enlarge, grow_all, refine
from .evolve import GaConfig, GaHistory, crossover, decode, encode, mutate, run_ga, select_rws
from .synth import ImplantSpec, SyntheticData, generate, jaccard, score_recovery

__all__ = [
    "AccessMatrix",
    "Bicluster",
    "GaConfig",
    "GaHistory",
    "ImplantSpec",
    "OverlapReport",
    "ParseError",
    "SeedingConfig",
    "StageTrace",
    "SyntheticData",
    "acv",
    "build_access_matrix",
    "crossover",
    "decode",
    "encode",
    "enlarge",
    "filter_sessions",
    "fitness",
    "form_seeds",
    "generate",
    "grow_all",
    "jaccard",
    "kmeans",
    "mutate",
    "overlap_degree",
    "parse_sessions",
    "pearson",
    "refine",
    "run_ga",
    "score_recovery",
    "select_rws",
    "two_way_seeds",
    "volume",
]
