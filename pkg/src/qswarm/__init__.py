"""HCLPSO with pluggable low-discrepancy point streams, a seeded benchmark
suite, and Friedman/Nemenyi comparison tooling."""

__version__ = "0.1.0"
