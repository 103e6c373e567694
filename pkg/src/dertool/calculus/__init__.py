"""Derivation calculus: classification, exp/log correspondence, certificates, grading."""
