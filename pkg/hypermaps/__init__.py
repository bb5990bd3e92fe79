"""Strongly symmetric generating pairs, chirality statistics and hypermap censuses for small simple groups."""
