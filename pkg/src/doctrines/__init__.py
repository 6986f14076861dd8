"""Doctrines as finite tables over finite category charts.

Fibered posets with reindexing, exhaustive checkers for the strict and
biased elementary axioms, and table-level constructions of the product
and quotient completions.
"""
