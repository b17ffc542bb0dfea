"""netopt: network optimization models under diverse uncertain parameters.

The library reduces fuzzy / rough / interval type-2 fuzzy / random-fuzzy /
rough-fuzzy / uncertain network models to crisp programs, solves them with
exact desk-scale solvers or metaheuristics, and ships the bundled instance
data plus a reproduction harness for the published result tables.
"""

__version__ = "0.1.0"
