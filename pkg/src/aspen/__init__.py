"""aspen: controlled natural language to answer set programs, end to end.

The package covers the full path from restricted English specifications to
solved answer sets: a CNL parser and compiler, a desk-scale ground solver
with bitmask enumeration kernels, a bounded uniform-equivalence checker,
a template-driven dataset generator, MT-style evaluation metrics, and a
pipeline that plugs in external sentence translators over stdio.
"""

__version__ = "0.1.0"
