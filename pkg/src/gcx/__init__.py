"""gcx: exact symbolic engine for decorated graph complexes.

Decorated graph complexes over a Poincare-duality pairing space: oriented
graph enumeration, the twisted differential and Lie bracket, Maurer-Cartan
calculus on the complete filtered dg Lie algebra, and cohomology via exact
sparse elimination.  See README.md for the CLI.
"""

__version__ = "0.1.0"
