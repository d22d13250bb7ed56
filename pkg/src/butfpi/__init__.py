"""BUTF, an untyped functional array language, translated into a broadcast pi-calculus.

The package has three layers:

* ``butfpi.butf`` -- the source language: abstract syntax, a concrete text
  syntax, and a deterministic call-by-value small-step evaluator.
* ``butfpi.epi`` -- the target calculus: polyadic channels with composite
  names (``h.len``, ``h.3``, ...), atomic broadcast, and a reduction engine
  that labels every step important or administrative.
* ``butfpi.translate`` / ``butfpi.correspondence`` / ``butfpi.cost`` -- the
  compositional translation, value read-back with step accounting, and the
  work/span measurements built on top of both.

``butfpi.cli`` wires everything into a command-line tool.
"""

__version__ = "0.1.0"
