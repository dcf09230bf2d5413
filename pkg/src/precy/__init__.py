"""precy: exact-rational workbench for pre-Calabi-Yau algebras and homotopy
double Poisson gebras — roundabout combinatorics, sign formulas, structure
equations, homotopy transfer, infinity-morphisms, and twisting."""

__version__ = "0.1.0"
