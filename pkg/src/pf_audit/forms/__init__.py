"""Hypersurface families, Griffiths-Dwork reduction and Picard-Fuchs certificates."""
