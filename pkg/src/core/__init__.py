"""Kernel data: terms, reduction, PTS specifications, contexts and derivation trees."""
