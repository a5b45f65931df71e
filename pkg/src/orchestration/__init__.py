"""Independent re-checking of derivation trees."""
