"""Surface syntax, pretty-printing and file formats."""
