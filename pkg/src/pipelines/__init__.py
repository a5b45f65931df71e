"""Typing pipelines: T′ inference, well-formedness, elaboration into T, curation and the CLI."""
