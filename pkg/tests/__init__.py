"""
Tests package for the pts-curation project.
"""
