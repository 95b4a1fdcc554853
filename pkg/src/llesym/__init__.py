"""Exact verification engine for the symmetries of the Levy-Leblond equation."""
