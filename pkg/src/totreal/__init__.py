"""Totally-real and Lagrangian geometry in C^m."""
