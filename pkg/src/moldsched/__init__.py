"""Makespan approximation for monotone moldable jobs."""
