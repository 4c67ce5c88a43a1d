"""Shared helpers for the pipeline notebooks."""


def load():
    return [1, 2, 3]
