"""Exact computer algebra for generalised geometry with B-fields."""
