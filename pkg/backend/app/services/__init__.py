"""Flows, foliations, integration and the detector built on them."""
