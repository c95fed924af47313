"""Nodes are semantically related functions chained by the pipelines"""
