"""Pipelines chain nodes into the experiments run from main.py"""
