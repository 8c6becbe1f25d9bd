"""Experiment drivers, reports and output bundles"""
