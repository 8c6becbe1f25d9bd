"""Tests for dynlab"""
