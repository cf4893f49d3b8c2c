"""Nilmetric Workbench - Source Package"""
